"""Freely reduced words in a free group of finite rank.

Letters are stored as nonzero ints: ``i`` is the i-th generator and ``-i``
its inverse.  Text form uses ``a, b, c, ...`` for generators and the
uppercase letter for the inverse; ``a3``-style tokens and ``^k`` exponents
are also accepted by :func:`parse`.
"""

from __future__ import annotations

import random
import re
import string
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

DEFAULT_RANK = 2
MAX_LENGTH = 10_000

_A, _B = 1, 2


class WordError(ValueError):
    """Malformed word text, rank mismatch or length overflow."""


def set_max_length(limit: int) -> None:
    """Change the global word-length cap (default 10**4)."""
    global MAX_LENGTH
    if limit < 1:
        raise ValueError("length cap must be positive")
    MAX_LENGTH = limit


def _check_length(n: int) -> None:
    if n > MAX_LENGTH:
        raise WordError(f"word length {n} exceeds cap {MAX_LENGTH}")


class ReducedWord:
    """Immutable freely reduced word.  Construct with :func:`word` or :func:`parse`."""

    __slots__ = ("letters", "rank", "_hash")

    def __init__(self, letters: Sequence[int] = (), rank: int = DEFAULT_RANK):
        letters = tuple(letters)
        for x in letters:
            if x == 0 or abs(x) > rank:
                raise WordError(f"letter {x} outside rank {rank}")
        for x, y in zip(letters, letters[1:]):
            if x == -y:
                raise WordError("letters are not freely reduced")
        _check_length(len(letters))
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "_hash", hash((rank, letters)))

    @classmethod
    def _trusted(cls, letters: tuple, rank: int) -> "ReducedWord":
        _check_length(len(letters))
        w = object.__new__(cls)
        object.__setattr__(w, "letters", letters)
        object.__setattr__(w, "rank", rank)
        object.__setattr__(w, "_hash", hash((rank, letters)))
        return w

    def __setattr__(self, name, value):
        raise AttributeError("ReducedWord is immutable")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ReducedWord):
            return NotImplemented
        return self.rank == other.rank and self.letters == other.letters

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "ReducedWord") -> bool:
        return sort_key(self) < sort_key(other)

    def __mul__(self, other: "ReducedWord") -> "ReducedWord":
        return mul(self, other)

    def __invert__(self) -> "ReducedWord":
        return inv(self)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __repr__(self) -> str:
        return f"ReducedWord({format_word(self)!r})"

    def __str__(self) -> str:
        return format_word(self)

    def __reduce__(self):
        return (ReducedWord, (self.letters, self.rank))


def free_reduce(letters: Iterable[int]) -> list[int]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return out


def word(letters: Iterable[int] = (), rank: int = DEFAULT_RANK) -> ReducedWord:
    """Freely reduce an arbitrary letter sequence into a word."""
    letters = list(letters)
    for x in letters:
        if x == 0 or abs(x) > rank:
            raise WordError(f"letter {x} outside rank {rank}")
    return ReducedWord._trusted(tuple(free_reduce(letters)), rank)


def identity(rank: int = DEFAULT_RANK) -> ReducedWord:
    return ReducedWord._trusted((), rank)


def generator(i: int, rank: int = DEFAULT_RANK) -> ReducedWord:
    return word((i,), rank)


def _same_rank(x: ReducedWord, y: ReducedWord) -> int:
    if x.rank != y.rank:
        raise WordError(f"rank mismatch: {x.rank} vs {y.rank}")
    return x.rank


def mul(x: ReducedWord, y: ReducedWord) -> ReducedWord:
    rank = _same_rank(x, y)
    a, b = x.letters, y.letters
    i, n = 0, min(len(a), len(b))
    la = len(a)
    while i < n and a[la - 1 - i] == -b[i]:
        i += 1
    return ReducedWord._trusted(a[: la - i] + b[i:], rank)


def inv(x: ReducedWord) -> ReducedWord:
    return ReducedWord._trusted(tuple(-c for c in reversed(x.letters)), x.rank)


def power(x: ReducedWord, k: int) -> ReducedWord:
    if k < 0:
        x, k = inv(x), -k
    out = identity(x.rank)
    base = x
    while k:
        if k & 1:
            out = mul(out, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return out


def product(*words: ReducedWord, rank: int | None = None) -> ReducedWord:
    if not words:
        return identity(rank or DEFAULT_RANK)
    out = words[0]
    for w in words[1:]:
        out = mul(out, w)
    return out


def cancellation(x: ReducedWord, y: ReducedWord) -> int:
    """Number of letters cancelled at the junction of x*y."""
    a, b = x.letters, y.letters
    i, n, la = 0, min(len(a), len(b)), len(a)
    while i < n and a[la - 1 - i] == -b[i]:
        i += 1
    return i


def starts_with(w: ReducedWord, p: ReducedWord) -> bool:
    _same_rank(w, p)
    return w.letters[: len(p.letters)] == p.letters


def ends_with(w: ReducedWord, s: ReducedWord) -> bool:
    _same_rank(w, s)
    n = len(s.letters)
    return n == 0 or w.letters[-n:] == s.letters


def a_power(k: int, rank: int = DEFAULT_RANK) -> ReducedWord:
    return ReducedWord._trusted((_A,) * k if k >= 0 else (-_A,) * (-k), rank)


def word_u(n: int, rank: int = DEFAULT_RANK) -> ReducedWord:
    """The commutator a^n b a^-n b^-1 (n >= 2)."""
    if n < 2:
        raise ValueError("word_u needs n >= 2")
    return ReducedWord._trusted((_A,) * n + (_B,) + (-_A,) * n + (-_B,), rank)


def letter_order(rank: int) -> tuple[int, ...]:
    """Canonical letter order a, b, ..., A, B, ... used by searches."""
    return tuple(range(1, rank + 1)) + tuple(-i for i in range(1, rank + 1))


def sort_key(w: ReducedWord) -> tuple:
    order = {x: i for i, x in enumerate(letter_order(w.rank))}
    return (len(w.letters), tuple(order[x] for x in w.letters))


# ---------------------------------------------------------------- text form

_TOKEN = re.compile(r"\s*([a-zA-Z])(\d*)(?:\^(-?\d+))?")


def parse(text: str, rank: int = DEFAULT_RANK) -> ReducedWord:
    """Parse e.g. ``"aabAAB"``, ``"a^2 b a^-2 B"`` or ``"a3 A3^2"``.

    ``""`` and ``"1"`` denote the identity.
    """
    s = text.strip()
    if s in ("", "1"):
        return identity(rank)
    letters: list[int] = []
    pos = 0
    while pos < len(s):
        if s[pos] in " *.":
            pos += 1
            continue
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise WordError(f"malformed token at {pos} in {text!r}")
        ch, digits, exp = m.groups()
        if digits:
            if ch not in "aA":
                raise WordError(f"indexed token must use a/A: {m.group(0)!r}")
            index = int(digits)
            if index < 1:
                raise WordError(f"bad generator index in {text!r}")
        else:
            index = ord(ch.lower()) - ord("a") + 1
        if index > rank:
            raise WordError(f"generator {m.group(0).strip()!r} outside rank {rank}")
        sign = 1 if ch.islower() else -1
        k = int(exp) if exp is not None else 1
        letter = sign * index
        if k < 0:
            letter, k = -letter, -k
        if len(letters) + k > 4 * MAX_LENGTH:
            raise WordError("word text too long")
        letters.extend([letter] * k)
        pos = m.end()
    return word(letters, rank)


def _letter_text(x: int, rank: int) -> str:
    i = abs(x)
    if rank <= 26:
        ch = string.ascii_lowercase[i - 1]
        return ch if x > 0 else ch.upper()
    return f"a{i}" if x > 0 else f"A{i}"


def format_word(w: ReducedWord) -> str:
    if not w.letters:
        return "1"
    sep = "" if w.rank <= 26 else " "
    return sep.join(_letter_text(x, w.rank) for x in w.letters)


# ------------------------------------------------------------ enumeration

def sphere(radius: int, rank: int = DEFAULT_RANK) -> Iterator[ReducedWord]:
    """All reduced words of exact length ``radius`` in canonical order."""
    order = letter_order(rank)

    def grow(prefix: tuple):
        if len(prefix) == radius:
            yield ReducedWord._trusted(prefix, rank)
            return
        last = prefix[-1] if prefix else 0
        for x in order:
            if x != -last:
                yield from grow(prefix + (x,))

    yield from grow(())


def ball(radius: int, rank: int = DEFAULT_RANK) -> Iterator[ReducedWord]:
    for r in range(radius + 1):
        yield from sphere(r, rank)


def extensions(prefix: ReducedWord, length: int) -> Iterator[ReducedWord]:
    """Reduced words of total length ``length`` starting with ``prefix``."""
    order = letter_order(prefix.rank)
    rank = prefix.rank

    def grow(cur: tuple):
        if len(cur) == length:
            yield ReducedWord._trusted(cur, rank)
            return
        last = cur[-1] if cur else 0
        for x in order:
            if x != -last:
                yield from grow(cur + (x,))

    if len(prefix) <= length:
        yield from grow(prefix.letters)


def random_word(rng: random.Random, length: int, rank: int = DEFAULT_RANK,
                start: ReducedWord | None = None) -> ReducedWord:
    """Uniform random reduced word of the given length (optionally extending ``start``)."""
    letters = list(start.letters) if start is not None else []
    order = letter_order(rank)
    while len(letters) < length:
        x = rng.choice(order)
        if letters and x == -letters[-1]:
            continue
        letters.append(x)
    return ReducedWord._trusted(tuple(letters), rank)


# ---------------------------------------------------------- decomposition

@dataclass(frozen=True)
class StructuralForm:
    """One way of reading t as u_m v u_n^-1, u_m v, v u_n^-1 or u_m u_n^-1.

    ``first`` is the index of the leading u (None if absent), ``last`` the
    index of the trailing u^-1.  For shape "uu" the middle is None.
    """

    shape: str
    first: int | None
    last: int | None
    middle: ReducedWord | None

    @property
    def middle_nontrivial(self) -> bool:
        return self.middle is not None and len(self.middle) > 0

    @property
    def middle_clean(self) -> bool:
        """Middle does not start with b and does not end with b^-1."""
        if self.middle is None or not self.middle.letters:
            return True
        return self.middle.letters[0] != _B and self.middle.letters[-1] != -_B

    def rebuild(self, rank: int = DEFAULT_RANK) -> ReducedWord:
        parts = []
        if self.first is not None:
            parts.append(word_u(self.first, rank))
        if self.middle is not None:
            parts.append(self.middle)
        if self.last is not None:
            parts.append(inv(word_u(self.last, rank)))
        return product(*parts, rank=rank)


def leading_u_index(t: ReducedWord) -> int | None:
    """n such that t literally starts with u_n, if any (unique)."""
    L = t.letters
    k = 0
    while k < len(L) and L[k] == _A:
        k += 1
    if k < 2 or len(L) < 2 * k + 2:
        return None
    if L[k] == _B and L[k + 1: 2 * k + 1] == (-_A,) * k and L[2 * k + 1] == -_B:
        return k
    return None


def trailing_u_index(t: ReducedWord) -> int | None:
    """n such that t literally ends with u_n^-1 = b a^n b^-1 a^-n, if any."""
    L = t.letters
    k = 0
    while k < len(L) and L[len(L) - 1 - k] == -_A:
        k += 1
    if k < 2 or len(L) < 2 * k + 2:
        return None
    n = len(L)
    if (L[n - k - 1] == -_B and L[n - 2 * k - 1: n - k - 1] == (_A,) * k
            and L[n - 2 * k - 2] == _B):
        return k
    return None


def _uu_form(t: ReducedWord) -> tuple[int, int] | None:
    """(n1, n2) if t = a^n1 b a^(n2-n1) b^-1 a^-n2 with n1 != n2, both >= 2."""
    L = t.letters
    i = 0
    while i < len(L) and L[i] == _A:
        i += 1
    n1 = i
    if n1 < 2 or i >= len(L) or L[i] != _B:
        return None
    i += 1
    j = i
    while j < len(L) and abs(L[j]) == _A and L[j] == L[i]:
        j += 1
    if j == i:
        return None
    d = (j - i) * (1 if L[i] == _A else -1)
    if j >= len(L) or L[j] != -_B:
        return None
    rest = L[j + 1:]
    n2 = n1 + d
    if n2 < 2 or rest != (-_A,) * n2:
        return None
    return n1, n2


def decompose(t: ReducedWord) -> tuple[StructuralForm, ...]:
    """Every structural reading of t, in the order uvu, uv, vu, uu."""
    rank = t.rank
    out: list[StructuralForm] = []
    m = leading_u_index(t)
    n = trailing_u_index(t)
    L = t.letters
    if m is not None and n is not None and 2 * m + 2 + 2 * n + 2 < len(L):
        mid = ReducedWord._trusted(L[2 * m + 2: len(L) - 2 * n - 2], rank)
        out.append(StructuralForm("uvu", m, n, mid))
    if m is not None:
        out.append(StructuralForm("uv", m, None, ReducedWord._trusted(L[2 * m + 2:], rank)))
    if n is not None:
        out.append(StructuralForm("vu", None, n, ReducedWord._trusted(L[: len(L) - 2 * n - 2], rank)))
    uu = _uu_form(t)
    if uu is not None:
        out.append(StructuralForm("uu", uu[0], uu[1], None))
    return tuple(out)
