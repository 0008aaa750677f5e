"""Finite-index normal subgroup towers and their marked cosets.

A tower exposes level projections ``project(g, n)`` into Γ/Γ_n, encoded as
:class:`CosetId`, together with the marked elements γ_n ∈ Γ_{n-1} \\ Γ_n.
The set C_n is the preimage of the coset γ_nΓ_n.
"""

from __future__ import annotations

import random
from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Any

from . import words as W


class DepthError(ValueError):
    """A level beyond the tower's configured max_depth was requested."""


@dataclass(frozen=True, order=True)
class CosetId:
    level: int
    id: int

    def __str__(self) -> str:
        return f"{self.level}:{self.id}"

    @classmethod
    def from_str(cls, text: str) -> "CosetId":
        lvl, ident = text.split(":")
        return cls(int(lvl), int(ident))


# level_of() result when the coset is still trivial at the deepest known level
DEEPER = "deeper"


class QuotientTower(ABC):
    """Interface for a descending chain Γ ⊃ Γ_1 ⊃ Γ_2 ⊃ ..."""

    max_depth: int
    name: str = "tower"

    # ---- group elements
    @abstractmethod
    def identity(self) -> Any: ...

    @abstractmethod
    def op(self, g, h) -> Any: ...

    @abstractmethod
    def inverse(self, g) -> Any: ...

    @abstractmethod
    def parse_element(self, text: str) -> Any: ...

    @abstractmethod
    def format_element(self, g) -> str: ...

    @abstractmethod
    def ball(self, radius: int) -> list: ...

    # ---- quotients
    @abstractmethod
    def _project(self, g, n: int) -> CosetId: ...

    @abstractmethod
    def gamma(self, n: int) -> Any: ...

    @abstractmethod
    def index(self, n: int) -> int: ...

    @abstractmethod
    def coset_mul(self, c: CosetId, d: CosetId) -> CosetId: ...

    @abstractmethod
    def coset_inv(self, c: CosetId) -> CosetId: ...

    @abstractmethod
    def reduce(self, c: CosetId, n: int) -> CosetId: ...

    @abstractmethod
    def children(self, c: CosetId) -> list[CosetId]:
        """All level-(n+1) cosets reducing to c, in a fixed order."""

    @abstractmethod
    def describe(self) -> dict: ...

    # ---- derived operations
    def check_level(self, n: int) -> None:
        if n < 0 or n > self.max_depth:
            raise DepthError(f"level {n} outside [0, {self.max_depth}]")

    def project(self, g, n: int) -> CosetId:
        self.check_level(n)
        return self._project(g, n)

    def identity_coset(self, n: int) -> CosetId:
        return self._project(self.identity(), n)

    def is_trivial(self, c: CosetId) -> bool:
        return c == self.identity_coset(c.level)

    def act(self, g, c: CosetId) -> CosetId:
        """Left translation of a coset by a group element."""
        return self.coset_mul(self.project(g, c.level), c)

    def marked(self, n: int) -> CosetId:
        """The coset γ_nΓ_n."""
        self.check_level(n)
        return self._marked(n)

    def _marked(self, n: int) -> CosetId:
        return self._project(self.gamma(n), n)

    def in_C(self, c: CosetId, n: int) -> bool:
        if c.level < n:
            raise DepthError(f"coset at level {c.level} cannot decide C_{n}")
        return self.reduce(c, n) == self.marked(n)

    def level_of(self, c: CosetId, lowest: int = 2):
        """The unique n in [lowest, c.level] with c in C_n.

        Returns None when c lies in no C_n at any depth (c is nontrivial at
        its own level, so deeper marked cosets are excluded), and DEEPER when
        c is trivial at its level and the answer needs more digits.
        """
        for n in range(lowest, c.level + 1):
            if self.reduce(c, n) == self.marked(n):
                return n
        if self.is_trivial(c):
            return DEEPER
        return None

    def index_jump(self, n: int) -> int:
        return self.index(n + 1) // self.index(n)

    def stable_jump(self, n: int) -> int:
        """A lower bound for [Γ_m : Γ_{m+1}] valid for every m >= n."""
        return self.index_jump(n)

    def cosets_in_C(self, n: int, depth: int) -> list[CosetId]:
        """All level-``depth`` cosets lying in C_n."""
        return self.descendants(self.marked(n), depth)

    def descendants(self, c: CosetId, depth: int) -> list[CosetId]:
        self.check_level(depth)
        layer = [c]
        for _ in range(c.level, depth):
            layer = [d for x in layer for d in self.children(x)]
        return layer

    def all_cosets(self, depth: int) -> list[CosetId]:
        return self.descendants(self.identity_coset(0), depth)

    def random_descendant(self, c: CosetId, depth: int, rng: random.Random) -> CosetId:
        while c.level < depth:
            c = rng.choice(self.children(c))
        return c


# ---------------------------------------------------------------- integers

class IntegerTower(QuotientTower):
    """Γ = ℤ with Γ_n = (pq)^n ℤ and γ_n = (pq)^(n-1)."""

    name = "integer"

    def __init__(self, p: int = 3, q: int = 5, max_depth: int = 6):
        if p == q or p < 3 or q < 3 or not (_is_prime(p) and _is_prime(q)):
            raise ValueError("IntegerTower needs distinct odd primes p, q")
        self.p, self.q, self.max_depth = p, q, max_depth
        self.base = p * q

    def identity(self):
        return 0

    def op(self, g, h):
        return g + h

    def inverse(self, g):
        return -g

    def parse_element(self, text: str) -> int:
        try:
            return int(text.strip())
        except ValueError:
            raise ValueError(f"not an integer: {text!r}") from None

    def format_element(self, g) -> str:
        return str(g)

    def ball(self, radius: int) -> list[int]:
        return list(range(-radius, radius + 1))

    def modulus(self, n: int) -> int:
        return self.base ** n

    def _project(self, g, n):
        return CosetId(n, g % self.base ** n)

    def _marked(self, n):
        return CosetId(n, self.base ** (n - 1) % self.base ** n)

    def gamma(self, n: int) -> int:
        return self.base ** (n - 1)

    def index(self, n: int) -> int:
        return self.base ** n

    def stable_jump(self, n: int) -> int:
        return self.base

    def coset_mul(self, c, d):
        if c.level != d.level:
            raise DepthError("coset levels differ")
        return CosetId(c.level, (c.id + d.id) % self.base ** c.level)

    def coset_inv(self, c):
        return CosetId(c.level, (-c.id) % self.base ** c.level)

    def reduce(self, c, n):
        if n > c.level:
            raise DepthError("cannot reduce to a deeper level")
        return CosetId(n, c.id % self.base ** n)

    def children(self, c):
        self.check_level(c.level + 1)
        m = self.base ** c.level
        return [CosetId(c.level + 1, c.id + k * m) for k in range(self.base)]

    def describe(self) -> dict:
        return {"kind": "integer", "p": self.p, "q": self.q, "max_depth": self.max_depth}


# ------------------------------------------------------------------ Sanov

Mat = tuple  # (a, b, c, d) for [[a, b], [c, d]]


def _mat_mul(x: Mat, y: Mat, m: int) -> Mat:
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % m, (a * f + b * h) % m,
            (c * e + d * g) % m, (c * f + d * h) % m)


class SanovTower(QuotientTower):
    """Congruence quotients of F_2 = <A, B> ⊂ SL(2, ℤ) modulo p^n.

    A = [[1, 2], [0, 1]], B = [[1, 0], [2, 1]].  Cosets are matrices over
    ℤ/p^n encoded as ((a*m + b)*m + c)*m + d with m = p^n.  The image of
    F_2 is all of SL(2, ℤ/p^n) for odd p; :func:`verify_tower` confirms this
    by BFS for small n, and :meth:`children` relies on it.
    """

    name = "sanov"
    rank = 2

    def __init__(self, p: int = 3, max_depth: int = 4):
        if p < 3 or not _is_prime(p):
            raise ValueError("SanovTower needs an odd prime p")
        self.p, self.max_depth = p, max_depth
        self._gens = {1: (1, 2, 0, 1), -1: (1, -2, 0, 1), 2: (1, 0, 2, 1), -2: (1, 0, -2, 1)}
        self._kernel_cache: dict[int, list[Mat]] = {}
        self._index_cache: dict[int, int] = {}
        self._marked_cache = {n: self._encode((1, 2 * p ** (n - 1), 0, 1), n)
                              for n in range(1, max_depth + 1)}

    # elements are reduced words
    def identity(self):
        return W.identity(2)

    def op(self, g, h):
        return W.mul(g, h)

    def inverse(self, g):
        return W.inv(g)

    def parse_element(self, text: str):
        return W.parse(text, 2)

    def format_element(self, g) -> str:
        return W.format_word(g)

    def ball(self, radius: int) -> list:
        return list(W.ball(radius, 2))

    def modulus(self, n: int) -> int:
        return self.p ** n

    def _encode(self, mat: Mat, n: int) -> CosetId:
        m = self.p ** n
        a, b, c, d = (x % m for x in mat)
        return CosetId(n, ((a * m + b) * m + c) * m + d)

    def decode(self, c: CosetId) -> Mat:
        m = self.p ** c.level
        x = c.id
        d = x % m
        x //= m
        cc = x % m
        x //= m
        b = x % m
        a = x // m
        return (a, b, cc, d)

    def matrix(self, g, n: int) -> Mat:
        m = self.p ** n
        return _word_matrix(g.letters, m)

    def _project(self, g, n):
        if getattr(g, "rank", 2) != 2:
            raise W.WordError("SanovTower only supports rank 2")
        return self._encode(_word_matrix(g.letters, self.p ** n), n)

    def _marked(self, n):
        return self._marked_cache[n]

    def gamma(self, n: int):
        return W.a_power(self.p ** (n - 1))

    def coset_mul(self, c, d):
        if c.level != d.level:
            raise DepthError("coset levels differ")
        m = self.p ** c.level
        return self._encode(_mat_mul(self.decode(c), self.decode(d), m), c.level)

    def coset_inv(self, c):
        a, b, cc, d = self.decode(c)
        return self._encode((d, -b, -cc, a), c.level)

    def reduce(self, c, n):
        if n > c.level:
            raise DepthError("cannot reduce to a deeper level")
        if n == c.level:
            return c
        return self._encode(self.decode(c), n)

    def _kernel(self, n: int) -> list[Mat]:
        """Representatives I + p^n X (mod p^(n+1)) of det 1, for n >= 1."""
        if n not in self._kernel_cache:
            p, pn = self.p, self.p ** n
            ks = []
            for x11 in range(p):
                for x12 in range(p):
                    for x21 in range(p):
                        x22 = (-x11) % p
                        ks.append((1 + pn * x11, pn * x12, pn * x21, 1 + pn * x22))
            self._kernel_cache[n] = ks
        return self._kernel_cache[n]

    def _lift(self, mat: Mat, n: int) -> Mat:
        """Lift a det-1 matrix mod p^n to a det-1 matrix mod p^(n+1)."""
        p, pn, m = self.p, self.p ** n, self.p ** (n + 1)
        a, b, c, d = mat
        delta = (1 - (a * d - b * c)) % m
        r = (delta // pn) % p
        if r == 0:
            return mat
        # det(M + p^n E) = det M + p^n (d e11 - c e12 - b e21 + a e22) mod p^(n+1)
        for coef, slot in ((a, 3), (d, 0), (b, 2), (c, 1)):
            if coef % p:
                sgn = 1 if slot in (0, 3) else -1
                e = (r * pow(sgn * coef, -1, p)) % p
                out = list(mat)
                out[slot] = (out[slot] + pn * e) % m
                return tuple(out)
        raise ArithmeticError("matrix is not invertible mod p")

    def children(self, c):
        self.check_level(c.level + 1)
        n = c.level
        if n == 0:
            return sorted(_sl2_elements(self.p, 1, self._gens), key=lambda x: x.id)
        base = self._lift(self.decode(c), n)
        m = self.p ** (n + 1)
        return [self._encode(_mat_mul(base, k, m), n + 1) for k in self._kernel(n)]

    def index(self, n: int) -> int:
        """Order of the image of F_2 in SL(2, ℤ/p^n), by BFS."""
        if n == 0:
            return 1
        if n not in self._index_cache:
            self._index_cache[n] = len(_sl2_elements(self.p, n, self._gens))
        return self._index_cache[n]

    def stable_jump(self, n: int) -> int:
        # [Γ_m : Γ_{m+1}] = p^3 for m >= 1 once the image is full
        return self.p ** 3

    def sl2_order(self, n: int) -> int:
        p = self.p
        return p ** (3 * n) - p ** (3 * n - 2)

    def describe(self) -> dict:
        return {"kind": "sanov", "p": self.p, "max_depth": self.max_depth}


@lru_cache(maxsize=200_000)
def _word_matrix(letters: tuple, m: int) -> Mat:
    if len(letters) > 8:
        half = len(letters) // 2
        return _mat_mul(_word_matrix(letters[:half], m), _word_matrix(letters[half:], m), m)
    a, b, c, d = 1, 0, 0, 1
    for x in letters:
        if x == 1:
            b, d = (b + 2 * a) % m, (d + 2 * c) % m
        elif x == -1:
            b, d = (b - 2 * a) % m, (d - 2 * c) % m
        elif x == 2:
            a, c = (a + 2 * b) % m, (c + 2 * d) % m
        else:
            a, c = (a - 2 * b) % m, (c - 2 * d) % m
    return (a % m, b % m, c % m, d % m)


_SL2_CACHE: dict[tuple[int, int], list[CosetId]] = {}


def _sl2_elements(p: int, n: int, gens: dict) -> list[CosetId]:
    key = (p, n)
    if key in _SL2_CACHE:
        return _SL2_CACHE[key]
    m = p ** n

    def enc(x):
        a, b, c, d = x
        return ((a * m + b) * m + c) * m + d

    start = (1, 0, 0, 1)
    seen = {enc(start)}
    queue = deque([start])
    gmats = [tuple(v % m for v in g) for g in gens.values()]
    while queue:
        x = queue.popleft()
        for g in gmats:
            y = _mat_mul(x, g, m)
            e = enc(y)
            if e not in seen:
                seen.add(e)
                queue.append(y)
    out = [CosetId(n, e) for e in sorted(seen)]
    _SL2_CACHE[key] = out
    return out


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def make_tower(kind: str, p: int = 3, q: int = 5, max_depth: int | None = None) -> QuotientTower:
    kind = kind.lower()
    if kind == "integer":
        return IntegerTower(p, q, 6 if max_depth is None else max_depth)
    if kind == "sanov":
        return SanovTower(p, 4 if max_depth is None else max_depth)
    raise ValueError(f"unknown tower kind {kind!r}")


# -------------------------------------------------------------- verification

@dataclass
class AxiomResult:
    name: str
    passed: bool
    detail: str = ""


def verify_tower(t: QuotientTower, n_max: int, ball_radius: int = 4,
                 square_condition: bool = True) -> list[AxiomResult]:
    """Check the tower axioms for levels up to n_max by direct computation."""
    n_max = min(n_max, t.max_depth)
    results: list[AxiomResult] = []
    bad = [n for n in range(1, n_max + 1) if t.project(t.gamma(n), n - 1) != t.identity_coset(n - 1)]
    results.append(AxiomResult("gamma in previous subgroup", not bad, f"failing levels {bad}" if bad else ""))

    bad = [n for n in range(1, n_max + 1) if t.project(t.gamma(n), n) == t.identity_coset(n)]
    results.append(AxiomResult("gamma not in own subgroup", not bad, f"failing levels {bad}" if bad else ""))

    bad = [n for n in range(1, n_max + 1) if t.project(t.gamma(n), n) != t.marked(n)]
    results.append(AxiomResult("marked coset matches gamma", not bad, f"failing levels {bad}" if bad else ""))

    if square_condition:
        bad = [n for n in range(1, n_max + 1)
               if t.project(t.op(t.gamma(n), t.gamma(n)), n) == t.identity_coset(n)]
        results.append(AxiomResult("gamma squared not in own subgroup", not bad,
                                   f"failing levels {bad}" if bad else ""))

    bad = []
    for g in t.ball(ball_radius):
        for n in range(1, n_max + 1):
            if t.reduce(t.project(g, n), n - 1) != t.project(g, n - 1):
                bad.append((t.format_element(g), n))
    results.append(AxiomResult("compatibility on ball", not bad, f"{len(bad)} failures" if bad else ""))

    idx = [t.index(n) for n in range(0, n_max + 1)]
    inc = all(x < y for x, y in zip(idx, idx[1:]))
    results.append(AxiomResult("index strictly increasing", inc, f"indices {idx}"))
    jumps = [y // x for x, y in zip(idx[1:], idx[2:])]
    results.append(AxiomResult("index jump above 2", all(j > 2 for j in jumps), f"jumps {jumps}"))

    bad = []
    for n in range(1, n_max + 1):
        kids = t.children(t.identity_coset(n - 1))
        if len(kids) != t.index(n) // t.index(n - 1):
            bad.append(n)
    results.append(AxiomResult("children enumerate fibres", not bad, f"failing levels {bad}" if bad else ""))

    if isinstance(t, SanovTower):
        bad = [n for n in range(1, n_max + 1) if t.index(n) != t.sl2_order(n)]
        results.append(AxiomResult("image is all of SL2", not bad, f"failing levels {bad}" if bad else ""))
    return results
