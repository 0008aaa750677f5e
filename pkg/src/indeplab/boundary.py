"""Prefix descriptions of sets of boundary points (infinite reduced words).

Boundary points are never built; a set of them is described by finitely
many "starts with w" / "does not start with w" constraints and certified
nonempty by a finite prefix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from . import words as W
from .words import ReducedWord

IN = "in"
OUT = "out"
UNDETERMINED = "undetermined"


@dataclass(frozen=True, order=True)
class PrefixConstraint:
    """``positive``: y must start with ``word``; otherwise y must not."""

    positive: bool
    word: ReducedWord

    def __post_init__(self):
        if not self.positive and len(self.word) == 0:
            raise ValueError("negative constraint needs a nonempty word")

    def negated(self) -> "PrefixConstraint":
        return PrefixConstraint(not self.positive, self.word)

    def holds_on(self, prefix: ReducedWord) -> bool | None:
        """Evaluate on every infinite extension of a finite prefix (None if it varies)."""
        w = self.word
        if len(prefix) >= len(w):
            hit = W.starts_with(prefix, w)
            return hit if self.positive else not hit
        if W.starts_with(w, prefix):
            return None
        return not self.positive

    def to_json(self) -> dict:
        return {"polarity": "+" if self.positive else "-", "word": W.format_word(self.word)}

    @classmethod
    def from_json(cls, data: dict, rank: int = W.DEFAULT_RANK) -> "PrefixConstraint":
        pol = data["polarity"]
        if pol not in ("+", "-", "−"):
            raise ValueError(f"bad polarity {pol!r}")
        return cls(pol == "+", W.parse(data["word"], rank))

    def __str__(self) -> str:
        return ("+" if self.positive else "-") + W.format_word(self.word)


def must_start(w: ReducedWord) -> PrefixConstraint:
    return PrefixConstraint(True, w)


def must_not_start(w: ReducedWord) -> PrefixConstraint:
    return PrefixConstraint(False, w)


@dataclass(frozen=True)
class PrefixConstraintSet:
    constraints: frozenset = field(default_factory=frozenset)
    exclude_a_infinity: bool = False
    rank: int = W.DEFAULT_RANK

    @classmethod
    def of(cls, constraints: Iterable[PrefixConstraint], exclude_a_infinity: bool = False,
           rank: int = W.DEFAULT_RANK) -> "PrefixConstraintSet":
        return cls(frozenset(constraints), exclude_a_infinity, rank)

    def add(self, *more: PrefixConstraint) -> "PrefixConstraintSet":
        return PrefixConstraintSet(self.constraints | frozenset(more), self.exclude_a_infinity, self.rank)

    def excluding_a_infinity(self) -> "PrefixConstraintSet":
        return PrefixConstraintSet(self.constraints, True, self.rank)

    def sorted(self) -> list[PrefixConstraint]:
        return sorted(self.constraints, key=lambda c: (not c.positive, W.sort_key(c.word)))

    def __len__(self) -> int:
        return len(self.constraints)

    def to_json(self) -> dict:
        return {"constraints": [c.to_json() for c in self.sorted()],
                "exclude_a_infinity": self.exclude_a_infinity}

    @classmethod
    def from_json(cls, data: dict, rank: int = W.DEFAULT_RANK) -> "PrefixConstraintSet":
        return cls.of((PrefixConstraint.from_json(c, rank) for c in data["constraints"]),
                      bool(data.get("exclude_a_infinity", False)), rank)


@dataclass(frozen=True)
class WitnessPrefix:
    """Every infinite reduced extension of ``prefix`` satisfies the constraints.

    ``certified_depth`` is the prefix length up to which this was checked;
    beyond it no constraint word reaches.
    """

    prefix: ReducedWord
    certified_depth: int
    excludes_a_infinity: bool = False

    def to_json(self) -> dict:
        return {"prefix": W.format_word(self.prefix), "certified_depth": self.certified_depth,
                "excludes_a_infinity": self.excludes_a_infinity}

    @classmethod
    def from_json(cls, data: dict, rank: int = W.DEFAULT_RANK) -> "WitnessPrefix":
        return cls(W.parse(data["prefix"], rank), int(data["certified_depth"]),
                   bool(data.get("excludes_a_infinity", False)))


def translate_cylinder(t: ReducedWord, n: int, want_in: bool = True) -> PrefixConstraint:
    """Constraint on y equivalent to (t·y ∈ D_n) == want_in, where D_n = V_{u_n}."""
    if n < 2:
        raise ValueError("cylinder index must be >= 2")
    u = W.word_u(n, t.rank)
    if not W.starts_with(t, u):
        c = must_start(W.mul(W.inv(t), u))
    else:
        b = W.generator(2, t.rank)
        c = must_not_start(W.mul(W.mul(W.inv(t), u), b))
    return c if want_in else c.negated()


def translate_prefix(s: ReducedWord, w: ReducedWord) -> PrefixConstraint:
    """Constraint on y equivalent to "s·y starts with w", for any nonempty w.

    If w is a prefix of s the only way to fail is for y to cancel into w,
    i.e. y starts with s^-1 w x where x inverts the last letter of w.
    """
    if len(w) == 0:
        raise ValueError("translate_prefix needs a nonempty word")
    q = W.mul(W.inv(s), w)
    if W.starts_with(s, w):
        x = W.ReducedWord((-w.letters[-1],), s.rank)
        return must_not_start(W.mul(q, x))
    return must_start(q)


def satisfiable(cs: PrefixConstraintSet) -> WitnessPrefix | None:
    """Decide whether some infinite reduced word meets every constraint.

    Positive words must be nested; the longest one P is extended letter by
    letter (order a, b, ..., A, B, ...) while avoiding negative words.  Each
    node has at least 2r-1 >= 3 continuations and finitely many negative
    words, so any node that survives past the longest negative word extends
    forever.  Removing the single point a^infinity never matters: a nonempty
    set cut out by finitely many cylinders is uncountable.
    """
    rank = cs.rank
    pos = sorted((c.word for c in cs.constraints if c.positive), key=len)
    for short, long in zip(pos, pos[1:]):
        if not W.starts_with(long, short):
            return None
    P = pos[-1] if pos else W.identity(rank)
    negs = [c.word for c in cs.constraints if not c.positive]
    for w in negs:
        if W.starts_with(P, w):
            return None
    relevant = {w.letters for w in negs if W.starts_with(w, P)}
    target = max([len(P) + 1] + [len(w) for w in negs if W.starts_with(w, P)])
    order = W.letter_order(rank)

    def grow(cur: tuple) -> tuple | None:
        if len(cur) >= target:
            return cur
        last = cur[-1] if cur else 0
        for x in order:
            if x == -last:
                continue
            nxt = cur + (x,)
            if nxt in relevant:
                continue
            found = grow(nxt)
            if found is not None:
                return found
        return None

    found = grow(P.letters)
    if found is None:
        return None
    return WitnessPrefix(ReducedWord(found, rank), len(found), cs.exclude_a_infinity)


def validate_witness(cs: PrefixConstraintSet, wp: WitnessPrefix) -> bool:
    """Re-check a witness against the constraints it certifies."""
    prefix = wp.prefix
    for c in cs.constraints:
        if c.positive and not W.starts_with(prefix, c.word):
            return False
        if not c.positive:
            if W.starts_with(prefix, c.word):
                return False
            if len(c.word) > len(prefix) and W.starts_with(c.word, prefix):
                return False
    # an explicit one-letter-longer extension avoiding all negatives
    negs = {c.word.letters for c in cs.constraints if not c.positive}
    last = prefix.letters[-1] if prefix.letters else 0
    return any(x != -last and prefix.letters + (x,) not in negs
               for x in W.letter_order(prefix.rank))


def member_prefix(y_prefix: ReducedWord, t: ReducedWord, n: int) -> str:
    """Does t·y lie in D_n for every / no / some infinite y extending y_prefix?"""
    w = W.mul(t, y_prefix)
    eaten = (len(t) + len(y_prefix) - len(w)) // 2
    if eaten >= len(y_prefix):
        # the unknown tail of y may keep cancelling into t
        return UNDETERMINED
    u = W.word_u(n, t.rank)
    if len(w) >= len(u):
        return IN if W.starts_with(w, u) else OUT
    return UNDETERMINED if W.starts_with(u, w) else OUT
