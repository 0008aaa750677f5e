"""Independence checking at finite depth.

A point x = (y, z) witnesses a sign pattern ω on M when s·x lies in A+ for
ω(s) = + and in A- otherwise.  The z-coordinate is searched as a coset at
depth N; the y-coordinate as a prefix certificate.

Levels deeper than N are never enumerated.  For RF/FREE targets every
element s with ω(s) = - whose translate s·z is still trivial at depth N is
pushed off all deeper C_m by choosing the next digit of z: each such s rules
out at most one child coset per level, and a fibre has [Γ_N : Γ_{N+1}]
children.  When that jump is at least |M| + 2 there remain two admissible
children at every level, hence uncountably many continuations, so the
single excluded point can be avoided as well.  :func:`check_pattern`
asserts this jump condition before searching.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .. import boundary as B
from .. import words as W
from ..boundary import PrefixConstraint, PrefixConstraintSet, WitnessPrefix
from ..towers import DEEPER, CosetId
from .targets import FREE, RF, Block, TargetPair


class PreconditionError(ValueError):
    """Input violates a documented precondition."""


@dataclass(frozen=True)
class Witness:
    """Certificate for one sign pattern.

    ``levels`` holds, per element of M, the level of its block for ω = +
    and None for ω = -.  ``y`` is None in RF mode.
    """

    pattern: tuple[bool, ...]
    levels: tuple
    z: CosetId
    y: WitnessPrefix | None
    constraints: PrefixConstraintSet | None
    block_choice: tuple = ()

    def to_json(self) -> dict:
        return {
            "pattern": "".join("+" if w else "-" for w in self.pattern),
            "levels": list(self.levels),
            "z": str(self.z),
            "y": self.y.to_json() if self.y else None,
            "constraints": self.constraints.to_json() if self.constraints is not None else None,
            "block_choice": list(self.block_choice),
        }

    @classmethod
    def from_json(cls, data: dict, rank: int = W.DEFAULT_RANK) -> "Witness":
        return cls(
            tuple(ch == "+" for ch in data["pattern"]),
            tuple(data["levels"]),
            CosetId.from_str(data["z"]),
            WitnessPrefix.from_json(data["y"], rank) if data.get("y") else None,
            PrefixConstraintSet.from_json(data["constraints"], rank) if data.get("constraints") else None,
            tuple(data.get("block_choice", ())),
        )


INDEPENDENT = "Independent"
NOT_WITNESSED = "NotWitnessed"


@dataclass
class Verdict:
    status: str
    depth: int
    witnesses: dict = field(default_factory=dict)  # pattern tuple -> Witness
    failed_pattern: tuple | None = None

    @property
    def independent(self) -> bool:
        return self.status == INDEPENDENT

    def label(self) -> str:
        return INDEPENDENT if self.independent else f"NotWitnessedUpTo({self.depth})"


def pattern_text(pattern: Sequence[bool]) -> str:
    return "".join("+" if w else "-" for w in pattern)


def _check_inputs(M: Sequence, target: TargetPair, depth: int) -> None:
    if len(M) == 0:
        raise PreconditionError("M must be nonempty")
    if len(set(M)) != len(M):
        raise PreconditionError("M has repeated elements")
    target.tower.check_level(depth)
    if target.unbounded:
        jump = target.tower.stable_jump(depth)
        if jump < len(M) + 2:
            raise PreconditionError(
                f"index jump {jump} at depth {depth} is too small for |M| = {len(M)}")
    if target.uses_boundary:
        for s in M:
            if not isinstance(s, W.ReducedWord):
                raise PreconditionError("boundary modes need word elements")


def _translated(s, block: Block, positive: bool, target: TargetPair) -> list[list[PrefixConstraint]]:
    """Alternatives (a disjunction of conjunctions) for s·y in / not in the block boundary."""
    if block.boundary is None:
        return [[]] if positive else []
    if target.mode == FREE:
        return [[B.translate_cylinder(s, block.level, positive)]]
    parts = []
    for c in block.boundary.sorted():
        tc = B.translate_prefix(s, c.word)
        parts.append(tc if c.positive else tc.negated())
    if positive:
        return [parts]
    return [[p.negated()] for p in parts]


class _Search:
    def __init__(self, M, pattern, target: TargetPair, depth: int):
        self.M = list(M)
        self.pattern = tuple(pattern)
        self.target = target
        self.tower = target.tower
        self.depth = depth
        self.plus = [i for i, w in enumerate(self.pattern) if w]
        self.minus = [i for i, w in enumerate(self.pattern) if not w]
        self._proj: dict = {}
        rank = M[0].rank if isinstance(M[0], W.ReducedWord) else W.DEFAULT_RANK
        self.empty_cs = PrefixConstraintSet(frozenset(), False, rank)

    def proj(self, i: int, n: int) -> CosetId:
        key = (i, n)
        if key not in self._proj:
            self._proj[key] = self.tower.project(self.M[i], n)
        return self._proj[key]

    def sat(self, cs: PrefixConstraintSet):
        if not self.target.uses_boundary:
            return True
        return B.satisfiable(cs)

    # stage 1: blocks for the + elements
    def run(self) -> Witness | None:
        cs = self.empty_cs
        if self.minus and self.target.mode != RF:
            cs = cs.excluding_a_infinity()
        return self._plus(0, None, cs, [])

    def _plus(self, k: int, zc: CosetId | None, cs, chosen) -> Witness | None:
        if k == len(self.plus):
            return self._minus_start(zc, cs, chosen)
        i = self.plus[k]
        t = self.tower
        for n in self.target.levels(self.depth):
            blocks = self.target.blocks_at(n)
            for bi, block in enumerate(blocks):
                c = t.coset_mul(t.coset_inv(self.proj(i, n)), block.coset)
                merged = _merge(t, zc, c)
                if merged is None:
                    continue
                for alt in _translated(self.M[i], block, True, self.target):
                    cs2 = cs.add(*alt) if alt else cs
                    if alt and not self.sat(cs2):
                        continue
                    w = self._plus(k + 1, merged, cs2, chosen + [(i, n, bi)])
                    if w is not None:
                        return w
        return None

    # stage 2: walk z down to the checking depth, keeping - elements out
    def _minus_start(self, zc, cs, chosen) -> Witness | None:
        t = self.tower
        z = zc if zc is not None else t.identity_coset(0)
        hits = []
        for n in range(1, z.level + 1):
            hits.extend(self._hits(z, n))
        return self._constrain(hits, 0, z, cs, chosen)

    def _hits(self, z: CosetId, n: int) -> list:
        """(element, block) pairs with s·z in the block coset at level n."""
        t = self.tower
        out = []
        blocks = self.target.blocks_at(n)
        if not blocks:
            return out
        zn = t.reduce(z, n)
        for i in self.minus:
            szn = t.coset_mul(self.proj(i, n), zn)
            for block in blocks:
                if szn == block.coset:
                    out.append((i, block))
        return out

    def _constrain(self, hits, j, z, cs, chosen) -> Witness | None:
        if j == len(hits):
            return self._descend(z, cs, chosen)
        i, block = hits[j]
        for alt in _translated(self.M[i], block, False, self.target):
            cs2 = cs.add(*alt)
            if not self.sat(cs2):
                continue
            w = self._constrain(hits, j + 1, z, cs2, chosen)
            if w is not None:
                return w
        return None

    def _settled(self, z: CosetId) -> bool:
        if not self.target.unbounded:
            top = self.target.max_block_level or 0
            return z.level >= top
        if z.level < 1:
            return not self.minus
        t = self.tower
        return all(not t.is_trivial(t.coset_mul(self.proj(i, z.level), z)) for i in self.minus)

    def _descend(self, z, cs, chosen) -> Witness | None:
        t = self.tower
        if z.level == self.depth:
            return self._finish(z, cs, chosen)
        if self._settled(z):
            while z.level < self.depth:
                z = t.children(z)[0]
            return self._finish(z, cs, chosen)
        for child in t.children(z):
            hits = self._hits(child, child.level)
            if hits and not self.target.uses_boundary:
                continue
            w = self._constrain(hits, 0, child, cs, chosen)
            if w is not None:
                return w
        return None

    def _finish(self, z, cs, chosen) -> Witness | None:
        y = None
        if self.target.uses_boundary:
            y = B.satisfiable(cs)
            if y is None:
                return None
        levels = [None] * len(self.M)
        choice = []
        for i, n, bi in chosen:
            levels[i] = n
            choice.append(bi)
        return Witness(self.pattern, tuple(levels), z, y,
                       cs if self.target.uses_boundary else None, tuple(choice))


def _merge(t, zc: CosetId | None, c: CosetId) -> CosetId | None:
    """Intersect two coset constraints on z (None when incompatible)."""
    if zc is None:
        return c
    deep, shallow = (zc, c) if zc.level >= c.level else (c, zc)
    if t.reduce(deep, shallow.level) != shallow:
        return None
    return deep


def check_pattern(M: Sequence, pattern: Sequence[bool], target: TargetPair, depth: int) -> Witness | None:
    """A witness x with s·x in A_{ω(s)} for every s in M, or None if none exists at depth N."""
    _check_inputs(M, target, depth)
    if len(pattern) != len(M):
        raise PreconditionError("pattern length differs from |M|")
    return _Search(M, pattern, target, depth).run()


def all_patterns(k: int):
    return itertools.product((True, False), repeat=k)


def is_independence_set(M: Sequence, target: TargetPair, depth: int, workers: int = 1) -> Verdict:
    """Independent iff every one of the 2^|M| sign patterns is witnessed."""
    _check_inputs(M, target, depth)
    patterns = list(all_patterns(len(M)))
    witnesses = {}
    if workers > 1 and len(patterns) > 4:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(_check_one, [(list(M), p, target, depth) for p in patterns]))
    else:
        results = None
    for idx, p in enumerate(patterns):
        w = results[idx] if results is not None else check_pattern(M, p, target, depth)
        if w is None:
            return Verdict(NOT_WITNESSED, depth, witnesses, p)
        witnesses[p] = w
    return Verdict(INDEPENDENT, depth, witnesses)


def _check_one(args):
    M, p, target, depth = args
    return check_pattern(M, p, target, depth)


# ------------------------------------------------------------ re-validation

def _extensions(prefix: W.ReducedWord, length: int) -> list[W.ReducedWord]:
    """A few deterministic reduced extensions of a prefix."""
    out = []
    order = W.letter_order(prefix.rank)
    for rot in range(len(order)):
        letters = list(prefix.letters)
        k = rot
        while len(letters) < length:
            x = order[k % len(order)]
            k += 1
            if letters and x == -letters[-1]:
                continue
            letters.append(x)
        out.append(W.ReducedWord(tuple(letters), prefix.rank))
    return out


def _direct_starts(s: W.ReducedWord, y: W.ReducedWord, w: W.ReducedWord) -> bool | None:
    v = W.mul(s, y)
    if (len(s) + len(y) - len(v)) // 2 >= len(y):
        return None
    if len(v) >= len(w):
        return W.starts_with(v, w)
    return None if W.starts_with(w, v) else False


def _block_holds(s, y: W.ReducedWord, block: Block, target: TargetPair) -> bool | None:
    if block.boundary is None:
        return True
    if target.mode == FREE:
        verdict = B.member_prefix(y, s, block.level)
        return None if verdict == B.UNDETERMINED else verdict == B.IN
    vals = []
    for c in block.boundary.constraints:
        h = _direct_starts(s, y, c.word)
        if h is None:
            return None
        vals.append(h if c.positive else not h)
    return all(vals)


def validate_witness(M: Sequence, target: TargetPair, depth: int, w: Witness) -> tuple[bool, str]:
    """Recompute every membership of s·x directly from the witness data."""
    t = target.tower
    if w.z.level != depth:
        return False, "z is not at the checking depth"
    ys = [None]
    if target.uses_boundary:
        if w.y is None:
            return False, "missing boundary certificate"
        if w.constraints is not None and not B.validate_witness(w.constraints, w.y):
            return False, "prefix certificate does not satisfy its constraints"
        longest = max(len(s) for s in M) + 2 * depth + 3
        ys = _extensions(w.y.prefix, len(w.y.prefix) + longest + 4)
    choice = iter(w.block_choice)
    for s, sign, lvl in zip(M, w.pattern, w.levels):
        sz = t.coset_mul(t.project(s, depth), w.z)
        if sign:
            if lvl is None or lvl > depth:
                return False, f"no level recorded for {t.format_element(s)}"
            bi = next(choice, 0)
            block = target.blocks_at(lvl)[bi]
            if t.reduce(sz, lvl) != block.coset:
                return False, f"{t.format_element(s)}·z misses its block coset"
            for y in ys:
                if y is not None and _block_holds(s, y, block, target) is not True:
                    return False, f"{t.format_element(s)}·y misses its block boundary"
            continue
        for n in target.levels(depth):
            for block in target.blocks_at(n):
                if t.reduce(sz, n) != block.coset:
                    continue
                if block.boundary is None:
                    return False, f"{t.format_element(s)}·z lands in a positive block"
                for y in ys:
                    if _block_holds(s, y, block, target) is not False:
                        return False, f"{t.format_element(s)}·x lands in a positive block"
        if target.unbounded and t.level_of(sz) == DEEPER:
            # discharged by the extension argument (jump condition checked up front)
            continue
    return True, ""


def validate_verdict(M: Sequence, target: TargetPair, verdict: Verdict) -> tuple[bool, str]:
    if not verdict.independent:
        return True, ""
    for p in all_patterns(len(M)):
        if p not in verdict.witnesses:
            return False, f"missing witness for pattern {pattern_text(p)}"
        ok, why = validate_witness(M, target, verdict.depth, verdict.witnesses[p])
        if not ok:
            return False, f"pattern {pattern_text(p)}: {why}"
    return True, ""

