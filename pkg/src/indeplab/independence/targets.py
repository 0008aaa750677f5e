"""Target-set pairs (A+, A-) on X = Y x Z, described level by level."""

from __future__ import annotations

from dataclasses import dataclass

from .. import words as W
from ..boundary import PrefixConstraintSet, must_start
from ..towers import CosetId, QuotientTower

RF = "RF"
FREE = "FREE"
GENERIC = "GENERIC"
MODES = (RF, FREE, GENERIC)


@dataclass(frozen=True)
class Block:
    """Points (y, z) with y in ``boundary`` (all of Y if None) and z in ``coset``."""

    level: int
    coset: CosetId
    boundary: PrefixConstraintSet | None = None


class TargetPair:
    """A+ is the union of all blocks; A- is the rest minus one excluded point.

    RF uses the blocks C_n (n >= 2) and ignores the boundary factor.  FREE
    uses D_n x C_n.  GENERIC takes an explicit finite list of blocks.  RF
    and FREE have blocks at every level, so levels beyond the checking depth
    are handled by the extension argument in :mod:`.check`.
    """

    def __init__(self, tower: QuotientTower, mode: str = FREE, blocks: list[Block] | None = None):
        mode = mode.upper()
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        self.tower = tower
        self.mode = mode
        self._blocks: dict[int, list[Block]] = {}
        if mode == GENERIC:
            if not blocks:
                raise ValueError("GENERIC mode needs at least one block")
            for b in blocks:
                if b.level < 1 or b.coset.level != b.level:
                    raise ValueError("block coset must sit at the block level")
                tower.check_level(b.level)
                self._blocks.setdefault(b.level, []).append(b)
            self._check_disjoint()
        elif blocks:
            raise ValueError(f"{mode} mode builds its own blocks")
        self._cache: dict[int, list[Block]] = {}

    @classmethod
    def rf(cls, tower):
        return cls(tower, RF)

    @classmethod
    def free(cls, tower):
        return cls(tower, FREE)

    @property
    def unbounded(self) -> bool:
        return self.mode != GENERIC

    @property
    def uses_boundary(self) -> bool:
        return self.mode != RF

    @property
    def max_block_level(self) -> int | None:
        return max(self._blocks) if self.mode == GENERIC else None

    def levels(self, depth: int) -> list[int]:
        if self.mode == GENERIC:
            return [n for n in sorted(self._blocks) if n <= depth]
        return list(range(2, depth + 1))

    def blocks_at(self, n: int) -> list[Block]:
        if self.mode == GENERIC:
            return self._blocks.get(n, [])
        if n < 2:
            return []
        if n not in self._cache:
            bnd = None
            if self.mode == FREE:
                bnd = PrefixConstraintSet.of([must_start(W.word_u(n))])
            self._cache[n] = [Block(n, self.tower.marked(n), bnd)]
        return self._cache[n]

    def _check_disjoint(self) -> None:
        t = self.tower
        lv = sorted(self._blocks)
        for i, n1 in enumerate(lv):
            for n2 in lv[i + 1:]:
                for b1 in self._blocks[n1]:
                    for b2 in self._blocks[n2]:
                        if t.reduce(b2.coset, n1) == b1.coset:
                            raise ValueError(f"blocks at levels {n1} and {n2} overlap")

    def describe(self) -> dict:
        out = {"mode": self.mode, "tower": self.tower.describe()}
        if self.mode == GENERIC:
            out["blocks"] = [
                {"level": b.level, "coset": str(b.coset),
                 "boundary": b.boundary.to_json() if b.boundary else None}
                for n in sorted(self._blocks) for b in self._blocks[n]]
        return out
