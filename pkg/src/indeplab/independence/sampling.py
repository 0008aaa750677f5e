"""Random pairs (s1, s2) in a word ball whose translates can meet in A+.

Uniform pairs almost never satisfy the coset side of that condition, so the
sampler builds t = s1 s2^-1 in the shapes u_m v u_n^-1, u_m v, v u_n^-1 or
u_n1 u_n2^-1 with v looked up from a table of short words by coset, then
splits t as (q1 c)(q2 c)^-1 inside the ball.  A share of plain uniform pairs
is mixed in.  Every returned pair passes the witness check.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .. import words as W
from ..towers import QuotientTower
from ..words import ReducedWord
from .check import check_pattern
from .targets import TargetPair


class CosetTable:
    """Short words grouped by their coset at a given level."""

    def __init__(self, tower: QuotientTower, level: int, max_len: int):
        self.tower, self.level, self.max_len = tower, level, max_len
        self.by_coset: dict = {}
        for w in W.ball(max_len):
            self.by_coset.setdefault(tower.project(w, level), []).append(w)

    def lookup(self, c) -> list[ReducedWord]:
        return self.by_coset.get(c, [])


@dataclass
class SampledPair:
    s1: ReducedWord
    s2: ReducedWord
    source: str


def _split(t: ReducedWord, radius: int, rng: random.Random) -> tuple[ReducedWord, ReducedWord] | None:
    n = len(t)
    lo, hi = max(0, n - radius), min(radius, n)
    if lo > hi:
        return None
    k = rng.randint(lo, hi)
    q1 = ReducedWord(t.letters[:k], t.rank)
    q2 = W.inv(ReducedWord(t.letters[k:], t.rank))
    room = radius - max(len(q1), len(q2))
    clen = rng.randint(0, room) if room > 0 else 0
    for _ in range(20):
        c = W.random_word(rng, clen, t.rank)
        if W.cancellation(q1, c) == 0 and W.cancellation(q2, c) == 0:
            return W.mul(q1, c), W.mul(q2, c)
    return q1, q2


class PairSampler:
    def __init__(self, target: TargetPair, depth: int, radius: int, seed: int = 0,
                 table_len: int = 8, uniform_share: float = 0.1):
        self.target, self.depth, self.radius = target, depth, radius
        self.rng = random.Random(seed)
        self.tower = target.tower
        self.uniform_share = uniform_share
        self.tables = {k: CosetTable(self.tower, k, table_len) for k in range(2, depth + 1)}
        self.max_u = max(2, (2 * radius - 2) // 2)

    def _goal(self) -> tuple[int, object]:
        """A level k and the coset t must hit at level k."""
        t = self.tower
        k = self.rng.randint(2, self.depth)
        g = self.rng.choice(["e", "gamma", "gamma_inv"])
        if g == "e":
            return k, t.identity_coset(k)
        if g == "gamma":
            return k, t.marked(k)
        return k, t.coset_inv(t.marked(k))

    def _structured(self) -> ReducedWord | None:
        rng, tw = self.rng, self.tower
        shape = rng.choice(["uvu", "uv", "vu", "uv", "vu", "uu"])
        top = max(2, min(self.max_u, self.depth + 2))
        if shape == "uu":
            n1, n2 = rng.sample(range(2, top + 1), 2) if top > 2 else (2, 3)
            return W.mul(W.word_u(n1), W.inv(W.word_u(n2)))
        k, goal = self._goal()
        P = W.word_u(rng.randint(2, top)) if shape in ("uvu", "uv") else W.identity()
        Q = W.inv(W.word_u(rng.randint(2, top))) if shape in ("uvu", "vu") else W.identity()
        budget = 2 * self.radius - len(P) - len(Q)
        if budget < (1 if shape == "uvu" else 0):
            return None
        need = tw.coset_mul(tw.coset_mul(tw.coset_inv(tw.project(P, k)), goal),
                            tw.coset_inv(tw.project(Q, k)))
        options = [v for v in self.tables[k].lookup(need) if len(v) <= budget]
        rng.shuffle(options)
        for v in options[:50]:
            if shape == "uvu" and len(v) == 0:
                continue
            if W.cancellation(P, v) or W.cancellation(v, Q):
                continue
            if len(P) and len(Q) and len(v) == 0:
                continue
            return W.mul(W.mul(P, v), Q)
        return None

    def draw(self) -> SampledPair | None:
        rng = self.rng
        if rng.random() < self.uniform_share:
            s1 = W.random_word(rng, rng.randint(0, self.radius))
            s2 = W.random_word(rng, rng.randint(0, self.radius))
            src = "uniform"
        else:
            t = self._structured()
            if t is None or len(t) == 0:
                return None
            split = _split(t, self.radius, rng)
            if split is None:
                return None
            s1, s2 = split
            src = "structured"
        if s1 == s2 or len(s1) > self.radius or len(s2) > self.radius:
            return None
        if check_pattern([s1, s2], (True, True), self.target, self.depth) is None:
            return None
        return SampledPair(s1, s2, src)

    def sample(self, count: int, max_attempts: int | None = None) -> list[SampledPair]:
        out: list[SampledPair] = []
        attempts = 0
        limit = max_attempts or 200 * count
        while len(out) < count and attempts < limit:
            attempts += 1
            p = self.draw()
            if p is not None:
                out.append(p)
        self.attempts = attempts
        return out
