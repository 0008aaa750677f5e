"""Structural pair types for FREE-mode targets and their membership rules.

For distinct s1, s2 put t = s1 s2^-1.  Each type pairs a word shape of t
(from :func:`indeplab.words.decompose`) with coset conditions on t.  The
conditions below are the ones under which the type's membership rule holds
for every t of that shape, which is what :func:`predict_membership` relies
on:

* A1  t = u_m v u_n2^-1, t in C_n1 with m < n1 < n2
* A2  t = u_n1 v u_m^-1, t in C_n1 with m < n1
* B1  t = u_n1 v u_m^-1, t in C_n1 with n1 < m
* B2  t = u_n1 v, t in C_n1, t not ending in u_k^-1 for any k != n1
* B3  t = u_n1 u_n2^-1 (n1 < n2), t in C_n1
* B4  t = v u_n2^-1, t in C_n1 with n1 < n2, t not starting with u_k, k <= n1
* C1  t = u_n1 v u_n2^-1 with n1 != n2, t in Γ_max(n1, n2)
* C2  t = u_m v u_m^-1, t in Γ_m
* C3  t = v u_m^-1, t in Γ_m, t not starting with u_k for k <= m; if t
      starts with u_k (k > m) then t is in neither Γ_k nor C_k, and t^-1
      lies in no C_j for m < j < k.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .. import boundary as B
from .. import words as W
from ..boundary import PrefixConstraintSet
from ..towers import DEEPER, DepthError, QuotientTower
from ..words import ReducedWord
from .check import check_pattern
from .targets import TargetPair

TYPES = ("A1", "A2", "B1", "B2", "B3", "B4", "C1", "C2", "C3")
TYPE_BOUNDS = {"A1": 21, "A2": 13, "B1": 4, "B2": 4, "B3": 3, "B4": 3, "C1": 6, "C2": 4, "C3": 3}

AS_IS = "as-is"
TRANSPOSED = "transposed"

IN_X = "in"
NOT_IN_X = "out"
NEEDS_MORE = "needs-more-prefix"
MAX_EXAMPLES = 10


class ClassificationError(ValueError):
    """The pair does not meet the classifier's precondition."""


@dataclass(frozen=True)
class PairTypeMatch:
    type: str
    orientation: str
    t: ReducedWord  # s1 s2^-1 for as-is, s2 s1^-1 for transposed
    m: int | None = None
    n1: int | None = None
    n2: int | None = None
    v: ReducedWord | None = None

    def params(self) -> dict:
        out = {k: getattr(self, k) for k in ("m", "n1", "n2") if getattr(self, k) is not None}
        if self.v is not None:
            out["v"] = W.format_word(self.v)
        return out

    def to_json(self) -> dict:
        return {"type": self.type, "orientation": self.orientation,
                "t": W.format_word(self.t), "params": self.params()}

    def max_param(self) -> int:
        return max(x for x in (self.m, self.n1, self.n2) if x is not None)


@dataclass(frozen=True)
class Prediction:
    status: str
    level: int | None = None


class _TowerFacts:
    """Level data of a fixed word t, computed once."""

    def __init__(self, tower: QuotientTower, t: ReducedWord, need: int):
        if need > tower.max_depth:
            raise DepthError(f"classifying t needs tower depth {need} (have {tower.max_depth})")
        self.tower = tower
        self.t = t
        self.D = tower.max_depth
        top = tower.project(t, self.D)
        self.level = tower.level_of(top)  # n with t in C_n, None or DEEPER
        self._top = top
        self._inv_top = tower.coset_inv(top)

    def in_C(self, n: int) -> bool:
        return self.level == n

    def in_Gamma(self, n: int) -> bool:
        return self.tower.is_trivial(self.tower.reduce(self._top, n))

    def inverse_in_C(self, n: int) -> bool:
        return self.tower.in_C(self._inv_top, n)


def _classify_t(t: ReducedWord, tower: QuotientTower, orientation: str) -> list[PairTypeMatch]:
    forms = W.decompose(t)
    if not forms:
        return []
    need = max(max(x for x in (f.first, f.last) if x is not None) for f in forms)
    facts = _TowerFacts(tower, t, need)
    lvl = facts.level if isinstance(facts.level, int) else None
    lead = W.leading_u_index(t)
    trail = W.trailing_u_index(t)
    out: list[PairTypeMatch] = []

    def add(kind, **kw):
        out.append(PairTypeMatch(kind, orientation, t, **kw))

    for f in forms:
        if f.shape == "uvu":
            a, c, v = f.first, f.last, f.middle
            if lvl is not None and a < lvl < c:
                add("A1", m=a, n1=lvl, n2=c, v=v)
            if c < a and lvl == a:
                add("A2", m=c, n1=a, v=v)
            if a < c and lvl == a:
                add("B1", m=c, n1=a, v=v)
            if a != c and facts.in_Gamma(max(a, c)):
                add("C1", n1=a, n2=c, v=v)
            if a == c and facts.in_Gamma(a):
                add("C2", m=a, v=v)
        elif f.shape == "uv":
            if lvl == f.first and trail in (None, f.first):
                add("B2", n1=f.first, v=f.middle)
        elif f.shape == "vu":
            n2 = f.last
            if lvl is not None and lvl < n2 and (lead is None or lead > lvl):
                add("B4", n1=lvl, n2=n2, v=f.middle)
            m = n2
            if facts.in_Gamma(m) and (lead is None or lead > m):
                ok = True
                if lead is not None:
                    if lead > facts.D:
                        raise DepthError("C3 check needs a deeper tower")
                    ok = not facts.in_Gamma(lead) and lvl != lead
                    ok = ok and not any(facts.inverse_in_C(k) for k in range(m + 1, lead))
                if ok:
                    add("C3", m=m, v=f.middle)
        elif f.shape == "uu":
            if f.first < f.last and lvl == f.first:
                add("B3", n1=f.first, n2=f.last)
    return out


def classify_t(t: ReducedWord, tower: QuotientTower) -> list[PairTypeMatch]:
    """Matches for t in both orientations (transposed ones refer to t^-1)."""
    out = _classify_t(t, tower, AS_IS) + _classify_t(W.inv(t), tower, TRANSPOSED)
    out.sort(key=lambda m: (TYPES.index(m.type), m.orientation != AS_IS))
    return out


def classify_pair(s1: ReducedWord, s2: ReducedWord, target: TargetPair, depth: int,
                  class_tower: QuotientTower | None = None) -> list[PairTypeMatch]:
    """Every type match of (s1, s2), after checking s1^-1 A+ ∩ s2^-1 A+ is witnessed.

    ``class_tower`` may supply a deeper copy of the tower for the coset
    conditions (the witness check itself runs at ``depth``).
    """
    if s1 == s2:
        raise ClassificationError("s1 and s2 must differ")
    if check_pattern([s1, s2], (True, True), target, depth) is None:
        raise ClassificationError("pair never lands in A+ together at this depth")
    t = W.mul(s1, W.inv(s2))
    return classify_t(t, class_tower or target.tower)


# ------------------------------------------------------------- prediction

def _starts(info, w: ReducedWord) -> bool | None:
    """Does every point described by ``info`` start with w?  None if mixed."""
    if isinstance(info, ReducedWord):
        return B.PrefixConstraint(True, w).holds_on(info)
    cs: PrefixConstraintSet = info
    pos = [c.word for c in cs.constraints if c.positive]
    longest = max(pos, key=len) if pos else None
    if longest is not None:
        if W.starts_with(longest, w):
            return True
        if not W.starts_with(w, longest):
            return False
    for c in cs.constraints:
        if not c.positive and W.starts_with(w, c.word):
            return False
    return None


def predict_membership(match: PairTypeMatch, k2: int, info) -> Prediction:
    """Is s1·x'' in X+ given s2·x'' in D_k2 x C_k2?  ``info`` describes s2·y''.

    ``info`` is either a finite prefix of s2·y'' or a PrefixConstraintSet.
    The roles of s1 and s2 are swapped for transposed matches.
    """
    t, kind = match.t, match.type
    ti = W.inv(t)
    m, n1, n2 = match.m, match.n1, match.n2
    b = W.generator(2, t.rank)

    def sw(n: int, with_b: bool = False):
        w = W.mul(ti, W.word_u(n, t.rank))
        if with_b:
            w = W.mul(w, b)
        return _starts(info, w)

    def cond(value, level):
        if value is None:
            return Prediction(NEEDS_MORE)
        return Prediction(IN_X, level) if value else Prediction(NOT_IN_X)

    out = Prediction(NOT_IN_X)
    if kind == "A1":
        if k2 == m:
            return Prediction(IN_X, m)
        if k2 == n2:
            return cond(sw(n1), n1)
    elif kind == "A2":
        if k2 > n1:
            return Prediction(IN_X, n1)
        if k2 == m:
            return cond(sw(m), m)
    elif kind == "B1":
        if k2 > n1 and k2 != m:
            return Prediction(IN_X, n1)
        if k2 == m:
            s = sw(n1, True)
            return cond(None if s is None else not s, n1)
    elif kind == "B2":
        if k2 > n1 and t != W.mul(W.word_u(n1, t.rank), W.a_power(-k2, t.rank)):
            return Prediction(IN_X, n1)
    elif kind == "B3":
        if k2 == n2:
            return Prediction(IN_X, n1)
    elif kind == "B4":
        if k2 == n2:
            return cond(sw(n1), n1)
    elif kind == "C1":
        if k2 == n1:
            return Prediction(IN_X, n1)
        if k2 == n2:
            return cond(sw(n2), n2)
    elif kind == "C2":
        if k2 == m:
            s = sw(m, True)
            return cond(None if s is None else not s, m)
    elif kind == "C3":
        if k2 == m:
            return cond(sw(m), m)
    else:
        raise ValueError(f"unknown type {kind!r}")
    return out


# ----------------------------------------------------- brute-force oracle

@dataclass(frozen=True)
class Sketch:
    """Finite data for a point x'' seen from the second element.

    ``y`` is a prefix of s2·y'' (starting with u_k2) and ``z`` a deep coset
    of s2·z'' inside C_k2.
    """

    k2: int
    y: ReducedWord
    z: object


def brute_membership(match: PairTypeMatch, sketch: Sketch, tower: QuotientTower) -> Prediction:
    """Decide s1·x'' in X+ by direct computation (t·y and t·z)."""
    t = match.t
    tz = tower.coset_mul(tower.project(t, sketch.z.level), sketch.z)
    lvl = tower.level_of(tz)
    if lvl is None:
        return Prediction(NOT_IN_X)
    if lvl == DEEPER:
        return Prediction(NEEDS_MORE)
    verdict = B.member_prefix(sketch.y, t, lvl)
    if verdict == B.UNDETERMINED:
        return Prediction(NEEDS_MORE)
    return Prediction(IN_X, lvl) if verdict == B.IN else Prediction(NOT_IN_X)


def sample_sketch(match: PairTypeMatch, tower: QuotientTower, rng: random.Random,
                  max_level: int = 8) -> Sketch:
    """A random point sketch, biased towards the type's critical levels and prefixes."""
    params = [x for x in (match.m, match.n1, match.n2) if x is not None]
    pool = params + [p + 1 for p in params] + [p - 1 for p in params if p > 2]
    if rng.random() < 0.75:
        k2 = rng.choice(pool)
    else:
        k2 = rng.randint(2, max_level)
    k2 = max(2, min(k2, tower.max_depth - 1))
    u = W.word_u(k2, match.t.rank)
    ti = W.inv(match.t)
    length = len(match.t) + 2 * max(params + [k2]) + 6
    start = u
    if rng.random() < 0.5:
        # aim at the words the membership rules test for
        n = rng.choice(params)
        w = W.mul(ti, W.word_u(n, match.t.rank))
        if rng.random() < 0.5:
            w = W.mul(w, W.generator(2, match.t.rank))
        if W.starts_with(w, u):
            start = w
        elif W.starts_with(u, w):
            start = u
    y = W.random_word(rng, max(length, len(start) + 3), match.t.rank, start=start)
    z = tower.random_descendant(tower.marked(k2), tower.max_depth, rng)
    return Sketch(k2, y, z)


# ------------------------------------------------------- sampled agreement

@dataclass
class PredictionReport:
    pairs: int = 0
    unmatched: int = 0
    determined: int = 0
    undetermined: int = 0
    disagreements: int = 0
    type_counts: dict = field(default_factory=dict)
    examples: list = field(default_factory=list)  # first few failures
    sampler_attempts: int = 0

    @property
    def passed(self) -> bool:
        return self.pairs > 0 and self.unmatched == 0 and self.disagreements == 0

    def to_json(self) -> dict:
        out = {k: getattr(self, k) for k in ("pairs", "unmatched", "determined", "undetermined",
                                              "disagreements", "examples", "sampler_attempts")}
        out["type_counts"] = {k: self.type_counts[k] for k in TYPES if k in self.type_counts}
        out["passed"] = self.passed
        return out


def prediction_experiment(target: TargetPair, depth: int = 3, radius: int = 8, pairs: int = 1000,
                          sketches: int = 20, seed: int = 0,
                          class_tower: QuotientTower | None = None,
                          table_len: int = 8) -> PredictionReport:
    """Sample witnessed pairs, classify them, and compare predictions with brute force."""
    from .sampling import PairSampler

    class_tower = class_tower or target.tower
    sampler = PairSampler(target, depth, radius, seed=seed, table_len=table_len)
    sample = sampler.sample(pairs)
    rng = random.Random(seed + 1)
    rep = PredictionReport(pairs=len(sample), sampler_attempts=sampler.attempts)
    for p in sample:
        matches = classify_pair(p.s1, p.s2, target, depth, class_tower)
        if not matches:
            rep.unmatched += 1
            if len(rep.examples) < MAX_EXAMPLES:
                rep.examples.append({"unmatched": [W.format_word(p.s1), W.format_word(p.s2)]})
            continue
        for m in matches:
            rep.type_counts[m.type] = rep.type_counts.get(m.type, 0) + 1
            for _ in range(sketches):
                sk = sample_sketch(m, class_tower, rng)
                a = predict_membership(m, sk.k2, sk.y)
                b = brute_membership(m, sk, class_tower)
                if NEEDS_MORE in (a.status, b.status):
                    rep.undetermined += 1
                    continue
                rep.determined += 1
                if a != b:
                    rep.disagreements += 1
                    if len(rep.examples) < MAX_EXAMPLES:
                        rep.examples.append({"match": m.to_json(), "k2": sk.k2,
                                             "y": W.format_word(sk.y), "z": str(sk.z),
                                             "predicted": [a.status, a.level],
                                             "direct": [b.status, b.level]})
    return rep
