"""Direct-computation checks of the lemmas the bounds rest on.

Each verifier instantiates a lemma's hypotheses with concrete data (cosets
for points of Z, finite prefixes for points of Y, words for group
elements), checks the conclusion by computing memberships, and records any
counterexample.

Only t = s1 s2^-1 and the translated point s2·x matter, so group elements
are enumerated through the cosets they send C-cosets to: if the hypothesis
needs w in C_n2 and t·w in C_n1 then t = c·w^-1 with c in C_n1.  Running
over all such (w, c) is exhaustive at the chosen depth.

    RF1    t·w in C_n1, w in C_n2 (n1 < n2); t·w' not in C_n1, w' in C_m2
           => m2 <= n1
    RF2    x' in C_n1, t2·x' in C_n2, t3·x' in C_n3 (n1 < n2, n3)
           => no y' with y', t2·y' outside X+ and t3·y' in X+
    free1  t·w in C_n1, w in C_n2 (n1 < n2); t·w' in C_m1, w' in C_m2
           => t in γ_n1Γ_n1, and m1 = n1 < m2 or m1 = m2 < n1
    free5  t·w, w in C_n; w' in C_m  =>  (m = n) iff t·w' in C_n
    free2  tD_n2 ∩ D_n1 nonempty, t != e  =>  t ends with u_n2^-1, starts
           with u_n1, or n1 != n2 and t = u_n1 u_n2^-1
    free6  t not starting with u_n  =>  (ty in D_n iff y starts with t^-1 u_n)
    free7  t starting with u_n  =>  (ty in D_n iff y avoids t^-1 u_n b)
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .. import boundary as B
from .. import words as W
from ..towers import IntegerTower, QuotientTower, SanovTower
from ..words import ReducedWord

LEMMAS = ("RF1", "RF2", "free1", "free2", "free5", "free6", "free7")
MAX_STORED = 20


@dataclass
class LemmaBudget:
    depth: int = 3  # coset depth for the RF and Z-part lemmas
    samples: int = 10_000  # random instances for the word lemmas
    radius: int = 14  # longest sampled t
    exhaustive_radius: int = 6  # every t up to this length is tried too
    max_level: int = 6  # largest n used for D_n
    seed: int = 0


@dataclass
class LemmaReport:
    name: str
    tower: dict
    budget: LemmaBudget
    instances: int = 0
    hypotheses_met: int = 0
    counterexample_count: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.counterexample_count == 0

    def _bad(self, **data) -> None:
        self.counterexample_count += 1
        if len(self.counterexamples) < MAX_STORED:
            self.counterexamples.append(data)

    def to_json(self) -> dict:
        return {
            "lemma": self.name,
            "tower": self.tower,
            "budget": vars(self.budget),
            "instances": self.instances,
            "hypotheses_met": self.hypotheses_met,
            "counterexample_count": self.counterexample_count,
            "counterexamples": self.counterexamples,
            "passed": self.passed,
        }


def canonical_name(name: str) -> str:
    for n in LEMMAS:
        if n.lower() == name.lower():
            return n
    raise ValueError(f"unknown lemma {name!r} (choose from {', '.join(LEMMAS)})")


def default_tower(name: str) -> QuotientTower:
    return IntegerTower(3, 5) if canonical_name(name).startswith("RF") else SanovTower(3)


def verify_lemma(name: str, tower: QuotientTower | None = None,
                 budget: LemmaBudget | None = None) -> LemmaReport:
    name = canonical_name(name)
    tower = tower or default_tower(name)
    budget = budget or LemmaBudget()
    report = LemmaReport(name, tower.describe(), budget)
    _RUNNERS[name](tower, budget, report)
    return report


# ------------------------------------------------------------ coset lemmas

def _c_cosets(tower: QuotientTower, depth: int) -> dict[int, list]:
    """Level -> the level-``depth`` cosets in C_level."""
    return {n: tower.cosets_in_C(n, depth) for n in range(2, depth + 1)}


def _translations(tower: QuotientTower, cs: dict, rel) -> list[tuple]:
    """(t, w, n1, n2) with w in C_n2, t·w in C_n1 and rel(n1, n2)."""
    out = []
    for n2, ws in cs.items():
        for w in ws:
            winv = tower.coset_inv(w)
            for n1, targets in cs.items():
                if rel(n1, n2):
                    out.extend((tower.coset_mul(c, winv), w, n1, n2) for c in targets)
    return out


def _rf1(tower, budget, report):
    N = budget.depth
    cs = _c_cosets(tower, N)
    points = [(m, w) for m, ws in cs.items() for w in ws]
    for t, w, n1, n2 in _translations(tower, cs, lambda a, b: a < b):
        report.hypotheses_met += 1
        for m2, w2 in points:
            report.instances += 1
            if tower.in_C(tower.coset_mul(t, w2), n1):
                continue
            if m2 > n1:
                report._bad(t=str(t), x=str(w), y=str(w2), n1=n1, n2=n2, m2=m2)


def _rf2(tower, budget, report):
    N = budget.depth
    cs = _c_cosets(tower, N)
    points = [c for cc in cs.values() for c in cc]
    for n1, xs in cs.items():
        higher = [(n, c) for n, cc in cs.items() if n > n1 for c in cc]
        for x in xs:
            xinv = tower.coset_inv(x)
            for n2, c2 in higher:
                t2 = tower.coset_mul(c2, xinv)
                for n3, c3 in higher:
                    t3 = tower.coset_mul(c3, xinv)
                    t3inv = tower.coset_inv(t3)
                    report.hypotheses_met += 1
                    # t3·y' in X+ means y' = t3^-1 c for a C-coset c
                    for c in points:
                        y = tower.coset_mul(t3inv, c)
                        report.instances += 1
                        if (tower.level_of(y) is None
                                and tower.level_of(tower.coset_mul(t2, y)) is None):
                            report._bad(x=str(x), t2=str(t2), t3=str(t3), y=str(y),
                                        n1=n1, n2=n2, n3=n3)


def _free1(tower, budget, report):
    N = budget.depth
    cs = _c_cosets(tower, N)
    points = [(m, w) for m, ws in cs.items() for w in ws]
    for t, w, n1, n2 in _translations(tower, cs, lambda a, b: a < b):
        report.hypotheses_met += 1
        if not tower.in_C(t, n1):
            report._bad(t=str(t), x=str(w), n1=n1, n2=n2, reason="t not in γ_n1Γ_n1")
        for m2, w2 in points:
            m1 = tower.level_of(tower.coset_mul(t, w2))
            if not isinstance(m1, int):
                continue
            report.instances += 1
            if not ((m1 == n1 < m2) or (m1 == m2 < n1)):
                report._bad(t=str(t), x=str(w), y=str(w2), n1=n1, n2=n2, m1=m1, m2=m2)


def _free5(tower, budget, report):
    N = budget.depth
    cs = _c_cosets(tower, N)
    points = [(m, w) for m, ws in cs.items() for w in ws]
    for t, w, n, _ in _translations(tower, cs, lambda a, b: a == b):
        report.hypotheses_met += 1
        for m, w2 in points:
            report.instances += 1
            if (m == n) != tower.in_C(tower.coset_mul(t, w2), n):
                report._bad(t=str(t), x=str(w), y=str(w2), n=n, m=m)


# -------------------------------------------------------------- word lemmas

def _random_t(rng: random.Random, budget: LemmaBudget, rank: int) -> tuple[ReducedWord, int, int]:
    """A random t with levels (n1, n2); most are built so that tD_n2 meets D_n1."""
    roll = rng.random()
    n1 = rng.randint(2, budget.max_level)
    n2 = rng.randint(2, budget.max_level)
    if roll < 0.3:
        return W.random_word(rng, rng.randint(1, budget.radius), rank), n1, n2
    if roll < 0.8:
        # t = u_n1 r q^-1 with q a prefix of a point of D_n2: t·q starts with u_n1 r
        q = W.random_word(rng, rng.randint(0, 2 * n2 + 4), rank, start=W.word_u(n2, rank))
        q = ReducedWord(q.letters[:rng.randint(0, len(q))], rank)
        r = W.random_word(rng, rng.randint(0, 6), rank)
        t = W.mul(W.mul(W.word_u(n1, rank), r), W.inv(q))
    else:
        t = W.mul(W.word_u(n1, rank), W.inv(W.word_u(n2, rank)))
        # perturb one end
        e = W.random_word(rng, rng.randint(0, 3), rank)
        t = W.mul(e, t) if rng.random() < 0.5 else W.mul(t, e)
    return t, n1, n2


def _free2_one(t: ReducedWord, n1: int, n2: int, report: LemmaReport) -> None:
    report.instances += 1
    if len(t) == 0:
        return
    cs = B.PrefixConstraintSet.of([B.must_start(W.word_u(n2, t.rank)),
                                   B.translate_cylinder(t, n1, True)], rank=t.rank)
    if B.satisfiable(cs) is None:
        return
    report.hypotheses_met += 1
    u1, u2 = W.word_u(n1, t.rank), W.word_u(n2, t.rank)
    ok = (W.ends_with(t, W.inv(u2)) or W.starts_with(t, u1)
          or (n1 != n2 and t == W.mul(u1, W.inv(u2))))
    if not ok:
        report._bad(t=W.format_word(t), n1=n1, n2=n2)


def _free2(tower, budget, report):
    rng = random.Random(budget.seed)
    levels = range(2, budget.max_level + 1)
    for t in W.ball(budget.exhaustive_radius):
        for n1 in levels:
            for n2 in levels:
                _free2_one(t, n1, n2, report)
    done = 0
    while done < budget.samples:
        t, n1, n2 = _random_t(rng, budget, W.DEFAULT_RANK)
        if len(t) > budget.radius or len(t) == 0:
            continue
        done += 1
        _free2_one(t, n1, n2, report)


def _random_y(rng: random.Random, t: ReducedWord, n: int, key: ReducedWord) -> ReducedWord:
    """A prefix of a point, half the time steered into the cylinder of ``key``."""
    length = len(t) + len(key) + rng.randint(0, 8)
    if rng.random() < 0.5 and len(key):
        start = ReducedWord(key.letters[:rng.randint(max(0, len(key) - 2), len(key))], t.rank)
        return W.random_word(rng, max(length, len(start)), t.rank, start=start)
    return W.random_word(rng, length, t.rank)


def _prefix_starts(y: ReducedWord, w: ReducedWord) -> bool | None:
    if len(y) >= len(w):
        return W.starts_with(y, w)
    return None if W.starts_with(w, y) else False


def _pad(w: ReducedWord, length: int) -> ReducedWord:
    letters = list(w.letters)
    while len(letters) < length:
        x = 1 if not letters or letters[-1] != -1 else 2
        letters.append(x)
    return ReducedWord(tuple(letters), w.rank)


def _starts_instance(t: ReducedWord, n: int, y: ReducedWord, key: ReducedWord, starts: bool,
                     report: LemmaReport) -> None:
    direct = B.member_prefix(y, t, n)
    side = _prefix_starts(y, key)
    if direct == B.UNDETERMINED or side is None:
        return
    report.instances += 1
    predicted = (not side) if starts else side
    if predicted != (direct == B.IN):
        report._bad(t=W.format_word(t), n=n, y=W.format_word(y))


def _key(t: ReducedWord, n: int, starts: bool) -> ReducedWord:
    key = W.mul(W.inv(t), W.word_u(n, t.rank))
    return W.mul(key, W.generator(2, t.rank)) if starts else key


def _starts_lemma(budget: LemmaBudget, report: LemmaReport, starts: bool) -> None:
    rng = random.Random(budget.seed)
    rank = W.DEFAULT_RANK
    order = W.letter_order(rank)
    # exhaustive part: short t, every level, y branching off the critical word
    for n in range(2, budget.max_level + 1):
        u = W.word_u(n, rank)
        if starts:
            ts = [W.mul(u, w) for w in W.ball(budget.exhaustive_radius, rank)]
        else:
            ts = list(W.ball(budget.exhaustive_radius, rank))
        for t in ts:
            if W.starts_with(t, u) != starts:
                continue
            report.hypotheses_met += 1
            key = _key(t, n, starts)
            pad = len(t) + len(u) + len(key) + 2
            for cut in range(max(0, len(key) - 2), len(key) + 1):
                head = ReducedWord(key.letters[:cut], rank)
                for x in order:
                    if head.letters and x == -head.letters[-1]:
                        continue
                    y = _pad(ReducedWord(head.letters + (x,), rank), pad)
                    _starts_instance(t, n, y, key, starts, report)
    done = 0
    while done < budget.samples:
        n = rng.randint(2, budget.max_level)
        u = W.word_u(n, rank)
        if starts:
            t = W.mul(u, W.random_word(rng, rng.randint(0, budget.radius), rank))
        else:
            t = _random_t(rng, budget, rank)[0]
        if len(t) > budget.radius + len(u) or W.starts_with(t, u) != starts:
            continue
        done += 1
        report.hypotheses_met += 1
        key = _key(t, n, starts)
        _starts_instance(t, n, _random_y(rng, t, n, key), key, starts, report)


def _free6(tower, budget, report):
    _starts_lemma(budget, report, starts=False)


def _free7(tower, budget, report):
    _starts_lemma(budget, report, starts=True)


_RUNNERS = {"RF1": _rf1, "RF2": _rf2, "free1": _free1, "free2": _free2,
            "free5": _free5, "free6": _free6, "free7": _free7}
