"""Largest independence sets all of whose pairs carry one structural type.

A set M = {s_1, ..., s_l} is an all-X family when its elements can be
ordered so that every pair (s_i, s_j) with i < j has a type-X match in the
as-is orientation.  Types and independence only depend on the differences
s_i s_j^-1, so a family inside the ball of radius R can be translated to
contain e, after which every element and every difference has length at
most 2R.  The experiment searches all such translated families: a superset
of the families of the ball, up to translation.

Every independent pair has a typed difference, so the candidates are the
independent differences of length <= 2R (:func:`..search.free_pair_differences`)
and the type-X edges come from translating by the differences of type X.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .. import words as W
from ..towers import QuotientTower, SanovTower
from .check import is_independence_set
from .classify import AS_IS, TYPE_BOUNDS, TYPES, classify_t
from .search import free_pair_differences, translate_pairs
from .targets import TargetPair


@dataclass
class TypeGraph:
    """Typed directed edges among e (index 0) and the candidate words."""

    target: TargetPair
    depth: int
    radius: int
    elements: list
    edges: dict  # type -> set of (i, j): (elements[i], elements[j]) has the type

    def out_of(self, kind: str) -> dict[int, set]:
        out: dict[int, set] = {}
        for i, j in self.edges.get(kind, ()):
            out.setdefault(i, set()).add(j)
        return out


def build_type_graph(radius: int = 10, tower: QuotientTower | None = None, depth: int = 3,
                     class_tower: QuotientTower | None = None) -> TypeGraph:
    tower = tower or SanovTower(3)
    class_tower = class_tower or SanovTower(tower.p, max_depth=10)
    target = TargetPair.free(tower)
    diffs = free_pair_differences(target, depth, 2 * radius)
    typed: dict[str, list] = {k: [] for k in TYPES}
    for t in diffs:
        # an as-is match of t = s1 s2^-1 types the ordered pair (s1, s2)
        for kind in {m.type for m in classify_t(t, class_tower) if m.orientation == AS_IS}:
            typed[kind].append(t)
    elements = [W.identity()] + diffs
    edges = {k: translate_pairs(ts, elements, 2 * radius) for k, ts in typed.items()}
    return TypeGraph(target, depth, radius, elements, edges)


def _orderable(members: tuple, out: dict) -> bool:
    """Can ``members`` be listed so that every earlier one points to every later one?"""
    if len(members) <= 1:
        return True
    for k, s in enumerate(members):
        rest = members[:k] + members[k + 1:]
        if all(r in out.get(s, ()) for r in rest) and _orderable(rest, out):
            return True
    return False


@dataclass
class BoundReport:
    type: str
    bound: int
    radius: int
    depth: int
    candidates: int
    largest_candidate: int  # largest all-type family through e that was checked
    largest_independent: int
    example: list = field(default_factory=list)
    checks: int = 0
    budget_exhausted: bool = False

    @property
    def passed(self) -> bool:
        return self.largest_independent < self.bound

    def to_json(self) -> dict:
        return {
            "type": self.type,
            "bound": self.bound,
            "radius": self.radius,
            "depth": self.depth,
            "candidates": self.candidates,
            "largest_candidate": self.largest_candidate,
            "largest_independent": self.largest_independent,
            "example": [W.format_word(w) for w in self.example],
            "checks": self.checks,
            "budget_exhausted": self.budget_exhausted,
            "passed": self.passed,
        }


def bound_experiment(kind: str, radius: int = 10, tower: QuotientTower | None = None,
                     depth: int = 3, class_tower: QuotientTower | None = None,
                     graph: TypeGraph | None = None, max_checks: int | None = None) -> BoundReport:
    """Grow all-``kind`` families through e level by level, keeping the independent ones."""
    if kind not in TYPE_BOUNDS:
        raise ValueError(f"unknown type {kind!r}")
    graph = graph or build_type_graph(radius, tower, depth, class_tower)
    out = graph.out_of(kind)
    linked = out.keys() | {j for js in out.values() for j in js}
    nbrs = {i: out.get(i, set()) | {k for k, js in out.items() if i in js} for i in linked}
    report = BoundReport(kind, TYPE_BOUNDS[kind], graph.radius, graph.depth,
                         candidates=len(nbrs.get(0, ())), largest_candidate=1,
                         largest_independent=1, example=[graph.elements[0]])
    level = [(0,)]
    while level:
        known = set(level)
        cands = []
        for s in level:
            common = set.intersection(*(nbrs.get(i, set()) for i in s))
            for j in sorted(x for x in common if x > max(s[1:], default=0)):
                c = s + (j,)
                if all(c[:r] + c[r + 1:] in known for r in range(1, len(c))) and _orderable(c, out):
                    cands.append(c)
        if not cands:
            break
        report.largest_candidate = len(cands[0])
        if len(cands[0]) == 2:
            # every candidate c came from an independent difference, so {e, c} is independent
            level = cands
            report.largest_independent = 2
            report.example = [graph.elements[i] for i in cands[0]]
            continue
        nxt = []
        for c in cands:
            if max_checks is not None and report.checks >= max_checks:
                report.budget_exhausted = True
                break
            report.checks += 1
            if is_independence_set([graph.elements[i] for i in c], graph.target, graph.depth).independent:
                nxt.append(c)
        if nxt:
            report.largest_independent = len(nxt[0])
            report.example = [graph.elements[i] for i in nxt[0]]
        if report.budget_exhausted:
            break
        level = nxt
    return report
