"""Level-wise search for independence sets inside a ball.

Sets are grown one element at a time in ball order.  A candidate of size k+1
is only checked when all of its k-element subsets were found independent
(independence is inherited by subsets).  With ``anchor`` set, only sets
containing the anchor are explored; by right-translation invariance
(M is independent iff Mg is) this loses nothing up to translation when the
ball is replaced by its translates.  Without an anchor, FREE-mode pairs are
generated from the independent differences t = s1 s2^-1 (see
:func:`free_pair_differences`) instead of all pairs of the ball.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .. import words as W
from .check import is_independence_set
from .targets import FREE, TargetPair


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class SearchResult:
    k_star: int
    by_size: dict = field(default_factory=dict)  # size -> list of index tuples
    maximal: list = field(default_factory=list)  # index tuples
    elements: list = field(default_factory=list)
    checks: int = 0
    budget_exhausted: bool = False
    size_cap_reached: bool = False

    def sets(self, size: int) -> list[list]:
        return [[self.elements[i] for i in s] for s in self.by_size.get(size, [])]

    def maximal_sets(self) -> list[list]:
        return [[self.elements[i] for i in s] for s in self.maximal]


def _check_chunk(args) -> list[tuple[tuple, bool]]:
    elements, target, depth, candidates = args
    return [(c, is_independence_set([elements[i] for i in c], target, depth).independent)
            for c in candidates]


def search_max(target: TargetPair, radius: int, depth: int, size_cap: int = 6,
               anchor=None, workers: int = 1, max_checks: int | None = None,
               elements: Sequence | None = None) -> SearchResult:
    """Find all independence sets up to ``size_cap`` in the ball of the given radius.

    Returns k* (the largest size found) and every maximal set.  A set counts
    as maximal when no one-element extension inside the ball is independent;
    sets of size ``size_cap`` are reported as maximal up to the cap.
    """
    tower = target.tower
    elems = list(elements) if elements is not None else list(tower.ball(radius))
    if anchor is not None:
        if anchor not in elems:
            elems.insert(0, anchor)
        else:
            elems.remove(anchor)
            elems.insert(0, anchor)
    res = SearchResult(0, elements=elems)
    checks = 0

    def run(cands: list[tuple]) -> list[tuple]:
        nonlocal checks
        if max_checks is not None and checks + len(cands) > max_checks:
            cands = cands[: max(0, max_checks - checks)]
            res.budget_exhausted = True
        checks += len(cands)
        if workers > 1 and len(cands) >= 2 * workers:
            size = (len(cands) + workers * 4 - 1) // (workers * 4)
            chunks = [cands[i:i + size] for i in range(0, len(cands), size)]
            with ProcessPoolExecutor(workers) as ex:
                parts = list(ex.map(_check_chunk, [(elems, target, depth, ch) for ch in chunks]))
            flat = [x for part in parts for x in part]
        else:
            flat = _check_chunk((elems, target, depth, cands))
        return sorted(c for c, ok in flat if ok)

    # {s} is a translate of {e}, so one check settles every singleton
    level = run([(0,)])
    if level and anchor is None:
        level = [(i,) for i in range(len(elems))]
    res.by_size[1] = level
    size = 1
    while level and size < size_cap and not res.budget_exhausted:
        known = set(level)
        cands = []
        if size == 1 and anchor is None and target.mode == FREE:
            # pairs come from the short list of independent differences
            cands = [c for c in free_pair_candidates(target, depth, elems)
                     if all((i,) in known for i in c)]
        else:
            for s in level:
                for j in range(s[-1] + 1, len(elems)):
                    c = s + (j,)
                    # every subset one smaller (keeping the anchor) must be independent
                    if all(c[:r] + c[r + 1:] in known for r in range(len(c))
                           if anchor is None or r != 0):
                        cands.append(c)
        level = run(cands)
        size += 1
        if level:
            res.by_size[size] = level
    res.k_star = max((k for k, v in res.by_size.items() if v), default=0)
    res.size_cap_reached = size_cap in res.by_size
    res.checks = checks

    for k in sorted(res.by_size):
        bigger = res.by_size.get(k + 1, [])
        covered = set()
        for s in bigger:
            for r in range(len(s)):
                covered.add(s[:r] + s[r + 1:])
        for s in res.by_size[k]:
            if s not in covered:
                res.maximal.append(s)
    return res


def u_shaped_words(max_len: int, rank: int = W.DEFAULT_RANK):
    """Nontrivial words of length <= max_len that start with some u_n, end
    with some u_n^-1, or equal some u_n1 u_n2^-1 (each listed once)."""
    seen = set()
    n = 2
    while 2 * n + 2 <= max_len:
        u = W.word_u(n, rank)
        for L in range(len(u), max_len + 1):
            for w in W.extensions(u, L):
                for x in (w, W.inv(w)):
                    if x not in seen:
                        seen.add(x)
                        yield x
        n += 1


def _words_by_length(max_len: int, rank: int) -> list[list]:
    out: list[list] = [[] for _ in range(max_len + 1)]
    for w in W.ball(max_len, rank):
        out[len(w)].append(w)
    return out


def u_shaped_in_cosets(tower, level: int, allowed, max_len: int, rank: int = W.DEFAULT_RANK) -> list:
    """The words of :func:`u_shaped_words` whose level-``level`` coset is in ``allowed``.

    A word starting with u_n is u_n w1 w2; w2 is looked up from a table of
    short words keyed by coset and first letter, so only matching words are
    built.  Words ending with u_n^-1 are inverses of the first kind.
    """
    allowed = set(allowed)
    inv_allowed = {tower.coset_inv(c) for c in allowed}
    half = (max_len + 1) // 2
    by_len = _words_by_length(half, rank)
    proj = {w: tower.project(w, level) for ws in by_len for w in ws}
    table: dict = {}
    for ws in by_len:
        for w in ws:
            table.setdefault((len(w), proj[w]), []).append(w)
    b = W.generator(2, rank).letters[0]

    def prefixed(goal: set) -> list:
        found = []
        n = 2
        while 2 * n + 2 <= max_len:
            u = W.word_u(n, rank)
            for k in range(0, max_len - len(u) + 1):
                k2 = min(k, half)
                k1 = k - k2
                for w1 in by_len[k1]:
                    if k1 and w1.letters[0] == b:
                        continue
                    left = tower.coset_inv(tower.coset_mul(tower.project(u, level), proj[w1]))
                    for g in goal:
                        for w2 in table.get((k2, tower.coset_mul(left, g)), ()):
                            if not w2.letters:
                                found.append(W.mul(u, w1))
                                continue
                            if k1 == 0 and w2.letters[0] == b:
                                continue
                            if k1 and w2.letters[0] == -w1.letters[-1]:
                                continue
                            found.append(W.ReducedWord(u.letters + w1.letters + w2.letters, rank))
            n += 1
        return found

    out = set(prefixed(allowed))
    out.update(W.inv(w) for w in prefixed(inv_allowed))
    return sorted(out, key=W.sort_key)


def free_pair_differences(target: TargetPair, depth: int, max_len: int) -> list:
    """All t with |t| <= max_len such that {t, e} is independent (FREE mode).

    Two translates meet in A+ only if t = s1 s2^-1 starts with some u_n,
    ends with some u_n^-1 or is some u_n1 u_n2^-1 (the boundary factor
    forces this), and only if t lies in Γ_2, γ_2Γ_2 or γ_2^-1Γ_2.
    """
    tower = target.tower
    lvl = min(2, depth)
    ok = {tower.identity_coset(lvl), tower.marked(lvl), tower.coset_inv(tower.marked(lvl))}
    e = W.identity()
    return [t for t in u_shaped_in_cosets(tower, lvl, ok, max_len)
            if is_independence_set([t, e], target, depth).independent]


def translate_pairs(diffs, elems: list, radius: int | None = None) -> set[tuple[int, int]]:
    """All (i, j) with elems[i] = t·elems[j] for some t in ``diffs``.

    Every element is at most ``radius`` long, so t·s can only land back in
    the list when s cancels at least |t| - radius letters of t; the list is
    indexed by prefix to find those s directly.
    """
    if radius is None:
        radius = max((len(s) for s in elems), default=0)
    index = {s: i for i, s in enumerate(elems)}
    by_prefix: dict = {}
    for s in elems:
        for c in range(len(s) + 1):
            by_prefix.setdefault(s.letters[:c], []).append(s)
    for lst in by_prefix.values():
        lst.sort(key=len)
    pairs = set()
    for t in diffs:
        n = len(t)
        for c in range(max(0, n - radius), n + 1):
            head = tuple(-x for x in reversed(t.letters[n - c:]))
            limit = radius + 2 * c - n
            for s in by_prefix.get(head, ()):
                if len(s) > limit:
                    break
                i = index.get(W.mul(t, s))
                if i is not None:
                    pairs.add((i, index[s]))
    return pairs


def free_pair_candidates(target: TargetPair, depth: int, elems: list) -> list[tuple]:
    """Index pairs (i, j), i < j, with {elems[i], elems[j]} independent."""
    radius = max(len(s) for s in elems)
    diffs = free_pair_differences(target, depth, 2 * radius)
    return sorted({(min(i, j), max(i, j)) for i, j in translate_pairs(diffs, elems, radius)})
