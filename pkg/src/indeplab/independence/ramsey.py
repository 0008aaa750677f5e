"""Upper bounds for multicolour Ramsey numbers from the standard recursion.

R(c) = 1 if some c_i = 1, R(c) = c_1 with one colour, and otherwise
R(c) = 2 - k + sum_i R(c - e_i).

Substituting g = R + (2-k)/(k-1) turns the recursion into g(c) = sum_i
g(c - e_i), so g counts monotone lattice paths from c to the first point
with a coordinate equal to 1, weighted by 1/(k-1).  A path that stops on
coordinate i makes c_i - 1 steps in direction i (the last one fixed) and
e_j <= c_j - 2 steps in every other direction j, giving

    R(c) = (k - 2 + P) / (k - 1),
    P = sum_i sum_e (c_i - 2 + E)! / ((c_i - 2)! prod_j e_j!),  E = sum e_j.

The inner sums are evaluated with binomial convolutions of integer
sequences.  :func:`ramsey_upper_recursive` keeps the literal memoized
recursion as an independent check.
"""

from __future__ import annotations

import sys
from functools import lru_cache
from math import comb


def _validate(args) -> tuple[int, ...]:
    cs = tuple(int(c) for c in args)
    if not cs:
        raise ValueError("ramsey_upper needs at least one argument")
    if any(c < 1 for c in cs):
        raise ValueError("arguments must be >= 1")
    return cs


def _binomial_conv(x: list[int], y: list[int]) -> list[int]:
    """Coefficients of the product of two exponential generating functions."""
    out = [0] * (len(x) + len(y) - 1)
    for i, a in enumerate(x):
        if a:
            for j, b in enumerate(y):
                out[i + j] += comb(i + j, i) * a * b
    return out


def ramsey_upper(*args: int) -> int:
    cs = _validate(args[0] if len(args) == 1 and isinstance(args[0], (list, tuple)) else args)
    if any(c == 1 for c in cs):
        return 1
    k = len(cs)
    if k == 1:
        return cs[0]
    # EGF of one coordinate: sum_{e=0}^{c-2} x^e / e!  ->  all-ones sequence
    seqs = [[1] * (c - 1) for c in cs]
    prefix = [[1]]
    for s in seqs:
        prefix.append(_binomial_conv(prefix[-1], s))
    suffix = [[1]]
    for s in reversed(seqs):
        suffix.append(_binomial_conv(suffix[-1], s))
    suffix.reverse()
    total = 0
    for i, c in enumerate(cs):
        others = _binomial_conv(prefix[i], suffix[i + 1])
        r = c - 2
        # others[E] = sum over e with |e| = E of E!/prod e_j!
        total += sum(comb(r + E, E) * b for E, b in enumerate(others))
    num = k - 2 + total
    q, rem = divmod(num, k - 1)
    if rem:
        raise ArithmeticError("non-integral Ramsey bound; internal error")
    return q


def ramsey_upper_recursive(*args: int) -> int:
    """The recursion evaluated literally (memoized on sorted tuples)."""
    cs = _validate(args[0] if len(args) == 1 and isinstance(args[0], (list, tuple)) else args)
    limit = sum(cs) + 100
    if sys.getrecursionlimit() < limit:
        sys.setrecursionlimit(limit)
    return _rec(tuple(sorted(cs)))


@lru_cache(maxsize=None)
def _rec(cs: tuple[int, ...]) -> int:
    if cs[0] == 1:
        return 1
    k = len(cs)
    if k == 1:
        return cs[0]
    total = 2 - k
    prev = 0
    for i in range(k):
        if i == 0 or cs[i] != cs[i - 1]:
            nxt = list(cs)
            nxt[i] -= 1
            prev = _rec(tuple(sorted(nxt)))
        total += prev
    return total


FINAL_BOUND_ARGS = (21, 21, 13, 13, 4, 4, 4, 4, 3, 3, 3, 3, 6, 6, 4, 4, 3, 3)
