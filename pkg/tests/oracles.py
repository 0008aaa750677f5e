"""Independent reference computations used by the tests.

Nothing here imports the reduction or tower code: words are plain strings,
matrices are plain integer tuples.
"""

from __future__ import annotations

A = ((1, 2), (0, 1))
B = ((1, 0), (2, 1))
A_INV = ((1, -2), (0, 1))
B_INV = ((1, 0), (-2, 1))
IMAGES = {"a": A, "b": B, "A": A_INV, "B": B_INV}
IDENTITY = ((1, 0), (0, 1))


def mat_mul(x, y, mod=None):
    r = tuple(tuple(sum(x[i][k] * y[k][j] for k in range(2)) for j in range(2)) for i in range(2))
    if mod is not None:
        r = tuple(tuple(v % mod for v in row) for row in r)
    return r


def matrix(text: str, mod=None):
    """Exact image of a letter string (identity for '' or '1') under a -> A, b -> B."""
    m = IDENTITY if mod is None else tuple(tuple(v % mod for v in row) for row in IDENTITY)
    for ch in text:
        if ch == "1":
            continue
        m = mat_mul(m, IMAGES[ch], mod)
    return m


def naive_reduce(text: str) -> str:
    """Repeatedly delete adjacent inverse pairs until none remain."""
    s = text.replace("1", "")
    changed = True
    while changed:
        changed = False
        for i in range(len(s) - 1):
            if s[i] != s[i + 1] and s[i].lower() == s[i + 1].lower():
                s = s[:i] + s[i + 2:]
                changed = True
                break
    return s or "1"


def naive_inverse(text: str) -> str:
    if text == "1":
        return "1"
    return "".join(ch.swapcase() for ch in reversed(text))


def u_text(n: int) -> str:
    return "a" * n + "b" + "A" * n + "B"
