"""The eight acceptance criteria, each at its stated size and time limit.

Every criterion records one PASS/FAIL line; the lines are printed in the
pytest terminal summary, or directly when this file is run as a script.
"""

from __future__ import annotations

import json
import os
import random
import sys
import tempfile
import time

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from indeplab import words as W  # noqa: E402
from indeplab.boundary import IN, UNDETERMINED, member_prefix, translate_cylinder  # noqa: E402
from indeplab.cli import main as cli_main  # noqa: E402
from indeplab.independence import (TYPE_BOUNDS, TYPES, LemmaBudget, TargetPair,  # noqa: E402
                                   bound_experiment, prediction_experiment, ramsey_upper,
                                   verify_lemma)
from indeplab.independence.bounds import build_type_graph  # noqa: E402
from indeplab.independence.ramsey import FINAL_BOUND_ARGS  # noqa: E402
from indeplab.towers import IntegerTower, SanovTower  # noqa: E402
from oracles import naive_reduce  # noqa: E402

RESULTS: list[str] = []


def record(number: int, title: str, ok: bool, seconds: float, limit: float, detail: str) -> bool:
    ok = ok and seconds < limit
    line = (f"criterion {number} {'PASS' if ok else 'FAIL'}  {title}: {detail} "
            f"[{seconds:.1f}s of {limit:.0f}s]")
    RESULTS.append(line)
    print(line, flush=True)
    return ok


# ---------------------------------------------------------------- 1

def _pattern_word(rng):
    """A word built from one of the four shapes, with no cancellation at the joins.

    Returns (t, shape, first, last); u_m u_n^-1 always loses the B·b pair,
    which is part of that shape.
    """
    m, n = rng.randint(2, 6), rng.randint(2, 6)
    shape = rng.choice(("uvu", "uv", "vu", "uu"))
    if shape == "uu":
        if m == n:
            n += 1
        return W.mul(W.word_u(m), W.inv(W.word_u(n))), shape, m, n
    um, un_inv = W.word_u(m), W.inv(W.word_u(n))
    while True:
        v = W.random_word(rng, rng.randint(0 if shape != "uvu" else 1, 8), 2)
        left = shape == "vu" or W.cancellation(um, v) == 0
        right = shape == "uv" or W.cancellation(v, un_inv) == 0
        if left and right:
            break
    if shape == "uvu":
        return W.product(um, v, un_inv), shape, m, n
    if shape == "uv":
        return W.mul(um, v), shape, m, None
    return W.mul(v, un_inv), shape, None, n


def criterion_1() -> bool:
    t0 = time.perf_counter()
    rng = random.Random(1)
    bad = 0
    e = W.identity()
    for _ in range(100_000):
        x, y, z = (W.random_word(rng, rng.randint(0, 12), 2) for _ in range(3))
        xy = W.mul(x, y)
        if W.mul(xy, z) != W.mul(x, W.mul(y, z)):
            bad += 1
        if W.mul(x, W.inv(x)) != e or W.mul(W.inv(x), x) != e:
            bad += 1
        if W.format_word(xy) != naive_reduce(W.format_word(x) + W.format_word(y)):
            bad += 1
    forms = bad_forms = 0
    for _ in range(10_000):
        t, shape, first, last = _pattern_word(rng)
        found = W.decompose(t)
        if not any(f.shape == shape and (first is None or f.first == first)
                   and (last is None or f.last == last) for f in found):
            bad_forms += 1
        for f in found:
            forms += 1
            if f.rebuild() != t:
                bad_forms += 1
    secs = time.perf_counter() - t0
    return record(1, "word algebra", bad == 0 and bad_forms == 0, secs, 10,
                  f"1e5 triples, {bad} algebra failures; 1e4 pattern words, {forms} forms, "
                  f"{bad_forms} round-trip failures")


# ---------------------------------------------------------------- 2

def criterion_2() -> bool:
    t0 = time.perf_counter()
    rng = random.Random(2)
    determined = disagree = inside = 0
    for _ in range(100_000):
        n = rng.randint(2, 6)
        t = W.random_word(rng, rng.randint(0, 12), 2)
        if rng.random() < 0.3 and 2 * n + 2 <= 12:
            # t starting with u_n exercises the negative rule
            t = W.mul(W.word_u(n), W.random_word(rng, rng.randint(0, 10 - 2 * n), 2))
        floor = len(t) + 2 * n + 3
        c = translate_cylinder(t, n, True)
        if rng.random() < 0.5:
            start = W.ReducedWord(c.word.letters[:rng.randint(0, len(c.word))], 2)
            y = W.random_word(rng, max(floor, len(start)) + rng.randint(0, 4), 2, start=start)
        else:
            y = W.random_word(rng, floor + rng.randint(0, 4), 2)
        verdict = member_prefix(y, t, n)
        if verdict == UNDETERMINED:
            continue
        determined += 1
        inside += verdict == IN
        if c.holds_on(y) != (verdict == IN):
            disagree += 1
    secs = time.perf_counter() - t0
    ok = disagree == 0 and determined > 50_000 and 0 < inside < determined
    return record(2, "starts-with rules vs direct membership", ok, secs, 30,
                  f"1e5 instances, {determined} determined ({inside} in), {disagree} disagreements")


# ---------------------------------------------------------------- 3 and 8

def _search_report(path: str) -> int:
    return cli_main(["search", "--tower", "integer", "--p", "3", "--q", "5", "--mode", "RF",
                     "--radius", "40", "--depth", "6", "--size-cap", "6", "--seed", "0",
                     "--out", path])


def criterion_3(path: str) -> bool:
    t0 = time.perf_counter()
    code = _search_report(path)
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    f = data["findings"]
    secs = time.perf_counter() - t0
    ok = (code == 0 and not data["budget_exhausted"] and f["k_star"] <= 5
          and "6" not in f["count_by_size"] and f["ball_size"] == 81)
    return record(3, "RF bound, IntegerTower(3,5), |s|<=40, N=6", ok, secs, 600,
                  f"k* = {f['k_star']}, sets by size {f['count_by_size']}, {f['checks']} checks")


def criterion_8(first: str) -> bool:
    t0 = time.perf_counter()
    second = first + ".again"
    _search_report(second)
    with open(first, "rb") as a, open(second, "rb") as b:
        same = a.read() == b.read()
    secs = time.perf_counter() - t0
    return record(8, "determinism", same, secs, 600,
                  "criterion 3 report " + ("byte-identical" if same else "DIFFERS") + " on rerun")


# ---------------------------------------------------------------- 4

def criterion_4() -> bool:
    t0 = time.perf_counter()
    parts = []
    total_bad = 0
    for name in ("RF1", "RF2"):
        rep = verify_lemma(name, IntegerTower(3, 5), LemmaBudget(depth=3, samples=0))
        parts.append(f"{name} {rep.instances}/{rep.counterexample_count}")
        total_bad += rep.counterexample_count
    for name in ("free1", "free5"):
        rep = verify_lemma(name, SanovTower(3), LemmaBudget(depth=3, samples=0))
        parts.append(f"{name} {rep.instances}/{rep.counterexample_count}")
        total_bad += rep.counterexample_count
    for name in ("free2", "free6", "free7"):
        rep = verify_lemma(name, SanovTower(3), LemmaBudget(depth=3, samples=10_000, radius=14))
        parts.append(f"{name} {rep.instances}/{rep.counterexample_count}")
        total_bad += rep.counterexample_count
    secs = time.perf_counter() - t0
    return record(4, "lemma verifiers", total_bad == 0, secs, 300,
                  "instances/counterexamples: " + ", ".join(parts))


# ---------------------------------------------------------------- 5

def criterion_5() -> bool:
    t0 = time.perf_counter()
    target = TargetPair.free(SanovTower(3))
    rep = prediction_experiment(target, depth=3, radius=8, pairs=1000, sketches=20, seed=0,
                                class_tower=SanovTower(3, max_depth=10))
    secs = time.perf_counter() - t0
    ok = rep.pairs == 1000 and rep.unmatched == 0 and rep.disagreements == 0 and rep.determined > 0
    return record(5, "classifier completeness and predictions", ok, secs, 600,
                  f"{rep.pairs} pairs, {rep.unmatched} unmatched, {rep.determined} determined "
                  f"sketches, {rep.disagreements} disagreements, types {rep.type_counts}")


# ---------------------------------------------------------------- 6

def criterion_6() -> bool:
    t0 = time.perf_counter()
    graph = build_type_graph(radius=10, tower=SanovTower(3), depth=3,
                             class_tower=SanovTower(3, max_depth=10))
    parts = []
    ok = True
    for kind in TYPES:
        rep = bound_experiment(kind, graph=graph)
        ok = ok and rep.passed and not rep.budget_exhausted
        parts.append(f"{kind} {rep.largest_independent}<{TYPE_BOUNDS[kind]}")
    secs = time.perf_counter() - t0
    return record(6, "per-type bounds, R=10, N=3", ok, secs, 900,
                  f"{len(graph.elements) - 1} candidates; " + ", ".join(parts))


# ---------------------------------------------------------------- 7

def criterion_7() -> bool:
    t0 = time.perf_counter()
    ok = ramsey_upper(3, 3) == 6
    ok = ok and all(ramsey_upper(c) == c for c in range(1, 11))
    rng = random.Random(7)
    bad = 0
    for _ in range(1000):
        cs = [rng.randint(1, 9) for _ in range(rng.randint(1, 5))]
        base = ramsey_upper(*cs)
        sh = cs[:]
        rng.shuffle(sh)
        i = rng.randrange(len(cs))
        up = cs[:]
        up[i] += 1
        if ramsey_upper(*sh) != base or ramsey_upper(*up) < base:
            bad += 1
    final = ramsey_upper(*FINAL_BOUND_ARGS)
    ok = ok and bad == 0 and isinstance(final, int) and final > 0
    secs = time.perf_counter() - t0
    return record(7, "Ramsey calculator", ok, secs, 10,
                  f"R(3,3)=6, 1e3 tuples with {bad} failures, final bound = {final}")


# ------------------------------------------------------------------ pytest

@pytest.fixture(scope="module")
def search_report(tmp_path_factory):
    return str(tmp_path_factory.mktemp("acceptance") / "criterion3.json")


def test_criterion_1_word_algebra():
    assert criterion_1()


def test_criterion_2_starts_with_rules():
    assert criterion_2()


def test_criterion_3_rf_bound(search_report):
    assert criterion_3(search_report)


def test_criterion_4_lemma_verifiers():
    assert criterion_4()


def test_criterion_5_classifier():
    assert criterion_5()


def test_criterion_6_type_bounds():
    assert criterion_6()


def test_criterion_7_ramsey():
    assert criterion_7()


def test_criterion_8_determinism(search_report):
    if not os.path.exists(search_report):
        _search_report(search_report)
    assert criterion_8(search_report)


if __name__ == "__main__":
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "criterion3.json")
        results = [criterion_1(), criterion_2(), criterion_3(path), criterion_4(),
                   criterion_5(), criterion_6(), criterion_7(), criterion_8(path)]
    sys.exit(0 if all(results) else 1)
