import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from indeplab import words as W
from indeplab.boundary import (IN, OUT, UNDETERMINED, PrefixConstraint, PrefixConstraintSet,
                               WitnessPrefix, member_prefix, must_not_start, must_start,
                               satisfiable, translate_cylinder, translate_prefix,
                               validate_witness)
from oracles import naive_inverse, naive_reduce, u_text

P = W.parse
F = W.format_word


def literal_in_D(t_text, y_text, n):
    """t·y starts with u_n, decided on strings; None if y is too short to tell."""
    prod = naive_reduce(t_text + y_text)
    eaten = (len(t_text.replace("1", "")) + len(y_text) - len(prod.replace("1", ""))) // 2
    if eaten >= len(y_text) or len(prod) < 2 * n + 2:
        return None
    return prod.startswith(u_text(n))


# ------------------------------------------------------- translate_cylinder

def test_translate_identity():
    assert translate_cylinder(W.identity(), 2, True) == must_start(W.word_u(2))


def test_translate_by_u2():
    c = translate_cylinder(W.word_u(2), 2, True)
    assert c == must_not_start(P("b"))


def test_translate_by_b():
    c = translate_cylinder(P("b"), 2, True)
    assert c.positive
    # b^-1 u_2 reduced on strings
    assert F(c.word) == naive_reduce("B" + u_text(2)) == "BaabAAB"


def test_translate_want_out_negates():
    for t in ("1", "b", "aabAAB", "aabAABab"):
        c_in = translate_cylinder(P(t), 3, True)
        assert translate_cylinder(P(t), 3, False) == c_in.negated()


def test_translate_rejects_small_index():
    with pytest.raises(ValueError):
        translate_cylinder(P("a"), 1)


def test_translate_cylinder_against_string_oracle():
    rng = random.Random(3)
    checked = 0
    for _ in range(5000):
        n = rng.randint(2, 6)
        if rng.random() < 0.5:
            t = W.mul(W.word_u(n), W.random_word(rng, rng.randint(0, 8), 2))
        else:
            t = W.random_word(rng, rng.randint(0, 12), 2)
        y = W.random_word(rng, len(t) + 2 * n + 3 + rng.randint(0, 4), 2)
        if rng.random() < 0.5:
            # aim y at the interesting cylinder so both answers occur
            c = translate_cylinder(t, n, True)
            y = W.random_word(rng, len(c.word) + len(t) + 2 * n + 3, 2, start=c.word)
        truth = literal_in_D(F(t), F(y).replace("1", ""), n)
        if truth is None:
            continue
        assert translate_cylinder(t, n, True).holds_on(y) == truth
        checked += 1
    assert checked > 3000


# ---------------------------------------------------------- translate_prefix

@settings(max_examples=300)
@given(st.text("abAB", max_size=8), st.text("abAB", min_size=1, max_size=6),
       st.text("abAB", min_size=16, max_size=24))
def test_translate_prefix_against_strings(s, w, y):
    s_w, w_w, y_w = P(s), P(w), P(y)
    if len(w_w) == 0 or len(y_w) < len(s_w) + len(w_w) + 2:
        return
    prod = naive_reduce(F(s_w) + F(y_w))
    truth = prod.startswith(F(w_w))
    assert translate_prefix(s_w, w_w).holds_on(y_w) == truth


# --------------------------------------------------------------- satisfiable

def test_satisfiable_single_cylinder():
    wp = satisfiable(PrefixConstraintSet.of([must_start(W.word_u(2))]))
    assert wp is not None
    assert F(wp.prefix) == u_text(2) + "a"


def test_incompatible_prefixes():
    assert satisfiable(PrefixConstraintSet.of([must_start(P("a")), must_start(P("b"))])) is None


def test_satisfiable_with_exclusions():
    cs = PrefixConstraintSet.of([must_start(P("aa")), must_not_start(P("aaa")),
                                 must_not_start(P("aab"))])
    wp = satisfiable(cs)
    assert F(wp.prefix) == "aaB"


def test_all_continuations_blocked():
    cs = PrefixConstraintSet.of([must_start(P("a")), must_not_start(P("aa")),
                                 must_not_start(P("ab")), must_not_start(P("aB"))])
    assert satisfiable(cs) is None


def test_negative_on_positive_prefix():
    cs = PrefixConstraintSet.of([must_start(P("ab")), must_not_start(P("a"))])
    assert satisfiable(cs) is None


def test_a_infinity_flag_never_changes_answer():
    cs = PrefixConstraintSet.of([must_start(P("aaa"))])
    assert satisfiable(cs) is not None
    wp = satisfiable(cs.excluding_a_infinity())
    assert wp is not None and wp.excludes_a_infinity


def test_negative_constraint_needs_word():
    with pytest.raises(ValueError):
        PrefixConstraint(False, W.identity())


def _brute_satisfiable(cs, depth):
    """Some reduced word of length `depth` meets every constraint literally."""
    for w in W.sphere(depth):
        ok = True
        for c in cs.constraints:
            hit = W.starts_with(w, c.word)
            if hit != c.positive:
                ok = False
                break
        if ok:
            return True
    return False


constraint = st.tuples(st.booleans(), st.text("abAB", min_size=1, max_size=4))


@settings(max_examples=200, deadline=None)
@given(st.lists(constraint, max_size=5))
def test_satisfiable_matches_brute_force(raw):
    cons = [PrefixConstraint(pos, P(w)) for pos, w in raw if len(P(w)) > 0]
    cs = PrefixConstraintSet.of(cons)
    # every word has length <= 4, so depth 5 decides the question
    expected = _brute_satisfiable(cs, 5)
    wp = satisfiable(cs)
    assert (wp is not None) == expected
    if wp is not None:
        assert validate_witness(cs, wp)


@settings(max_examples=200)
@given(st.lists(constraint, max_size=4), constraint)
def test_satisfiable_is_monotone(raw, extra):
    cons = [PrefixConstraint(pos, P(w)) for pos, w in raw if len(P(w)) > 0]
    cs = PrefixConstraintSet.of(cons)
    if len(P(extra[1])) == 0:
        return
    bigger = cs.add(PrefixConstraint(extra[0], P(extra[1])))
    if satisfiable(cs) is None:
        assert satisfiable(bigger) is None


def test_validate_rejects_bad_witness():
    cs = PrefixConstraintSet.of([must_start(P("ab")), must_not_start(P("abb"))])
    assert not validate_witness(cs, WitnessPrefix(P("abbA"), 4))
    assert not validate_witness(cs, WitnessPrefix(P("aB"), 2))
    assert validate_witness(cs, satisfiable(cs))


def test_constraint_json_round_trip():
    cs = PrefixConstraintSet.of([must_start(P("ab")), must_not_start(P("abA"))], True)
    assert PrefixConstraintSet.from_json(cs.to_json()) == cs
    assert cs.to_json()["constraints"][0] == {"polarity": "+", "word": "ab"}


# -------------------------------------------------------------- member_prefix

def test_member_prefix_examples():
    assert member_prefix(P(u_text(2) + "a"), W.identity(), 2) == IN
    assert member_prefix(P("b"), W.identity(), 2) == OUT
    assert member_prefix(P("aa"), W.identity(), 2) == UNDETERMINED


def test_member_prefix_full_cancellation_is_undetermined():
    t = P("aab")
    assert member_prefix(P(naive_inverse("aab")), t, 2) == UNDETERMINED


def test_member_prefix_agrees_with_translate_cylinder():
    rng = random.Random(17)
    determined = 0
    for _ in range(20_000):
        n = rng.randint(2, 6)
        t = W.random_word(rng, rng.randint(0, 12), 2)
        if rng.random() < 0.3:
            t = W.mul(W.word_u(n), t)
        y = W.random_word(rng, len(t) + 2 * n + 3 + rng.randint(0, 3), 2)
        if rng.random() < 0.5:
            head = translate_cylinder(t, n, True).word
            y = W.random_word(rng, len(head) + len(t) + 2 * n + 3, 2, start=head)
        verdict = member_prefix(y, t, n)
        if verdict == UNDETERMINED:
            continue
        determined += 1
        assert translate_cylinder(t, n, True).holds_on(y) == (verdict == IN)
    assert determined > 10_000
