import random
from fractions import Fraction

import pytest

from regdist.automaton import build
from regdist.metric import (
    DIST_TOP,
    DIST_ZERO,
    Config,
    ExponentValue,
    bisim_closure,
    check_bisim,
    distance,
    kleene_descent,
    pair_count,
    phi_rational,
    separation,
    sup_distance,
    table_values,
    witness,
)
from regdist.oracle import brute_distance, brute_witness
from regdist.syntax import Letter, One, parse

from conftest import rand_expr

HALF = Fraction(1, 2)


def test_config_validation():
    assert Config().discount == HALF
    assert Config(Fraction(1, 3)).discount == Fraction(1, 3)
    with pytest.raises(TypeError):
        Config(0.5)
    with pytest.raises(ValueError):
        Config(Fraction(0))
    with pytest.raises(ValueError):
        Config(Fraction(1))
    with pytest.raises(ValueError):
        Config(Fraction(3, 2))


def test_exponent_values_order_by_value():
    assert DIST_ZERO < ExponentValue(7) < ExponentValue(2) < DIST_TOP
    assert DIST_TOP == ExponentValue(0)
    assert max(DIST_ZERO, ExponentValue(3)) == ExponentValue(3)
    assert DIST_ZERO.is_zero and not DIST_TOP.is_zero


def test_exponent_value_extraction():
    assert DIST_TOP.value(HALF) == 1
    assert ExponentValue(3).value(HALF) == Fraction(1, 8)
    assert ExponentValue(2).value(Fraction(1, 3)) == Fraction(1, 9)
    assert DIST_ZERO.value(HALF) == 0
    assert ExponentValue(2).scaled() == ExponentValue(3)
    assert DIST_ZERO.scaled() == DIST_ZERO


def test_pair_count():
    assert pair_count(1) == 0
    assert pair_count(4) == 6
    assert pair_count(12) == 66


def test_descent_trace_on_the_running_pair():
    aut = build([parse("a*"), parse("a+1")], ("a",))
    res = kleene_descent(aut)
    assert res.iterations == 3
    root_pair = (0, 1)
    assert [t[root_pair].exponent for t in res.trace] == [0, 1, 2, 2]
    assert res.table[root_pair] == ExponentValue(2)
    # tables descend pointwise
    for earlier, later in zip(res.trace, res.trace[1:]):
        assert all(later[p] <= earlier[p] for p in earlier)


def test_descent_rewrites_inseparable_pairs_to_zero():
    aut = build([parse("(a+b)*"), parse("(a*;b*)*")], ("a", "b"))
    res = kleene_descent(aut)
    assert all(ev == DIST_ZERO for ev in res.table.values())
    assert res.iterations == pair_count(aut.n_states)


def test_separation_exponents():
    assert separation(parse("a*"), parse("a+1")) == ExponentValue(2)
    assert separation(parse("a*"), parse("0")) == ExponentValue(0)
    assert separation(parse("a"), parse("b")) == ExponentValue(1)
    assert separation(parse("a*"), parse("a*;1")) == DIST_ZERO
    assert separation(parse("(a+b)*"), parse("(a*;b*)*")) == DIST_ZERO


def test_distance_values():
    assert distance(parse("a*"), parse("a+1")) == Fraction(1, 4)
    assert distance(parse("a*"), parse("0")) == 1
    assert distance(parse("a"), parse("b")) == HALF
    assert distance(parse("(a+b)*"), parse("(a*;b*)*")) == 0


def test_distance_tracks_the_discount():
    third = Config(Fraction(1, 3))
    assert distance(parse("a*"), parse("a+1"), third) == Fraction(1, 9)
    assert distance(parse("a*"), parse("0"), third) == 1


def test_witness_values():
    assert witness(parse("a*"), parse("a+1")) == "aa"
    assert witness(parse("a*"), parse("0")) == ""
    assert witness(parse("a"), parse("b")) == "a"
    assert witness(parse("a*"), parse("a*")) is None
    assert witness(parse("(a+b)*"), parse("(a*;b*)*")) is None


def test_witness_agrees_with_enumeration(corpus):
    for pair in corpus[:150]:
        w = witness(pair.left, pair.right, pair.alphabet)
        assert w == brute_witness(pair.left, pair.right, pair.alphabet, pair.bound)


def test_distance_is_the_discount_power_of_the_witness_length(corpus):
    for pair in corpus[:150]:
        d = distance(pair.left, pair.right, None, pair.alphabet)
        w = witness(pair.left, pair.right, pair.alphabet)
        if w is None:
            assert d == 0
        else:
            assert d == HALF ** len(w)


def test_distance_is_a_pseudometric_on_samples(corpus):
    for x, y, z in zip(corpus[:40], corpus[40:80], corpus[80:120]):
        if x.alphabet != y.alphabet or y.alphabet != z.alphabet:
            continue
        e, f, g = x.left, y.left, z.left
        ab = distance(e, f, None, x.alphabet)
        bc = distance(f, g, None, x.alphabet)
        ac = distance(e, g, None, x.alphabet)
        assert ac <= max(ab, bc)  # ultrametric, stronger than the triangle bound
        assert ab == distance(f, e, None, x.alphabet)
        assert distance(e, e, None, x.alphabet) == 0


def test_phi_rational_fixpoint():
    cfg = Config()
    aut = build([parse("a*"), parse("a+1")], ("a",))
    vals = table_values(kleene_descent(aut).table, cfg)
    assert phi_rational(aut, vals, cfg) == vals
    assert vals[(0, 1)] == Fraction(1, 4)


def test_sup_distance():
    a = {(0, 1): Fraction(1, 2), (0, 2): Fraction(0)}
    b = {(0, 1): Fraction(1, 4), (0, 2): Fraction(1, 8)}
    assert sup_distance(a, b) == Fraction(1, 4)
    assert sup_distance(a, a) == 0
    with pytest.raises(ValueError):
        sup_distance(a, {(0, 1): Fraction(1, 4)})


def test_bisim_closure_of_a_real_zero_pair():
    e, f = parse("(a+b)*"), parse("(a*;b*)*")
    rel = bisim_closure(e, f, ("a", "b"))
    assert len(rel) == 3
    assert check_bisim(rel, e, f)


def test_bisim_closure_of_a_trivial_pair_is_empty():
    e, f = parse("a*"), parse("a*;1")
    assert bisim_closure(e, f, ("a",)) == ()
    assert check_bisim((), e, f)


def test_check_bisim_rejects_gaps():
    e, f = parse("(a+b)*"), parse("(a*;b*)*")
    rel = bisim_closure(e, f, ("a", "b"))
    assert not check_bisim((), e, f)
    assert not check_bisim(rel[:1], e, f)


def test_check_bisim_rejects_output_mismatch():
    assert not check_bisim(((Letter("a"), One()),), Letter("a"), One())


def test_bisim_closure_of_a_separated_pair_fails_the_check():
    e, f = parse("a*"), parse("a+1")
    rel = bisim_closure(e, f, ("a",))
    assert rel  # nonempty, but contains an output-disagreeing pair
    assert not check_bisim(rel, e, f)


def test_metric_against_oracle_sample(corpus):
    for pair in corpus[:100]:
        got = distance(pair.left, pair.right, None, pair.alphabet)
        want = brute_distance(pair.left, pair.right, pair.alphabet, pair.bound, HALF)
        assert got == want
