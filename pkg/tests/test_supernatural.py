import pytest
from hypothesis import given

import oracles
from limitalg.supernatural import (
    INF,
    ONE,
    GIPair,
    Supernatural,
    pair_equiv,
    supernatural_from_sequence,
)
from strategies import gi_pairs, supernaturals


def sn(text):
    return Supernatural.parse(text)


def test_from_sequence():
    assert supernatural_from_sequence([], [2]) == sn("2^inf")
    assert supernatural_from_sequence([3], [2]) == sn("3*2^inf")
    assert supernatural_from_sequence([2, 3], [6]) == sn("2^inf*3^inf")
    assert supernatural_from_sequence([4, 6]) == Supernatural.from_int(24)


@pytest.mark.parametrize("pre,period", [([], [2]), ([3], [2]), ([2, 3], [6]), ([12, 5], [3, 3]), ([], [10])])
def test_from_sequence_matches_factoring(pre, period):
    assert supernatural_from_sequence(pre, period).exponents == oracles.supernatural_exponents(pre, period)


def test_arithmetic_and_text():
    x = sn("3*2^inf")
    assert str(x) == "2^inf*3"
    assert x * 3 == sn("2^inf*9")
    assert x.divide(6) == sn("2^inf")
    assert not x.is_finite
    assert int(sn("12")) == 12
    assert str(ONE) == "1"
    with pytest.raises(ValueError):
        x.divide(5)
    with pytest.raises(ValueError):
        int(x)


@given(supernaturals())
def test_json_round_trip(x):
    assert Supernatural.from_json(x.to_json()) == x
    assert Supernatural.parse(str(x)) == x


def test_worked_pair_examples():
    w = pair_equiv(GIPair(sn("2^inf"), sn("3")), GIPair(sn("3*2^inf"), ONE))
    assert w and (w.a, w.b) == (1, 3)
    assert not pair_equiv(GIPair(sn("2^inf"), ONE), GIPair(ONE, sn("2^inf")))
    p = GIPair(sn("6*5^inf"), sn("7"))
    assert (pair_equiv(p, p).a, pair_equiv(p, p).b) == (1, 1)


@given(gi_pairs, gi_pairs)
def test_pair_equiv_agrees_with_search(p, q):
    got = pair_equiv(p, q)
    want = oracles.pair_equiv_search(p.r.exponents, p.s.exponents, q.r.exponents, q.s.exponents)
    assert bool(got) == (want is not None)
    if got:
        assert (got.a, got.b) == want


@given(gi_pairs, gi_pairs)
def test_pair_equiv_is_equality_of_canonical_forms(p, q):
    assert bool(pair_equiv(p, q)) == (p.canonical() == q.canonical())


@given(gi_pairs, gi_pairs, gi_pairs)
def test_pair_equiv_is_an_equivalence(p, q, r):
    assert pair_equiv(p, p)
    assert bool(pair_equiv(p, q)) == bool(pair_equiv(q, p))
    if pair_equiv(p, q) and pair_equiv(q, r):
        assert pair_equiv(p, r)


@given(gi_pairs, gi_pairs)
def test_witness_satisfies_defining_equations(p, q):
    w = pair_equiv(p, q)
    if w:
        assert p.r * w.b == q.r * w.a
        assert p.s * w.a == q.s * w.b


@given(supernaturals(), supernaturals())
def test_origin_shift_invariance(r, s):
    # moving a finite factor from s to r stays in the same class
    for a in (2, 3, 4, 6):
        if Supernatural.from_int(a).divides(s):
            assert pair_equiv(GIPair(r, s), GIPair(r * a, s.divide(a)))


def test_infinite_exponent_value():
    assert sn("2^inf").exponent(2) == INF
