import pytest
from hypothesis import given

import oracles
from limitalg.algebra import (
    DigraphAlgebra,
    MatrixUnit,
    direct_sum,
    identity_embedding,
    make_upper_triangular,
    refinement_embedding,
    standard_embedding,
    twist_embedding,
    unit,
)
from limitalg.order import (
    DiagonalProjection,
    OrderError,
    PartialIsometryElement,
    check_tower_order_preserving,
    diagonal_order,
    has_infinitely_many_restrictions,
    induced_map,
    is_locally_order_preserving,
    is_order_preserving,
    minimal_subordinate_path,
    restriction_count,
)
from limitalg.tower import build_tower, constant_tower, explicit_rule, refinement_rule, standard_rule, twist_rule
from strategies import triangular_algebras


def d(i, block=0):
    return (block, i)


def test_diagonal_order_t3():
    rel = diagonal_order(make_upper_triangular(3))
    assert rel.pairs == {(d(i), d(j)) for i in range(1, 4) for j in range(i, 4)}


def test_diagonal_order_counts_and_blocks():
    assert len(diagonal_order(make_upper_triangular(4)).pairs) == 10
    rel = diagonal_order(direct_sum([make_upper_triangular(2)] * 2))
    assert all(p[0] == q[0] for p, q in rel.pairs)


@given(triangular_algebras())
def test_diagonal_order_is_partial_order(alg):
    rel = diagonal_order(alg)
    points = alg.diagonal
    for p in points:
        assert rel.holds(p, p)
    for p, q in rel.pairs:
        if p != q:
            assert not rel.holds(q, p)
        for r in points:
            if rel.holds(q, r):
                assert rel.holds(p, r)


def test_induced_maps():
    t4 = make_upper_triangular(4)
    w = PartialIsometryElement.of(1, [unit(1, 3), unit(2, 4)])
    assert induced_map(t4, w) == {d(1): d(3), d(2): d(4)}
    w2 = PartialIsometryElement.of(1, [unit(1, 4), unit(2, 3)])
    assert induced_map(t4, w2) == {d(1): d(4), d(2): d(3)}
    assert induced_map(t4, PartialIsometryElement.of(1, [unit(1, 1)])) == {d(1): d(1)}


def test_order_preserving_elements():
    t4 = make_upper_triangular(4)
    assert is_order_preserving(t4, PartialIsometryElement.of(1, [unit(1, 3), unit(2, 4)]))
    check = is_order_preserving(t4, PartialIsometryElement.of(1, [unit(1, 4), unit(2, 3)]))
    assert not check
    assert check.counterexample == ((d(1), d(2)), (d(4), d(3)))
    for u in t4.units:
        assert is_order_preserving(t4, PartialIsometryElement.of(1, [u]))


def test_partial_isometry_rejects_shared_rows():
    with pytest.raises(OrderError):
        PartialIsometryElement.of(1, [unit(1, 3), unit(1, 4)])


def test_local_order_preservation():
    assert is_locally_order_preserving(refinement_embedding(2, 2))
    assert is_locally_order_preserving(standard_embedding(2, 2))
    check = is_locally_order_preserving(twist_embedding(1))
    assert not check
    assert check.unit == unit(1, 2)
    assert check.counterexample == ((d(1), d(2)), (d(4), d(3)))
    assert check.scope == "presentation"


@pytest.mark.parametrize("n,m", [(2, 2), (3, 2), (2, 3), (4, 2)])
def test_local_order_preservation_matches_oracle(n, m):
    for emb in (refinement_embedding(n, m), standard_embedding(n, m)):
        for u in emb.source.units:
            pairs = [(v.row, v.col) for v in sorted(
                MatrixUnit(0, r, c) for _, r, c in oracles.image_of(
                    [[j for _, j in row] for row in emb.spread], u))]
            assert oracles.order_preserving_pairs(pairs)[0]
    twist = twist_embedding(1)
    u = unit(1, 2)
    ok, _ = oracles.order_preserving_pairs([(r, c) for _, r, c in oracles.twist_image(1, 2)])
    assert not ok and not is_locally_order_preserving(twist)
    assert is_locally_order_preserving(twist).unit == u


def test_tower_composites():
    assert check_tower_order_preserving(build_tower(refinement_rule(), 3)).ok
    bad = check_tower_order_preserving(build_tower(twist_rule(1), 2))
    assert not bad.ok and bad.from_level == 1


def test_restriction_counts():
    tower = build_tower(refinement_rule(), 3)
    assert restriction_count(tower, unit(1, 2), 1, 3) == 4
    assert restriction_count(constant_tower(make_upper_triangular(2), 3), unit(1, 2), 1, 4) == 1
    assert restriction_count(build_tower(twist_rule(1), 1), unit(1, 2), 1, 2) == 2


def test_restriction_verdicts():
    assert has_infinitely_many_restrictions(build_tower(refinement_rule(), 3), unit(1, 2), 1).verdict == "yes"
    constant = constant_tower(make_upper_triangular(2), 3)
    assert has_infinitely_many_restrictions(constant, unit(1, 2), 1).verdict == "no"
    t2 = make_upper_triangular(2)
    rule = explicit_rule([t2, t2, t2], [identity_embedding(t2)] * 2)
    verdict = has_infinitely_many_restrictions(build_tower(rule, 2), unit(1, 2), 1)
    assert str(verdict) == "unknown(3)"
    assert not verdict.exact


def test_minimal_subordinate_paths():
    ref = build_tower(refinement_rule(), 2)
    p = DiagonalProjection.of(1, 2)
    assert minimal_subordinate_path(ref, p, 3) == [d(2), d(3), d(5)]
    std = build_tower(standard_rule(), 2)
    assert minimal_subordinate_path(std, p, 3) == [d(2), d(2), d(2)]
    constant = constant_tower(make_upper_triangular(2), 3)
    assert minimal_subordinate_path(constant, DiagonalProjection.of(1, 1), 4) == [d(1)] * 4


def test_minimal_path_needs_a_least_summand():
    # two incomparable diagonals: no least summand
    alg = DigraphAlgebra((2,), frozenset({unit(1, 1), unit(2, 2)}))
    tower = constant_tower(alg, 1)
    with pytest.raises(OrderError):
        minimal_subordinate_path(tower, DiagonalProjection.of(1, 1, 2), 1)
