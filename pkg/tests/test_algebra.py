import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from limitalg.algebra import (
    DigraphAlgebra,
    EmbeddingError,
    MatrixUnit,
    RegularEmbedding,
    apply_embedding,
    check_algebra,
    compose_embeddings,
    direct_sum,
    identity_embedding,
    make_full_matrix,
    make_upper_triangular,
    multiply_units,
    refinement_embedding,
    standard_embedding,
    twist_embedding,
    unit,
    validate,
)
from strategies import triangular_algebras


def units(*pairs):
    return {unit(i, j) for i, j in pairs}


def test_upper_triangular_small():
    assert make_upper_triangular(1).units == units((1, 1))
    assert make_upper_triangular(2).units == units((1, 1), (1, 2), (2, 2))
    assert make_upper_triangular(4).dimension == 10


@pytest.mark.parametrize("n", range(1, 7))
def test_upper_triangular_matches_listing(n):
    assert {tuple(u) for u in make_upper_triangular(n).units} == set(oracles.upper_units(n))
    assert make_upper_triangular(n).is_triangular


def test_full_matrix_not_triangular():
    m2 = make_full_matrix(2)
    assert m2.dimension == 4
    assert not m2.is_triangular
    assert check_algebra(m2) is None


def test_direct_sum():
    t1 = make_upper_triangular(1)
    assert direct_sum([t1]) == t1
    s = direct_sum([make_upper_triangular(2), make_upper_triangular(3)])
    assert s.blocks == (2, 3)
    assert s.dimension == 9
    swapped = DigraphAlgebra((2, 2), frozenset(
        MatrixUnit(1 - u.block, u.row, u.col) for u in direct_sum([make_upper_triangular(2)] * 2).units))
    assert swapped == direct_sum([make_upper_triangular(2)] * 2)


def test_multiply_units():
    t3 = make_upper_triangular(3)
    assert multiply_units(t3, unit(1, 2), unit(2, 3)) == unit(1, 3)
    assert multiply_units(t3, unit(1, 2), unit(1, 2)) is None
    t2 = make_upper_triangular(2)
    assert multiply_units(t2, unit(1, 1), unit(1, 2)) == unit(1, 2)


def test_triangularity_violation_reported():
    t2 = make_upper_triangular(2)
    bad = DigraphAlgebra((2,), t2.units | {unit(2, 1)})
    report = validate(bad)
    assert not report.ok
    assert "not triangular" in report.message
    assert validate(bad, triangular=False).ok


def test_missing_diagonal_and_transitivity():
    assert "diagonal" in check_algebra(DigraphAlgebra((2,), frozenset(units((1, 1), (1, 2)))))
    gap = DigraphAlgebra((3,), frozenset(units((1, 1), (2, 2), (3, 3), (1, 2), (2, 3))))
    assert "transitiv" in check_algebra(gap)


def test_out_of_range_units_rejected():
    alg = DigraphAlgebra((2,), frozenset(units((1, 1), (2, 2), (1, 3))))
    assert not validate(alg).ok


def test_refinement_examples():
    emb = refinement_embedding(2, 2)
    assert apply_embedding(emb, unit(1, 2)) == units((1, 3), (2, 4))
    assert apply_embedding(emb, unit(1, 1)) == units((1, 1), (2, 2))
    assert apply_embedding(refinement_embedding(1, 3), unit(1, 1)) == units((1, 1), (2, 2), (3, 3))
    t4 = make_upper_triangular(4)
    for u in emb.source.units:
        assert apply_embedding(emb, u) <= t4.units


def test_standard_examples():
    emb = standard_embedding(2, 2)
    assert apply_embedding(emb, unit(1, 2)) == units((1, 2), (3, 4))
    assert standard_embedding(1, 2) == refinement_embedding(1, 2)


def test_twist_examples():
    emb = twist_embedding(1)
    assert apply_embedding(emb, unit(1, 2)) == units((1, 4), (2, 3))
    assert apply_embedding(emb, unit(2, 2)) == units((3, 3), (4, 4))
    for u in emb.source.units:
        assert {tuple(v) for v in apply_embedding(emb, u)} == oracles.twist_image(u.row, u.col)


@pytest.mark.parametrize("n,m", [(1, 2), (2, 2), (3, 2), (2, 3), (4, 3)])
def test_spreads_match_formulas(n, m):
    for emb, formula in ((refinement_embedding(n, m), oracles.refinement_spread),
                         (standard_embedding(n, m), oracles.standard_spread)):
        assert [[j for _, j in row] for row in emb.spread] == formula(n, m)
        for u in emb.source.units:
            assert {tuple(v) for v in apply_embedding(emb, u)} == oracles.image_of(formula(n, m), u)


def test_identity_embedding():
    t3 = make_upper_triangular(3)
    ident = identity_embedding(t3)
    for u in t3.units:
        assert apply_embedding(ident, u) == {u}


def test_compose_refinements():
    composite = compose_embeddings(refinement_embedding(2, 2), refinement_embedding(4, 2))
    assert composite == refinement_embedding(2, 4)


def test_compose_requires_matching_levels():
    with pytest.raises(EmbeddingError):
        compose_embeddings(refinement_embedding(2, 2), refinement_embedding(2, 2))


def test_embedding_rejects_non_unital_spread():
    t2, t4 = make_upper_triangular(2), make_upper_triangular(4)
    with pytest.raises(EmbeddingError, match="unital"):
        RegularEmbedding(t2, t4, (((0, 1),), ((0, 2),)))


def test_embedding_rejects_irregular_spread():
    # e_12 would land on e_21, which is not in T_4
    t2, t4 = make_upper_triangular(2), make_upper_triangular(4)
    with pytest.raises(EmbeddingError, match="regular"):
        RegularEmbedding(t2, t4, (((0, 2), (0, 3)), ((0, 1), (0, 4))))


def test_embedding_rejects_unequal_multiplicity():
    t2 = make_upper_triangular(2)
    t3 = make_upper_triangular(3)
    with pytest.raises(EmbeddingError):
        RegularEmbedding(t2, t3, (((0, 1),), ((0, 2), (0, 3))))


def test_multiplicity_table():
    assert refinement_embedding(2, 3).multiplicity == {(0, 0): 3}


@given(triangular_algebras())
def test_random_algebras_are_valid(alg):
    assert validate(alg).ok


@given(triangular_algebras(), st.data())
def test_products_stay_inside(alg, data):
    u = data.draw(st.sampled_from(alg.sorted_units()))
    v = data.draw(st.sampled_from(alg.sorted_units()))
    w = multiply_units(alg, u, v)
    assert (w is None) == (oracles.product(tuple(u), tuple(v)) is None)
    if w is not None:
        assert w in alg.units


@given(st.integers(1, 4), st.integers(2, 3), st.integers(2, 3))
def test_image_multiplicative(n, m1, m2):
    # the image of a product is the product of images, unit by unit
    first = refinement_embedding(n, m1)
    second = standard_embedding(n * m1, m2)
    composite = compose_embeddings(first, second)
    for u in first.source.units:
        for v in first.source.units:
            w = multiply_units(first.source, u, v)
            lhs = apply_embedding(composite, w) if w else set()
            rhs = {p for a in apply_embedding(composite, u) for b in apply_embedding(composite, v)
                   if (p := multiply_units(composite.target, a, b))}
            assert lhs == rhs
