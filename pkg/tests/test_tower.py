import pytest
from hypothesis import given

from limitalg.algebra import (
    apply_embedding,
    compose_embeddings,
    identity_embedding,
    make_upper_triangular,
    refinement_embedding,
    standard_embedding,
    unit,
    validate,
)
from limitalg.tower import (
    Tower,
    TowerError,
    build_tower,
    constant_tower,
    explicit_rule,
    refinement_rule,
    standard_rule,
    twist_rule,
)
from strategies import towers


def test_refinement_tower_levels():
    tower = build_tower(refinement_rule(), 3)
    assert [alg.blocks for alg in tower.levels] == [(2,), (4,), (8,), (16,)]
    assert tower.depth == 3 and tower.top == 4


def test_depth_must_be_positive():
    with pytest.raises(TowerError):
        build_tower(refinement_rule(), 0)


def test_horizon_cap():
    with pytest.raises(TowerError):
        build_tower(refinement_rule(), 8)
    assert build_tower(refinement_rule(), 8, max_levels=9).top == 9


def test_standard_and_twist_rules():
    tower = build_tower(standard_rule(3, 2), 2)
    assert tower.embedding(2) == standard_embedding(6, 2)
    twist = build_tower(twist_rule(1), 2)
    assert [alg.blocks for alg in twist.levels] == [(2,), (4,), (8,)]


def test_chain_and_image():
    tower = build_tower(refinement_rule(), 3)
    assert tower.image({unit(1, 2)}, 1, 3) == {unit(1, 5), unit(2, 6), unit(3, 7), unit(4, 8)}
    composite = compose_embeddings(tower.embedding(1), tower.embedding(2))
    assert composite == refinement_embedding(2, 4)


def test_explicit_periodic_tower_repeats():
    t2 = make_upper_triangular(2)
    rule = explicit_rule([t2, t2], [identity_embedding(t2)], preperiod=0, period=1)
    tower = build_tower(rule, 5)
    assert tower.top == 6
    assert all(emb == identity_embedding(t2) for emb in tower.embeddings)


def test_explicit_without_period_is_bounded():
    t2, t4 = make_upper_triangular(2), make_upper_triangular(4)
    rule = explicit_rule([t2, t4], [refinement_embedding(2, 2)])
    assert build_tower(rule, 1).top == 2
    with pytest.raises(TowerError):
        build_tower(rule, 2)


def test_explicit_rejects_inconsistent_period():
    t2, t4 = make_upper_triangular(2), make_upper_triangular(4)
    with pytest.raises(TowerError):
        explicit_rule([t2, t4], [refinement_embedding(2, 2)], preperiod=0, period=1)


def test_tower_rejects_mismatched_levels():
    t2, t4 = make_upper_triangular(2), make_upper_triangular(4)
    with pytest.raises(TowerError):
        Tower((t2, t2), (refinement_embedding(2, 2),))
    Tower((t2, t4), (refinement_embedding(2, 2),))


def test_constant_tower():
    t2 = make_upper_triangular(2)
    tower = constant_tower(t2, 3)
    assert tower.levels == (t2,) * 4
    for emb in tower.embeddings:
        assert apply_embedding(emb, unit(1, 2)) == {unit(1, 2)}


@given(towers())
def test_corpus_towers_validate(tower):
    for alg in tower.levels:
        assert validate(alg).ok
    for emb in tower.embeddings:
        assert validate(emb).ok
