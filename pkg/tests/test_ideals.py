import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from limitalg.algebra import identity_embedding, make_upper_triangular, refinement_embedding, unit
from limitalg.ideals import (
    IdealError,
    InsufficientDepth,
    LevelIdeal,
    classify_dimension,
    codimension,
    enumerate_ideals,
    generated_ideal,
    ideal_system,
    is_ideal,
    is_meet_irreducible,
    join,
    lemma1_witness,
    lemma2_witness,
    meet,
    pull_back,
    push_forward,
)
from limitalg.tower import (
    build_tower,
    constant_tower,
    explicit_rule,
    refinement_rule,
    standard_rule,
    twist_rule,
)
from strategies import towers, triangular_algebras

T2 = make_upper_triangular(2)
E12 = unit(1, 2)


def as_tuples(units):
    return {tuple(u) for u in units}


def test_generated_ideals_t2():
    assert generated_ideal(T2, [E12]).units == {E12}
    assert generated_ideal(T2, [unit(1, 1)]).units == {unit(1, 1), E12}
    assert generated_ideal(T2, []).units == frozenset()


@given(triangular_algebras(), st.data())
def test_generated_ideal_matches_product_closure(alg, data):
    seeds = data.draw(st.sets(st.sampled_from(alg.sorted_units()), max_size=3))
    got = generated_ideal(alg, seeds).units
    assert as_tuples(got) == oracles.closure_by_products(as_tuples(alg.units), as_tuples(seeds))
    assert is_ideal(alg, got)


def test_t2_lattice():
    lattice = enumerate_ideals(T2)
    assert [set(i.units) for i in lattice.ideals] == [
        set(), {E12}, {unit(1, 1), E12}, {E12, unit(2, 2)}, set(T2.units)]
    assert len(enumerate_ideals(make_upper_triangular(1)).ideals) == 2
    assert len(enumerate_ideals(make_upper_triangular(3)).ideals) == 14


@pytest.mark.parametrize("n", range(1, 6))
def test_enumeration_equals_subset_oracle(n):
    alg = make_upper_triangular(n)
    got = {frozenset(as_tuples(i.units)) for i in enumerate_ideals(alg).ideals}
    assert got == set(oracles.ideals_by_subsets(oracles.upper_units(n)))


@given(triangular_algebras(max_blocks=2, max_size=3))
def test_enumeration_on_random_algebras(alg):
    got = {frozenset(as_tuples(i.units)) for i in enumerate_ideals(alg).ideals}
    assert got == set(oracles.ideals_by_subsets(as_tuples(alg.units)))


def test_enumeration_cap():
    with pytest.raises(IdealError):
        enumerate_ideals(make_upper_triangular(10), cap=45)


def test_meet_join_examples():
    lattice = enumerate_ideals(T2)
    a = lattice.find([unit(1, 1), E12])
    b = lattice.find([E12, unit(2, 2)])
    assert meet(a, b).units == {E12}
    assert join(T2, a, b).units == T2.units
    assert is_meet_irreducible(lattice, lattice.zero)
    assert not is_meet_irreducible(lattice, lattice.find([E12]))


@settings(max_examples=25)
@given(triangular_algebras(max_blocks=1, max_size=3))
def test_lattice_laws(alg):
    ideals = enumerate_ideals(alg).ideals
    for a in ideals:
        assert meet(a, a).units == a.units and join(alg, a, a).units == a.units
        for b in ideals:
            m, j = meet(a, b), join(alg, a, b)
            assert is_ideal(alg, m.units) and is_ideal(alg, j.units)
            assert m.units == meet(b, a).units and j.units == join(alg, b, a).units
            assert meet(a, j).units == a.units  # absorption
            assert join(alg, a, m).units == a.units
            for c in ideals:
                # ideal lattices are distributive
                assert meet(a, join(alg, b, c)).units == join(alg, meet(a, b), meet(a, c)).units


def test_codimension():
    assert codimension(T2, LevelIdeal(0, frozenset({E12}))) == 2
    assert codimension(T2, LevelIdeal(0, T2.units)) == 0
    t3 = make_upper_triangular(3)
    assert codimension(t3, LevelIdeal(0, frozenset())) == 6


def test_push_and_pull():
    emb = refinement_embedding(2, 2)
    pushed = push_forward(emb, generated_ideal(T2, [E12]))
    assert pushed.units == generated_ideal(emb.target, [unit(1, 3), unit(2, 4)]).units
    assert pull_back(emb, LevelIdeal(0, frozenset())).units == frozenset()
    for ideal in enumerate_ideals(T2).ideals:
        assert ideal.units <= pull_back(emb, push_forward(emb, ideal)).units


def test_constant_system():
    system = ideal_system(constant_tower(T2, 3), 1, [E12])
    assert all(ideal.units == {E12} for ideal in system.ideals)
    assert ideal_system(constant_tower(T2, 3), 1, []).is_zero


def test_refinement_system_sizes():
    tower = build_tower(refinement_rule(), 3)
    system = ideal_system(tower, 1, [E12], 3)
    # frozen from the brute-force oracle: 1, 3, 10 units on levels 1..3
    assert [len(i.units) for i in system.ideals] == [1, 3, 10]
    assert as_tuples(system.at(3).units) == {
        (0, 1, 5), (0, 1, 6), (0, 1, 7), (0, 1, 8), (0, 2, 6),
        (0, 2, 7), (0, 2, 8), (0, 3, 7), (0, 3, 8), (0, 4, 8)}


def _oracle_system(tower, seeds):
    sizes = [alg.blocks[0] for alg in tower.levels]
    spreads = [[[j for _, j in row] for row in emb.spread] for emb in tower.embeddings]
    return oracles.ideal_system_oracle(sizes, spreads, as_tuples(seeds))


@pytest.mark.parametrize("rule", [refinement_rule(), standard_rule(), twist_rule(1), refinement_rule(3, 2)])
def test_system_matches_oracle(rule):
    tower = build_tower(rule, 3)
    for seed in tower.level(1).sorted_units():
        system = ideal_system(tower, 1, [seed])
        assert [as_tuples(i.units) for i in system.ideals] == _oracle_system(tower, [seed])


@given(towers(max_depth=3), st.data())
def test_systems_are_inductive(tower, data):
    level = data.draw(st.integers(1, tower.top))
    alg = tower.level(level)
    seeds = data.draw(st.sets(st.sampled_from(alg.sorted_units()), max_size=2))
    system = ideal_system(tower, level, seeds)
    for n in range(system.start, system.stop):
        emb = tower.embedding(n)
        lower, upper = system.at(n), system.at(n + 1)
        assert is_ideal(tower.level(n), lower.units)
        assert push_forward(emb, lower).units <= upper.units
        assert pull_back(emb, upper).units == lower.units


def test_classify_dimension():
    assert str(classify_dimension(ideal_system(constant_tower(T2, 3), 1, [E12]))) == "finite(1)"
    assert str(classify_dimension(ideal_system(build_tower(refinement_rule(), 3), 1, [E12]))) == "infinite"
    rule = explicit_rule([T2, T2, T2], [identity_embedding(T2)] * 2)
    verdict = classify_dimension(ideal_system(build_tower(rule, 2), 1, [E12]))
    assert verdict.kind == "unknown" and verdict.horizon == 3


def test_lemma1():
    w = lemma1_witness(ideal_system(constant_tower(T2, 3), 1, [E12]))
    assert w.p.indices == {(0, 1)} and w.q.indices == {(0, 2)}
    assert all(units == {E12} for _, units in w.corners)
    diag = lemma1_witness(ideal_system(constant_tower(make_upper_triangular(1), 2), 1, [unit(1, 1)]))
    assert diag.p == diag.q
    with pytest.raises(IdealError, match="not finite"):
        lemma1_witness(ideal_system(build_tower(refinement_rule(), 3), 1, [E12]))


def test_lemma2():
    system = ideal_system(build_tower(refinement_rule(), 6, max_levels=8), 1, [E12])
    w = lemma2_witness(system, 3)
    assert w.side == "left" and len(w.projections) == 3
    first = lemma2_witness(system, 1)
    assert len(first.projections) == 1
    shallow = ideal_system(build_tower(refinement_rule(), 3), 1, [E12])
    with pytest.raises(InsufficientDepth) as info:
        lemma2_witness(shallow, 50)
    assert info.value.found == 8
