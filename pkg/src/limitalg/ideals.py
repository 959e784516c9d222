"""Ideals of digraph algebras, their lattices, and inductive ideal systems on towers.

An ideal of a digraph algebra is spanned by the matrix units it contains, so
ideals are stored as unit sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .algebra import (
    AlgebraError,
    Diag,
    DigraphAlgebra,
    MatrixUnit,
    RegularEmbedding,
    _bit_indices,
    _raw_image,
)
from .order import DiagonalProjection, RestrictionVerdict, has_infinitely_many_restrictions
from .tower import Tower, TowerError

DEFAULT_CAP = 45


class IdealError(ValueError):
    pass


@dataclass(frozen=True)
class LevelIdeal:
    level: int
    units: frozenset[MatrixUnit]

    def __post_init__(self):
        object.__setattr__(self, "units", frozenset(MatrixUnit(*u) for u in self.units))

    def __len__(self):
        return len(self.units)

    def __le__(self, other: "LevelIdeal") -> bool:
        return self.units <= other.units

    def __lt__(self, other: "LevelIdeal") -> bool:
        return self.units < other.units

    def sorted_units(self) -> list[MatrixUnit]:
        return sorted(self.units)


def _check_units(alg: DigraphAlgebra, units: Iterable[MatrixUnit]):
    for u in units:
        if u not in alg.units:
            raise AlgebraError(f"{tuple(u)} is not a unit of the algebra")


def _closure(alg: DigraphAlgebra, seeds: Iterable[MatrixUnit]) -> frozenset[MatrixUnit]:
    # v.u.w over all units v, w: rows reachable backwards from row(u), columns forwards from col(u).
    # One round reaches the fixpoint because the unit relation is transitive.
    succ, pred = alg.succ_masks, alg.pred_masks
    row_masks: dict[Diag, int] = {}
    for b, i, j in seeds:
        row_masks[(b, i)] = row_masks.get((b, i), 0) | succ[b][j]
    closed: dict[Diag, int] = {}
    for (b, i), mask in row_masks.items():
        for r in _bit_indices(pred[b][i]):
            closed[(b, r)] = closed.get((b, r), 0) | mask
    return frozenset(MatrixUnit(b, r, c) for (b, r), mask in closed.items()
                     for c in _bit_indices(mask))


def generated_ideal(alg: DigraphAlgebra, seeds: Iterable[MatrixUnit], level: int = 0) -> LevelIdeal:
    seeds = [MatrixUnit(*u) for u in seeds]
    _check_units(alg, seeds)
    return LevelIdeal(level, _closure(alg, seeds))


def is_ideal(alg: DigraphAlgebra, units: Iterable[MatrixUnit]) -> bool:
    units = frozenset(MatrixUnit(*u) for u in units)
    _check_units(alg, units)
    return _closure(alg, units) == units


def meet(i1: LevelIdeal, i2: LevelIdeal) -> LevelIdeal:
    if i1.level != i2.level:
        raise IdealError("ideals live at different levels")
    return LevelIdeal(i1.level, i1.units & i2.units)


def join(alg: DigraphAlgebra, i1: LevelIdeal, i2: LevelIdeal) -> LevelIdeal:
    if i1.level != i2.level:
        raise IdealError("ideals live at different levels")
    return generated_ideal(alg, i1.units | i2.units, i1.level)


def codimension(alg: DigraphAlgebra, ideal: LevelIdeal) -> int:
    return alg.dimension - len(ideal.units)


@dataclass(frozen=True, eq=False)
class IdealLattice:
    """All ideals of one level, sorted by size and then by their sorted unit lists."""

    algebra: DigraphAlgebra
    ideals: tuple[LevelIdeal, ...] = field(repr=False)
    level: int = 0

    def __len__(self):
        return len(self.ideals)

    @cached_property
    def index(self) -> dict[frozenset, int]:
        return {ideal.units: k for k, ideal in enumerate(self.ideals)}

    @cached_property
    def order(self) -> frozenset[tuple[int, int]]:
        """Containment pairs ``(a, b)`` meaning ``ideals[a] <= ideals[b]``."""
        return frozenset((a, b) for a, x in enumerate(self.ideals)
                         for b, y in enumerate(self.ideals) if x.units <= y.units)

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        out = []
        for a, x in enumerate(self.ideals):
            above = [b for b, y in enumerate(self.ideals) if x.units < y.units]
            for b in above:
                if not any(self.ideals[c].units < self.ideals[b].units for c in above if c != b):
                    out.append((a, b))
        return tuple(out)

    @property
    def zero(self) -> LevelIdeal:
        return self.ideals[0]

    @property
    def whole(self) -> LevelIdeal:
        return self.ideals[-1]

    def find(self, units: Iterable) -> LevelIdeal:
        key = frozenset(MatrixUnit(*u) for u in units)
        if key not in self.index:
            raise IdealError("not an ideal of this lattice")
        return self.ideals[self.index[key]]


def _sort_key(units: frozenset[MatrixUnit]):
    return (len(units), sorted(units))


def enumerate_ideals(alg: DigraphAlgebra, cap: int = DEFAULT_CAP, level: int = 0) -> IdealLattice:
    """All ideals, found as up-sets of the "generates" preorder on units."""
    if alg.dimension > cap:
        raise IdealError(f"algebra has {alg.dimension} units, enumeration cap is {cap}")
    units = alg.sorted_units()
    position = {u: k for k, u in enumerate(units)}
    gen = [sum(1 << position[v] for v in _closure(alg, [u])) for u in units]
    # collapse units generating each other (non-triangular levels) into one element
    classes: dict[int, int] = {}
    for k, u in enumerate(units):
        members = sum(1 << j for j in _bit_indices(gen[k]) if gen[j] >> k & 1)
        classes.setdefault(members, gen[k])
    elements = sorted(classes.items(), key=lambda item: bin(item[1]).count("1"))
    found: list[int] = []
    stack = [(0, 0)]
    while stack:
        k, current = stack.pop()
        if k == len(elements):
            found.append(current)
            continue
        members, generated = elements[k]
        stack.append((k + 1, current))
        if generated & ~members & ~current == 0:
            stack.append((k + 1, current | members))
    ideals = sorted((frozenset(units[j] for j in _bit_indices(mask)) for mask in found),
                    key=_sort_key)
    return IdealLattice(alg, tuple(LevelIdeal(level, i) for i in ideals), level)


def is_meet_irreducible(lattice: IdealLattice, ideal: LevelIdeal) -> bool:
    """True unless ``ideal`` is the meet of two strictly larger ideals of the lattice."""
    lattice.find(ideal.units)
    larger = [x for x in lattice.ideals if ideal.units < x.units]
    covers = [x for x in larger if not any(y.units < x.units for y in larger)]
    return len(covers) <= 1


def push_forward(emb: RegularEmbedding, ideal: LevelIdeal, level: int | None = None) -> LevelIdeal:
    _check_units(emb.source, ideal.units)
    images = [v for u in ideal.units for v in _raw_image(emb, u)]
    return LevelIdeal(ideal.level + 1 if level is None else level, _closure(emb.target, images))


def pull_back(emb: RegularEmbedding, ideal: LevelIdeal, level: int | None = None) -> LevelIdeal:
    _check_units(emb.target, ideal.units)
    units = frozenset(u for u in emb.source.units
                      if all(v in ideal.units for v in _raw_image(emb, u)))
    return LevelIdeal(ideal.level - 1 if level is None else level, units)


@dataclass(frozen=True, eq=False)
class IdealSystem:
    """Compatible ideals ``I_k .. I_n`` of consecutive tower levels."""

    tower: Tower
    start: int
    ideals: tuple[LevelIdeal, ...]

    @property
    def stop(self) -> int:
        return self.start + len(self.ideals) - 1

    def at(self, level: int) -> LevelIdeal:
        if not self.start <= level <= self.stop:
            raise TowerError(f"ideal system covers levels {self.start}..{self.stop}")
        return self.ideals[level - self.start]

    @property
    def is_zero(self) -> bool:
        return all(not ideal.units for ideal in self.ideals)


def ideal_system(tower: Tower, level: int, seeds: Iterable[MatrixUnit],
                 depth: int | None = None) -> IdealSystem:
    """Push the ideal generated by ``seeds`` up to level ``depth``, then close it under pull-backs."""
    depth = tower.top if depth is None else depth
    if not 1 <= level <= depth <= tower.top:
        raise TowerError(f"levels {level}..{depth} do not fit a tower with {tower.top} levels")
    current = [generated_ideal(tower.level(level), seeds, level)]
    for n in range(level + 1, depth + 1):
        current.append(push_forward(tower.embedding(n - 1), current[-1], n))
    while True:
        changed = False
        for n in range(level + 1, depth + 1):
            pushed = push_forward(tower.embedding(n - 1), current[n - 1 - level], n)
            if not pushed.units <= current[n - level].units:
                current[n - level] = LevelIdeal(n, current[n - level].units | pushed.units)
                changed = True
        for n in range(depth - 1, level - 1, -1):
            pulled = pull_back(tower.embedding(n), current[n + 1 - level], n)
            if pulled.units != current[n - level].units:
                current[n - level] = pulled
                changed = True
        if not changed:
            break
    return IdealSystem(tower, level, tuple(current))


@dataclass(frozen=True)
class DimensionVerdict:
    kind: str  # "finite" | "infinite" | "unknown"
    dim: int | None = None
    horizon: int | None = None
    witness: tuple[int, MatrixUnit] | None = None

    def __str__(self):
        if self.kind == "finite":
            return f"finite({self.dim})"
        if self.kind == "unknown":
            return f"unknown({self.horizon})"
        return "infinite"


def classify_dimension(system: IdealSystem) -> DimensionVerdict:
    """Finite when no unit of the system ever splits, infinite when one splits forever."""
    tower = system.tower
    verdicts: list[tuple[int, MatrixUnit, RestrictionVerdict]] = []
    for n in range(system.start, system.stop + 1):
        for u in system.at(n).sorted_units():
            verdict = has_infinitely_many_restrictions(tower, u, n)
            if verdict.verdict == "yes":
                return DimensionVerdict("infinite", witness=(n, u))
            verdicts.append((n, u, verdict))
    if all(v.verdict == "no" for _, _, v in verdicts):
        return DimensionVerdict("finite", dim=len(system.at(system.stop).units))
    return DimensionVerdict("unknown", horizon=system.stop)


def _corner(units: Iterable[MatrixUnit], rows: set[Diag], cols: set[Diag]) -> frozenset[MatrixUnit]:
    return frozenset(u for u in units if u.range_diag in rows and u.source_diag in cols)


@dataclass(frozen=True)
class Lemma1Witness:
    p: DiagonalProjection
    q: DiagonalProjection
    unit: MatrixUnit
    corners: tuple[tuple[int, frozenset[MatrixUnit]], ...]


def lemma1_witness(system: IdealSystem) -> Lemma1Witness:
    """Projections ``p, q`` with ``pAq = pIq != 0`` checked at every computed level."""
    verdict = classify_dimension(system)
    if verdict.kind != "finite":
        raise IdealError(f"ideal system is not finite dimensional: {verdict}")
    tower, k = system.tower, system.start
    for e in system.at(k).sorted_units():
        corners = []
        for n in range(k, system.stop + 1):
            rows = set(tower.image_diagonals([e.range_diag], k, n))
            cols = set(tower.image_diagonals([e.source_diag], k, n))
            in_algebra = _corner(tower.level(n).units, rows, cols)
            if not in_algebra or in_algebra != _corner(system.at(n).units, rows, cols):
                break
            corners.append((n, in_algebra))
        else:
            return Lemma1Witness(DiagonalProjection(k, frozenset([e.range_diag])),
                                 DiagonalProjection(k, frozenset([e.source_diag])),
                                 e, tuple(corners))
    raise IdealError("no unit of the ideal has a corner equal to the ideal's corner")


@dataclass(frozen=True)
class Lemma2Witness:
    side: str  # "left": p I != 0 ; "right": I p != 0
    level: int
    projections: tuple[DiagonalProjection, ...]
    units: tuple[MatrixUnit, ...]


class InsufficientDepth(IdealError):
    def __init__(self, wanted: int, found: int, horizon: int):
        super().__init__(f"found only {found} of {wanted} orthogonal projections up to level {horizon}")
        self.wanted, self.found, self.horizon = wanted, found, horizon


def lemma2_witness(system: IdealSystem, m: int) -> Lemma2Witness:
    """``m`` mutually orthogonal diagonal projections each meeting the ideal on one side.

    Final projections of ideal units are tried first, then initial ones, level by level.
    """
    if m < 1:
        raise IdealError("need at least one projection")
    verdict = classify_dimension(system)
    if verdict.kind != "infinite":
        raise IdealError(f"ideal system is not infinite dimensional: {verdict}")
    best = 0
    for n in range(system.start, system.stop + 1):
        units = system.at(n).sorted_units()
        for side, key in (("left", lambda u: u.range_diag), ("right", lambda u: u.source_diag)):
            chosen: dict[Diag, MatrixUnit] = {}
            for u in units:
                chosen.setdefault(key(u), u)
            best = max(best, len(chosen))
            if len(chosen) >= m:
                picks = sorted(chosen)[:m]
                return Lemma2Witness(
                    side, n,
                    tuple(DiagonalProjection(n, frozenset([d])) for d in picks),
                    tuple(chosen[d] for d in picks))
    raise InsufficientDepth(m, best, system.stop)
