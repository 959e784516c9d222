"""Diagonal order, order preserving normalizers, restrictions and subordinate paths."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .algebra import (
    AlgebraError,
    Diag,
    DigraphAlgebra,
    MatrixUnit,
    RegularEmbedding,
    _raw_image,
    push_diagonals,
    push_units,
)
from .tower import Tower, TowerError


class OrderError(ValueError):
    pass


@dataclass(frozen=True)
class DiagonalProjection:
    level: int
    indices: frozenset[Diag]

    def __post_init__(self):
        object.__setattr__(self, "indices", frozenset((int(b), int(i)) for b, i in self.indices))

    @classmethod
    def of(cls, level: int, *indices: int | Diag) -> "DiagonalProjection":
        return cls(level, frozenset(d if isinstance(d, tuple) else (0, d) for d in indices))

    @property
    def is_zero(self) -> bool:
        return not self.indices

    def units(self) -> list[MatrixUnit]:
        return [MatrixUnit(b, i, i) for b, i in sorted(self.indices)]


@dataclass(frozen=True)
class PartialIsometryElement:
    """A 0/1 sum of matrix units with distinct rows and distinct columns."""

    level: int
    units: frozenset[MatrixUnit]

    def __post_init__(self):
        units = frozenset(MatrixUnit(*u) for u in self.units)
        object.__setattr__(self, "units", units)
        rows = [u.range_diag for u in units]
        cols = [u.source_diag for u in units]
        if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
            raise OrderError("units of a normalizing partial isometry need distinct rows and columns")

    @classmethod
    def of(cls, level: int, units: Iterable) -> "PartialIsometryElement":
        return cls(level, frozenset(units))


@dataclass(frozen=True)
class DiagonalOrderRelation:
    level: int
    pairs: frozenset[tuple[Diag, Diag]] = field(repr=False)

    def holds(self, p: Diag, q: Diag) -> bool:
        return (p, q) in self.pairs


def _require_triangular(alg: DigraphAlgebra):
    if not alg.is_triangular:
        raise OrderError("the diagonal order is only computed on triangular levels")


def diagonal_order(alg: DigraphAlgebra, level: int = 0) -> DiagonalOrderRelation:
    """``p <= q`` iff the unit with row ``p`` and column ``q`` lies in ``alg``."""
    _require_triangular(alg)
    return DiagonalOrderRelation(level, frozenset(
        (u.range_diag, u.source_diag) for u in alg.units))


def induced_map(alg: DigraphAlgebra, w: PartialIsometryElement) -> dict[Diag, Diag]:
    """The partial map ``x -> w* x w`` on minimal diagonal projections."""
    return {u.range_diag: u.source_diag for u in sorted(w.units)}


@dataclass(frozen=True)
class OrderCheck:
    ok: bool
    counterexample: tuple[tuple[Diag, Diag], tuple[Diag, Diag]] | None = None

    def __bool__(self):
        return self.ok


def _monotone(alg: DigraphAlgebra, pairs: list[tuple[Diag, Diag]]) -> OrderCheck:
    for p, p_img in pairs:
        for q, q_img in pairs:
            if p != q and alg.has_pair(p, q) and not alg.has_pair(p_img, q_img):
                return OrderCheck(False, ((p, q), (p_img, q_img)))
    return OrderCheck(True)


def is_order_preserving(alg: DigraphAlgebra, w: PartialIsometryElement) -> OrderCheck:
    _require_triangular(alg)
    for u in w.units:
        if u not in alg.units:
            raise AlgebraError(f"{tuple(u)} is not a unit of the algebra")
    return _monotone(alg, sorted(induced_map(alg, w).items()))


@dataclass(frozen=True)
class LocalOrderCheck:
    """Outcome for one presentation; a failure says nothing about other presentations."""

    ok: bool
    unit: MatrixUnit | None = None
    counterexample: tuple[tuple[Diag, Diag], tuple[Diag, Diag]] | None = None
    scope: str = "presentation"

    def __bool__(self):
        return self.ok


def _image_preserving(target: DigraphAlgebra, image: Iterable[MatrixUnit]) -> OrderCheck:
    return _monotone(target, sorted((v.range_diag, v.source_diag) for v in image))


def is_locally_order_preserving(emb: RegularEmbedding) -> LocalOrderCheck:
    _require_triangular(emb.target)
    for u in emb.source.sorted_units():
        check = _image_preserving(emb.target, _raw_image(emb, u))
        if not check:
            return LocalOrderCheck(False, u, check.counterexample)
    return LocalOrderCheck(True)


@dataclass(frozen=True)
class TowerOrderCheck:
    ok: bool
    from_level: int | None = None
    to_level: int | None = None
    unit: MatrixUnit | None = None
    counterexample: tuple | None = None


def check_tower_order_preserving(tower: Tower) -> TowerOrderCheck:
    """Every composite ``alpha_j o ... o alpha_i`` of the tower is locally order preserving."""
    for n in range(2, tower.top + 1):
        _require_triangular(tower.level(n))
    for k in range(1, tower.top):
        for u in tower.level(k).sorted_units():
            image = {u}
            for n in range(k + 1, tower.top + 1):
                image = push_units([tower.embedding(n - 1)], image)
                check = _image_preserving(tower.level(n), image)
                if not check:
                    return TowerOrderCheck(False, k, n, u, check.counterexample)
    return TowerOrderCheck(True)


def _embeddings_between(tower: Tower, k: int, n: int) -> list[RegularEmbedding]:
    embs = []
    for j in range(k, n):
        if j <= tower.depth:
            embs.append(tower.embedding(j))
        elif tower.generator is not None:
            embs.append(tower.generator.embedding(j))
        else:
            raise TowerError(f"level {n} is beyond the tower and there is no generator")
    return embs


def restriction_count(tower: Tower, u: MatrixUnit, level: int, to_level: int) -> int:
    """Number of summands in the image of ``u`` (at ``level``) at ``to_level``."""
    return len(tower.image({u}, level, to_level))


@dataclass(frozen=True)
class RestrictionVerdict:
    verdict: str  # "yes" | "no" | "unknown"
    counts: tuple[tuple[int, int], ...]
    horizon: int | None = None
    exact: bool = True

    def __str__(self):
        return f"unknown({self.horizon})" if self.verdict == "unknown" else self.verdict


def has_infinitely_many_restrictions(tower: Tower, u: MatrixUnit, level: int) -> RestrictionVerdict:
    """Exact for eventually periodic generators, horizon-bounded otherwise."""
    alg = tower.level(level)
    if u not in alg.units:
        raise AlgebraError(f"{tuple(u)} is not a unit of level {level}")
    rule = tower.generator
    if rule is not None and rule.is_periodic:
        start = max(level, rule.preperiod + 1)
        image = push_units(_embeddings_between(tower, level, start), {u})
        before = len(image)
        after = len(push_units(_embeddings_between(tower, start, start + rule.period), image))
        counts = ((start, before), (start + rule.period, after))
        return RestrictionVerdict("yes" if after > before else "no", counts)
    counts = []
    image = {u}
    counts.append((level, 1))
    for n in range(level + 1, tower.top + 1):
        image = push_units([tower.embedding(n - 1)], image)
        counts.append((n, len(image)))
    return RestrictionVerdict("unknown", tuple(counts), horizon=tower.top, exact=False)


def minimal_subordinate_path(tower: Tower, p: DiagonalProjection, depth: int) -> list[Diag]:
    """Least diagonal summand of ``p`` at each level ``p.level .. depth``.

    Each entry is checked to be a subordinate (a summand of the image) of the previous one.
    """
    if p.is_zero:
        raise OrderError("the zero projection has no summands")
    if not p.level <= depth <= tower.top:
        raise TowerError(f"depth {depth} outside {p.level}..{tower.top}")
    alg = tower.level(p.level)
    for d in p.indices:
        if d not in alg.diagonal_position:
            raise OrderError(f"{d} is not a diagonal index of level {p.level}")
    path: list[Diag] = []
    summands = sorted(p.indices)
    for m in range(p.level, depth + 1):
        if m > p.level:
            summands = push_diagonals([tower.embedding(m - 1)], summands)
        level_alg = tower.level(m)
        _require_triangular(level_alg)
        minima = [x for x in summands
                  if not any(y != x and level_alg.has_pair(y, x) for y in summands)]
        if len(minima) != 1 or not all(level_alg.has_pair(minima[0], y) for y in summands):
            raise OrderError(f"no least summand at level {m}: incomparable minima {sorted(minima)}")
        smallest = minima[0]
        if path and smallest not in tower.embedding(m - 1).image(path[-1]):
            raise OrderError(f"{smallest} at level {m} is not a subordinate of {path[-1]}")
        path.append(smallest)
    return path
