"""Digraph algebras spanned by matrix units, and regular embeddings between them.

Diagonal indices are 1-based inside each block; block indices are 0-based.
A diagonal position is written ``(block, index)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, NamedTuple, Sequence

Diag = tuple[int, int]


class AlgebraError(ValueError):
    pass


class EmbeddingError(AlgebraError):
    pass


class MatrixUnit(NamedTuple):
    block: int
    row: int
    col: int

    @property
    def is_diagonal(self) -> bool:
        return self.row == self.col

    @property
    def range_diag(self) -> Diag:
        return (self.block, self.row)

    @property
    def source_diag(self) -> Diag:
        return (self.block, self.col)

    def __str__(self) -> str:
        if self.block == 0:
            return f"e{self.row},{self.col}"
        return f"e[{self.block}]{self.row},{self.col}"


def unit(row: int, col: int, block: int = 0) -> MatrixUnit:
    return MatrixUnit(block, row, col)


def _bit_indices(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class DigraphAlgebra:
    """Span of a set of matrix units inside a direct sum of full matrix algebras.

    Construction only normalizes the containers. Use :func:`check_algebra` (or the
    constructors below, which always produce valid algebras) for the invariants.
    """

    blocks: tuple[int, ...]
    units: frozenset[MatrixUnit] = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(int(b) for b in self.blocks))
        object.__setattr__(
            self, "units", frozenset(MatrixUnit(*map(int, u)) for u in self.units)
        )

    def __repr__(self) -> str:
        return f"DigraphAlgebra(blocks={self.blocks}, units={len(self.units)})"

    @cached_property
    def diagonal(self) -> tuple[Diag, ...]:
        return tuple((b, i) for b, n in enumerate(self.blocks) for i in range(1, n + 1))

    @cached_property
    def diagonal_position(self) -> dict[Diag, int]:
        return {d: k for k, d in enumerate(self.diagonal)}

    @cached_property
    def dimension(self) -> int:
        return len(self.units)

    @cached_property
    def succ_masks(self) -> tuple[tuple[int, ...], ...]:
        """``succ_masks[b][i]`` has bit ``j`` set iff ``(b, i, j)`` is a unit."""
        masks = [[0] * (n + 1) for n in self.blocks]
        for b, i, j in self.units:
            masks[b][i] |= 1 << j
        return tuple(tuple(m) for m in masks)

    @cached_property
    def pred_masks(self) -> tuple[tuple[int, ...], ...]:
        masks = [[0] * (n + 1) for n in self.blocks]
        for b, i, j in self.units:
            masks[b][j] |= 1 << i
        return tuple(tuple(m) for m in masks)

    @cached_property
    def is_triangular(self) -> bool:
        return all(u.is_diagonal or (u.block, u.col, u.row) not in self.units for u in self.units)

    def __contains__(self, u) -> bool:
        return u in self.units

    def has_pair(self, p: Diag, q: Diag) -> bool:
        return p[0] == q[0] and bool(self.succ_masks[p[0]][p[1]] >> q[1] & 1)

    def successors(self, d: Diag) -> list[int]:
        return _bit_indices(self.succ_masks[d[0]][d[1]])

    def predecessors(self, d: Diag) -> list[int]:
        return _bit_indices(self.pred_masks[d[0]][d[1]])

    def sorted_units(self) -> list[MatrixUnit]:
        return sorted(self.units)


def check_algebra(alg: DigraphAlgebra, triangular: bool = False) -> str | None:
    """Return a description of the first violated invariant, or None."""
    if not alg.blocks:
        return "algebra has no blocks"
    for b, n in enumerate(alg.blocks):
        if n < 1:
            return f"block {b} has non-positive size {n}"
    for u in sorted(alg.units):
        if not 0 <= u.block < len(alg.blocks):
            return f"unit {tuple(u)} refers to missing block {u.block}"
        n = alg.blocks[u.block]
        if not (1 <= u.row <= n and 1 <= u.col <= n):
            return f"unit {tuple(u)} outside block of size {n}"
    for b, i in alg.diagonal:
        if MatrixUnit(b, i, i) not in alg.units:
            return f"missing diagonal unit {(b, i, i)}"
    succ = alg.succ_masks
    for b, n in enumerate(alg.blocks):
        for i in range(1, n + 1):
            for j in _bit_indices(succ[b][i]):
                missing = succ[b][j] & ~succ[b][i]
                if missing:
                    k = _bit_indices(missing)[0]
                    return f"not transitive: {(b, i, j)} and {(b, j, k)} present but {(b, i, k)} absent"
    if triangular:
        for u in sorted(alg.units):
            if not u.is_diagonal and (u.block, u.col, u.row) in alg.units:
                return f"not triangular: {tuple(u)} and {(u.block, u.col, u.row)} both present"
    return None


def require_valid(alg: DigraphAlgebra, triangular: bool = False) -> DigraphAlgebra:
    problem = check_algebra(alg, triangular)
    if problem:
        raise AlgebraError(problem)
    return alg


@lru_cache(maxsize=64)
def make_upper_triangular(n: int) -> DigraphAlgebra:
    if n < 1:
        raise AlgebraError(f"T_n needs n >= 1, got {n}")
    return DigraphAlgebra((n,), frozenset(
        MatrixUnit(0, i, j) for i in range(1, n + 1) for j in range(i, n + 1)))


@lru_cache(maxsize=16)
def make_full_matrix(n: int) -> DigraphAlgebra:
    if n < 1:
        raise AlgebraError(f"M_n needs n >= 1, got {n}")
    return DigraphAlgebra((n,), frozenset(
        MatrixUnit(0, i, j) for i in range(1, n + 1) for j in range(1, n + 1)))


def direct_sum(parts: Sequence[DigraphAlgebra]) -> DigraphAlgebra:
    if not parts:
        raise AlgebraError("direct sum of an empty list")
    blocks: list[int] = []
    units: set[MatrixUnit] = set()
    for part in parts:
        offset = len(blocks)
        blocks.extend(part.blocks)
        units.update(MatrixUnit(u.block + offset, u.row, u.col) for u in part.units)
    return DigraphAlgebra(tuple(blocks), frozenset(units))


def multiply_units(alg: DigraphAlgebra, u: MatrixUnit, v: MatrixUnit) -> MatrixUnit | None:
    """Product of two matrix units of ``alg``; None stands for zero."""
    for w in (u, v):
        if w not in alg.units:
            raise AlgebraError(f"{tuple(w)} is not a unit of the algebra")
    if u.block != v.block or u.col != v.row:
        return None
    return MatrixUnit(u.block, u.row, v.col)


@dataclass(frozen=True, eq=False)
class RegularEmbedding:
    """Unital regular embedding described by where each source diagonal unit goes.

    ``spread[k]`` is the ordered multiplicity list of target diagonal positions for
    ``source.diagonal[k]``. A unit ``e_ij`` maps to the sum over ``t`` of the units
    joining ``spread(i)[t]`` to ``spread(j)[t]``.
    Invalid data is rejected at construction.
    """

    source: DigraphAlgebra
    target: DigraphAlgebra
    spread: tuple[tuple[Diag, ...], ...] = field(repr=False)

    def __post_init__(self):
        spread = tuple(tuple((int(c), int(j)) for c, j in row) for row in self.spread)
        object.__setattr__(self, "spread", spread)
        problem = check_embedding(self)
        if problem:
            raise EmbeddingError(problem)

    def __eq__(self, other):
        if not isinstance(other, RegularEmbedding):
            return NotImplemented
        return (self.spread == other.spread and self.source == other.source
                and self.target == other.target)

    def __hash__(self):
        return hash(self.spread)

    def image(self, d: Diag) -> tuple[Diag, ...]:
        return self.spread[self.source.diagonal_position[d]]

    @property
    def multiplicity(self) -> dict[tuple[int, int], int]:
        """Bratteli multiplicities keyed by ``(source block, target block)``."""
        out: dict[tuple[int, int], int] = {}
        for b, n in enumerate(self.source.blocks):
            for c, _ in self.image((b, 1)):
                out[(b, c)] = out.get((b, c), 0) + 1
        return out

    def spread_table(self) -> list[list[list[int]]]:
        return [[list(d) for d in row] for row in self.spread]


def _raw_image(emb: RegularEmbedding, u: MatrixUnit) -> list[MatrixUnit]:
    rows = emb.image((u.block, u.row))
    cols = emb.image((u.block, u.col))
    return [MatrixUnit(r[0], r[1], c[1]) for r, c in zip(rows, cols)]


def check_embedding(emb: RegularEmbedding) -> str | None:
    src, tgt = emb.source, emb.target
    if len(emb.spread) != len(src.diagonal):
        return f"spread has {len(emb.spread)} entries for {len(src.diagonal)} source diagonals"
    seen: set[Diag] = set()
    for d, row in zip(src.diagonal, emb.spread):
        if not row:
            return f"empty spread for source diagonal {d}"
        for c, j in row:
            if not (0 <= c < len(tgt.blocks) and 1 <= j <= tgt.blocks[c]):
                return f"spread of {d} names invalid target diagonal {(c, j)}"
            if (c, j) in seen:
                return f"target diagonal {(c, j)} hit twice"
            seen.add((c, j))
    if len(seen) != len(tgt.diagonal):
        missing = sorted(set(tgt.diagonal) - seen)[0]
        return f"not unital: target diagonal {missing} not covered"
    for b, n in enumerate(src.blocks):
        pattern = [c for c, _ in emb.image((b, 1))]
        for i in range(2, n + 1):
            other = [c for c, _ in emb.image((b, i))]
            if sorted(other) != sorted(pattern):
                return f"unequal multiplicities from source block {b} (diagonal {i})"
            if other != pattern:
                return f"spread of {(b, i)} does not follow the block order of {(b, 1)}"
    tsucc = tgt.succ_masks
    for u in sorted(src.units):
        for v in _raw_image(emb, u):
            if not tsucc[v.block][v.row] >> v.col & 1:
                return f"not regular: image of {tuple(u)} contains {tuple(v)} outside the target"
    return None


def apply_embedding(emb: RegularEmbedding, u: MatrixUnit) -> frozenset[MatrixUnit]:
    if u not in emb.source.units:
        raise AlgebraError(f"{tuple(u)} is not a unit of the source algebra")
    return frozenset(_raw_image(emb, u))


def identity_embedding(alg: DigraphAlgebra) -> RegularEmbedding:
    return RegularEmbedding(alg, alg, tuple((d,) for d in alg.diagonal))


@lru_cache(maxsize=64)
def refinement_embedding(n: int, m: int) -> RegularEmbedding:
    """``e_ij -> sum_t e_{m(i-1)+t, m(j-1)+t}`` from T_n into T_nm."""
    if m < 2:
        raise AlgebraError("refinement multiplicity must be at least 2")
    spread = tuple(tuple((0, m * (i - 1) + t) for t in range(1, m + 1)) for i in range(1, n + 1))
    return RegularEmbedding(make_upper_triangular(n), make_upper_triangular(n * m), spread)


@lru_cache(maxsize=64)
def standard_embedding(n: int, m: int) -> RegularEmbedding:
    """``e_ij -> sum_t e_{i+tn, j+tn}`` from T_n into T_nm."""
    if m < 2:
        raise AlgebraError("standard multiplicity must be at least 2")
    spread = tuple(tuple((0, i + t * n) for t in range(m)) for i in range(1, n + 1))
    return RegularEmbedding(make_upper_triangular(n), make_upper_triangular(n * m), spread)


@lru_cache(maxsize=64)
def twist_embedding(n: int) -> RegularEmbedding:
    """Multiplicity 2 refinement of T_{2^n} followed by swapping the last two target diagonals."""
    if n < 0:
        raise AlgebraError("twist exponent must be non-negative")
    size = 2 ** n
    last = 2 * size
    swap = {last - 1: last, last: last - 1}
    spread = tuple(
        tuple((0, swap.get(j, j)) for j in (2 * i - 1, 2 * i)) for i in range(1, size + 1)
    )
    return RegularEmbedding(make_upper_triangular(size), make_upper_triangular(last), spread)


def compose_embeddings(first: RegularEmbedding, second: RegularEmbedding) -> RegularEmbedding:
    """The embedding ``second o first`` (apply ``first``, then ``second``)."""
    if first.target != second.source:
        raise EmbeddingError("cannot compose: target of the first is not the source of the second")
    spread = tuple(
        tuple(d for mid in row for d in second.image(mid)) for row in first.spread
    )
    return RegularEmbedding(first.source, second.target, spread)


def push_units(embeddings: Iterable[RegularEmbedding], units: Iterable[MatrixUnit]) -> set[MatrixUnit]:
    """Images of ``units`` through a chain of embeddings, without building composites."""
    current = set(units)
    for emb in embeddings:
        nxt: set[MatrixUnit] = set()
        for u in current:
            nxt.update(_raw_image(emb, u))
        current = nxt
    return current


def push_diagonals(embeddings: Iterable[RegularEmbedding], diags: Iterable[Diag]) -> list[Diag]:
    current = list(diags)
    for emb in embeddings:
        current = [d for x in current for d in emb.image(x)]
    return current


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    message: str = "ok"


def validate(obj, triangular: bool = True) -> ValidationReport:
    """Check an algebra or embedding; the first violated invariant is reported."""
    if isinstance(obj, RegularEmbedding):
        for part in (obj.source, obj.target):
            problem = check_algebra(part, triangular)
            if problem:
                return ValidationReport(False, problem)
        problem = check_embedding(obj)
    elif isinstance(obj, DigraphAlgebra):
        problem = check_algebra(obj, triangular)
    else:
        raise TypeError(f"cannot validate {type(obj).__name__}")
    return ValidationReport(False, problem) if problem else ValidationReport(True)
