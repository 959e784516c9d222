"""Lexicographic algebras: ordered presentations, their invariants, and the decisions built on them.

A presentation is a finite concatenation of segments of type finite, omega
(``omega_plus``), reversed omega (``omega_minus``) and the integers (``zeta``),
each carrying an eventually periodic multiplicity sequence. Sequences are read
away from the boundary that touches the rest of the order: ``ascending``
sequences rightwards from the left end (or from the origin of a zeta segment),
``descending`` sequences leftwards from the right end (or from just left of the
origin).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .algebra import RegularEmbedding, make_upper_triangular
from .supernatural import ONE, GIPair, PairEquivalence, Supernatural, pair_equiv, supernatural_from_sequence
from .tower import DEFAULT_MAX_LEVELS, Tower, build_tower, lexicographic_rule

FINITE, OMEGA_PLUS, OMEGA_MINUS, ZETA = "finite", "omega_plus", "omega_minus", "zeta"
SHAPES = (FINITE, OMEGA_PLUS, OMEGA_MINUS, ZETA)


class PresentationError(ValueError):
    pass


class TargetNotPrimitive(ValueError):
    pass


def _multiplicities(values: Iterable[int]) -> tuple[int, ...]:
    values = tuple(int(v) for v in values)
    for v in values:
        if v < 2:
            raise PresentationError(f"multiplicities must be at least 2, got {v}")
    return values


@dataclass(frozen=True)
class Periodic:
    """The sequence ``pre`` followed by ``period`` repeated forever."""

    pre: tuple[int, ...] = ()
    period: tuple[int, ...] = (2,)

    def __post_init__(self):
        object.__setattr__(self, "pre", _multiplicities(self.pre))
        object.__setattr__(self, "period", _multiplicities(self.period))
        if not self.period:
            raise PresentationError("period lists must be nonempty")

    def __getitem__(self, k: int) -> int:
        if k < len(self.pre):
            return self.pre[k]
        return self.period[(k - len(self.pre)) % len(self.period)]

    def head(self, d: int) -> tuple[int, ...]:
        return tuple(self[k] for k in range(d))

    def drop(self, d: int) -> "Periodic":
        if d <= len(self.pre):
            return Periodic(self.pre[d:], self.period)
        k = (d - len(self.pre)) % len(self.period)
        return Periodic((), self.period[k:] + self.period[:k])

    def prepend(self, values: Iterable[int]) -> "Periodic":
        return Periodic(tuple(values) + self.pre, self.period)

    def supernatural(self) -> Supernatural:
        return supernatural_from_sequence(self.pre, self.period)

    @property
    def horizon(self) -> int:
        return len(self.pre) + len(self.period)

    def to_json(self) -> dict:
        return {"pre": list(self.pre), "period": list(self.period)}


@dataclass(frozen=True)
class Segment:
    shape: str
    values: tuple[int, ...] = ()
    ascending: Periodic | None = None
    descending: Periodic | None = None

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise PresentationError(f"unknown segment shape {self.shape!r}")
        object.__setattr__(self, "values", _multiplicities(self.values))
        wants = {FINITE: (False, False), OMEGA_PLUS: (True, False),
                 OMEGA_MINUS: (False, True), ZETA: (True, True)}[self.shape]
        if (self.ascending is not None, self.descending is not None) != wants:
            raise PresentationError(f"{self.shape} segment has the wrong multiplicity data")
        if self.shape == FINITE and not self.values:
            raise PresentationError("finite segments need at least one element")
        if self.shape != FINITE and self.values:
            raise PresentationError(f"{self.shape} segment takes no finite values")

    @classmethod
    def finite(cls, values: Sequence[int]) -> "Segment":
        return cls(FINITE, tuple(values))

    @classmethod
    def omega_plus(cls, pre: Sequence[int] = (), period: Sequence[int] = (2,)) -> "Segment":
        return cls(OMEGA_PLUS, ascending=Periodic(tuple(pre), tuple(period)))

    @classmethod
    def omega_minus(cls, pre: Sequence[int] = (), period: Sequence[int] = (2,)) -> "Segment":
        return cls(OMEGA_MINUS, descending=Periodic(tuple(pre), tuple(period)))

    @classmethod
    def zeta(cls, descending: Periodic = Periodic(), ascending: Periodic = Periodic()) -> "Segment":
        return cls(ZETA, ascending=ascending, descending=descending)

    @property
    def size(self) -> int | None:
        return len(self.values) if self.shape == FINITE else None

    @property
    def has_minimum(self) -> bool:
        return self.shape in (FINITE, OMEGA_PLUS)

    def to_json(self) -> dict:
        if self.shape == FINITE:
            return {"shape": FINITE, "nu": list(self.values)}
        if self.shape == OMEGA_PLUS:
            return {"shape": OMEGA_PLUS, **self.ascending.to_json()}
        if self.shape == OMEGA_MINUS:
            return {"shape": OMEGA_MINUS, **self.descending.to_json()}
        return {"shape": ZETA, "descending": self.descending.to_json(),
                "ascending": self.ascending.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "Segment":
        shape = data.get("shape")
        if shape == FINITE:
            return cls.finite(data["nu"])
        if shape in (OMEGA_PLUS, OMEGA_MINUS):
            seq = Periodic(tuple(data.get("pre", ())), tuple(data["period"]))
            return cls(shape, ascending=seq) if shape == OMEGA_PLUS else cls(shape, descending=seq)
        if shape == ZETA:
            return cls.zeta(
                Periodic(tuple(data["descending"].get("pre", ())), tuple(data["descending"]["period"])),
                Periodic(tuple(data["ascending"].get("pre", ())), tuple(data["ascending"]["period"])))
        raise PresentationError(f"unknown segment shape {shape!r}")


@dataclass(frozen=True)
class LinearOrderPresentation:
    segments: tuple[Segment, ...]

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        if not self.segments:
            raise PresentationError("a presentation needs at least one segment")

    def __add__(self, other: "LinearOrderPresentation") -> "LinearOrderPresentation":
        return LinearOrderPresentation(self.segments + other.segments)

    def to_json(self) -> dict:
        return {"segments": [s.to_json() for s in self.segments]}

    @classmethod
    def from_json(cls, data: dict) -> "LinearOrderPresentation":
        return cls(tuple(Segment.from_json(s) for s in data["segments"]))


def presentation(*segments: Segment) -> LinearOrderPresentation:
    return LinearOrderPresentation(tuple(segments))


def z_plus(period: Sequence[int] = (2,), pre: Sequence[int] = ()) -> LinearOrderPresentation:
    """The positive integers: the refinement order when the multiplicities are all 2."""
    return presentation(Segment.omega_plus(pre, period))


def z_minus(period: Sequence[int] = (2,), pre: Sequence[int] = ()) -> LinearOrderPresentation:
    """The negative integers: the standard order when the multiplicities are all 2."""
    return presentation(Segment.omega_minus(pre, period))


def z_all(period: Sequence[int] = (2,)) -> LinearOrderPresentation:
    """The integers: the alternation order when the multiplicities are all 2."""
    return presentation(Segment.zeta(Periodic((), tuple(period)), Periodic((), tuple(period))))


def order_size(P: LinearOrderPresentation) -> int | None:
    sizes = [s.size for s in P.segments]
    return None if None in sizes else sum(sizes)


# -- the approximately-equal quotient -----------------------------------------------------

def _merge(left: Segment, right: Segment) -> Segment | None:
    if left.shape == FINITE and right.shape == FINITE:
        return Segment.finite(left.values + right.values)
    if left.shape == FINITE and right.shape == OMEGA_PLUS:
        return Segment(OMEGA_PLUS, ascending=right.ascending.prepend(left.values))
    if left.shape == OMEGA_MINUS and right.shape == FINITE:
        return Segment(OMEGA_MINUS, descending=left.descending.prepend(reversed(right.values)))
    if left.shape == OMEGA_MINUS and right.shape == OMEGA_PLUS:
        return Segment.zeta(left.descending, right.ascending)
    return None


def _merge3(left: Segment, mid: Segment, right: Segment) -> Segment | None:
    if (left.shape, mid.shape, right.shape) == (OMEGA_MINUS, FINITE, OMEGA_PLUS):
        return Segment.zeta(left.descending, right.ascending.prepend(mid.values))
    return None


def _rewrites(segments: tuple[Segment, ...]) -> list[tuple[Segment, ...]]:
    out = []
    for k in range(len(segments) - 1):
        merged = _merge(segments[k], segments[k + 1])
        if merged is not None:
            out.append(segments[:k] + (merged,) + segments[k + 2:])
    for k in range(len(segments) - 2):
        merged = _merge3(*segments[k:k + 3])
        if merged is not None:
            out.append(segments[:k] + (merged,) + segments[k + 3:])
    return out


def normalize(P: LinearOrderPresentation, rng: random.Random | None = None) -> LinearOrderPresentation:
    """Merge adjacent segments lying in one approximate-equality class.

    Without ``rng`` the leftmost applicable rule fires first; with one, a random
    applicable rule fires at each step. The resulting classes do not depend on the
    schedule, although a zeta segment's origin may.
    """
    segments = P.segments
    while True:
        options = _rewrites(segments)
        if not options:
            return LinearOrderPresentation(segments)
        segments = rng.choice(options) if rng is not None else options[0]


def class_invariant(segment: Segment, canonical: bool = True) -> GIPair:
    """The pair ``(r, s)`` of one class: products of multiplicities right and left of the origin."""
    if segment.shape == FINITE:
        pair = GIPair(Supernatural.from_int(_product(segment.values)), ONE)
    elif segment.shape == OMEGA_PLUS:
        pair = GIPair(segment.ascending.supernatural(), ONE)
    elif segment.shape == OMEGA_MINUS:
        pair = GIPair(ONE, segment.descending.supernatural())
    else:
        pair = GIPair(segment.ascending.supernatural(), segment.descending.supernatural())
    return pair.canonical() if canonical else pair


def _product(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out *= v
    return out


@dataclass(frozen=True)
class QuotientClass:
    shape: str
    invariant: GIPair
    segment: Segment = field(compare=False, repr=False)

    def to_json(self) -> dict:
        return {"shape": self.shape, "invariant": self.invariant.to_json()}


@dataclass(frozen=True)
class QuotientPresentation:
    classes: tuple[QuotientClass, ...]

    def to_json(self) -> dict:
        return {"classes": [c.to_json() for c in self.classes]}

    @property
    def has_minimum(self) -> bool:
        return self.classes[0].segment.has_minimum


def approx_quotient(P: LinearOrderPresentation, rng: random.Random | None = None) -> QuotientPresentation:
    normal = normalize(P, rng)
    return QuotientPresentation(tuple(
        QuotientClass(s.shape, class_invariant(s), s) for s in normal.segments))


# -- decisions ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IsoDecision:
    isomorphic: bool
    bijection: tuple[tuple[int, int, PairEquivalence], ...] = ()
    reason: str = ""

    def __bool__(self):
        return self.isomorphic

    def to_json(self) -> dict:
        out = {"isomorphic": self.isomorphic}
        if self.isomorphic:
            out["bijection"] = [{"source_class": i, "target_class": j, "a": w.a, "b": w.b}
                                for i, j, w in self.bijection]
        else:
            out["reason"] = self.reason
        return out


def decide_iso(P1: LinearOrderPresentation, P2: LinearOrderPresentation) -> IsoDecision:
    """Isomorphic iff the class orders match one-to-one with ~-equivalent pairs."""
    q1, q2 = approx_quotient(P1), approx_quotient(P2)
    if len(q1.classes) != len(q2.classes):
        return IsoDecision(False, reason=f"quotients have {len(q1.classes)} and "
                                         f"{len(q2.classes)} classes")
    matched = []
    for k, (c1, c2) in enumerate(zip(q1.classes, q2.classes)):
        if c1.shape != c2.shape:
            return IsoDecision(False, reason=f"class {k}: {c1.shape} against {c2.shape}")
        witness = pair_equiv(c1.invariant, c2.invariant)
        if not witness:
            return IsoDecision(False, reason=f"class {k}: {c1.invariant} is not ~ {c2.invariant}")
        matched.append((k, k, witness))
    return IsoDecision(True, tuple(matched))


def is_primitive(P: LinearOrderPresentation) -> bool:
    """No minimal element: the first class is reversed omega or zeta."""
    return approx_quotient(P).classes[0].shape in (OMEGA_MINUS, ZETA)


@dataclass(frozen=True)
class Cut:
    head: tuple[Segment, ...]
    tail: tuple[Segment, ...]
    where: str

    def tail_presentation(self) -> LinearOrderPresentation:
        return LinearOrderPresentation(self.tail)

    def to_json(self) -> dict:
        return {"where": self.where, "head": [s.to_json() for s in self.head],
                "tail": [s.to_json() for s in self.tail]}


def _interior_cuts(seg: Segment) -> Iterator[tuple[Segment, Segment, str]]:
    if seg.shape == FINITE:
        for d in range(1, len(seg.values)):
            yield Segment.finite(seg.values[:d]), Segment.finite(seg.values[d:]), f"after {d}"
    elif seg.shape == OMEGA_PLUS:
        for d in range(1, seg.ascending.horizon + 1):
            yield (Segment.finite(seg.ascending.head(d)),
                   Segment(OMEGA_PLUS, ascending=seg.ascending.drop(d)), f"after first {d}")
    elif seg.shape == OMEGA_MINUS:
        for d in range(1, seg.descending.horizon + 1):
            yield (Segment(OMEGA_MINUS, descending=seg.descending.drop(d)),
                   Segment.finite(tuple(reversed(seg.descending.head(d)))), f"before last {d}")
    else:
        asc, desc = seg.ascending, seg.descending
        yield Segment(OMEGA_MINUS, descending=desc), Segment(OMEGA_PLUS, ascending=asc), "at origin"
        for d in range(1, asc.horizon + 1):
            yield (Segment(OMEGA_MINUS, descending=desc.prepend(reversed(asc.head(d)))),
                   Segment(OMEGA_PLUS, ascending=asc.drop(d)), f"origin+{d}")
        for d in range(1, desc.horizon + 1):
            yield (Segment(OMEGA_MINUS, descending=desc.drop(d)),
                   Segment(OMEGA_PLUS, ascending=asc.prepend(reversed(desc.head(d)))),
                   f"origin-{d}")


def enumerate_cuts(P: LinearOrderPresentation) -> list[Cut]:
    """Initial-interval decompositions ``head + tail`` with nonempty tail.

    Cuts inside an infinite segment go at most one preperiod plus one period deep;
    deeper cuts repeat a tail already listed up to ~.
    """
    segs = P.segments
    cuts = []
    for i, seg in enumerate(segs):
        cuts.append(Cut(segs[:i], segs[i:], f"before segment {i}"))
        for head, tail, where in _interior_cuts(seg):
            cuts.append(Cut(segs[:i] + (head,), (tail,) + segs[i + 1:], f"segment {i} {where}"))
    return cuts


@dataclass(frozen=True)
class EpiDecision:
    exists: bool
    cut: Cut | None = None
    iso: IsoDecision | None = None
    reason: str = ""

    def __bool__(self):
        return self.exists

    def to_json(self) -> dict:
        out = {"epimorphism": self.exists}
        if self.exists:
            out["cut"] = self.cut.to_json()
            out["iso"] = self.iso.to_json()
        else:
            out["reason"] = self.reason
        return out


def decide_epi(P_src: LinearOrderPresentation, P_tgt: LinearOrderPresentation) -> EpiDecision:
    """Epimorphism onto a primitive target iff some tail without a least element is isomorphic to it.

    Non-primitive targets are refused: the criterion does not apply to them.
    """
    if not is_primitive(P_tgt):
        raise TargetNotPrimitive("target order has a minimal element, so the target is not primitive")
    for cut in enumerate_cuts(P_src):
        tail = cut.tail_presentation()
        if not is_primitive(tail):
            continue
        iso = decide_iso(tail, P_tgt)
        if iso:
            return EpiDecision(True, cut, iso)
    return EpiDecision(False, reason="no tail without a minimal element is isomorphic to the target")


# -- lexicographic towers ----------------------------------------------------------------

Element = tuple[int, int]


def _segment_keys(seg: Segment) -> Iterator[int]:
    if seg.shape == FINITE:
        yield from range(len(seg.values))
    elif seg.shape == ZETA:
        yield 0
        for k in itertools.count(1):
            yield -k
            yield k
    else:
        yield from itertools.count()


def default_enumeration(P: LinearOrderPresentation) -> Iterator[Element]:
    """Round-robin over segments so every element is reached."""
    iters = [(i, _segment_keys(s)) for i, s in enumerate(P.segments)]
    while iters:
        alive = []
        for i, it in iters:
            key = next(it, None)
            if key is not None:
                yield (i, key)
                alive.append((i, it))
        iters = alive


def _element_info(P: LinearOrderPresentation, element: Element) -> tuple[tuple[int, int], int]:
    """Order key and multiplicity of an element ``(segment, key)``."""
    i, key = element
    if not 0 <= i < len(P.segments):
        raise PresentationError(f"no segment {i}")
    seg = P.segments[i]
    if seg.shape == FINITE:
        if not 0 <= key < len(seg.values):
            raise PresentationError(f"finite segment {i} has no element {key}")
        return (i, key), seg.values[key]
    if seg.shape == OMEGA_PLUS:
        if key < 0:
            raise PresentationError("omega_plus keys are non-negative")
        return (i, key), seg.ascending[key]
    if seg.shape == OMEGA_MINUS:
        if key < 0:
            raise PresentationError("omega_minus keys count from the right end and are non-negative")
        return (i, -key - 1), seg.descending[key]
    return (i, key), (seg.ascending[key] if key >= 0 else seg.descending[-key - 1])


def _rank(coords: Sequence[int], significance: Sequence[int], nus: Sequence[int]) -> int:
    rank = 0
    for c in significance:
        rank = rank * nus[c] + coords[c] - 1
    return rank + 1


@lru_cache(maxsize=32)
def lex_levels(P: LinearOrderPresentation, n_levels: int,
               enumeration: tuple[Element, ...] | None = None):
    """Levels ``T_{nu_1...nu_n}`` and the embeddings appending one coordinate each."""
    source = default_enumeration(P) if enumeration is None else iter(enumeration)
    elements = list(itertools.islice(source, n_levels))
    if len(elements) < n_levels:
        raise PresentationError(f"enumeration supplies only {len(elements)} elements, "
                                f"{n_levels} levels requested")
    if len(set(elements)) != len(elements):
        raise PresentationError("enumeration repeats an element")
    info = [_element_info(P, e) for e in elements]
    keys = [k for k, _ in info]
    nus = [nu for _, nu in info]
    levels = []
    embeddings: list[RegularEmbedding] = []
    for n in range(1, n_levels + 1):
        levels.append(make_upper_triangular(_product(nus[:n])))
        if n == 1:
            continue
        old = sorted(range(n - 1), key=lambda c: keys[c])
        new = sorted(range(n), key=lambda c: keys[c])
        spread: list[tuple | None] = [None] * len(levels[-2].diagonal)
        for coords in itertools.product(*(range(1, nu + 1) for nu in nus[:n - 1])):
            r = _rank(coords, old, nus)
            spread[r - 1] = tuple(
                (0, _rank(coords + (xi,), new, nus)) for xi in range(1, nus[n - 1] + 1))
        embeddings.append(RegularEmbedding(levels[-2], levels[-1], tuple(spread)))
    return tuple(levels), tuple(embeddings)


def lex_tower(P: LinearOrderPresentation, enumeration: Iterable[Element] | None = None,
              depth: int = 3, max_levels: int = DEFAULT_MAX_LEVELS) -> Tower:
    rule = lexicographic_rule(P, None if enumeration is None else list(enumeration))
    return build_tower(rule, depth, max_levels)
