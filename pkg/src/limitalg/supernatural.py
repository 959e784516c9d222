"""Supernatural numbers (prime exponents in N with infinity) and the pair equivalence ~."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from sympy import factorint

INF = math.inf


def _exponent(value) -> int | float:
    if value == INF or value in ("inf", "oo"):
        return INF
    value = int(value)
    if value < 0:
        raise ValueError("exponents are non-negative")
    return value


@dataclass(frozen=True, order=False)
class Supernatural:
    """A formal product of prime powers; exponents may be infinite.

    Stored as sorted ``(prime, exponent)`` pairs with no zero exponents.
    """

    factors: tuple[tuple[int, int | float], ...] = ()

    def __post_init__(self):
        merged: dict[int, int | float] = {}
        for p, e in self.factors:
            e = _exponent(e)
            if e:
                merged[int(p)] = merged.get(int(p), 0) + e
        object.__setattr__(self, "factors", tuple(sorted(merged.items())))

    @classmethod
    def of(cls, mapping: Mapping[int, int | float] | None = None) -> "Supernatural":
        return cls(tuple((mapping or {}).items()))

    @classmethod
    def from_int(cls, n: int) -> "Supernatural":
        if n < 1:
            raise ValueError("supernatural numbers are products of primes")
        return cls(tuple(factorint(n).items()))

    @property
    def exponents(self) -> dict[int, int | float]:
        return dict(self.factors)

    def exponent(self, p: int) -> int | float:
        return self.exponents.get(p, 0)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def is_finite(self) -> bool:
        return all(e != INF for _, e in self.factors)

    def __int__(self) -> int:
        if not self.is_finite:
            raise ValueError(f"{self} is not a natural number")
        return math.prod(p ** e for p, e in self.factors)

    def __mul__(self, other) -> "Supernatural":
        if isinstance(other, int):
            other = Supernatural.from_int(other)
        return Supernatural(self.factors + other.factors)

    __rmul__ = __mul__

    def divides(self, other: "Supernatural") -> bool:
        return all(e <= other.exponent(p) for p, e in self.factors)

    def divide(self, n: int) -> "Supernatural":
        """Quotient by a natural number dividing this one (infinite exponents absorb)."""
        divisor = Supernatural.from_int(n)
        if not divisor.divides(self):
            raise ValueError(f"{n} does not divide {self}")
        exps = self.exponents
        for p, e in divisor.factors:
            exps[p] = exps[p] - e
        return Supernatural.of(exps)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        parts = []
        for p, e in self.factors:
            parts.append(str(p) if e == 1 else f"{p}^{'inf' if e == INF else e}")
        return "*".join(parts)

    def to_json(self) -> dict[str, int | str]:
        return {str(p): ("inf" if e == INF else e) for p, e in self.factors}

    @classmethod
    def from_json(cls, data: Mapping[str, int | str]) -> "Supernatural":
        return cls(tuple((int(p), _exponent(e)) for p, e in data.items()))

    @classmethod
    def parse(cls, text: str) -> "Supernatural":
        """Parse ``"3*2^inf"`` style strings."""
        text = text.replace(" ", "")
        if text in ("", "1"):
            return cls()
        factors = []
        for part in text.split("*"):
            base, _, exp = part.partition("^")
            for p, e in factorint(int(base)).items():
                factors.append((p, INF if exp in ("inf", "oo") else e * int(exp or 1)))
        return cls(tuple(factors))


ONE = Supernatural()


def supernatural_from_sequence(pre: Iterable[int], period: Iterable[int] = ()) -> Supernatural:
    """Product of an eventually periodic sequence ``pre, period, period, ...``."""
    result = ONE
    for n in pre:
        result = result * Supernatural.from_int(int(n))
    infinite = {p for n in period for p in factorint(int(n))}
    return result * Supernatural(tuple((p, INF) for p in infinite))


@dataclass(frozen=True)
class GIPair:
    r: Supernatural
    s: Supernatural

    def __str__(self) -> str:
        return f"({self.r}, {self.s})"

    def to_json(self) -> dict:
        return {"r": str(self.r), "s": str(self.s)}

    def canonical(self) -> "GIPair":
        """Representative of the ~-class: finite exponents are moved onto ``r``
        when both sides are finite, and dropped beside an infinite one."""
        r, s = {}, {}
        for p in sorted(set(self.r.primes) | set(self.s.primes)):
            a, b = self.r.exponent(p), self.s.exponent(p)
            if a != INF and b != INF:
                r[p] = a + b
            else:
                r[p] = INF if a == INF else 0
                s[p] = INF if b == INF else 0
        return GIPair(Supernatural.of(r), Supernatural.of(s))


@dataclass(frozen=True)
class PairEquivalence:
    equivalent: bool
    a: int | None = None
    b: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.equivalent


def pair_equiv(first: GIPair, second: GIPair) -> PairEquivalence:
    """Decide ``(r, s) ~ (r', s')``: ``rs = r's'`` and coprime ``a, b`` with ``br = ar'``, ``as = bs'``.

    Solved prime by prime: with ``alpha, beta`` the exponents of ``p`` in ``a, b``,
    ``beta + r_p = alpha + r'_p`` and ``alpha + s_p = beta + s'_p``. The smallest
    witness is returned.
    """
    primes = sorted(set(first.r.primes) | set(first.s.primes)
                    | set(second.r.primes) | set(second.s.primes))
    a = b = 1
    for p in primes:
        r1, s1 = first.r.exponent(p), first.s.exponent(p)
        r2, s2 = second.r.exponent(p), second.s.exponent(p)
        if r1 + s1 != r2 + s2:
            return PairEquivalence(False, reason=f"products differ at prime {p}")
        shift = None  # alpha - beta
        for side, lhs, rhs in (("r", r1, r2), ("s", s2, s1)):
            if (lhs == INF) != (rhs == INF):
                return PairEquivalence(
                    False, reason=f"exponent of {p} in {side} infinite on one side only")
            if lhs == INF:
                continue
            need = lhs - rhs
            if shift is not None and shift != need:
                return PairEquivalence(False, reason=f"no common shift at prime {p}")
            shift = need
        if shift:
            if shift > 0:
                a *= p ** shift
            else:
                b *= p ** -shift
    return PairEquivalence(True, a, b)
