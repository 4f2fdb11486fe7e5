"""Hilbert–Poincaré series as finitely supported Laurent polynomials in t.

A series is either *reduced* (P̄) or *unreduced* (P = 1 + P̄ for a connected
or pointed space).  Products follow the two Künneth identities

    P(X) · P(Y) = P(X × Y)        (unreduced × unreduced)
    P̄(X) · P̄(Y) = P̄(X ∧ Y)       (reduced × reduced)

and any other mix of flags is rejected.  The only negative exponent allowed
is t^{-1}, which appears for the empty complex {∅} in link series.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping


class SeriesError(ValueError):
    pass


@dataclass(frozen=True)
class PoincareSeries:
    coeffs: Mapping[int, int] = field(default_factory=dict)
    reduced: bool = True

    def __post_init__(self):
        clean = {}
        for d, c in self.coeffs.items():
            d, c = int(d), int(c)
            if c < 0:
                raise SeriesError(f"negative coefficient {c} at t^{d}")
            if d < -1:
                raise SeriesError(f"degree {d} below -1")
            if c:
                clean[d] = c
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    def __hash__(self):
        return hash((tuple(self.coeffs.items()), self.reduced))

    @classmethod
    def zero(cls, reduced: bool = True) -> "PoincareSeries":
        return cls({}, reduced)

    @classmethod
    def one(cls, reduced: bool = True) -> "PoincareSeries":
        """The series 1: P̄(S⁰) when reduced, P(point) when unreduced."""
        return cls({0: 1}, reduced)

    @classmethod
    def monomial(cls, degree: int, coefficient: int = 1, reduced: bool = True) -> "PoincareSeries":
        return cls({degree: coefficient}, reduced)

    @classmethod
    def from_degrees(cls, degrees, reduced: bool = True) -> "PoincareSeries":
        acc: dict[int, int] = {}
        for d in degrees:
            acc[d] = acc.get(d, 0) + 1
        return cls(acc, reduced)

    def __getitem__(self, d: int) -> int:
        return self.coeffs.get(d, 0)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def _check(self, other: "PoincareSeries") -> None:
        if not isinstance(other, PoincareSeries):
            raise TypeError(f"expected PoincareSeries, got {type(other).__name__}")
        if other.reduced != self.reduced:
            raise SeriesError("cannot combine a reduced and an unreduced series")

    def __add__(self, other: "PoincareSeries") -> "PoincareSeries":
        self._check(other)
        acc = dict(self.coeffs)
        for d, c in other.coeffs.items():
            acc[d] = acc.get(d, 0) + c
        return PoincareSeries(acc, self.reduced)

    def __mul__(self, other: "PoincareSeries") -> "PoincareSeries":
        self._check(other)
        acc: dict[int, int] = {}
        for d1, c1 in self.coeffs.items():
            for d2, c2 in other.coeffs.items():
                acc[d1 + d2] = acc.get(d1 + d2, 0) + c1 * c2
        return PoincareSeries(acc, self.reduced)

    def shift(self, s: int = 1) -> "PoincareSeries":
        """Multiply by t^s; ``shift(1)`` is suspension of a reduced series."""
        if not self.reduced:
            raise SeriesError("shift is only meaningful for reduced series")
        return PoincareSeries({d + s: c for d, c in self.coeffs.items()}, True)

    def unreduced(self) -> "PoincareSeries":
        if not self.reduced:
            return self
        acc = dict(self.coeffs)
        acc[0] = acc.get(0, 0) + 1
        return PoincareSeries(acc, False)

    def to_reduced(self) -> "PoincareSeries":
        if self.reduced:
            return self
        if self[0] < 1:
            raise SeriesError("unreduced series has no unit in degree 0")
        acc = dict(self.coeffs)
        acc[0] -= 1
        return PoincareSeries(acc, True)

    def evaluate(self, t: int):
        """Exact value at an integer or rational ``t`` (t = -1 gives χ)."""
        return sum(c * t ** d for d, c in self.coeffs.items())

    def min_degree(self) -> int | None:
        return min(self.coeffs) if self.coeffs else None

    def max_degree(self) -> int | None:
        return max(self.coeffs) if self.coeffs else None

    def to_dict(self) -> dict[str, str]:
        return {str(d): str(c) for d, c in self.coeffs.items()}

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for d, c in self.coeffs.items():
            mono = "1" if d == 0 else ("t" if d == 1 else f"t^{d}")
            if d == 0:
                parts.append(str(c))
            else:
                parts.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(parts)


def series_arith(op: str, a: PoincareSeries, b: PoincareSeries | None = None, s: int = 1) -> PoincareSeries:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "shift":
        return a.shift(s)
    raise SeriesError(f"unknown operation {op!r}")


def series_of_complex(K, field) -> PoincareSeries:
    """Reduced series of |K|: coefficient of t^d is dim H̃^d(K)."""
    from .homalg import betti_numbers

    return PoincareSeries(betti_numbers(K, field), reduced=True)


def series_of_degrees(degrees) -> PoincareSeries:
    """Reduced series of a wedge of spheres, one sphere per listed degree."""
    return PoincareSeries.from_degrees(degrees, reduced=True)
