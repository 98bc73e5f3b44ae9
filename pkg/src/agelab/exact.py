"""Exact complex rationals.

Walsh coefficients are kept as pairs of :class:`fractions.Fraction` so that
shift, age and norm identities hold with zero tolerance. Floats convert
exactly (every binary float is a dyadic rational).
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from fractions import Fraction


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, numbers.Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, numbers.Real):
        return Fraction(float(value))
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def format_rational(q: Fraction) -> str:
    """``p`` for integers, ``p/q`` otherwise."""
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True, slots=True)
class ExactComplex:
    re: Fraction
    im: Fraction = Fraction(0)

    @classmethod
    def coerce(cls, value) -> ExactComplex:
        if isinstance(value, ExactComplex):
            return value
        if isinstance(value, numbers.Complex) and not isinstance(value, numbers.Real):
            return cls(_to_fraction(value.real), _to_fraction(value.imag))
        return cls(_to_fraction(value), Fraction(0))

    def __add__(self, other):
        other = ExactComplex.coerce(other)
        return ExactComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return ExactComplex(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-ExactComplex.coerce(other))

    def __rsub__(self, other):
        return ExactComplex.coerce(other) - self

    def __mul__(self, other):
        other = ExactComplex.coerce(other)
        return ExactComplex(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conjugate(self) -> ExactComplex:
        return ExactComplex(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> float:
        return math.sqrt(self.abs2())

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        try:
            other = ExactComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        if not self.im:
            return f"ExactComplex({format_rational(self.re)})"
        return f"ExactComplex({format_rational(self.re)}, {format_rational(self.im)})"
