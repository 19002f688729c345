"""
Exact arithmetic for finite quadratic module computations.

Rationals are ``fractions.Fraction``. Elements of cyclotomic fields are
``CycloNum`` values: a conductor n and coefficients on the power basis
1, ζ_n, ..., ζ_n^{φ(n)-1}, always reduced modulo the n-th cyclotomic
polynomial so that equality is a coefficient comparison. Mixed conductors are
lifted to their lcm.

Numerical work uses mpmath interval arithmetic (``mpmath.iv``). The interval
context is global, so precision is only ever changed through
``interval_precision`` which restores the previous value on exit.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterator, Union

import mpmath
from mpmath import iv
from sympy import Poly, Symbol, cyclotomic_poly

RationalLike = Union[int, Fraction, str]

_x = Symbol("x")


def as_rational(value: RationalLike) -> Fraction:
    """Parse ints, Fractions and "a/b" strings into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def mod1(value: RationalLike) -> Fraction:
    """Representative of value modulo 1 in [0, 1)."""
    value = as_rational(value)
    return value - (value.numerator // value.denominator)


@lru_cache(maxsize=None)
def cyclotomic_coefficients(n: int) -> tuple[int, ...]:
    """Coefficients of Φ_n from the constant term upwards."""
    coeffs = Poly(cyclotomic_poly(n, _x), _x).all_coeffs()
    return tuple(int(c) for c in reversed(coeffs))


def _reduce(n: int, dense: list[Fraction]) -> tuple[Fraction, ...]:
    phi = cyclotomic_coefficients(n)
    degree = len(phi) - 1
    coeffs = list(dense) + [Fraction(0)] * max(0, degree - len(dense))
    for k in range(len(coeffs) - 1, degree - 1, -1):
        c = coeffs[k]
        if c:
            shift = k - degree
            for j in range(degree):
                if phi[j]:
                    coeffs[shift + j] -= c * phi[j]
            coeffs[k] = Fraction(0)
    return tuple(coeffs[:degree])


class CycloNum:
    """Immutable element of Q(ζ_n) in reduced power-basis coordinates."""

    __slots__ = ("_conductor", "_coeffs")
    __hash__ = None

    def __init__(self, conductor: int, reduced: tuple[Fraction, ...]):
        self._conductor = conductor
        self._coeffs = reduced

    # construction

    @classmethod
    def from_exponents(cls, conductor: int, mapping: dict[int, RationalLike]) -> CycloNum:
        if conductor < 1:
            raise ValueError("conductor must be positive")
        dense = [Fraction(0)] * conductor
        for k, c in mapping.items():
            dense[k % conductor] += as_rational(c)
        return cls(conductor, _reduce(conductor, dense))

    @classmethod
    def rational(cls, value: RationalLike) -> CycloNum:
        return cls(1, (as_rational(value),))

    @classmethod
    def zero(cls) -> CycloNum:
        return cls.rational(0)

    @classmethod
    def one(cls) -> CycloNum:
        return cls.rational(1)

    # accessors

    @property
    def conductor(self) -> int:
        return self._conductor

    @property
    def coefficients(self) -> dict[int, Fraction]:
        return {k: c for k, c in enumerate(self._coeffs) if c}

    def is_zero(self) -> bool:
        return not any(self._coeffs)

    def as_rational(self) -> Fraction | None:
        """The value as a Fraction, or None when it is not rational."""
        if any(self._coeffs[1:]):
            return None
        return self._coeffs[0]

    def lift(self, conductor: int) -> tuple[Fraction, ...]:
        if conductor == self._conductor:
            return self._coeffs
        if conductor % self._conductor:
            raise ValueError(f"cannot lift conductor {self._conductor} to {conductor}")
        step = conductor // self._conductor
        dense = [Fraction(0)] * conductor
        for k, c in enumerate(self._coeffs):
            if c:
                dense[k * step] += c
        return _reduce(conductor, dense)

    def lifted(self, conductor: int) -> CycloNum:
        return CycloNum(conductor, self.lift(conductor))

    # arithmetic

    @staticmethod
    def _coerce(other) -> CycloNum | None:
        if isinstance(other, CycloNum):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return CycloNum.rational(other)
        return None

    def _common(self, other: CycloNum):
        n = lcm(self._conductor, other._conductor)
        return n, self.lift(n), other.lift(n)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n, a, b = self._common(other)
        return CycloNum(n, tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return CycloNum(self._conductor, tuple(-c for c in self._coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return CycloNum(self._conductor, tuple(c * other for c in self._coeffs))
        if not isinstance(other, CycloNum):
            return NotImplemented
        n, a, b = self._common(other)
        product = [Fraction(0)] * (2 * len(a) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        product[i + j] += x * y
        return CycloNum(n, _reduce(n, product))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise ZeroDivisionError("division of a cyclotomic number by zero")
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result, base = CycloNum.one(), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conjugate(self) -> CycloNum:
        n = self._conductor
        return CycloNum.from_exponents(n, {(-k) % n: c for k, c in enumerate(self._coeffs) if c})

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        _, a, b = self._common(other)
        return a == b

    def __repr__(self):
        terms = " + ".join(f"{c}*z{self._conductor}^{k}" for k, c in self.coefficients.items())
        return f"CycloNum({terms or '0'})"


def root_of_unity(x: RationalLike) -> CycloNum:
    """e(x) = exp(2πix) with conductor the reduced denominator of x."""
    x = mod1(x)
    return CycloNum.from_exponents(x.denominator, {x.numerator: 1})


def e(x: RationalLike) -> CycloNum:
    return root_of_unity(x)


@contextmanager
def interval_precision(bits: int) -> Iterator[None]:
    saved = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = saved


def _iv_rational(value: Fraction):
    return iv.mpf(value.numerator) / value.denominator


def _decimal(point, digits: int) -> str:
    return mpmath.nstr(mpmath.mpf(point), digits)


@dataclass(frozen=True)
class ComplexInterval:
    """Rectangle real x imag of mpmath intervals containing a complex number."""

    real: object
    imag: object

    @classmethod
    def from_number(cls, value) -> ComplexInterval:
        if isinstance(value, Fraction):
            return cls(_iv_rational(value), iv.mpf(0))
        if isinstance(value, complex):
            return cls(iv.mpf(value.real), iv.mpf(value.imag))
        return cls(iv.mpf(value), iv.mpf(0))

    def __add__(self, other):
        other = other if isinstance(other, ComplexInterval) else ComplexInterval.from_number(other)
        return ComplexInterval(self.real + other.real, self.imag + other.imag)

    __radd__ = __add__

    def __neg__(self):
        return ComplexInterval(-self.real, -self.imag)

    def __sub__(self, other):
        other = other if isinstance(other, ComplexInterval) else ComplexInterval.from_number(other)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, ComplexInterval):
            other = ComplexInterval.from_number(other)
        return ComplexInterval(
            self.real * other.real - self.imag * other.imag,
            self.real * other.imag + self.imag * other.real,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, ComplexInterval):
            other = ComplexInterval.from_number(other)
        if not other.excludes_zero():
            raise ZeroDivisionError("divisor interval contains zero")
        norm = other.real**2 + other.imag**2
        numerator = self * other.conjugate()
        return ComplexInterval(numerator.real / norm, numerator.imag / norm)

    def conjugate(self) -> ComplexInterval:
        return ComplexInterval(self.real, -self.imag)

    def scale(self, factor) -> ComplexInterval:
        """Multiply by a real interval or number."""
        return ComplexInterval(self.real * factor, self.imag * factor)

    def abs_upper(self) -> float:
        """Upper bound for |z|."""
        bound = iv.sqrt(self.real**2 + self.imag**2)
        return float(mpmath.mpf(bound.b))

    def contains(self, value: complex, slack: float = 0.0) -> bool:
        value = complex(value)
        return bool(
            self.real.a - slack <= value.real <= self.real.b + slack
            and self.imag.a - slack <= value.imag <= self.imag.b + slack
        )

    def excludes_zero(self) -> bool:
        return bool(self.real.a > 0 or self.real.b < 0 or self.imag.a > 0 or self.imag.b < 0)

    @property
    def width(self) -> mpmath.mpf:
        """Larger side length, rounded up relative to itself so a proper interval never reports 0."""
        return max(mpmath.mpf(self.real.delta), mpmath.mpf(self.imag.delta))

    @property
    def midpoint(self) -> complex:
        return complex(float(mpmath.mpf(self.real.mid)), float(mpmath.mpf(self.imag.mid)))

    def to_json(self, digits: int = 25) -> dict[str, list[str]]:
        return {
            "re": [_decimal(self.real.a, digits), _decimal(self.real.b, digits)],
            "im": [_decimal(self.imag.a, digits), _decimal(self.imag.b, digits)],
        }


def real_sqrt(n: RationalLike):
    return iv.sqrt(_iv_rational(as_rational(n)))


def embed_complex(z: CycloNum, precision_bits: int = 128) -> ComplexInterval:
    """Interval enclosure of the embedding ζ_n -> exp(2πi/n)."""
    if precision_bits < 53:
        raise ValueError("precision_bits must be at least 53")
    n = z.conductor
    with interval_precision(precision_bits):
        real, imag = iv.mpf(0), iv.mpf(0)
        for k, c in z.coefficients.items():
            coefficient = _iv_rational(c)
            if k == 0:
                real += coefficient
                continue
            angle = 2 * iv.pi * k / n
            real += coefficient * iv.cos(angle)
            imag += coefficient * iv.sin(angle)
        return ComplexInterval(real, imag)


def numeric(z: CycloNum) -> complex:
    """Double precision value, for reporting only."""
    return embed_complex(z, 64).midpoint
