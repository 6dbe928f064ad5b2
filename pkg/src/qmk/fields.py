"""Working fields for exact and floating computations.

Three fields are supported, all presenting the same small interface
(``zero``, ``one``, ``coerce``, ``is_zero``, ``to_complex``, ``encode`` /
``decode`` and ``describe``):

* :class:`RationalField` with ``gmpy2.mpq`` elements (equal and hash-equal to
  :class:`fractions.Fraction`),
* :class:`NumberField`, a simple extension Q(theta) of an algebraic number,
  whose elements are :class:`NFElement` coordinate vectors,
* :class:`ComplexField`, Python ``complex`` with an absolute tolerance.
"""

from __future__ import annotations

from fractions import Fraction

from gmpy2 import mpq as Q
from typing import Any, Sequence

import mpmath

from .algebraic import AlgebraicNumber, factor_int_poly, _normalize

Coeffs = tuple  # low degree first
_MPQ = type(Q(0))
RATIONAL_TYPES = (int, Fraction, _MPQ)


def _trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_divmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    a = _trim(list(a))
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Q(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b):
        c = a[-1] / lead
        k = len(a) - len(b)
        q[k] = c
        for i, bi in enumerate(b):
            a[k + i] -= c * bi
        a.pop()
        _trim(a)
    return q, a


def _poly_sub_mul(a: list, q: list, b: list) -> list:
    """a - q*b."""
    out = list(a) + [Q(0)] * max(0, len(q) + len(b) - 1 - len(a))
    for i, qi in enumerate(q):
        if qi:
            for j, bj in enumerate(b):
                out[i + j] -= qi * bj
    return _trim(out)


class RationalField:
    kind = "rational"
    exact = True
    zero = Q(0)
    one = Q(1)

    def coerce(self, value):
        if isinstance(value, _MPQ):
            return value
        if isinstance(value, (AlgebraicNumber, NFElement)):
            return Q(value.as_fraction())
        if isinstance(value, (complex, float)):
            raise TypeError("floating value in an exact rational field")
        return Q(value)

    def is_zero(self, value) -> bool:
        return value == 0

    def to_complex(self, value) -> complex:
        return complex(value)

    def to_algebraic(self, value) -> AlgebraicNumber:
        return AlgebraicNumber.from_rational(Fraction(value))

    def encode(self, value) -> str:
        return str(Q(value))

    def decode(self, obj) -> Q:
        return Q(obj)

    def describe(self) -> dict:
        return {"kind": "rational"}

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("rational")

    def __repr__(self):
        return "QQ"


class ComplexField:
    kind = "complex"
    exact = False
    zero = 0j
    one = 1 + 0j

    def __init__(self, tol: float = 1e-10):
        self.tol = tol

    def coerce(self, value) -> complex:
        if isinstance(value, (AlgebraicNumber, NFElement)):
            return complex(value)
        return complex(value)

    def is_zero(self, value) -> bool:
        return abs(value) <= self.tol

    def to_complex(self, value) -> complex:
        return complex(value)

    def encode(self, value) -> list[str]:
        value = complex(value)
        return [repr(value.real), repr(value.imag)]

    def decode(self, obj) -> complex:
        return complex(float(obj[0]), float(obj[1]))

    def describe(self) -> dict:
        return {"kind": "complex", "tol": self.tol}

    def __eq__(self, other):
        return isinstance(other, ComplexField) and other.tol == self.tol

    def __hash__(self):
        return hash(("complex", self.tol))

    def __repr__(self):
        return f"CC(tol={self.tol})"


class NumberField:
    """Q(theta) for an algebraic number theta, with the embedding fixed by theta."""

    kind = "number_field"
    exact = True

    def __init__(self, generator: AlgebraicNumber):
        self.generator = generator
        lead = generator.min_poly[0]
        # monic modulus, low degree first
        self.modulus: Coeffs = tuple(Q(c, lead) for c in reversed(generator.min_poly))
        self.degree = generator.degree
        self.zero = NFElement(self, (Q(0),) * self.degree)
        self.one = self.from_rational(1)
        self._mult_cache: dict[Coeffs, Any] = {}

    def __eq__(self, other):
        return isinstance(other, NumberField) and other.generator == self.generator

    def __hash__(self):
        return hash(("nf", self.generator))

    def __repr__(self):
        return f"QQ({self.generator})"

    @property
    def gen(self) -> NFElement:
        if self.degree == 1:
            return self.from_rational(self.generator.as_fraction())
        c = [Q(0)] * self.degree
        c[1] = Q(1)
        return NFElement(self, tuple(c))

    def from_rational(self, value) -> NFElement:
        c = [Q(0)] * self.degree
        c[0] = Q(value)
        return NFElement(self, tuple(c))

    def from_coeffs(self, coeffs: Sequence) -> NFElement:
        return NFElement(self, self._reduce([Q(c) for c in coeffs]))

    def coerce(self, value) -> NFElement:
        if isinstance(value, NFElement):
            if value.field != self:
                raise TypeError("element belongs to a different number field")
            return value
        if isinstance(value, AlgebraicNumber):
            if value == self.generator:
                return self.gen
            if value.is_rational:
                return self.from_rational(value.as_fraction())
            raise TypeError(f"{value} is not known to lie in {self}")
        if isinstance(value, (complex, float)):
            raise TypeError("floating value in an exact number field")
        return self.from_rational(Q(value))

    def is_zero(self, value) -> bool:
        return not any(value.coeffs) if isinstance(value, NFElement) else value == 0

    def to_complex(self, value) -> complex:
        return complex(value)

    def to_algebraic(self, value) -> AlgebraicNumber:
        return self.coerce(value).to_algebraic()

    def encode(self, value) -> list[str]:
        return [str(c) for c in self.coerce(value).coeffs]

    def decode(self, obj) -> NFElement:
        return self.from_coeffs([Q(c) for c in obj])

    def describe(self) -> dict:
        return {"kind": "number_field", "generator": self.generator.to_json()}

    def _reduce(self, a: list) -> Coeffs:
        d = self.degree
        m = self.modulus
        a = list(a)
        for k in range(len(a) - 1, d - 1, -1):
            c = a[k]
            if c:
                for i in range(d):
                    a[k - d + i] -= c * m[i]
        a = a[:d] + [Q(0)] * (d - len(a))
        return tuple(a)


class NFElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs: Coeffs):
        self.field = field
        self.coeffs = coeffs

    def _other(self, other) -> Coeffs | None:
        if type(other) is NFElement:
            if other.field is not self.field and other.field != self.field:
                raise TypeError("mixing elements of different number fields")
            return other.coeffs
        if isinstance(other, RATIONAL_TYPES):
            return (Q(other),) + (Q(0),) * (self.field.degree - 1)
        return None

    def __add__(self, other):
        if type(other) is NFElement and other.field is self.field:
            return NFElement(self.field, tuple([a + b for a, b in zip(self.coeffs, other.coeffs)]))
        if isinstance(other, RATIONAL_TYPES):
            return NFElement(self.field, (self.coeffs[0] + other,) + self.coeffs[1:])
        o = self._other(other)
        if o is None:
            return NotImplemented
        return NFElement(self.field, tuple([a + b for a, b in zip(self.coeffs, o)]))

    __radd__ = __add__

    def __neg__(self):
        return NFElement(self.field, tuple([-a for a in self.coeffs]))

    def __sub__(self, other):
        if type(other) is NFElement and other.field is self.field:
            return NFElement(self.field, tuple([a - b for a, b in zip(self.coeffs, other.coeffs)]))
        if isinstance(other, RATIONAL_TYPES):
            return NFElement(self.field, (self.coeffs[0] - other,) + self.coeffs[1:])
        o = self._other(other)
        if o is None:
            return NotImplemented
        return NFElement(self.field, tuple([a - b for a, b in zip(self.coeffs, o)]))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if type(other) is NFElement and other.field is self.field:
            b = other.coeffs
        elif isinstance(other, RATIONAL_TYPES):
            return NFElement(self.field, tuple([a * other for a in self.coeffs]))
        else:
            b = self._other(other)
            if b is None:
                return NotImplemented
        a = self.coeffs
        prod = [Q(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        return NFElement(self.field, self.field._reduce(prod))

    __rmul__ = __mul__

    def inverse(self) -> NFElement:
        if not any(self.coeffs):
            raise ZeroDivisionError("inverse of zero in a number field")
        # extended Euclid: find s with s*a = 1 mod m
        r0, r1 = list(self.field.modulus), _trim(list(self.coeffs))
        s0, s1 = [], [Q(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub_mul(s0, q, s1)
        c = r1[0]
        return NFElement(self.field, self.field._reduce([x / c for x in s1]))

    def __truediv__(self, other):
        if isinstance(other, RATIONAL_TYPES):
            return NFElement(self.field, tuple(a / other for a in self.coeffs))
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * NFElement(self.field, o).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.field.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.coeffs == tuple(o)

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(self.coeffs[0])

    def approx(self, dps: int = 30):
        theta = self.field.generator.approx(dps)
        with mpmath.workdps(dps + 10):
            acc = mpmath.mpf(0)
            for c in reversed(self.coeffs):
                acc = acc * theta + mpmath.mpf(c.numerator) / c.denominator
            return acc

    def __complex__(self) -> complex:
        return complex(self.approx(20))

    def __float__(self) -> float:
        z = complex(self)
        return z.real

    def __abs__(self) -> float:
        return abs(complex(self))

    def min_poly(self) -> tuple[int, ...]:
        """Minimal polynomial over Q, primitive integer coefficients, highest first."""
        from .linalg import charpoly

        d = self.field.degree
        cols = []
        basis = [self.field.from_coeffs([0] * k + [1]) for k in range(d)]
        for b in basis:
            cols.append((self * b).coeffs)
        mat = [[cols[j][i] for j in range(d)] for i in range(d)]
        cp = charpoly(mat)
        den = 1
        for c in cp:
            den = den * c.denominator // _gcd(den, c.denominator)
        ints = _normalize([int(c * den) for c in cp])
        for f, _ in factor_int_poly(ints):
            if self._vanishes(f):
                return f
        raise ArithmeticError("no factor of the characteristic polynomial vanishes")

    def _vanishes(self, f: Sequence[int]) -> bool:
        acc = self.field.zero
        for c in f:
            acc = acc * self + c
        return not acc

    def to_algebraic(self) -> AlgebraicNumber:
        if self.is_rational():
            return AlgebraicNumber.from_rational(self.coeffs[0])
        return AlgebraicNumber.nearest_root(self.min_poly(), lambda dps: self.approx(dps + 10))

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if k == 0 else f"{c}*t^{k}" if k > 1 else f"{c}*t")
        return " + ".join(terms) if terms else "0"


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def field_for(value) -> RationalField | NumberField | ComplexField:
    """Smallest supported field containing ``value``."""
    if isinstance(value, NFElement):
        return value.field
    if isinstance(value, AlgebraicNumber):
        return RationalField() if value.is_rational else NumberField(value)
    if isinstance(value, (complex, float)):
        return ComplexField()
    return RationalField()


def field_from_json(obj: dict):
    kind = obj["kind"]
    if kind == "rational":
        return RationalField()
    if kind == "complex":
        return ComplexField(float(obj.get("tol", 1e-10)))
    if kind == "number_field":
        return NumberField(AlgebraicNumber.from_json(obj["generator"]))
    raise ValueError(f"unknown field kind {kind!r}")
