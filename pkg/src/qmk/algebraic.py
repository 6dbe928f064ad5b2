"""Exact real and complex algebraic numbers.

An :class:`AlgebraicNumber` is a primitive irreducible integer polynomial
together with the position of one of its roots in a canonical isolation list
(real roots in increasing order, then complex roots).  Two numbers are equal
exactly when both fields agree, so equality and hashing are decidable.
Factorization and root isolation are delegated to sympy.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import mpmath
import sympy
from sympy import Poly, QQ, ZZ

_X = sympy.Symbol("x")

IntPoly = tuple[int, ...]  # integer coefficients, highest degree first


def _normalize(coeffs: Sequence[int]) -> IntPoly:
    coeffs = list(coeffs)
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    if not coeffs:
        raise ValueError("zero polynomial")
    g = 0
    for c in coeffs:
        g = sympy.igcd(g, c)
    sign = -1 if coeffs[0] < 0 else 1
    return tuple(int(sign * c // g) for c in coeffs)


def to_poly(coeffs: Sequence) -> Poly:
    return Poly(list(coeffs), _X, domain=QQ if any(isinstance(c, Fraction) for c in coeffs) else ZZ)


def int_coeffs(p: Poly) -> IntPoly:
    """Primitive integer coefficient tuple of a rational polynomial."""
    _, prim = p.clear_denoms(convert=True) if p.get_domain() != ZZ else (1, p)
    return _normalize([int(c) for c in prim.all_coeffs()])


@functools.lru_cache(maxsize=4096)
def factor_int_poly(coeffs: IntPoly) -> tuple[tuple[IntPoly, int], ...]:
    """Irreducible factors with multiplicities, each primitive with positive lead; sorted."""
    _, factors = Poly(list(coeffs), _X, domain=ZZ).factor_list()
    return tuple(sorted((_normalize([int(c) for c in f.all_coeffs()]), m) for f, m in factors))


@functools.lru_cache(maxsize=4096)
def _isolation(min_poly: IntPoly) -> tuple:
    """Canonical isolating regions for all roots of an irreducible polynomial."""
    p = Poly(list(min_poly), _X, domain=ZZ)
    if p.degree() == 1:
        return (("real", (Fraction(-min_poly[1], min_poly[0]),) * 2),)
    real = p.intervals()
    out = [("real", (Fraction(str(a)), Fraction(str(b)))) for (a, b), _ in real]
    if len(real) == p.degree():
        return tuple(out)
    real, cplx = p.intervals(all=True)
    for (lo, hi), _ in cplx:
        ax, ay = (Fraction(str(v)) for v in sympy.sympify(lo).as_real_imag())
        bx, by = (Fraction(str(v)) for v in sympy.sympify(hi).as_real_imag())
        out.append(("complex", ((ax, ay), (bx, by))))
    return tuple(out)


def _eval_int_poly(coeffs: IntPoly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


def _halve(min_poly: IntPoly, a: Fraction, b: Fraction) -> tuple[Fraction, Fraction]:
    """Half of an isolating interval of a simple real root that still contains it."""
    if a == b:
        return a, b
    m = (a + b) / 2
    fm = _eval_int_poly(min_poly, m)
    if fm == 0:
        return m, m
    fa = _eval_int_poly(min_poly, a)
    if fa == 0:
        return a, a
    return (a, m) if (fa < 0) != (fm < 0) else (m, b)


def _frac_to_mpf(f: Fraction):
    return mpmath.mpf(f.numerator) / f.denominator


@functools.lru_cache(maxsize=8192)
def _approx(min_poly: IntPoly, index: int, dps: int):
    kind, region = _isolation(min_poly)[index]
    with mpmath.workdps(dps + 10):
        if kind == "real":
            a, b = region
            if a == b:
                return mpmath.mpf(_frac_to_mpf(a))
            lo, hi = _frac_to_mpf(a), _frac_to_mpf(b)
            f = lambda t: mpmath.polyval(list(min_poly), t)
            try:
                r = mpmath.findroot(f, (lo, hi), solver="anderson", tol=mpmath.mpf(10) ** (-2 * dps - 10))
                if lo <= r <= hi and abs(f(r)) < mpmath.mpf(10) ** (-dps):
                    return mpmath.mpf(r)
            except (ValueError, ZeroDivisionError):
                pass
            p = Poly(list(min_poly), _X, domain=ZZ)
            eps = Fraction(1, 10 ** (dps + 2))
            s, t = p.refine_root(sympy.Rational(a.numerator, a.denominator),
                                 sympy.Rational(b.numerator, b.denominator), eps=sympy.Rational(eps.numerator, eps.denominator))
            return (_frac_to_mpf(Fraction(str(s))) + _frac_to_mpf(Fraction(str(t)))) / 2
        (ax, ay), (bx, by) = region
        roots = mpmath.polyroots(list(min_poly), maxsteps=400, extraprec=4 * dps + 50)
        # real roots may sit on a rectangle edge; they have their own intervals
        tiny = mpmath.mpf(10) ** (-dps)
        inside = [
            r for r in roots
            if abs(mpmath.im(r)) > tiny
            and _frac_to_mpf(ax) <= mpmath.re(r) <= _frac_to_mpf(bx)
            and _frac_to_mpf(ay) <= mpmath.im(r) <= _frac_to_mpf(by)
        ]
        if len(inside) != 1:
            raise ArithmeticError("numerical roots disagree with the isolating rectangle")
        return mpmath.mpc(inside[0])


@dataclass(frozen=True)
class AlgebraicNumber:
    min_poly: IntPoly
    index: int

    def __post_init__(self):
        if not 0 <= self.index < len(self.min_poly) - 1:
            raise ValueError("root index out of range")

    # construction ----------------------------------------------------------

    @classmethod
    def from_rational(cls, value) -> AlgebraicNumber:
        f = Fraction(value)
        return cls(_normalize([f.denominator, -f.numerator]), 0)

    @classmethod
    def from_isolation(cls, min_poly: Sequence[int], lo, hi) -> AlgebraicNumber:
        """The root of ``min_poly`` inside the real interval ``[lo, hi]`` (must be unique)."""
        lo, hi = Fraction(lo), Fraction(hi)
        hits = []
        for p, _ in factor_int_poly(_normalize(min_poly)):
            for k, (kind, region) in enumerate(_isolation(p)):
                if kind == "real":
                    r = AlgebraicNumber(p, k)
                    if _frac_to_mpf(lo) <= r.approx(40) <= _frac_to_mpf(hi):
                        hits.append(r)
        if len(hits) != 1:
            raise ValueError(f"interval [{lo}, {hi}] holds {len(hits)} real roots, expected one")
        return hits[0]

    @classmethod
    def nearest_root(cls, coeffs: Sequence[int], target: Callable[[int], complex] | complex) -> AlgebraicNumber:
        """Root of the integer polynomial ``coeffs`` closest to a numerical target.

        ``target`` may be a callable ``dps -> value`` so the target can be
        recomputed at higher precision until the choice is unambiguous.
        """
        candidates = [
            AlgebraicNumber(p, k)
            for p, _ in factor_int_poly(_normalize(coeffs))
            for k in range(len(p) - 1)
        ]
        for dps in (30, 60, 120, 240):
            t = target(dps) if callable(target) else target
            with mpmath.workdps(dps):
                dists = sorted((abs(mpmath.mpc(t) - c.approx(dps)), i) for i, c in enumerate(candidates))
            tol = mpmath.mpf(10) ** (-(dps // 2))
            separated = len(dists) == 1 or dists[1][0] > 1000 * dists[0][0]
            if separated and (dists[0][0] < tol or not callable(target)):
                return candidates[dists[0][1]]
            if not callable(target):
                break
        raise ArithmeticError("could not single out a root near the target value")

    # inspection ------------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1

    @property
    def isolation(self) -> tuple:
        return _isolation(self.min_poly)[self.index]

    @property
    def is_real(self) -> bool:
        return self.isolation[0] == "real"

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is irrational")
        return Fraction(-self.min_poly[1], self.min_poly[0])

    def approx(self, dps: int = 30):
        return _approx(self.min_poly, self.index, dps)

    def __complex__(self) -> complex:
        return complex(self.approx(20))

    def __float__(self) -> float:
        if not self.is_real:
            raise TypeError("complex algebraic number has no float value")
        return float(self.approx(20))

    def conjugates(self) -> list[AlgebraicNumber]:
        return [AlgebraicNumber(self.min_poly, k) for k in range(self.degree)]

    def poly_str(self, var: str = "x") -> str:
        return str(Poly(list(self.min_poly), sympy.Symbol(var)).as_expr())

    def __repr__(self) -> str:
        return f"AlgebraicNumber({self.poly_str()}, #{self.index} ~ {complex(self):.6g})"

    def __str__(self) -> str:
        if self.is_rational:
            return str(self.as_fraction())
        z = complex(self)
        approx = f"{z.real:.10g}" if self.is_real else f"{z:.10g}"
        return f"root of {self.poly_str()} ~ {approx}"

    # ordering (real numbers only) -----------------------------------------

    def _cmp(self, other: AlgebraicNumber) -> int:
        if self == other:
            return 0
        if not (self.is_real and other.is_real):
            raise TypeError("only real algebraic numbers are ordered")
        (a1, b1), (a2, b2) = self.isolation[1], other.isolation[1]
        if b1 < a2:
            return -1
        if b2 < a1:
            return 1
        # exact bisection separates most pairs without floating point
        iso1, iso2 = (a1, b1), (a2, b2)
        for _ in range(40):
            iso1 = _halve(self.min_poly, *iso1)
            iso2 = _halve(other.min_poly, *iso2)
            if iso1[1] < iso2[0]:
                return -1
            if iso2[1] < iso1[0]:
                return 1
        dps = 30
        while True:
            a, b = self.approx(dps), other.approx(dps)
            with mpmath.workdps(dps):
                if abs(a - b) > mpmath.mpf(10) ** (-(dps - 5)):
                    return -1 if a < b else 1
            dps *= 2

    def __lt__(self, other):
        return self._cmp(_coerce(other)) < 0

    def __le__(self, other):
        return self._cmp(_coerce(other)) <= 0

    def __gt__(self, other):
        return self._cmp(_coerce(other)) > 0

    def __ge__(self, other):
        return self._cmp(_coerce(other)) >= 0

    # arithmetic via resultants --------------------------------------------

    def __neg__(self) -> AlgebraicNumber:
        p = [c * (-1) ** k for k, c in enumerate(reversed(self.min_poly))]
        return AlgebraicNumber.nearest_root(list(reversed(p)), lambda d: -self.approx(d))

    def inverse(self) -> AlgebraicNumber:
        if self.min_poly[-1] == 0:
            raise ZeroDivisionError("inverse of zero")
        return AlgebraicNumber.nearest_root(list(reversed(self.min_poly)), lambda d: 1 / self.approx(d))

    def _binary(self, other, op) -> AlgebraicNumber:
        other = _coerce(other)
        y = sympy.Symbol("y")
        pa = Poly(list(self.min_poly), y).as_expr()
        pb = Poly(list(other.min_poly), y).as_expr()
        if op == "+":
            res = sympy.resultant(pa, pb.subs(y, _X - y), y)
            fn = lambda d: self.approx(d) + other.approx(d)
        else:
            deg = other.degree
            pb_rev = sympy.expand(pb.subs(y, _X / y) * y ** deg)
            res = sympy.resultant(pa, pb_rev, y)
            fn = lambda d: self.approx(d) * other.approx(d)
        return AlgebraicNumber.nearest_root(int_coeffs(Poly(res, _X)), fn)

    def __add__(self, other):
        return self._binary(other, "+")

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other.min_poly == (1, 0) or self.min_poly == (1, 0):
            return AlgebraicNumber.from_rational(0)
        return self._binary(other, "*")

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * _coerce(other).inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def to_json(self) -> dict:
        kind, region = self.isolation
        if kind == "real":
            iso = [str(region[0]), str(region[1])]
        else:
            iso = [[str(region[0][0]), str(region[0][1])], [str(region[1][0]), str(region[1][1])]]
        return {"min_poly": [str(c) for c in self.min_poly], "index": self.index, "kind": kind, "isolation": iso}

    @classmethod
    def from_json(cls, obj: dict) -> AlgebraicNumber:
        return cls(tuple(int(c) for c in obj["min_poly"]), int(obj["index"]))


def _coerce(value) -> AlgebraicNumber:
    if isinstance(value, AlgebraicNumber):
        return value
    if isinstance(value, (int, Fraction)):
        return AlgebraicNumber.from_rational(value)
    raise TypeError(f"cannot treat {value!r} as an algebraic number")


def from_expression(text: str) -> AlgebraicNumber:
    """An algebraic number written as a radical expression, e.g. ``(1+sqrt(13))/2``."""
    expr = sympy.sympify(text, rational=True)
    mp = sympy.Poly(sympy.minimal_polynomial(expr, _X), _X)
    coeffs = [int(c) for c in mp.all_coeffs()]

    def target(dps):
        re, im = sympy.N(expr, dps + 10).as_real_imag()
        with mpmath.workdps(dps + 10):
            return mpmath.mpc(mpmath.mpf(str(re)), mpmath.mpf(str(im)))

    return AlgebraicNumber.nearest_root(coeffs, target)


def parse_algebraic(text: str) -> AlgebraicNumber:
    """Parse ``p/q``, a decimal, or ``c_d,...,c_0:lo,hi`` (coefficients highest first)."""
    text = text.strip()
    if ":" in text:
        coeffs, iso = text.split(":", 1)
        cs = [int(c) for c in coeffs.split(",")]
        lo, hi = iso.split(",")
        return AlgebraicNumber.from_isolation(cs, Fraction(lo), Fraction(hi))
    return AlgebraicNumber.from_rational(Fraction(text))
