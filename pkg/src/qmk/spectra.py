"""Exact spectra of multigraph adjacency matrices and the lambda/q dictionary."""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import sympy

from .algebraic import AlgebraicNumber, factor_int_poly, _normalize
from .errors import DisconnectedGraph, NotAnEigenvalue, ZeroGraph
from .fields import field_for
from .graph import MultiGraph
from .linalg import charpoly, matvec, nullspace


def char_poly(g: MultiGraph) -> tuple[int, ...]:
    """det(xI - A), integer coefficients, highest degree first."""
    return tuple(int(c) for c in charpoly([list(r) for r in g.mult]))


def eigen_field(lam: AlgebraicNumber):
    """Q(lam) as a working field, plus lam as an element of it."""
    field = field_for(lam)
    return field, field.coerce(lam)


@dataclass(frozen=True)
class SpectrumRoot:
    value: AlgebraicNumber
    multiplicity: int
    nondegenerate: bool
    witness: tuple | None  # entries in eigen_field(value)

    def to_json(self) -> dict:
        field, _ = eigen_field(self.value)
        return {
            "value": self.value.to_json(),
            "approx": str(self.value),
            "multiplicity": self.multiplicity,
            "nondegenerate": self.nondegenerate,
            "witness": None if self.witness is None else [field.encode(w) for w in self.witness],
        }


@dataclass(frozen=True)
class Spectrum:
    char_poly: tuple[int, ...]
    roots: tuple[SpectrumRoot, ...]

    def nondegenerate_values(self) -> list[AlgebraicNumber]:
        return [r.value for r in self.roots if r.nondegenerate]

    def to_json(self) -> dict:
        return {
            "char_poly": [str(c) for c in self.char_poly],
            "roots": [r.to_json() for r in self.roots],
        }


def eigenvalues(g: MultiGraph) -> list[tuple[AlgebraicNumber, int]]:
    """Distinct eigenvalues with multiplicities, in increasing order."""
    out = []
    for f, m in factor_int_poly(char_poly(g)):
        out.extend((AlgebraicNumber(f, k), m) for k in range(len(f) - 1))
    out.sort(key=lambda rm: rm[0].approx(30))
    return out


def _eigenspace(g: MultiGraph, lam: AlgebraicNumber):
    field, x = eigen_field(lam)
    n = g.n
    shifted = [
        [field.coerce(g[i, j]) - (x if i == j else 0) for j in range(n)]
        for i in range(n)
    ]
    return field, x, nullspace(field, shifted)


def is_nondegenerate(g: MultiGraph, lam: AlgebraicNumber) -> tuple[bool, tuple | None]:
    """Whether some lam-eigenvector has no zero entry; if so, a certified one.

    The witness is sum_k t^k b_k over the computed eigenspace basis for the
    first t = 1, 2, ... with every entry nonzero, scaled so its first entry is 1.
    """
    lam = lam if isinstance(lam, AlgebraicNumber) else AlgebraicNumber.from_rational(lam)
    if not any(f == lam.min_poly for f, _ in factor_int_poly(char_poly(g))):
        raise NotAnEigenvalue(f"{lam} is not an eigenvalue")
    field, x, basis = _eigenspace(g, lam)
    n = g.n
    if not all(any(not field.is_zero(b[i]) for b in basis) for i in range(n)):
        return False, None
    t = 1
    while True:
        w = [field.zero] * n
        for k, b in enumerate(basis):
            c = t ** k
            w = [wi + c * bi for wi, bi in zip(w, b)]
        if not any(field.is_zero(wi) for wi in w):
            break
        t += 1
    lead = w[0]
    w = [wi / lead for wi in w]
    a = [[field.coerce(g[i, j]) for j in range(n)] for i in range(n)]
    if matvec(a, w) != [x * wi for wi in w]:
        raise ArithmeticError("eigenvector certificate failed")
    return True, tuple(w)


def spectrum(g: MultiGraph) -> Spectrum:
    if not g.is_connected():
        raise DisconnectedGraph("spectrum is computed for connected graphs")
    roots = []
    for lam, m in eigenvalues(g):
        ok, w = is_nondegenerate(g, lam)
        roots.append(SpectrumRoot(lam, m, ok, w))
    return Spectrum(char_poly(g), tuple(roots))


def frobenius_perron(g: MultiGraph) -> AlgebraicNumber:
    if g.is_zero():
        raise ZeroGraph("the zero matrix has no Frobenius-Perron eigenvalue")
    candidates = [AlgebraicNumber(f, k) for f, _ in factor_int_poly(char_poly(g)) for k in range(len(f) - 1)]
    return max(c for c in candidates if c.is_real)


@functools.lru_cache(maxsize=2048)
def _q_polynomial(min_poly: tuple[int, ...]) -> tuple[int, ...]:
    # z^d m(-z - 1/z)
    z = sympy.Symbol("z")
    d = len(min_poly) - 1
    expr = sum(c * (-z - 1 / z) ** (d - k) for k, c in enumerate(min_poly)) * z ** d
    p = sympy.Poly(sympy.expand(sympy.cancel(expr)), z)
    return _normalize([int(c) for c in p.all_coeffs()])


def lambda_to_q(lam: AlgebraicNumber) -> tuple[AlgebraicNumber, AlgebraicNumber, bool]:
    """The roots q, 1/q of q^2 + lam q + 1 = 0 and an excluded flag (lam = 0, q = +-i).

    The first root has positive imaginary part, or modulus at least 1 when real.
    """
    lam = lam if isinstance(lam, AlgebraicNumber) else AlgebraicNumber.from_rational(lam)
    poly = _q_polynomial(lam.min_poly)

    def root(sign):
        def target(dps):
            with mpmath.workdps(dps + 10):
                l = mpmath.mpc(lam.approx(dps + 10))
                return (-l + sign * mpmath.sqrt(l * l - 4)) / 2
        return target

    q1 = AlgebraicNumber.nearest_root(poly, root(1))
    q2 = AlgebraicNumber.nearest_root(poly, root(-1))
    z1, z2 = complex(q1), complex(q2)
    if (z2.imag, abs(z2)) > (z1.imag, abs(z1)):
        q1, q2 = q2, q1
    excluded = lam.min_poly == (1, 0)
    return q1, q2, excluded


@functools.lru_cache(maxsize=None)
def _cyclotomic(n: int) -> tuple[int, ...]:
    x = sympy.Symbol("x")
    return tuple(int(c) for c in sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs())


def q_root_of_unity_order(q: AlgebraicNumber, max_order: int = 512) -> int | None:
    """The multiplicative order N <= max_order of q, tested via cyclotomic polynomials."""
    if max_order > 512:
        raise ValueError("max_order is capped at 512")
    d = q.degree
    for n in range(1, max_order + 1):
        if sympy.totient(n) == d and _cyclotomic(n) == q.min_poly:
            return n
    return None


def q_plus_inverse(lam: AlgebraicNumber) -> AlgebraicNumber:
    """q + 1/q = -lam, the form in which tabulated values are often printed."""
    return -lam


def rational(x) -> AlgebraicNumber:
    return AlgebraicNumber.from_rational(Fraction(x))
