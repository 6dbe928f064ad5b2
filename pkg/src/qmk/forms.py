"""Bilinear-form data on graph edges and the per-vertex trace equation.

A pair of forms (E_ij, E_ji) on an edge of multiplicity a is measured by the
two traces x = Tr(E_ij (E_ji^t)^-1) and y = Tr(E_ji (E_ij^t)^-1); a form
E_ii on a loop space is measured by t = Tr(E_ii (E_ii^t)^-1).  A solution
assigns such data to every edge and loop so that at each vertex the incident
traces add up to lambda.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Any

from .algebraic import AlgebraicNumber
from .errors import OutsideModuliImage
from .fields import ComplexField, NFElement, RationalField, field_from_json
from .graph import MultiGraph, from_json as graph_from_json, to_json as graph_to_json
from .linalg import block_diag, identity, inverse, matmul, trace_of_product, transpose

Matrix = tuple[tuple[Any, ...], ...]


def _freeze(m) -> Matrix:
    return tuple(tuple(row) for row in m)


def infer_field(*matrices):
    """Working field suggested by matrix entries: number field, complex, or Q."""
    for m in matrices:
        for row in m:
            for x in row:
                if isinstance(x, NFElement):
                    return x.field
    for m in matrices:
        for row in m:
            for x in row:
                if isinstance(x, (complex, float)):
                    return ComplexField()
    return RationalField()


def _coerce_matrix(field, m) -> Matrix:
    return tuple(tuple(field.coerce(x) for x in row) for row in m)


def _twisted_trace(field, e1: Matrix, e2: Matrix):
    """Tr(e1 (e2^t)^-1)."""
    return trace_of_product(e1, inverse(field, transpose(e2)))


@dataclass(frozen=True)
class BilinearFormPair:
    """Forms E_ij (``e_fwd``) and E_ji (``e_bwd``) on an edge of multiplicity ``dim``."""

    dim: int
    e_fwd: Matrix
    e_bwd: Matrix

    def __post_init__(self):
        object.__setattr__(self, "e_fwd", _freeze(self.e_fwd))
        object.__setattr__(self, "e_bwd", _freeze(self.e_bwd))
        for m in (self.e_fwd, self.e_bwd):
            if len(m) != self.dim or any(len(r) != self.dim for r in m):
                raise ValueError("form matrix has the wrong size")


@dataclass(frozen=True)
class SelfPairing:
    dim: int
    e: Matrix

    def __post_init__(self):
        object.__setattr__(self, "e", _freeze(self.e))
        if len(self.e) != self.dim or any(len(r) != self.dim for r in self.e):
            raise ValueError("form matrix has the wrong size")

    def operator(self, field=None) -> list[list]:
        """S_E = E (E^t)^-1."""
        field = field or infer_field(self.e)
        return matmul([list(r) for r in self.e], inverse(field, transpose(self.e)))


def trace_invariant(p: BilinearFormPair, field=None) -> tuple[Any, Any]:
    field = field or infer_field(p.e_fwd, p.e_bwd)
    f = _coerce_matrix(field, p.e_fwd)
    b = _coerce_matrix(field, p.e_bwd)
    return _twisted_trace(field, f, b), _twisted_trace(field, b, f)


def self_trace_invariant(s: SelfPairing, field=None):
    field = field or infer_field(s.e)
    e = _coerce_matrix(field, s.e)
    return _twisted_trace(field, e, e)


def _companion(field, monic_low_first: list) -> list[list]:
    """Companion matrix of z^a + c_{a-1} z^{a-1} + ... + c_0 (coefficients c_0..c_{a-1})."""
    a = len(monic_low_first)
    m = [[field.zero] * a for _ in range(a)]
    for i in range(1, a):
        m[i][i - 1] = field.one
    for i in range(a):
        m[i][a - 1] = -monic_low_first[i]
    return m


def _infer_scalar_field(*values):
    for v in values:
        if isinstance(v, NFElement):
            return v.field
    if any(isinstance(v, (complex, float)) for v in values):
        return ComplexField()
    return RationalField()


def realize_pair_traces(a: int, x, y, field=None) -> BilinearFormPair:
    """Forms on an edge of multiplicity ``a`` with trace invariants exactly (x, y).

    e_fwd is the identity and e_bwd = S, so x = Tr(S^-1) and y = Tr(S).
    For a = 2 S is the companion matrix of z^2 - y z + y/x; for a >= 3 it is
    the companion matrix of the polynomial whose elementary symmetric
    functions are e_1 = y, e_{a-1} = x, e_a = 1 and zero otherwise.
    """
    field = field or _infer_scalar_field(x, y)
    x, y = field.coerce(x), field.coerce(y)
    if a < 1:
        raise ValueError("multiplicity must be positive")
    if a == 1:
        if field.is_zero(x * y - 1):
            return BilinearFormPair(1, ((x,),), ((field.one,),))
        raise OutsideModuliImage("a simple edge needs x*y = 1")
    if a == 2:
        if field.is_zero(x) and field.is_zero(y):
            s = [[field.one, field.zero], [field.zero, -field.one]]
        elif field.is_zero(x) or field.is_zero(y):
            raise OutsideModuliImage("a double edge cannot have exactly one vanishing trace")
        else:
            s = _companion(field, [y / x, -y])
        return BilinearFormPair(2, identity(field, 2), s)
    # z^a - y z^{a-1} + ... + (-1)^{a-1} x z + (-1)^a
    coeffs = [field.zero] * a
    coeffs[0] = field.one if a % 2 == 0 else -field.one
    coeffs[1] = x if (a - 1) % 2 == 0 else -x
    coeffs[a - 1] = -y
    return BilinearFormPair(a, identity(field, a), _companion(field, coeffs))


def _self_head(field, t) -> list[list]:
    """2x2 form E with Tr(E (E^t)^-1) = t and det of that operator equal to 1."""
    two = field.coerce(2)
    if field.is_zero(t - two):
        return identity(field, 2)
    w = field.one / (two - t)
    return [[field.one, field.one], [field.zero, w]]


def realize_self_trace(a: int, t, field=None) -> SelfPairing:
    """A form on a loop space of dimension ``a`` with self trace invariant t.

    For a >= 2 this is an identity block of size a-2 beside a 2x2 block
    [[1, 1], [0, w]], whose operator has trace 2 - 1/w and determinant 1.
    """
    field = field or _infer_scalar_field(t)
    t = field.coerce(t)
    if a < 1:
        raise ValueError("dimension must be positive")
    if a == 1:
        if field.is_zero(t - field.one):
            return SelfPairing(1, ((field.one,),))
        raise OutsideModuliImage("a single loop always has trace 1")
    head = _self_head(field, t - field.coerce(a - 2))
    blocks = [head] + [[[field.one]]] * (a - 2)
    return SelfPairing(a, block_diag(field, blocks))


@dataclass(frozen=True)
class ModuleSolution:
    """Forms on every edge and loop of ``graph`` together with the value lambda.

    ``pairs`` maps (i, j) with i < j to the forms (E_ij, E_ji); ``selfs`` maps
    a looped vertex to E_ii.  ``lam`` is an element of ``field``.
    """

    graph: MultiGraph
    lam: Any
    pairs: dict = dc_field(default_factory=dict)
    selfs: dict = dc_field(default_factory=dict)
    field: Any = dc_field(default_factory=RationalField)

    @property
    def lam_algebraic(self) -> AlgebraicNumber:
        return self.field.to_algebraic(self.lam)

    def vertex_contributions(self, i: int) -> list:
        """Trace terms entering the equation at vertex i, one per incident pair or loop."""
        out = []
        for (a, b), p in sorted(self.pairs.items()):
            if i in (a, b):
                x, y = trace_invariant(p, self.field)
                out.append(x if i == a else y)
        if i in self.selfs:
            out.append(self_trace_invariant(self.selfs[i], self.field))
        return out

    def to_json(self) -> dict:
        enc = self.field.encode

        def mat(m):
            return [[enc(x) for x in row] for row in m]

        doc = {
            "graph": graph_to_json(self.graph),
            "field": self.field.describe(),
            "lam": enc(self.lam),
            "pairs": [
                {"i": i, "j": j, "dim": p.dim, "e_fwd": mat(p.e_fwd), "e_bwd": mat(p.e_bwd)}
                for (i, j), p in sorted(self.pairs.items())
            ],
            "selfs": [{"i": i, "dim": s.dim, "e": mat(s.e)} for i, s in sorted(self.selfs.items())],
        }
        if self.field.exact:
            doc["lam_algebraic"] = self.lam_algebraic.to_json()
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> ModuleSolution:
        field = field_from_json(doc["field"])
        dec = field.decode

        def mat(m):
            return tuple(tuple(dec(x) for x in row) for row in m)

        pairs = {
            (p["i"], p["j"]): BilinearFormPair(p["dim"], mat(p["e_fwd"]), mat(p["e_bwd"]))
            for p in doc["pairs"]
        }
        selfs = {s["i"]: SelfPairing(s["dim"], mat(s["e"])) for s in doc["selfs"]}
        return cls(graph_from_json(doc["graph"]), dec(doc["lam"]), pairs, selfs, field)


def verify_solution(sol: ModuleSolution) -> list:
    """Per-vertex residuals (sum of incident traces) - lambda."""
    field = sol.field
    g = sol.graph
    for i, j, a in g.edges():
        if i == j:
            if a and (i not in sol.selfs or sol.selfs[i].dim != a):
                raise ValueError(f"missing or mis-sized loop form at vertex {i}")
        elif (i, j) not in sol.pairs or sol.pairs[i, j].dim != a:
            raise ValueError(f"missing or mis-sized forms on edge {i}-{j}")
    residuals = []
    for i in range(g.n):
        acc = field.zero
        for c in sol.vertex_contributions(i):
            acc = acc + c
        residuals.append(acc - sol.lam)
    return residuals


def is_valid(sol: ModuleSolution) -> bool:
    return all(sol.field.is_zero(r) for r in verify_solution(sol))
