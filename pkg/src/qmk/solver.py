"""Solving the vertex trace equations on a graph.

The equations live on edge variables: y_ab is the contribution of the edge
{a, b} to the equation at b.  On a spanning tree each edge carries a coupling
y_ab = shift_ab + z_ab, y_ba = shift_ba + z_ba with z_ab z_ba = 1 (shifts are
zero for simple edges).  Such a system is solved by peeling leaves, and has
at most one solution.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Any, Callable, Sequence

import sympy
from sympy import QQ

from .algebraic import AlgebraicNumber, _normalize, factor_int_poly
from .errors import (
    BadParameterCount,
    DisconnectedGraph,
    NotAGeneralizedTree,
    OutsideModuliImage,
    ZeroGraph,
)
from .fields import RATIONAL_TYPES, ComplexField, NFElement, RationalField, field_for
from .forms import (
    BilinearFormPair,
    ModuleSolution,
    realize_pair_traces,
    realize_self_trace,
    self_trace_invariant,
    trace_invariant,
)
from .graph import MultiGraph, generalized_cycle_count, is_generalized_tree
from .linalg import identity
from .spectra import eigen_field, eigenvalues, frobenius_perron, is_nondegenerate, lambda_to_q, q_root_of_unity_order


@dataclass
class EdgeVariableSystem:
    """Vertex equations sum_{a ~ b} y_ab = targets[b] on a tree."""

    tree: MultiGraph
    targets: list
    field: Any = dc_field(default_factory=RationalField)
    shifts: dict = dc_field(default_factory=dict)  # (a, b) -> constant part of y_ab

    def shift(self, a: int, b: int):
        return self.shifts.get((a, b), self.field.zero)


def smallest_leaf(leaves: Sequence[int]) -> int:
    return min(leaves)


def _peel(sys: EdgeVariableSystem, choose_leaf: Callable[[Sequence[int]], int]):
    """Eliminate leaves until one vertex is left; (values, leftover target) or None."""
    field = sys.field
    n = sys.tree.n
    adj = {v: set(sys.tree.neighbors(v)) - {v} for v in range(n)}
    remaining = [field.coerce(t) for t in sys.targets]
    alive = set(range(n))
    values: dict = {}
    while len(alive) > 1:
        leaves = sorted(v for v in alive if len(adj[v]) == 1)
        if not leaves:
            raise NotAGeneralizedTree("edge system is not supported on a tree")
        leaf = choose_leaf(leaves)
        (other,) = adj[leaf]
        y_in = remaining[leaf]
        z_in = y_in - sys.shift(other, leaf)
        if field.is_zero(z_in):
            return None
        y_out = sys.shift(leaf, other) + field.one / z_in
        values[other, leaf] = y_in
        values[leaf, other] = y_out
        remaining[other] = remaining[other] - y_out
        adj[other].discard(leaf)
        alive.discard(leaf)
    (last,) = alive
    return values, remaining[last]


def peel_tree_system(
    sys: EdgeVariableSystem, choose_leaf: Callable[[Sequence[int]], int] = smallest_leaf
) -> dict | None:
    """The unique solution {(a, b): y_ab} of a tree system, or None.

    A leaf's equation has a single term, which fixes the incident variable;
    the coupling then fixes the reverse variable, which is moved into the
    neighbour's equation.  The last vertex's equation must hold on its own.
    """
    peeled = _peel(sys, choose_leaf)
    if peeled is None or not sys.field.is_zero(peeled[1]):
        return None
    return peeled[0]


def _working_field(lam, field=None):
    if field is not None:
        return field, field.coerce(lam)
    if isinstance(lam, AlgebraicNumber):
        if lam.degree <= 8:
            return eigen_field(lam)
        cf = ComplexField()
        return cf, complex(lam)
    if isinstance(lam, NFElement):
        return lam.field, lam
    if isinstance(lam, (complex, float)):
        return ComplexField(), complex(lam)
    rf = RationalField()
    return rf, rf.coerce(lam)


def solve_generalized_tree(g: MultiGraph, lam, field=None, choose_leaf=smallest_leaf) -> ModuleSolution | None:
    """The unique solution at lam on a generalized tree, or None."""
    if not is_generalized_tree(g):
        raise NotAGeneralizedTree("graph has a cycle, a multiple edge or a repeated loop")
    field, x = _working_field(lam, field)
    targets = [x - g[j, j] for j in range(g.n)]
    values = peel_tree_system(EdgeVariableSystem(g, targets, field), choose_leaf)
    if values is None:
        return None
    pairs = {}
    for i, j, a in g.edges():
        if i != j:
            pairs[i, j] = realize_pair_traces(1, values[j, i], values[i, j], field)
    selfs = {i: realize_self_trace(1, field.one, field) for i in range(g.n) if g[i, i]}
    return ModuleSolution(g, x, pairs, selfs, field)


@dataclass(frozen=True)
class SpectrumEntry:
    lam: AlgebraicNumber
    q: AlgebraicNumber
    q_inv: AlgebraicNumber
    excluded: bool  # q = +-i
    root_of_unity_order: int | None
    solution: ModuleSolution | None

    @property
    def q_plus_q_inv(self) -> AlgebraicNumber:
        return -self.lam


def super_rigid_spectrum(g: MultiGraph, max_order: int = 512) -> list[SpectrumEntry]:
    """One entry per nondegenerate eigenvalue of a generalized tree."""
    if not is_generalized_tree(g):
        raise NotAGeneralizedTree("super-rigid spectra are defined for generalized trees")
    out = []
    for lam, _ in eigenvalues(g):
        ok, _ = is_nondegenerate(g, lam)
        if not ok:
            continue
        q, q_inv, excluded = lambda_to_q(lam)
        out.append(SpectrumEntry(lam, q, q_inv, excluded, q_root_of_unity_order(q, max_order),
                                 solve_generalized_tree(g, lam)))
    return out


def fp_solution(g: MultiGraph) -> ModuleSolution:
    """Solution at the Frobenius-Perron eigenvalue with traces a_ij r_j / r_i."""
    if g.is_zero():
        raise ZeroGraph("a graph without edges or loops has no solution")
    if not g.is_connected():
        raise DisconnectedGraph("Frobenius-Perron solutions are built on connected graphs")
    lam = frobenius_perron(g)
    field, x = eigen_field(lam)
    ok, r = is_nondegenerate(g, lam)
    assert ok
    inv = [field.one / ri for ri in r]
    pairs, selfs = {}, {}
    for i, j, a in g.edges():
        if i == j:
            selfs[i] = realize_self_trace(a, field.coerce(a), field)
        else:
            pairs[i, j] = realize_pair_traces(a, r[j] * inv[i] * a, r[i] * inv[j] * a, field)
    return ModuleSolution(g, x, pairs, selfs, field)


# ---------------------------------------------------------------------------
# free parameters on general graphs


@dataclass(frozen=True)
class TracePair:
    """Prescribed trace invariants (x at the smaller vertex, y at the larger)."""

    x: Any
    y: Any


@dataclass(frozen=True)
class LoopTrace:
    t: Any


@dataclass
class FreeParams:
    """Data frozen before peeling.

    ``edges``: non-tree edge -> list of a eigenvalues of S, or TracePair (a <= 2).
    ``tree_edges``: tree edge of multiplicity a >= 2 -> list of a-1 eigenvalues.
    ``loops``: vertex with a_ii >= 2 -> list of floor(a/2) values mu, or LoopTrace (a_ii <= 3).
    """

    edges: dict = dc_field(default_factory=dict)
    tree_edges: dict = dc_field(default_factory=dict)
    loops: dict = dc_field(default_factory=dict)


def spanning_tree(g: MultiGraph) -> list[tuple[int, int]]:
    """Kruskal over the simply laced edges in lexicographic order."""
    parent = list(range(g.n))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    tree = []
    for i, j, _ in g.edges():
        if i != j and find(i) != find(j):
            parent[find(i)] = find(j)
            tree.append((i, j))
    return tree


@dataclass(frozen=True)
class ParameterSlot:
    kind: str  # "edge", "tree_edge" or "loop"
    key: Any
    multiplicity: int
    count: int


def parameter_slots(g: MultiGraph) -> list[ParameterSlot]:
    if not g.is_connected():
        raise DisconnectedGraph("parameters are counted on connected graphs")
    tree = set(spanning_tree(g))
    slots = []
    for i, j, a in g.edges():
        if i == j:
            if a >= 2:
                slots.append(ParameterSlot("loop", i, a, a // 2))
        elif (i, j) in tree:
            if a >= 2:
                slots.append(ParameterSlot("tree_edge", (i, j), a, a - 1))
        else:
            slots.append(ParameterSlot("edge", (i, j), a, a))
    return slots


def free_parameter_count(g: MultiGraph) -> int:
    return sum(s.count for s in parameter_slots(g))


def _supplied_count(value, slot: ParameterSlot) -> int:
    if isinstance(value, TracePair):
        if slot.kind != "edge" or slot.multiplicity > 2:
            raise BadParameterCount(f"trace pairs are accepted only on non-tree edges of multiplicity <= 2, not {slot.key}")
        return slot.multiplicity
    if isinstance(value, LoopTrace):
        if slot.kind != "loop" or slot.multiplicity > 3:
            raise BadParameterCount(f"a loop trace is accepted only for 2 or 3 loops, not at {slot.key}")
        return 1
    return len(value)


def _normalize_edge_params(entries: dict) -> dict:
    out = {}
    for (i, j), v in entries.items():
        if i > j:
            if isinstance(v, TracePair):
                v = TracePair(v.y, v.x)
            else:
                v = [1 / Fraction(s) if isinstance(s, int) else 1 / s for s in v]
            i, j = j, i
        out[i, j] = v
    return out


def check_parameters(g: MultiGraph, params: FreeParams) -> int:
    """Validate the shape of ``params`` against the graph; return the number of scalars."""
    slots = parameter_slots(g)
    given = {
        "edge": _normalize_edge_params(params.edges),
        "tree_edge": _normalize_edge_params(params.tree_edges),
        "loop": dict(params.loops),
    }
    expected_keys = {kind: {s.key for s in slots if s.kind == kind} for kind in given}
    for kind, entries in given.items():
        if set(entries) != expected_keys[kind]:
            raise BadParameterCount(
                f"{kind} parameters expected for {sorted(expected_keys[kind])}, got {sorted(entries)}"
            )
    total = 0
    for s in slots:
        got = _supplied_count(given[s.kind][s.key], s)
        if got != s.count:
            raise BadParameterCount(f"{s.kind} {s.key} needs {s.count} values, got {got}")
        total += got
    if total != generalized_cycle_count(g):
        raise BadParameterCount("parameter count differs from the generalized cycle count")
    return total


def _frozen_system(g: MultiGraph, x, params: FreeParams, field):
    """Forms fixed by the parameters and the tree system left for the rest."""
    c = field.coerce
    n = g.n
    tree_edges = spanning_tree(g)
    tree_set = set(tree_edges)
    edge_params = _normalize_edge_params(params.edges)
    tree_params = _normalize_edge_params(params.tree_edges)
    targets = [x] * n
    pairs, selfs, fixed, shifts = {}, {}, {}, {}
    for i, j, a in g.edges():
        if i == j:
            if a == 1:
                selfs[i] = realize_self_trace(1, field.one, field)
            else:
                v = params.loops[i]
                if isinstance(v, LoopTrace):
                    t = c(v.t)
                else:
                    t = c(a % 2)
                    for mu in v:
                        mu = c(mu)
                        if field.is_zero(mu):
                            raise OutsideModuliImage("loop eigenvalues must be nonzero")
                        t = t + mu + field.one / mu
                selfs[i] = realize_self_trace(a, t, field)
            targets[i] = targets[i] - self_trace_invariant(selfs[i], field)
        elif (i, j) not in tree_set:
            v = edge_params[i, j]
            if isinstance(v, TracePair):
                pair = realize_pair_traces(a, c(v.x), c(v.y), field)
            else:
                pair = BilinearFormPair(a, identity(field, a), _diag(field, _nonzero(field, v)))
            pairs[i, j] = pair
            xi, yj = trace_invariant(pair, field)
            targets[i] = targets[i] - xi
            targets[j] = targets[j] - yj
        elif a >= 2:
            s = _nonzero(field, tree_params[i, j])
            fixed[i, j] = s
            shifts[i, j] = _sum(field, s)
            shifts[j, i] = _sum(field, [field.one / sk for sk in s])
    sys = EdgeVariableSystem(MultiGraph.from_edges(n, tree_edges), targets, field, shifts)
    return sys, pairs, selfs, fixed


def solve_general(g: MultiGraph, lam, params: FreeParams, field=None) -> ModuleSolution | None:
    """Freeze the free data, then peel the residual system on a spanning tree.

    Tree edges of multiplicity a >= 2 get S = diag(s_1, ..., s_{a-1}, u) with
    the supplied s_k and the peeled unknown u.
    """
    check_parameters(g, params)
    field, x = _working_field(lam, field)
    sys, pairs, selfs, fixed = _frozen_system(g, x, params, field)
    values = peel_tree_system(sys)
    if values is None:
        return None
    for i, j, a in sys.tree.edges():
        if g[i, j] == 1:
            pairs[i, j] = realize_pair_traces(1, values[j, i], values[i, j], field)
        else:
            u = values[i, j] - sys.shift(i, j)
            pairs[i, j] = BilinearFormPair(g[i, j], identity(field, g[i, j]), _diag(field, fixed[i, j] + [u]))
    return ModuleSolution(g, x, pairs, selfs, field)


def _nonzero(field, values) -> list:
    out = [field.coerce(v) for v in values]
    if any(field.is_zero(v) for v in out):
        raise OutsideModuliImage("eigenvalues of S must be nonzero")
    return out


def _diag(field, entries):
    m = [[field.zero] * len(entries) for _ in entries]
    for k, e in enumerate(entries):
        m[k][k] = e
    return m


def _sum(field, values):
    acc = field.zero
    for v in values:
        acc = acc + v
    return acc


# ---------------------------------------------------------------------------
# one free parameter, exact values of it


class _RationalFunctionField:
    """Q(s) as a working field for symbolic peeling."""

    exact = True

    def __init__(self):
        self.K, self.s = sympy.polys.fields.field("s", QQ)
        self.zero = self.K.zero
        self.one = self.K.one

    def coerce(self, v):
        if isinstance(v, RATIONAL_TYPES) and not isinstance(v, int):
            return self.K(QQ(int(v.numerator), int(v.denominator)))
        if isinstance(v, int):
            return self.K(v)
        return v

    def is_zero(self, v) -> bool:
        return v == 0


@dataclass
class ParameterSolutions:
    """Outcome of solving for the single free parameter s at a fixed lambda.

    ``residual`` is the numerator of the last vertex equation as a polynomial
    in s (integer coefficients, highest first); when it vanishes identically
    every admissible s is a solution and ``solutions`` holds samples.
    """

    residual: tuple[int, ...]
    identically_zero: bool
    solutions: list[tuple[Any, ModuleSolution]]


def single_parameter(g: MultiGraph, s) -> FreeParams:
    """Free parameters for a graph with generalized cycle count 1, all set from one value s."""
    slots = parameter_slots(g)
    if len(slots) != 1 or slots[0].count != 1:
        raise BadParameterCount("exactly one free parameter is required")
    (slot,) = slots
    if slot.kind == "edge":
        return FreeParams(edges={slot.key: [s]})
    if slot.kind == "tree_edge":
        return FreeParams(tree_edges={slot.key: [s]})
    return FreeParams(loops={slot.key: [s]})


def solve_free_parameter(g: MultiGraph, lam, samples: int = 10, rng: random.Random | None = None) -> ParameterSolutions:
    """All solutions at a rational lam of a graph with one free parameter.

    The peeling runs over Q(s); the final equation is a rational function of
    s whose numerator roots are the parameter values, each giving a solution
    over Q(s).  If that numerator vanishes identically, ``samples`` admissible
    values of s are returned instead: 2, 3, ... or, given ``rng``, random
    rationals.
    """
    lam = Fraction(lam.as_fraction() if isinstance(lam, AlgebraicNumber) else lam)
    rf = _RationalFunctionField()
    params = single_parameter(g, rf.s)
    residual = _symbolic_residual(g, lam, params, rf)
    if residual is None:
        return ParameterSolutions((0,), False, [])
    num = residual.numer
    if num == 0:
        out, tried = [], set()
        for attempt in range(10 * samples + 100):
            if len(out) == samples:
                break
            t = Fraction(rng.randint(-60, 60), rng.randint(1, 9)) if rng else Fraction(attempt + 2)
            if t in tried:
                continue
            tried.add(t)
            try:
                sol = solve_general(g, lam, single_parameter(g, t))
            except (OutsideModuliImage, ZeroDivisionError):
                continue
            if sol is not None:
                out.append((t, sol))
        return ParameterSolutions((0,), True, out)
    coeffs = _int_poly(num)
    out = []
    for f, _ in factor_int_poly(coeffs):
        for k in range(len(f) - 1):
            theta = AlgebraicNumber(f, k)
            if theta.min_poly == (1, 0):
                continue
            field = field_for(theta)
            s = field.coerce(theta)
            try:
                sol = solve_general(g, field.coerce(lam), single_parameter(g, s), field=field)
            except (OutsideModuliImage, ZeroDivisionError):
                continue
            if sol is not None:
                out.append((theta, sol))
    return ParameterSolutions(coeffs, False, out)


def _int_poly(p) -> tuple[int, ...]:
    coeffs = [Fraction(int(c.numerator), int(c.denominator)) for c in p.to_dense()]
    den = 1
    for c in coeffs:
        den = sympy.ilcm(den, c.denominator)
    return _normalize([int(c * den) for c in coeffs])


def _symbolic_residual(g: MultiGraph, lam: Fraction, params: FreeParams, rf: _RationalFunctionField):
    """Leftover of the last vertex equation as an element of Q(s), or None if peeling breaks."""
    sys, *_ = _frozen_system(g, rf.coerce(lam), params, rf)
    peeled = _peel(sys, smallest_leaf)
    return None if peeled is None else peeled[1]
