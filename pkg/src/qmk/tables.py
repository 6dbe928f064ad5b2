"""Reference tables of small graphs with their printed lambda data, and their recomputation.

Two lists are reproduced.  The two-vertex list prints values of q + 1/q
over the super-rigid graphs; the tree list prints values of
lambda = -q - 1/q (or a polynomial they satisfy) and omits every value whose
q is a root of unity other than +-1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebraic import AlgebraicNumber, _normalize, factor_int_poly, from_expression
from .graph import MultiGraph, RigidityClass, classify_rigidity, enumerate_graphs
from .spectra import char_poly, lambda_to_q, q_root_of_unity_order, spectrum

PASS, FAIL, SKIPPED = "PASS", "FAIL", "SKIPPED-AMBIGUOUS"


def _path(n: int, loops=()) -> MultiGraph:
    return MultiGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)], loops)


def _star(loops=()) -> MultiGraph:
    # centre 1, leaves 0 (left), 2 (right), 3 (top)
    return MultiGraph.from_edges(4, [(0, 1), (1, 2), (1, 3)], loops)


@dataclass(frozen=True)
class TableEntry:
    key: str
    table: str  # "two-vertex" or "trees"
    description: str
    printed: str
    kind: str  # "q_values", "lam_values", "lam_poly", "count" or "ambiguous"
    graph: MultiGraph | None = None
    values: tuple[str, ...] = ()
    poly: tuple[int, ...] = ()


@dataclass(frozen=True)
class EntryResult:
    entry: TableEntry
    status: str
    detail: str

    def line(self) -> str:
        return f"{self.status:<17} {self.entry.key:<24} {self.entry.printed:<28} {self.detail}"


TWO_VERTEX = [
    TableEntry("2v/edge", "two-vertex", "single edge", "±1", "q_values",
               _path(2), ("1", "-1")),
    TableEntry("2v/edge+loop", "two-vertex", "edge, one loop", "(-1±√5)/2", "q_values",
               _path(2, [0]), ("(-1+sqrt(5))/2", "(-1-sqrt(5))/2")),
    TableEntry("2v/edge+2loops", "two-vertex", "edge, a loop at each end", "-2", "q_values",
               _path(2, [0, 1]), ("-2",)),
    TableEntry("2v/count", "two-vertex", "pictured list: 7 rigid and 3 super-rigid graphs", "7 + 3", "count"),
] + [
    TableEntry(f"2v/rigid-{k}", "two-vertex", "unlabelled rigid picture (loop and arc macros undefined)",
               "-", "ambiguous")
    for k in range(1, 8)
]

TREES = [
    TableEntry("t/edge:l0,l1", "trees", "edge, loops at both ends", "2", "lam_values", _path(2, [0, 1]), ("2",)),
    TableEntry("t/p3:l1", "trees", "3-path, loop at the middle", "2", "lam_values", _path(3, [1]), ("2",)),
    TableEntry("t/p3:l0,l2", "trees", "3-path, loops at both ends", "2", "lam_values", _path(3, [0, 2]), ("2",)),
    TableEntry("t/p3:all", "trees", "3-path, loops everywhere", "1±√2", "lam_values",
               _path(3, [0, 1, 2]), ("1+sqrt(2)", "1-sqrt(2)")),
    TableEntry("t/p3:l0,l1", "trees", "3-path, loops at an end and the middle", "λ³-2λ²-λ+1", "lam_poly",
               _path(3, [0, 1]), poly=(1, -2, -1, 1)),
    TableEntry("t/p4:l0,l1", "trees", "4-path, loops at vertices 0, 1", "(1±√13)/2", "lam_values",
               _path(4, [0, 1]), ("(1+sqrt(13))/2", "(1-sqrt(13))/2")),
    TableEntry("t/p4:l1,l2", "trees", "4-path, loops at vertices 1, 2", "1±√2", "lam_values",
               _path(4, [1, 2]), ("1+sqrt(2)", "1-sqrt(2)")),
    TableEntry("t/p4:l1", "trees", "4-path, loop at vertex 1", "λ⁴-λ³-3λ²+λ+1", "lam_poly",
               _path(4, [1]), poly=(1, -1, -3, 1, 1)),
    TableEntry("t/p4:l0,l1,l2", "trees", "4-path, loops at vertices 0, 1, 2", "λ³-3λ²+3", "lam_poly",
               _path(4, [0, 1, 2]), poly=(1, -3, 0, 3)),
    TableEntry("t/p4:l0,l2", "trees", "4-path, loops at vertices 0, 2", "1/2±√(7±2√5)/2", "lam_values",
               _path(4, [0, 2]),
               ("1/2+sqrt(7+2*sqrt(5))/2", "1/2-sqrt(7+2*sqrt(5))/2",
                "1/2+sqrt(7-2*sqrt(5))/2", "1/2-sqrt(7-2*sqrt(5))/2")),
    TableEntry("t/p4:l0,l3", "trees", "4-path, loops at both ends", "2", "lam_values", _path(4, [0, 3]), ("2",)),
    TableEntry("t/p4:l0,l1,l3", "trees", "4-path, loops at vertices 0, 1, 3", "λ⁴-3λ³+4λ-1", "lam_poly",
               _path(4, [0, 1, 3]), poly=(1, -3, 0, 4, -1)),
    TableEntry("t/p4:all", "trees", "4-path, loops everywhere", "(3±√5)/2", "lam_values",
               _path(4, [0, 1, 2, 3]), ("(3+sqrt(5))/2", "(3-sqrt(5))/2")),
    TableEntry("t/star:l0,c", "trees", "star, loops at a leaf and the centre", "λ³-2λ²-2λ+2", "lam_poly",
               _star([0, 1]), poly=(1, -2, -2, 2)),
    TableEntry("t/star:l0,l2", "trees", "star, loops at two leaves", "λ⁴-2λ³-2λ²+4λ-1", "lam_poly",
               _star([0, 2]), poly=(1, -2, -2, 4, -1)),
    TableEntry("t/star:l0", "trees", "star, loop at one leaf", "2", "lam_values", _star([0]), ("2",)),
    TableEntry("t/star:c", "trees", "star, loop at the centre", "(1±√13)/2", "lam_values",
               _star([1]), ("(1+sqrt(13))/2", "(1-sqrt(13))/2")),
    TableEntry("t/star:l0,c,l2", "trees", "star, loops at two leaves and the centre", "(3±√5)/2", "lam_values",
               _star([0, 1, 2]), ("(3+sqrt(5))/2", "(3-sqrt(5))/2")),
    TableEntry("t/star:leaves", "trees", "star, loops at the three leaves", "(1±√13)/2", "lam_values",
               _star([0, 2, 3]), ("(1+sqrt(13))/2", "(1-sqrt(13))/2")),
    TableEntry("t/star:all", "trees", "star, loops everywhere", "1±√3", "lam_values",
               _star([0, 1, 2, 3]), ("1+sqrt(3)", "1-sqrt(3)")),
]

ENTRIES = TWO_VERTEX + TREES


def listed_values(g: MultiGraph) -> list[AlgebraicNumber]:
    """Nondegenerate eigenvalues whose q is not a root of unity, except q = +-1."""
    out = []
    for root in spectrum(g).roots:
        if not root.nondegenerate:
            continue
        q, _, excluded = lambda_to_q(root.value)
        if excluded:
            continue
        order = q_root_of_unity_order(q)
        if order is None or order <= 2:
            out.append(root.value)
    return out


def _fmt(values) -> str:
    shown = [str(v.as_fraction()) if v.is_rational else f"{float(v):.6g}" for v in sorted(values, key=float)]
    return "{" + ", ".join(shown) + "}"


def _poly_divides(d: tuple[int, ...], p: tuple[int, ...]) -> bool:
    have = dict(factor_int_poly(p))
    return all(have.get(f, 0) >= m for f, m in factor_int_poly(d))


def verify_entry(e: TableEntry) -> EntryResult:
    if e.kind == "ambiguous":
        return EntryResult(e, SKIPPED, "picture cannot be transcribed unambiguously")
    if e.kind == "count":
        rigid = len(enumerate_graphs(2, RigidityClass.RIGID))
        sup = len(enumerate_graphs(2, RigidityClass.SUPER_RIGID))
        ok = (rigid, sup) == (7, 3)
        return EntryResult(e, PASS if ok else FAIL, f"enumerated {rigid} rigid, {sup} super-rigid")
    g = e.graph
    if e.kind == "q_values":
        cls = classify_rigidity(g)
        lams, excluded = [], []
        for root in spectrum(g).roots:
            if not root.nondegenerate:
                continue
            if lambda_to_q(root.value)[2]:
                excluded.append(root.value)
            else:
                lams.append(root.value)
        got = {-v for v in lams}
        want = {from_expression(v) for v in e.values}
        ok = got == want and cls is RigidityClass.SUPER_RIGID
        detail = f"q+1/q = {_fmt(got)}"
        if excluded:
            detail += f"; excluded lambda {_fmt(excluded)}"
        return EntryResult(e, PASS if ok else FAIL, detail)
    got = set(listed_values(g))
    if e.kind == "lam_values":
        want = {from_expression(v) for v in e.values}
        return EntryResult(e, PASS if got == want else FAIL, f"lambda = {_fmt(got)}")
    # printed polynomial: it must divide the characteristic polynomial and vanish on every listed value
    cp = char_poly(g)
    exact = set(factor_int_poly(e.poly)) == {(v.min_poly, 1) for v in got}
    covers = all(any(v.min_poly == f for f, _ in factor_int_poly(e.poly)) for v in got)
    divides = _poly_divides(_normalize(e.poly), cp)
    if exact and divides:
        return EntryResult(e, PASS, f"roots are exactly the listed values {_fmt(got)}")
    if divides and covers:
        return EntryResult(e, PASS, f"divides the characteristic polynomial and covers {_fmt(got)}")
    return EntryResult(e, FAIL, f"listed values {_fmt(got)}, char poly {cp}")


def verify_all(entries=ENTRIES) -> list[EntryResult]:
    return [verify_entry(e) for e in entries]
