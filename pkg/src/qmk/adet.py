"""Ultraspherical polynomials, ADET diagrams and the root-of-unity classification."""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .errors import QMKError
from .graph import MultiGraph, isomorphic, to_text
from .spectra import eigenvalues, is_nondegenerate, lambda_to_q, q_root_of_unity_order

DETECT_MAX = 64
NONNEG_MAX = 50


@functools.lru_cache(maxsize=None)
def ultraspherical(n: int) -> tuple[int, ...]:
    """P_n with P_1 = 1, P_2 = x, P_{n+2} = x P_{n+1} - P_n; coefficients highest first."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return (1,)
    if n == 2:
        return (1, 0)
    a, b = ultraspherical(n - 1), ultraspherical(n - 2)
    shifted = list(a) + [0]
    pad = [0] * (len(shifted) - len(b)) + list(b)
    return tuple(x - y for x, y in zip(shifted, pad))


def _matmul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def eval_poly_matrix(poly, g: MultiGraph) -> list[list[int]]:
    """P(A) by Horner's rule over the integers; ``poly`` is highest degree first."""
    n = g.n
    a = [list(r) for r in g.mult]
    out = [[0] * n for _ in range(n)]
    for c in poly:
        out = _matmul(out, a)
        for i in range(n):
            out[i][i] += c
    return out


def ultraspherical_matrices(g: MultiGraph, n_max: int):
    """Yield (n, P_n(A)) for n = 1..n_max using the three-term recursion."""
    size = g.n
    a = [list(r) for r in g.mult]
    prev = [[int(i == j) for j in range(size)] for i in range(size)]
    yield 1, prev
    if n_max < 2:
        return
    cur = [list(r) for r in a]
    yield 2, cur
    for n in range(3, n_max + 1):
        prod = _matmul(a, cur)
        prev, cur = cur, [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(prod, prev)]
        yield n, cur


@dataclass(frozen=True)
class DynkinDiagram:
    family: str  # A, D, E6, E7, E8 or T
    rank: int
    coxeter: int
    graph: MultiGraph

    @property
    def name(self) -> str:
        return self.family if self.family.startswith("E") else f"{self.family}_{self.rank}"

    def __str__(self) -> str:
        return self.name


def _path_edges(n: int):
    return [(i, i + 1) for i in range(n - 1)]


def dynkin_a(n: int) -> DynkinDiagram:
    if n < 1:
        raise ValueError("A_n needs n >= 1")
    return DynkinDiagram("A", n, n + 1, MultiGraph.from_edges(n, _path_edges(n)))


def dynkin_d(n: int) -> DynkinDiagram:
    if n < 4:
        raise ValueError("D_n needs n >= 4")
    edges = _path_edges(n - 1) + [(n - 3, n - 1)]
    return DynkinDiagram("D", n, 2 * n - 2, MultiGraph.from_edges(n, edges))


def dynkin_e(n: int) -> DynkinDiagram:
    if n not in (6, 7, 8):
        raise ValueError("E_n needs n in 6, 7, 8")
    edges = _path_edges(n - 1) + [(2, n - 1)]
    return DynkinDiagram(f"E{n}", n, {6: 12, 7: 18, 8: 30}[n], MultiGraph.from_edges(n, edges))


def dynkin_t(n: int) -> DynkinDiagram:
    if n < 1:
        raise ValueError("T_n needs n >= 1")
    return DynkinDiagram("T", n, 2 * n + 1, MultiGraph.from_edges(n, _path_edges(n), [n - 1]))


def adet_diagrams(h: int) -> list[DynkinDiagram]:
    """All ADET diagrams with Coxeter number h, in family order A, D, E, T."""
    out = []
    if h >= 2:
        out.append(dynkin_a(h - 1))
    if h % 2 == 0 and h >= 6:
        out.append(dynkin_d(h // 2 + 1))
    out += [dynkin_e(n) for n in (6, 7, 8) if dynkin_e(n).coxeter == h]
    if h % 2 == 1 and h >= 3:
        out.append(dynkin_t((h - 1) // 2))
    return out


def adet_up_to(h_max: int) -> list[DynkinDiagram]:
    return [d for h in range(2, h_max + 1) for d in adet_diagrams(h)]


def adet_detect(g: MultiGraph, n_max: int = DETECT_MAX) -> tuple[DynkinDiagram | None, int] | None:
    """Smallest h <= n_max with P_h(A) = 0 and the ADET diagram isomorphic to g, if any.

    Returns None when no P_h(A) vanishes.  The diagram slot is None only if
    some P_h(A) vanishes on a graph outside the ADET list, which the
    classification rules out.
    """
    if n_max > DETECT_MAX:
        raise ValueError(f"n_max is capped at {DETECT_MAX}")
    for n, m in ultraspherical_matrices(g, n_max):
        if all(x == 0 for row in m for x in row):
            match = next((d for d in adet_diagrams(n) if isomorphic(d.graph, g)), None)
            return match, n
    return None


def first_negative(g: MultiGraph, n_max: int = NONNEG_MAX) -> int | None:
    """Smallest n <= n_max with a negative entry in P_n(A)."""
    for n, m in ultraspherical_matrices(g, n_max):
        if any(x < 0 for row in m for x in row):
            return n
    return None


def nonneg_check(g: MultiGraph, n_max: int = NONNEG_MAX) -> bool:
    return first_negative(g, n_max) is None


@dataclass(frozen=True)
class Dichotomy:
    vanishing_index: int | None
    nonnegative: bool

    @property
    def holds(self) -> bool:
        return self.vanishing_index is not None or self.nonnegative


def dichotomy(g: MultiGraph, n_max: int = NONNEG_MAX) -> Dichotomy:
    """Either some P_n(A) vanishes or every P_n(A), n <= n_max, is entrywise nonnegative."""
    vanish, negative = None, False
    for n, m in ultraspherical_matrices(g, n_max):
        flat = [x for row in m for x in row]
        if vanish is None and all(x == 0 for x in flat):
            vanish = n
        if any(x < 0 for x in flat):
            negative = True
        if vanish is not None and negative:
            break
    return Dichotomy(vanish, not negative)


def classify_root_of_unity(N: int) -> list[DynkinDiagram]:
    """ADET diagrams with Coxeter number N*, excluding T for even N."""
    if N < 3:
        raise ValueError("N must be at least 3")
    h = N if N % 2 else N // 2
    return [d for d in adet_diagrams(h) if not (N % 2 == 0 and d.family == "T")]


@dataclass(frozen=True)
class EigenReport:
    lam: object
    N: int | None
    nondegenerate: bool
    solved: bool
    jw_norm: float | None
    note: str

    @property
    def consistent(self) -> bool:
        return self.nondegenerate == self.solved and (self.jw_norm is None or self.jw_norm <= 1e-8)


def validate_diagram_solution(d: DynkinDiagram) -> list[EigenReport]:
    """Run nondegeneracy, the tree solver and the JW check at every eigenvalue of d."""
    from .solver import solve_generalized_tree
    from .tl import build_graded_rep, check_jw_vanishing

    out = []
    for lam, _ in eigenvalues(d.graph):
        q, _, excluded = lambda_to_q(lam)
        N = None if excluded else q_root_of_unity_order(q)
        ok, _ = is_nondegenerate(d.graph, lam)
        sol = solve_generalized_tree(d.graph, lam)
        norm, note = None, ""
        if sol is not None and N is not None and N >= 3:
            try:
                norm = check_jw_vanishing(build_graded_rep(sol), N)
            except QMKError as exc:
                note = f"{type(exc).__name__}: {exc}"
        elif excluded:
            note = "lambda = 0 is excluded (q = +-i)"
        elif N is None:
            note = "q is not a root of unity"
        out.append(EigenReport(lam, N, ok, sol is not None, norm, note))
    return out


def classification_report(N: int) -> list[dict]:
    return [
        {"name": d.name, "family": d.family, "rank": d.rank, "coxeter": d.coxeter, "graph": to_text(d.graph)}
        for d in classify_root_of_unity(N)
    ]
