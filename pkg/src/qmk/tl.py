"""Temperley-Lieb diagrams, Jones-Wenzl projectors and graded representations.

A diagram with ``k`` bottom and ``l`` top points numbers its boundary
clockwise: bottom points ``0..k-1`` left to right, then top points
``k..k+l-1`` right to left.  A planar matching of these points is stored as
a sorted tuple of pairs ``(a, b)`` with ``a < b``; planarity is exactly the
condition that the pairs nest like brackets.

Diagrams map bottom to top.  ``compose(a, b)`` stacks ``a`` on top of ``b``
(so ``b`` acts first), matching matrix products of representations.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Any, Iterable

import sympy
from sympy import QQ

from .errors import (
    ArityMismatch,
    InvalidSolution,
    NotRootOfUnity,
    SizeLimitExceeded,
    UndefinableProjector,
)
from .forms import ModuleSolution, is_valid
from .linalg import SparseMatrix, inverse
from .spectra import lambda_to_q, q_root_of_unity_order

MAX_GRADED_DIM = 20000
MAX_JW_STRANDS = 8


# ---------------------------------------------------------------------------
# diagrams


@dataclass(frozen=True)
class PlanarDiagram:
    k: int
    l: int
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if (self.k + self.l) % 2:
            raise ValueError("a planar matching needs an even number of boundary points")
        pairs = tuple(sorted(tuple(sorted(p)) for p in self.pairs))
        object.__setattr__(self, "pairs", pairs)
        seen = [q for p in pairs for q in p]
        if sorted(seen) != list(range(self.k + self.l)):
            raise ValueError("every boundary point must be matched exactly once")
        if not _nested(pairs, self.k + self.l):
            raise ValueError("matching is not planar")

    @functools.cached_property
    def partner(self) -> tuple[int, ...]:
        out = [0] * (self.k + self.l)
        for a, b in self.pairs:
            out[a], out[b] = b, a
        return tuple(out)

    def top_index(self, x: int) -> int:
        """Boundary index of the x-th top point counted from the left."""
        return self.k + self.l - 1 - x

    def position(self, idx: int) -> tuple[str, int]:
        if idx < self.k:
            return "bottom", idx
        return "top", self.k + self.l - 1 - idx

    def bracket(self) -> str:
        return "".join("(" if self.partner[i] > i else ")" for i in range(self.k + self.l))

    def through_strands(self) -> int:
        return sum(1 for a, b in self.pairs if a < self.k <= b)

    def __str__(self) -> str:
        return f"{self.k}->{self.l}:{self.bracket()}"


def _nested(pairs, size: int) -> bool:
    partner = [None] * size
    for a, b in pairs:
        partner[a], partner[b] = b, a
    stack = []
    for i in range(size):
        if partner[i] > i:
            stack.append(i)
        elif not stack or stack.pop() != partner[i]:
            return False
    return True


def from_bracket(k: int, l: int, text: str) -> PlanarDiagram:
    if len(text) != k + l:
        raise ValueError("bracket string length differs from k + l")
    stack, pairs = [], []
    for i, ch in enumerate(text):
        if ch == "(":
            stack.append(i)
        elif ch == ")":
            if not stack:
                raise ValueError("unbalanced bracket string")
            pairs.append((stack.pop(), i))
        else:
            raise ValueError(f"unexpected character {ch!r}")
    if stack:
        raise ValueError("unbalanced bracket string")
    return PlanarDiagram(k, l, tuple(pairs))


def identity_diagram(n: int) -> PlanarDiagram:
    return PlanarDiagram(n, n, tuple((x, 2 * n - 1 - x) for x in range(n)))


def generator_diagram(n: int, i: int) -> PlanarDiagram:
    """e_i on n strands (1 <= i < n): cap on bottom i-1, i and cup on top i-1, i."""
    if not 1 <= i < n:
        raise ValueError("generator index out of range")
    pairs = [(i - 1, i), (2 * n - 1 - i, 2 * n - i)]
    pairs += [(x, 2 * n - 1 - x) for x in range(n) if x not in (i - 1, i)]
    return PlanarDiagram(n, n, tuple(pairs))


@functools.lru_cache(maxsize=None)
def all_diagrams(k: int, l: int) -> tuple[PlanarDiagram, ...]:
    """Every planar matching of k + l points (a Catalan number of them)."""
    if (k + l) % 2:
        return ()

    def matchings(points: tuple[int, ...]):
        if not points:
            yield ()
            return
        first = points[0]
        # first pairs with a point leaving an even block in between
        for t in range(1, len(points), 2):
            inside, outside = points[1:t], points[t + 1:]
            for m1 in matchings(inside):
                for m2 in matchings(outside):
                    yield ((first, points[t]),) + m1 + m2

    return tuple(sorted((PlanarDiagram(k, l, m) for m in matchings(tuple(range(k + l)))), key=lambda d: d.pairs))


@functools.lru_cache(maxsize=200000)
def compose_diagrams(upper: PlanarDiagram, lower: PlanarDiagram) -> tuple[PlanarDiagram, int]:
    """Stack ``upper`` on ``lower``; returns the reduced diagram and the number of closed loops."""
    if lower.l != upper.k:
        raise ArityMismatch(f"cannot stack a {upper.k}-input diagram on a {lower.l}-output one")
    m = lower.l
    k, l = lower.k, upper.l
    seen_mid = [False] * m

    def walk(side: str, idx: int) -> tuple[str, int]:
        # follow strands across the middle until an outer point is reached
        while True:
            d = lower if side == "lower" else upper
            j = d.partner[idx]
            if side == "lower":
                if j < lower.k:
                    return "bottom", j
                x = lower.k + m - 1 - j
                seen_mid[x] = True
                side, idx = "upper", x
            else:
                if j >= upper.k:
                    return "top", upper.k + l - 1 - j
                seen_mid[j] = True
                side, idx = "lower", lower.k + m - 1 - j

    out_pairs = []
    done = set()
    for p in range(k):
        if ("bottom", p) in done:
            continue
        end = walk("lower", p)
        done.update({("bottom", p), end})
        out_pairs.append((p, end[1] if end[0] == "bottom" else k + l - 1 - end[1]))
    for x in range(l):
        if ("top", x) in done:
            continue
        end = walk("upper", upper.k + l - 1 - x)
        done.update({("top", x), end})
        out_pairs.append((k + l - 1 - x, k + l - 1 - end[1]))
    loops = 0
    for x0 in range(m):
        if seen_mid[x0]:
            continue
        loops += 1
        x = x0
        while True:
            seen_mid[x] = True
            x = upper.partner[x]
            seen_mid[x] = True
            x = lower.k + m - 1 - lower.partner[lower.k + m - 1 - x]
            if x == x0:
                break
    return PlanarDiagram(k, l, tuple(out_pairs)), loops


@functools.lru_cache(maxsize=200000)
def tensor_diagrams(left: PlanarDiagram, right: PlanarDiagram) -> PlanarDiagram:
    """Side-by-side juxtaposition, ``left`` on the left."""
    k, l = left.k + right.k, left.l + right.l

    def index(d: PlanarDiagram, idx: int, offset_k: int, offset_l: int) -> int:
        side, x = d.position(idx)
        return x + offset_k if side == "bottom" else k + l - 1 - (x + offset_l)

    pairs = [(index(left, a, 0, 0), index(left, b, 0, 0)) for a, b in left.pairs]
    pairs += [(index(right, a, left.k, left.l), index(right, b, left.k, left.l)) for a, b in right.pairs]
    return PlanarDiagram(k, l, tuple(pairs))


# ---------------------------------------------------------------------------
# elements


class TLElement:
    """A linear combination of (k -> l) diagrams with loop value ``delta``."""

    __slots__ = ("k", "l", "delta", "terms")

    def __init__(self, k: int, l: int, delta, terms: dict | None = None):
        self.k = k
        self.l = l
        self.delta = delta
        self.terms = {d: c for d, c in (terms or {}).items() if not _is_zero(c)}
        for d in self.terms:
            if (d.k, d.l) != (k, l):
                raise ArityMismatch("all diagrams of an element share their arity")

    @classmethod
    def diagram(cls, d: PlanarDiagram, delta, coeff=1) -> TLElement:
        return cls(d.k, d.l, delta, {d: coeff})

    def __add__(self, other: TLElement) -> TLElement:
        if (self.k, self.l) != (other.k, other.l):
            raise ArityMismatch("cannot add elements of different arity")
        terms = dict(self.terms)
        for d, c in other.terms.items():
            terms[d] = terms[d] + c if d in terms else c
        return TLElement(self.k, self.l, self.delta, terms)

    def __neg__(self) -> TLElement:
        return self.scale(-1)

    def __sub__(self, other: TLElement) -> TLElement:
        return self + (-other)

    def scale(self, c) -> TLElement:
        return TLElement(self.k, self.l, self.delta, {d: c * v for d, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, TLElement):
            return NotImplemented
        return (self.k, self.l) == (other.k, other.l) and (self - other).terms == {}

    __hash__ = None

    def coefficient(self, d: PlanarDiagram):
        return self.terms.get(d, 0)

    def records(self) -> list[dict]:
        return [
            {"k": d.k, "l": d.l, "pairs": [list(p) for p in d.pairs], "bracket": d.bracket(), "coeff": str(c)}
            for d, c in sorted(self.terms.items(), key=lambda dc: dc[0].pairs)
        ]

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*[{d}]" for d, c in sorted(self.terms.items(), key=lambda dc: dc[0].pairs))
        return f"TLElement({self.k}->{self.l}: {body or '0'})"


def _is_zero(c) -> bool:
    return c == 0


def compose(upper: TLElement, lower: TLElement) -> TLElement:
    """``upper`` after ``lower``; each closed loop becomes a factor delta."""
    if lower.l != upper.k:
        raise ArityMismatch(f"inner arities differ: {lower.l} vs {upper.k}")
    delta = upper.delta
    powers = {0: 1}
    terms: dict = {}
    for d1, c1 in upper.terms.items():
        for d2, c2 in lower.terms.items():
            d, loops = compose_diagrams(d1, d2)
            if loops not in powers:
                powers[loops] = delta ** loops
            c = c1 * c2 * powers[loops] if loops else c1 * c2
            terms[d] = terms[d] + c if d in terms else c
    return TLElement(lower.k, upper.l, delta, terms)


def tensor(left: TLElement, right: TLElement) -> TLElement:
    terms: dict = {}
    for d1, c1 in left.terms.items():
        for d2, c2 in right.terms.items():
            d = tensor_diagrams(d1, d2)
            c = c1 * c2
            terms[d] = terms[d] + c if d in terms else c
    return TLElement(left.k + right.k, left.l + right.l, left.delta, terms)


def identity(n: int, delta) -> TLElement:
    return TLElement.diagram(identity_diagram(n), delta)


def generator(n: int, i: int, delta) -> TLElement:
    return TLElement.diagram(generator_diagram(n, i), delta)


def generic_delta():
    """The field Q(delta) with delta transcendental, and delta itself."""
    K, d = sympy.polys.fields.field("delta", QQ)
    return K, d


def chebyshev_values(delta, n: int) -> list:
    """[P_1(delta), ..., P_n(delta)] for P_1 = 1, P_2 = x, P_{k+2} = x P_{k+1} - P_k."""
    vals = [delta ** 0 if not isinstance(delta, int) else 1, delta]
    while len(vals) < n:
        vals.append(delta * vals[-1] - vals[-2])
    return vals[:n]


def n_star(N: int) -> int:
    if N < 3:
        raise ValueError("N must be at least 3")
    return N if N % 2 else N // 2


def jones_wenzl(n: int, delta) -> TLElement:
    """f_n by Wenzl's recursion f_{m+1} = f_m x 1 - (P_m/P_{m+1}) (f_m x 1) e_m (f_m x 1)."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > MAX_JW_STRANDS:
        raise SizeLimitExceeded(f"projectors are computed for at most {MAX_JW_STRANDS} strands")
    P = chebyshev_values(delta, n)
    for m in range(2, n + 1):
        if _is_zero(P[m - 1]):
            raise UndefinableProjector(f"P_{m}(delta) vanishes, so f_{n} is not defined")
    f = identity(1, delta)
    one = identity(1, delta)
    for m in range(1, n):
        fx = tensor(f, one)
        e = generator(m + 1, m, delta)
        middle = compose(fx, compose(e, fx))
        f = fx - middle.scale(P[m - 1] / P[m])
    return f


# ---------------------------------------------------------------------------
# graded representation


class GradedRep:
    """The diagram calculus realized on graded vector spaces built from a solution.

    The generating object W is the sum of the spaces V_ij (dimension a_ij);
    W^{x k} has a basis of vertex paths i_0 .. i_k with one basis index per
    step.  A cap with outer region x and inner region y evaluates the form
    E_xy; a cup with outer region x and inner region y inserts the inverse
    matrix of E_yx.
    """

    def __init__(self, sol: ModuleSolution):
        self.solution = sol
        self.field = sol.field
        self.graph = sol.graph
        self.delta = sol.lam
        n = self.graph.n
        self.forms: dict[tuple[int, int], Any] = {}
        for (i, j), p in sol.pairs.items():
            self.forms[i, j] = [list(r) for r in p.e_fwd]
            self.forms[j, i] = [list(r) for r in p.e_bwd]
        for i, s in sol.selfs.items():
            self.forms[i, i] = [list(r) for r in s.e]
        self.copairings = {}
        for (x, y), e in self.forms.items():
            try:
                self.copairings[x, y] = inverse(self.field, self.forms[y, x])
            except ZeroDivisionError as exc:
                raise InvalidSolution(f"form on ({y}, {x}) is degenerate") from exc
        self.steps = {
            i: [(j, b) for j in range(n) for b in range(self.graph[i, j])] for i in range(n)
        }
        self.adjacent = {i: tuple(j for j in range(n) if self.graph[i, j]) for i in range(n)}
        self._bases: dict[int, list] = {}
        self._index: dict[int, dict] = {}

    def dim(self, i: int, j: int) -> int:
        return self.graph[i, j]

    def cap(self, x: int, y: int, b: int, b2: int):
        return self.forms[x, y][b][b2]

    def cup(self, x: int, y: int, c: int, c2: int):
        return self.copairings[x, y][c][c2]

    def basis(self, k: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        if k not in self._bases:
            paths = [((i,), ()) for i in range(self.graph.n)]
            for _ in range(k):
                paths = [
                    (p + (j,), idx + (b,)) for p, idx in paths for j, b in self.steps[p[-1]]
                ]
                if len(paths) > MAX_GRADED_DIM:
                    raise SizeLimitExceeded(f"W^{k} exceeds {MAX_GRADED_DIM} dimensions")
            self._bases[k] = paths
            self._index[k] = {v: r for r, v in enumerate(paths)}
        return self._bases[k]

    def index(self, k: int) -> dict:
        self.basis(k)
        return self._index[k]


def build_graded_rep(sol: ModuleSolution) -> GradedRep:
    """Graded representation of a solution, after checking zigzag and loop identities."""
    try:
        valid = is_valid(sol)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidSolution(str(exc)) from exc
    if not valid:
        raise InvalidSolution("vertex equations are not satisfied")
    rep = GradedRep(sol)
    field = rep.field
    loop = _cap_matrix(rep) @ _cup_matrix(rep)
    if not _equal(field, loop, SparseMatrix.identity(field, rep.graph.n).scaled(rep.delta)):
        raise InvalidSolution("closed loop differs from delta")
    one = SparseMatrix.identity(field, len(rep.basis(1)))
    left = _cap_then(rep) @ _then_cup(rep, "right")
    right = _then_cap(rep) @ _then_cup(rep, "left")
    if not (_equal(field, left, one) and _equal(field, right, one)):
        raise InvalidSolution("zigzag identities fail")
    return rep


def _equal(field, a: SparseMatrix, b: SparseMatrix) -> bool:
    return (a - b).is_zero(field)


def _cup_matrix(rep: GradedRep) -> SparseMatrix:
    """1 -> W (x) W."""
    m = SparseMatrix(len(rep.basis(2)), rep.graph.n)
    for r, (path, bs) in enumerate(rep.basis(2)):
        x, y, z = path
        if z == x:
            m.set(r, idx0(rep, x), rep.cup(x, y, bs[0], bs[1]))
    return m


def _cap_matrix(rep: GradedRep) -> SparseMatrix:
    """W (x) W -> 1."""
    m = SparseMatrix(rep.graph.n, len(rep.basis(2)))
    for c, (path, bs) in enumerate(rep.basis(2)):
        x, y, z = path
        if z == x:
            m.set(idx0(rep, x), c, rep.cap(x, y, bs[0], bs[1]))
    return m


def idx0(rep: GradedRep, i: int) -> int:
    return rep.index(0)[(i,), ()]


def _then_cup(rep: GradedRep, side: str) -> SparseMatrix:
    """W -> W^3: a cup inserted to the right (id x alpha) or to the left (alpha x id)."""
    idx3 = rep.index(3)
    m = SparseMatrix(len(rep.basis(3)), len(rep.basis(1)))
    for c, ((i, j), (b,)) in enumerate(rep.basis(1)):
        outer = j if side == "right" else i
        for y, c1 in rep.steps[outer]:
            for c2 in range(rep.dim(y, outer)):
                coeff = rep.cup(outer, y, c1, c2)
                if coeff == 0:
                    continue
                if side == "right":
                    key = ((i, j, y, j), (b, c1, c2))
                else:
                    key = ((i, y, i, j), (c1, c2, b))
                m.add_to(idx3[key], c, coeff)
    return m


def _cap_then(rep: GradedRep) -> SparseMatrix:
    """W^3 -> W: cap on the first two factors (beta x id)."""
    idx1 = rep.index(1)
    m = SparseMatrix(len(rep.basis(1)), len(rep.basis(3)))
    for c, (path, bs) in enumerate(rep.basis(3)):
        a, b, cc, d = path
        if cc == a:
            m.add_to(idx1[(a, d), (bs[2],)], c, rep.cap(a, b, bs[0], bs[1]))
    return m


def _then_cap(rep: GradedRep) -> SparseMatrix:
    """W^3 -> W: cap on the last two factors (id x beta)."""
    idx1 = rep.index(1)
    m = SparseMatrix(len(rep.basis(1)), len(rep.basis(3)))
    for c, (path, bs) in enumerate(rep.basis(3)):
        a, b, cc, d = path
        if d == b:
            m.add_to(idx1[(a, b), (bs[0],)], c, rep.cap(b, cc, bs[1], bs[2]))
    return m


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, v: int) -> int:
        while self.parent[v] != v:
            self.parent[v] = self.parent[self.parent[v]]
            v = self.parent[v]
        return v

    def union(self, a: int, b: int) -> None:
        self.parent[self.find(a)] = self.find(b)


@functools.lru_cache(maxsize=4096)
def _diagram_layout(d: PlanarDiagram):
    """Regions, caps, cups and through strands of a diagram.

    Gaps between boundary points are numbered: bottom gaps 0..k, top gaps
    k+1..k+l+1 (left to right).  Returns the region of each gap, plus the
    caps (bottom positions), cups (top positions) and through strands.
    """
    k, l = d.k, d.l
    uf = _UnionFind(k + l + 2)
    bottom = lambda g: g
    top = lambda g: k + 1 + g
    uf.union(bottom(0), top(0))
    uf.union(bottom(k), top(l))
    caps, cups, through = [], [], []
    for a, b in d.pairs:
        (sa, xa), (sb, xb) = d.position(a), d.position(b)
        if sa == sb == "bottom":
            p, q = sorted((xa, xb))
            uf.union(bottom(p), bottom(q + 1))
            uf.union(bottom(p + 1), bottom(q))
            caps.append((p, q))
        elif sa == sb == "top":
            p, q = sorted((xa, xb))
            uf.union(top(p), top(q + 1))
            uf.union(top(p + 1), top(q))
            cups.append((p, q))
        else:
            p, t = (xa, xb) if sa == "bottom" else (xb, xa)
            uf.union(bottom(p), top(t))
            uf.union(bottom(p + 1), top(t + 1))
            through.append((p, t))
    region = [uf.find(g) for g in range(k + l + 2)]
    return region, tuple(caps), tuple(cups), tuple(through)


def rep_of_diagram(rep: GradedRep, d: PlanarDiagram) -> SparseMatrix:
    """Matrix of a single diagram, W^{x k} -> W^{x l}."""
    k, l = d.k, d.l
    region, caps, cups, through = _diagram_layout(d)
    out_index = rep.index(l)
    m = SparseMatrix(len(rep.basis(l)), len(rep.basis(k)))
    top_regions = [region[k + 1 + g] for g in range(l + 1)]
    for col, (path, bs) in enumerate(rep.basis(k)):
        label: dict[int, int] = {}
        ok = True
        for g in range(k + 1):
            r = region[g]
            if label.setdefault(r, path[g]) != path[g]:
                ok = False
                break
        if not ok:
            continue
        coeff = None
        for p, q in caps:
            v = rep.cap(path[p], path[p + 1], bs[p], bs[q])
            if v == 0:
                ok = False
                break
            coeff = v if coeff is None else coeff * v
        if not ok:
            continue
        for tpath in _top_paths(rep, top_regions, label):
            top_idx: list = [None] * l
            for p, t in through:
                top_idx[t] = bs[p]
            cup_ranges = [
                [(c1, c2) for c1 in range(rep.dim(tpath[p], tpath[p + 1])) for c2 in range(rep.dim(tpath[q], tpath[q + 1]))]
                for p, q in cups
            ]
            for cup_choice in itertools.product(*cup_ranges):
                value = coeff
                for (p, q), (c1, c2) in zip(cups, cup_choice):
                    v = rep.cup(tpath[p], tpath[p + 1], c1, c2)
                    if v == 0:
                        value = None
                        break
                    top_idx[p], top_idx[q] = c1, c2
                    value = v if value is None else value * v
                else:
                    if value is None:
                        value = rep.field.one
                    m.add_to(out_index[tpath, tuple(top_idx)], col, value)
    return m


def _top_paths(rep: GradedRep, regions: list, label: dict):
    """Vertex paths along the top gaps that agree with ``label`` and follow edges."""
    adjacent = rep.adjacent

    def extend(g: int, prefix: tuple, lab: dict):
        if g == len(regions):
            yield prefix
            return
        r = regions[g]
        if r in lab:
            options = (lab[r],)
        elif g == 0:
            options = range(rep.graph.n)
        else:
            options = adjacent[prefix[-1]]
        for v in options:
            if g and v not in adjacent[prefix[-1]]:
                continue
            if r in lab:
                yield from extend(g + 1, prefix + (v,), lab)
            else:
                lab[r] = v
                yield from extend(g + 1, prefix + (v,), lab)
                del lab[r]

    yield from extend(0, (), dict(label))


def rep_of_element(rep: GradedRep, el: TLElement) -> SparseMatrix:
    """The linear map W^{x k} -> W^{x l} of an element."""
    total = SparseMatrix(len(rep.basis(el.l)), len(rep.basis(el.k)))
    for d, c in el.terms.items():
        total = total + rep_of_diagram(rep, d).scaled(rep.field.coerce(c))
    return total


def jw_image_norm(rep: GradedRep, n: int) -> tuple[float, bool]:
    """Max absolute entry of the image of f_n and whether it is exactly zero."""
    f = jones_wenzl(n, rep.delta)
    img = rep_of_element(rep, f)
    return img.max_abs(), img.is_zero(rep.field)


def check_jw_vanishing(rep: GradedRep, N: int) -> float:
    """Max-entry norm of the image of f_{N*-1}, where q has multiplicative order N."""
    q, _, _ = lambda_to_q(rep.solution.lam_algebraic)
    order = q_root_of_unity_order(q)
    if order is None:
        raise NotRootOfUnity("q is not a root of unity of order at most 512")
    if order != N:
        raise NotRootOfUnity(f"q has order {order}, not {N}")
    norm, _ = jw_image_norm(rep, n_star(N) - 1)
    return norm


def element_from_records(records: Iterable[dict], delta, parse=lambda s: s) -> TLElement:
    records = list(records)
    if not records:
        raise ValueError("empty record list")
    k, l = records[0]["k"], records[0]["l"]
    terms = {PlanarDiagram(r["k"], r["l"], tuple(tuple(p) for p in r["pairs"])): parse(r["coeff"]) for r in records}
    return TLElement(k, l, delta, terms)
