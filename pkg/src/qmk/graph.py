"""Finite multigraphs with self-loops: cycle counts, rigidity, isomorphism, enumeration.

A graph on the vertex set ``{0, ..., n-1}`` is stored as its symmetric
adjacency matrix of nonnegative integers.  ``mult[i][j]`` (``i != j``) is the
number of edges joining ``i`` and ``j`` and ``mult[i][i]`` is the number of
self-loops at ``i``.
"""

from __future__ import annotations

import enum
import itertools
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DisconnectedGraph, ParseError, SizeLimitExceeded, UnsupportedClass

CANONICAL_MAX_VERTICES = 9
ENUMERATE_MAX_VERTICES = 6


@dataclass(frozen=True)
class MultiGraph:
    mult: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.mult)
        if n == 0:
            raise ValueError("a graph needs at least one vertex")
        for i, row in enumerate(self.mult):
            if len(row) != n:
                raise ValueError("multiplicity matrix must be square")
            for j, a in enumerate(row):
                if not isinstance(a, int) or isinstance(a, bool) or a < 0:
                    raise ValueError(f"entry ({i},{j}) is not a nonnegative integer: {a!r}")
                if self.mult[j][i] != a:
                    raise ValueError(f"multiplicity matrix is not symmetric at ({i},{j})")

    @classmethod
    def from_matrix(cls, rows: Iterable[Iterable[int]]) -> MultiGraph:
        return cls(tuple(tuple(int(a) for a in row) for row in rows))

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int] | tuple[int, int, int]] = (),
        loops: Iterable[int] | dict[int, int] = (),
    ) -> MultiGraph:
        """Build a graph from ``(i, j)`` or ``(i, j, multiplicity)`` triples.

        ``loops`` is either an iterable of vertices (one loop each, repeats add
        up) or a mapping ``vertex -> number of loops``.
        """
        m = [[0] * n for _ in range(n)]
        for e in edges:
            i, j = e[0], e[1]
            k = e[2] if len(e) == 3 else 1
            if i == j:
                m[i][i] += k
            else:
                m[i][j] += k
                m[j][i] += k
        items = loops.items() if isinstance(loops, dict) else ((v, 1) for v in loops)
        for v, k in items:
            m[v][v] += k
        return cls.from_matrix(m)

    @property
    def n(self) -> int:
        return len(self.mult)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.mult[i][j]

    def neighbors(self, i: int) -> list[int]:
        return [j for j in range(self.n) if j != i and self.mult[i][j]]

    def edges(self) -> list[tuple[int, int, int]]:
        """Pairs ``(i, j, a_ij)`` with ``i <= j`` and ``a_ij > 0``, loops included."""
        return [
            (i, j, self.mult[i][j])
            for i in range(self.n)
            for j in range(i, self.n)
            if self.mult[i][j]
        ]

    def is_zero(self) -> bool:
        return not any(any(row) for row in self.mult)

    def trace(self) -> int:
        return sum(self.mult[i][i] for i in range(self.n))

    def permuted(self, perm: Sequence[int]) -> MultiGraph:
        """Relabel so that old vertex ``perm[k]`` becomes vertex ``k``."""
        return MultiGraph(
            tuple(tuple(self.mult[perm[i]][perm[j]] for j in range(self.n)) for i in range(self.n))
        )

    def induced(self, vertices: Sequence[int]) -> MultiGraph:
        return MultiGraph(tuple(tuple(self.mult[a][b] for b in vertices) for a in vertices))

    def is_connected(self) -> bool:
        return len(_component_of(self, 0)) == self.n

    def __str__(self) -> str:
        return to_text(self).strip().replace("\n", "; ")


class RigidityClass(enum.Enum):
    SUPER_RIGID = "SuperRigid"
    RIGID = "Rigid"
    NON_RIGID = "NonRigid"

    def __str__(self) -> str:
        return self.value


def _component_of(g: MultiGraph, start: int) -> list[int]:
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in g.neighbors(v):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return sorted(seen)


def connected_components(g: MultiGraph) -> list[MultiGraph]:
    """Maximal connected induced subgraphs, ordered by smallest vertex."""
    return [g.induced(c) for c in component_vertex_sets(g)]


def component_vertex_sets(g: MultiGraph) -> list[list[int]]:
    remaining = set(range(g.n))
    out = []
    while remaining:
        comp = _component_of(g, min(remaining))
        out.append(comp)
        remaining.difference_update(comp)
    return out


def _require_connected(g: MultiGraph) -> None:
    if not g.is_connected():
        raise DisconnectedGraph(f"graph with {g.n} vertices is not connected")


def generalized_cycle_count(g: MultiGraph) -> int:
    """Half the off-diagonal multiplicity sum plus floor(a_ii/2) per vertex, minus |I|, plus one."""
    _require_connected(g)
    off = sum(g.mult[i][j] for i in range(g.n) for j in range(i + 1, g.n))
    loops = sum(g.mult[i][i] // 2 for i in range(g.n))
    return off + loops - g.n + 1


def underlying_simply_laced(g: MultiGraph) -> MultiGraph:
    return MultiGraph(
        tuple(
            tuple(1 if i != j and g.mult[i][j] else 0 for j in range(g.n))
            for i in range(g.n)
        )
    )


def classify_rigidity(g: MultiGraph) -> RigidityClass:
    cycles = generalized_cycle_count(g)
    if cycles == 0:
        return RigidityClass.SUPER_RIGID
    if cycles == 1:
        return RigidityClass.RIGID
    return RigidityClass.NON_RIGID


def is_generalized_tree(g: MultiGraph) -> bool:
    return g.is_connected() and generalized_cycle_count(g) == 0


# -- isomorphism -------------------------------------------------------------


def _refined_colors(g: MultiGraph) -> list[int]:
    """Isomorphism-invariant vertex colouring by iterated neighbourhood refinement."""
    n = g.n
    sig = [(g.mult[v][v], tuple(sorted(g.mult[v][w] for w in g.neighbors(v)))) for v in range(n)]
    colors = _rank(sig)
    for _ in range(n):
        sig = [
            (colors[v], tuple(sorted((g.mult[v][w], colors[w]) for w in g.neighbors(v))))
            for v in range(n)
        ]
        new = _rank(sig)
        if len(set(new)) == len(set(colors)):
            break
        colors = new
    return colors


def _rank(signatures: list) -> list[int]:
    order = {s: k for k, s in enumerate(sorted(set(signatures)))}
    return [order[s] for s in signatures]


def canonical_form(g: MultiGraph) -> bytes:
    """Label equal for two graphs exactly when they are isomorphic.

    Vertices are grouped into invariant colour cells; the label is the
    lexicographically smallest upper triangle over all cell-respecting orders.
    """
    if g.n > CANONICAL_MAX_VERTICES:
        raise SizeLimitExceeded(f"canonical_form supports at most {CANONICAL_MAX_VERTICES} vertices")
    colors = _refined_colors(g)
    cells = [[v for v in range(g.n) if colors[v] == c] for c in sorted(set(colors))]
    pairs = [(i, j) for i in range(g.n) for j in range(i, g.n)]
    best = None
    for choice in itertools.product(*(itertools.permutations(c) for c in cells)):
        order = [v for cell in choice for v in cell]
        key = tuple(g.mult[order[i]][order[j]] for i, j in pairs)
        if best is None or key < best:
            best = key
    header = tuple(len(c) for c in cells)
    return f"{g.n}|{','.join(map(str, header))}|{','.join(map(str, best))}".encode()


def _tree_code(g: MultiGraph) -> str:
    """AHU-style code for a generalized tree; used beyond the canonical_form size cap."""
    n = g.n
    adj = {v: g.neighbors(v) for v in range(n)}
    degree = {v: len(adj[v]) for v in range(n)}
    layer = [v for v in range(n) if degree[v] <= 1]
    remaining = n
    removed = set()
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            removed.add(v)
            for w in adj[v]:
                if w not in removed:
                    degree[w] -= 1
                    if degree[w] == 1:
                        nxt.append(w)
        layer = nxt
    centers = [v for v in range(n) if v not in removed]

    def code(v: int, parent: int) -> str:
        kids = sorted(code(w, v) for w in adj[v] if w != parent)
        return f"({g.mult[v][v]}{''.join(kids)})"

    return min(code(c, -1) for c in centers)


def isomorphic(g: MultiGraph, h: MultiGraph) -> bool:
    if g.n != h.n or sorted(map(sorted, g.mult)) != sorted(map(sorted, h.mult)):
        return False
    if g.n <= CANONICAL_MAX_VERTICES:
        return canonical_form(g) == canonical_form(h)
    if is_generalized_tree(g) and is_generalized_tree(h):
        return _tree_code(g) == _tree_code(h)
    raise SizeLimitExceeded("isomorphism beyond the canonical_form cap is only supported for generalized trees")


# -- enumeration -------------------------------------------------------------


def _skeletons(n: int, edge_count: int) -> list[MultiGraph]:
    """Connected simple loop-free graphs with ``edge_count`` edges, one per isomorphism class."""
    slots = list(itertools.combinations(range(n), 2))
    seen: dict[bytes, MultiGraph] = {}
    for chosen in itertools.combinations(slots, edge_count):
        g = MultiGraph.from_edges(n, chosen)
        if g.is_connected():
            seen.setdefault(canonical_form(g), g)
    return [seen[k] for k in sorted(seen)]


def _decorations(args: tuple[MultiGraph, str]) -> list[tuple[bytes, MultiGraph]]:
    skeleton, mode = args
    n = skeleton.n
    base = [list(row) for row in skeleton.mult]
    simple_edges = [(i, j) for i in range(n) for j in range(i + 1, n) if base[i][j]]
    out = []

    def emit(m):
        g = MultiGraph.from_matrix(m)
        out.append((canonical_form(g), g))

    for loops in itertools.product((0, 1), repeat=n):
        m = [row[:] for row in base]
        for v, a in enumerate(loops):
            m[v][v] = a
        if mode in ("tree", "unicyclic"):
            emit(m)
        elif mode == "tree+":
            for i, j in simple_edges:
                mm = [row[:] for row in m]
                mm[i][j] = mm[j][i] = 2
                emit(mm)
            for v in range(n):
                if loops[v] == 0:
                    for a in (2, 3):
                        mm = [row[:] for row in m]
                        mm[v][v] = a
                        emit(mm)
    return out


def enumerate_graphs(n: int, cls: RigidityClass, workers: int | None = None) -> list[MultiGraph]:
    """All connected graphs on ``n`` vertices of the given rigidity class, up to isomorphism.

    Generalized trees are trees decorated with at most one loop per vertex;
    1-loop graphs are either unicyclic with such loops, or such a tree with
    one doubled edge or one vertex carrying two or three loops.  The result is
    sorted by canonical form.
    """
    if n < 1 or n > ENUMERATE_MAX_VERTICES:
        raise SizeLimitExceeded(f"enumeration supports 1..{ENUMERATE_MAX_VERTICES} vertices")
    if cls is RigidityClass.NON_RIGID:
        raise UnsupportedClass("there are infinitely many non-rigid graphs")
    jobs: list[tuple[MultiGraph, str]] = []
    trees = _skeletons(n, n - 1)
    if cls is RigidityClass.SUPER_RIGID:
        jobs = [(t, "tree") for t in trees]
    else:
        jobs = [(t, "tree+") for t in trees]
        if n >= 3:
            jobs += [(u, "unicyclic") for u in _skeletons(n, n)]
    workers = workers if workers is not None else int(os.environ.get("QMK_THREADS", "1") or 1)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(_decorations, jobs))
    else:
        batches = [_decorations(j) for j in jobs]
    found: dict[bytes, MultiGraph] = {}
    for batch in batches:
        for key, g in batch:
            found.setdefault(key, g)
    return [found[k] for k in sorted(found)]


SCAN_MAX_CANDIDATES = 1 << 22


def iter_connected_graphs(n: int, max_mult: int) -> Iterator[MultiGraph]:
    """Every connected graph on ``n`` vertices with entries ``<= max_mult``, one per isomorphism class.

    A brute-force matrix scan: each symmetric matrix is read as a base
    ``max_mult + 1`` number over its upper triangle, and kept when that number
    is the smallest over all vertex permutations.  Independent of
    :func:`canonical_form`, so it doubles as a test oracle.
    """
    slots = [(i, j) for i in range(n) for j in range(i, n)]
    base = max_mult + 1
    if base ** len(slots) > SCAN_MAX_CANDIDATES:
        raise SizeLimitExceeded("matrix scan too large")
    index = {s: k for k, s in enumerate(slots)}
    codes = np.arange(base ** len(slots), dtype=np.int64)
    digits = np.empty((codes.size, len(slots)), dtype=np.int64)
    rest = codes.copy()
    for k in range(len(slots) - 1, -1, -1):
        digits[:, k] = rest % base
        rest //= base
    weights = base ** np.arange(len(slots) - 1, -1, -1, dtype=np.int64)
    minimal = np.ones(codes.size, dtype=bool)
    for perm in itertools.permutations(range(n)):
        src_cols = [index[tuple(sorted((perm[i], perm[j])))] for i, j in slots]
        minimal &= codes <= digits[:, src_cols] @ weights
    kept = digits[minimal]
    mats = np.zeros((kept.shape[0], n, n), dtype=np.int64)
    for k, (i, j) in enumerate(slots):
        mats[:, i, j] = kept[:, k]
        mats[:, j, i] = kept[:, k]
    reach = (mats > 0) | np.eye(n, dtype=bool)
    step = reach.astype(np.int64)
    for _ in range(n):
        reach = (reach.astype(np.int64) @ step) > 0
    connected = reach.all(axis=(1, 2))
    for m in mats[connected]:
        yield MultiGraph.from_matrix(m.tolist())


# -- text, JSON and DOT formats ---------------------------------------------


def to_text(g: MultiGraph) -> str:
    lines = [f"n {g.n}"]
    lines += [f"{i} {j} {a}" for i, j, a in g.edges()]
    return "\n".join(lines) + "\n"


def parse_text(text: str) -> MultiGraph:
    """Parse the line format ``n <count>`` followed by ``<i> <j> <multiplicity>`` rows."""
    n = None
    entries: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise ParseError("expected header 'n <vertex_count>'", lineno)
            try:
                n = int(parts[1])
            except ValueError:
                raise ParseError(f"bad vertex count {parts[1]!r}", lineno) from None
            if n < 1:
                raise ParseError("vertex count must be positive", lineno)
            continue
        if len(parts) != 3:
            raise ParseError("expected '<i> <j> <multiplicity>'", lineno)
        try:
            i, j, a = (int(p) for p in parts)
        except ValueError:
            raise ParseError("non-integer field", lineno) from None
        if not (0 <= i < n and 0 <= j < n):
            raise ParseError(f"vertex index out of range 0..{n - 1}", lineno)
        if i > j:
            raise ParseError("rows must satisfy i <= j", lineno)
        if a < 0:
            raise ParseError("multiplicity must be nonnegative", lineno)
        if (i, j) in entries:
            raise ParseError(f"duplicate entry for pair ({i}, {j})", lineno)
        entries[(i, j)] = a
    if n is None:
        raise ParseError("empty graph file")
    return MultiGraph.from_edges(n, [(i, j, a) for (i, j), a in entries.items()])


def to_json(g: MultiGraph) -> dict:
    return {"vertex_count": g.n, "mult": [list(row) for row in g.mult]}


def from_json(obj: dict) -> MultiGraph:
    g = MultiGraph.from_matrix(obj["mult"])
    if g.n != obj.get("vertex_count", g.n):
        raise ParseError("vertex_count does not match the matrix size")
    return g


def load_graph(path: str) -> MultiGraph:
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        try:
            return from_json(json.loads(text))
        except (KeyError, ValueError, TypeError) as exc:
            raise ParseError(f"bad JSON graph: {exc}") from None
    return parse_text(text)


def to_dot(g: MultiGraph, name: str = "G") -> str:
    """Undirected DOT with one ``--`` line per parallel edge and per loop."""
    lines = [f"graph {name} {{"]
    lines += [f"  {v};" for v in range(g.n)]
    for i, j, a in g.edges():
        lines += [f"  {i} -- {j};"] * a
    lines.append("}")
    return "\n".join(lines) + "\n"
