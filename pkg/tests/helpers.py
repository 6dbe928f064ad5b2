"""Small graph builders shared by the tests."""

from qmk.graph import MultiGraph

ACCEPTANCE_LINES: list[str] = []


def path(n, loops=()):
    return MultiGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)], loops)


def cycle(n):
    return MultiGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star(loops=()):
    return MultiGraph.from_edges(4, [(0, 1), (1, 2), (1, 3)], loops)


def looped_vertex(k):
    return MultiGraph.from_matrix([[k]])
