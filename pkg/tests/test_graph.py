import itertools

import pytest
from hypothesis import given, settings, strategies as st

from helpers import cycle, looped_vertex, path
from oracles import connected, cycle_count, relabel_key, scan_graphs
from qmk.errors import DisconnectedGraph, ParseError, SizeLimitExceeded, UnsupportedClass
from qmk.graph import (
    MultiGraph,
    RigidityClass,
    canonical_form,
    classify_rigidity,
    connected_components,
    enumerate_graphs,
    from_json,
    generalized_cycle_count,
    is_generalized_tree,
    isomorphic,
    iter_connected_graphs,
    parse_text,
    to_dot,
    to_json,
    to_text,
    underlying_simply_laced,
)


@st.composite
def graphs(draw, max_n=5, max_mult=3, connected_only=True):
    n = draw(st.integers(1, max_n))
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            m[i][j] = m[j][i] = draw(st.integers(0, max_mult))
    if connected_only:
        # chain the vertices through a random spanning path so the graph is connected
        order = draw(st.permutations(range(n)))
        for a, b in zip(order, order[1:]):
            if not m[a][b]:
                m[a][b] = m[b][a] = 1
    return MultiGraph.from_matrix(m)


@st.composite
def relabelled(draw, max_n=5):
    g = draw(graphs(max_n))
    perm = draw(st.permutations(range(g.n)))
    return g, g.permuted(perm)


def test_cycle_count_examples(edge, triangle):
    assert generalized_cycle_count(edge) == 0
    assert generalized_cycle_count(triangle) == 1
    assert generalized_cycle_count(looped_vertex(1)) == 0
    assert generalized_cycle_count(looped_vertex(3)) == 1
    assert generalized_cycle_count(MultiGraph.from_edges(2, [(0, 1, 2)])) == 1


def test_cycle_count_disconnected():
    with pytest.raises(DisconnectedGraph):
        generalized_cycle_count(MultiGraph.from_matrix([[0, 0], [0, 1]]))


def test_classify_examples(edge, triangle):
    assert classify_rigidity(edge) is RigidityClass.SUPER_RIGID
    assert classify_rigidity(triangle) is RigidityClass.RIGID
    assert classify_rigidity(looped_vertex(4)) is RigidityClass.NON_RIGID
    # one vertex is rigid exactly for at most three loops
    assert [classify_rigidity(looped_vertex(k)) for k in range(6)] == [
        RigidityClass.SUPER_RIGID, RigidityClass.SUPER_RIGID,
        RigidityClass.RIGID, RigidityClass.RIGID,
        RigidityClass.NON_RIGID, RigidityClass.NON_RIGID,
    ]


def test_components():
    g = MultiGraph.from_matrix([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    comps = connected_components(g)
    assert [c.n for c in comps] == [2, 1]
    assert comps[1].mult == ((1,),)
    assert len(connected_components(MultiGraph.from_matrix([[0] * 3] * 3))) == 3
    assert connected_components(cycle(4)) == [cycle(4)]


def test_matrix_validation():
    with pytest.raises(ValueError):
        MultiGraph.from_matrix([[0, 1], [0, 0]])
    with pytest.raises(ValueError):
        MultiGraph.from_matrix([[-1]])
    with pytest.raises(ValueError):
        MultiGraph.from_matrix([])


def test_canonical_form_examples():
    p = MultiGraph.from_edges(3, [(0, 1), (1, 2)])
    q = MultiGraph.from_edges(3, [(1, 0), (1, 2)])
    r = MultiGraph.from_edges(3, [(0, 2), (2, 1)])
    assert canonical_form(p) == canonical_form(q) == canonical_form(r)
    assert canonical_form(p) != canonical_form(cycle(3))
    with pytest.raises(SizeLimitExceeded):
        canonical_form(path(10))


@settings(max_examples=150, deadline=None)
@given(relabelled())
def test_canonical_form_is_invariant(pair):
    g, h = pair
    assert canonical_form(g) == canonical_form(h)
    assert isomorphic(g, h)
    assert generalized_cycle_count(g) == generalized_cycle_count(h)
    assert classify_rigidity(g) is classify_rigidity(h)


@settings(max_examples=150, deadline=None)
@given(graphs(4, 2), graphs(4, 2))
def test_canonical_form_separates(g, h):
    if g.n == h.n:
        same = relabel_key([list(r) for r in g.mult]) == relabel_key([list(r) for r in h.mult])
    else:
        same = False
    assert (canonical_form(g) == canonical_form(h)) == same
    assert isomorphic(g, h) == same


@settings(max_examples=100, deadline=None)
@given(graphs(6, 3))
def test_cycle_count_matches_oracle(g):
    assert generalized_cycle_count(g) == cycle_count([list(r) for r in g.mult])


@settings(max_examples=100, deadline=None)
@given(graphs(6, 1))
def test_cycle_rank_of_simple_graphs(g):
    simple = underlying_simply_laced(g)
    edges = sum(1 for i, j, _ in simple.edges())
    assert generalized_cycle_count(simple) == edges - g.n + 1
    assert underlying_simply_laced(simple) == simple


def test_enumerate_small_counts():
    assert len(enumerate_graphs(1, RigidityClass.SUPER_RIGID)) == 2
    two = enumerate_graphs(2, RigidityClass.SUPER_RIGID)
    loops = sorted((g[0, 0], g[1, 1]) for g in two)
    assert [sorted(p) for p in loops] == [[0, 0], [0, 1], [1, 1]]
    with pytest.raises(UnsupportedClass):
        enumerate_graphs(3, RigidityClass.NON_RIGID)
    with pytest.raises(SizeLimitExceeded):
        enumerate_graphs(7, RigidityClass.RIGID)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("cls,cycles", [(RigidityClass.SUPER_RIGID, 0), (RigidityClass.RIGID, 1)])
def test_enumerate_matches_scan(n, cls, cycles):
    got = {relabel_key([list(r) for r in g.mult]) for g in enumerate_graphs(n, cls)}
    assert got == scan_graphs(n, 4, cycles)


def test_enumerate_members_are_distinct():
    for n in range(1, 6):
        for cls, cycles in [(RigidityClass.SUPER_RIGID, 0), (RigidityClass.RIGID, 1)]:
            out = enumerate_graphs(n, cls)
            assert len({canonical_form(g) for g in out}) == len(out)
            assert all(g.is_connected() and generalized_cycle_count(g) == cycles for g in out)
            assert [canonical_form(g) for g in out] == sorted(canonical_form(g) for g in out)


def test_enumerate_workers_agree():
    assert enumerate_graphs(4, RigidityClass.RIGID, workers=2) == enumerate_graphs(4, RigidityClass.RIGID)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_matrix_scan_against_oracle(n):
    got = {relabel_key([list(r) for r in g.mult]) for g in iter_connected_graphs(n, 2)}
    slots = [(i, j) for i in range(n) for j in range(i, n)]
    want = set()
    for values in itertools.product(range(3), repeat=len(slots)):
        m = [[0] * n for _ in range(n)]
        for (i, j), v in zip(slots, values):
            m[i][j] = m[j][i] = v
        if connected(m):
            want.add(relabel_key(m))
    assert got == want


def test_generalized_tree_flags(triangle):
    assert is_generalized_tree(path(4, [0, 3]))
    assert not is_generalized_tree(triangle)
    assert not is_generalized_tree(MultiGraph.from_matrix([[0, 0], [0, 0]]))


def test_text_format():
    g = parse_text("n 3\n0 1 2\n# a comment\n2 2 1\n")
    assert g.mult == ((0, 2, 0), (2, 0, 0), (0, 0, 1))
    assert parse_text(to_text(g)) == g
    for bad, line in [("n x", 1), ("n 2\n0 5 1", 2), ("n 2\n1 0 1", 2), ("n 2\n0 1", 2), ("n 2\n0 1 1\n0 1 1", 3)]:
        with pytest.raises(ParseError) as exc:
            parse_text(bad)
        assert exc.value.line == line
    with pytest.raises(ParseError):
        parse_text("")


@settings(max_examples=60, deadline=None)
@given(graphs(6, 3, connected_only=False))
def test_formats_round_trip(g):
    assert parse_text(to_text(g)) == g
    assert from_json(to_json(g)) == g


def test_dot_export_repeats_parallel_edges():
    dot = to_dot(MultiGraph.from_edges(2, [(0, 1, 2)], {1: 3}))
    assert dot.count("0 -- 1;") == 2
    assert dot.count("1 -- 1;") == 3
