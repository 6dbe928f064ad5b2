import math
from fractions import Fraction

import numpy as np
import pytest

from helpers import cycle, looped_vertex, path, star
from oracles import leibniz_charpoly, numeric_eigen, numeric_nondegenerate
from qmk.algebraic import from_expression
from qmk.errors import DisconnectedGraph, NotAnEigenvalue, ZeroGraph
from qmk.fields import NumberField
from qmk.graph import MultiGraph, RigidityClass, enumerate_graphs, iter_connected_graphs
from qmk.linalg import matvec
from qmk.spectra import (
    char_poly,
    eigen_field,
    eigenvalues,
    frobenius_perron,
    is_nondegenerate,
    lambda_to_q,
    q_root_of_unity_order,
    rational,
    spectrum,
)


def mat(g):
    return [list(r) for r in g.mult]


def test_char_poly_examples(edge):
    assert char_poly(edge) == (1, 0, -1)
    assert char_poly(path(3, [0, 1])) == (1, -2, -1, 1)
    assert char_poly(path(4, [1])) == (1, -1, -3, 1, 1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_char_poly_against_leibniz(n):
    for g in iter_connected_graphs(n, 2):
        assert char_poly(g) == leibniz_charpoly(mat(g))


def test_spectrum_edge(edge):
    sp = spectrum(edge)
    assert [(r.value, r.multiplicity, r.nondegenerate) for r in sp.roots] == [
        (rational(-1), 1, True), (rational(1), 1, True)]
    assert sp.roots[0].witness == (1, -1)
    assert sp.roots[1].witness == (1, 1)


def test_spectrum_all_loops_3_path():
    sp = spectrum(path(3, [0, 1, 2]))
    flags = {float(r.value): r.nondegenerate for r in sp.roots}
    assert set(sp.nondegenerate_values()) == {from_expression("1+sqrt(2)"), from_expression("1-sqrt(2)")}
    assert flags[1.0] is False
    ok, w = is_nondegenerate(path(3, [0, 1, 2]), rational(1))
    assert (ok, w) == (False, None)


def test_spectrum_edge_with_loop():
    sp = spectrum(path(2, [0]))
    assert {r.value for r in sp.roots} == {from_expression("(1+sqrt(5))/2"), from_expression("(1-sqrt(5))/2")}
    assert all(r.nondegenerate for r in sp.roots)


def test_nondegenerate_examples(triangle, edge):
    assert is_nondegenerate(triangle, rational(2)) == (True, (1, 1, 1))
    assert is_nondegenerate(edge, rational(1))[0]
    with pytest.raises(NotAnEigenvalue):
        is_nondegenerate(edge, rational(2))
    with pytest.raises(DisconnectedGraph):
        spectrum(MultiGraph.from_matrix([[1, 0], [0, 1]]))


def test_frobenius_perron(edge, triangle):
    assert frobenius_perron(edge) == rational(1)
    assert frobenius_perron(triangle) == rational(2)
    assert frobenius_perron(looped_vertex(3)) == rational(3)
    with pytest.raises(ZeroGraph):
        frobenius_perron(MultiGraph.from_matrix([[0]]))


def test_lambda_to_q_examples():
    q, qi, excluded = lambda_to_q(rational(2))
    assert q == qi == rational(-1) and not excluded
    q, qi, _ = lambda_to_q(rational(1))
    assert q.min_poly == (1, 1, 1) and q != qi
    assert q_root_of_unity_order(q) == 3
    q, qi, excluded = lambda_to_q(rational(0))
    assert excluded and q.min_poly == (1, 0, 1)
    assert q_root_of_unity_order(rational(-1)) == 2
    # q + 1/q = (-1+sqrt(5))/2 = 2cos(2pi/5), so q is a fifth root of unity
    golden = lambda_to_q(-from_expression("(-1+sqrt(5))/2"))[0]
    assert abs(complex(golden) ** 5 - 1) < 1e-12
    assert q_root_of_unity_order(golden) == 5
    real_q = lambda_to_q(rational(-3))[0]
    assert real_q.is_real and q_root_of_unity_order(real_q) is None


@pytest.mark.parametrize("m,h", [(1, 5), (2, 5), (1, 7), (3, 7), (1, 12), (5, 12)])
def test_root_of_unity_order_of_chebyshev_points(m, h):
    lam = from_expression(f"2*cos({m}*pi/{h})")
    q, _, _ = lambda_to_q(lam)
    z = complex(q)
    want = next(k for k in range(1, 200) if abs(z ** k - 1) < 1e-9)
    assert q_root_of_unity_order(q) == want


def generalized_trees(max_n=5):
    for n in range(1, max_n + 1):
        yield from enumerate_graphs(n, RigidityClass.SUPER_RIGID)


def test_spectrum_invariants_over_generalized_trees():
    for g in generalized_trees(5):
        sp = spectrum(g)
        assert sum(r.multiplicity for r in sp.roots) == g.n
        # trace identity through the coefficient of x^(n-1)
        assert -sp.char_poly[1] == g.trace()
        assert any(r.nondegenerate for r in sp.roots) or g.is_zero()
        nums, _ = numeric_eigen(mat(g))
        for r in sp.roots:
            assert r.value.is_real
            close = [x for x in nums if abs(x - float(r.value)) < 1e-8]
            assert len(close) == r.multiplicity
            assert r.nondegenerate == numeric_nondegenerate(mat(g), float(r.value))
            if r.nondegenerate:
                assert r.multiplicity == 1
                field, x = eigen_field(r.value)
                a = [[field.coerce(v) for v in row] for row in mat(g)]
                assert matvec(a, list(r.witness)) == [x * w for w in r.witness]
                assert all(not field.is_zero(w) for w in r.witness)
                q, qi, _ = lambda_to_q(r.value)
                zq = complex(q)
                assert abs(abs(zq) - 1) < 1e-12 or abs(zq.imag) < 1e-12


@pytest.mark.parametrize("g", [path(4, [0, 2]), star([0, 2]), cycle(5), MultiGraph.from_edges(3, [(0, 1, 2), (1, 2)], [2])])
def test_lambda_q_recombination(g):
    for lam, _ in eigenvalues(g):
        q, qi, _ = lambda_to_q(lam)
        assert -(q + qi) == lam
        assert q * qi == rational(1)


def test_frobenius_perron_dominates():
    for g in iter_connected_graphs(3, 2):
        if g.is_zero():
            continue
        fp = frobenius_perron(g)
        assert all(fp >= lam for lam, _ in eigenvalues(g))
        ok, w = is_nondegenerate(g, fp)
        assert ok and all(float(x) > 0 for x in w)
        assert abs(float(fp) - max(np.linalg.eigvalsh(np.array(mat(g), dtype=float)))) < 1e-9


def test_spectrum_json():
    doc = spectrum(path(3, [0, 1, 2])).to_json()
    assert doc["char_poly"] == ["1", "-3", "1", "1"]
    assert [r["nondegenerate"] for r in doc["roots"]] == [True, False, True]
    K = NumberField(from_expression("1+sqrt(2)"))
    assert len(doc["roots"][2]["witness"][0]) == K.degree
    assert math.isclose(float(Fraction(doc["roots"][1]["value"]["min_poly"][1])), -1)
