import math

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from helpers import cycle, path
from oracles import catalan, compose_by_gluing, noncrossing_matchings
from qmk.algebraic import from_expression
from qmk.errors import ArityMismatch, InvalidSolution, UndefinableProjector
from qmk.fields import ComplexField, NumberField
from qmk.forms import BilinearFormPair, ModuleSolution
from qmk.linalg import SparseMatrix
from qmk.solver import fp_solution, solve_generalized_tree
from qmk.spectra import rational
from qmk.tl import (
    PlanarDiagram,
    TLElement,
    all_diagrams,
    build_graded_rep,
    chebyshev_values,
    compose,
    compose_diagrams,
    element_from_records,
    from_bracket,
    generator,
    generator_diagram,
    generic_delta,
    identity,
    identity_diagram,
    jones_wenzl,
    n_star,
    rep_of_diagram,
    rep_of_element,
    tensor,
)

K, D = generic_delta()


def equal(field, a: SparseMatrix, b: SparseMatrix) -> bool:
    return (a - b).is_zero(field)


@pytest.mark.parametrize("k,l", [(0, 2), (1, 1), (2, 2), (3, 1), (3, 3), (2, 4), (4, 4), (5, 5), (6, 6)])
def test_diagrams_match_brute_force_matchings(k, l):
    got = {d.pairs for d in all_diagrams(k, l)}
    assert got == noncrossing_matchings(k + l)


@pytest.mark.parametrize("k", range(9))
def test_catalan_counts(k):
    assert len(all_diagrams(k, k)) == catalan(k)


def test_diagram_validation():
    with pytest.raises(ValueError):
        PlanarDiagram(2, 2, ((0, 2), (1, 3)))
    with pytest.raises(ValueError):
        PlanarDiagram(1, 2, ((0, 1),))
    d = generator_diagram(3, 2)
    assert from_bracket(3, 3, d.bracket()) == d
    assert identity_diagram(3).through_strands() == 3
    assert d.through_strands() == 1


def test_tl_relations_generic():
    for n in range(2, 6):
        for i in range(1, n):
            e = generator(n, i, D)
            assert compose(e, e) == e.scale(D)
            if i + 1 < n:
                f = generator(n, i + 1, D)
                assert compose(e, compose(f, e)) == e
                assert compose(f, compose(e, f)) == f
            for j in range(i + 2, n):
                f = generator(n, j, D)
                assert compose(e, f) == compose(f, e)
        assert compose(identity(n, D), generator(n, 1, D)) == generator(n, 1, D)


def test_arity_mismatch():
    with pytest.raises(ArityMismatch):
        compose(generator(3, 1, D), generator(2, 1, D))
    with pytest.raises(ArityMismatch):
        generator(3, 1, D) + generator(2, 1, D)


@st.composite
def diagram_pairs(draw, max_total=8, max_middle=6):
    k = draw(st.integers(0, max_total))
    l = draw(st.integers(0, max_total - k))
    m = draw(st.integers(0, max_middle).filter(lambda m: (k + m) % 2 == 0 and (m + l) % 2 == 0))
    lower = draw(st.sampled_from(all_diagrams(k, m)))
    upper = draw(st.sampled_from(all_diagrams(m, l)))
    return upper, lower


@settings(max_examples=300, deadline=None)
@given(diagram_pairs())
def test_composition_matches_gluing(pair):
    upper, lower = pair
    d, loops = compose_diagrams(upper, lower)
    want_pairs, want_loops = compose_by_gluing((upper.k, upper.l, upper.pairs), (lower.k, lower.l, lower.pairs))
    assert (d.pairs, loops) == (want_pairs, want_loops)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4))
def test_tensor_of_identities(a, b):
    assert tensor(identity(a, D), identity(b, D)) == identity(a + b, D)


def test_n_star():
    assert [n_star(10), n_star(7), n_star(3)] == [5, 7, 3]
    with pytest.raises(ValueError):
        n_star(2)


def test_chebyshev_values():
    assert chebyshev_values(2, 6) == [1, 2, 3, 4, 5, 6]
    assert chebyshev_values(1, 7) == [1, 1, 0, -1, -1, 0, 1]


def test_small_projectors():
    assert jones_wenzl(1, D) == identity(1, D)
    f2 = jones_wenzl(2, D)
    assert f2 == identity(2, D) - generator(2, 1, D).scale(1 / D)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_projector_properties(n):
    f = jones_wenzl(n, D)
    assert compose(f, f) == f
    assert f.coefficient(identity_diagram(n)) == 1
    zero = TLElement(n, n, D)
    for i in range(1, n):
        e = generator(n, i, D)
        assert compose(e, f) == zero
        assert compose(f, e) == zero


def test_projector_at_a_root_of_unity():
    # q of order 10: delta = -q - 1/q = -2cos(pi/5); f_4 exists, f_5 does not
    lam = from_expression("-2*cos(pi/5)")
    field = NumberField(lam)
    delta = field.gen
    f4 = jones_wenzl(4, delta)
    assert compose(f4, f4) == f4
    with pytest.raises(UndefinableProjector):
        jones_wenzl(5, delta)


def test_records_round_trip():
    f = jones_wenzl(3, D)
    back = element_from_records(f.records(), D, parse=lambda s: K.from_expr(sympy.sympify(s)))
    assert back == f


# graded representations


@pytest.fixture(scope="module")
def reps():
    return {
        "A2": build_graded_rep(solve_generalized_tree(path(2), rational(1))),
        "triangle": build_graded_rep(fp_solution(cycle(3))),
        "A3": build_graded_rep(solve_generalized_tree(path(3), from_expression("sqrt(2)"))),
        "loops": build_graded_rep(fp_solution(path(2, [0, 0, 1]))),
        "A3-float": build_graded_rep(solve_generalized_tree(path(3), math.sqrt(2), field=ComplexField())),
    }


@pytest.mark.parametrize("name", ["A2", "triangle", "A3", "loops"])
def test_loop_value_and_identity(reps, name):
    rep = reps[name]
    field = rep.field
    cup = PlanarDiagram(0, 2, ((0, 1),))
    cap = PlanarDiagram(2, 0, ((0, 1),))
    loop = rep_of_diagram(rep, cap) @ rep_of_diagram(rep, cup)
    assert equal(field, loop, SparseMatrix.identity(field, rep.graph.n).scaled(rep.delta))
    for k in range(4):
        assert equal(field, rep_of_diagram(rep, identity_diagram(k)), SparseMatrix.identity(field, len(rep.basis(k))))


@pytest.mark.parametrize("name", ["A2", "triangle", "A3", "loops", "A3-float"])
def test_tl_relations_as_matrices(reps, name):
    rep = reps[name]
    field = rep.field
    for n in range(2, 5):
        es = [rep_of_diagram(rep, generator_diagram(n, i)) for i in range(1, n)]
        for i, e in enumerate(es):
            assert equal(field, e @ e, e.scaled(rep.delta))
            if i + 1 < len(es):
                assert equal(field, e @ es[i + 1] @ e, e)
            for f in es[i + 2:]:
                assert equal(field, e @ f, f @ e)


def test_projector_image_is_idempotent(reps):
    rep = reps["triangle"]
    f = jones_wenzl(3, rep.field.coerce(rep.delta))
    m = rep_of_element(rep, f)
    assert equal(rep.field, m @ m, m)


@pytest.mark.parametrize("name", ["triangle", "A3", "loops", "A3-float"])
def test_functoriality(reps, name):
    rep = reps[name]
    field = rep.field

    @settings(max_examples=40, deadline=None)
    @given(diagram_pairs(max_total=6, max_middle=4))
    def check(pair):
        upper, lower = pair
        a = TLElement.diagram(upper, rep.delta)
        b = TLElement.diagram(lower, rep.delta)
        lhs = rep_of_element(rep, compose(a, b))
        rhs = rep_of_element(rep, a) @ rep_of_element(rep, b)
        if field.exact:
            assert equal(field, lhs, rhs)
        else:
            assert (lhs - rhs).max_abs() < 1e-10

    check()


def test_corrupted_solution_is_rejected():
    sol = solve_generalized_tree(path(2), rational(1))
    pairs = {(0, 1): BilinearFormPair(1, ((3,),), ((1,),))}
    with pytest.raises(InvalidSolution):
        build_graded_rep(ModuleSolution(sol.graph, sol.lam, pairs, {}, sol.field))
