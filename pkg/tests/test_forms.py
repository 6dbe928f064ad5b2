import json
from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from helpers import path
from qmk.algebraic import from_expression
from qmk.errors import OutsideModuliImage
from qmk.fields import NumberField, RationalField
from qmk.forms import (
    BilinearFormPair,
    ModuleSolution,
    SelfPairing,
    is_valid,
    realize_pair_traces,
    realize_self_trace,
    self_trace_invariant,
    trace_invariant,
    verify_solution,
)
from qmk.linalg import determinant, matmul, transpose
from qmk.solver import fp_solution, solve_generalized_tree
from qmk.spectra import rational

F = RationalField()
Q = Fraction
small = st.fractions(-6, 6, max_denominator=5)


def invertible(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n).filter(
        lambda m: determinant(F, [[F.coerce(x) for x in r] for r in m]) != 0)


def test_trace_invariant_examples():
    x, y = trace_invariant(BilinearFormPair(1, ((Q(3),),), ((Q(5),),)))
    assert (x, y) == (Q(3, 5), Q(5, 3)) and x * y == 1
    assert trace_invariant(BilinearFormPair(2, ((1, 0), (0, 1)), ((2, 0), (0, Q(1, 2))))) == (Q(5, 2), Q(5, 2))
    eye = tuple(tuple(int(i == j) for j in range(4)) for i in range(4))
    assert trace_invariant(BilinearFormPair(4, eye, eye)) == (4, 4)


def test_self_trace_examples():
    assert self_trace_invariant(SelfPairing(1, ((Q(-7),),))) == 1
    assert self_trace_invariant(SelfPairing(3, ((1, 2, 0), (2, 5, 0), (0, 0, 1)))) == 3
    mu = Q(3)
    s = realize_self_trace(2, mu + 1 / mu)
    op = s.operator()
    eig = sympy.Matrix([[sympy.Rational(str(v)) for v in row] for row in op]).eigenvals()
    assert set(eig) == {sympy.Integer(3), sympy.Rational(1, 3)}


def test_realize_pair_examples():
    p = realize_pair_traces(1, Q(2), Q(1, 2))
    assert (p.e_fwd, p.e_bwd) == (((2,),), ((1,),))
    with pytest.raises(OutsideModuliImage):
        realize_pair_traces(1, Q(2), Q(1))
    p = realize_pair_traces(2, 0, 0)
    assert trace_invariant(p) == (0, 0)
    with pytest.raises(OutsideModuliImage):
        realize_pair_traces(2, 0, 1)


def test_realize_self_examples():
    assert realize_self_trace(1, 1).e == ((1,),)
    with pytest.raises(OutsideModuliImage):
        realize_self_trace(1, 0)
    s = realize_self_trace(2, 3)
    assert self_trace_invariant(s) == 3
    golden_sq = from_expression("(3+sqrt(5))/2")
    z = sympy.Symbol("z")
    op = sympy.Matrix([[sympy.Rational(str(v)) for v in row] for row in s.operator()])
    assert sympy.Poly(op.charpoly(z).as_expr(), z).all_coeffs() == [1, -3, 1]
    assert abs(float(golden_sq) + 1 / float(golden_sq) - 3) < 1e-14


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 5), small, small)
def test_pair_round_trip(a, x, y):
    if a == 1:
        assume(x != 0)
        y = 1 / x
    if a == 2:
        assume((x == 0) == (y == 0))
    p = realize_pair_traces(a, x, y)
    assert trace_invariant(p) == (x, y)
    assert determinant(F, [list(r) for r in p.e_fwd]) != 0
    assert determinant(F, [list(r) for r in p.e_bwd]) != 0


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 5), small)
def test_self_round_trip_and_symmetry(a, t):
    s = realize_self_trace(a, t)
    assert self_trace_invariant(s) == t
    op = s.operator()
    z = sympy.Symbol("z")
    m = sympy.Matrix([[sympy.Rational(str(v)) for v in row] for row in op])
    cp = m.charpoly(z).as_expr()
    cp_inv = m.inv().charpoly(z).as_expr()
    assert sympy.expand(cp - cp_inv) == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda a: st.tuples(st.just(a), invertible(a), invertible(a), invertible(a), invertible(a))))
def test_gauge_invariance(data):
    a, e1, e2, P, Qm = data
    p = BilinearFormPair(a, e1, e2)
    moved = BilinearFormPair(a, matmul(matmul(transpose(P), e1), Qm), matmul(matmul(transpose(Qm), e2), P))
    assert trace_invariant(p) == trace_invariant(moved)
    s = SelfPairing(a, e1)
    assert self_trace_invariant(s) == self_trace_invariant(SelfPairing(a, matmul(matmul(transpose(P), e1), P)))


def test_verify_solution_examples(edge, triangle):
    one = ((Q(1),),)
    sol = ModuleSolution(edge, Q(1), {(0, 1): BilinearFormPair(1, one, one)}, {}, F)
    assert verify_solution(sol) == [0, 0]
    sol = ModuleSolution(triangle, Q(2), {e: BilinearFormPair(1, one, one) for e in [(0, 1), (0, 2), (1, 2)]}, {}, F)
    assert verify_solution(sol) == [0, 0, 0]
    pairs = dict(sol.pairs)
    pairs[0, 1] = BilinearFormPair(1, ((Q(3),),), one)
    res = verify_solution(ModuleSolution(triangle, Q(2), pairs, {}, F))
    assert res[0] != 0 and res[1] != 0 and res[2] == 0


def test_verify_solution_is_gauge_invariant():
    sol = fp_solution(path(3, [0]))
    field = sol.field
    P = [[field.coerce(2), field.coerce(1)], [field.zero, field.one]]
    pairs = {}
    for key, p in sol.pairs.items():
        if p.dim == 1:
            c = field.coerce(5)
            pairs[key] = BilinearFormPair(1, ((p.e_fwd[0][0] * c,),), ((p.e_bwd[0][0] * c,),))
        else:
            pairs[key] = BilinearFormPair(p.dim, matmul(matmul(transpose(P), p.e_fwd), P), matmul(matmul(transpose(P), p.e_bwd), P))
    moved = ModuleSolution(sol.graph, sol.lam, pairs, sol.selfs, field)
    assert verify_solution(moved) == verify_solution(sol)
    assert is_valid(moved)


@pytest.mark.parametrize("make", [
    lambda: fp_solution(path(3, [0, 1])),
    lambda: fp_solution(path(2, [0, 0, 0])),
    lambda: solve_generalized_tree(path(2), rational(-1)),
])
def test_solution_json_round_trip(make):
    sol = make()
    doc = json.loads(json.dumps(sol.to_json()))
    back = ModuleSolution.from_json(doc)
    assert back.field == sol.field or isinstance(back.field, type(sol.field))
    assert back.pairs == sol.pairs and back.selfs == sol.selfs and back.lam == sol.lam
    assert back.graph == sol.graph
    assert is_valid(back)


def test_number_field_forms():
    lam = from_expression("(1+sqrt(5))/2")
    sol = solve_generalized_tree(path(2, [0]), lam)
    assert isinstance(sol.field, NumberField)
    assert all(r == sol.field.zero for r in verify_solution(sol))
