import random

import pytest
from hypothesis import given, strategies as st

from vxd.errors import DegreeError
from vxd.forms import (Derivation, PForm, contract, de_rham, differential, lie_bracket,
                       lie_derivative, one_form_from_functional, pairing, pairings, wedge)
from vxd.poly import PolyRing
from vxd.ratfunc import AlgebraDescriptor
from vxd.suites import random_derivation, random_element, random_form

R3 = PolyRing(["x", "y", "z"])
A3 = AlgebraDescriptor(R3)
A3loc = AlgebraDescriptor(R3, [R3.gen(0), R3.gen(1) + R3.one()])
A2 = AlgebraDescriptor(PolyRing(["x", "y"]))

seeds = st.integers(0, 10_000)
ambients = st.sampled_from([A3, A3loc])


def F(amb, p, pairs):
    return PForm.parse(amb, p, pairs)


def D(amb, exprs):
    return Derivation.parse(amb, exprs)


# --- examples -------------------------------------------------------------------


def test_de_rham_examples():
    assert differential(A2.parse("x^2")) == F(A2, 1, [((0,), "2*x")])
    assert de_rham(F(A2, 1, [((1,), "x")])) == F(A2, 2, [((0, 1), "1")])
    assert de_rham(F(A2, 1, [((0,), "y"), ((1,), "x")])).is_zero()


def test_wedge_examples():
    dx, dy = F(A2, 1, [((0,), "1")]), F(A2, 1, [((1,), "1")])
    assert wedge(dx, dy) == F(A2, 2, [((0, 1), "1")])
    assert wedge(dy, dx) == -wedge(dx, dy)
    assert wedge(dx, dx).is_zero()
    assert wedge(PForm.function(A2.parse("x")), dy) == F(A2, 1, [((1,), "x")])


def test_contract_and_pairing_examples():
    w = F(A2, 2, [((0, 1), "x")])
    assert contract(Derivation.coordinate(A2, 0), w) == F(A2, 1, [((1,), "x")])
    assert contract(Derivation.coordinate(A2, 1), w) == F(A2, 1, [((0,), "-x")])
    assert pairing(D(A2, ["y", "1"]), F(A2, 1, [((0,), "x"), ((1,), "2")])) == A2.parse("x*y + 2")
    e = [Derivation.coordinate(A2, i) for i in range(2)]
    assert w.evaluate(e) == A2.parse("x")


def test_bracket_example():
    assert lie_bracket(D(A2, ["0", "x"]), D(A2, ["y", "0"])) == D(A2, ["x", "-y"])


def test_lie_derivative_examples():
    assert lie_derivative(D(A2, ["x", "0"]), F(A2, 1, [((0,), "1")])) == F(A2, 1, [((0,), "1")])
    f = A2.parse("x*y")
    assert lie_derivative(D(A2, ["1", "1"]), PForm.function(f)) == PForm.function(A2.parse("x + y"))


def test_one_form_from_functional():
    vals = [A2.parse("x"), A2.parse("y^2 - 1")]
    w = one_form_from_functional(A2, vals)
    assert pairings(w) == vals


def test_degree_errors():
    with pytest.raises(DegreeError):
        PForm(A2, 5)
    with pytest.raises(DegreeError):
        contract(Derivation.coordinate(A2, 0), PForm.function(A2.one()))
    with pytest.raises(DegreeError):
        pairing(Derivation.coordinate(A2, 0), F(A2, 2, [((0, 1), "1")]))
    with pytest.raises(DegreeError):
        F(A2, 1, [((0, 1), "1")])


def test_wedge_above_dimension_is_zero():
    dx = F(A2, 1, [((0,), "1")])
    w = F(A2, 2, [((0, 1), "1")])
    assert wedge(dx, w).is_zero() and wedge(dx, w).degree == 3


def test_print_form():
    assert str(F(A2, 2, [((0, 1), "x + 1")])) == "(x + 1)*dx^dy"
    assert str(PForm.zero(A2, 1)) == "0"


# --- invariants ------------------------------------------------------------------


def _rng(seed):
    return random.Random(seed)


@given(seeds, ambients, st.integers(0, 1))
def test_d_squared_zero(seed, amb, p):
    w = random_form(amb, _rng(seed), 2, p)
    assert de_rham(de_rham(w)).is_zero()


@given(seeds, ambients, st.integers(0, 2), st.integers(0, 1))
def test_graded_leibniz_d(seed, amb, p, q):
    rng = _rng(seed)
    a, b = random_form(amb, rng, 2, p), random_form(amb, rng, 2, q)
    if p + q >= 3:
        return
    lhs = de_rham(wedge(a, b))
    rhs = wedge(de_rham(a), b) + wedge(a, de_rham(b)).scale(-1 if p % 2 else 1)
    assert lhs == rhs


@given(seeds, ambients, st.integers(1, 2), st.integers(0, 1))
def test_graded_leibniz_contract(seed, amb, p, q):
    rng = _rng(seed)
    t = random_derivation(amb, rng, 2)
    a, b = random_form(amb, rng, 2, p), random_form(amb, rng, 2, q)
    lhs = contract(t, wedge(a, b))
    rhs = wedge(contract(t, a), b)
    if q:
        rhs = rhs + wedge(a, contract(t, b)).scale(-1 if p % 2 else 1)
    assert lhs == rhs


@given(seeds, ambients)
def test_jacobi(seed, amb):
    rng = _rng(seed)
    t, u, v = (random_derivation(amb, rng, 2) for _ in range(3))
    s = (lie_bracket(t, lie_bracket(u, v)) + lie_bracket(u, lie_bracket(v, t))
         + lie_bracket(v, lie_bracket(t, u)))
    assert s.is_zero()


@given(seeds, ambients, st.integers(0, 2))
def test_lie_derivative_commutes_with_d(seed, amb, p):
    rng = _rng(seed)
    t, w = random_derivation(amb, rng, 2), random_form(amb, rng, 2, p)
    assert de_rham(lie_derivative(t, w)) == lie_derivative(t, de_rham(w))


@given(seeds, ambients, st.integers(1, 2))
def test_lie_contract_commutator(seed, amb, p):
    rng = _rng(seed)
    t, u = random_derivation(amb, rng, 2), random_derivation(amb, rng, 2)
    w = random_form(amb, rng, 2, p)
    lhs = lie_derivative(t, contract(u, w)) - contract(u, lie_derivative(t, w))
    assert lhs == contract(lie_bracket(t, u), w)


@given(seeds, ambients)
def test_contract_twice_is_zero(seed, amb):
    rng = _rng(seed)
    t, w = random_derivation(amb, rng, 2), random_form(amb, rng, 2, 2)
    assert contract(t, contract(t, w)).is_zero()


@given(seeds, ambients)
def test_pairing_nondegenerate(seed, amb):
    rng = _rng(seed)
    w = random_form(amb, rng, 2, 1)
    assert one_form_from_functional(amb, pairings(w)) == w
    t = random_derivation(amb, rng, 2)
    f = random_element(amb, rng, 2)
    assert pairing(t, differential(f)) == t(f)
