import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from vxd.algebroid import AbelianBasis, SplitAlgebroid
from vxd.descriptors import load_algebra
from vxd.errors import DimensionError
from vxd.forms import Derivation, PForm, de_rham
from vxd.matrix import MatrixA
from vxd.suites import mor_suite, random_derivation, random_element, transition_suite
from vxd.transition import (MorphismDatum, alpha_trace, beta_trace, change_matrix,
                            curve_uniqueness, h_trace, mor_difference, morphism_eval,
                            three_form_between, transition_alpha, transition_beta, transition_h,
                            transition_h_values, transition_target)

A1 = load_algebra("A1")
A2 = load_algebra("A2")
A3 = load_algebra("A3")
T1 = load_algebra("T1")

A2_NAMES = sorted(A2.bases)
A3_NAMES = sorted(A3.bases)


def form(amb, p, pairs):
    return PForm.parse(amb, p, pairs)


# --- h ------------------------------------------------------------------------------


def test_h_for_triangular_change_matches_trace_formula():
    amb = A2.ambient
    b = AbelianBasis.coordinate(amb)
    bp = AbelianBasis.parse(amb, [["1", "-2*x"], ["0", "1"]])
    phi = change_matrix(bp, b)
    assert phi.to_strings() == [["1", "-2*x"], ["0", "1"]]
    vals = transition_h_values(bp, b)
    assert vals == [h_trace(phi, t) for t in bp.vectors]
    assert all(v.is_zero() for v in vals)


def test_h_nested_value():
    # frozen from the sympy oracle
    amb = A2.ambient
    vals = transition_h_values(A2.basis("nested"), A2.basis("coords"))
    assert vals[0] == form(amb, 1, [((0,), "4*x"), ((1,), "2")])
    assert vals[1] == form(amb, 1, [((0,), "-8*x^3 - 8*x*y + 2"), ((1,), "-4*x^2 - 4*y")])


def test_h_same_basis_is_zero():
    for name in A3_NAMES:
        b = A3.basis(name)
        assert all(v.is_zero() for v in transition_h_values(b, b))


def test_h_constant_change_is_zero():
    b = A3.basis("tower")
    amb = A3.ambient
    phi = MatrixA.parse(amb, [["1", "2", "0"], ["0", "1", "0"], ["-3", "0", "1"]])
    bp = AbelianBasis.from_matrix(phi * b.matrix_to_coords)
    assert change_matrix(bp, b) == phi
    assert all(v.is_zero() for v in transition_h_values(bp, b))


@given(st.sampled_from(list(itertools.permutations(A2_NAMES, 2))))
def test_h_trace_formula_a2(pair):
    bn, bo = (A2.basis(n) for n in pair)
    phi = change_matrix(bn, bo)
    assert transition_h_values(bn, bo) == [h_trace(phi, t) for t in bn.vectors]


@settings(max_examples=15)
@given(st.sampled_from(list(itertools.permutations(A3_NAMES, 2))))
def test_h_trace_formula_a3(pair):
    bn, bo = (A3.basis(n) for n in pair)
    phi = change_matrix(bn, bo)
    assert transition_h_values(bn, bo) == [h_trace(phi, t) for t in bn.vectors]


def test_transition_h_is_a_morphism():
    h = transition_h(A2.basis("nested"), A2.basis("mixed"))
    rep = mor_suite(h, "nested_mixed", seed=2, trials=4, degree=2)
    assert rep.ok, rep.render()


def test_perturbed_h_fails_second_axiom():
    h = transition_h(A2.basis("nested"), A2.basis("coords"))
    amb = A2.ambient
    vals = list(h.basis_values)
    vals[0] = vals[0] + form(amb, 1, [((0,), "1")])
    bad = MorphismDatum(h.source, h.target, vals, h.evaluation_basis)
    t, u = h.evaluation_basis.vectors
    assert not mor_difference(bad, 2, t, t, amb.one()).is_zero()
    assert mor_difference(h, 2, t, u, amb.one()).is_zero()


# --- alpha ----------------------------------------------------------------------------


def test_alpha_vanishes_below_three_variables():
    for bn, bo in itertools.permutations(A2_NAMES, 2):
        assert transition_alpha(A2.basis(bn), A2.basis(bo)).is_zero()


def test_alpha_shear_example_both_routes():
    amb = A3.ambient
    bn = AbelianBasis.from_coordinates(amb, ["x", "y + x^2", "z + x*y"])
    bo = AbelianBasis.coordinate(amb)
    alpha = transition_alpha(bn, bo)
    assert alpha == alpha_trace(change_matrix(bn, bo))
    assert de_rham(alpha).is_zero()


@settings(max_examples=15)
@given(st.sampled_from(list(itertools.permutations(A3_NAMES, 2))))
def test_alpha_routes_agree_a3(pair):
    bn, bo = (A3.basis(n) for n in pair)
    alpha = transition_alpha(bn, bo)
    assert alpha == alpha_trace(change_matrix(bn, bo))
    assert de_rham(alpha).is_zero()


# alpha between two non-coordinate bases; frozen after both routes and the
# sympy trace agreed
ALPHA_A3 = [
    (("nested", "shear"), "4*x"),
    (("shear_z", "tower"), "-12*x"),
    (("tower", "nested"), "48*x*z^2 + 12*x^2 - 24*x*y"),
]


@pytest.mark.parametrize("names,value", ALPHA_A3)
def test_alpha_nonzero_values(names, value):
    bn, bo = (A3.basis(n) for n in names)
    alpha = transition_alpha(bn, bo)
    assert alpha == form(A3.ambient, 3, [((0, 1, 2), value)])
    assert alpha == alpha_trace(change_matrix(bn, bo))
    assert transition_alpha(bo, bn) == -alpha


def test_alpha_vanishes_against_coordinates():
    coords = A3.basis("coords")
    for name in A3_NAMES:
        assert transition_alpha(A3.basis(name), coords).is_zero()


def test_alpha_trace_of_non_jacobian_change():
    # a unimodular product of elementary matrices, not the Jacobian of a chart
    amb = A3.ambient
    phi = MatrixA.parse(amb, [["x*y*z + 1", "y", "y*z"], ["x*z", "1", "z"], ["x", "0", "1"]])
    a = alpha_trace(phi)
    assert a == form(amb, 3, [((0, 1, 2), "1/2")])
    assert de_rham(a).is_zero()


def test_three_form_between_source_and_transition_target():
    bn, bo = A3.basis("tower"), A3.basis("coords")
    alpha = transition_alpha(bn, bo)
    target = transition_target(bn, bo, alpha)
    assert three_form_between(target, SplitAlgebroid(bo)) == alpha


# --- beta -----------------------------------------------------------------------------

# (from, via, to) -> h_{from,via} + h_{via,to} - h_{from,to}, frozen after the sympy
# oracle and the trace formula agreed on them
BETA_A2 = [
    (("shear", "nested", "coords"), "2"),
    (("mixed", "linear", "cubic"), "18*x*y"),
    (("cubic", "shear_y", "nested"), "16*x^3 - 2"),
    (("linear", "mixed", "shear"), "-6*y"),
    (("nested", "cubic", "mixed"), "48*x^3*y + 18*x*y - 6*x - 6*y"),
    (("coords", "nested", "shear_y"), "-16*x^3 + 2"),
]


@pytest.mark.parametrize("names,value", BETA_A2)
def test_beta_values(names, value):
    b2, b1, b0 = (A2.basis(n) for n in names)
    beta = transition_beta(b2, b1, b0)
    assert beta == form(A2.ambient, 2, [((0, 1), value)])
    assert beta == beta_trace(change_matrix(b1, b0), change_matrix(b2, b1))


def test_beta_telescopes_when_bases_repeat():
    b, b1 = A2.basis("nested"), A2.basis("cubic")
    assert transition_beta(b1, b1, b).is_zero()
    assert transition_beta(b1, b, b).is_zero()


def test_beta_constant_changes_vanish():
    amb = A2.ambient
    b0 = A2.basis("mixed")
    p1 = MatrixA.parse(amb, [["1", "3"], ["0", "1"]])
    p2 = MatrixA.parse(amb, [["2", "0"], ["1", "1"]])
    b1 = AbelianBasis.from_matrix(p1 * b0.matrix_to_coords)
    b2 = AbelianBasis.from_matrix(p2 * b1.matrix_to_coords)
    assert transition_beta(b2, b1, b0).is_zero()


def test_beta_in_three_variables():
    beta = transition_beta(A3.basis("shear"), A3.basis("twisted"), A3.basis("coords"))
    assert beta == form(A3.ambient, 2, [((0, 2), "1")])


@settings(max_examples=20)
@given(st.sampled_from(list(itertools.permutations(A2_NAMES, 3))))
def test_beta_trace_formula_random_triples(names):
    b2, b1, b0 = (A2.basis(n) for n in names)
    beta = transition_beta(b2, b1, b0)
    assert beta == beta_trace(change_matrix(b1, b0), change_matrix(b2, b1))
    h1 = transition_h(b1, b0)
    psi, phi1 = change_matrix(b2, b1), change_matrix(b1, b0)
    assert [morphism_eval(h1, t) for t in b2.vectors] == [h_trace(phi1, t, psi) for t in b2.vectors]


# --- curve case -------------------------------------------------------------------------


@pytest.mark.parametrize("spec,pair", [(A1, ("scaled", "coords")), (A1, ("shifted", "scaled")),
                                       (T1, ("euler", "coords")), (T1, ("inverse", "euler"))])
def test_curve_unique_morphism(spec, pair):
    bn, bo = spec.basis(pair[0]), spec.basis(pair[1])
    h = curve_uniqueness(bo, bn)
    assert h.target.twist.is_zero()
    rep = transition_suite(bn, bo, "curve", seed=1, trials=5, degree=3)
    assert rep.ok, rep.render()
    amb = spec.ambient
    rng = random.Random(0)
    t, u = random_derivation(amb, rng, 2), random_derivation(amb, rng, 2)
    for k in (1, 2, 3):
        assert mor_difference(h, k, t, u, random_element(amb, rng, 2)).is_zero()


def test_curve_uniqueness_needs_one_variable():
    with pytest.raises(DimensionError):
        curve_uniqueness(A2.basis("coords"), A2.basis("nested"))


def test_euler_basis_h_value():
    # b' = {x d/dx} over Q[x, 1/x]: <t', t'>_b = -1 gives h(t') = dx / (2x);
    # on d/dx = t'/x the Mor2 rule gives <d/dx, d/dx>_b' / 2 = -3 / (2 x^2)
    amb = T1.ambient
    vals = transition_h_values(T1.basis("euler"), T1.basis("coords"))
    assert vals == [form(amb, 1, [((0,), "1/(2*x)")])]
    assert morphism_eval(transition_h(T1.basis("euler"), T1.basis("coords")),
                         Derivation.coordinate(amb, 0)) == form(amb, 1, [((0,), "-3/(2*x^2)")])
