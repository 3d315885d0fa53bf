"""Exact split vertex algebroids over localized polynomial rings.

Layers:

* ``poly``, ``ratfunc``, ``expr``, ``matrix``: exact rational arithmetic in a
  localization of Q[x_1..x_n].
* ``forms``: derivations, differential forms, de Rham and contraction.
* ``algebroid``, ``transition``: split algebroids of abelian bases, their
  axioms, morphisms, twists and basis-change data.
* ``cech``: Cech cochains over affine covers, the trace cocycles and the
  gerbe cocycle of chart bases.
* ``descriptors``, ``suites``, ``cli``: JSON input, seeded suites, and the
  ``vxd`` command.
"""
from .algebroid import (AbelianBasis, AlgebroidElement, SplitAlgebroid, alg_difference,
                        algscind_difference, basis_c, basis_pairing, c_eval, check_alg,
                        check_algscind, gamma, op_minus1, op_one, op_zero, pairing_eval)
from .cech import (CechCochain, CoverDescriptor, GaugeCochain, TransitionCocycle, cech_d,
                   gauge_identity_defect, gerbe_cocycle, pacs, pacs_duality_check, pacs_gauge,
                   pacs_identities, pacs_p2, pacs_p3, total_d, transitions_from_bases,
                   verify_trivialization)
from .expr import parse_expr
from .forms import Derivation, PForm, contract, de_rham, lie_bracket, lie_derivative, wedge
from .matrix import MatrixA, mat_det, mat_inverse
from .poly import Poly, PolyRing
from .ratfunc import AlgebraDescriptor, RatFunc
from .report import CheckResult, Report
from .transition import (MorphismDatum, alpha_trace, beta_trace, check_mor, h_trace,
                         morphism_eval, three_form_between, torsor_add, transition_alpha,
                         transition_beta, transition_h)

__version__ = "0.1.0"

__all__ = [
    "AbelianBasis", "AlgebroidElement", "SplitAlgebroid", "alg_difference",
    "algscind_difference", "basis_c", "basis_pairing", "c_eval", "check_alg",
    "check_algscind", "gamma", "op_minus1", "op_one", "op_zero", "pairing_eval",
    "CechCochain", "CoverDescriptor", "GaugeCochain", "TransitionCocycle", "cech_d",
    "gauge_identity_defect", "gerbe_cocycle", "pacs", "pacs_duality_check", "pacs_gauge",
    "pacs_identities", "pacs_p2", "pacs_p3", "total_d", "transitions_from_bases",
    "verify_trivialization", "parse_expr", "Derivation", "PForm", "contract", "de_rham",
    "lie_bracket", "lie_derivative", "wedge", "MatrixA", "mat_det", "mat_inverse", "Poly",
    "PolyRing", "AlgebraDescriptor", "RatFunc", "CheckResult", "Report", "MorphismDatum",
    "alpha_trace", "beta_trace", "check_mor", "h_trace", "morphism_eval",
    "three_form_between", "torsor_add", "transition_alpha", "transition_beta",
    "transition_h",
]
