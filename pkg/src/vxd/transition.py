"""Morphisms of split algebroids, the torsor action, and basis-change transitions.

A morphism ``B -> B'`` is a k-linear map ``h: T -> Omega``.  It is stored by
its values on an evaluation basis and extended to arbitrary derivations by
the rule

    <s, h(a t)> = a <s, h(t)> + <a t, s> - a <t, s> - <a t, s>' + a <s, t>'

(unprimed pairing on the source, primed on the target), applied termwise
after decomposing in the evaluation basis.

Operators vs forms: a twist ``w`` acts on two derivations through
``iota(w)(t, u) = i_u i_t w``, the transition 3-form alpha as ``i_t i_u alpha``,
and a 2-form ``e`` as the operator ``t -> i_t e``.
"""
from __future__ import annotations

from typing import List, Sequence

from gmpy2 import mpq

from .algebroid import (AbelianBasis, SplitAlgebroid, basis_c, basis_pairing, c_eval, iota,
                        pairing_eval)
from .errors import (AmbientMismatchError, DegreeError, DimensionError, NotClosedError,
                     PairingMismatchError, VxdError)
from .forms import (Derivation, PForm, contract, de_rham, differential, fm_chain, fm_trace,
                    lie_bracket, lie_derivative, matrix_derivative, matrix_differential,
                    one_form_from_functional, pairing)
from .matrix import MatrixA, mat_inverse
from .ratfunc import AlgebraDescriptor, RatFunc
from .report import CheckResult


# ---------------------------------------------------------------------------
# forms <-> operators


def form3_from_operator(amb: AlgebraDescriptor, op) -> PForm:
    """The 3-form w with iota(w)(t, u) = op(t, u), i.e. w(s, t, u) = <s, op(t, u)>."""
    if amb.n < 3:
        return PForm.zero(amb, 3)
    e = [Derivation.coordinate(amb, i) for i in range(amb.n)]
    terms = {}
    for i in range(amb.n):
        for j in range(i + 1, amb.n):
            for k in range(j + 1, amb.n):
                terms[(i, j, k)] = pairing(e[i], op(e[j], e[k]))
    return PForm(amb, 3, terms)


def form2_from_operator(amb: AlgebraDescriptor, op) -> PForm:
    """The 2-form e with i_t e = op(t) for coordinate derivations."""
    e = [Derivation.coordinate(amb, i) for i in range(amb.n)]
    terms = {}
    for i in range(amb.n):
        for j in range(i + 1, amb.n):
            # (i_{e_j} e) paired with e_i is e(e_j, e_i) = -e(e_i, e_j)
            terms[(i, j)] = -pairing(e[i], op(e[j]))
    return PForm(amb, 2, terms)


def operator_from_form2(eta: PForm):
    return lambda t: contract(t, eta)


# ---------------------------------------------------------------------------
# data types


class MorphismDatum:
    """A morphism source -> target given by its values on ``evaluation_basis``."""

    __slots__ = ("source", "target", "basis_values", "evaluation_basis")

    def __init__(self, source: SplitAlgebroid, target: SplitAlgebroid,
                 basis_values: Sequence[PForm], evaluation_basis: AbelianBasis):
        if len(basis_values) != len(evaluation_basis):
            raise ValueError("one value per evaluation-basis vector is required")
        for w in basis_values:
            if w.degree != 1:
                raise DegreeError("morphism values must be 1-forms")
        self.source = source
        self.target = target
        self.basis_values = tuple(basis_values)
        self.evaluation_basis = evaluation_basis

    @classmethod
    def identity(cls, B: SplitAlgebroid) -> "MorphismDatum":
        zero = PForm.zero(B.ambient, 1)
        return cls(B, B, [zero] * B.ambient.n, B.basis)

    def __repr__(self) -> str:
        vals = ", ".join(str(v) for v in self.basis_values)
        return f"MorphismDatum([{vals}])"


def _defect(src: SplitAlgebroid, dst: SplitAlgebroid, a: RatFunc, t: Derivation, s: Derivation) -> RatFunc:
    """<a t, s> - a <t, s> - <a t, s>' + a <s, t>'; A-linear in s."""
    at = t.scale(a)
    return (pairing_eval(src, at, s) - a * pairing_eval(src, t, s)
            - pairing_eval(dst, at, s) + a * pairing_eval(dst, s, t))


def morphism_eval(h: MorphismDatum, t: Derivation) -> PForm:
    """Value of the morphism operator on an arbitrary derivation."""
    amb = h.source.ambient
    if t.ambient.ring != amb.ring:
        raise AmbientMismatchError("derivation over a different algebra")
    coords = [Derivation.coordinate(amb, k) for k in range(amb.n)]
    out = PForm.zero(amb, 1)
    for a, tj, hj in zip(h.evaluation_basis.decompose(t), h.evaluation_basis.vectors, h.basis_values):
        if not a:
            continue
        if a.is_constant():
            out = out + hj.scale(a)
            continue
        vals = [a * pairing(s, hj) + _defect(h.source, h.target, a, tj, s) for s in coords]
        out = out + one_form_from_functional(amb, vals)
    return out


def mor_difference(h: MorphismDatum, k: int, t: Derivation, u: Derivation, a: RatFunc):
    """Left minus right side of morphism axiom k; zero for a genuine morphism."""
    src, dst = h.source, h.target
    H = lambda x: morphism_eval(h, x)  # noqa: E731
    if k == 1:
        at = t.scale(a)
        lhs = pairing(u, H(at)) - pairing_eval(src, at, u) + pairing_eval(dst, at, u)
        rhs = a * (pairing(u, H(t)) - pairing_eval(src, t, u) + pairing_eval(dst, u, t))
        return lhs - rhs
    if k == 2:
        lhs = pairing_eval(src, t, u) - pairing_eval(dst, t, u)
        return lhs - pairing(t, H(u)) - pairing(u, H(t))
    if k == 3:
        ht, hu = H(t), H(u)
        lhs = c_eval(src, t, u) - c_eval(dst, t, u)
        pot = (pairing(t, hu) - pairing(u, ht)).scale(mpq(1, 2))
        rhs = (lie_derivative(u, ht) - lie_derivative(t, hu) + H(lie_bracket(t, u))
               + differential(pot))
        return lhs - rhs
    raise ValueError("morphism axioms are numbered 1..3")


def check_mor(h: MorphismDatum, k: int, t: Derivation, u: Derivation, a: RatFunc,
              check_id: str | None = None) -> CheckResult:
    return CheckResult.from_difference(check_id or f"mor{k}", mor_difference(h, k, t, u, a))


def morphism_compose(f: MorphismDatum, g: MorphismDatum) -> MorphismDatum:
    """f after g, i.e. source(g) -> target(f); operators add."""
    if not _same_algebroid(g.target, f.source):
        raise VxdError("endpoint mismatch: target of g is not the source of f")
    basis = g.evaluation_basis
    vals = [morphism_eval(f, t) + gv for t, gv in zip(basis.vectors, g.basis_values)]
    return MorphismDatum(g.source, f.target, vals, basis)


def morphism_negate(f: MorphismDatum) -> MorphismDatum:
    """The inverse morphism target -> source, with operator -h."""
    return MorphismDatum(f.target, f.source, [-v for v in f.basis_values], f.evaluation_basis)


def _same_algebroid(a: SplitAlgebroid, b: SplitAlgebroid) -> bool:
    if a is b:
        return True
    if a.ambient.ring != b.ambient.ring or a.twist != b.twist and a.basis == b.basis:
        return False
    if a.basis == b.basis:
        return a.twist == b.twist
    # different presentations: equal pairings, then c agrees as soon as it
    # agrees on coordinate pairs
    if not _same_pairing(a, b):
        return False
    amb = a.ambient
    e = [Derivation.coordinate(amb, i) for i in range(amb.n)]
    for i in range(amb.n):
        for j in range(i + 1, amb.n):
            if c_eval(a, e[i], e[j]) != c_eval(b, e[i], e[j]):
                return False
    return True


def eta_of(h: MorphismDatum) -> PForm:
    """The 2-form attached to a morphism between twists of one algebroid."""
    return form2_from_operator(h.source.ambient, lambda t: morphism_eval(h, t))


def morphism_from_eta(source: SplitAlgebroid, target: SplitAlgebroid, eta: PForm) -> MorphismDatum:
    """The morphism with operator t -> i_t eta (source and target share a pairing)."""
    basis = source.basis
    return MorphismDatum(source, target, [contract(t, eta) for t in basis.vectors], basis)


# ---------------------------------------------------------------------------
# torsor action


def torsor_add(B: SplitAlgebroid, w: PForm) -> SplitAlgebroid:
    """B twisted by a closed 3-form: same pairing, c shifted by iota(w)."""
    if w.degree != 3:
        raise DegreeError("torsor action needs a 3-form")
    if w.ambient.n >= 4 and not de_rham(w).is_zero():
        raise NotClosedError(f"{w} is not closed")
    return SplitAlgebroid(B.basis, B.twist + w)


def _same_pairing(B: SplitAlgebroid, B2: SplitAlgebroid) -> bool:
    """Equality of the two pairings as functions of all derivations.

    The difference of two pairings is a bidifferential operator of total
    order at most 2 in the coefficient functions, so it vanishes once it
    vanishes on m d/dx_i, m' d/dx_j for monomials m, m' of total degree <= 2.
    """
    if B.basis == B2.basis:
        return True
    amb = B.ambient
    n = amb.n
    xs = amb.gens()
    monos = [(0, amb.one())] + [(1, x) for x in xs]
    monos += [(2, xs[i] * xs[j]) for i in range(n) for j in range(i, n)]
    e = [Derivation.coordinate(amb, i) for i in range(n)]
    for i in range(n):
        for j in range(i, n):
            for da, a in monos:
                for db, b in monos:
                    if da + db > 2:
                        continue
                    t, u = e[i].scale(a), e[j].scale(b)
                    if pairing_eval(B, t, u) != pairing_eval(B2, t, u):
                        return False
    return True


def three_form_between(B: SplitAlgebroid, B2: SplitAlgebroid, check_antisymmetry: bool = True) -> PForm:
    """The closed 3-form w with B = B2 twisted by w."""
    amb = B.ambient
    e = [Derivation.coordinate(amb, i) for i in range(amb.n)]
    if not _same_pairing(B, B2):
        raise PairingMismatchError("algebroids have different pairings")
    op = lambda t, u: c_eval(B, t, u) - c_eval(B2, t, u)  # noqa: E731
    w = form3_from_operator(amb, op)
    if check_antisymmetry:
        for j in range(amb.n):
            for k in range(amb.n):
                if iota(w, e[j], e[k]) != op(e[j], e[k]):
                    raise VxdError("difference of brackets is not a 3-form")
    return w


# ---------------------------------------------------------------------------
# basis changes
#
# Convention: b_new = phi b_old, i.e. b_new[i] = sum_j phi[i][j] b_old[j].


def change_matrix(b_new: AbelianBasis, b_old: AbelianBasis) -> MatrixA:
    """phi with b_new[i] = sum_j phi[i][j] b_old[j]."""
    return b_new.change_matrix(b_old)


def _theta(phi: MatrixA):
    return fm_chain(mat_inverse(phi), matrix_differential(phi))


def alpha_trace(phi: MatrixA) -> PForm:
    """tr((phi^-1 dphi)^3) / 6."""
    th = _theta(phi)
    return fm_trace(fm_chain(th, th, th)).scale(mpq(1, 6))


def beta_trace(phi: MatrixA, psi: MatrixA) -> PForm:
    """tr(phi^-1 psi^-1 dpsi dphi) / 2."""
    return fm_trace(fm_chain(mat_inverse(phi), mat_inverse(psi), matrix_differential(psi),
                             matrix_differential(phi))).scale(mpq(1, 2))


def h_trace(phi: MatrixA, t: Derivation, psi: MatrixA | None = None) -> PForm:
    """Closed form for h_{b',b}(t) with b' = phi b, where t is a vector of b'' = psi b'.

    With ``psi`` omitted, t is taken from b' itself and the psi term drops.
    """
    inv = mat_inverse(phi)
    tphi = matrix_derivative(t, phi)
    out = (fm_trace(fm_chain(inv, matrix_differential(tphi)))
           - fm_trace(fm_chain(inv, tphi, inv, matrix_differential(phi))).scale(mpq(1, 2)))
    if psi is not None:
        out = out + fm_trace(fm_chain(inv, mat_inverse(psi), matrix_derivative(t, psi),
                                      matrix_differential(phi)))
    return out


def transition_h_values(b_new: AbelianBasis, b_old: AbelianBasis) -> List[PForm]:
    """Values h(t'_j): the 1-forms with <t'_i, h(t'_j)> = -1/2 <t'_i, t'_j>_b."""
    amb = b_new.ambient
    n = amb.n
    half = mpq(-1, 2)
    inv = b_new._inverse.entries
    out = []
    for j in range(n):
        pj = [basis_pairing(b_old, b_new.vectors[i], b_new.vectors[j]) * half for i in range(n)]
        # pairings against the new basis -> pairings against coordinates
        vals = []
        for k in range(n):
            s = amb.zero()
            for i in range(n):
                if inv[k][i] and pj[i]:
                    s = s + inv[k][i] * pj[i]
            vals.append(s)
        out.append(one_form_from_functional(amb, vals))
    return out


def _transport3(b: AbelianBasis, vals) -> PForm:
    """The 3-form with given values on triples of basis vectors (vals on j < k)."""
    amb = b.ambient
    n = amb.n
    # d/dx_a = sum_i N[a][i] t_i with N the inverse of the basis matrix
    N = b._inverse.entries
    terms = {}
    for a in range(n):
        for bb in range(a + 1, n):
            for c in range(bb + 1, n):
                s = amb.zero()
                for i in range(n):
                    if not N[a][i]:
                        continue
                    for j in range(n):
                        if not N[bb][j]:
                            continue
                        for k in range(n):
                            if not N[c][k] or j == k:
                                continue
                            v = vals[(i, j, k)] if j < k else -vals[(i, k, j)]
                            if v:
                                s = s + N[a][i] * N[bb][j] * N[c][k] * v
                terms[(a, bb, c)] = s
    return PForm(amb, 3, terms)


def transition_alpha(b_new: AbelianBasis, b_old: AbelianBasis,
                     h_vals: Sequence[PForm] | None = None) -> PForm:
    """alpha = c_b - c_{b',b}, with c_{b',b}(t'_i, t'_j) = L_{t'_i} h(t'_j) - L_{t'_j} h(t'_i)."""
    amb = b_new.ambient
    n = amb.n
    if n < 3:
        return PForm.zero(amb, 3)
    if h_vals is None:
        h_vals = transition_h_values(b_new, b_old)
    tv = b_new.vectors
    amap = {}
    for j in range(n):
        for k in range(j + 1, n):
            c_old = basis_c(b_old, tv[j], tv[k])
            c_new = lie_derivative(tv[j], h_vals[k]) - lie_derivative(tv[k], h_vals[j])
            amap[(j, k)] = c_old - c_new
    # alpha(t'_i, t'_j, t'_k) = -<t'_i, i_{t'_j} i_{t'_k} alpha>
    vals = {}
    for i in range(n):
        for j in range(n):
            for k in range(j + 1, n):
                vals[(i, j, k)] = -pairing(tv[i], amap[(j, k)])
    for (i, j, k), v in vals.items():
        if i in (j, k) and v:
            raise VxdError("bracket difference is not alternating")
        if i < j and vals[(j, i, k)] != -v:
            raise VxdError("bracket difference is not alternating")
    return _transport3(b_new, vals)


def transition_target(b_new: AbelianBasis, b_old: AbelianBasis,
                      alpha: PForm | None = None) -> SplitAlgebroid:
    """B_{b',b}: the pairing of b with bracket c_b - i_t i_u alpha.

    alpha acts on pairs as i_t i_u alpha while twists act through iota, which
    is the opposite sign, so the target is B_b twisted by +alpha.
    """
    if alpha is None:
        alpha = transition_alpha(b_new, b_old)
    return SplitAlgebroid(b_old, alpha, check_closed=False)


def transition_h(b_new: AbelianBasis, b_old: AbelianBasis) -> MorphismDatum:
    """h_{b',b}: B_{b'} -> B_{b',b}, prescribed on b' and extended by the product rule."""
    if b_new.ambient.ring != b_old.ambient.ring:
        raise AmbientMismatchError("bases live over different algebras")
    vals = transition_h_values(b_new, b_old)
    alpha = transition_alpha(b_new, b_old, vals)
    return MorphismDatum(SplitAlgebroid(b_new), transition_target(b_new, b_old, alpha), vals, b_new)


def transition_c(b_new: AbelianBasis, b_old: AbelianBasis, t: Derivation, u: Derivation,
                 h: MorphismDatum | None = None) -> PForm:
    """c_{b',b}(t, u) for arbitrary derivations, solved from the bracket axiom of h."""
    if h is None:
        h = transition_h(b_new, b_old)
    H = lambda x: morphism_eval(h, x)  # noqa: E731
    ht, hu = H(t), H(u)
    pot = (pairing(t, hu) - pairing(u, ht)).scale(mpq(1, 2))
    corr = (lie_derivative(u, ht) - lie_derivative(t, hu) + H(lie_bracket(t, u))
            + differential(pot))
    return c_eval(h.source, t, u) - corr


def transition_beta(b2: AbelianBasis, b1: AbelianBasis, b0: AbelianBasis) -> PForm:
    """h_{b'',b'} + h_{b',b} - h_{b'',b} read as a 2-form (h(t) = i_t beta)."""
    hs = (transition_h(b2, b1), transition_h(b1, b0), transition_h(b2, b0))
    op = lambda t: (morphism_eval(hs[0], t) + morphism_eval(hs[1], t)  # noqa: E731
                    - morphism_eval(hs[2], t))
    return operator_to_form2(b0.ambient, op)


def operator_to_form2(amb: AlgebraDescriptor, op) -> PForm:
    """form2_from_operator plus a check that op really is t -> i_t of a 2-form."""
    eta = form2_from_operator(amb, op)
    for i in range(amb.n):
        e = Derivation.coordinate(amb, i)
        if op(e) != contract(e, eta):
            raise VxdError("operator is not a contraction with a 2-form")
    return eta


def curve_uniqueness(b: AbelianBasis, b_new: AbelianBasis) -> MorphismDatum:
    """The only morphism B_{b'} -> B_b over a one-variable algebra.

    Morphisms between fixed endpoints form a torsor under closed 2-forms,
    and there are no nonzero 2-forms in one variable.
    """
    amb = b.ambient
    if amb.n != 1:
        raise DimensionError(f"expected a one-variable algebra, got {amb.n} variables")
    h = transition_h(b_new, b)
    if not h.target.twist.is_zero():
        raise VxdError("nonzero 3-form over a curve")
    return h
