"""Split vertex algebroids built from abelian bases, and their axiom checkers.

A :class:`SplitAlgebroid` is an abelian basis together with a closed 3-form
twist.  The basis induces the symmetric pairing and the antisymmetric
bracket correction ``c`` on derivations; the twist shifts ``c`` by the
1-form ``iota(twist)(t, u)`` with ``<s, iota(w)(t, u)> = w(s, t, u)``.  The assembled algebroid lives on
``T + Omega`` and carries the operations ``_(-1)``, ``_(0)``, ``_(1)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence

from gmpy2 import mpq

from .errors import (AmbientMismatchError, BasisError, LinearityError, NotClosedError,
                     SingularMatrixError, UnitError)
from .forms import (Derivation, PForm, contract, de_rham, differential, lie_bracket,
                    lie_derivative, one_form_from_functional, pairing)
from .matrix import MatrixA, mat_det, mat_inverse, mat_transpose
from .ratfunc import AlgebraDescriptor, RatFunc, partial
from .report import CheckResult


class AbelianBasis:
    """An A-basis of pairwise commuting derivations.

    ``matrix_to_coords`` has the basis vectors as rows: ``vectors[i] =
    sum_j M[i][j] d/dx_j``.
    """

    __slots__ = ("ambient", "vectors", "matrix_to_coords", "_inverse", "name")

    def __init__(self, ambient: AlgebraDescriptor, vectors: Sequence[Derivation], name: str = "",
                 validate: bool = True):
        vectors = list(vectors)
        if len(vectors) != ambient.n:
            raise BasisError(f"need {ambient.n} basis vectors, got {len(vectors)}")
        m = MatrixA(ambient, [v.coeffs for v in vectors])
        if validate:
            for i in range(len(vectors)):
                for j in range(i + 1, len(vectors)):
                    if not lie_bracket(vectors[i], vectors[j]).is_zero():
                        raise BasisError(f"basis vectors {i} and {j} do not commute")
            det = mat_det(m)
            if not det or not det.is_unit():
                raise BasisError(f"basis matrix determinant {det} is not a unit")
        self.ambient = ambient
        self.vectors = tuple(vectors)
        self.matrix_to_coords = m
        self._inverse = mat_inverse(m)
        self.name = name

    @classmethod
    def coordinate(cls, ambient: AlgebraDescriptor) -> "AbelianBasis":
        return cls(ambient, [Derivation.coordinate(ambient, i) for i in range(ambient.n)],
                   name="coords", validate=False)

    @classmethod
    def from_matrix(cls, m: MatrixA, name: str = "") -> "AbelianBasis":
        return cls(m.ambient, [Derivation(m.ambient, row) for row in m.entries], name=name)

    @classmethod
    def parse(cls, ambient: AlgebraDescriptor, rows: Sequence[Sequence[str]], name: str = "") -> "AbelianBasis":
        return cls.from_matrix(MatrixA.parse(ambient, rows), name=name)

    @classmethod
    def from_coordinates(cls, ambient: AlgebraDescriptor, functions: Sequence[RatFunc | str],
                         name: str = "") -> "AbelianBasis":
        """The derivations d/du_i of a coordinate system u = (u_1..u_n).

        With J = d(u)/d(x), these are the rows of the transposed inverse of J.
        """
        us = [ambient.parse(f) if isinstance(f, str) else f for f in functions]
        if len(us) != ambient.n:
            raise BasisError(f"need {ambient.n} coordinate functions, got {len(us)}")
        jac = MatrixA(ambient, [[partial(u, j) for j in range(ambient.n)] for u in us])
        try:
            inv = mat_inverse(jac)
        except (SingularMatrixError, UnitError) as e:
            raise BasisError(f"coordinates do not form a chart: {e}") from None
        return cls.from_matrix(mat_transpose(inv), name=name)

    def __len__(self) -> int:
        return len(self.vectors)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, AbelianBasis) and self.vectors == other.vectors

    def __hash__(self) -> int:
        return hash(self.vectors)

    def decompose(self, t: Derivation) -> List[RatFunc]:
        """Coefficients a_i with t = sum_i a_i vectors[i]."""
        inv = self._inverse.entries
        n = len(self.vectors)
        out = []
        for j in range(n):
            s = t.ambient.zero()
            for k in range(n):
                c = t.coeffs[k]
                if c and inv[k][j]:
                    s = s + c * inv[k][j]
            out.append(s)
        return out

    def combine(self, coeffs: Sequence[RatFunc]) -> Derivation:
        out = Derivation.zero(self.ambient)
        for a, v in zip(coeffs, self.vectors):
            if a:
                out = out + v.scale(a)
        return out

    def with_ambient(self, ambient: AlgebraDescriptor) -> "AbelianBasis":
        vecs = [Derivation(ambient, [c.with_ambient(ambient) for c in v.coeffs]) for v in self.vectors]
        return AbelianBasis(ambient, vecs, name=self.name, validate=False)

    def change_matrix(self, other: "AbelianBasis") -> MatrixA:
        """phi with self.vectors[i] = sum_j phi[i][j] other.vectors[j]."""
        return MatrixA(self.ambient, [other.decompose(v) for v in self.vectors])


def iota(w: PForm, t: Derivation, u: Derivation) -> PForm:
    """The 1-form s -> w(s, t, u), i.e. i_u i_t w."""
    return contract(u, contract(t, w))


class SplitAlgebroid:
    """The split algebroid B_b twisted by a closed 3-form."""

    __slots__ = ("basis", "twist")

    def __init__(self, basis: AbelianBasis, twist: PForm | None = None, check_closed: bool = True):
        amb = basis.ambient
        if twist is None:
            twist = PForm.zero(amb, 3)
        if twist.degree != 3:
            raise ValueError("twist must be a 3-form")
        if check_closed and amb.n >= 4 and not de_rham(twist).is_zero():
            raise NotClosedError(f"twist {twist} is not closed")
        self.basis = basis
        self.twist = twist

    @property
    def ambient(self) -> AlgebraDescriptor:
        return self.basis.ambient

    def __repr__(self) -> str:
        return f"SplitAlgebroid(basis={self.basis.name or self.basis.vectors!r}, twist={self.twist})"


class _Jet:
    """Coefficients a_i of a derivation in the basis, d1[k][i] = t_k(a_i), and div = sum_i t_i(a_i)."""

    __slots__ = ("a", "d1", "div")

    def __init__(self, basis: AbelianBasis, t: Derivation):
        vs = basis.vectors
        n = len(vs)
        self.a = basis.decompose(t)
        self.d1 = [[vs[k](self.a[i]) if self.a[i] else self.a[i] for i in range(n)]
                   for k in range(n)]
        div = t.ambient.zero()
        for i in range(n):
            div = div + self.d1[i][i]
        self.div = div


def _jet(basis: AbelianBasis, t: Derivation) -> _Jet:
    return _cached_jet(basis, basis.ambient, t, t.ambient)


@lru_cache(maxsize=512)
def _cached_jet(basis: AbelianBasis, basis_ambient, t: Derivation, t_ambient) -> _Jet:
    return _Jet(basis, t)


def _check_ambient(B: SplitAlgebroid, *ts: Derivation) -> None:
    for t in ts:
        if t.ambient.ring != B.ambient.ring:
            raise AmbientMismatchError("derivation over a different algebra")


def basis_pairing(basis: AbelianBasis, t: Derivation, u: Derivation) -> RatFunc:
    """<a t_i, b t_j> = -b t_i t_j(a) - a t_j t_i(b) - t_i(b) t_j(a), summed bilinearly.

    Summed over i, j the first two terms are -u(div t) - t(div u), where
    div is the divergence sum_i t_i(a_i) with respect to the basis.
    """
    ja, jb = _jet(basis, t), _jet(basis, u)
    n = len(basis.vectors)
    s = -(u(ja.div) + t(jb.div))
    for i in range(n):
        for j in range(n):
            x, y = jb.d1[i][j], ja.d1[j][i]
            if x and y:
                s = s - x * y
    return s


def basis_c(basis: AbelianBasis, t: Derivation, u: Derivation) -> PForm:
    """c_b(a t_i, b t_j) = 1/2{t_i(b) d t_j(a) - t_j(a) d t_i(b)} + 1/2 d{b t_i t_j(a) - a t_j t_i(b)}.

    The exact part sums to d{u(div t) - t(div u)} / 2.
    """
    ja, jb = _jet(basis, t), _jet(basis, u)
    n = len(basis.vectors)
    out = differential(u(ja.div) - t(jb.div))
    for i in range(n):
        for j in range(n):
            tb, ta = jb.d1[i][j], ja.d1[j][i]
            if tb and ta:
                out = out + differential(ta).scale(tb) - differential(tb).scale(ta)
    return out.scale(mpq(1, 2))


def pairing_eval(B: SplitAlgebroid, t: Derivation, u: Derivation) -> RatFunc:
    _check_ambient(B, t, u)
    return basis_pairing(B.basis, t, u)


def c_eval(B: SplitAlgebroid, t: Derivation, u: Derivation) -> PForm:
    _check_ambient(B, t, u)
    c = basis_c(B.basis, t, u)
    if B.twist.terms:
        c = c + iota(B.twist, t, u)
    return c


def gamma(B: SplitAlgebroid, a: RatFunc, t: Derivation, verify: bool = False) -> PForm:
    """The 1-form gamma(a, t) with <t', gamma> = <a t, t'> - a <t', t> + t t'(a)."""
    amb = B.ambient
    vals = []
    at = t.scale(a)
    for k in range(amb.n):
        e = Derivation.coordinate(amb, k)
        vals.append(pairing_eval(B, at, e) - a * pairing_eval(B, e, t) + t(e(a)))
    g = one_form_from_functional(amb, vals)
    if verify:
        _verify_gamma(B, a, t, g)
    return g


def _verify_gamma(B: SplitAlgebroid, a: RatFunc, t: Derivation, g: PForm) -> None:
    amb = B.ambient
    at = t.scale(a)
    for k in range(amb.n):
        x = amb.gen((k + 1) % amb.n) + 1
        probe = Derivation.coordinate(amb, k).scale(x)
        lhs = pairing(probe, g)
        rhs = pairing_eval(B, at, probe) - a * pairing_eval(B, probe, t) + t(probe(a))
        if lhs != rhs:
            raise LinearityError(f"gamma functional is not A-linear: {lhs - rhs}")


# ---------------------------------------------------------------------------
# the assembled vertex algebroid on T + Omega


@dataclass(frozen=True)
class AlgebroidElement:
    tau: Derivation
    omega: PForm

    @classmethod
    def of_tau(cls, t: Derivation) -> "AlgebroidElement":
        return cls(t, PForm.zero(t.ambient, 1))

    @classmethod
    def of_omega(cls, w: PForm) -> "AlgebroidElement":
        return cls(Derivation.zero(w.ambient), w)

    @classmethod
    def d(cls, f: RatFunc) -> "AlgebroidElement":
        """The image of a function under the canonical map A -> algebroid."""
        return cls.of_omega(differential(f))

    def __add__(self, other: "AlgebroidElement") -> "AlgebroidElement":
        return AlgebroidElement(self.tau + other.tau, self.omega + other.omega)

    def __sub__(self, other: "AlgebroidElement") -> "AlgebroidElement":
        return AlgebroidElement(self.tau - other.tau, self.omega - other.omega)

    def is_zero(self) -> bool:
        return self.tau.is_zero() and self.omega.is_zero()

    def __str__(self) -> str:
        return f"({self.tau.to_strings()}, {self.omega})"


def op_minus1(B: SplitAlgebroid, a: RatFunc, x: AlgebroidElement) -> AlgebroidElement:
    """a_(-1) x = (a t, a w - gamma(a, t))."""
    w = x.omega.scale(a)
    if not x.tau.is_zero():
        w = w - gamma(B, a, x.tau)
    return AlgebroidElement(x.tau.scale(a), w)


def op_zero(B: SplitAlgebroid, x: AlgebroidElement, y: AlgebroidElement) -> AlgebroidElement:
    """x_(0) y = ([t, t'], -c(t, t') + d<t, t'>/2 + L_t w' - i_t' dw)."""
    t, u = x.tau, y.tau
    amb = B.ambient
    w = PForm.zero(amb, 1)
    if not t.is_zero() and not u.is_zero():
        w = differential(pairing_eval(B, t, u)).scale(_HALF(amb)) - c_eval(B, t, u)
    if not y.omega.is_zero() and not t.is_zero():
        w = w + lie_derivative(t, y.omega)
    if not x.omega.is_zero() and not u.is_zero():
        w = w - contract(u, de_rham(x.omega))
    return AlgebroidElement(lie_bracket(t, u), w)


def op_one(B: SplitAlgebroid, x: AlgebroidElement, y: AlgebroidElement) -> RatFunc:
    """x_(1) y = <t, t'>_B + <t, w'> + <t', w>."""
    s = B.ambient.zero()
    if not x.tau.is_zero() and not y.tau.is_zero():
        s = pairing_eval(B, x.tau, y.tau)
    if not y.omega.is_zero():
        s = s + pairing(x.tau, y.omega)
    if not x.omega.is_zero():
        s = s + pairing(y.tau, x.omega)
    return s


def differential_element(f: RatFunc) -> AlgebroidElement:
    return AlgebroidElement.d(f)


def _HALF(amb: AlgebraDescriptor) -> mpq:
    return mpq(1, 2)


# ---------------------------------------------------------------------------
# axiom checkers; each returns the symbolic difference of both sides


def algscind_difference(B: SplitAlgebroid, k: int, t: Derivation, u: Derivation,
                        v: Derivation, a: RatFunc, b: RatFunc):
    """Left side minus right side of split-algebroid axiom k (1, 2 or 3)."""
    P = lambda p, q: pairing_eval(B, p, q)  # noqa: E731
    C = lambda p, q: c_eval(B, p, q)  # noqa: E731
    if k == 1:
        at, bu = t.scale(a), u.scale(b)
        lhs = P(at, bu) - a * P(t, bu) - b * P(at, u) + a * b * P(t, u)
        return lhs + u(a) * t(b)
    if k == 2:
        half = _HALF(B.ambient)
        lhs = pairing(v, C(t, u)) + pairing(u, C(t, v))
        rhs = (P(lie_bracket(t, u), v) + P(u, lie_bracket(t, v)) - t(P(u, v))
               + u(P(t, v)) * half + v(P(t, u)) * half)
        return lhs - rhs
    if k == 3:
        ttri = [(t, u, v), (u, v, t), (v, t, u)]
        lhs = PForm.zero(B.ambient, 1)
        pot = B.ambient.zero()
        half = _HALF(B.ambient)
        for p, q, r in ttri:
            lhs = lhs + lie_derivative(p, C(q, r)) - C(lie_bracket(p, q), r)
            pot = pot + P(p, lie_bracket(q, r)) * half + pairing(p, C(q, r))
        return lhs.scale(3) - differential(pot)
    raise ValueError("split-algebroid axioms are numbered 1..3")


def check_algscind(B: SplitAlgebroid, k: int, t: Derivation, u: Derivation, v: Derivation,
                   a: RatFunc, b: RatFunc, check_id: str | None = None) -> CheckResult:
    diff = algscind_difference(B, k, t, u, v, a, b)
    return CheckResult.from_difference(check_id or f"algscind{k}", diff)


def alg_difference(B: SplitAlgebroid, k: int, x: AlgebroidElement, y: AlgebroidElement,
                   z: AlgebroidElement, a: RatFunc):
    """Differences for the vertex-algebroid axioms; returns a list (one entry per identity)."""
    if k == 1:
        lhs = op_one(B, op_minus1(B, a, x), y)
        rhs = a * op_one(B, x, y) - x.tau(y.tau(a))
        return [lhs - rhs]
    if k == 2:
        s = op_zero(B, x, y) + op_zero(B, y, x) - AlgebroidElement.d(op_one(B, x, y))
        da = op_zero(B, AlgebroidElement.d(a), y)
        return [s, da]
    if k == 3:
        x0y = op_zero(B, x, y)
        d0 = op_zero(B, x, op_zero(B, y, z)) - op_zero(B, x0y, z) - op_zero(B, y, op_zero(B, x, z))
        d1 = x.tau(op_one(B, y, z)) - op_one(B, x0y, z) - op_one(B, y, op_zero(B, x, z))
        return [d0, d1]
    raise ValueError("vertex-algebroid axioms are numbered 1..3")


def check_alg(B: SplitAlgebroid, k: int, x: AlgebroidElement, y: AlgebroidElement,
              z: AlgebroidElement, a: RatFunc, check_id: str | None = None) -> CheckResult:
    diffs = alg_difference(B, k, x, y, z, a)
    return CheckResult.from_differences(check_id or f"alg{k}", diffs)
