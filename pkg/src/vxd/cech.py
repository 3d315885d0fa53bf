"""Cech cochains over an affine cover and the characteristic-class cocycles.

Every chart and overlap is a declared localization of one reference ring
(chart 0's coordinates), so restriction is re-reading a value in a larger
localization.  Cochains are stored on strictly increasing index tuples.

Conventions:

* ``(d c)_{i0..i(p+1)} = sum_a (-1)^a c_{i0..^ia..i(p+1)}``.
* A total cochain of degree k is a pair ``(two, three)`` with ``two`` a
  k-cochain of 2-forms and ``three`` a (k-1)-cochain of 3-forms.  The total
  differential is ``d(two, three) = (d_C two, d_DR two - d_C three)``;
  closedness of the 3-form part is a separate check.
* Transition matrices satisfy ``b^i = phi_ij b^j``.
"""
from __future__ import annotations

from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from gmpy2 import mpq

from .algebroid import AbelianBasis
from .errors import CocycleError, DimensionError, UnitError
from .forms import PForm, de_rham, fm_chain, fm_trace, matrix_differential
from .matrix import MatrixA, mat_det, mat_inverse, mat_transpose
from .poly import Poly, PolyRing
from .ratfunc import AlgebraDescriptor
from .report import CheckResult, Report

Simplex = Tuple[int, ...]


class CoverDescriptor:
    """Charts 0..N-1 of an affine cover, each overlap a localization of one ring."""

    __slots__ = ("chart_count", "ring", "overlap_denominators", "_ambients")

    def __init__(self, chart_count: int, variables: Sequence[str] | PolyRing,
                 overlap_denominators: Mapping[Sequence[int], Iterable[Poly]] | None = None):
        if chart_count < 1:
            raise DimensionError("a cover needs at least one chart")
        self.chart_count = chart_count
        self.ring = variables if isinstance(variables, PolyRing) else PolyRing(variables)
        dens: Dict[Simplex, Tuple[Poly, ...]] = {}
        for key, ps in (overlap_denominators or {}).items():
            s = tuple(sorted(set(key)))
            if not s or s[0] < 0 or s[-1] >= chart_count:
                raise DimensionError(f"overlap {tuple(key)} names an unknown chart")
            dens[s] = dens.get(s, ()) + tuple(ps)
        self.overlap_denominators = dens
        self._ambients: Dict[Simplex, AlgebraDescriptor] = {}

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.ring.variables

    @property
    def n(self) -> int:
        return self.ring.n

    def ambient(self, simplex: Sequence[int] = (0,)) -> AlgebraDescriptor:
        """Functions on the overlap: denominators of every declared sub-overlap are inverted."""
        s = tuple(sorted(set(simplex)))
        amb = self._ambients.get(s)
        if amb is None:
            gens = []
            for key, ps in sorted(self.overlap_denominators.items()):
                if set(key) <= set(s):
                    gens.extend(ps)
            amb = AlgebraDescriptor(self.ring, gens)
            self._ambients[s] = amb
        return amb

    def simplices(self, p: int) -> List[Simplex]:
        return list(combinations(range(self.chart_count), p + 1))

    def __repr__(self) -> str:
        return f"CoverDescriptor({self.chart_count}, {list(self.variables)!r})"


def _normalize_simplex(idx: Sequence[int]) -> Tuple[int, Simplex]:
    """Sign and sorted form of an index tuple; sign 0 on a repeated index."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, tuple(sorted(idx))
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


class CechCochain:
    """Alternating Cech p-cochain with values in q-forms."""

    __slots__ = ("cover", "p", "q", "values")

    def __init__(self, cover: CoverDescriptor, p: int, q: int,
                 values: Mapping[Sequence[int], PForm] | None = None):
        self.cover = cover
        self.p = p
        self.q = q
        vals: Dict[Simplex, PForm] = {}
        for key, w in (values or {}).items():
            sign, s = _normalize_simplex(key)
            if len(s) != p + 1:
                raise DimensionError(f"cochain of degree {p} given a value on {tuple(key)}")
            if w.degree != q:
                raise DimensionError(f"expected a {q}-form on {s}, got degree {w.degree}")
            if sign == 0:
                continue
            w = w.with_ambient(cover.ambient(s))
            if sign < 0:
                w = -w
            if s in vals:
                w = vals[s] + w
            if w.is_zero():
                vals.pop(s, None)
            else:
                vals[s] = w
        self.values = vals

    @classmethod
    def zero(cls, cover: CoverDescriptor, p: int, q: int) -> "CechCochain":
        return cls(cover, p, q)

    def __getitem__(self, idx: Sequence[int]) -> PForm:
        sign, s = _normalize_simplex(idx)
        amb = self.cover.ambient(s)
        w = self.values.get(s) if sign else None
        if w is None:
            return PForm.zero(amb, self.q)
        return w if sign > 0 else -w

    def _same_shape(self, other: "CechCochain") -> None:
        if (self.p, self.q) != (other.p, other.q) or self.cover is not other.cover:
            raise DimensionError("cochains of different shapes")

    def __add__(self, other: "CechCochain") -> "CechCochain":
        self._same_shape(other)
        vals = dict(self.values)
        for s, w in other.values.items():
            vals[s] = vals[s] + w if s in vals else w
        return CechCochain(self.cover, self.p, self.q, vals)

    def __neg__(self) -> "CechCochain":
        return CechCochain(self.cover, self.p, self.q, {s: -w for s, w in self.values.items()})

    def __sub__(self, other: "CechCochain") -> "CechCochain":
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, CechCochain) and (self.p, self.q) == (other.p, other.q)
                and self.values == other.values)

    def is_zero(self) -> bool:
        return not self.values

    def witness(self) -> str:
        return "; ".join(f"{list(s)}: {w}" for s, w in sorted(self.values.items()))

    def __str__(self) -> str:
        return self.witness() or "0"

    def __repr__(self) -> str:
        return f"CechCochain(p={self.p}, q={self.q}, {self.witness() or '0'})"

    def to_dict(self) -> Dict[str, object]:
        return {"p": self.p, "q": self.q,
                "values": [[list(s), w.to_pairs()] for s, w in sorted(self.values.items())]}


def cech_d(c: CechCochain) -> CechCochain:
    """Alternating-sum Cech differential."""
    cover = c.cover
    vals = {}
    for s in cover.simplices(c.p + 1):
        amb = cover.ambient(s)
        acc = PForm.zero(amb, c.q)
        for a in range(len(s)):
            face = s[:a] + s[a + 1:]
            w = c.values.get(face)
            if w is None:
                continue
            w = w.with_ambient(amb)
            acc = acc + w if a % 2 == 0 else acc - w
        vals[s] = acc
    return CechCochain(cover, c.p + 1, c.q, vals)


def de_rham_cochain(c: CechCochain) -> CechCochain:
    return CechCochain(c.cover, c.p, c.q + 1, {s: de_rham(w) for s, w in c.values.items()})


TotalCochain = Tuple[CechCochain, CechCochain]


def total_d(pair: TotalCochain) -> TotalCochain:
    """Differential of the Cech bicomplex with values in 2-forms -> closed 3-forms."""
    two, three = pair
    if two.q != 2 or three.q != 3 or three.p != two.p - 1:
        raise DimensionError("total cochain must pair C^k(2-forms) with C^(k-1)(3-forms)")
    return cech_d(two), de_rham_cochain(two) - cech_d(three)


def closedness_defect(three: CechCochain) -> CechCochain:
    """d_DR of the 3-form part; must vanish for a cochain in the two-term complex."""
    return de_rham_cochain(three)


def total_zero(cover: CoverDescriptor, k: int) -> TotalCochain:
    return CechCochain.zero(cover, k, 2), CechCochain.zero(cover, k - 1, 3)


def total_sub(x: TotalCochain, y: TotalCochain) -> TotalCochain:
    return x[0] - y[0], x[1] - y[1]


def total_add(x: TotalCochain, y: TotalCochain) -> TotalCochain:
    return x[0] + y[0], x[1] + y[1]


def total_is_zero(x: TotalCochain) -> bool:
    return x[0].is_zero() and x[1].is_zero()


def total_witness(x: TotalCochain) -> str:
    parts = []
    if not x[0].is_zero():
        parts.append(f"two-forms {x[0].witness()}")
    if not x[1].is_zero():
        parts.append(f"three-forms {x[1].witness()}")
    return " | ".join(parts)


# ---------------------------------------------------------------------------
# matrix cocycles


class TransitionCocycle:
    """phi_ij for i < j; phi_ji is the inverse and phi_ii the identity."""

    __slots__ = ("cover", "rank", "matrices")

    def __init__(self, cover: CoverDescriptor, matrices: Mapping[Tuple[int, int], MatrixA],
                 rank: int | None = None, validate: bool = True):
        self.cover = cover
        mats = {}
        for (i, j), m in matrices.items():
            if i == j:
                raise DimensionError("diagonal transitions are the identity and are not stored")
            if i > j:
                i, j, m = j, i, mat_inverse(m.with_ambient(cover.ambient((i, j))))
            mats[(i, j)] = m.with_ambient(cover.ambient((i, j)))
        if rank is None:
            rank = next(iter(mats.values())).rows if mats else cover.n
        self.rank = rank
        self.matrices = mats
        if validate:
            self.validate()

    def __call__(self, i: int, j: int) -> MatrixA:
        amb = self.cover.ambient((i, j))
        if i == j:
            return MatrixA.identity(amb, self.rank)
        if i < j:
            m = self.matrices.get((i, j))
            if m is None:
                raise CocycleError(f"no transition given on overlap {(i, j)}")
            return m
        return mat_inverse(self(j, i))

    def validate(self) -> None:
        """Square, unit determinant on each overlap, and phi_ij phi_jk = phi_ik."""
        for (i, j), m in sorted(self.matrices.items()):
            if (m.rows, m.cols) != (self.rank, self.rank):
                raise CocycleError(f"transition {(i, j)} is not {self.rank}x{self.rank}")
            det = mat_det(m)
            if not det or not det.is_unit():
                raise CocycleError(f"transition {(i, j)} has non-unit determinant {det}")
        for i, j, k in self.cover.simplices(2):
            amb = self.cover.ambient((i, j, k))
            lhs = self(i, j).with_ambient(amb) * self(j, k).with_ambient(amb)
            rhs = self(i, k).with_ambient(amb)
            if lhs != rhs:
                diff = MatrixA(amb, [[a - b for a, b in zip(r, s)]
                                     for r, s in zip(lhs.entries, rhs.entries)])
                raise CocycleError(f"phi_{i}{j} phi_{j}{k} != phi_{i}{k} on {(i, j, k)}: "
                                   f"difference {diff.to_strings()}")

    def gauge(self, g: "GaugeCochain") -> "TransitionCocycle":
        """The cocycle g_i phi_ij g_j^-1 of the re-chosen bases g_i b^i."""
        mats = {}
        for (i, j) in self.matrices:
            amb = self.cover.ambient((i, j))
            gi = g.matrices[i].with_ambient(amb)
            gj = g.matrices[j].with_ambient(amb)
            mats[(i, j)] = gi * self(i, j) * mat_inverse(gj)
        return TransitionCocycle(self.cover, mats, self.rank)

    def dual(self) -> "TransitionCocycle":
        """The cocycle of the dual bundle: inverse transpose of every phi_ij."""
        mats = {k: mat_transpose(mat_inverse(m)) for k, m in self.matrices.items()}
        return TransitionCocycle(self.cover, mats, self.rank)

    @classmethod
    def identity(cls, cover: CoverDescriptor, rank: int) -> "TransitionCocycle":
        return cls(cover, {(i, j): MatrixA.identity(cover.ambient((i, j)), rank)
                           for i, j in cover.simplices(1)}, rank)


class GaugeCochain:
    """One invertible matrix per chart."""

    __slots__ = ("cover", "matrices")

    def __init__(self, cover: CoverDescriptor, matrices: Sequence[MatrixA]):
        if len(matrices) != cover.chart_count:
            raise DimensionError("one gauge matrix per chart is required")
        mats = []
        for i, m in enumerate(matrices):
            m = m.with_ambient(cover.ambient((i,)))
            det = mat_det(m)
            if not det or not det.is_unit():
                raise UnitError(f"gauge matrix {i} has non-unit determinant {det}")
            mats.append(m)
        self.cover = cover
        self.matrices = tuple(mats)


def _log_derivative(m: MatrixA):
    return fm_chain(mat_inverse(m), matrix_differential(m))


def _cs3(m: MatrixA) -> PForm:
    th = _log_derivative(m)
    return fm_trace(fm_chain(th, th, th)).scale(mpq(1, 6))


def pacs_p2(phi: TransitionCocycle) -> CechCochain:
    """p2_ijk = tr(phi_jk^-1 phi_ij^-1 dphi_ij dphi_jk) / 2."""
    cover = phi.cover
    vals = {}
    for i, j, k in cover.simplices(2):
        amb = cover.ambient((i, j, k))
        a = phi(i, j).with_ambient(amb)
        b = phi(j, k).with_ambient(amb)
        vals[(i, j, k)] = fm_trace(fm_chain(mat_inverse(b), mat_inverse(a), matrix_differential(a),
                                            matrix_differential(b))).scale(mpq(1, 2))
    return CechCochain(cover, 2, 2, vals)


def pacs_p3(phi: TransitionCocycle) -> CechCochain:
    """p3_ij = tr((phi_ij^-1 dphi_ij)^3) / 6."""
    cover = phi.cover
    return CechCochain(cover, 1, 3, {(i, j): _cs3(phi(i, j)) for i, j in cover.simplices(1)})


def pacs(phi: TransitionCocycle) -> TotalCochain:
    return pacs_p2(phi), pacs_p3(phi)


def pacs_identities(phi: TransitionCocycle, label: str = "pacs") -> Report:
    """The three cocycle identities of (p2, p3), each as one check."""
    p2, p3 = pacs(phi)
    rep = Report()
    rep.add(_cochain_check(f"{label}.cech_p2", cech_d(p2)))
    rep.add(_cochain_check(f"{label}.mixed", de_rham_cochain(p2) - cech_d(p3)))
    rep.add(_cochain_check(f"{label}.closed_p3", de_rham_cochain(p3)))
    return rep


def _cochain_check(check_id: str, c: CechCochain) -> CheckResult:
    return CheckResult(check_id, True) if c.is_zero() else CheckResult(check_id, False, c.witness())


def pacs_gauge(phi: TransitionCocycle, g: GaugeCochain) -> TotalCochain:
    """The 1-cochain (p2(phi, g), p3(g)) relating p(phi) and p(g phi)."""
    cover = phi.cover
    two = {}
    for i, j in cover.simplices(1):
        amb = cover.ambient((i, j))
        f = phi(i, j)
        gi = g.matrices[i].with_ambient(amb)
        gj = g.matrices[j].with_ambient(amb)
        fi = mat_inverse(f)
        li, lj = _log_derivative(gi), _log_derivative(gj)
        df = matrix_differential(f)
        w = (fm_trace(fm_chain(fi, li, f, lj)) + fm_trace(fm_chain(fi, df, lj))
             - fm_trace(fm_chain(li, df, fi)))
        two[(i, j)] = w.scale(mpq(1, 2))
    three = {(i,): _cs3(g.matrices[i]) for i in range(cover.chart_count)}
    return CechCochain(cover, 1, 2, two), CechCochain(cover, 0, 3, three)


def gauge_identity_defect(phi: TransitionCocycle, g: GaugeCochain) -> TotalCochain:
    """p(g phi) - p(phi) - d p(phi, g); zero when the identity holds."""
    return total_sub(total_sub(pacs(phi.gauge(g)), pacs(phi)), total_d(pacs_gauge(phi, g)))


def pacs_duality_check(phi: TransitionCocycle, label: str = "duality") -> Report:
    """Compare p(phi) with p of the inverse-transpose cocycle.

    Passes only on cochain-level equality; a cohomologous but unequal pair
    fails with the difference as witness, since no primitive is searched for.
    """
    p = pacs(phi)
    q = pacs(phi.dual())
    diff = total_sub(q, p)
    rep = Report()
    if total_is_zero(diff):
        rep.add(CheckResult(f"{label}.cochain_equal", True))
        rep.notes.append(f"{label}: cochain-equal")
        return rep
    rep.add(CheckResult(f"{label}.cochain_equal", False, total_witness(diff)))
    return rep


# ---------------------------------------------------------------------------
# gerbe cocycle from per-chart bases


def transitions_from_bases(cover: CoverDescriptor, bases: Sequence[AbelianBasis]) -> TransitionCocycle:
    """phi_ij with b^i = phi_ij b^j on each overlap."""
    if len(bases) != cover.chart_count:
        raise DimensionError("one basis per chart is required")
    mats = {}
    for i, j in cover.simplices(1):
        amb = cover.ambient((i, j))
        mats[(i, j)] = bases[i].with_ambient(amb).change_matrix(bases[j].with_ambient(amb))
    try:
        return TransitionCocycle(cover, mats, cover.n)
    except CocycleError as e:
        raise CocycleError(f"bases are incompatible: {e}") from None


def gerbe_cocycle(cover: CoverDescriptor, bases: Sequence[AbelianBasis]) -> TotalCochain:
    """(beta_ijl, alpha_ij) built from the transition morphisms between chart bases.

    Returned in the total-cochain order (2-form part, 3-form part).
    """
    from .transition import transition_alpha, transition_beta

    transitions_from_bases(cover, bases)
    alpha = {}
    for i, j in cover.simplices(1):
        amb = cover.ambient((i, j))
        alpha[(i, j)] = transition_alpha(bases[i].with_ambient(amb), bases[j].with_ambient(amb))
    beta = {}
    for i, j, l in cover.simplices(2):
        amb = cover.ambient((i, j, l))
        bi, bj, bl = (bases[k].with_ambient(amb) for k in (i, j, l))
        beta[(i, j, l)] = transition_beta(bi, bj, bl)
    return CechCochain(cover, 2, 2, beta), CechCochain(cover, 1, 3, alpha)


def verify_trivialization(p: TotalCochain, omega: TotalCochain, label: str = "trivialization") -> Report:
    """Check d omega = p and closedness of the 3-form part of omega."""
    rep = Report()
    diff = total_sub(total_d(omega), p)
    rep.add(CheckResult(f"{label}.d_omega_eq_p", True) if total_is_zero(diff)
            else CheckResult(f"{label}.d_omega_eq_p", False, total_witness(diff)))
    rep.add(_cochain_check(f"{label}.closed", closedness_defect(omega[1])))
    return rep


def zero_trivialization(cover: CoverDescriptor) -> TotalCochain:
    return total_zero(cover, 1)

