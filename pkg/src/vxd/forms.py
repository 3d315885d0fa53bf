"""Derivations and differential forms over a small algebra.

Forms of degree 0..4 are stored on strictly increasing index tuples, so
``dx_i ^ dx_j`` with i < j is the basis element ``(i, j)``.  Interior
product follows ``i_v(a) = a(v, ...)`` and evaluation on vectors is the
determinant convention ``(dx ^ dy)(d/dx, d/dy) = 1``.
"""
from __future__ import annotations

from typing import Dict, Iterable, List, Sequence, Tuple

from .errors import AmbientMismatchError, DegreeError
from .matrix import MatrixA
from .ratfunc import AlgebraDescriptor, RatFunc, join_ambient, partial

MAX_DEGREE = 4

Index = Tuple[int, ...]


def _same(a: AlgebraDescriptor, b: AlgebraDescriptor) -> AlgebraDescriptor:
    if a is b:
        return a
    try:
        return join_ambient(a, b)
    except AmbientMismatchError:
        raise AmbientMismatchError(f"objects over different algebras: {a} vs {b}") from None


class Derivation:
    """A vector field sum_i coeffs[i] * d/dx_i."""

    __slots__ = ("ambient", "coeffs")

    def __init__(self, ambient: AlgebraDescriptor, coeffs: Sequence[RatFunc]):
        coeffs = tuple(coeffs)
        if len(coeffs) != ambient.n:
            raise ValueError(f"derivation needs {ambient.n} coefficients, got {len(coeffs)}")
        self.ambient = ambient
        self.coeffs = coeffs

    @classmethod
    def coordinate(cls, ambient: AlgebraDescriptor, i: int) -> "Derivation":
        zero, one = ambient.zero(), ambient.one()
        return cls(ambient, [one if j == i else zero for j in range(ambient.n)])

    @classmethod
    def zero(cls, ambient: AlgebraDescriptor) -> "Derivation":
        return cls(ambient, [ambient.zero()] * ambient.n)

    @classmethod
    def parse(cls, ambient: AlgebraDescriptor, exprs: Sequence[str]) -> "Derivation":
        return cls(ambient, [ambient.parse(str(e)) for e in exprs])

    def to_strings(self) -> List[str]:
        return [str(c) for c in self.coeffs]

    def __call__(self, f: RatFunc) -> RatFunc:
        """Apply the derivation to a function."""
        s = self.ambient.zero()
        for i, c in enumerate(self.coeffs):
            if c:
                df = partial(f, i)
                if df:
                    s = s + c * df
        return s

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Derivation) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other: "Derivation") -> "Derivation":
        amb = _same(self.ambient, other.ambient)
        return Derivation(amb, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "Derivation") -> "Derivation":
        amb = _same(self.ambient, other.ambient)
        return Derivation(amb, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "Derivation":
        return Derivation(self.ambient, [-a for a in self.coeffs])

    def scale(self, f) -> "Derivation":
        """Multiply by a function (or rational scalar)."""
        return Derivation(self.ambient, [f * a for a in self.coeffs])

    def __repr__(self) -> str:
        return f"Derivation({self.to_strings()!r})"


def lie_bracket(t: Derivation, u: Derivation) -> Derivation:
    amb = _same(t.ambient, u.ambient)
    return Derivation(amb, [t(b) - u(a) for a, b in zip(t.coeffs, u.coeffs)])


def _sort_sign(idx: Sequence[int]) -> Tuple[int, Index]:
    """Parity of the sorting permutation and the sorted tuple; sign 0 on repeats."""
    idx = list(idx)
    sign = 1
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return 0, tuple(idx)
    return sign, tuple(idx)


class PForm:
    """Differential form sum_I terms[I] dx_I of a fixed degree."""

    __slots__ = ("ambient", "degree", "terms")

    def __init__(self, ambient: AlgebraDescriptor, degree: int, terms: Dict[Index, RatFunc] | None = None):
        if not 0 <= degree <= MAX_DEGREE:
            raise DegreeError(f"form degree {degree} outside 0..{MAX_DEGREE}")
        clean = {}
        for k, v in (terms or {}).items():
            if v:
                k = tuple(k)
                if len(k) != degree or any(a >= b for a, b in zip(k, k[1:])) or \
                        any(not 0 <= a < ambient.n for a in k):
                    raise ValueError(f"bad index tuple {k} for a {degree}-form")
                clean[k] = v
        self.ambient = ambient
        self.degree = degree
        self.terms = clean

    # construction -----------------------------------------------------
    @classmethod
    def zero(cls, ambient: AlgebraDescriptor, degree: int) -> "PForm":
        return cls(ambient, degree, {})

    @classmethod
    def function(cls, f: RatFunc) -> "PForm":
        return cls(f.ambient, 0, {(): f})

    @classmethod
    def basis(cls, ambient: AlgebraDescriptor, idx: Sequence[int], coeff: RatFunc | None = None) -> "PForm":
        """coeff * dx_{i1} ^ ... ^ dx_{ik}, indices in any order."""
        s, k = _sort_sign(idx)
        c = ambient.one() if coeff is None else coeff
        return cls(ambient, len(k), {k: c * s} if s else {})

    @classmethod
    def parse(cls, ambient: AlgebraDescriptor, degree: int,
              pairs: Iterable[Tuple[Sequence[int], str]]) -> "PForm":
        out = PForm.zero(ambient, degree)
        for idx, expr in pairs:
            if len(idx) != degree:
                raise DegreeError(f"index tuple {tuple(idx)} does not match degree {degree}")
            out = out + PForm.basis(ambient, idx, ambient.parse(str(expr)))
        return out

    def to_pairs(self) -> List[Tuple[List[int], str]]:
        return [(list(k), str(self.terms[k])) for k in sorted(self.terms)]

    # access -----------------------------------------------------------
    def coeff(self, idx: Sequence[int]) -> RatFunc:
        s, k = _sort_sign(idx)
        if not s:
            return self.ambient.zero()
        v = self.terms.get(k)
        if v is None:
            return self.ambient.zero()
        return v if s > 0 else -v

    def value(self) -> RatFunc:
        """The function underlying a 0-form."""
        if self.degree != 0:
            raise DegreeError("value() needs a 0-form")
        return self.terms.get((), self.ambient.zero())

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, PForm) and self.degree == other.degree
                and self.terms == other.terms)

    def __hash__(self) -> int:
        return hash((self.degree, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"PForm({self.to_str()})"

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        names = self.ambient.variables
        parts = []
        for k in sorted(self.terms):
            basis = "^".join("d" + names[i] for i in k)
            c = str(self.terms[k])
            parts.append(f"({c})*{basis}" if basis else c)
        return " + ".join(parts)

    __str__ = to_str

    # linear structure -------------------------------------------------
    def _check(self, other: "PForm") -> AlgebraDescriptor:
        if self.degree != other.degree:
            raise DegreeError(f"cannot add a {self.degree}-form and a {other.degree}-form")
        return _same(self.ambient, other.ambient)

    def __add__(self, other: "PForm") -> "PForm":
        amb = self._check(other)
        r = dict(self.terms)
        for k, v in other.terms.items():
            w = r.get(k)
            r[k] = v if w is None else w + v
        return PForm(amb, self.degree, r)

    def __sub__(self, other: "PForm") -> "PForm":
        return self + (-other)

    def __neg__(self) -> "PForm":
        return PForm(self.ambient, self.degree, {k: -v for k, v in self.terms.items()})

    def scale(self, f) -> "PForm":
        """Multiply by a function or rational scalar."""
        if isinstance(f, RatFunc):
            amb = _same(self.ambient, f.ambient)
            if not f:
                return PForm(amb, self.degree)
        else:
            amb = self.ambient
        return PForm(amb, self.degree, {k: f * v for k, v in self.terms.items()})

    def with_ambient(self, ambient: AlgebraDescriptor) -> "PForm":
        return PForm(ambient, self.degree, {k: v.with_ambient(ambient) for k, v in self.terms.items()})

    def evaluate(self, vectors: Sequence[Derivation]) -> RatFunc:
        """a(v_1, ..., v_p) with the determinant convention."""
        if len(vectors) != self.degree:
            raise DegreeError("number of vectors must equal the form degree")
        f = self
        for v in vectors:
            f = contract(v, f)
        return f.value()


def wedge(a: PForm, b: PForm) -> PForm:
    amb = _same(a.ambient, b.ambient)
    deg = a.degree + b.degree
    if deg > MAX_DEGREE:
        raise DegreeError(f"wedge of degree {deg} exceeds {MAX_DEGREE}")
    if deg > amb.n:
        return PForm(amb, deg)
    r: Dict[Index, RatFunc] = {}
    for ka, va in a.terms.items():
        for kb, vb in b.terms.items():
            s, k = _sort_sign(ka + kb)
            if not s:
                continue
            p = va * vb
            if s < 0:
                p = -p
            w = r.get(k)
            r[k] = p if w is None else w + p
    return PForm(amb, deg, r)


def de_rham(w: PForm) -> PForm:
    if w.degree >= MAX_DEGREE:
        raise DegreeError("de Rham differential is only defined up to degree 3")
    amb = w.ambient
    r: Dict[Index, RatFunc] = {}
    for k, v in w.terms.items():
        for i in range(amb.n):
            if i in k:
                continue
            dv = partial(v, i)
            if not dv:
                continue
            s, kk = _sort_sign((i,) + k)
            if s < 0:
                dv = -dv
            old = r.get(kk)
            r[kk] = dv if old is None else old + dv
    return PForm(amb, w.degree + 1, r)


def contract(t: Derivation, w: PForm) -> PForm:
    """Interior product i_t w."""
    if w.degree == 0:
        raise DegreeError("cannot contract a 0-form")
    amb = _same(t.ambient, w.ambient)
    r: Dict[Index, RatFunc] = {}
    for k, v in w.terms.items():
        for pos, i in enumerate(k):
            c = t.coeffs[i]
            if not c:
                continue
            p = c * v
            if pos % 2:
                p = -p
            kk = k[:pos] + k[pos + 1:]
            old = r.get(kk)
            r[kk] = p if old is None else old + p
    return PForm(amb, w.degree - 1, r)


def pairing(t: Derivation, w: PForm) -> RatFunc:
    """Canonical pairing of a derivation with a 1-form."""
    if w.degree != 1:
        raise DegreeError("pairing needs a 1-form")
    amb = _same(t.ambient, w.ambient)
    s = amb.zero()
    for (i,), v in w.terms.items():
        c = t.coeffs[i]
        if c:
            s = s + c * v
    return s


def lie_derivative(t: Derivation, w: PForm) -> PForm:
    """Cartan's formula L_t = i_t d + d i_t."""
    if w.degree == 0:
        return PForm.function(t(w.value())) if w.terms else w
    out = d_i = de_rham(contract(t, w))
    if w.degree < min(w.ambient.n, MAX_DEGREE):
        out = contract(t, de_rham(w)) + d_i
    return out


def one_form_from_functional(ambient: AlgebraDescriptor, vals: Sequence[RatFunc]) -> PForm:
    """The unique 1-form whose pairing with d/dx_i is vals[i]."""
    if len(vals) != ambient.n:
        raise ValueError("need one value per coordinate")
    return PForm(ambient, 1, {(i,): v for i, v in enumerate(vals)})


def differential(f: RatFunc) -> PForm:
    return de_rham(PForm.function(f))


def pairings(w: PForm) -> List[RatFunc]:
    amb = w.ambient
    return [pairing(Derivation.coordinate(amb, i), w) for i in range(amb.n)]


# ---------------------------------------------------------------------------
# matrices of forms, for trace formulas


FormMatrix = List[List[PForm]]


def matrix_as_forms(m: MatrixA) -> FormMatrix:
    return [[PForm.function(e) for e in row] for row in m.entries]


def matrix_differential(m: MatrixA) -> FormMatrix:
    return [[differential(e) for e in row] for row in m.entries]


def matrix_derivative(t: Derivation, m: MatrixA) -> MatrixA:
    """Entrywise t(m)."""
    return MatrixA(m.ambient, [[t(e) for e in row] for row in m.entries])


def fm_mul(a: FormMatrix, b: FormMatrix) -> FormMatrix:
    n, k, m = len(a), len(b), len(b[0])
    if len(a[0]) != k:
        raise ValueError("shape mismatch in form-matrix product")
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = None
            for l in range(k):
                x, y = a[i][l], b[l][j]
                if x.terms and y.terms:
                    p = wedge(x, y)
                    acc = p if acc is None else acc + p
            if acc is None:
                amb = a[i][0].ambient
                acc = PForm(amb, a[i][0].degree + b[0][j].degree)
            row.append(acc)
        out.append(row)
    return out


def fm_chain(*mats) -> FormMatrix:
    """Product of a sequence of MatrixA / FormMatrix factors."""
    acc = None
    for m in mats:
        fm = matrix_as_forms(m) if isinstance(m, MatrixA) else m
        acc = fm if acc is None else fm_mul(acc, fm)
    return acc


def fm_trace(a: FormMatrix) -> PForm:
    acc = a[0][0]
    for i in range(1, len(a)):
        acc = acc + a[i][i]
    return acc


def fm_add(a: FormMatrix, b: FormMatrix, sign: int = 1) -> FormMatrix:
    return [[x + (y if sign > 0 else -y) for x, y in zip(r, s)] for r, s in zip(a, b)]
