"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial is a map from exponent tuples to nonzero ``mpq`` coefficients.
Terms are iterated in graded-lexicographic order (highest first) with the
variables ordered as declared in the ring.
"""
from __future__ import annotations

import random
from itertools import product
from operator import add, lshift
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple

from gmpy2 import gcd as _gcd, isqrt, lcm as _lcm, mpq, mpz

from .errors import AmbientMismatchError, DivisionError

Monomial = Tuple[int, ...]

ZERO = mpq(0)
ONE = mpq(1)


def grlex_key(m: Monomial) -> Tuple[int, Monomial]:
    return (sum(m), m)


class PolyRing:
    """The polynomial ring Q[x_1, ..., x_n] over a fixed list of variable names."""

    __slots__ = ("variables", "n", "_zero_exp")

    def __init__(self, variables: Sequence[str]):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in {variables!r}")
        self.variables = variables
        self.n = len(variables)
        self._zero_exp = (0,) * self.n

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PolyRing) and other.variables == self.variables

    def __hash__(self) -> int:
        return hash(("PolyRing", self.variables))

    def __repr__(self) -> str:
        return f"PolyRing({list(self.variables)!r})"

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return Poly(self, {self._zero_exp: ONE})

    def const(self, c) -> "Poly":
        c = mpq(c)
        return Poly(self, {self._zero_exp: c} if c else {})

    def gen(self, i: int) -> "Poly":
        e = [0] * self.n
        e[i] = 1
        return Poly(self, {tuple(e): ONE})

    def gens(self) -> Tuple["Poly", ...]:
        return tuple(self.gen(i) for i in range(self.n))

    def index(self, name: str) -> int:
        return self.variables.index(name)

    def monomial(self, exps: Sequence[int], coeff=1) -> "Poly":
        return Poly(self, {tuple(exps): mpq(coeff)} if coeff else {})

    def from_dict(self, terms: Mapping[Monomial, object]) -> "Poly":
        clean = {}
        for m, c in terms.items():
            c = mpq(c)
            if c:
                if len(m) != self.n:
                    raise ValueError(f"exponent {m} has wrong length for {self}")
                clean[tuple(m)] = c
        return Poly(self, clean)


_FIELD = 20
_MASK = (1 << _FIELD) - 1


def _mul_terms(a: Mapping[Monomial, mpq], b: Mapping[Monomial, mpq], n: int) -> Dict[Monomial, mpq]:
    """Product of two term maps; exponents are packed into one integer per monomial."""
    if n == 0 or max(map(max, a)) + max(map(max, b)) >= (1 << (_FIELD - 1)):
        r: Dict[Monomial, mpq] = {}
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = tuple(map(add, ma, mb))
                r[m] = r.get(m, ZERO) + ca * cb
        return {m: c for m, c in r.items() if c}
    shifts = _SHIFTS[:n]
    # integer arithmetic on cleared denominators is much cheaper than mpq
    da = _lcm_den(a.values())
    db = _lcm_den(b.values())
    pa = [(sum(map(lshift, m, shifts)), (c * da).numerator) for m, c in a.items()]
    pb = [(sum(map(lshift, m, shifts)), (c * db).numerator) for m, c in b.items()]
    acc: Dict[int, mpz] = {}
    get = acc.get
    for kb, cb in pb:
        for ka, ca in pa:
            k = ka + kb
            v = get(k)
            acc[k] = ca * cb if v is None else v + ca * cb
    unpack = _unpacker(n)
    if da == 1 and db == 1:
        return {unpack(k): mpq(c) for k, c in acc.items() if c}
    den = da * db
    return {unpack(k): mpq(c, den) for k, c in acc.items() if c}


def _lcm_den(cs: Iterable[mpq]) -> mpz:
    d = mpz(1)
    for c in cs:
        q = c.denominator
        if q != 1:
            d = _lcm(d, q)
    return d


_SHIFTS = tuple(_FIELD * i for i in range(64))


def _unpacker(n: int):
    m, f = _MASK, _FIELD
    if n == 1:
        return lambda k: (k,)
    if n == 2:
        return lambda k: (k & m, k >> f)
    if n == 3:
        return lambda k: (k & m, (k >> f) & m, k >> 2 * f)
    if n == 4:
        return lambda k: (k & m, (k >> f) & m, (k >> 2 * f) & m, k >> 3 * f)
    shifts = _SHIFTS[:n]
    return lambda k: tuple((k >> s) & m for s in shifts)


class Poly:
    """Immutable sparse polynomial.  Build through :class:`PolyRing`."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Dict[Monomial, mpq]):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # basic predicates -------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        t = self.terms
        return not t or (len(t) == 1 and self.ring._zero_exp in t)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def constant_value(self) -> mpq:
        return self.terms.get(self.ring._zero_exp, ZERO)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, mpq, mpz)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self) -> Iterator[Tuple[Monomial, mpq]]:
        for m in sorted(self.terms, key=grlex_key, reverse=True):
            yield m, self.terms[m]

    def leading_monomial(self) -> Monomial:
        return max(self.terms, key=grlex_key)

    def leading_coefficient(self) -> mpq:
        return self.terms[self.leading_monomial()] if self.terms else ZERO

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((m[i] for m in self.terms), default=-1)

    def variables_used(self) -> set:
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(i)
        return used

    # arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise AmbientMismatchError(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, mpq, mpz)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        if not self.terms:
            return other
        r = dict(self.terms)
        for m, c in other.terms.items():
            v = r.get(m)
            if v is None:
                r[m] = c
            else:
                v = v + c
                if v:
                    r[m] = v
                else:
                    del r[m]
        return Poly(self.ring, r)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def scale(self, c) -> "Poly":
        c = mpq(c)
        if not c:
            return self.ring.zero()
        if c == 1:
            return self
        return Poly(self.ring, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, mpq, mpz)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.terms, other.terms
        if not a or not b:
            return self.ring.zero()
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (mb, cb), = b.items()
            if not any(mb):
                return Poly(self.ring, {ma: ca * cb for ma, ca in a.items()})
            return Poly(self.ring, {tuple(map(add, ma, mb)): ca * cb for ma, ca in a.items()})
        return Poly(self.ring, _mul_terms(a, b, self.ring.n))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial exponent must be a nonnegative integer")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def diff(self, i: int) -> "Poly":
        r = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                mm = list(m)
                mm[i] = e - 1
                r[tuple(mm)] = c * e
        return Poly(self.ring, r)

    def divexact(self, other: "Poly") -> "Poly":
        """Quotient of an exact division; raises DivisionError if a remainder is left."""
        q, r = self.divmod_lead(other)
        if r:
            raise DivisionError("polynomial division is not exact")
        return q

    def divmod_lead(self, other: "Poly") -> Tuple["Poly", "Poly"]:
        """Division by leading terms; stops at the first non-divisible leading term."""
        other = self._coerce(other)
        if not other.terms:
            raise DivisionError("division by the zero polynomial")
        if other.is_constant():
            return self.scale(1 / other.constant_value()), self.ring.zero()
        lm = other.leading_monomial()
        lc = other.terms[lm]
        rem = dict(self.terms)
        quot: Dict[Monomial, mpq] = {}
        okeys = list(other.terms.items())
        while rem:
            m = max(rem, key=grlex_key)
            if any(x < y for x, y in zip(m, lm)):
                break
            shift = tuple([x - y for x, y in zip(m, lm)])
            c = rem[m] / lc
            quot[shift] = c
            for mo, co in okeys:
                mm = tuple([x + y for x, y in zip(mo, shift)])
                v = rem.get(mm, ZERO) - c * co
                if v:
                    rem[mm] = v
                else:
                    rem.pop(mm, None)
        return Poly(self.ring, quot), Poly(self.ring, rem)

    def evaluate(self, values: Sequence) -> mpq:
        total = ZERO
        for m, c in self.terms.items():
            t = c
            for v, e in zip(values, m):
                if e:
                    t = t * mpq(v) ** e
            total += t
        return total

    # normal forms -----------------------------------------------------
    def content_integer(self) -> mpq:
        """Rational c with self = c * (integral primitive poly with positive leading coeff)."""
        if not self.terms:
            return ZERO
        num = mpz(0)
        den = mpz(1)
        for c in self.terms.values():
            num = _gcd(num, c.numerator)
            den = _lcm(den, c.denominator)
        c = mpq(num, den)
        if self.leading_coefficient() < 0:
            c = -c
        return c

    def primitive(self) -> Tuple[mpq, "Poly"]:
        c = self.content_integer()
        if not c:
            return c, self
        return c, self.scale(1 / c)

    def __repr__(self) -> str:
        return f"Poly({self.to_str()!r})"

    def to_str(self) -> str:
        from .expr import format_poly

        return format_poly(self)

    __str__ = to_str


# ---------------------------------------------------------------------------
# gcd

def _coeffs_in(p: Poly, i: int) -> Dict[int, Poly]:
    """View p as a univariate polynomial in variable i with coefficients free of x_i."""
    out: Dict[int, Dict[Monomial, mpq]] = {}
    for m, c in p.terms.items():
        e = m[i]
        mm = m[:i] + (0,) + m[i + 1:]
        out.setdefault(e, {})[mm] = c
    return {e: Poly(p.ring, t) for e, t in out.items()}


def _content_in(p: Poly, i: int) -> Poly:
    g = None
    for c in _coeffs_in(p, i).values():
        g = c if g is None else poly_gcd(g, c)
        if g.is_constant():
            return p.ring.one()
    return g if g is not None else p.ring.zero()


def _lead_in(p: Poly, i: int) -> Tuple[int, Poly]:
    cs = _coeffs_in(p, i)
    d = max(cs)
    return d, cs[d]


def _prem(p: Poly, q: Poly, i: int) -> Poly:
    dq, lq = _lead_in(q, i)
    r = p
    while r:
        dr, lr = _lead_in(r, i)
        if dr < dq:
            break
        e = [0] * p.ring.n
        e[i] = dr - dq
        r = r * lq - lr * p.ring.monomial(e) * q
    return r


def _monomial_gcd(m: Monomial, p: Poly) -> Poly:
    lo = list(m)
    for mm in p.terms:
        lo = [min(a, b) for a, b in zip(lo, mm)]
    return p.ring.monomial(lo)


# Heuristic gcd: evaluate one variable at a large integer, take the gcd of
# the images recursively, rebuild by balanced xi-adic expansion and keep the
# candidate only if it divides both inputs.  Falls back to the PRS below.

_HEU_TRIES = 6


def _int_terms(p: Poly) -> Dict[Monomial, mpz]:
    return {m: mpz(c) for m, c in p.terms.items()}


def _int_content(t: Dict[Monomial, mpz]) -> mpz:
    g = mpz(0)
    for c in t.values():
        g = _gcd(g, c)
        if g == 1:
            break
    return g


def _eval_var(t: Dict[Monomial, mpz], i: int, xi: mpz) -> Dict[Monomial, mpz]:
    powers: Dict[int, mpz] = {}
    out: Dict[Monomial, mpz] = {}
    for m, c in t.items():
        e = m[i]
        if e not in powers:
            powers[e] = xi ** e
        mm = m[:i] + (0,) + m[i + 1:]
        out[mm] = out.get(mm, 0) + c * powers[e]
    return {m: c for m, c in out.items() if c}


def _interpolate(t: Dict[Monomial, mpz], i: int, xi: mpz) -> Dict[Monomial, mpz]:
    out: Dict[Monomial, mpz] = {}
    half = xi // 2
    k = 0
    t = dict(t)
    while t:
        nxt = {}
        for m, c in t.items():
            r = c % xi
            if r > half:
                r -= xi
            if r:
                out[m[:i] + (k,) + m[i + 1:]] = r
            q = (c - r) // xi
            if q:
                nxt[m] = q
        t = nxt
        k += 1
    return out


def _divides(d: Dict[Monomial, mpz], t: Dict[Monomial, mpz], ring: PolyRing) -> bool:
    _, r = Poly(ring, {m: mpq(c) for m, c in t.items()}).divmod_lead(
        Poly(ring, {m: mpq(c) for m, c in d.items()}))
    return not r


def _quotient(t: Dict[Monomial, mpz], d: Dict[Monomial, mpz], ring: PolyRing):
    q, r = Poly(ring, {m: mpq(c) for m, c in t.items()}).divmod_lead(
        Poly(ring, {m: mpq(c) for m, c in d.items()}))
    if r or any(c.denominator != 1 for c in q.terms.values()):
        return None
    return _int_terms(q)


def _used(t: Dict[Monomial, mpz]) -> set:
    return {i for m in t for i, e in enumerate(m) if e}


def _heu_gcd(f: Dict[Monomial, mpz], g: Dict[Monomial, mpz], ring: PolyRing):
    """gcd of integer polynomials given as term dicts, or None if the heuristic gives up."""
    cf, cg = _int_content(f), _int_content(g)
    cont = _gcd(cf, cg)
    f = {m: c // cf for m, c in f.items()}
    g = {m: c // cg for m, c in g.items()}
    vf, vg = _used(f), _used(g)
    if not vf or not vg:
        return {(0,) * ring.n: cont}
    i = max(vf | vg)
    nf = max(abs(c) for c in f.values())
    ng = max(abs(c) for c in g.values())
    b = 2 * min(nf, ng) + 29
    xi = max(min(b, 99 * isqrt(b)), 2 * min(nf, ng) + 2)
    for _ in range(_HEU_TRIES):
        ff, gg = _eval_var(f, i, xi), _eval_var(g, i, xi)
        if ff and gg:
            h = _heu_gcd(ff, gg, ring)
            if h is not None:
                cand = _interpolate(h, i, xi)
                cc = _int_content(cand)
                cand = {m: c // cc for m, c in cand.items()}
                if _divides(cand, f, ring) and _divides(cand, g, ring):
                    return {m: c * cont for m, c in cand.items()}
                for img, full, other in ((ff, f, g), (gg, g, f)):
                    co = _quotient(img, h, ring)
                    if co is None:
                        continue
                    co = _interpolate(co, i, xi)
                    cand = _quotient(full, co, ring)
                    if cand is not None and _divides(cand, other, ring):
                        cc = _int_content(cand)
                        return {m: c // cc * cont for m, c in cand.items()}
        xi = xi * 73794 * isqrt(isqrt(xi)) // 27011
    return None


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Greatest common divisor, normalized integral primitive with positive leading coefficient."""
    if p.ring != q.ring:
        raise AmbientMismatchError(f"{p.ring} vs {q.ring}")
    if not p.terms:
        return q.primitive()[1] if q.terms else q
    if not q.terms:
        return p.primitive()[1]
    if p.is_constant() or q.is_constant():
        return p.ring.one()
    if len(p.terms) == 1:
        return _monomial_gcd(next(iter(p.terms)), q)
    if len(q.terms) == 1:
        return _monomial_gcd(next(iter(q.terms)), p)
    if p == q:
        return p.primitive()[1]
    vp, vq = p.variables_used(), q.variables_used()
    common = vp & vq
    if not common:
        return p.ring.one()
    for i in sorted(vp - vq):
        p = _content_in(p, i)
    for i in sorted(vq - vp):
        q = _content_in(q, i)
    if p.is_constant() or q.is_constant():
        return p.ring.one()
    if (vp - vq) or (vq - vp):
        return poly_gcd(p, q)
    h = _heu_gcd(_int_terms(p.primitive()[1]), _int_terms(q.primitive()[1]), p.ring)
    if h is not None:
        return Poly(p.ring, {m: mpq(c) for m, c in h.items()}).primitive()[1]
    i = min(common, key=lambda j: (max(p.degree_in(j), q.degree_in(j)), j))
    cp, cq = _content_in(p, i), _content_in(q, i)
    c = poly_gcd(cp, cq)
    a, b = p.divexact(cp), q.divexact(cq)
    if a.degree_in(i) < b.degree_in(i):
        a, b = b, a
    while True:
        r = _prem(a, b, i)
        if not r:
            g = b
            break
        if r.degree_in(i) <= 0:
            g = p.ring.one()
            break
        a, b = b, r.divexact(_content_in(r, i))
    g = g.divexact(_content_in(g, i)) * c
    return g.primitive()[1]


# ---------------------------------------------------------------------------

def monomials_up_to(n: int, degree: int) -> Iterable[Monomial]:
    for m in product(range(degree + 1), repeat=n):
        if sum(m) <= degree:
            yield m


def random_poly(seed, degree_bound: int, variable_count: int, ring: PolyRing | None = None,
                coeff_range: Tuple[int, int] = (-5, 5), density: float = 0.5) -> Poly:
    """Deterministic pseudo-random polynomial of total degree at most ``degree_bound``.

    Each monomial of degree <= bound is kept with probability ``density`` and
    gets a coefficient drawn uniformly from ``coeff_range``.  A seed may be an
    int or a ``random.Random`` instance.
    """
    if degree_bound < 0:
        raise ValueError("degree bound must be nonnegative")
    if ring is None:
        ring = PolyRing([f"x{i}" for i in range(variable_count)])
    if ring.n != variable_count:
        raise ValueError("variable count does not match the ring")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    lo, hi = coeff_range
    terms = {}
    for m in sorted(monomials_up_to(variable_count, degree_bound), key=grlex_key):
        if sum(m) == 0 or rng.random() < density:
            c = rng.randint(lo, hi)
            if c:
                terms[m] = mpq(c)
    return Poly(ring, terms)
