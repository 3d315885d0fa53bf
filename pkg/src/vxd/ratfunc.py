"""Exact rational functions living in a localized polynomial algebra.

An :class:`AlgebraDescriptor` fixes the variables and the polynomials that
are allowed to appear in denominators: the algebra is
``Q[x_1..x_n][S^-1]`` where ``S`` is generated by the declared
denominators.  :class:`RatFunc` values are kept in a canonical reduced form
so that equality of expressions is equality of normal forms.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence, Tuple

from gmpy2 import mpq, mpz

from .errors import AmbientMismatchError, DivisionError, MembershipError, UnitError
from .poly import Poly, PolyRing, poly_gcd


class AlgebraDescriptor:
    """A "small" algebra: a polynomial ring localized at declared polynomials."""

    __slots__ = ("ring", "denominator_generators", "_key", "_supported")

    def __init__(self, variables: Sequence[str] | PolyRing,
                 denominator_generators: Iterable[Poly] = ()):
        ring = variables if isinstance(variables, PolyRing) else PolyRing(variables)
        gens = []
        for g in denominator_generators:
            if g.ring != ring:
                raise AmbientMismatchError("denominator generator over a different ring")
            if g.is_constant():
                raise ValueError("denominator generators must be nonconstant")
            g = g.primitive()[1]
            if g not in gens:
                gens.append(g)
        self.ring = ring
        self.denominator_generators = tuple(gens)
        self._key = (ring.variables, frozenset(gens))
        self._supported = {}

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.ring.variables

    @property
    def n(self) -> int:
        return self.ring.n

    def __eq__(self, other: object) -> bool:
        return isinstance(other, AlgebraDescriptor) and other._key == self._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        gens = ", ".join(str(g) for g in self.denominator_generators)
        return f"AlgebraDescriptor({list(self.variables)!r}, [{gens}])"

    def localize(self, *extra: Poly) -> "AlgebraDescriptor":
        return AlgebraDescriptor(self.ring, self.denominator_generators + tuple(extra))

    def is_supported(self, p: Poly) -> bool:
        """True iff every irreducible factor of p divides a product of the generators."""
        if p.is_constant():
            return bool(p)
        hit = self._supported.get(p)
        if hit is not None:
            return hit
        rest = p
        progress = True
        while progress and not rest.is_constant():
            progress = False
            for g in self.denominator_generators:
                d = poly_gcd(rest, g)
                if not d.is_constant():
                    rest = rest.divexact(d)
                    progress = True
        ok = rest.is_constant()
        self._supported[p] = ok
        return ok

    # constructors -----------------------------------------------------
    def zero(self) -> "RatFunc":
        return RatFunc(self, self.ring.zero(), self.ring.one())

    def one(self) -> "RatFunc":
        return RatFunc(self, self.ring.one(), self.ring.one())

    def const(self, c) -> "RatFunc":
        return RatFunc(self, self.ring.const(mpq(c)), self.ring.one())

    def gen(self, i: int) -> "RatFunc":
        return RatFunc(self, self.ring.gen(i), self.ring.one())

    def var(self, name: str) -> "RatFunc":
        return self.gen(self.ring.index(name))

    def gens(self) -> Tuple["RatFunc", ...]:
        return tuple(self.gen(i) for i in range(self.n))

    def poly(self, p: Poly) -> "RatFunc":
        if p.ring != self.ring:
            raise AmbientMismatchError("polynomial over a different ring")
        return RatFunc(self, p, self.ring.one())

    def parse(self, text: str) -> "RatFunc":
        from .expr import parse_expr

        return parse_expr(text, self)


@lru_cache(maxsize=256)
def _join(a: AlgebraDescriptor, b: AlgebraDescriptor) -> AlgebraDescriptor:
    return AlgebraDescriptor(a.ring, a.denominator_generators + b.denominator_generators)


def join_ambient(a: AlgebraDescriptor, b: AlgebraDescriptor) -> AlgebraDescriptor:
    """Smallest declared localization containing both; variables must agree."""
    if a is b or a == b:
        return a
    if a.ring != b.ring:
        raise AmbientMismatchError(f"{a} vs {b}")
    return _join(a, b)


def normalize(num: Poly, den: Poly, ambient: AlgebraDescriptor) -> "RatFunc":
    """Canonical representative of num/den in the given algebra."""
    if not den:
        raise DivisionError("zero denominator")
    if not num:
        return ambient.zero()
    if not den.is_constant():
        g = poly_gcd(num, den)
        if not g.is_constant():
            num = num.divexact(g)
            den = den.divexact(g)
    if den.is_constant():
        return RatFunc(ambient, num.scale(1 / den.constant_value()), ambient.ring.one())
    c, den = den.primitive()
    num = num.scale(1 / c)
    if not ambient.is_supported(den):
        raise MembershipError(f"denominator {den} is not invertible in {ambient}")
    return RatFunc(ambient, num, den)


_SCALARS = (int, mpq, mpz)


class RatFunc:
    """Element num/den of a localized polynomial algebra, stored reduced.

    Invariants: gcd(num, den) = 1, den integral primitive with positive
    leading coefficient (den = 1 for polynomials), den supported by the
    ambient's denominator generators.
    """

    __slots__ = ("ambient", "num", "den", "_hash")

    def __init__(self, ambient: AlgebraDescriptor, num: Poly, den: Poly):
        self.ambient = ambient
        self.num = num
        self.den = den
        self._hash = None

    def _other(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, _SCALARS):
            return self.ambient.const(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.den.is_constant() and self.num.is_constant()

    def constant_value(self) -> mpq:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num.constant_value()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RatFunc):
            return (self.ambient.ring == other.ambient.ring and self.num == other.num
                    and self.den == other.den)
        if isinstance(other, _SCALARS):
            return self.is_constant() and self.num.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __add__(self, other) -> "RatFunc":
        other = self._other(other)
        if other is NotImplemented:
            return other
        amb = join_ambient(self.ambient, other.ambient)
        if not other.num:
            return self if amb is self.ambient else RatFunc(amb, self.num, self.den)
        if not self.num:
            return other if amb is other.ambient else RatFunc(amb, other.num, other.den)
        d1, d2 = self.den, other.den
        one1, one2 = d1.is_constant(), d2.is_constant()
        if one1 and one2:
            return RatFunc(amb, self.num + other.num, d1)
        if one2:
            return RatFunc(amb, self.num + other.num * d1, d1)
        if one1:
            return RatFunc(amb, self.num * d2 + other.num, d2)
        if d1 == d2:
            return normalize(self.num + other.num, d1, amb)
        return normalize(self.num * d2 + other.num * d1, d1 * d2, amb)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(self.ambient, -self.num, self.den)

    def __sub__(self, other) -> "RatFunc":
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "RatFunc":
        return (-self) + other

    def scale(self, c) -> "RatFunc":
        c = mpq(c)
        if not c:
            return self.ambient.zero()
        return RatFunc(self.ambient, self.num.scale(c), self.den)

    def __mul__(self, other) -> "RatFunc":
        if isinstance(other, _SCALARS):
            return self.scale(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        amb = join_ambient(self.ambient, other.ambient)
        if not self.num or not other.num:
            return amb.zero()
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        one1, one2 = d1.is_constant(), d2.is_constant()
        if one1 and one2:
            return RatFunc(amb, n1 * n2, d1)
        if not one2:
            g = poly_gcd(n1, d2)
            if not g.is_constant():
                n1, d2 = n1.divexact(g), d2.divexact(g)
        if not one1:
            g = poly_gcd(n2, d1)
            if not g.is_constant():
                n2, d1 = n2.divexact(g), d1.divexact(g)
        num, den = n1 * n2, d1 * d2
        if den.is_constant():
            return RatFunc(amb, num.scale(1 / den.constant_value()), amb.ring.one())
        c, den = den.primitive()
        return RatFunc(amb, num.scale(1 / c), den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise DivisionError("inverse of zero")
        return normalize(self.den, self.num, self.ambient)

    def __truediv__(self, other) -> "RatFunc":
        if isinstance(other, _SCALARS):
            if not other:
                raise DivisionError("division by zero")
            return self.scale(1 / mpq(other))
        if not isinstance(other, RatFunc):
            return NotImplemented
        if not other.num:
            raise DivisionError("division by zero")
        amb = join_ambient(self.ambient, other.ambient)
        return normalize(self.num * other.den, self.den * other.num, amb)

    def __rtruediv__(self, other) -> "RatFunc":
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, k: int) -> "RatFunc":
        if not isinstance(k, int):
            raise TypeError("integer exponent required")
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(self.ambient, self.num ** k, self.den ** k)

    def is_unit(self) -> bool:
        return bool(self.num) and self.ambient.is_supported(self.num)

    def require_unit(self) -> "RatFunc":
        if not self.is_unit():
            raise UnitError(f"{self} is not a unit of {self.ambient}")
        return self

    def partial(self, i: int) -> "RatFunc":
        return partial(self, i)

    def with_ambient(self, ambient: AlgebraDescriptor) -> "RatFunc":
        """Re-read this value in another localization of the same ring."""
        if ambient.ring != self.ambient.ring:
            raise AmbientMismatchError(f"{self.ambient} vs {ambient}")
        if not self.den.is_constant() and not ambient.is_supported(self.den):
            raise MembershipError(f"{self} does not belong to {ambient}")
        return RatFunc(ambient, self.num, self.den)

    def to_str(self) -> str:
        from .expr import format_ratfunc

        return format_ratfunc(self)

    __str__ = to_str

    def __repr__(self) -> str:
        return f"RatFunc({self.to_str()!r})"


def partial(f: RatFunc, i: int) -> RatFunc:
    """Exact partial derivative with respect to the i-th declared variable."""
    n = f.ambient.n
    if not 0 <= i < n:
        raise IndexError(f"variable index {i} out of range for {n} variables")
    if f.den.is_constant():
        return RatFunc(f.ambient, f.num.diff(i), f.den)
    num = f.num.diff(i) * f.den - f.num * f.den.diff(i)
    return normalize(num, f.den * f.den, f.ambient)
