"""Dense matrices over a small algebra."""
from __future__ import annotations

from typing import Callable, List, Sequence

from .errors import DimensionError, SingularMatrixError, UnitError
from .ratfunc import AlgebraDescriptor, RatFunc


class MatrixA:
    __slots__ = ("ambient", "rows", "cols", "entries")

    def __init__(self, ambient: AlgebraDescriptor, entries: Sequence[Sequence[RatFunc]]):
        rows = [list(r) for r in entries]
        if not rows or not rows[0]:
            raise DimensionError("matrices must be nonempty")
        cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise DimensionError("ragged matrix")
        self.ambient = ambient
        self.rows = len(rows)
        self.cols = cols
        self.entries = tuple(tuple(r) for r in rows)

    @classmethod
    def identity(cls, ambient: AlgebraDescriptor, n: int) -> "MatrixA":
        one, zero = ambient.one(), ambient.zero()
        return cls(ambient, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def parse(cls, ambient: AlgebraDescriptor, grid: Sequence[Sequence[str]]) -> "MatrixA":
        from .expr import parse_expr

        return cls(ambient, [[parse_expr(str(e), ambient) for e in row] for row in grid])

    def __getitem__(self, ij) -> RatFunc:
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MatrixA) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def to_strings(self) -> List[List[str]]:
        return [[str(e) for e in row] for row in self.entries]

    def __repr__(self) -> str:
        return f"MatrixA({self.to_strings()!r})"

    def __add__(self, other: "MatrixA") -> "MatrixA":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("shape mismatch in matrix sum")
        return MatrixA(self.ambient, [[a + b for a, b in zip(r, s)]
                                      for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other: "MatrixA") -> "MatrixA":
        return self + other.scale(-1)

    def scale(self, c) -> "MatrixA":
        return self.apply(lambda e: e * c)

    def __mul__(self, other: "MatrixA") -> "MatrixA":
        return mat_mul(self, other)

    def apply(self, f: Callable[[RatFunc], RatFunc]) -> "MatrixA":
        return MatrixA(self.ambient, [[f(e) for e in row] for row in self.entries])

    def with_ambient(self, ambient: AlgebraDescriptor) -> "MatrixA":
        return MatrixA(ambient, [[e.with_ambient(ambient) for e in row] for row in self.entries])


def mat_mul(a: MatrixA, b: MatrixA) -> MatrixA:
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    zero = a.ambient.zero()
    out = []
    for i in range(a.rows):
        row = []
        for j in range(b.cols):
            s = zero
            for k in range(a.cols):
                x, y = a.entries[i][k], b.entries[k][j]
                if x and y:
                    s = s + x * y
            row.append(s)
        out.append(row)
    return MatrixA(a.ambient, out)


def mat_transpose(m: MatrixA) -> MatrixA:
    return MatrixA(m.ambient, [[m.entries[i][j] for i in range(m.rows)] for j in range(m.cols)])


def mat_apply_entrywise(m: MatrixA, f: Callable[[RatFunc], RatFunc]) -> MatrixA:
    return m.apply(f)


def mat_trace(m: MatrixA) -> RatFunc:
    if not m.is_square():
        raise DimensionError("trace of a non-square matrix")
    s = m.ambient.zero()
    for i in range(m.rows):
        s = s + m.entries[i][i]
    return s


def mat_det(m: MatrixA) -> RatFunc:
    """Determinant by fraction-free (Bareiss) elimination."""
    if not m.is_square():
        raise DimensionError("determinant of a non-square matrix")
    n = m.rows
    a = [list(r) for r in m.entries]
    sign = 1
    prev = m.ambient.one()
    for k in range(n - 1):
        if not a[k][k]:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return m.ambient.zero()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return -d if sign < 0 else d


def mat_inverse(m: MatrixA) -> MatrixA:
    """Exact inverse; the determinant must be a unit of the ambient algebra."""
    if not m.is_square():
        raise DimensionError("inverse of a non-square matrix")
    det = mat_det(m)
    if not det:
        raise SingularMatrixError("matrix is singular")
    if not det.is_unit():
        raise UnitError(f"determinant {det} is not a unit of {m.ambient}")
    n = m.rows
    amb = m.ambient
    if n == 1:
        return MatrixA(amb, [[det.inverse()]])
    dinv = det.inverse()
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = MatrixA(amb, [[m.entries[r][c] for c in range(n) if c != i]
                                  for r in range(n) if r != j])
            cof = mat_det(minor)
            row.append(cof * dinv if (i + j) % 2 == 0 else -(cof * dinv))
        out.append(row)
    return MatrixA(amb, out)
