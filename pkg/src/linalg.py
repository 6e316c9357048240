"""
Exact dense linear algebra over the fields of src.scalars.
Rank, kernel, solving, subspace calculus and Frobenius-semilinear maps.

Matrices over GF(2) are row-reduced on bit-packed numpy words with
exclusive-or row operations; every other field goes through the generic
exact Gauss-Jordan elimination. Both paths return the same values.
"""

import logging
from dataclasses import dataclass
from typing import Any, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from config import LOG_LEVEL
from src.scalars import Field

# Configure logging
logging.basicConfig(level=LOG_LEVEL, format='%(asctime)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

Vector = Tuple[Any, ...]


def _is_gf2(field: Field) -> bool:
    return getattr(field, "order", None) == 2


@dataclass(frozen=True)
class Matrix:
    """Immutable rows x cols matrix with entries in one field."""

    field: Field
    entries: Tuple[Tuple[Any, ...], ...]
    cols: int

    @classmethod
    def from_rows(cls, field: Field, rows: Iterable[Sequence[Any]], cols: Optional[int] = None) -> "Matrix":
        """
        Build a matrix from row sequences.

        Args:
            field: Field of the entries
            rows: Row sequences; ints are mapped through field.from_int
            cols: Column count, required when there are no rows

        Returns:
            The matrix
        """
        converted = tuple(
            tuple(field.from_int(x) if isinstance(x, int) else x for x in row) for row in rows
        )
        width = cols if cols is not None else (len(converted[0]) if converted else 0)
        for row in converted:
            if len(row) != width:
                raise ValueError(f"ragged matrix: expected {width} columns, got {len(row)}")
        return cls(field, converted, width)

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence[Any]], rows: int) -> "Matrix":
        return cls.from_rows(field, zip(*columns), len(columns)) if columns else cls.zero(field, rows, 0)

    @classmethod
    def zero(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls(field, tuple(tuple(field.zero for _ in range(cols)) for _ in range(rows)), cols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(
            field,
            tuple(tuple(field.one if i == j else field.zero for j in range(n)) for i in range(n)),
            n,
        )

    @classmethod
    def unflatten(cls, field: Field, vector: Sequence[Any], n: int) -> "Matrix":
        """Inverse of flatten for an n x n matrix stored row-major."""
        if len(vector) != n * n:
            raise ValueError(f"vector of length {len(vector)} is not an {n}x{n} matrix")
        return cls(field, tuple(tuple(vector[i * n:(i + 1) * n]) for i in range(n)), n)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index: Tuple[int, int]) -> Any:
        i, j = index
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def flatten(self) -> Vector:
        return tuple(x for row in self.entries for x in row)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, tuple(self.column(j) for j in range(self.cols)), self.rows)

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError(f"cannot add {self.rows}x{self.cols} and {other.rows}x{other.cols} matrices")
        return Matrix(
            self.field,
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)),
            self.cols,
        )

    __sub__ = __add__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        zero = self.field.zero
        other_cols = [other.column(j) for j in range(other.cols)]
        result = []
        for row in self.entries:
            out = []
            for col in other_cols:
                acc = zero
                for a, b in zip(row, col):
                    if a and b:
                        acc = acc + a * b
                out.append(acc)
            result.append(tuple(out))
        return Matrix(self.field, tuple(result), other.cols)

    def scale(self, c: Any) -> "Matrix":
        return Matrix(self.field, tuple(tuple(c * x for x in row) for row in self.entries), self.cols)

    def apply(self, vector: Sequence[Any]) -> Vector:
        """Matrix times column vector."""
        if len(vector) != self.cols:
            raise ValueError(f"vector of length {len(vector)} does not match {self.cols} columns")
        zero = self.field.zero
        out = []
        for row in self.entries:
            acc = zero
            for a, b in zip(row, vector):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return tuple(out)

    def is_zero(self) -> bool:
        return not any(x for row in self.entries for x in row)

    def support(self) -> str:
        """Nonzero entries as a1_2+c*a3_4 (1-based); "0" for the zero matrix."""
        one = self.field.one
        entries = [f"a{i + 1}_{j + 1}" if x == one else f"{x}*a{i + 1}_{j + 1}"
                   for i, row in enumerate(self.entries) for j, x in enumerate(row) if x]
        return "+".join(entries) or "0"

    def determinant(self) -> Any:
        """Determinant by exact elimination."""
        if not self.is_square:
            raise ValueError("determinant of a non-square matrix")
        rows = [list(r) for r in self.entries]
        n = self.rows
        det = self.field.one
        for c in range(n):
            pivot = next((r for r in range(c, n) if rows[r][c]), None)
            if pivot is None:
                return self.field.zero
            if pivot != c:
                rows[c], rows[pivot] = rows[pivot], rows[c]
                det = -det
            det = det * rows[c][c]
            inv = rows[c][c].inverse()
            for r in range(c + 1, n):
                if rows[r][c]:
                    factor = rows[r][c] * inv
                    rows[r] = [x - factor * y for x, y in zip(rows[r], rows[c])]
        return det

    def to_gf2_array(self) -> np.ndarray:
        """0/1 array of a GF(2) matrix."""
        return np.array([[x.value for x in row] for row in self.entries], dtype=np.uint8).reshape(
            self.rows, self.cols
        )

    @classmethod
    def from_gf2_array(cls, field: Field, array: np.ndarray) -> "Matrix":
        one, zero = field.one, field.zero
        return cls(field, tuple(tuple(one if x else zero for x in row) for row in array.tolist()),
                   int(array.shape[1]))

    def __str__(self) -> str:
        return "\n".join(" ".join(self.field.format(x) for x in row) for row in self.entries)


# ---------------------------------------------------------------------------
# Row reduction
# ---------------------------------------------------------------------------

def _gf2_rref_packed(bits: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    """
    Reduced row echelon form of a 0/1 matrix.
    Rows are packed into uint8 words; elimination is word-wise XOR.
    """
    m, n = bits.shape
    if m == 0 or n == 0:
        return bits.copy(), []
    words = np.packbits(bits, axis=1)
    pivots = []
    r = 0
    for c in range(n):
        if r >= m:
            break
        byte, mask = c >> 3, 0x80 >> (c & 7)
        hits = np.nonzero(words[r:, byte] & mask)[0]
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            words[[r, p]] = words[[p, r]]
        ones = np.nonzero(words[:, byte] & mask)[0]
        ones = ones[ones != r]
        if ones.size:
            words[ones] ^= words[r]
        pivots.append(c)
        r += 1
    return np.unpackbits(words, axis=1, count=n), pivots


def _generic_rref(m: Matrix) -> Tuple[List[List[Any]], List[int]]:
    field = m.field
    rows = [list(r) for r in m.entries]
    pivots = []
    r = 0
    for c in range(m.cols):
        if r >= m.rows:
            break
        pivot = next((i for i in range(r, m.rows) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][c].inverse()
        if inv != field.one:
            rows[r] = [x * inv for x in rows[r]]
        for i in range(m.rows):
            if i != r and rows[i][c]:
                factor = rows[i][c]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


def rref(m: Matrix) -> Tuple[Matrix, Tuple[int, ...]]:
    """
    Reduced row echelon form with pivot columns ascending.

    Args:
        m: Matrix over any supported field

    Returns:
        (reduced matrix, pivot columns)
    """
    if _is_gf2(m.field):
        reduced, pivots = _gf2_rref_packed(m.to_gf2_array())
        return Matrix.from_gf2_array(m.field, reduced.reshape(m.rows, m.cols)), tuple(pivots)
    rows, pivots = _generic_rref(m)
    return Matrix(m.field, tuple(tuple(r) for r in rows), m.cols), tuple(pivots)


def rank(m: Matrix) -> int:
    """Row rank (= column rank) by exact elimination."""
    return len(rref(m)[1])


def kernel_basis(m: Matrix) -> "Subspace":
    """
    Null space {v : m v = 0} in canonical echelon form.

    Args:
        m: Matrix

    Returns:
        Subspace of dimension cols - rank
    """
    reduced, pivots = rref(m)
    field = m.field
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = [field.zero] * m.cols
        v[free] = field.one
        for i, p in enumerate(pivots):
            v[p] = -reduced[i, free]
        basis.append(tuple(v))
    return Subspace.span(field, m.cols, basis)


def solve(m: Matrix, rhs: Sequence[Any]) -> Optional[Vector]:
    """
    Solve m x = rhs.

    Args:
        m: Coefficient matrix
        rhs: Right-hand side of length m.rows

    Returns:
        One solution (free variables set to zero), or None if inconsistent
    """
    if len(rhs) != m.rows:
        raise ValueError(f"right-hand side of length {len(rhs)} does not match {m.rows} rows")
    field = m.field
    augmented = Matrix(field, tuple(tuple(row) + (b,) for row, b in zip(m.entries, rhs)), m.cols + 1)
    reduced, pivots = rref(augmented)
    if pivots and pivots[-1] == m.cols:
        return None
    solution = [field.zero] * m.cols
    for i, p in enumerate(pivots):
        solution[p] = reduced[i, m.cols]
    return tuple(solution)


# ---------------------------------------------------------------------------
# Subspaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """Subspace of field^ambient_dim stored by its reduced row echelon basis."""

    field: Field
    ambient_dim: int
    basis: Tuple[Vector, ...]

    @classmethod
    def span(cls, field: Field, ambient_dim: int, vectors: Iterable[Sequence[Any]]) -> "Subspace":
        rows = [tuple(v) for v in vectors]
        for v in rows:
            if len(v) != ambient_dim:
                raise ValueError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
        if not rows:
            return cls(field, ambient_dim, ())
        reduced, pivots = rref(Matrix(field, tuple(rows), ambient_dim))
        return cls(field, ambient_dim, tuple(reduced.row(i) for i in range(len(pivots))))

    @classmethod
    def zero(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, ())

    @classmethod
    def full(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls.span(field, ambient_dim, Matrix.identity(field, ambient_dim).entries)

    @classmethod
    def coordinate(cls, field: Field, ambient_dim: int, indices: Iterable[int]) -> "Subspace":
        """Span of the standard basis vectors e_i for i in indices (0-based)."""
        identity = Matrix.identity(field, ambient_dim)
        return cls.span(field, ambient_dim, [identity.row(i) for i in indices])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> Matrix:
        """Basis vectors as the rows of a matrix."""
        return Matrix(self.field, self.basis, self.ambient_dim)

    def _check(self, other: "Subspace") -> None:
        if other.ambient_dim != self.ambient_dim:
            raise ValueError(
                f"ambient dimension mismatch: {self.ambient_dim} vs {other.ambient_dim}"
            )

    def contains(self, v: Sequence[Any]) -> bool:
        if len(v) != self.ambient_dim:
            raise ValueError(f"vector of length {len(v)} in ambient dimension {self.ambient_dim}")
        if not any(v):
            return True
        return Subspace.span(self.field, self.ambient_dim, self.basis + (tuple(v),)).dim == self.dim

    def is_subspace_of(self, other: "Subspace") -> bool:
        self._check(other)
        return (self + other).dim == other.dim

    def vector_outside(self, other: "Subspace") -> Optional[Vector]:
        """First basis vector of this subspace not contained in other, or None."""
        self._check(other)
        for b in self.basis:
            if not other.contains(b):
                return b
        return None

    def difference_witness(self, other: "Subspace") -> Optional[Vector]:
        """A basis vector in one of the two subspaces but not the other; None when they are equal."""
        found = self.vector_outside(other)
        return found if found is not None else other.vector_outside(self)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.field, self.ambient_dim, self.basis + other.basis)

    def sum(self, other: "Subspace") -> "Subspace":
        return self + other

    def annihilator(self) -> "Subspace":
        """Linear functionals (as coordinate vectors) vanishing on this subspace."""
        if not self.basis:
            return Subspace.full(self.field, self.ambient_dim)
        return kernel_basis(self.matrix())

    def intersection(self, other: "Subspace") -> "Subspace":
        self._check(other)
        equations = self.annihilator().basis + other.annihilator().basis
        if not equations:
            return Subspace.full(self.field, self.ambient_dim)
        return kernel_basis(Matrix(self.field, equations, self.ambient_dim))

    def perp(self, gram: Matrix) -> "Subspace":
        """Orthogonal complement {v : w^T gram v = 0 for all w} for a bilinear form's gram matrix."""
        if not self.basis:
            return Subspace.full(self.field, self.ambient_dim)
        return kernel_basis(self.matrix() @ gram)


@dataclass(frozen=True)
class QuotientMap:
    """A surjection V -> V/sub with a linear section."""

    projection: Matrix
    section: Matrix
    sub: Subspace

    @property
    def quotient_dim(self) -> int:
        return self.projection.rows

    def __call__(self, v: Sequence[Any]) -> Vector:
        return self.projection.apply(v)

    def lift(self, u: Sequence[Any]) -> Vector:
        return self.section.apply(u)


def quotient_map(sub: Subspace) -> QuotientMap:
    """
    Quotient map of the ambient space by sub.

    The projection's rows are a basis of the annihilator of sub, so its kernel
    is exactly sub; the section solves projection * section = identity.
    """
    field, n = sub.field, sub.ambient_dim
    functionals = sub.annihilator()
    projection = Matrix(field, functionals.basis, n)
    q = projection.rows
    columns = []
    identity = Matrix.identity(field, q)
    for j in range(q):
        x = solve(projection, identity.column(j))
        if x is None:
            raise ArithmeticError("quotient projection is not surjective")
        columns.append(x)
    section = Matrix.from_columns(field, columns, n)
    return QuotientMap(projection, section, sub)


def stack(field: Field, vectors: Sequence[Sequence[Any]], cols: int) -> Matrix:
    """Rows-as-vectors matrix, allowing an empty list."""
    return Matrix(field, tuple(tuple(v) for v in vectors), cols)


# ---------------------------------------------------------------------------
# Frobenius-semilinear maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SemilinearMap:
    """
    Additive map f with f(lambda x) = lambda^2 f(x).
    The matrix gives the images of the basis vectors.
    """

    matrix: Matrix
    twist: int = 2

    def __call__(self, v: Sequence[Any]) -> Vector:
        return self.matrix.apply(tuple(x ** self.twist for x in v))

    def image_span(self, vectors: Iterable[Sequence[Any]]) -> Subspace:
        """Span of the images of the given vectors (the additive closure of the image set)."""
        return Subspace.span(self.matrix.field, self.matrix.rows, [self(v) for v in vectors])
