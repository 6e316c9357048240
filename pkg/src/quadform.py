"""
Quadratic forms in characteristic two.
Evaluation, polarization, radical, non-degeneracy, isotropy, hyperbolic
planes and direct sums, plus the exact-sequence reports for Sym^2.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from config import ENUMERATION_BOUND, LOG_LEVEL
from src.linalg import Matrix, SemilinearMap, Subspace, kernel_basis, rank
from src.scalars import Field

# Configure logging
logging.basicConfig(level=LOG_LEVEL, format='%(asctime)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)


def monomial_name(i: int, j: int) -> str:
    """1-based monomial label, e.g. x1*x6 or x5^2."""
    return f"x{i + 1}^2" if i == j else f"x{i + 1}*x{j + 1}"


@dataclass(frozen=True)
class MonomialIndex:
    """
    Coordinates of Sym^2 (pairs i <= j) or Lambda^2 (pairs i < j) on n letters.
    The same index serves S_2(V), whose coordinates are the entries i <= j of a symmetric matrix.
    """

    n: int
    strict: bool = False

    @property
    def pairs(self) -> Tuple[Tuple[int, int], ...]:
        offset = 1 if self.strict else 0
        return tuple((i, j) for i in range(self.n) for j in range(i + offset, self.n))

    @property
    def dim(self) -> int:
        return self.n * (self.n - 1) // 2 if self.strict else self.n * (self.n + 1) // 2

    def index(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        return self.pairs.index((i, j))


@dataclass(frozen=True)
class BilinearForm:
    """Bilinear form given by its gram matrix."""

    field: Field
    dim: int
    gram: Matrix

    def pair(self, v: Sequence[Any], w: Sequence[Any]) -> Any:
        gw = self.gram.apply(w)
        acc = self.field.zero
        for a, b in zip(v, gw):
            acc = acc + a * b
        return acc

    def is_symmetric(self) -> bool:
        return self.gram == self.gram.transpose()

    def is_alternating(self) -> bool:
        return self.is_symmetric() and not any(self.gram[i, i] for i in range(self.dim))

    def induced_map(self) -> Matrix:
        """The map V -> V*, v |-> beta(v, .), in dual coordinates."""
        return self.gram.transpose()

    def radical(self) -> Subspace:
        return kernel_basis(self.gram)


@dataclass(frozen=True)
class QuadraticForm:
    """
    Q(v) = sum_{i <= j} C[i][j] v_i v_j, stored as the upper-triangular array C.
    Entries below the diagonal are always zero.
    """

    field: Field
    dim: int
    coeffs: Tuple[Tuple[Any, ...], ...]

    @classmethod
    def from_terms(cls, field: Field, dim: int, terms: Dict[Tuple[int, int], Any]) -> "QuadraticForm":
        """
        Build a form from 0-based monomial coefficients.

        Args:
            field: Coefficient field
            dim: Number of variables
            terms: {(i, j): c}; ints are mapped through field.from_int, (j, i) is folded onto (i, j)

        Returns:
            The quadratic form
        """
        rows = [[field.zero] * dim for _ in range(dim)]
        for (i, j), c in terms.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise ValueError(f"monomial ({i}, {j}) out of range for dimension {dim}")
            if i > j:
                i, j = j, i
            rows[i][j] = rows[i][j] + (field.from_int(c) if isinstance(c, int) else c)
        return cls(field, dim, tuple(tuple(r) for r in rows))

    @classmethod
    def zero(cls, field: Field, dim: int) -> "QuadraticForm":
        return cls.from_terms(field, dim, {})

    @classmethod
    def square_of_linear(cls, field: Field, linear: Sequence[Any]) -> "QuadraticForm":
        """The form l(v)^2 for l(v) = sum a_i v_i; in char 2 this is sum a_i^2 v_i^2."""
        return cls.from_terms(field, len(linear), {(i, i): a * a for i, a in enumerate(linear)})

    def coefficient(self, i: int, j: int) -> Any:
        if i > j:
            i, j = j, i
        return self.coeffs[i][j]

    def terms(self) -> Dict[Tuple[int, int], Any]:
        return {(i, j): self.coeffs[i][j] for i in range(self.dim) for j in range(i, self.dim)
                if self.coeffs[i][j]}

    def evaluate(self, v: Sequence[Any]) -> Any:
        if len(v) != self.dim:
            raise ValueError(f"vector of length {len(v)} for a form of dimension {self.dim}")
        acc = self.field.zero
        for i in range(self.dim):
            if not v[i]:
                continue
            for j in range(i, self.dim):
                c = self.coeffs[i][j]
                if c and v[j]:
                    acc = acc + c * v[i] * v[j]
        return acc

    def gram(self) -> Matrix:
        zero = self.field.zero
        return Matrix(
            self.field,
            tuple(tuple(zero if i == j else self.coefficient(i, j) for j in range(self.dim))
                  for i in range(self.dim)),
            self.dim,
        )

    def polarize(self) -> BilinearForm:
        """beta(v, w) = Q(v + w) + Q(v) + Q(w); symmetric with zero diagonal."""
        return BilinearForm(self.field, self.dim, self.gram())

    def radical(self) -> Subspace:
        """Kernel of beta~ : V -> V*."""
        return kernel_basis(self.gram())

    def is_nondegenerate(self) -> bool:
        radical = self.radical()
        if self.dim % 2 == 0:
            return radical.dim == 0
        return radical.dim == 1 and bool(self.evaluate(radical.basis[0]))

    def __add__(self, other: "QuadraticForm") -> "QuadraticForm":
        if other.dim != self.dim:
            raise ValueError(f"cannot add forms of dimensions {self.dim} and {other.dim}")
        return QuadraticForm(
            self.field,
            self.dim,
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.coeffs, other.coeffs)),
        )

    def scale(self, c: Any) -> "QuadraticForm":
        return QuadraticForm(self.field, self.dim, tuple(tuple(c * x for x in row) for row in self.coeffs))

    def pullback(self, g: Matrix) -> "QuadraticForm":
        """
        The form v |-> Q(g v) on field^(g.cols).

        Coefficient of v_k^2 is sum C_ij g_ik g_jk; of v_k v_l (k < l) it is
        sum C_ij (g_ik g_jl + g_il g_jk).
        """
        if g.rows != self.dim:
            raise ValueError(f"cannot pull back a form of dimension {self.dim} along {g.rows}x{g.cols}")
        m = g.cols
        zero = self.field.zero
        rows = [[zero] * m for _ in range(m)]
        terms = self.terms()
        for k in range(m):
            for l in range(k, m):
                acc = zero
                for (i, j), c in terms.items():
                    if k == l:
                        prod = g[i, k] * g[j, k]
                    else:
                        prod = g[i, k] * g[j, l] + g[i, l] * g[j, k]
                    if prod:
                        acc = acc + c * prod
                rows[k][l] = acc
        return QuadraticForm(self.field, m, tuple(tuple(r) for r in rows))

    def first_difference(self, other: "QuadraticForm") -> Optional[Tuple[int, int]]:
        """First monomial (i <= j, lexicographic) whose coefficients differ."""
        for i in range(self.dim):
            for j in range(i, self.dim):
                if self.coeffs[i][j] != other.coeffs[i][j]:
                    return i, j
        return None

    def __str__(self) -> str:
        terms = self.terms()
        if not terms:
            return "0"
        parts = []
        for (i, j), c in terms.items():
            name = monomial_name(i, j)
            parts.append(name if c == self.field.one else f"{c}*{name}")
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# Standard forms
# ---------------------------------------------------------------------------

def hyperbolic_plane(field: Field) -> QuadraticForm:
    """H = x1 x2."""
    return QuadraticForm.from_terms(field, 2, {(0, 1): 1})


def direct_sum(*forms: QuadraticForm) -> QuadraticForm:
    """Orthogonal direct sum; coordinates are concatenated in order."""
    if not forms:
        raise ValueError("direct sum of no forms")
    field = forms[0].field
    terms = {}
    offset = 0
    for q in forms:
        if q.field != field:
            raise ValueError(f"cannot sum forms over {field.name} and {q.field.name}")
        for (i, j), c in q.terms().items():
            terms[(i + offset, j + offset)] = c
        offset += q.dim
    return QuadraticForm.from_terms(field, offset, terms)


def direct_sum_report(*forms: QuadraticForm) -> Dict[str, Any]:
    """
    Direct sum with a degeneracy flag.

    Two odd-dimensional non-degenerate summands give a degenerate sum; this is
    flagged in the result rather than raised.

    Returns:
        Dictionary with the form, its non-degeneracy and the flag
    """
    result = direct_sum(*forms)
    odd = [q.dim for q in forms if q.dim % 2 == 1 and q.is_nondegenerate()]
    flagged = len(odd) >= 2
    if flagged:
        logger.warning(f"Direct sum of {len(odd)} odd-dimensional non-degenerate forms is degenerate")
    return {
        "form": result,
        "nondegenerate": result.is_nondegenerate(),
        "odd_summands": len(odd),
        "flagged": flagged,
    }


def so8_form(field: Field) -> QuadraticForm:
    """Q = x1 x7 + x2 x8 + x3 x5 + x4 x6."""
    return QuadraticForm.from_terms(field, 8, {(0, 6): 1, (1, 7): 1, (2, 4): 1, (3, 5): 1})


def so7_form(field: Field) -> QuadraticForm:
    """Q = x1 x6 + x2 x7 + x3 x4 + x5^2."""
    return QuadraticForm.from_terms(field, 7, {(0, 5): 1, (1, 6): 1, (2, 3): 1, (4, 4): 1})


def displayed_so7_gram(field: Field) -> Matrix:
    """
    The 7x7 gram matrix as printed next to the SO(7) form: identity blocks in
    the corners and an identity block (not the antidiagonal one) on (x3, x4).
    """
    rows = [[0] * 7 for _ in range(7)]
    for i, j in ((0, 5), (1, 6), (5, 0), (6, 1), (2, 2), (3, 3)):
        rows[i][j] = 1
    return Matrix.from_rows(field, rows)


# ---------------------------------------------------------------------------
# Isotropy
# ---------------------------------------------------------------------------

def is_isotropic_subspace(q: QuadraticForm, w: Subspace) -> bool:
    """
    Decide Q|_W = 0: Q vanishes on a basis and beta vanishes on basis pairs.
    """
    if w.ambient_dim != q.dim:
        raise ValueError(f"subspace of ambient dimension {w.ambient_dim} for a form of dimension {q.dim}")
    if any(q.evaluate(b) for b in w.basis):
        return False
    beta = q.polarize()
    for i in range(w.dim):
        for j in range(i + 1, w.dim):
            if beta.pair(w.basis[i], w.basis[j]):
                return False
    return True


def _vectors(field: Field, dim: int, start: int, stop: int) -> Iterator[Tuple[Any, ...]]:
    elements = list(field.elements())
    order = len(elements)
    for index in range(start, stop):
        v = []
        for _ in range(dim):
            index, digit = divmod(index, order)
            v.append(elements[digit])
        yield tuple(v)


def all_vectors(field: Field, dim: int) -> Iterator[Tuple[Any, ...]]:
    """Every vector of a finite field's dim-dimensional space, in a fixed order."""
    return _vectors(field, dim, 0, field.order ** dim)


def count_isotropic_vectors(q: QuadraticForm, include_zero: bool = True, workers: int = 1) -> int:
    """
    Count v with Q(v) = 0 by exhaustive enumeration.

    Args:
        q: Form over GF(2^k)
        include_zero: Whether the zero vector is counted
        workers: Threads to shard the vector space over; the result does not depend on it

    Returns:
        Exact count
    """
    field = q.field
    if not getattr(field, "is_finite", False):
        raise ValueError(f"cannot enumerate vectors over {field.name}")
    if field.k * q.dim > ENUMERATION_BOUND:
        raise ValueError(
            f"enumeration bound exceeded: k*dim = {field.k * q.dim} > {ENUMERATION_BOUND}"
        )
    total = field.order ** q.dim
    shards = max(1, min(workers, total))
    bounds = [(total * s // shards, total * (s + 1) // shards) for s in range(shards)]

    def count_shard(bound: Tuple[int, int]) -> int:
        return sum(1 for v in _vectors(field, q.dim, *bound) if not q.evaluate(v))

    if shards == 1:
        count = count_shard(bounds[0])
    else:
        with ThreadPoolExecutor(max_workers=shards) as executor:
            count = sum(executor.map(count_shard, bounds))
    logger.debug(f"Counted {count} isotropic vectors over {total} candidates in {shards} shards")
    return count if include_zero else count - 1


# ---------------------------------------------------------------------------
# Polarization and the Sym^2 sequences
# ---------------------------------------------------------------------------

def polarization_matrix(n: int, field: Field) -> Matrix:
    """
    The polarization map Sym^2(V*) -> S_2(V*) in monomial coordinates.
    Column (i, j) is the upper triangle of the gram matrix of the monomial x_i x_j.
    """
    index = MonomialIndex(n)
    columns = []
    for i, j in index.pairs:
        gram = QuadraticForm.from_terms(field, n, {(i, j): 1}).polarize().gram
        columns.append(tuple(gram[k, l] for k, l in index.pairs))
    return Matrix.from_columns(field, columns, index.dim)


def polarization_report(n: int, field: Field) -> Dict[str, Any]:
    """
    Kernel and cokernel of the polarization map.

    The kernel should be the squares of linear forms (dimension n) and the
    cokernel should be cut out by the diagonal-value functionals b |-> b(e_i, e_i).

    Args:
        n: Dimension of V
        field: Field with square roots (GF(2^k))

    Returns:
        Dictionary with dimensions and verification flags
    """
    if n < 1:
        raise ValueError("polarization report needs n >= 1")
    index = MonomialIndex(n)
    p = polarization_matrix(n, field)
    kernel = kernel_basis(p)

    witnesses: Dict[str, Any] = {}
    for c in kernel.basis:
        form = QuadraticForm.from_terms(field, n, dict(zip(index.pairs, c)))
        if any(c[index.index(i, j)] for i, j in index.pairs if i != j):
            witnesses["kernel_squares"] = form
            break
        roots = [field.sqrt(c[index.index(i, i)]) for i in range(n)]
        if any(r is None for r in roots) or QuadraticForm.square_of_linear(field, roots) != form:
            witnesses["kernel_squares"] = form
            break

    cokernel_functionals = kernel_basis(p.transpose())
    diagonal = Subspace.coordinate(field, index.dim, [index.index(i, i) for i in range(n)])
    outside_diagonal = cokernel_functionals.difference_witness(diagonal)
    if outside_diagonal is not None:
        witnesses["cokernel_diagonal"] = outside_diagonal
    report = {
        "n": n,
        "field": field.name,
        "source_dim": index.dim,
        "target_dim": index.dim,
        "rank": rank(p),
        "kernel_dim": kernel.dim,
        "cokernel_dim": index.dim - rank(p),
        "kernel_squares": "kernel_squares" not in witnesses,
        "cokernel_diagonal": outside_diagonal is None,
        "witnesses": witnesses,
    }
    logger.info(f"Polarization report for n={n} over {field.name}: {report}")
    return report


def symmetric_square(v: Sequence[Any], field: Field) -> Tuple[Any, ...]:
    """Coordinates of v.v in Sym^2 V, expanded as sum_{i,j} v_i v_j e_i e_j."""
    index = MonomialIndex(len(v))
    coords = [field.zero] * index.dim
    for i, a in enumerate(v):
        for j, b in enumerate(v):
            k = index.index(i, j)
            coords[k] = coords[k] + a * b
    return tuple(coords)


def squaring_map(n: int, field: Field) -> SemilinearMap:
    """v |-> v.v as a Frobenius-semilinear map V -> Sym^2 V (e_i |-> e_i^2)."""
    index = MonomialIndex(n)
    columns = []
    for i in range(n):
        col = [field.zero] * index.dim
        col[index.index(i, i)] = field.one
        columns.append(col)
    return SemilinearMap(Matrix.from_columns(field, columns, index.dim))


def _closure_vectors(field: Field, n: int) -> List[Tuple[Any, ...]]:
    if field.is_finite and field.order ** n <= 4096:
        return list(all_vectors(field, n))
    identity = Matrix.identity(field, n)
    vectors = [identity.row(i) for i in range(n)]
    g = field.generator() if hasattr(field, "generator") else field.one
    vectors += [tuple(a + g * b for a, b in zip(identity.row(i), identity.row(j)))
                for i in range(n) for j in range(i + 1, n)]
    return vectors


def sym2_sequence_report(n: int, field: Field) -> Dict[str, Any]:
    """
    Exactness of 0 -> F(V) -> Sym^2 V -> Lambda^2 V -> 0 and of
    0 -> S_2(V) -> V (x) V -> Lambda^2 V -> 0, and image(S_2(V)) = F(V) in Sym^2 V.

    Returns:
        Dictionary with dimensions and verification flags
    """
    if n < 1:
        raise ValueError("sequence report needs n >= 1")
    sym, lam = MonomialIndex(n), MonomialIndex(n, strict=True)
    one, zero = field.one, field.zero

    # Sym^2 V -> Lambda^2 V, e_i e_j |-> e_i ^ e_j, e_i^2 |-> 0
    to_lambda = []
    for i, j in sym.pairs:
        col = [zero] * lam.dim
        if i != j:
            col[lam.index(i, j)] = one
        to_lambda.append(col)
    pi = Matrix.from_columns(field, to_lambda, lam.dim)

    square = squaring_map(n, field)
    witnesses: Dict[str, Any] = {}
    for v in _closure_vectors(field, n):
        if square(v) != symmetric_square(v, field):
            witnesses["squaring_semilinear"] = v
            break
    frobenius_twist = square.image_span(_closure_vectors(field, n))
    kernel_pi = kernel_basis(pi)

    # V (x) V with coordinate i*n + j for e_i (x) e_j
    tensor_dim = n * n
    swap_minus_id = []
    to_lambda_t, to_sym_t = [], []
    for i in range(n):
        for j in range(n):
            col = [zero] * tensor_dim
            col[j * n + i] = col[j * n + i] + one
            col[i * n + j] = col[i * n + j] - one
            swap_minus_id.append(col)
            lam_col = [zero] * lam.dim
            if i != j:
                lam_col[lam.index(i, j)] = one if i < j else -one
            to_lambda_t.append(lam_col)
            sym_col = [zero] * sym.dim
            sym_col[sym.index(i, j)] = one
            to_sym_t.append(sym_col)
    sigma_invariant = kernel_basis(Matrix.from_columns(field, swap_minus_id, tensor_dim))
    tensor_to_lambda = Matrix.from_columns(field, to_lambda_t, lam.dim)
    tensor_to_sym = Matrix.from_columns(field, to_sym_t, sym.dim)
    s2_image = Subspace.span(field, sym.dim, [tensor_to_sym.apply(b) for b in sigma_invariant.basis])

    if rank(pi) != lam.dim:
        witnesses["projection_surjective"] = f"rank={rank(pi)}!={lam.dim}"
    elif kernel_pi != frobenius_twist:
        witnesses["kernel_is_frobenius_twist"] = kernel_pi.difference_witness(frobenius_twist)
    elif frobenius_twist.dim + lam.dim != sym.dim:
        witnesses["dimension_count"] = f"{frobenius_twist.dim}+{lam.dim}!={sym.dim}"
    tensor_kernel = kernel_basis(tensor_to_lambda)
    if tensor_kernel != sigma_invariant:
        witnesses["tensor_sequence_exact"] = tensor_kernel.difference_witness(sigma_invariant)
    elif rank(tensor_to_lambda) != lam.dim:
        witnesses["tensor_sequence_exact"] = f"rank={rank(tensor_to_lambda)}!={lam.dim}"
    if s2_image != frobenius_twist:
        witnesses["s2_image_is_frobenius_twist"] = s2_image.difference_witness(frobenius_twist)

    report = {
        "n": n,
        "field": field.name,
        "sym2_dim": sym.dim,
        "lambda2_dim": lam.dim,
        "frobenius_twist_dim": frobenius_twist.dim,
        "squaring_semilinear": "squaring_semilinear" not in witnesses,
        "projection_surjective": rank(pi) == lam.dim,
        "kernel_is_frobenius_twist": kernel_pi == frobenius_twist,
        "dimension_count": frobenius_twist.dim + lam.dim == sym.dim,
        "s2_dim": sigma_invariant.dim,
        "tensor_sequence_exact": "tensor_sequence_exact" not in witnesses,
        "s2_image_is_frobenius_twist": s2_image == frobenius_twist,
        "witnesses": witnesses,
    }
    logger.info(f"Sym^2 sequence report for n={n} over {field.name}: {report}")
    return report
