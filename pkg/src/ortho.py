"""
Orthogonal groups and Lie algebras in characteristic two.

Membership and the Dickson invariant, so(n, Q) as the kernel of a linear
system, the block-matrix families for so(8) and so(7), parabolic
stabilizers of isotropic planes, the quotient so/p and its two layers,
and exhaustive enumeration of O(n, F2) for small n.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dataclass_field
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import GROUP_DIM_BOUND, LOG_LEVEL
from src.linalg import Matrix, Subspace, kernel_basis, quotient_map, rank, stack
from src.quadform import QuadraticForm, is_isotropic_subspace
from src.scalars import Field

# Configure logging
logging.basicConfig(level=LOG_LEVEL, format='%(asctime)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

SMOOTH = "smooth"
SCHEME_TANGENT = "scheme_tangent"
VARIANTS = (SMOOTH, SCHEME_TANGENT)

POLARIZED = "polarized"
LITERAL = "literal"
CONVENTIONS = (POLARIZED, LITERAL)


# ---------------------------------------------------------------------------
# Orthogonal group elements
# ---------------------------------------------------------------------------

def is_orthogonal(g: Matrix, q: QuadraticForm) -> bool:
    """
    Decide whether g preserves Q.

    Checks Q(g e_i) = Q(e_i) for every i and beta(g e_i, g e_j) = beta(e_i, e_j)
    for i < j, after checking that g is invertible. For a non-degenerate Q an
    orthogonal g must have determinant 1.

    Args:
        g: Square matrix of size q.dim
        q: Quadratic form

    Returns:
        True if g is in O(Q)
    """
    if not g.is_square or g.rows != q.dim:
        raise ValueError(f"{g.rows}x{g.cols} matrix cannot act on a form of dimension {q.dim}")
    det = g.determinant()
    if not det:
        return False
    beta = q.polarize()
    gram = beta.gram
    columns = [g.column(i) for i in range(q.dim)]
    for i in range(q.dim):
        if q.evaluate(columns[i]) != q.coefficient(i, i):
            return False
        for j in range(i + 1, q.dim):
            if beta.pair(columns[i], columns[j]) != gram[i, j]:
                return False
    if det != q.field.one and q.is_nondegenerate():
        raise ArithmeticError(f"orthogonal matrix with determinant {det} for a non-degenerate form")
    return True


def dickson(g: Any) -> int:
    """Dickson invariant rank(g + I) mod 2 of an orthogonal matrix or element."""
    m = g.g if isinstance(g, OrthogonalElement) else g
    return rank(m + Matrix.identity(m.field, m.rows)) % 2


@dataclass(frozen=True)
class OrthogonalElement:
    """An invertible matrix together with the form it preserves."""

    g: Matrix
    form: QuadraticForm

    def __post_init__(self):
        if not is_orthogonal(self.g, self.form):
            raise ValueError("matrix does not preserve the quadratic form")

    @property
    def dickson(self) -> int:
        return dickson(self.g)

    def __matmul__(self, other: "OrthogonalElement") -> "OrthogonalElement":
        return OrthogonalElement(self.g @ other.g, self.form)


@dataclass(frozen=True)
class OrthogonalGroupReport:
    """Result of enumerating O(Q) inside GL(n, F2)."""

    form: QuadraticForm
    elements: Tuple[OrthogonalElement, ...]
    dickson_kernel_order: int
    closed_under_product: bool
    dickson_multiplicative: bool
    determinant_one: bool
    fixes_radical: Optional[bool]
    # element indices exhibiting a failure of the matching property
    witnesses: Dict[str, Any] = dataclass_field(default_factory=dict)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def dickson_index(self) -> Optional[int]:
        if not self.dickson_kernel_order:
            return None
        return self.order // self.dickson_kernel_order


def _candidate_columns(index: int, n: int) -> List[int]:
    mask = (1 << n) - 1
    return [(index >> (j * n)) & mask for j in range(n)]


def _matrix_from_columns(field: Field, columns: Sequence[int], n: int) -> Matrix:
    return Matrix.from_rows(field, [[(columns[j] >> i) & 1 for j in range(n)] for i in range(n)])


def enumerate_orthogonal_group(q: QuadraticForm, workers: int = 1) -> OrthogonalGroupReport:
    """
    Enumerate O(Q) for a form over GF(2) by filtering all n x n matrices.

    Candidates are encoded as integers (column j in bits j*n .. j*n+n-1) and
    sharded across threads; shards are merged in candidate order, so the
    element list does not depend on the worker count.

    Args:
        q: Form over GF(2) with q.dim <= GROUP_DIM_BOUND
        workers: Number of threads

    Returns:
        OrthogonalGroupReport
    """
    field, n = q.field, q.dim
    if getattr(field, "order", None) != 2:
        raise ValueError(f"group enumeration needs a form over gf2^1, got {field.name}")
    if n > GROUP_DIM_BOUND:
        raise ValueError(f"group enumeration bound exceeded: n = {n} > {GROUP_DIM_BOUND}")

    size = 1 << n
    values = [bool(q.evaluate([field.from_int((v >> i) & 1) for i in range(n)])) for v in range(size)]
    total = 1 << (n * n)
    shards = max(1, min(workers, total))
    bounds = [(total * s // shards, total * (s + 1) // shards) for s in range(shards)]

    def filter_shard(bound: Tuple[int, int]) -> List[int]:
        found = []
        for index in range(*bound):
            columns = _candidate_columns(index, n)
            image = [0] * size
            preserved = True
            for v in range(1, size):
                low = (v & -v).bit_length() - 1
                image[v] = image[v & (v - 1)] ^ columns[low]
                if values[image[v]] != values[v]:
                    preserved = False
                    break
            if preserved and len(set(image)) == size:
                found.append(index)
        return found

    if shards == 1:
        indices = filter_shard(bounds[0])
    else:
        with ThreadPoolExecutor(max_workers=shards) as executor:
            indices = [i for part in executor.map(filter_shard, bounds) for i in part]

    elements = tuple(
        OrthogonalElement(_matrix_from_columns(field, _candidate_columns(i, n), n), q) for i in indices
    )
    invariants = [e.dickson for e in elements]

    arrays = [e.g.to_gf2_array() for e in elements]
    position = {a.tobytes(): i for i, a in enumerate(arrays)}
    witnesses: Dict[str, Any] = {}
    for i, a in enumerate(arrays):
        for j, b in enumerate(arrays):
            product = (a.astype(np.int64) @ b.astype(np.int64)) % 2
            k = position.get(product.astype(np.uint8).tobytes())
            if k is None:
                witnesses.setdefault("closed", (i, j))
                continue
            if invariants[k] != (invariants[i] + invariants[j]) % 2:
                witnesses.setdefault("multiplicative", (i, j))
    closed = "closed" not in witnesses
    multiplicative = "multiplicative" not in witnesses

    for i, e in enumerate(elements):
        if e.g.determinant() != field.one:
            witnesses["det-one"] = i
            break

    fixes_radical = None
    if n % 2 == 1 and q.is_nondegenerate():
        r = q.radical().basis[0]
        moved = [i for i, e in enumerate(elements) if e.g.apply(r) != r]
        fixes_radical = not moved
        if moved:
            witnesses["fixes-radical"] = moved[0]

    report = OrthogonalGroupReport(
        form=q,
        elements=elements,
        dickson_kernel_order=sum(1 for d in invariants if d == 0),
        closed_under_product=closed,
        dickson_multiplicative=multiplicative,
        determinant_one="det-one" not in witnesses,
        fixes_radical=fixes_radical,
        witnesses=witnesses,
    )
    logger.info(f"Enumerated O(Q) of order {report.order} in dimension {n} ({shards} shards)")
    return report


# ---------------------------------------------------------------------------
# Lie algebras
# ---------------------------------------------------------------------------

def bracket(a: Matrix, b: Matrix) -> Matrix:
    """[A, B] = AB - BA (= AB + BA in characteristic two)."""
    return a @ b - b @ a


@dataclass(frozen=True)
class LieSubalgebra:
    """
    A subspace of End(V), stored as flattened n x n matrices (row-major).
    The form is the one whose orthogonal algebra this lives in.
    """

    form: QuadraticForm
    space: Subspace
    name: str = "so"

    @property
    def n(self) -> int:
        return self.form.dim

    @property
    def field(self) -> Field:
        return self.form.field

    @property
    def dim(self) -> int:
        return self.space.dim

    @cached_property
    def _equations(self) -> Matrix:
        return self.space.annihilator().matrix()

    def matrices(self) -> List[Matrix]:
        return [Matrix.unflatten(self.field, b, self.n) for b in self.space.basis]

    def contains(self, a: Matrix) -> bool:
        if self._equations.rows == 0:
            return True
        return self._equations.apply(a.flatten()) == (self.field.zero,) * self._equations.rows

    def bracket_witness(self) -> Optional[Tuple[int, int]]:
        """Basis indices (i, j) whose bracket leaves the subspace, or None when closed."""
        basis = self.matrices()
        for i in range(len(basis)):
            for j in range(i + 1, len(basis)):
                if not self.contains(bracket(basis[i], basis[j])):
                    return i, j
        return None

    def is_bracket_closed(self) -> bool:
        return self.bracket_witness() is None

    def is_subalgebra_of(self, other: "LieSubalgebra") -> bool:
        return self.space.is_subspace_of(other.space)


def invariance_equations(q: QuadraticForm) -> Matrix:
    """
    Linear conditions on A (n^2 unknowns a_kl at k*n + l) making G*A alternating:
    beta(e_i, A e_j) = beta(e_j, A e_i) for i != j and beta(e_i, A e_i) = 0.
    """
    n, field = q.dim, q.field
    gram = q.gram()
    rows = []
    for i in range(n):
        for j in range(i, n):
            row = [field.zero] * (n * n)
            for k in range(n):
                row[k * n + j] = row[k * n + j] + gram[i, k]
                if i != j:
                    row[k * n + i] = row[k * n + i] - gram[j, k]
            rows.append(row)
    return stack(field, rows, n * n)


def lie_algebra(q: QuadraticForm, variant: str = SMOOTH) -> LieSubalgebra:
    """
    Compute so(n, Q) as the kernel of the invariance equations.

    Args:
        q: Non-degenerate quadratic form
        variant: "scheme_tangent" (invariance only) or "smooth" (additionally
            A kills the radical of beta, which matters for odd n)

    Returns:
        LieSubalgebra in canonical echelon form
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown Lie algebra variant {variant!r}; expected one of {VARIANTS}")
    if not q.is_nondegenerate():
        raise ValueError("the Lie algebra is only computed for non-degenerate forms")
    n, field = q.dim, q.field
    equations = invariance_equations(q)
    radical = q.radical()
    if variant == SMOOTH and radical.dim:
        extra = []
        for r in radical.basis:
            for k in range(n):
                row = [field.zero] * (n * n)
                for l in range(n):
                    row[k * n + l] = r[l]
                extra.append(row)
        equations = stack(field, list(equations.entries) + extra, n * n)
    algebra = LieSubalgebra(q, kernel_basis(equations), name=f"so{n}-{variant}")
    logger.info(f"Computed so({n}) {variant} Lie algebra of dimension {algebra.dim}")
    return algebra


# ---------------------------------------------------------------------------
# Block-matrix families
# ---------------------------------------------------------------------------

FAMILY_LAYOUT: Dict[str, Tuple[Tuple[str, int], ...]] = {
    "so8": (("X1", 4), ("X2", 4), ("X3", 4), ("X4", 4), ("X5", 4), ("X6", 4),
            ("D1", 1), ("D2", 1), ("D3", 1), ("D4", 1)),
    "so7": (("X1", 4), ("X2", 4), ("X3", 4), ("lambda", 1),
            ("row1", 2), ("row2", 2), ("row3", 2), ("D1", 1), ("D2", 1)),
}


def family_parameter_count(which: str) -> int:
    if which not in FAMILY_LAYOUT:
        raise ValueError(f"unknown family {which!r}; expected so7 or so8")
    return sum(size for _, size in FAMILY_LAYOUT[which])


def family_parameters(which: str, field: Field, blocks: Dict[str, Sequence[Any]]) -> Tuple[Any, ...]:
    """
    Parameter vector from named blocks; unnamed blocks are zero.

    Args:
        which: "so7" or "so8"
        field: Field of the entries
        blocks: e.g. {"X1": [1, 0, 0, 1]} (2x2 blocks row-major, ints allowed)
    """
    family_parameter_count(which)
    known = dict(FAMILY_LAYOUT[which])
    for name, values in blocks.items():
        if name not in known or len(values) != known[name]:
            raise ValueError(f"block {name!r} with {len(values)} entries does not fit the {which} family")
    params = []
    for name, size in FAMILY_LAYOUT[which]:
        values = blocks.get(name, [0] * size)
        params.extend(field.from_int(v) if isinstance(v, int) else v for v in values)
    return tuple(params)


def _split(which: str, parameters: Sequence[Any]) -> Dict[str, List[Any]]:
    out, pos = {}, 0
    for name, size in FAMILY_LAYOUT[which]:
        out[name] = list(parameters[pos:pos + size])
        pos += size
    return out


def _block(values: List[Any]) -> List[List[Any]]:
    return [[values[0], values[1]], [values[2], values[3]]]


def _t(b: List[List[Any]]) -> List[List[Any]]:
    return [[b[0][0], b[1][0]], [b[0][1], b[1][1]]]


def _antidiag(x: Any, zero: Any) -> List[List[Any]]:
    return [[zero, x], [x, zero]]


def _swap_columns(b: List[List[Any]]) -> List[List[Any]]:
    return [[row[1], row[0]] for row in b]


def _swap_rows(b: List[List[Any]]) -> List[List[Any]]:
    return [b[1], b[0]]


def parametric_family(which: str, parameters: Sequence[Any], field: Field,
                      convention: str = POLARIZED) -> Matrix:
    """
    The block matrix of the so(8) or so(7) family at the given parameters.

    so8 (blocks on coordinates 12|34|56|78):
        X1  X2  X3  D1
        X4  X5  D2  tX3
        X6  D3  tX5 tX2
        D4  tX6 tX4 tX1
    so7 (blocks on 12|34|5|67, lambda*I on 34, the row vectors on coordinate 5):
        X1   X2   0  D1
        X3   lI   0  tX2
        row1 row2 0  row3
        D2   tX3  0  tX1
    D blocks are antidiagonal [[0, d], [d, 0]]. Under the polarized convention
    the (34, 67) block is J*tX2 and the (67, 34) block is tX3*J with J = [[0,1],[1,0]],
    since polarizing x3*x4 couples 3 with 4; the literal convention reads the
    blocks exactly as laid out above. Both conventions agree for so8.

    Args:
        which: "so7" or "so8"
        parameters: family_parameter_count(which) scalars, in FAMILY_LAYOUT order
        field: Field of the entries
        convention: "polarized" or "literal"

    Returns:
        n x n matrix
    """
    count = family_parameter_count(which)
    if len(parameters) != count:
        raise ValueError(f"{which} family takes {count} parameters, got {len(parameters)}")
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")
    zero = field.zero
    p = _split(which, [field.from_int(x) if isinstance(x, int) else x for x in parameters])

    if which == "so8":
        x = {name: _block(p[name]) for name in ("X1", "X2", "X3", "X4", "X5", "X6")}
        d = {name: _antidiag(p[name][0], zero) for name in ("D1", "D2", "D3", "D4")}
        grid = [
            [x["X1"], x["X2"], x["X3"], d["D1"]],
            [x["X4"], x["X5"], d["D2"], _t(x["X3"])],
            [x["X6"], d["D3"], _t(x["X5"]), _t(x["X2"])],
            [d["D4"], _t(x["X6"]), _t(x["X4"]), _t(x["X1"])],
        ]
        rows = [[zero] * 8 for _ in range(8)]
        for br in range(4):
            for bc in range(4):
                for i in range(2):
                    for j in range(2):
                        rows[2 * br + i][2 * bc + j] = grid[br][bc][i][j]
        return Matrix.from_rows(field, rows)

    x1, x2, x3 = _block(p["X1"]), _block(p["X2"]), _block(p["X3"])
    lam = p["lambda"][0]
    upper_right = _t(x2)
    lower_middle = _t(x3)
    if convention == POLARIZED:
        upper_right = _swap_rows(upper_right)
        lower_middle = _swap_columns(lower_middle)
    blocks = {
        (0, 0): x1, (0, 1): x2, (0, 3): _antidiag(p["D1"][0], zero),
        (1, 0): x3, (1, 1): [[lam, zero], [zero, lam]], (1, 3): upper_right,
        (3, 0): _antidiag(p["D2"][0], zero), (3, 1): lower_middle, (3, 3): _t(x1),
    }
    offsets = {0: 0, 1: 2, 3: 5}
    rows = [[zero] * 7 for _ in range(7)]
    for (br, bc), b in blocks.items():
        for i in range(2):
            for j in range(2):
                rows[offsets[br] + i][offsets[bc] + j] = b[i][j]
    for name, col in (("row1", 0), ("row2", 2), ("row3", 5)):
        rows[4][col], rows[4][col + 1] = p[name]
    return Matrix.from_rows(field, rows)


def family_span(which: str, field: Field, convention: str = POLARIZED) -> Subspace:
    """Span of the family, from the images of the unit parameter vectors."""
    count = family_parameter_count(which)
    n = 8 if which == "so8" else 7
    vectors = []
    for i in range(count):
        params = [field.zero] * count
        params[i] = field.one
        vectors.append(parametric_family(which, params, field, convention).flatten())
    return Subspace.span(field, n * n, vectors)


def shape_equivalence(which: str, computed: LieSubalgebra, convention: str = POLARIZED) -> bool:
    """
    Whether the family spans exactly the computed algebra: every family matrix
    lies in it and the dimensions agree.
    """
    span = family_span(which, computed.field, convention)
    if span.ambient_dim != computed.space.ambient_dim:
        raise ValueError(f"{which} family does not live in End of dimension {computed.n}")
    inside = all(computed.contains(Matrix.unflatten(computed.field, b, computed.n)) for b in span.basis)
    equal = inside and span.dim == computed.dim
    logger.info(f"{which} family ({convention}): dim {span.dim}, inside={inside}, equal={equal}")
    return equal


# ---------------------------------------------------------------------------
# Parabolic subalgebras and the quotient so/p
# ---------------------------------------------------------------------------

def standard_isotropic_plane(field: Field, n: int) -> Subspace:
    """W = span{e1, e2}, cut out by x3 = ... = xn = 0."""
    return Subspace.coordinate(field, n, [0, 1])


def stabilizer_equations(w: Subspace) -> Matrix:
    """Conditions f(A b) = 0 for f in the annihilator of W and b in a basis of W."""
    n, field = w.ambient_dim, w.field
    rows = []
    for f in w.annihilator().basis:
        for b in w.basis:
            row = [field.zero] * (n * n)
            for k in range(n):
                if not f[k]:
                    continue
                for l in range(n):
                    row[k * n + l] = row[k * n + l] + f[k] * b[l]
            rows.append(row)
    return stack(field, rows, n * n)


def parabolic(g: LieSubalgebra, w: Subspace) -> LieSubalgebra:
    """
    p = {A in g : A W subset W}, by intersecting g with the stabilizer equations.

    Args:
        g: Lie algebra of a form
        w: Isotropic subspace for that form

    Returns:
        The parabolic subalgebra
    """
    if not is_isotropic_subspace(g.form, w):
        raise ValueError("the parabolic is only defined for an isotropic subspace")
    equations = stabilizer_equations(w)
    stabilizer = kernel_basis(equations) if equations.rows else Subspace.full(g.field, g.n * g.n)
    p = LieSubalgebra(g.form, g.space.intersection(stabilizer), name=f"p({g.name})")
    logger.info(f"Parabolic of {g.name} stabilizing a {w.dim}-plane has dimension {p.dim}")
    return p


def restriction_map(g: LieSubalgebra, w: Subspace) -> Matrix:
    """
    The map g -> Hom(W, V/W), A |-> (b |-> A b mod W), in the coordinates of
    g's basis (columns) and of the flattened Hom(W, V/W) (rows).
    """
    to_quotient = quotient_map(w)
    columns = []
    for a in g.matrices():
        image = []
        for b in w.basis:
            image.extend(to_quotient(a.apply(b)))
        columns.append(image)
    return Matrix.from_columns(g.field, columns, w.dim * to_quotient.quotient_dim)


def parabolic_by_restriction(g: LieSubalgebra, w: Subspace) -> LieSubalgebra:
    """p as the kernel of the restriction map, recombined from g's basis."""
    kernel = kernel_basis(restriction_map(g, w))
    basis = g.space.basis
    vectors = []
    for c in kernel.basis:
        v = [g.field.zero] * (g.n * g.n)
        for coefficient, b in zip(c, basis):
            if coefficient:
                v = [x + coefficient * y for x, y in zip(v, b)]
        vectors.append(v)
    return LieSubalgebra(g.form, Subspace.span(g.field, g.n * g.n, vectors), name=f"p({g.name})")


def d_component(a: Matrix, q: QuadraticForm, w_basis: Sequence[Sequence[Any]]) -> Tuple[Any, ...]:
    """
    The image of A in Hom(W, V/W_perp) = W* (x) W*, as the flattened matrix
    [beta(b_i, A b_j)] in the given basis of W.
    """
    beta = q.polarize()
    return tuple(beta.pair(bi, a.apply(bj)) for bi in w_basis for bj in w_basis)


def d_line(g: LieSubalgebra, w_basis: Sequence[Sequence[Any]]) -> Subspace:
    """Image of g in W* (x) W* for the given basis of W."""
    k = len(w_basis)
    return Subspace.span(g.field, k * k, [d_component(a, g.form, w_basis) for a in g.matrices()])


def d_generator(field: Field) -> Tuple[Any, ...]:
    """e (x) f + f (x) e in the dual basis (e, f) of a 2-plane, flattened."""
    zero, one = field.zero, field.one
    return (zero, one, one, zero)


@dataclass(frozen=True)
class QuotientReport:
    """Verified data of 0 -> Hom(W, W_perp/W) -> g/p -> D -> 0."""

    sub_dim: int
    total_dim: int
    line_dim: int
    hom_basis: Tuple[Tuple[Any, ...], ...]
    d_generator: Tuple[Any, ...]
    checks: Dict[str, bool] = dataclass_field(default_factory=dict)
    witnesses: Dict[str, Any] = dataclass_field(default_factory=dict)

    @property
    def dims(self) -> Tuple[int, int, int]:
        return self.sub_dim, self.total_dim, self.line_dim

    @property
    def holds(self) -> bool:
        return all(self.checks.values())


def quotient_sequence_report(g: LieSubalgebra, p: LieSubalgebra, w: Subspace) -> QuotientReport:
    """
    Verify the exact sequence 0 -> Hom(W, W_perp/W) -> g/p -> D -> 0.

    g/p is realized as the image of the restriction map g -> Hom(W, V/W); the
    sub is the Hom(W, W_perp/W) inside it, and D is the image in
    Hom(W, V/W_perp) = W* (x) W*, which must be the line spanned by e(x)f + f(x)e.

    Args:
        g: Lie algebra of a form
        p: Its parabolic for w
        w: Isotropic 2-plane

    Returns:
        QuotientReport with dimensions, witnesses and named checks
    """
    if not p.is_subalgebra_of(g):
        raise ValueError(f"{p.name} is not contained in {g.name}")
    if not is_isotropic_subspace(g.form, w):
        raise ValueError("the quotient sequence needs an isotropic subspace")
    field, n = g.field, g.n
    to_quotient = quotient_map(w)
    qdim = to_quotient.quotient_dim
    w_perp = w.perp(g.form.gram())

    # Hom(W, W_perp/W) inside Hom(W, V/W), flattened as (basis vector of W) x (coordinate of V/W)
    perp_mod_w = Subspace.span(field, qdim, [to_quotient(v) for v in w_perp.basis])
    hom_vectors = []
    for i in range(w.dim):
        for u in perp_mod_w.basis:
            v = [field.zero] * (w.dim * qdim)
            v[i * qdim:(i + 1) * qdim] = u
            hom_vectors.append(v)
    hom = Subspace.span(field, w.dim * qdim, hom_vectors)

    restriction = restriction_map(g, w)
    image = Subspace.span(field, w.dim * qdim, [restriction.column(j) for j in range(g.dim)])

    matrices = g.matrices()
    components = Matrix.from_columns(field, [d_component(a, g.form, w.basis) for a in matrices], w.dim * w.dim)
    kernel_of_composite = kernel_basis(components)
    kernel_image = Subspace.span(field, w.dim * qdim,
                                 [restriction.apply(c) for c in kernel_of_composite.basis])

    generator = d_generator(field)
    line = d_line(g, w.basis)
    expected_line = Subspace.span(field, 4, [generator])
    swapped = [w.basis[1], w.basis[0]]
    sheared = [w.basis[0], tuple(a + b for a, b in zip(w.basis[0], w.basis[1]))]

    # each entry is None when the check holds, else the counterexample
    witnesses = {
        "p-kernel-of-restriction": (None if g.dim - p.dim == image.dim
                                    else f"{g.dim}-{p.dim}!={image.dim}"),
        "hom-inside-quotient": hom.vector_outside(image),
        "kernel-of-composite-is-hom": kernel_image.difference_witness(hom),
        "d-line": line.difference_witness(expected_line),
        "d-line-basis-swap": d_line(g, swapped).difference_witness(expected_line),
        "d-line-basis-shear": d_line(g, sheared).difference_witness(expected_line),
        "dimension-count": (None if hom.dim + line.dim == image.dim
                            else f"{hom.dim}+{line.dim}!={image.dim}"),
    }
    report = QuotientReport(
        sub_dim=hom.dim,
        total_dim=image.dim,
        line_dim=line.dim,
        hom_basis=hom.basis,
        d_generator=generator,
        checks={name: w is None for name, w in witnesses.items()},
        witnesses={name: w for name, w in witnesses.items() if w is not None},
    )
    if not report.holds:
        logger.warning(f"Quotient sequence for {g.name} failed checks: {sorted(report.witnesses)}")
    logger.info(f"Quotient sequence for {g.name}: dims {report.dims}")
    return report


def quotient_class(g: LieSubalgebra, p: LieSubalgebra, w: Subspace, a: Matrix) -> Dict[str, Any]:
    """
    Locate the class of A in g/p.

    Returns:
        Dictionary with in_g, in_p (class is zero), the D-component
        beta(b1, A b2) and whether the class lies in the Hom(W, W_perp/W) layer
    """
    component = d_component(a, g.form, w.basis)
    d_value = component[1] if w.dim == 2 else None
    return {
        "in_g": g.contains(a),
        "in_p": p.contains(a),
        "class_nonzero": not p.contains(a),
        "d_component": d_value,
        "in_hom_layer": not any(component),
    }
