"""
Fiber models of the rank-7 and rank-8 orthogonal bundles.

A model is W + M + W* with Q(x + y + x*) = <x, x*> + Q_M(y), padded by
hyperbolic planes. The middle M is (sl2, det), (End, det) or the rank-4
space with q(y) + q*(y*) + <y, y*>. The map phi: W -> M and its adjoint
psi: M -> W* give the twisted form Q + t*q(x), the automorphism g_s, and
the graph subspaces {(x, lambda*phi(x), 0)}.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence, Tuple

from config import LOG_LEVEL
from src.linalg import Matrix, Subspace, solve
from src.ortho import (
    SMOOTH,
    family_parameter_count,
    lie_algebra,
    parabolic,
    parametric_family,
    quotient_class,
    standard_isotropic_plane,
)
from src.quadform import (
    BilinearForm,
    QuadraticForm,
    direct_sum,
    hyperbolic_plane,
    is_isotropic_subspace,
    monomial_name,
)
from src.scalars import GF2, RATIONAL, TOWER, Field, RationalFunction, field_of, is_square

# Configure logging
logging.basicConfig(level=LOG_LEVEL, format='%(asctime)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

KINDS = ("so7", "so8-hat", "so8-B")

DESCENT_BANNER = (
    "graph family {(x, lambda*phi(x), 0)} only; "
    "non-rationality of the canonical reduction itself is a curve-level statement"
)


# ---------------------------------------------------------------------------
# (sl2, det)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Sl2Fiber:
    """Traceless 2x2 matrices [[a, b], [c, a]] in coordinates (a, b, c)."""

    field: Field

    @property
    def identity(self) -> Tuple[Any, ...]:
        return self.field.one, self.field.zero, self.field.zero

    @property
    def nilpotent(self) -> Tuple[Any, ...]:
        return self.field.zero, self.field.one, self.field.zero

    @property
    def form(self) -> QuadraticForm:
        """det = a^2 + bc (a^2 - bc in general; char 2)."""
        return QuadraticForm.from_terms(self.field, 3, {(0, 0): 1, (1, 2): 1})

    def matrix(self, v: Sequence[Any]) -> Matrix:
        a, b, c = v
        return Matrix.from_rows(self.field, [[a, b], [c, a]])

    def trace_pairing(self, v: Sequence[Any], w: Sequence[Any]) -> Any:
        product = self.matrix(v) @ self.matrix(w)
        return product[0, 0] + product[1, 1]


# ---------------------------------------------------------------------------
# Adjoint pairs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AdjointPair:
    """
    phi: W -> M, psi: M -> W* with <x, psi(y)> = scalar * beta_M(phi(x), y),
    and q = Q_M o phi on W.
    """

    middle: QuadraticForm
    phi: Matrix
    psi: Matrix
    scalar: Any

    @property
    def field(self) -> Field:
        return self.middle.field

    @property
    def q(self) -> QuadraticForm:
        return self.middle.pullback(self.phi)

    def image(self) -> Subspace:
        return Subspace.span(self.field, self.phi.rows, [self.phi.column(j) for j in range(self.phi.cols)])

    def isotropy_witness(self) -> Optional[Tuple[int, int]]:
        """Columns (j, k) of phi with beta_M(phi e_j, phi e_k) != 0, or None."""
        beta = self.middle.polarize()
        columns = [self.phi.column(j) for j in range(self.phi.cols)]
        for j, u in enumerate(columns):
            for k, v in enumerate(columns):
                if beta.pair(u, v):
                    return j, k
        return None

    def image_is_isotropic(self) -> bool:
        """beta_M vanishes on the image of phi."""
        return self.isotropy_witness() is None

    def q_is_square(self) -> bool:
        """q has zero polarization and is not the zero form."""
        q = self.q
        return q.gram().is_zero() and bool(q.terms())

    def adjoint_holds(self) -> bool:
        """<x, psi(y)> = beta_M(phi(x), y) exactly, i.e. psi = phi^T G."""
        return self.psi == self.phi.transpose() @ self.middle.gram()

    def psi_phi_is_zero(self) -> bool:
        return (self.psi @ self.phi).is_zero()


def adjoint_of(middle: QuadraticForm, phi: Matrix, scalar: Any = None) -> Matrix:
    """
    Solve <x, psi(y)> = scalar * beta_M(phi(x), y) for psi, column by column,
    against the identity pairing of W with W*.
    """
    field = middle.field
    scalar = field.one if scalar is None else scalar
    pairing = Matrix.identity(field, phi.cols)
    target = (phi.transpose() @ middle.gram()).scale(scalar)
    columns = []
    for j in range(target.cols):
        column = solve(pairing, target.column(j))
        if column is None:
            raise ArithmeticError("adjoint system is inconsistent")
        columns.append(column)
    return Matrix.from_columns(field, columns, phi.cols)


def build_adjoint_pair(field: Field = GF2, scalar: Any = None) -> AdjointPair:
    """
    The canonical pair on (sl2, det) in coordinates (a, b, c):
    phi(x1, x2) = x1*Id + x2*N, q = x1^2, psi(a, b, c) = (0, c).

    Args:
        field: Field of the model
        scalar: Adjoint scalar; 1 unless a perturbed pair is wanted
    """
    sl2 = Sl2Fiber(field)
    phi = Matrix.from_columns(field, [sl2.identity, sl2.nilpotent], 3)
    psi = adjoint_of(sl2.form, phi, scalar)
    return AdjointPair(sl2.form, phi, psi, field.one if scalar is None else scalar)


# ---------------------------------------------------------------------------
# Assembled models
# ---------------------------------------------------------------------------

# middle coordinates, Q_M terms (0-based), phi(e1), phi(e2)
_MIDDLES = {
    # sl2 in the order (b, c, a): the so7 model is then x1x6 + x2x7 + x3x4 + x5^2
    "so7": (("b", "c", "a"), {(0, 1): 1, (2, 2): 1}, (0, 0, 1), (1, 0, 0)),
    # End in the order (a, b, d, c): the so8-hat model is then x1x7 + x2x8 + x3x5 + x4x6
    "so8-hat": (("a", "b", "d", "c"), {(0, 2): 1, (1, 3): 1}, (1, 0, 1, 0), (0, 1, 0, 0)),
    # y + y* with q(y) = y1^2, q*(y*) = y1*^2; phi is the inclusion of the first summand
    "so8-B": (("y1", "y2", "y1*", "y2*"), {(0, 0): 1, (2, 2): 1, (0, 2): 1, (1, 3): 1},
              (1, 0, 0, 0), (0, 1, 0, 0)),
}


@dataclass(frozen=True)
class FiberModel:
    """
    W + M + W* (+ pad hyperbolic planes). W has coordinates 1, 2, M the
    next len(middle_labels) coordinates, W* the two after that.
    """

    kind: str
    pad: int
    form: QuadraticForm
    pair: AdjointPair
    middle_labels: Tuple[str, ...]

    @property
    def field(self) -> Field:
        return self.form.field

    @property
    def n(self) -> int:
        return self.form.dim

    @property
    def middle_dim(self) -> int:
        return len(self.middle_labels)

    @property
    def middle_indices(self) -> Tuple[int, ...]:
        return tuple(range(2, 2 + self.middle_dim))

    @property
    def dual_indices(self) -> Tuple[int, int]:
        return 2 + self.middle_dim, 3 + self.middle_dim

    @property
    def q(self) -> QuadraticForm:
        return self.pair.q

    def w(self) -> Subspace:
        return standard_isotropic_plane(self.field, self.n)

    def embed_w(self) -> Matrix:
        """n x 2 inclusion of W."""
        return Matrix.from_columns(self.field, [self.unit(0), self.unit(1)], self.n)

    def unit(self, i: int) -> Tuple[Any, ...]:
        return tuple(self.field.one if j == i else self.field.zero for j in range(self.n))

    def identity_direction(self) -> Optional[Tuple[Any, ...]]:
        """The Id-direction of the sl2 middle (the radical for so7)."""
        if self.kind != "so7":
            return None
        return self.unit(2 + self.middle_labels.index("a"))


def build_model(kind: str, pad: int = 0, field: Field = GF2, adjoint_scalar: Any = None) -> FiberModel:
    """
    Assemble Q(x + y + x*) = <x, x*> + Q_M(y) plus pad hyperbolic planes.

    Args:
        kind: "so7", "so8-hat" or "so8-B"
        pad: Number of hyperbolic planes appended after W*
        field: Field of the model
        adjoint_scalar: Scalar of the adjoint relation; 1 for the canonical model

    Returns:
        FiberModel of dimension 7 + 2*pad or 8 + 2*pad
    """
    if kind not in _MIDDLES:
        raise ValueError(f"unknown model kind {kind!r}; expected one of {KINDS}")
    if pad < 0:
        raise ValueError(f"padding must be non-negative, got {pad}")
    labels, terms, phi_e1, phi_e2 = _MIDDLES[kind]
    m = len(labels)
    middle = QuadraticForm.from_terms(field, m, terms)
    phi = Matrix.from_columns(field, [[field.from_int(x) for x in phi_e1], [field.from_int(x) for x in phi_e2]], m)
    scalar = field.one if adjoint_scalar is None else adjoint_scalar
    pair = AdjointPair(middle, phi, adjoint_of(middle, phi, scalar), scalar)

    core_terms = {(0, 2 + m): 1, (1, 3 + m): 1}
    core_terms.update({(i + 2, j + 2): c for (i, j), c in middle.terms().items()})
    core = QuadraticForm.from_terms(field, m + 4, core_terms)
    form = direct_sum(core, *[hyperbolic_plane(field) for _ in range(pad)])
    model = FiberModel(kind, pad, form, pair, labels)
    if not form.is_nondegenerate():
        logger.warning(f"Assembled {kind} model with padding {pad} is degenerate")
    logger.debug(f"Built {kind} model of dimension {model.n} over {field.name}")
    return model


# ---------------------------------------------------------------------------
# Twisting
# ---------------------------------------------------------------------------

def twisted_form(model: FiberModel, t: Any, q: Optional[QuadraticForm] = None) -> QuadraticForm:
    """Q~(x + y + x*) = Q(x + y + x*) + t*q(x); q defaults to the model's q."""
    q = model.q if q is None else q
    extra = {(i, j): t * c for (i, j), c in q.terms().items()}
    return model.form + QuadraticForm.from_terms(model.field, model.n, extra)


def gs_automorphism(model: FiberModel, s: Any) -> Matrix:
    """
    g_s(x, y, x*) = (x, y + s*phi(x), x* + s*psi(y)), extended by the identity
    on the hyperbolic padding.
    """
    if model.field != field_of(s):
        raise ValueError(f"s lives in {field_of(s).name} but the model is over {model.field.name}")
    field, n = model.field, model.n
    rows = [list(model.unit(i)) for i in range(n)]
    phi, psi = model.pair.phi, model.pair.psi
    for r, i in enumerate(model.middle_indices):
        for c in range(2):
            rows[i][c] = s * phi[r, c]
    for r, i in enumerate(model.dual_indices):
        for c, j in enumerate(model.middle_indices):
            rows[i][j] = s * psi[r, c]
    return Matrix.from_rows(field, rows)


@dataclass(frozen=True)
class TwistedModel:
    """The twisted form Q + s^2 q(x) over the base of s, with g_s."""

    base: FiberModel
    s: Any
    form: QuadraticForm
    gs: Matrix

    @property
    def t(self) -> Any:
        return self.s * self.s


def twist(model: FiberModel, s: Any) -> TwistedModel:
    return TwistedModel(model, s, twisted_form(model, s * s), gs_automorphism(model, s))


def verify_twist_identity(model: FiberModel, s: Any) -> Dict[str, Any]:
    """
    Check Q(g_s v) = Q(v) + s^2 q(x) as an identity of coefficient arrays.

    Returns:
        Dictionary with holds, the first differing monomial (or None),
        and whether g_s is an involution
    """
    twisted = twist(model, s)
    pulled = model.form.pullback(twisted.gs)
    difference = pulled.first_difference(twisted.form)
    identity = Matrix.identity(model.field, model.n)
    square = twisted.gs @ twisted.gs
    report = {
        "kind": model.kind,
        "pad": model.pad,
        "field": model.field.name,
        "s": str(s),
        "holds": difference is None,
        "witness": monomial_name(*difference) if difference else None,
        "involution": square == identity,
        # g_s^2 - I, nonzero exactly when g_s is not an involution
        "involution_defect": None if square == identity else square - identity,
    }
    if difference is not None:
        logger.info(f"Twist identity fails for {model.kind} at {report['witness']}")
    return report


def verify_nondegenerate_twist(model: FiberModel, t: Any = None,
                               q: Optional[QuadraticForm] = None) -> Dict[str, Any]:
    """
    Non-degeneracy of Q~ = Q + t*q(x).

    Args:
        model: Model over K (t defaults to the generator t of GF(2)(t))
        t: Twisting scalar
        q: Replacement for the model's q; a non-square q changes the polarization

    Returns:
        Dictionary with polarization_unchanged, radical data and nondegenerate
    """
    if t is None:
        t = model.field.t() if hasattr(model.field, "t") else model.field.one
    twisted = twisted_form(model, t, q)
    radical = twisted.radical()
    generator = radical.basis[0] if radical.dim == 1 else None
    identity = model.identity_direction()
    changed = twisted.gram() - model.form.gram()
    changed_entries = [(i, j) for i in range(model.n) for j in range(i + 1, model.n) if changed[i, j]]
    report = {
        "kind": model.kind,
        "pad": model.pad,
        "polarization_unchanged": not changed_entries,
        "polarization_witness": monomial_name(*changed_entries[0]) if changed_entries else None,
        "radical_dim": radical.dim,
        "radical_value": str(twisted.evaluate(generator)) if generator is not None else None,
        "radical_is_identity": identity is not None and radical == Subspace.span(model.field, model.n, [identity]),
        "nondegenerate": twisted.is_nondegenerate(),
    }
    if not report["polarization_unchanged"]:
        logger.warning(f"Twisted form of the {model.kind} model has a different polarization")
    return report


# ---------------------------------------------------------------------------
# Descent
# ---------------------------------------------------------------------------

def graph_embedding(model: FiberModel, lam: Any) -> Matrix:
    """n x 2 matrix of x |-> (x, lambda*phi(x), 0)."""
    field, n = model.field, model.n
    columns = []
    for c in range(2):
        v = [field.zero] * n
        v[c] = field.one
        for r, i in enumerate(model.middle_indices):
            v[i] = lam * model.pair.phi[r, c]
        columns.append(v)
    return Matrix.from_columns(field, columns, n)


def graph_subspace(model: FiberModel, lam: Any) -> Subspace:
    g = graph_embedding(model, lam)
    return Subspace.span(model.field, model.n, [g.column(0), g.column(1)])


def descent_obstruction(kind: str = "so7", pad: int = 0, t: Optional[RationalFunction] = None) -> Dict[str, Any]:
    """
    The graph subspaces S_lambda = {(x, lambda*phi(x), 0)} of Q~ = Q + t*q(x).

    Q~ restricted to S_lambda is (lambda^2 + t)*q, checked at three values of
    lambda over K (a quadratic identity in lambda). So S_lambda is isotropic iff
    lambda^2 = t: impossible over K when t is not a square, and solved by
    lambda = sqrt(t) in K' = K[s]/(s^2 - t).

    Args:
        kind: Model kind
        pad: Hyperbolic padding
        t: Element of K = GF(2)(t) (default t itself)

    Returns:
        Dictionary with the identity check, the K answer and the K' witness
    """
    t = RATIONAL.t() if t is None else t
    model_k = build_model(kind, pad, RATIONAL)
    twisted_k = twisted_form(model_k, t)
    q = model_k.q

    identity_witness = None
    for lam in (RATIONAL.zero, RATIONAL.one, RATIONAL.t()):
        restricted = twisted_k.pullback(graph_embedding(model_k, lam))
        if restricted != q.scale(lam * lam + t):
            identity_witness = str(lam)
            break

    k_square, k_witness = is_square(t)
    k_isotropic = None
    if k_square:
        k_isotropic = is_isotropic_subspace(twisted_k, graph_subspace(model_k, k_witness))

    model_kp = build_model(kind, pad, TOWER)
    t_kp = TOWER.embed(t)
    lam = TOWER.sqrt(t_kp)
    twisted_kp = twisted_form(model_kp, t_kp)
    restricted_kp = twisted_kp.pullback(graph_embedding(model_kp, lam))
    report = {
        "banner": DESCENT_BANNER,
        "kind": kind,
        "pad": pad,
        "t": str(t),
        "graph_identity": identity_witness is None,
        # a lambda at which Q~ on S_lambda differs from (lambda^2 + t)*q
        "graph_identity_witness": identity_witness,
        "k_square": k_square,
        "k_witness": str(k_witness) if k_square else None,
        "k_isotropic": k_isotropic,
        "kprime_witness": str(lam),
        "kprime_square": str(lam * lam),
        "kprime_squares_to_t": lam * lam == t_kp,
        "kprime_isotropic": is_isotropic_subspace(twisted_kp, graph_subspace(model_kp, lam)),
        # Q~ restricted to S_lambda over K'; the zero form when S_lambda is isotropic
        "kprime_restricted": str(restricted_kp),
    }
    logger.info(f"Descent obstruction for {kind}: t square in K = {k_square}, lambda = {lam} in K'")
    return report


# ---------------------------------------------------------------------------
# The phi-class in so/p
# ---------------------------------------------------------------------------

def phi_element(model: FiberModel, scale: Any = None) -> Matrix:
    """
    A_phi(x, y, x*) = (0, phi(x), psi(y)) with phi scaled by `scale`.
    It lies in so(n) because beta(v, A_phi v) = <x, psi y> + beta(phi x, y) = 0.
    """
    field, n = model.field, model.n
    scale = field.one if scale is None else scale
    rows = [[field.zero] * n for _ in range(n)]
    phi, psi = model.pair.phi, model.pair.psi
    for r, i in enumerate(model.middle_indices):
        for c in range(2):
            rows[i][c] = scale * phi[r, c]
    for r, i in enumerate(model.dual_indices):
        for c, j in enumerate(model.middle_indices):
            rows[i][j] = scale * psi[r, c]
    return Matrix.from_rows(field, rows)


def phi_class_in_quotient(model: FiberModel, scale: Any = None) -> Dict[str, Any]:
    """
    Place A_phi in so(n)/p for p the stabilizer of W = span{e1, e2}.

    For the unpadded so7 model A_phi is also recovered as a member of the
    block family by solving for its parameters.

    Returns:
        Dictionary with in_g, class_nonzero, in_hom_layer, d_component and,
        for so7, family_member
    """
    g = lie_algebra(model.form, SMOOTH)
    w = model.w()
    p = parabolic(g, w)
    a = phi_element(model, scale)
    report = {"kind": model.kind, "pad": model.pad, "n": model.n}
    report.update(quotient_class(g, p, w, a))
    report["d_component"] = str(report["d_component"])

    if model.kind == "so7" and model.pad == 0:
        field = model.field
        count = family_parameter_count("so7")
        columns = []
        for i in range(count):
            params = [field.zero] * count
            params[i] = field.one
            columns.append(parametric_family("so7", params, field).flatten())
        coordinates = solve(Matrix.from_columns(field, columns, 49), a.flatten())
        report["family_member"] = coordinates is not None
    logger.info(f"phi-class for {model.kind} (pad {model.pad}): nonzero={report['class_nonzero']}")
    return report


def sl2_trace_mismatch(field: Field, vectors: Sequence[Sequence[Any]]) -> Optional[Tuple[Any, Any]]:
    """First pair (v, w) with polarize(det)(v, w) != Tr(v w), or None."""
    sl2 = Sl2Fiber(field)
    beta: BilinearForm = sl2.form.polarize()
    for v in vectors:
        for w in vectors:
            if beta.pair(v, w) != sl2.trace_pairing(v, w):
                return tuple(v), tuple(w)
    return None


def sl2_trace_identity(field: Field, vectors: Sequence[Sequence[Any]]) -> bool:
    """polarize(det)(v, w) = Tr(v w) on the given traceless matrices."""
    return sl2_trace_mismatch(field, vectors) is None
