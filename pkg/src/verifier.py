"""
Verification suites.

Each suite returns the report lines for one family of checks; run_suite
prints them and maps failures to the exit code. Suites are independent, so
"all" may run them on a thread pool; lines are always assembled in the
fixed suite order and never depend on the worker count.
"""

import logging
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, TextIO, Tuple

from config import DEFAULT_SEED, LOG_LEVEL, RANDOM_SAMPLES, WORKERS
from src.fibermodel import (
    KINDS,
    Sl2Fiber,
    build_adjoint_pair,
    build_model,
    descent_obstruction,
    phi_class_in_quotient,
    phi_element,
    sl2_trace_mismatch,
    verify_nondegenerate_twist,
    verify_twist_identity,
)
from src.linalg import Matrix, Subspace, solve
from src.ortho import (
    LITERAL,
    SCHEME_TANGENT,
    SMOOTH,
    FAMILY_LAYOUT,
    LieSubalgebra,
    OrthogonalGroupReport,
    bracket,
    dickson,
    enumerate_orthogonal_group,
    family_parameters,
    family_span,
    is_orthogonal,
    lie_algebra,
    parabolic,
    parabolic_by_restriction,
    parametric_family,
    quotient_class,
    quotient_sequence_report,
    shape_equivalence,
    standard_isotropic_plane,
)
from src.quadform import (
    QuadraticForm,
    all_vectors,
    count_isotropic_vectors,
    direct_sum,
    displayed_so7_gram,
    hyperbolic_plane,
    monomial_name,
    polarization_report,
    so7_form,
    so8_form,
    squaring_map,
    sym2_sequence_report,
)
from src.reports import Report
from src.scalars import (
    GF2,
    GF4,
    RATIONAL,
    TOWER,
    Field,
    RationalFunction,
    TowerElement,
    frobenius,
    gf2k,
    is_square,
    sqrt,
)

# Configure logging
logging.basicConfig(level=LOG_LEVEL, format='%(asctime)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VerifyOptions:
    """Options shared by all suites; None means the suite's default range."""

    n: Optional[int] = None
    k: Optional[int] = None
    seed: int = DEFAULT_SEED
    workers: int = WORKERS
    samples: int = RANDOM_SAMPLES

    def __post_init__(self):
        if self.n is not None and self.n < 1:
            raise ValueError(f"dimension must be at least 1, got n = {self.n}")
        if self.k is not None and not 1 <= self.k <= 8:
            raise ValueError(f"field degree must satisfy 1 <= k <= 8, got k = {self.k}")
        if self.workers < 1:
            raise ValueError(f"worker count must be at least 1, got {self.workers}")
        if self.samples < 0:
            raise ValueError(f"sample count must be non-negative, got {self.samples}")


def _rng(options: VerifyOptions, suite: str) -> random.Random:
    return random.Random(f"{options.seed}:{suite}")


def random_form(field: Field, n: int, rng: random.Random) -> QuadraticForm:
    terms = {(i, j): field.random(rng) for i in range(n) for j in range(i, n)}
    return QuadraticForm.from_terms(field, n, terms)


def _random_vector(field: Field, n: int, rng: random.Random) -> Tuple:
    return tuple(field.random(rng) for _ in range(n))


def _first(items: Sequence[Any]) -> Any:
    return items[0] if items else None


def _mismatch(actual: Any, expected: Any) -> Optional[str]:
    return None if actual == expected else f"{actual}!={expected}"


def _matrix_witness(field: Field, v: Optional[Sequence[Any]], n: int) -> Optional[str]:
    """Render a flattened n x n matrix witness, or None."""
    return None if v is None else Matrix.unflatten(field, v, n).support()


def _space_witness(actual: Subspace, expected: Subspace, n: int) -> Optional[str]:
    """A matrix in one subspace of End(V) but not the other, or None when they agree."""
    return _matrix_witness(actual.field, actual.difference_witness(expected), n)


# ---------------------------------------------------------------------------
# scalars
# ---------------------------------------------------------------------------

def suite_scalars(options: VerifyOptions) -> Report:
    report = Report()
    rng = _rng(options, "scalars")
    for k in (1, 2, 3):
        field = gf2k(k)
        elements = list(field.elements())
        additive = [(x, y) for x in elements for y in elements
                    if frobenius(x + y) != frobenius(x) + frobenius(y)]
        report.check(f"scalars.{field.name}.frobenius-additive", not additive, k=k,
                     witness=additive[0] if additive else None)
        roots = [x for x in elements if sqrt(frobenius(x)) != x]
        report.check(f"scalars.{field.name}.sqrt", not roots, k=k, witness=roots[0] if roots else None)
        broken = [(x, y, z) for x in elements for y in elements for z in elements
                  if x * (y + z) != x * y + x * z or (x * y) * z != x * (y * z) or x * y != y * x]
        inverses = [x for x in elements if x and x * x.inverse() != field.one]
        report.check(f"scalars.{field.name}.field-axioms", not broken and not inverses, k=k,
                     witness=(broken or inverses or [None])[0])

    omega = GF4.generator()
    report.check("scalars.gf4.omega-squared", frobenius(omega) == omega + GF4.one, value=frobenius(omega),
                 witness=_mismatch(frobenius(omega), omega + GF4.one))
    report.check("scalars.gf4.sqrt-omega", sqrt(omega) == omega + GF4.one, value=sqrt(omega),
                 witness=_mismatch(sqrt(omega), omega + GF4.one))

    one_plus_t = RationalFunction.parse("11")
    report.check("scalars.rational.frobenius", frobenius(one_plus_t) == RationalFunction.parse("101"),
                 value=frobenius(one_plus_t), witness=_mismatch(frobenius(one_plus_t), RationalFunction.parse("101")))
    t = RATIONAL.t()
    square, root = is_square(t)
    report.check("scalars.rational.t-not-square", not square, witness=root)
    square, witness = is_square(t * t)
    report.check("scalars.rational.t2-square", square and witness == t,
                 witness=_mismatch(witness, t) if square else t * t)
    x = RationalFunction.parse("101/00001")
    square, witness = is_square(x)
    report.check("scalars.rational.square-quotient", square and witness == RationalFunction.parse("11/001"),
                 value=x, witness=_mismatch(witness, RationalFunction.parse("11/001")) if square else x)

    failures = []
    for _ in range(options.samples):
        x = RATIONAL.random(rng)
        square, witness = is_square(x * x)
        if not square or witness != x:
            failures.append(x)
    report.check("scalars.rational.is-square-sweep", not failures, samples=options.samples,
                 witness=failures[0] if failures else None)

    not_in_k, not_invertible = [], []
    for _ in range(options.samples):
        z = TOWER.random(rng, 4)
        if not (z * z).in_base_field():
            not_in_k.append(z)
        if z:
            # (a + bs)(c + ds) = 1 as a 2x2 system over K
            system = Matrix.from_rows(RATIONAL, [[z.a, t * z.b], [z.b, z.a]])
            solution = solve(system, (RATIONAL.one, RATIONAL.zero))
            if solution is None or z * TowerElement(*solution) != TOWER.one:
                not_invertible.append(z)
    report.check("scalars.tower.squares-in-K", not not_in_k, samples=options.samples,
                 witness=not_in_k[0] if not_in_k else None)
    report.check("scalars.tower.inverses", not not_invertible, samples=options.samples,
                 witness=not_invertible[0] if not_invertible else None)
    return report


# ---------------------------------------------------------------------------
# polar
# ---------------------------------------------------------------------------

def suite_polar(options: VerifyOptions) -> Report:
    report = Report()
    rng = _rng(options, "polar")
    sizes = [options.n] if options.n is not None else list(range(1, 7))
    for field in (GF2, GF4):
        for n in sizes:
            r = polarization_report(n, field)
            witnesses = r["witnesses"]
            report.check("polar.ker.dim", r["kernel_dim"] == n, n=n, dim=r["kernel_dim"], field=field.name,
                         witness=_mismatch(r["kernel_dim"], n))
            report.check("polar.coker.dim", r["cokernel_dim"] == n, n=n, dim=r["cokernel_dim"], field=field.name,
                         witness=_mismatch(r["cokernel_dim"], n))
            report.check("polar.ker.squares", r["kernel_squares"], n=n, field=field.name,
                         witness=witnesses.get("kernel_squares"))
            report.check("polar.coker.diagonal", r["cokernel_diagonal"], n=n, field=field.name,
                         witness=witnesses.get("cokernel_diagonal"))

    n = 4 if options.n is None else options.n
    identity_failures, alternating_failures, square_failures = [], [], []
    for _ in range(options.samples):
        q = random_form(GF4, n, rng)
        v, w = _random_vector(GF4, n, rng), _random_vector(GF4, n, rng)
        a, b = GF4.random(rng), GF4.random(rng)
        beta = q.polarize()
        combo = tuple(a * x + b * y for x, y in zip(v, w))
        if q.evaluate(combo) != a * a * q.evaluate(v) + b * b * q.evaluate(w) + a * b * beta.pair(v, w):
            identity_failures.append(str(q))
        if not beta.is_alternating():
            alternating_failures.append(str(q))
        linear = _random_vector(GF4, n, rng)
        if not QuadraticForm.square_of_linear(GF4, linear).gram().is_zero():
            square_failures.append(linear)
    report.check("polar.identity", not identity_failures, n=n, samples=options.samples,
                 witness=identity_failures[0] if identity_failures else None)
    report.check("polar.alternating", not alternating_failures, n=n, samples=options.samples,
                 witness=alternating_failures[0] if alternating_failures else None)
    report.check("polar.square-in-kernel", not square_failures, n=n, samples=options.samples,
                 witness=square_failures[0] if square_failures else None)

    # Q(v) = sum v_i Q(e_i) + sum_{i<j} v_i v_j beta(e_i, e_j) over F2 (v_i^2 = v_i)
    reconstruction_failures = []
    for n in ([options.n] if options.n is not None else range(1, 7)):
        q = random_form(GF2, n, rng)
        gram = q.gram()
        for v in all_vectors(GF2, n):
            value = GF2.zero
            for i in range(n):
                value = value + v[i] * q.coefficient(i, i)
                for j in range(i + 1, n):
                    value = value + v[i] * v[j] * gram[i, j]
            if value != q.evaluate(v):
                reconstruction_failures.append((n, v))
                break
    report.check("polar.reconstruction", not reconstruction_failures,
                 witness=reconstruction_failures[0] if reconstruction_failures else None)
    return report


# ---------------------------------------------------------------------------
# sym2
# ---------------------------------------------------------------------------

def suite_sym2(options: VerifyOptions) -> Report:
    report = Report()
    sizes = [options.n] if options.n is not None else list(range(1, 6))
    for field in (GF2, GF4):
        for n in sizes:
            r = sym2_sequence_report(n, field)
            witnesses = r["witnesses"]
            exact = r["projection_surjective"] and r["kernel_is_frobenius_twist"] and r["dimension_count"]
            exact_witness = _first([witnesses[key] for key in
                                    ("projection_surjective", "kernel_is_frobenius_twist", "dimension_count")
                                    if key in witnesses])
            report.check("sym2.exact", exact, n=n, field=field.name, twist=r["frobenius_twist_dim"],
                         sym2=r["sym2_dim"], lambda2=r["lambda2_dim"], witness=exact_witness)
            report.check("sym2.tensor-exact", r["tensor_sequence_exact"], n=n, field=field.name, s2=r["s2_dim"],
                         witness=witnesses.get("tensor_sequence_exact"))
            report.check("sym2.s2-image", r["s2_image_is_frobenius_twist"], n=n, field=field.name,
                         dim=r["frobenius_twist_dim"], witness=witnesses.get("s2_image_is_frobenius_twist"))
            report.check("sym2.squaring", r["squaring_semilinear"], n=n, field=field.name,
                         witness=witnesses.get("squaring_semilinear"))

    failures = []
    for n in (1, 2, 3):
        square = squaring_map(n, GF4)
        for v in all_vectors(GF4, n):
            for lam in GF4.elements():
                if square(tuple(lam * x for x in v)) != tuple(lam * lam * y for y in square(v)):
                    failures.append((n, v, lam))
    report.check("sym2.semilinear", not failures, field=GF4.name, witness=failures[0] if failures else None)
    return report


# ---------------------------------------------------------------------------
# lie / parabolic / quotient
# ---------------------------------------------------------------------------

def _field(options: VerifyOptions) -> Field:
    return gf2k(1 if options.k is None else options.k)


def _first_entry_difference(a: Matrix, b: Matrix) -> Optional[Tuple[int, int]]:
    for i in range(a.rows):
        for j in range(a.cols):
            if a[i, j] != b[i, j]:
                return i + 1, j + 1
    return None


def suite_lie(options: VerifyOptions) -> Report:
    report = Report()
    field = _field(options)
    so8 = lie_algebra(so8_form(field), SMOOTH)
    so8_scheme = lie_algebra(so8_form(field), SCHEME_TANGENT)
    so7 = lie_algebra(so7_form(field), SMOOTH)
    so7_scheme = lie_algebra(so7_form(field), SCHEME_TANGENT)

    report.check("lie.so8.dim", so8.dim == 28, dim=so8.dim, witness=_mismatch(so8.dim, 28))
    report.check("lie.so7.smooth.dim", so7.dim == 21, dim=so7.dim, witness=_mismatch(so7.dim, 21))
    report.check("lie.so7.scheme.dim", so7_scheme.dim == 22, dim=so7_scheme.dim,
                 witness=_mismatch(so7_scheme.dim, 22))
    for which, g in (("so8", so8), ("so7", so7)):
        report.check(f"lie.{which}.family", shape_equivalence(which, g), dim=g.dim,
                     witness=_space_witness(family_span(which, field), g.space, g.n))

    literal = family_span("so7", field, LITERAL)
    literal_inside = literal.is_subspace_of(so7.space)
    report.info("lie.so7.family-literal", equal=literal == so7.space, inside=literal_inside,
                dim=(literal + so7.space).dim)
    gram = so7_form(field).gram()
    displayed = displayed_so7_gram(field)
    report.info("lie.so7.gram-display", matches=gram == displayed,
                first_difference=_first_entry_difference(gram, displayed))

    for check_id, g in (("lie.so8.bracket", so8), ("lie.so7.bracket", so7),
                        ("lie.so7.scheme.bracket", so7_scheme)):
        pair = g.bracket_witness()
        report.check(check_id, pair is None, dim=g.dim, witness=_bracket_witness(g, pair))

    report.check("lie.so8.codim", so8.is_subalgebra_of(so8_scheme) and so8_scheme.dim == so8.dim,
                 codim=so8_scheme.dim - so8.dim,
                 witness=_matrix_witness(field, so8.space.vector_outside(so8_scheme.space), 8)
                 or _mismatch(so8_scheme.dim - so8.dim, 0))
    report.check("lie.so7.codim", so7.is_subalgebra_of(so7_scheme) and so7_scheme.dim - so7.dim == 1,
                 codim=so7_scheme.dim - so7.dim,
                 witness=_matrix_witness(field, so7.space.vector_outside(so7_scheme.space), 7)
                 or _mismatch(so7_scheme.dim - so7.dim, 1))
    e55 = [field.zero] * 49
    e55[4 * 7 + 4] = field.one
    extended = so7.space + Subspace.span(field, 49, [e55])
    report.check("lie.so7.extra-direction", so7_scheme.space == extended, direction="E55",
                 witness=_space_witness(so7_scheme.space, extended, 7))
    return report


def _bracket_witness(g: LieSubalgebra, pair: Optional[Tuple[int, int]]) -> Optional[str]:
    """[B_i, B_j] outside g for basis matrices B_i, B_j (1-based), with the bracket's support."""
    if pair is None:
        return None
    i, j = pair
    basis = g.matrices()
    return f"[B{i + 1},B{j + 1}]={bracket(basis[i], basis[j]).support()}"


def _family_subspan(which: str, field: Field, vanishing: Tuple[str, ...]) -> Subspace:
    """Span of the family with the named blocks set to zero."""
    vectors = []
    for name, size in FAMILY_LAYOUT[which]:
        if name in vanishing:
            continue
        for i in range(size):
            values = [0] * size
            values[i] = 1
            params = family_parameters(which, field, {name: values})
            vectors.append(parametric_family(which, params, field).flatten())
    n = 8 if which == "so8" else 7
    return Subspace.span(field, n * n, vectors)


def suite_parabolic(options: VerifyOptions) -> Report:
    report = Report()
    field = _field(options)
    cases = (
        ("so8", so8_form(field), 19, ("X4", "X6", "D4")),
        ("so7", so7_form(field), 14, ("X3", "row1", "D2")),
    )
    for name, form, expected, vanishing in cases:
        g = lie_algebra(form, SMOOTH)
        w = standard_isotropic_plane(field, form.dim)
        p = parabolic(g, w)
        n = form.dim
        report.check(f"parabolic.{name}.dim", p.dim == expected, dim=p.dim, witness=_mismatch(p.dim, expected))
        restricted = parabolic_by_restriction(g, w).space
        report.check(f"parabolic.{name}.two-ways", p.space == restricted, dim=p.dim,
                     witness=_space_witness(p.space, restricted, n))
        blocks = _family_subspan(name, field, vanishing)
        report.check(f"parabolic.{name}.block-conditions", p.space == blocks, vanishing=",".join(vanishing),
                     witness=_space_witness(p.space, blocks, n))
        pair = p.bracket_witness()
        report.check(f"parabolic.{name}.bracket", pair is None, dim=p.dim, witness=_bracket_witness(p, pair))
        trivial = parabolic(g, Subspace.zero(field, n))
        report.check(f"parabolic.{name}.zero-space", trivial.space == g.space, dim=trivial.dim,
                     witness=_space_witness(trivial.space, g.space, n))
    return report


def suite_quotient(options: VerifyOptions) -> Report:
    report = Report()
    field = _field(options)
    for name, form, expected in (("so8", so8_form(field), (8, 9, 1)), ("so7", so7_form(field), (6, 7, 1))):
        g = lie_algebra(form, SMOOTH)
        w = standard_isotropic_plane(field, form.dim)
        p = parabolic(g, w)
        r = quotient_sequence_report(g, p, w)
        report.check(f"quotient.{name}.dims", r.dims == expected, sub=r.sub_dim, total=r.total_dim, line=r.line_dim,
                     witness=_mismatch(r.dims, expected))
        for check, ok in r.checks.items():
            report.check(f"quotient.{name}.{check}", ok, witness=r.witnesses.get(check))
    return report


# ---------------------------------------------------------------------------
# dickson / isotropic
# ---------------------------------------------------------------------------

def dickson_forms() -> List[Tuple[str, QuadraticForm, Optional[Tuple[int, int]]]]:
    h = hyperbolic_plane(GF2)
    odd = direct_sum(QuadraticForm.from_terms(GF2, 1, {(0, 0): 1}), h)
    return [("hyperbolic", h, (2, 1)), ("hyperbolic2", direct_sum(h, h), (72, 36)), ("odd3", odd, None)]


def suite_dickson(options: VerifyOptions) -> Report:
    report = Report()
    h = hyperbolic_plane(GF2)
    identity = Matrix.identity(GF2, 2)
    swap = Matrix.from_rows(GF2, [[0, 1], [1, 0]])
    report.check("dickson.identity", dickson(identity) == 0, value=dickson(identity),
                 witness=identity.support())
    swap_orthogonal = is_orthogonal(swap, h)
    report.check("dickson.swap", swap_orthogonal and dickson(swap) == 1, value=dickson(swap),
                 witness=swap.support() if swap_orthogonal else "not-orthogonal")
    omega = GF4.generator()
    diagonal = Matrix.from_rows(GF4, [[omega, 0], [0, omega.inverse()]])
    report.check("dickson.gf4-diagonal", is_orthogonal(diagonal, hyperbolic_plane(GF4)), lam=omega,
                 witness=diagonal.support())

    for name, form, expected in dickson_forms():
        group = enumerate_orthogonal_group(form, options.workers)
        witnesses = group.witnesses
        if expected is None:
            report.info(f"dickson.{name}.order", order=group.order, kernel=group.dickson_kernel_order)
            moved = witnesses.get("fixes-radical")
            report.check(f"dickson.{name}.fixes-radical", bool(group.fixes_radical),
                         witness=_element_witness(group, moved) if moved is not None else "no-radical")
        else:
            order = (group.order, group.dickson_kernel_order)
            report.check(f"dickson.{name}.order", order == expected,
                         order=group.order, kernel=group.dickson_kernel_order,
                         witness=_mismatch(f"{order[0]}/{order[1]}", f"{expected[0]}/{expected[1]}"))
            report.check(f"dickson.{name}.index", group.dickson_index == 2, index=group.dickson_index,
                         witness=_mismatch(group.dickson_index, 2))
        for check, ok in (("closed", group.closed_under_product), ("multiplicative", group.dickson_multiplicative),
                          ("det-one", group.determinant_one)):
            found = witnesses.get(check)
            if isinstance(found, tuple):
                found = "*".join(_element_witness(group, i) for i in found)
            elif found is not None:
                found = _element_witness(group, found)
            report.check(f"dickson.{name}.{check}", ok, order=group.order, witness=found)
    return report


def _element_witness(group: OrthogonalGroupReport, index: int) -> str:
    """Group element by its position in the enumeration, with its nonzero entries."""
    return f"g{index}[{group.elements[index].g.support()}]"


def suite_isotropic(options: VerifyOptions) -> Report:
    report = Report()
    h = hyperbolic_plane(GF2)
    for m in (1, 2, 3):
        form = direct_sum(*[h] * m)
        count = count_isotropic_vectors(form, include_zero=True, workers=options.workers)
        expected = 2 ** (2 * m - 1) + 2 ** (m - 1)
        report.check("isotropic.hyperbolic.count", count == expected, m=m, count=count, expected=expected,
                     witness=_mismatch(count, expected))
    square = QuadraticForm.from_terms(GF2, 1, {(0, 0): 1})
    count = count_isotropic_vectors(square)
    report.check("isotropic.square.count", count == 1, count=count, witness=_mismatch(count, 1))
    so7 = so7_form(GF2)
    single = count_isotropic_vectors(so7, workers=1)
    sharded = count_isotropic_vectors(so7, workers=4)
    report.check("isotropic.sharding", single == sharded, count=single, witness=_mismatch(sharded, single))
    return report


# ---------------------------------------------------------------------------
# fiber / descent
# ---------------------------------------------------------------------------

def _failed_conditions(**conditions: bool) -> Optional[str]:
    """Comma-joined names of the conditions that do not hold, or None."""
    failed = [name for name, ok in conditions.items() if not ok]
    return ",".join(failed) or None


def suite_fiber(options: VerifyOptions) -> Report:
    report = Report()
    sl2 = Sl2Fiber(GF4)
    mismatch = sl2_trace_mismatch(GF4, list(all_vectors(GF4, 3)))
    report.check("fiber.sl2.trace", mismatch is None, field=GF4.name, witness=mismatch)
    radical = sl2.form.radical()
    expected_radical = Subspace.span(GF4, 3, [sl2.identity])
    identity_value = sl2.form.evaluate(sl2.identity)
    report.check("fiber.sl2.radical", radical == expected_radical and identity_value == GF4.one,
                 dim=radical.dim,
                 witness=radical.difference_witness(expected_radical) or _mismatch(identity_value, GF4.one))

    pair = build_adjoint_pair(GF2)
    columns = pair.isotropy_witness()
    report.check("fiber.adjoint.isotropic-image", columns is None and pair.image().dim == 2,
                 witness=(f"beta(phi_e{columns[0] + 1},phi_e{columns[1] + 1})!=0" if columns
                          else _mismatch(pair.image().dim, 2)))
    report.check("fiber.adjoint.q-square", pair.q_is_square(), q=pair.q, witness=pair.q)
    defect = pair.psi - pair.phi.transpose() @ pair.middle.gram()
    report.check("fiber.adjoint.relation", pair.adjoint_holds(), witness=defect.support())
    expected_psi = Matrix.from_rows(GF2, [[0, 0, 0], [0, 0, 1]])
    report.check("fiber.adjoint.psi", pair.psi == expected_psi, psi="(a,b,c)->(0,c)",
                 witness=(pair.psi - expected_psi).support())
    report.check("fiber.adjoint.psi-phi-zero", pair.psi_phi_is_zero(), witness=(pair.psi @ pair.phi).support())

    for kind, reference in (("so7", so7_form(GF2)), ("so8-hat", so8_form(GF2))):
        difference = build_model(kind, 0, GF2).form.first_difference(reference)
        report.check(f"fiber.{kind}.matches-form", difference is None,
                     witness=monomial_name(*difference) if difference else None)
    for kind in KINDS:
        for pad in (0, 1, 2):
            model = build_model(kind, pad, GF2)
            radical = model.form.radical()
            report.check(f"fiber.{kind}.pad{pad}.nondegenerate", model.form.is_nondegenerate(), n=model.n,
                         witness=_first(radical.basis))

    s = TOWER.s()
    for kind in KINDS:
        r = verify_twist_identity(build_model(kind, 0, TOWER), s)
        report.check(f"fiber.{kind}.twist", r["holds"], s=r["s"], witness=r["witness"])
        defect = r["involution_defect"]
        report.check(f"fiber.{kind}.involution", r["involution"], s=r["s"],
                     witness=None if defect is None else defect.support())

    for k in (1, 2, 3):
        field = gf2k(k)
        model = build_model("so7", 0, field)
        failures = [x for x in field.elements() if not verify_twist_identity(model, x)["holds"]]
        report.check("fiber.so7.twist-sweep", not failures, k=k, values=field.order,
                     witness=failures[0] if failures else None)

    omega = GF4.generator()
    perturbed = verify_twist_identity(build_model("so7", 0, GF4, adjoint_scalar=omega), omega)
    report.check("fiber.so7.twist-perturbed", not perturbed["holds"], detected=not perturbed["holds"],
                 monomial=perturbed["witness"], witness="identity-holds")

    for kind in KINDS:
        for pad in (0, 1, 2):
            r = phi_class_in_quotient(build_model(kind, pad, GF2))
            ok = r["in_g"] and r["class_nonzero"] and r["in_hom_layer"] and r.get("family_member", True)
            report.check(f"fiber.{kind}.pad{pad}.phi-class", ok, n=r["n"], nonzero=r["class_nonzero"],
                         hom_layer=r["in_hom_layer"],
                         witness=_failed_conditions(in_g=r["in_g"], class_nonzero=r["class_nonzero"],
                                                    in_hom_layer=r["in_hom_layer"],
                                                    family_member=r.get("family_member", True)))

    model = build_model("so7", 0, GF2)
    zero = phi_class_in_quotient(model, GF2.zero)
    report.check("fiber.so7.phi-zero", not zero["class_nonzero"],
                 witness=phi_element(model, GF2.zero).support())
    g = lie_algebra(model.form, SMOOTH)
    w = model.w()
    p = parabolic(g, w)
    d2 = parametric_family("so7", family_parameters("so7", GF2, {"D2": [1]}), GF2)
    layers = quotient_class(g, p, w, d2)
    report.check("fiber.so7.d-layer", layers["class_nonzero"] and not layers["in_hom_layer"],
                 d_component=layers["d_component"],
                 witness=_failed_conditions(class_nonzero=layers["class_nonzero"],
                                            outside_hom_layer=not layers["in_hom_layer"]))
    phi_layers = quotient_class(g, p, w, phi_element(model))
    report.check("fiber.so7.layers-distinct", phi_layers["in_hom_layer"] != layers["in_hom_layer"],
                 witness=f"hom_layer={phi_layers['in_hom_layer']}")
    return report


def suite_descent(options: VerifyOptions) -> Report:
    report = Report()
    r = descent_obstruction("so7", 0)
    report.info("descent.scope", text=r["banner"])
    report.check("descent.identity", r["graph_identity"], restricted="(lambda^2+t)*q",
                 witness=r["graph_identity_witness"] and f"lambda={r['graph_identity_witness']}")
    report.check("descent.K.no-sqrt-t", not r["k_square"], witness=r["k_witness"])
    report.check("descent.Kprime.witness", r["kprime_squares_to_t"], **{"lambda": r["kprime_witness"]},
                 witness=_mismatch(r["kprime_square"], r["t"]))
    report.check("descent.Kprime.isotropic", r["kprime_isotropic"], **{"lambda": r["kprime_witness"]},
                 witness=r["kprime_restricted"])

    model_k = build_model("so7", 0, RATIONAL)
    nondegenerate = verify_nondegenerate_twist(model_k)
    report.check("descent.K.nondegenerate", nondegenerate["nondegenerate"] and nondegenerate["radical_is_identity"],
                 radical_dim=nondegenerate["radical_dim"], value=nondegenerate["radical_value"],
                 witness=_failed_conditions(nondegenerate=nondegenerate["nondegenerate"],
                                            radical_is_identity=nondegenerate["radical_is_identity"]))
    report.check("descent.K.polarization", nondegenerate["polarization_unchanged"],
                 witness=nondegenerate["polarization_witness"])
    non_square_q = QuadraticForm.from_terms(RATIONAL, 2, {(0, 1): 1})
    flagged = verify_nondegenerate_twist(model_k, q=non_square_q)
    report.check("descent.K.nonsquare-q-flagged", not flagged["polarization_unchanged"], q=non_square_q,
                 witness="polarization-unchanged")

    t = RATIONAL.t()
    squared = descent_obstruction("so7", 0, t * t)
    report.check("descent.K.square-twist", squared["k_square"] and bool(squared["k_isotropic"]),
                 **{"lambda": squared["k_witness"]},
                 witness=_failed_conditions(k_square=squared["k_square"], k_isotropic=bool(squared["k_isotropic"])))

    for kind in KINDS[1:]:
        other = descent_obstruction(kind, 0)
        ok = other["graph_identity"] and not other["k_square"] and other["kprime_isotropic"]
        report.check(f"descent.{kind}", ok, **{"lambda": other["kprime_witness"]},
                     witness=_failed_conditions(graph_identity=other["graph_identity"],
                                                no_sqrt_t=not other["k_square"],
                                                kprime_isotropic=other["kprime_isotropic"]))
    return report


SUITES: Dict[str, Callable[[VerifyOptions], Report]] = {
    "scalars": suite_scalars,
    "polar": suite_polar,
    "sym2": suite_sym2,
    "lie": suite_lie,
    "parabolic": suite_parabolic,
    "quotient": suite_quotient,
    "dickson": suite_dickson,
    "isotropic": suite_isotropic,
    "fiber": suite_fiber,
    "descent": suite_descent,
}


def collect_suite(name: str, options: VerifyOptions) -> Report:
    """
    Run one suite (or "all") and return its report, seed line first.

    Args:
        name: Suite id or "all"
        options: Shared options

    Returns:
        Report
    """
    if name != "all" and name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; expected one of {sorted(SUITES) + ['all']}")
    names = list(SUITES) if name == "all" else [name]
    report = Report()
    report.info("run.seed", seed=options.seed)
    workers = max(1, options.workers)
    if workers > 1 and len(names) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            parts = list(executor.map(lambda suite: SUITES[suite](options), names))
    else:
        parts = [SUITES[suite](options) for suite in names]
    for part in parts:
        report.extend(part.lines)
    logger.info(f"Suite {name}: {len(report.lines)} lines, {len(report.failures)} failures")
    return report


def run_suite(name: str, options: VerifyOptions, stream: Optional[TextIO] = None) -> int:
    """
    Run a suite and print its lines.

    Returns:
        0 if every check passed, 1 otherwise
    """
    report = collect_suite(name, options)
    (stream or sys.stdout).write(report.render())
    return report.exit_code
