import itertools
import random

import pytest

from src.linalg import Matrix, Subspace
from src.quadform import (
    MonomialIndex,
    QuadraticForm,
    all_vectors,
    count_isotropic_vectors,
    direct_sum,
    direct_sum_report,
    displayed_so7_gram,
    hyperbolic_plane,
    is_isotropic_subspace,
    polarization_report,
    so7_form,
    so8_form,
    sym2_sequence_report,
)
from src.scalars import GF2, GF4, RATIONAL

SEED = 20240601


def random_form(field, n, rng):
    return QuadraticForm.from_terms(field, n, {(i, j): field.random(rng) for i in range(n) for j in range(i, n)})


def test_evaluate_examples():
    h = hyperbolic_plane(GF2)
    assert h.evaluate((GF2.one, GF2.one)) == GF2.one
    e5 = tuple(GF2.one if i == 4 else GF2.zero for i in range(7))
    assert so7_form(GF2).evaluate(e5) == GF2.one
    det = QuadraticForm.from_terms(GF4, 3, {(0, 0): 1, (1, 2): 1})
    omega = GF4.generator()
    assert det.evaluate((omega, GF4.one, omega)) == GF4.one
    with pytest.raises(ValueError):
        h.evaluate((GF2.one,))


def test_defining_identity_on_random_forms():
    rng = random.Random(SEED)
    for _ in range(1000):
        n = rng.randint(1, 5)
        q = random_form(GF4, n, rng)
        beta = q.polarize()
        v = tuple(GF4.random(rng) for _ in range(n))
        w = tuple(GF4.random(rng) for _ in range(n))
        a, b = GF4.random(rng), GF4.random(rng)
        combo = tuple(a * x + b * y for x, y in zip(v, w))
        assert q.evaluate(combo) == a * a * q.evaluate(v) + b * b * q.evaluate(w) + a * b * beta.pair(v, w)
        assert beta.is_alternating()


def test_polarize_examples():
    assert hyperbolic_plane(GF2).gram() == Matrix.from_rows(GF2, [[0, 1], [1, 0]])
    assert QuadraticForm.from_terms(GF2, 1, {(0, 0): 1}).gram().is_zero()
    gram = so7_form(GF2).gram()
    assert gram[2, 3] == GF2.one and gram[3, 2] == GF2.one
    assert gram[2, 2] == GF2.zero and gram[3, 3] == GF2.zero
    assert not any(gram.row(4)) and not any(gram.column(4))
    assert gram != displayed_so7_gram(GF2)


def test_polarization_matches_definition():
    rng = random.Random(SEED)
    for _ in range(50):
        q = random_form(GF4, 4, rng)
        beta = q.polarize()
        v = tuple(GF4.random(rng) for _ in range(4))
        w = tuple(GF4.random(rng) for _ in range(4))
        total = tuple(x + y for x, y in zip(v, w))
        assert beta.pair(v, w) == q.evaluate(total) + q.evaluate(v) + q.evaluate(w)


@pytest.mark.parametrize("field", [GF2, GF4], ids=lambda f: f.name)
@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_polarization_report(field, n):
    report = polarization_report(n, field)
    assert report["kernel_dim"] == n
    assert report["cokernel_dim"] == n
    assert report["kernel_squares"]
    assert report["cokernel_diagonal"]


def test_squares_of_linear_forms_polarize_to_zero():
    rng = random.Random(SEED)
    for _ in range(100):
        linear = [GF4.random(rng) for _ in range(5)]
        assert QuadraticForm.square_of_linear(GF4, linear).polarize().gram.is_zero()


def test_reconstruction_from_diagonal_and_polarization():
    rng = random.Random(SEED)
    for n in range(1, 7):
        q = random_form(GF2, n, rng)
        gram = q.gram()
        for v in all_vectors(GF2, n):
            value = GF2.zero
            for i in range(n):
                value = value + v[i] * q.coefficient(i, i)
                for j in range(i + 1, n):
                    value = value + v[i] * v[j] * gram[i, j]
            assert value == q.evaluate(v)


@pytest.mark.parametrize("field", [GF2, GF4], ids=lambda f: f.name)
@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_sym2_sequences(field, n):
    report = sym2_sequence_report(n, field)
    assert report["frobenius_twist_dim"] == n
    assert report["frobenius_twist_dim"] + report["lambda2_dim"] == report["sym2_dim"]
    assert report["projection_surjective"]
    assert report["kernel_is_frobenius_twist"]
    assert report["tensor_sequence_exact"]
    assert report["s2_dim"] == n * (n + 1) // 2
    assert report["s2_image_is_frobenius_twist"]
    assert report["squaring_semilinear"]


def test_monomial_index_dimensions():
    for n in range(1, 7):
        assert MonomialIndex(n).dim == len(MonomialIndex(n).pairs) == n * (n + 1) // 2
        assert MonomialIndex(n, strict=True).dim == n * (n - 1) // 2


def test_radical_and_nondegeneracy():
    so7 = so7_form(GF2)
    assert so7.radical() == Subspace.coordinate(GF2, 7, [4])
    assert so7.is_nondegenerate()
    assert so8_form(GF2).radical().dim == 0
    assert so8_form(GF2).is_nondegenerate()
    degenerate = QuadraticForm.from_terms(GF2, 4, {(0, 1): 1, (2, 2): 1})
    assert not degenerate.is_nondegenerate()
    assert QuadraticForm.from_terms(RATIONAL, 3, {(0, 0): 1, (1, 2): 1}).is_nondegenerate()


def test_isotropic_subspace_examples():
    assert is_isotropic_subspace(so8_form(GF2), Subspace.coordinate(GF2, 8, [0, 1]))
    assert not is_isotropic_subspace(so7_form(GF2), Subspace.coordinate(GF2, 7, [4]))
    det = QuadraticForm.from_terms(GF2, 3, {(0, 0): 1, (1, 2): 1})
    assert not is_isotropic_subspace(det, Subspace.coordinate(GF2, 3, [0, 1]))
    assert is_isotropic_subspace(det, Subspace.coordinate(GF2, 3, [1]))


def _all_subspaces(n, max_dim):
    seen = set()
    vectors = list(all_vectors(GF2, n))
    for d in range(max_dim + 1):
        for basis in itertools.combinations(vectors[1:], d):
            w = Subspace.span(GF2, n, basis)
            if w.dim == d and w.basis not in seen:
                seen.add(w.basis)
                yield w


def test_isotropy_criterion_agrees_with_brute_force():
    rng = random.Random(SEED)
    forms = [random_form(GF2, 4, rng) for _ in range(3)] + [direct_sum(hyperbolic_plane(GF2), hyperbolic_plane(GF2))]
    for q in forms:
        for w in _all_subspaces(4, 3):
            members = {tuple(sum((c * b for c, b in zip(coeffs, col)), GF2.zero)
                             for col in zip(*w.basis))
                       for coeffs in all_vectors(GF2, w.dim)} if w.dim else {tuple([GF2.zero] * 4)}
            brute = all(not q.evaluate(v) for v in members)
            assert is_isotropic_subspace(q, w) == brute


def test_direct_sums():
    h = hyperbolic_plane(GF2)
    hh = direct_sum(h, h)
    assert hh.dim == 4 and hh.is_nondegenerate()
    assert direct_sum(so7_form(GF2)) == so7_form(GF2)
    padded = direct_sum(so7_form(GF2), h)
    assert padded.dim == 9 and padded.is_nondegenerate()
    assert padded.radical() == Subspace.coordinate(GF2, 9, [4])

    line = QuadraticForm.from_terms(GF2, 1, {(0, 0): 1})
    report = direct_sum_report(line, line)
    assert report["flagged"]
    assert not report["nondegenerate"]
    assert not direct_sum_report(so7_form(GF2), h)["flagged"]


@pytest.mark.parametrize("m, expected", [(1, 3), (2, 10), (3, 36)])
def test_hyperbolic_isotropic_counts(m, expected):
    form = direct_sum(*[hyperbolic_plane(GF2)] * m)
    assert count_isotropic_vectors(form) == expected
    assert expected == 2 ** (2 * m - 1) + 2 ** (m - 1)
    assert count_isotropic_vectors(form, include_zero=False) == expected - 1


def test_isotropic_count_edge_cases():
    assert count_isotropic_vectors(QuadraticForm.from_terms(GF2, 1, {(0, 0): 1})) == 1
    assert count_isotropic_vectors(so7_form(GF2), workers=1) == count_isotropic_vectors(so7_form(GF2), workers=3)
    with pytest.raises(ValueError):
        count_isotropic_vectors(QuadraticForm.zero(GF4, 13))
    with pytest.raises(ValueError):
        count_isotropic_vectors(so7_form(RATIONAL))


def test_pullback_along_identity_and_swap():
    rng = random.Random(SEED)
    q = random_form(GF4, 3, rng)
    assert q.pullback(Matrix.identity(GF4, 3)) == q
    swap = Matrix.from_rows(GF2, [[0, 1], [1, 0]])
    h = hyperbolic_plane(GF2)
    assert h.pullback(swap) == h
    assert q.first_difference(q) is None
