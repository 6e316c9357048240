import random

import numpy as np
import pytest

from src.linalg import (
    Matrix,
    SemilinearMap,
    Subspace,
    _generic_rref,
    kernel_basis,
    quotient_map,
    rank,
    rref,
    solve,
)
from src.quadform import so7_form, squaring_map, symmetric_square, all_vectors
from src.scalars import GF2, GF4, RATIONAL, gf2k

SEED = 20240601


def random_matrix(field, rows, cols, rng):
    return Matrix.from_rows(field, [[field.random(rng) for _ in range(cols)] for _ in range(rows)], cols)


def test_rank_examples():
    assert rank(Matrix.identity(GF2, 3)) == 3
    assert rank(Matrix.zero(GF2, 4, 4)) == 0
    assert rank(so7_form(GF2).gram()) == 6


def test_kernel_examples():
    assert kernel_basis(Matrix.identity(GF2, 4)).dim == 0
    assert kernel_basis(Matrix.zero(GF4, 5, 5)) == Subspace.full(GF4, 5)
    assert kernel_basis(so7_form(GF2).gram()) == Subspace.coordinate(GF2, 7, [4])


@pytest.mark.parametrize("field", [GF2, GF4, gf2k(3)], ids=lambda f: f.name)
def test_rank_nullity(field):
    rng = random.Random(SEED)
    for _ in range(300):
        rows, cols = rng.randint(1, 6), rng.randint(1, 6)
        m = random_matrix(field, rows, cols, rng)
        kernel = kernel_basis(m)
        assert rank(m) + kernel.dim == cols
        assert rank(m) == rank(m.transpose())
        for v in kernel.basis:
            assert not any(m.apply(v))


def test_packed_and_generic_elimination_agree():
    rng = random.Random(SEED)
    for _ in range(200):
        m = random_matrix(GF2, rng.randint(1, 9), rng.randint(1, 70), rng)
        reduced, pivots = rref(m)
        rows, generic_pivots = _generic_rref(m)
        assert pivots == tuple(generic_pivots)
        assert reduced.entries == tuple(tuple(r) for r in rows)


def test_gf2_array_round_trip():
    m = Matrix.from_rows(GF2, [[1, 0, 1], [0, 1, 1]])
    array = m.to_gf2_array()
    assert array.dtype == np.uint8
    assert Matrix.from_gf2_array(GF2, array) == m


def test_solve():
    v = (GF4.one, GF4.generator(), GF4.zero)
    assert solve(Matrix.identity(GF4, 3), v) == v
    assert solve(Matrix.zero(GF2, 2, 2), (GF2.one, GF2.zero)) is None
    rng = random.Random(SEED)
    for _ in range(200):
        m = random_matrix(GF4, 4, 3, rng)
        rhs = tuple(GF4.random(rng) for _ in range(4))
        x = solve(m, rhs)
        if x is not None:
            assert m.apply(x) == rhs
    with pytest.raises(ValueError):
        solve(Matrix.identity(GF2, 2), (GF2.one,))


def test_solve_over_rational_functions():
    t = RATIONAL.t()
    m = Matrix.from_rows(RATIONAL, [[t, 1], [1, t]])
    x = solve(m, (RATIONAL.one, RATIONAL.zero))
    assert m.apply(x) == (RATIONAL.one, RATIONAL.zero)


def test_canonical_form_is_basis_independent():
    rng = random.Random(SEED)
    for _ in range(100):
        vectors = [tuple(GF4.random(rng) for _ in range(5)) for _ in range(3)]
        a = Subspace.span(GF4, 5, vectors)
        mixed = [tuple(x + GF4.generator() * y for x, y in zip(vectors[0], vectors[1])), vectors[1], vectors[2]]
        assert Subspace.span(GF4, 5, mixed) == a
        assert Subspace.span(GF4, 5, list(reversed(vectors))) == a


def test_subspace_sum_and_intersection():
    a = Subspace.coordinate(GF2, 4, [0, 1])
    b = Subspace.coordinate(GF2, 4, [2, 3])
    assert (a + b).dim == 4
    assert a.intersection(b).dim == 0
    assert a + a == a and a.intersection(a) == a
    rng = random.Random(SEED)
    for _ in range(100):
        u = Subspace.span(GF4, 5, [tuple(GF4.random(rng) for _ in range(5)) for _ in range(rng.randint(0, 4))])
        w = Subspace.span(GF4, 5, [tuple(GF4.random(rng) for _ in range(5)) for _ in range(rng.randint(0, 4))])
        assert (u + w).dim + u.intersection(w).dim == u.dim + w.dim
    with pytest.raises(ValueError):
        a + Subspace.zero(GF2, 3)


def test_subspace_difference_witness():
    a = Subspace.coordinate(GF2, 4, [0, 1])
    b = Subspace.coordinate(GF2, 4, [1, 2])
    assert a.vector_outside(a + b) is None
    assert a.vector_outside(b) == (GF2.one, GF2.zero, GF2.zero, GF2.zero)
    assert b.difference_witness(a) == (GF2.zero, GF2.zero, GF2.one, GF2.zero)
    assert Subspace.zero(GF2, 4).difference_witness(a) == a.basis[0]
    one, zero = GF2.one, GF2.zero
    assert a.difference_witness(Subspace.span(GF2, 4, [(one, one, zero, zero), (zero, one, zero, zero)])) is None


def test_matrix_support():
    assert Matrix.from_rows(GF2, [[0, 1], [1, 0]]).support() == "a1_2+a2_1"
    assert Matrix.zero(GF2, 2, 2).support() == "0"
    omega = GF4.generator()
    assert Matrix.from_rows(GF4, [[0, omega], [0, 1]]).support() == f"{omega}*a1_2+a2_2"


def test_quotient_map():
    rng = random.Random(SEED)
    for _ in range(50):
        sub = Subspace.span(GF4, 6, [tuple(GF4.random(rng) for _ in range(6)) for _ in range(rng.randint(0, 5))])
        q = quotient_map(sub)
        assert q.quotient_dim == 6 - sub.dim
        assert kernel_basis(q.projection) == sub
        for i in range(q.quotient_dim):
            u = tuple(GF4.one if j == i else GF4.zero for j in range(q.quotient_dim))
            assert q(q.lift(u)) == u


def test_perp_of_isotropic_plane():
    gram = so7_form(GF2).gram()
    w = Subspace.coordinate(GF2, 7, [0, 1])
    assert w.perp(gram) == Subspace.coordinate(GF2, 7, [0, 1, 2, 3, 4])


def test_squaring_is_semilinear_over_gf4():
    for n in (1, 2, 3):
        f = squaring_map(n, GF4)
        assert isinstance(f, SemilinearMap)
        for v in all_vectors(GF4, n):
            assert f(v) == symmetric_square(v, GF4)
            for lam in GF4.elements():
                assert f(tuple(lam * x for x in v)) == tuple(lam * lam * y for y in f(v))


def test_determinant():
    m = Matrix.from_rows(GF4, [[GF4.generator(), 0], [1, 1]])
    assert m.determinant() == GF4.generator()
    assert Matrix.from_rows(GF2, [[1, 1], [1, 1]]).determinant() == GF2.zero
