"""Matrices, the congruence action, and semilinear fixed spaces."""

import random

import pytest

from twistform.errors import InputError
from twistform.gf import build_field, embed, enumerate_elements, frobenius_pow
from twistform.linalg import (MatrixF, SemilinearSpec, TwistedForm,
                              complete_basis, congruence, form_value,
                              rank_kernel, semilinear_fixed_space)

F2 = build_field(2, 1)
F3 = build_field(3, 1)
F4 = build_field(2, 2)
F9 = build_field(3, 2)
F16 = build_field(2, 4)


def rand_matrix(ctx, n, rng):
    return MatrixF(ctx, tuple(
        tuple(ctx.elem(rng.randrange(ctx.size)) for _ in range(n))
        for _ in range(n)
    ))


def rand_invertible(ctx, n, rng):
    while True:
        m = rand_matrix(ctx, n, rng)
        if m.det():
            return m


def test_constructors_and_equality():
    g = F4.elem(2)
    a = MatrixF.from_rows(F4, [[1, g], [0, 1]])
    assert a[0, 1] == g
    # plain ints are prime-subfield scalars, reduced mod p
    assert MatrixF.from_rows(F4, [[3, 0], [0, 1]])[0, 0] == F4.one
    assert MatrixF.identity(F4, 2).is_identity()
    assert MatrixF.zeros(F4, 2, 3).is_zero()
    assert MatrixF.diagonal(F4, [1, g]) == MatrixF.from_rows(F4, [[1, 0], [0, g]])
    assert a != MatrixF.from_rows(F4, [[1, g], [0, g]])
    with pytest.raises(InputError):
        MatrixF.from_rows(F4, [[1, 2], [0]])
    with pytest.raises(InputError):
        MatrixF.from_rows(F4, [[F9.one]])


def test_matmul_against_by_hand():
    a = MatrixF.from_rows(F3, [[1, 2], [0, 1]])
    b = MatrixF.from_rows(F3, [[2, 1], [1, 1]])
    assert a @ b == MatrixF.from_rows(F3, [[1, 0], [1, 1]])
    assert a @ MatrixF.identity(F3, 2) == a


def test_inverse_and_det():
    rng = random.Random(11)
    for ctx in (F2, F4, F9):
        for n in (1, 2, 3, 4):
            m = rand_invertible(ctx, n, rng)
            assert (m @ m.inverse()).is_identity()
            assert (m.inverse() @ m).is_identity()
    sing = MatrixF.from_rows(F4, [[1, 1], [1, 1]])
    assert not sing.det()
    with pytest.raises(ValueError):
        sing.inverse()


def test_det_multiplicative():
    rng = random.Random(12)
    for ctx in (F4, F9):
        for n in (2, 3, 4):
            a, b = rand_matrix(ctx, n, rng), rand_matrix(ctx, n, rng)
            assert (a @ b).det() == a.det() * b.det()


def test_rank_and_kernel():
    a = MatrixF.from_rows(F3, [[1, 2, 0], [0, 1, 0], [0, 0, 0]])
    rank, kernel = rank_kernel(a)
    assert rank == 2 and len(kernel) == 1
    for vec in kernel:
        assert all(not c for c in a.mul_vec(vec))
    assert a.rank() == 2
    # canonical: free coordinate normalized to one
    assert kernel[0][2] == F3.one


def test_twist_is_entrywise_frobenius():
    rng = random.Random(13)
    m = rand_matrix(F9, 3, rng)
    t = m.twist(3)
    for i in range(3):
        for j in range(3):
            assert t[i, j] == frobenius_pow(m[i, j], 3, 1)
    assert m.twist(3, 0) is m
    assert m.twist(3, -1).twist(3, 1) == m


def test_twist_is_ring_homomorphism():
    rng = random.Random(14)
    for ctx, q in ((F4, 2), (F9, 3), (F16, 4)):
        a, b = rand_matrix(ctx, 3, rng), rand_matrix(ctx, 3, rng)
        assert (a @ b).twist(q) == a.twist(q) @ b.twist(q)
        assert (a + b).twist(q) == a.twist(q) + b.twist(q)
        assert a.twist(q).det() == frobenius_pow(a.det(), q, 1)


def test_congruence_composition_law():
    rng = random.Random(15)
    for ctx, q in ((F2, 2), (F4, 2), (F9, 3), (F4, 4)):
        for n in (2, 3, 4):
            a = rand_matrix(ctx, n, rng)
            t1 = rand_invertible(ctx, n, rng)
            t2 = rand_invertible(ctx, n, rng)
            two_steps = congruence(congruence(a, t1, q), t2, q)
            assert two_steps == congruence(a, t1 @ t2, q)


def test_congruence_identity_and_errors():
    a = rand_matrix(F4, 3, random.Random(16))
    assert congruence(a, MatrixF.identity(F4, 3), 2) == a
    with pytest.raises(InputError):
        congruence(a, MatrixF.from_rows(F4, [[1, 1], [0, 1]]), 2)
    with pytest.raises(InputError):
        congruence(a, MatrixF.zeros(F4, 3, 3), 2)


def test_form_value_matches_congruence_diagonal():
    # form_value(x, x) of the transformed matrix equals the original at T.x
    rng = random.Random(17)
    a = rand_matrix(F9, 3, rng)
    t = rand_invertible(F9, 3, rng)
    b = congruence(a, t, 3)
    for _ in range(10):
        x = tuple(F9.elem(rng.randrange(9)) for _ in range(3))
        tx = t.mul_vec(x)
        assert form_value(b, x, x, 3) == form_value(a, tx, tx, 3)


def test_twisted_form_validation():
    with pytest.raises(InputError):
        TwistedForm(MatrixF.zeros(F4, 2, 2), 2)
    with pytest.raises(InputError):
        TwistedForm(MatrixF.identity(F4, 2), 3)
    form = TwistedForm(MatrixF.identity(F4, 3), 4)
    assert form.n == 2 and form.twist_e == 2


def test_complete_basis():
    rng = random.Random(18)
    for ctx in (F2, F9):
        for n in (2, 3, 4):
            for pos in range(n):
                v = tuple(ctx.elem(rng.randrange(ctx.size)) for _ in range(n))
                if not any(v):
                    v = (ctx.one,) + v[1:]
                m = complete_basis(v, pos)
                assert m.det()
                assert m.col(pos) == v
    with pytest.raises(InputError):
        complete_basis((F2.zero, F2.zero), 0)


def test_map_field_embeds_entrywise():
    a = MatrixF.from_rows(F4, [[1, 2], [3, 0]])
    b = a.map_field(F16)
    for i in range(2):
        for j in range(2):
            assert b[i, j] == embed(a[i, j], F16)
    assert a.map_field(F4) is a


def test_block_diag_and_submatrix():
    a = MatrixF.identity(F4, 2)
    b = MatrixF.from_rows(F4, [[2]])
    c = MatrixF.block_diag([a, b])
    assert c == MatrixF.diagonal(F4, [1, 1, 2])
    assert c.submatrix((2,), (2,)) == b


def test_semilinear_fixed_space_solves_equation():
    # v^(q^2) = Q.v over the ambient field; every reported basis vector must
    # satisfy it exactly, and the basis must be F_{q^2}-independent
    rng = random.Random(19)
    for ctx, q, ambient in ((F4, 2, F16), (F2, 2, F4)):
        q_matrix = rand_invertible(ctx, 2, rng)
        spec = SemilinearSpec(q_matrix, q, 2)
        basis = semilinear_fixed_space(spec, ambient)
        qa = q_matrix.map_field(ambient)
        for vec in basis:
            lhs = tuple(frobenius_pow(x, q, 2) for x in vec)
            assert lhs == qa.mul_vec(vec)
        if basis:
            mat = MatrixF(ambient, tuple(basis))
            assert mat.rank() == len(basis)


def test_semilinear_fixed_space_identity_gives_full_space():
    basis = semilinear_fixed_space(SemilinearSpec(MatrixF.identity(F2, 2), 2, 1), F4)
    # v^2 = v over F_4 means v has entries in F_2: a 2-dimensional F_2-space
    assert len(basis) == 2
    for vec in basis:
        for x in vec:
            assert frobenius_pow(x, 2, 1) == x
