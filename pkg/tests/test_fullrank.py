"""Full-rank normalization to the identity form and its stage functions."""

import random

import pytest

from twistform.classify import random_gl
from twistform.errors import InputError, UnsupportedRankError
from twistform.fullrank import (asymmetry, hermitian_diagonalize, hermitize,
                                lang_solve, normalize_full_rank,
                                scale_diagonal_to_identity)
from twistform.gf import build_field, frobenius_pow
from twistform.linalg import MatrixF, congruence

F2 = build_field(2, 1)
F4 = build_field(2, 2)
F3 = build_field(3, 1)
F9 = build_field(3, 2)


def test_asymmetry_detects_hermitian():
    # transpose(A) == A^(q) exactly when the asymmetry operator is trivial
    g = F4.elem(2)
    sym = MatrixF.from_rows(F4, [[0, 1], [1, 0]])
    assert asymmetry(sym, 2).is_identity()
    skew = MatrixF.from_rows(F4, [[1, g], [0, 1]])
    assert skew.transpose() != skew.twist(2)
    assert not asymmetry(skew, 2).is_identity()
    with pytest.raises(UnsupportedRankError):
        asymmetry(MatrixF.zeros(F4, 2, 2), 2)
    with pytest.raises(InputError):
        asymmetry(MatrixF.zeros(F4, 2, 3), 2)


def test_asymmetry_transformation_rule():
    rng = random.Random(7)
    for _ in range(10):
        a = random_gl(F9, 3, rng)
        t = random_gl(F9, 3, rng)
        lhs = asymmetry(congruence(a, t, 3), 3)
        rhs = t.inverse() @ asymmetry(a, 3) @ t.twist(9)
        assert lhs == rhs


def test_lang_solve_postcondition():
    rng = random.Random(11)
    for ctx, q in ((F2, 2), (F4, 2), (F3, 3)):
        for _ in range(5):
            qm = random_gl(ctx, 2, rng)
            t, fld = lang_solve(qm, q)
            assert t.det().val
            assert t.twist(q * q) == qm.map_field(fld) @ t


def test_hermitize_postcondition():
    rng = random.Random(13)
    for ctx, q in ((F2, 2), (F4, 2), (F9, 3)):
        for _ in range(5):
            a = random_gl(ctx, 3, rng)
            a_h, t1, fld = hermitize(a, q)
            assert a_h.transpose() == a_h.twist(q)
            assert a_h == congruence(a.map_field(fld), t1.map_field(fld), q)


def test_hermitian_diagonalize():
    rng = random.Random(17)
    for ctx, q in ((F4, 2), (F9, 3)):
        for _ in range(5):
            a_h, _, fld = hermitize(random_gl(ctx, 3, rng), q)
            d, t2 = hermitian_diagonalize(a_h, q)
            for i in range(3):
                for j in range(3):
                    if i != j:
                        assert not d.rows[i][j].val
                    else:
                        c = d.rows[i][j]
                        assert c.val and frobenius_pow(c, q, 1) == c
            assert d == congruence(a_h, t2, q)


def test_scale_diagonal_to_identity():
    d = MatrixF.diagonal(F3, [1, 2, 2])
    t3, fld = scale_diagonal_to_identity(d, 3)
    assert congruence(d.map_field(fld), t3, 3) == MatrixF.identity(fld, 3)
    with pytest.raises(UnsupportedRankError):
        scale_diagonal_to_identity(MatrixF.diagonal(F3, [1, 0]), 3)
    with pytest.raises(InputError):
        scale_diagonal_to_identity(
            MatrixF.from_rows(F3, [[1, 1], [0, 1]]), 3)


def test_normalize_full_rank_exact():
    # q equal to the field size is fine at these sizes; over F_9 that
    # twist needs extensions past the degree cap for most inputs, so the
    # characteristic twist is the one exercised there
    rng = random.Random(19)
    for ctx, q in ((F2, 2), (F4, 2), (F4, 4), (F9, 3)):
        for size in (2, 3):
            for _ in range(5):
                a = random_gl(ctx, size, rng)
                wit = normalize_full_rank(a, q)
                final = congruence(
                    a.map_field(wit.field), wit.t_matrix, q)
                assert final == MatrixF.identity(wit.field, size)
                # staged transforms multiply out to the witness transform
                prod = MatrixF.identity(wit.field, size)
                for _, tr, _ in wit.stages:
                    prod = prod @ tr
                assert prod == wit.t_matrix


def test_normalize_full_rank_rejects_singular():
    with pytest.raises(UnsupportedRankError):
        normalize_full_rank(MatrixF.from_rows(F2, [[1, 1], [1, 1]]), 2)


def test_trace_steps_drop_identity_transforms():
    a = MatrixF.identity(F2, 2)
    wit = normalize_full_rank(a, 2)
    for name, tr, _ in wit.trace_steps():
        assert not tr.is_identity()
