"""Normal-form matrices, labels, and the certificate containers."""

import pytest

from twistform.errors import InputError
from twistform.gf import build_field
from twistform.linalg import MatrixF
from twistform.normform import (LABEL_KINDS, STEP_NAMES, NormalFormLabel,
                                e_matrix, label_matrix, plane_label_for_s,
                                w_matrix)

F2 = build_field(2, 1)
F9 = build_field(3, 2)


def test_e_matrix_shapes():
    assert e_matrix(F2, 0).nrows == 0
    assert e_matrix(F2, 1) == MatrixF.from_rows(F2, [[0]])
    assert e_matrix(F2, 3) == MatrixF.from_rows(
        F2, [[0, 0, 0], [1, 0, 0], [0, 1, 0]])
    with pytest.raises(InputError):
        e_matrix(F2, -1)


def test_w_matrix_block_structure():
    # diag(I_s, E_{n-s+1}): identity corner, then the subdiagonal shift
    assert w_matrix(F2, 1, 0) == MatrixF.from_rows(F2, [[0, 0], [1, 0]])
    assert w_matrix(F2, 1, 1) == MatrixF.from_rows(F2, [[1, 0], [0, 0]])
    assert w_matrix(F9, 2, 1) == MatrixF.from_rows(
        F9, [[1, 0, 0], [0, 0, 0], [0, 1, 0]])
    for n in range(1, 5):
        for s in range(n + 1):
            w = w_matrix(F2, n, s)
            assert w.rank() == n
            assert w.ncols == n + 1
    with pytest.raises(InputError):
        w_matrix(F2, 2, 3)


def test_label_validation_and_str():
    assert str(NormalFormLabel("Ws", 2)) == "W2"
    assert str(NormalFormLabel("Identity")) == "Identity"
    assert str(NormalFormLabel("PlaneX1")) == "PlaneX1"
    with pytest.raises(InputError):
        NormalFormLabel("Ws")          # s required
    with pytest.raises(InputError):
        NormalFormLabel("Identity", 1)  # s forbidden
    with pytest.raises(InputError):
        NormalFormLabel("W")
    assert set(LABEL_KINDS) >= {"Ws", "Identity", "PlaneZ0", "PlaneZ1"}


def test_label_matrix_values():
    assert label_matrix(NormalFormLabel("Identity"), F2, 3).is_identity()
    assert label_matrix(NormalFormLabel("Ws", 1), F2, 3) == w_matrix(F2, 2, 1)
    assert label_matrix(NormalFormLabel("PlaneZ0"), F2, 3) == \
        MatrixF.diagonal(F2, [1, 0, 0])
    assert label_matrix(NormalFormLabel("PlaneZ1"), F2, 3) == \
        MatrixF.from_rows(F2, [[0, 0, 0], [1, 0, 0], [0, 0, 0]])
    # the rank-2 plane labels rename the corank-one normal forms
    for s in range(3):
        assert label_matrix(NormalFormLabel(f"PlaneX{s}"), F9, 3) == \
            w_matrix(F9, 2, s)
    with pytest.raises(InputError):
        label_matrix(NormalFormLabel("PlaneZ0"), F2, 4)


def test_plane_label_for_s():
    for s in range(3):
        assert plane_label_for_s(s) == NormalFormLabel(f"PlaneX{s}")
    with pytest.raises(InputError):
        plane_label_for_s(3)


def test_step_names_cover_the_reduction_vocabulary():
    assert {"kernel-move", "permute", "scale", "T_G", "T_1", "T''",
            "hermitize", "diagonalize", "plane-split"} <= STEP_NAMES
