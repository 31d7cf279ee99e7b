"""Normal forms and the shared vocabulary between classifier and verifier.

The corank-one normal forms are the matrices W_s = diag(I_s, E_{n-s+1}),
where E_r has ones directly below the diagonal and zeros elsewhere; the
hypersurface of W_s is the cone class with parameter s.  Size-3 forms add
the two rank-1 plane classes Z0 (a doubled line, x_0^{q+1} = 0) and Z1 (two
distinct lines, x_0^q x_1 = 0).  Full-rank matrices normalize to the
identity.

Only label names, their matrices, the certificate step-name constants, and
the two certificate container types live here: both the classifier and the
independent verifier need this vocabulary, and nothing else is shared
between them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from .errors import InputError
from .gf import FieldCtx
from .linalg import MatrixF

LABEL_KINDS = (
    "Ws", "Identity",
    "PlaneZ0", "PlaneZ1", "PlaneX0", "PlaneX1", "PlaneX2",
)

# step names allowed in certificate traces, in no particular order
STEP_KERNEL_MOVE = "kernel-move"
STEP_FULLRANK_BLOCK = "fullrank-on-block"
STEP_PERMUTE = "permute"
STEP_SCALE = "scale"
STEP_G = "T_G"
STEP_H = "T_H"
STEP_H_PRIME = "T_H'"
STEP_T1 = "T_1"
STEP_T2 = "T_2"
STEP_T3 = "T_3"
STEP_T4 = "T_4"
STEP_T5 = "T_5"
STEP_T6 = "T_6"
STEP_T7 = "T_7"
STEP_T_PRIME = "T'"
STEP_T_DPRIME = "T''"
STEP_HERMITIZE = "hermitize"
STEP_DIAGONALIZE = "diagonalize"
STEP_PLANE_SPLIT = "plane-split"

STEP_NAMES = frozenset({
    STEP_KERNEL_MOVE, STEP_FULLRANK_BLOCK, STEP_PERMUTE, STEP_SCALE,
    STEP_G, STEP_H, STEP_H_PRIME,
    STEP_T1, STEP_T2, STEP_T3, STEP_T4, STEP_T5, STEP_T6, STEP_T7,
    STEP_T_PRIME, STEP_T_DPRIME,
    STEP_HERMITIZE, STEP_DIAGONALIZE, STEP_PLANE_SPLIT,
})


@dataclass(frozen=True)
class NormalFormLabel:
    """Terminal class of a classification run."""

    kind: str
    s: Optional[int] = None

    def __post_init__(self):
        if self.kind not in LABEL_KINDS:
            raise InputError(f"unknown label kind {self.kind!r}")
        if self.kind == "Ws":
            if self.s is None or self.s < 0:
                raise InputError("label Ws needs a parameter s >= 0")
        elif self.s is not None:
            raise InputError(f"label {self.kind} carries no parameter")

    def __str__(self):
        return f"W{self.s}" if self.kind == "Ws" else self.kind


def e_matrix(ctx: FieldCtx, r: int) -> MatrixF:
    """The r x r matrix with ones directly below the diagonal."""
    if r < 0:
        raise InputError(f"e_matrix size must be nonnegative, got {r}")
    if r == 0:
        return MatrixF(ctx, ())
    zero, one = ctx.zero, ctx.one
    return MatrixF(ctx, tuple(
        tuple(one if i == j + 1 else zero for j in range(r)) for i in range(r)
    ))


def w_matrix(ctx: FieldCtx, n: int, s: int) -> MatrixF:
    """The corank-one normal form diag(I_s, E_{n-s+1}) of size n+1."""
    if not 0 <= s <= n:
        raise InputError(f"normal-form parameter s = {s} out of range [0, {n}]")
    size = n + 1
    zero, one = ctx.zero, ctx.one
    rows = []
    for i in range(size):
        row = [zero] * size
        if i < s:
            row[i] = one
        elif i > s:
            row[i - 1] = one
        rows.append(tuple(row))
    return MatrixF(ctx, tuple(rows))


def label_matrix(label: NormalFormLabel, ctx: FieldCtx, size: int) -> MatrixF:
    """The exact matrix a certificate claims to reach for the given label."""
    n = size - 1
    if label.kind == "Ws":
        return w_matrix(ctx, n, label.s)
    if label.kind == "Identity":
        return MatrixF.identity(ctx, size)
    if size != 3:
        raise InputError(f"plane label {label.kind} needs size 3, got {size}")
    if label.kind == "PlaneZ0":
        return MatrixF.diagonal(ctx, [1, 0, 0])
    if label.kind == "PlaneZ1":
        return MatrixF.identity_with(ctx, 3, {(0, 0): 0, (1, 1): 0,
                                              (2, 2): 0, (1, 0): 1})
    # PlaneX0 / PlaneX1 / PlaneX2 coincide with W_s at n = 2
    return w_matrix(ctx, 2, int(label.kind[-1]))


def plane_label_for_s(s: int) -> NormalFormLabel:
    return NormalFormLabel(kind=f"PlaneX{s}")


@dataclass(frozen=True)
class TraceStep:
    """One recorded congruence: claimed = congruence(previous, matrix, q)."""

    name: str
    params: Dict
    matrix: MatrixF
    claimed: MatrixF


@dataclass(frozen=True)
class Certificate:
    """Checkable claim that the input is congruent to the labeled normal form.

    All matrices in t_matrix and trace live over `field`; the input keeps
    its original (sub)field and is embedded during replay.  The defining
    equality is congruence(embed(input), T, q) == label matrix, exactly.
    The seed is bookkeeping for reproducing a run, with no claim attached.
    """

    input_matrix: MatrixF
    q: int
    label: NormalFormLabel
    t_matrix: MatrixF
    field: FieldCtx
    trace: Tuple[TraceStep, ...]
    seed: Optional[int] = None
