"""Independent certificate replay.

The verifier re-derives everything a certificate claims, using only the
field and matrix primitives, never the reduction code: each trace step is
replayed as one exact congruence, parameterized steps are rebuilt from
their recorded parameters and compared against the stored transform, and
the overall transform must be invertible, equal the product of the steps,
and carry the embedded input onto the label's matrix.

Failures raise VerificationError with the index of the first bad step;
index len(trace) marks the final-form check, and None marks a check that
is not tied to a single step (transform product, invertibility, overall
congruence).  Structurally ill-formed certificates raise InputError.
"""

from __future__ import annotations

from .errors import InputError, VerificationError
from .gf import FieldElem, frobenius_pow, prime_power
from .linalg import MatrixF, complete_basis, congruence
from .normform import (STEP_FULLRANK_BLOCK, STEP_G, STEP_H, STEP_H_PRIME,
                       STEP_KERNEL_MOVE, STEP_NAMES, STEP_PERMUTE, STEP_SCALE,
                       STEP_T1, STEP_T2, STEP_T3, STEP_T4, STEP_T5, STEP_T6,
                       STEP_T7, STEP_T_PRIME, Certificate, TraceStep,
                       label_matrix)


def _int_param(step: TraceStep, key: str) -> int:
    v = step.params.get(key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise VerificationError(f"step {step.name!r} needs integer parameter {key!r}")
    return v


def _vector_param(step: TraceStep, key: str, ctx) -> tuple:
    v = step.params.get(key)
    if not isinstance(v, tuple):
        raise VerificationError(f"step {step.name!r} needs vector parameter {key!r}")
    for x in v:
        if not isinstance(x, FieldElem) or x.ctx != ctx:
            raise VerificationError(
                f"step {step.name!r} parameter {key!r} is not over the certificate field"
            )
    return v


def _diagonal_of(m: MatrixF):
    """Diagonal entries if the matrix is diagonal, else None."""
    for i, row in enumerate(m.rows):
        for j, e in enumerate(row):
            if i != j and e:
                return None
    return [m.rows[i][i] for i in range(m.nrows)]


def _rebuilt_transform(step: TraceStep, size: int, q: int):
    """The transform a parameterized step must carry, or None if the step's
    matrix is free-form and vouched for only by the replay itself."""
    ctx = step.matrix.ctx
    name = step.name
    n = size - 1
    if name == STEP_KERNEL_MOVE:
        w = _vector_param(step, "w", ctx)
        if len(w) != size or not any(w):
            raise VerificationError("kernel-move parameter w must be a nonzero vector")
        return complete_basis(tuple(frobenius_pow(x, q, -1) for x in w), n)
    if name == STEP_PERMUTE:
        s = _int_param(step, "s")
        i, j = _int_param(step, "i"), _int_param(step, "j")
        if not (0 <= i < j == s - 1 < size):
            raise VerificationError(f"permute indices ({i}, {j}) inconsistent with s = {s}")
        return MatrixF.identity_with(ctx, size, {
            (i, i): 0, (j, j): 0, (i, j): 1, (j, i): 1,
        })
    if name == STEP_SCALE:
        diag = _diagonal_of(step.matrix)
        if diag is None or not all(diag):
            raise VerificationError("scale transform must be an invertible diagonal")
        if "s" not in step.params:
            # norm-scaling stage of the full-rank pipeline: any invertible
            # diagonal goes, the replay pins the actual entries
            return None
        s = _int_param(step, "s")
        if not 1 <= s <= n:
            raise VerificationError(f"scale parameter s = {s} out of range")
        if any(x != ctx.one for x in diag[:s]):
            raise VerificationError("scale transform must fix the first s coordinates")
        for k in range(s, n):
            if diag[k + 1] != frobenius_pow(diag[k].inv(), q, 1):
                raise VerificationError("scale diagonal breaks the twist chain rule")
        return None
    if name == STEP_G:
        s, r = _int_param(step, "s"), _int_param(step, "r")
        a = _vector_param(step, "a", ctx)
        if not (0 <= s and 0 <= r and s + r + 1 <= n and len(a) == s):
            raise VerificationError(f"G-step parameters (s={s}, r={r}) out of range")
        asg = {}
        for m_idx, x in enumerate(a):
            if x:
                asg[(m_idx, s + r)] = -x
                asg[(s + r + 1, m_idx)] = frobenius_pow(x, q, 1)
        return MatrixF.identity_with(ctx, size, asg)
    if name == STEP_H:
        s, r = _int_param(step, "s"), _int_param(step, "r")
        if not (0 <= s and 2 <= r and s + r + 1 <= n):
            raise VerificationError(f"H-step parameters (s={s}, r={r}) out of range")
        return MatrixF.identity_with(ctx, size, {
            (s + r, s + r - 1): -1, (s + r, s + r + 1): 1,
        })
    if name == STEP_H_PRIME:
        s, r = _int_param(step, "s"), _int_param(step, "r")
        if not (0 <= s and 2 <= r and s + r + 3 <= n):
            raise VerificationError(f"H'-step parameters (s={s}, r={r}) out of range")
        return MatrixF.identity_with(ctx, size, {
            (s + r + 1, s + r + 3): 1, (s + r + 2, s + r): -1,
        })
    if name == STEP_T1:
        s = _int_param(step, "s")
        a_dp = _vector_param(step, "a_dprime", ctx)
        if not (1 <= s <= n and len(a_dp) == s - 1):
            raise VerificationError(f"T_1 parameters inconsistent at s = {s}")
        return MatrixF.identity_with(ctx, size, {
            (s - 1, j): -a_dp[j] for j in range(s - 1)
        })
    if name == STEP_T2:
        s = _int_param(step, "s")
        a_dp = _vector_param(step, "a_dprime", ctx)
        if not (1 <= s == n and len(a_dp) == s - 1):
            raise VerificationError(f"T_2 requires s = n >= 1, got s = {s}")
        asg = {(n, j): a_dp[j] for j in range(n - 1)}
        asg[(n, n - 1)] = -ctx.one
        return MatrixF.identity_with(ctx, size, asg)
    if name == STEP_T3:
        s = _int_param(step, "s")
        if not 1 <= s <= n - 1:
            raise VerificationError(f"T_3 parameter s = {s} out of range")
        return MatrixF.identity_with(ctx, size, {(s, s - 1): -1, (s, s + 1): 1})
    if name == STEP_T4:
        if step.params or size < 2:
            raise VerificationError("T_4 carries no parameters and needs size >= 2")
        return MatrixF.identity_with(ctx, size, {(n, n - 1): -1})
    if name == STEP_T5:
        s = _int_param(step, "s")
        a_dp = _vector_param(step, "a_dprime", ctx)
        if not (2 <= s <= n - 1 and len(a_dp) == s - 1):
            raise VerificationError(f"T_5 parameters inconsistent at s = {s}")
        asg = {(s, j): a_dp[j] for j in range(s - 1)}
        asg[(s - 1, s + 1)] = ctx.one
        return MatrixF.identity_with(ctx, size, asg)
    if name == STEP_T6:
        if step.params or size < 3:
            raise VerificationError("T_6 carries no parameters and needs size >= 3")
        return MatrixF.identity_with(ctx, size, {(n, n - 2): -1})
    if name == STEP_T7:
        s = _int_param(step, "s")
        if not (0 <= s and s + 3 <= n):
            raise VerificationError(f"T_7 parameter s = {s} out of range")
        return MatrixF.identity_with(ctx, size, {(s + 1, s + 3): 1, (s + 2, s): -1})
    if name == STEP_T_PRIME:
        s = _int_param(step, "s")
        w = _vector_param(step, "w", ctx)
        if not (1 <= s <= n and len(w) == s - 1):
            raise VerificationError(f"T' parameters inconsistent at s = {s}")
        return MatrixF.identity_with(ctx, size, {
            (j, s - 1): -w[j] for j in range(s - 1)
        })
    if name not in STEP_NAMES:
        raise VerificationError(f"unknown step name {name!r}")
    # hermitize, diagonalize, T'', fullrank-on-block, plane-split: free-form
    # transforms, vouched for by the replay and the product check alone
    if step.params:
        raise VerificationError(f"step {name!r} carries no parameters")
    return None


def verify_certificate(cert: Certificate) -> None:
    """Replay a certificate; silent on success, raising on the first failure."""
    field = cert.field
    p, _ = prime_power(cert.q)
    if p != field.p:
        raise InputError(
            f"q = {cert.q} is not a power of the field characteristic {field.p}"
        )
    src = cert.input_matrix.ctx
    if src.p != field.p or field.d % src.d:
        raise InputError(
            f"input field F_{src.p}^{src.d} does not embed into the "
            f"certificate field F_{field.p}^{field.d}"
        )
    size = cert.input_matrix.ncols
    if cert.input_matrix.nrows != size:
        raise InputError("certificate input must be square")
    target = label_matrix(cert.label, field, size)

    cur = cert.input_matrix.map_field(field)
    for idx, step in enumerate(cert.trace):
        if step.matrix.ctx != field or step.claimed.ctx != field:
            raise VerificationError(
                f"step {idx} is not over the certificate field", step_index=idx
            )
        if step.matrix.nrows != size or step.matrix.ncols != size:
            raise VerificationError(f"step {idx} transform has the wrong shape",
                                    step_index=idx)
        try:
            rebuilt = _rebuilt_transform(step, size, cert.q)
        except VerificationError as bad:
            raise VerificationError(f"step {idx}: {bad}", step_index=idx) from None
        if rebuilt is not None and rebuilt != step.matrix:
            raise VerificationError(
                f"step {idx} transform does not match its parameters",
                step_index=idx,
            )
        try:
            cur = congruence(cur, step.matrix, cert.q)
        except InputError as bad:
            raise VerificationError(f"step {idx}: {bad}", step_index=idx) from None
        if cur != step.claimed:
            raise VerificationError(
                f"step {idx} ({step.name}) does not reproduce its claimed matrix",
                step_index=idx,
            )
    if cur != target:
        raise VerificationError(
            f"replay ended off the label matrix for {cert.label}",
            step_index=len(cert.trace),
        )

    if cert.t_matrix.ctx != field or cert.t_matrix.nrows != size \
            or cert.t_matrix.ncols != size:
        raise InputError("certificate transform has the wrong shape or field")
    prod = MatrixF.identity(field, size)
    for step in cert.trace:
        prod = prod @ step.matrix
    if prod != cert.t_matrix:
        raise VerificationError("transform is not the product of the trace steps")
    if not cert.t_matrix.det():
        raise VerificationError("certificate transform is singular")
    if congruence(cert.input_matrix.map_field(field), cert.t_matrix, cert.q) != target:
        raise VerificationError("overall congruence misses the label matrix")


def is_valid(cert: Certificate) -> bool:
    """Boolean wrapper for callers that do not care about the failure."""
    try:
        verify_certificate(cert)
    except (InputError, VerificationError):
        return False
    return True
