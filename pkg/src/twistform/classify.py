"""Reduction of twisted forms to normal form, with replayable certificates.

A corank-one matrix is first rotated so its kernel is the last coordinate,
then driven down a chain of block shapes: each round either normalizes the
invertible corner block and finishes through a run of sparse elementary
congruences, or trades the corner for one of size one less.  Every
transformation is recorded as a TraceStep whose claimed result is an exact
congruence of its predecessor, so a verifier can replay the run without
trusting this module.

The block shapes are matched structurally before every transformation (a
fixed zero/one pattern plus free regions), never inferred from history; a
mismatch aborts with the offending matrix in the message.

Size-3 matrices of rank 1 split off separately: the form factors as a
linear form times the q-th power of another, and the two plane classes are
told apart by whether the factors cut out the same line.
"""

from __future__ import annotations

import random
from typing import List, Optional, Tuple

from .errors import InputError, ShapeError, UnsupportedRankError
from .fullrank import normalize_full_rank
from .gf import (MAX_EXT_DEGREE, FieldCtx, FieldElem, embed, frobenius_pow,
                 kth_root)
from .linalg import (MatrixF, TwistedForm, complete_basis, congruence,
                     rank_kernel)
from .normform import (STEP_FULLRANK_BLOCK, STEP_G, STEP_H, STEP_H_PRIME,
                       STEP_KERNEL_MOVE, STEP_PERMUTE, STEP_PLANE_SPLIT,
                       STEP_SCALE, STEP_T1, STEP_T2, STEP_T3, STEP_T4,
                       STEP_T5, STEP_T6, STEP_T7, STEP_T_DPRIME,
                       STEP_T_PRIME, Certificate, NormalFormLabel, TraceStep,
                       label_matrix, plane_label_for_s, w_matrix)


# ---------------------------------------------------------------------------
# block-shape matching
#
# Each intermediate of the reduction is a sparse pattern: prescribed ones,
# free rectangular regions, zeros everywhere else.  All indices are 0-based
# and a shape of size n+1 lives on rows/columns 0..n.

def _subdiag(lo: int, hi: int) -> set:
    return {(j, j - 1) for j in range(lo, hi + 1)}


def _match_shape(a: MatrixF, ones: set, free: set, what: str) -> None:
    for i in range(a.nrows):
        for j in range(a.ncols):
            v = a.rows[i][j]
            if (i, j) in ones:
                if v.val != 1:
                    raise ShapeError(
                        f"expected 1 at ({i},{j}) in {what}: {a!r}"
                    )
            elif (i, j) not in free and v.val:
                raise ShapeError(
                    f"expected 0 at ({i},{j}) in {what}: {a!r}"
                )


def _d_region(s: int) -> set:
    return {(i, j) for i in range(s - 1) for j in range(s - 1)}


def _parse_b(a: MatrixF, s: int) -> Tuple[MatrixF, Tuple[FieldElem, ...]]:
    """Validate the recursion shape: free s x s corner, spur row s, shifted
    identity below; returns (corner block, spur row)."""
    n = a.ncols - 1
    if not 0 <= s <= n:
        raise ShapeError(f"block parameter s = {s} out of range for size {n + 1}")
    free = {(i, j) for i in range(s + 1) for j in range(s)}
    _match_shape(a, _subdiag(s + 1, n), free, f"B_{s}")
    idx = list(range(s))
    return a.submatrix(idx, idx), a.row(s)[:s]


def _parse_g(a: MatrixF, s: int, r: int) -> Tuple[FieldElem, ...]:
    """Validate the G_{s,r} shape and return its nonzero row vector."""
    n = a.ncols - 1
    if s < 1 or r < 0 or s + r > n:
        raise ShapeError(f"no G shape with s = {s}, r = {r} at size {n + 1}")
    ones = {(i, i) for i in range(s)} | _subdiag(s + 1, n)
    free = {(s + r, j) for j in range(s)}
    _match_shape(a, ones, free, f"G_{s},{r}")
    avec = a.row(s + r)[:s]
    if not any(avec):
        raise ShapeError(f"zero vector in G_{s},{r}: {a!r}")
    return avec


def _parse_p_prime(a: MatrixF, s: int) -> Tuple[FieldElem, ...]:
    """After permute and scale the pivot sits at (s, s-1) with value 1."""
    n = a.ncols - 1
    ones = {(i, i) for i in range(s)} | {(s, s - 1)} | _subdiag(s + 1, n)
    free = {(s, j) for j in range(s - 1)}
    _match_shape(a, ones, free, f"P'_{s}")
    return a.row(s)[:s - 1]


def _check_q_shape(a: MatrixF, s: int) -> None:
    n = a.ncols - 1
    ones = {(s - 1, s - 1)} | _subdiag(s, n)
    free = (_d_region(s) | {(i, s - 1) for i in range(s - 1)}
            | {(s - 1, j) for j in range(s - 1)})
    _match_shape(a, ones, free, f"Q_{s}")


def _check_h(a: MatrixF, s: int, r: int) -> None:
    n = a.ncols - 1
    if s < 1 or r < 2 or s + r - 1 > n:
        raise ShapeError(f"no H shape with s = {s}, r = {r} at size {n + 1}")
    ones = _subdiag(s, n) | {(s + r - 1, s + r - 1)}
    free = (_d_region(s) | {(i, s - 1) for i in range(s - 1)}
            | {(s - 1, j) for j in range(s - 1)})
    _match_shape(a, ones, free, f"H_{s},{r}")


def _check_h_prime(a: MatrixF, s: int, r: int) -> None:
    # r = 0 is the shape reached right after T_5, before the chain starts
    n = a.ncols - 1
    if s < 1 or r < 0 or s + r + 1 > n:
        raise ShapeError(f"no H' shape with s = {s}, r = {r} at size {n + 1}")
    ones = _subdiag(s, n) | {(s + r, s + r + 1)}
    free = _d_region(s) | {(s - 1, j) for j in range(s - 1)}
    _match_shape(a, ones, free, f"H'_{s},{r}")


def _parse_r_shape(a: MatrixF, s: int, q: int) -> Tuple[FieldElem, ...]:
    """Validate the post-chain shape and read back the column border, whose
    q-th power must match the row border."""
    n = a.ncols - 1
    ones = _subdiag(s, n)
    free = (_d_region(s) | {(i, s - 1) for i in range(s - 1)}
            | {(s - 1, j) for j in range(s - 1)})
    _match_shape(a, ones, free, f"R_{s}")
    a_dprime = tuple(-a.rows[i][s - 1] for i in range(s - 1))
    a_prime = tuple(-a.rows[s - 1][j] for j in range(s - 1))
    for x, y in zip(a_dprime, a_prime):
        if frobenius_pow(x, q, 1) != y:
            raise ShapeError(f"mismatched borders in R_{s}: {a!r}")
    return a_dprime


# ---------------------------------------------------------------------------
# elementary transforms

def _swap_transform(ctx: FieldCtx, size: int, i: int, j: int) -> MatrixF:
    return MatrixF.identity_with(ctx, size, {
        (i, i): 0, (j, j): 0, (i, j): 1, (j, i): 1,
    })


def _push(steps: List[TraceStep], cur: MatrixF, q: int, name: str,
          t: MatrixF, **params) -> MatrixF:
    """Apply one congruence and record it; identity transforms are dropped."""
    if t.is_identity():
        return cur
    nxt = congruence(cur, t, q)
    steps.append(TraceStep(name, dict(params), t, nxt))
    return nxt


# ---------------------------------------------------------------------------
# the reduction lemmas


def move_kernel_to_last(a: MatrixF, q: int) -> Tuple[MatrixF, MatrixF]:
    """Rotate coordinates so the kernel of A becomes the last one.

    Returns (B, T0) with B = congruence(A, T0, q) and B's last column zero:
    the last column of the result is t(T0) . A . w where w spans the kernel.
    """
    if a.nrows != a.ncols:
        raise InputError("kernel move needs a square matrix")
    n = a.ncols - 1
    rank, kernel = rank_kernel(a)
    if rank != n:
        raise UnsupportedRankError(
            f"kernel move needs corank one, got rank {rank} at size {n + 1}"
        )
    w = kernel[0]
    v = tuple(frobenius_pow(x, q, -1) for x in w)
    t0 = complete_basis(v, n)
    b = congruence(a, t0, q)
    if any(b.col(n)):
        raise AssertionError("kernel move left a nonzero last column")
    return b, t0


def lemma_G_chain(b: MatrixF, q: int, s: int, r: int = 0
                  ) -> Tuple[MatrixF, List[TraceStep]]:
    """Walk the G shape up in steps of two until it lands on the normal form.

    Each step moves the free vector two rows down and raises it to the q^2
    power; the final step pushes it off the matrix entirely.
    """
    n = b.ncols - 1
    if b == w_matrix(b.ctx, n, s):
        return b, []
    if r > n - s - 1 or (n - s - 1 - r) % 2:
        raise ShapeError(
            f"G chain from r = {r} cannot terminate with s = {s}, n = {n}"
        )
    steps: List[TraceStep] = []
    cur = b
    while True:
        avec = _parse_g(cur, s, r)
        asg = {}
        for m_idx, x in enumerate(avec):
            if x:
                asg[(m_idx, s + r)] = -x
                asg[(s + r + 1, m_idx)] = frobenius_pow(x, q, 1)
        t = MatrixF.identity_with(cur.ctx, n + 1, asg)
        cur = _push(steps, cur, q, STEP_G, t, s=s, r=r, a=avec)
        if r == n - s - 1:
            break
        r += 2
    if cur != w_matrix(cur.ctx, n, s):
        raise ShapeError(f"G chain did not end on the normal form: {cur!r}")
    return cur, steps


def lemma_H_chain(b: MatrixF, q: int, s: int, r: int = 2
                  ) -> Tuple[MatrixF, List[TraceStep]]:
    """Slide the extra diagonal one of the H shape down two at a time."""
    n = b.ncols - 1
    target = n - s
    if r < 2 or r > target or (target - r) % 2:
        raise ShapeError(
            f"H chain from r = {r} cannot reach r = {target} with s = {s}"
        )
    steps: List[TraceStep] = []
    cur = b
    while r < target:
        _check_h(cur, s, r)
        t = MatrixF.identity_with(cur.ctx, n + 1, {
            (s + r, s + r - 1): -1, (s + r, s + r + 1): 1,
        })
        cur = _push(steps, cur, q, STEP_H, t, s=s, r=r)
        r += 2
    _check_h(cur, s, target)
    return cur, steps


def lemma_H_prime_chain(b: MatrixF, q: int, s: int, r: int = 2
                        ) -> Tuple[MatrixF, List[TraceStep]]:
    """Slide the extra superdiagonal one of the H' shape down two at a time."""
    n = b.ncols - 1
    target = n - s - 2
    if r < 2 or r > target or (target - r) % 2:
        raise ShapeError(
            f"H' chain from r = {r} cannot reach r = {target} with s = {s}"
        )
    steps: List[TraceStep] = []
    cur = b
    while r < target:
        _check_h_prime(cur, s, r)
        t = MatrixF.identity_with(cur.ctx, n + 1, {
            (s + r + 1, s + r + 3): 1, (s + r + 2, s + r): -1,
        })
        cur = _push(steps, cur, q, STEP_H_PRIME, t, s=s, r=r)
        r += 2
    _check_h_prime(cur, s, target)
    return cur, steps


def lemma4_reduce(p: MatrixF, q: int, s: int
                  ) -> Tuple[MatrixF, List[TraceStep]]:
    """Reduce the pivot-row shape: even corank gap ends on the normal form,
    odd gap trades the corner for one of size one less."""
    ctx = p.ctx
    n = p.ncols - 1
    avec = _parse_g(p, s, 0)
    if (n - s + 1) % 2 == 0:
        return lemma_G_chain(p, q, s, 0)

    steps: List[TraceStep] = []
    cur = p
    # put the highest nonzero coordinate of the vector next to the pivot
    # column, then rescale the trailing coordinates so the pivot becomes 1
    jstar = max(j for j, x in enumerate(avec) if x)
    if jstar != s - 1:
        t = _swap_transform(ctx, n + 1, jstar, s - 1)
        cur = _push(steps, cur, q, STEP_PERMUTE, t, s=s, i=jstar, j=s - 1)
    c = _parse_g(cur, s, 0)[s - 1]
    if not c:
        raise ShapeError(f"pivot vanished after permute: {cur!r}")
    if c.val != 1:
        sig = [ctx.one] * s + [c.inv()]
        for _ in range(s + 1, n + 1):
            sig.append(frobenius_pow(sig[-1].inv(), q, 1))
        t = MatrixF.diagonal(ctx, sig)
        cur = _push(steps, cur, q, STEP_SCALE, t, s=s)
    a_prime = _parse_p_prime(cur, s)
    a_dp = tuple(frobenius_pow(x, q, -1) for x in a_prime)
    if any(a_dp):
        t = MatrixF.identity_with(ctx, n + 1, {
            (s - 1, j): -a_dp[j] for j in range(s - 1)
        })
        cur = _push(steps, cur, q, STEP_T1, t, s=s, a_dprime=a_dp)
    _check_q_shape(cur, s)

    if s == n:  # corank gap of exactly one: a single clearing row finishes
        asg = {(n, j): a_dp[j] for j in range(n - 1)}
        asg[(n, n - 1)] = -ctx.one
        t = MatrixF.identity_with(ctx, n + 1, asg)
        cur = _push(steps, cur, q, STEP_T2, t, s=s, a_dprime=a_dp)
        _parse_b(cur, s - 1)
        return cur, steps

    t = MatrixF.identity_with(ctx, n + 1, {(s, s - 1): -1, (s, s + 1): 1})
    cur = _push(steps, cur, q, STEP_T3, t, s=s)
    cur, chain = lemma_H_chain(cur, q, s, 2)
    steps += chain
    t = MatrixF.identity_with(ctx, n + 1, {(n, n - 1): -1})
    cur = _push(steps, cur, q, STEP_T4, t)
    a_dp = _parse_r_shape(cur, s, q)
    if s == 1:
        if cur != w_matrix(ctx, n, 0):
            raise ShapeError(f"rank-one corner did not flatten: {cur!r}")
        return cur, steps
    asg = {(s, j): a_dp[j] for j in range(s - 1)}
    asg[(s - 1, s + 1)] = ctx.one
    t = MatrixF.identity_with(ctx, n + 1, asg)
    cur = _push(steps, cur, q, STEP_T5, t, s=s, a_dprime=a_dp)
    _check_h_prime(cur, s, 0)
    if n - s - 1 > 1:
        t = MatrixF.identity_with(ctx, n + 1, {(s + 1, s + 3): 1, (s + 2, s): -1})
        cur = _push(steps, cur, q, STEP_T7, t, s=s)
        cur, chain = lemma_H_prime_chain(cur, q, s, 2)
        steps += chain
    t = MatrixF.identity_with(ctx, n + 1, {(n, n - 2): -1})
    cur = _push(steps, cur, q, STEP_T6, t)
    _parse_b(cur, s - 1)
    return cur, steps


def lemma5_step(b: MatrixF, q: int, s: int, max_degree: int = MAX_EXT_DEGREE
                ) -> Tuple[MatrixF, List[TraceStep]]:
    """One round of the recursion on the corner block.

    If the corner is invertible the round ends the reduction (possibly over
    an extension field, which the returned matrices already live in); if it
    is singular, the round produces the same shape with s smaller by one.
    """
    ctx = b.ctx
    n = b.ncols - 1
    if s < 1:
        raise ShapeError(f"recursion shape needs s >= 1, got {s}")
    d_block, b_vec = _parse_b(b, s)
    steps: List[TraceStep] = []
    cur = b

    if d_block.det():
        if not d_block.is_identity():
            wit = normalize_full_rank(d_block, q, max_degree)
            if wit.field != ctx:
                ctx = wit.field
                cur = cur.map_field(ctx)
            t = MatrixF.block_diag([
                wit.t_matrix, MatrixF.identity(ctx, n - s + 1),
            ])
            cur = _push(steps, cur, q, STEP_FULLRANK_BLOCK, t)
        corner, spur = _parse_b(cur, s)
        if not corner.is_identity():
            raise ShapeError(f"corner block did not normalize: {cur!r}")
        if not any(spur):
            # the corner was the whole obstruction; this is the normal form
            if cur != w_matrix(ctx, n, s):
                raise ShapeError(f"expected the normal form, got {cur!r}")
            return cur, steps
        cur, tail = lemma4_reduce(cur, q, s)
        return cur, steps + tail

    # singular corner: zero out its highest dependent row, then invert the
    # full-rank complement to restore the recursion shape one size down
    dep = d_block.row_space_dependency()
    if not dep:
        raise ShapeError(f"singular corner with no row dependency: {b!r}")
    rstar = max(i for vec in dep for i in range(s) if vec[i])
    if rstar != s - 1:
        t = _swap_transform(ctx, n + 1, rstar, s - 1)
        cur = _push(steps, cur, q, STEP_PERMUTE, t, s=s, i=rstar, j=s - 1)
        d_block, b_vec = _parse_b(cur, s)
        dep = d_block.row_space_dependency()
    u = next(vec for vec in dep if vec[s - 1])
    scale = -u[s - 1].inv()
    w = tuple(x * scale for x in u[:s - 1])
    if any(w):
        t = MatrixF.identity_with(ctx, n + 1, {
            (j, s - 1): -w[j] for j in range(s - 1)
        })
        cur = _push(steps, cur, q, STEP_T_PRIME, t, s=s, w=w)
    if any(cur.row(s - 1)):
        raise ShapeError(f"dependent row survived clearing: {cur!r}")
    rows_idx = list(range(s - 1)) + [s]
    q_block = cur.submatrix(rows_idx, list(range(s)))
    if not q_block.det():
        raise UnsupportedRankError(
            "degenerate corner is consistent only with rank below corank one"
        )
    q_prime = q_block.inverse().twist(q, -1)
    t = MatrixF.block_diag([q_prime, MatrixF.identity(ctx, n - s + 1)])
    cur = _push(steps, cur, q, STEP_T_DPRIME, t)
    _parse_b(cur, s - 1)
    return cur, steps


# ---------------------------------------------------------------------------
# drivers


def _identify_w(a: MatrixF) -> Optional[int]:
    n = a.ncols - 1
    for s in range(n + 1):
        if a == w_matrix(a.ctx, n, s):
            return s
    return None


def _finish(a: MatrixF, q: int, label: NormalFormLabel, steps: List[TraceStep],
            final: MatrixF, seed: Optional[int]) -> Certificate:
    ctx = final.ctx
    t = MatrixF.identity(ctx, final.ncols)
    for st in steps:
        t = t @ st.matrix
    target = label_matrix(label, ctx, final.ncols)
    if final != target:
        raise AssertionError(f"reduction ended off the normal form: {final!r}")
    if congruence(a.map_field(ctx), t, q) != target:
        raise AssertionError("certificate transform does not reproduce the label")
    return Certificate(a, q, label, t, ctx, tuple(steps), seed)


def _corank_pass(a: MatrixF, q: int, max_degree: int):
    """One reduction attempt inside a's own field.

    Returns (label, steps, final).  A None label means some block forced a
    field extension; final then lives in the deeper field and the caller is
    expected to reclassify there from scratch.
    """
    n = a.ncols - 1
    _, kernel = rank_kernel(a)
    steps: List[TraceStep] = []
    cur, t0 = move_kernel_to_last(a, q)
    if not t0.is_identity():
        steps.append(TraceStep(STEP_KERNEL_MOVE, {"w": kernel[0]}, t0, cur))
    s = n
    while True:
        found = _identify_w(cur)
        if found is not None:
            return NormalFormLabel("Ws", found), steps, cur
        if s < 1:
            raise ShapeError("reduction exhausted without reaching a normal form")
        cur, tail = lemma5_step(cur, q, s, max_degree)
        if cur.ctx != a.ctx:
            return None, steps, cur
        steps += tail
        s -= 1


def classify_corank_one(form: TwistedForm,
                        max_degree: int = MAX_EXT_DEGREE,
                        seed: Optional[int] = None) -> Certificate:
    """Full reduction of a rank-n form on P^n to its normal form W_s."""
    a, q = form.matrix, form.q
    n = form.n
    if n < 1:
        raise InputError("classification needs an ambient dimension n >= 1")
    rank, _ = rank_kernel(a)
    if rank != n:
        raise UnsupportedRankError(
            f"corank-one classification needs rank {n}, got {rank}"
        )
    # The canonical pairwise embeddings do not compose transitively, so a
    # trace assembled across several field hops need not replay against the
    # one-shot embedding of the input.  Whenever a pass outgrows its field,
    # throw the trace away and rerun wholly inside the deeper field; the
    # degree strictly increases, so this settles within the extension cap.
    work = a
    while True:
        label, steps, final = _corank_pass(work, q, max_degree)
        if label is not None:
            return _finish(a, q, label, steps, final, seed)
        work = a.map_field(final.ctx)


def classify_plane(form: TwistedForm,
                   max_degree: int = MAX_EXT_DEGREE,
                   seed: Optional[int] = None) -> Certificate:
    """Classify a plane curve given by a 3 x 3 matrix of rank 1 or 2."""
    a, q = form.matrix, form.q
    if a.ncols != 3:
        raise InputError("plane classification needs a 3 x 3 matrix")
    rank, _ = rank_kernel(a)
    if rank == 2:
        cert = classify_corank_one(form, max_degree, seed)
        return Certificate(cert.input_matrix, cert.q,
                           plane_label_for_s(cert.label.s), cert.t_matrix,
                           cert.field, cert.trace, cert.seed)
    if rank != 1:
        raise UnsupportedRankError(
            f"plane classification needs rank 1 or 2, got {rank}"
        )
    # rank 1: the form is ell(x) . m(x)^q for a column factor ell and the
    # q-th root m of the row factor
    ctx = a.ctx
    i0 = next(i for i in range(3) if any(a.row(i)))
    v = a.row(i0)
    j0 = next(j for j in range(3) if v[j])
    piv_inv = v[j0].inv()
    ell = tuple(a[i, j0] * piv_inv for i in range(3))
    for i in range(3):
        for j in range(3):
            if a[i, j] != ell[i] * v[j]:
                raise AssertionError("rank-1 matrix failed to factor")
    m = tuple(frobenius_pow(x, q, -1) for x in v)

    proportional = all(
        ell[i] * m[j] == ell[j] * m[i]
        for i in range(3) for j in range(i + 1, 3)
    )
    steps: List[TraceStep] = []
    if proportional:
        # both factors cut the same line: rescale it to x_0 with a (q+1)-th
        # root, which may need a quadratic extension
        k0 = next(k for k in range(3) if m[k])
        c = ell[k0] / m[k0]
        mu, fld = kth_root(c.inv(), q + 1, max_degree)
        base = a.map_field(fld)
        m_f = tuple(embed(x, fld) for x in m)
        r_rows = complete_basis(m_f, 0).transpose()
        t = r_rows.inverse() @ MatrixF.diagonal(fld, [mu, fld.one, fld.one])
        cur = _push(steps, base, q, STEP_PLANE_SPLIT, t)
        return _finish(a, q, NormalFormLabel("PlaneZ0"), steps, cur, seed)
    # distinct lines: send m to x_0 and ell to x_1
    for k in range(3):
        e_k = tuple(ctx.one if j == k else ctx.zero for j in range(3))
        r_rows = MatrixF(ctx, (m, ell, e_k))
        if r_rows.det():
            break
    else:
        raise AssertionError("no coordinate completes the two factors")
    t = r_rows.inverse()
    cur = _push(steps, a, q, STEP_PLANE_SPLIT, t)
    return _finish(a, q, NormalFormLabel("PlaneZ1"), steps, cur, seed)


def classify_form(form: TwistedForm,
                  max_degree: int = MAX_EXT_DEGREE,
                  seed: Optional[int] = None) -> Certificate:
    """Route a form to the pipeline matching its rank."""
    a, q = form.matrix, form.q
    size = a.ncols
    rank, _ = rank_kernel(a)
    if rank == size:
        wit = normalize_full_rank(a, q, max_degree)
        steps = tuple(
            TraceStep(name, {}, t, after) for name, t, after in wit.trace_steps()
        )
        return Certificate(a, q, NormalFormLabel("Identity"), wit.t_matrix,
                           wit.field, steps, seed)
    if rank == size - 1:
        return classify_corank_one(form, max_degree, seed)
    if size == 3:
        return classify_plane(form, max_degree, seed)
    raise UnsupportedRankError(
        f"no classification for rank {rank} at size {size}"
    )


# ---------------------------------------------------------------------------
# seeded generation of inputs with a prescribed rank


def random_gl(ctx: FieldCtx, size: int, rng: random.Random) -> MatrixF:
    """Rejection-sampled invertible matrix with uniform entries."""
    while True:
        m = MatrixF(ctx, tuple(
            tuple(ctx.elem(rng.randrange(ctx.size)) for _ in range(size))
            for _ in range(size)
        ))
        if m.det():
            return m


def random_matrix_of_rank(ctx: FieldCtx, size: int, rank: int,
                          rng: random.Random) -> MatrixF:
    """t(U) . diag(1,...,1,0,...,0) . V for seeded invertible U and V."""
    if not 0 < rank <= size:
        raise InputError(f"rank {rank} out of range for size {size}")
    d = MatrixF.diagonal(ctx, [1] * rank + [0] * (size - rank))
    return random_gl(ctx, size, rng).transpose() @ d @ random_gl(ctx, size, rng)
