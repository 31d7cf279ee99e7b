"""Normalization of full-rank forms to the identity matrix.

Any invertible A becomes I under the twisted congruence action after a
finite extension.  The construction runs in three exact stages:

1. hermitize: solve the Frobenius equation T^(q^2) = P(A)^{-1} T, where
   P(A) = (transpose A)^{-1} A^(q) measures the failure of the q-Hermitian
   symmetry transpose(A) = A^(q).  The congruence by T kills P entirely.
2. diagonalize: Gram-Schmidt for the sesquilinear pairing of a q-Hermitian
   matrix; pivots are anisotropic vectors, found among basis vectors first
   and then among pairs u + lambda*v with lambda in the embedded F_{q^2}.
3. scale: divide out the diagonal using (q+1)-st roots, which exist in
   F_{q^2} because the norm map onto F_q is surjective.

Every stage is verified by multiplication before it is returned; nothing
here is up-to-scalar.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import List, Tuple

from .errors import ExtensionCapError, InputError, UnsupportedRankError
from .gf import (MAX_EXT_DEGREE, FieldCtx, FieldElem, build_field, embed,
                 frobenius_pow, kth_root, subfield_elements, twist_exponent)
from .linalg import (MatrixF, SemilinearSpec, congruence, form_value,
                     semilinear_fixed_space)
from .normform import STEP_DIAGONALIZE, STEP_HERMITIZE, STEP_SCALE


@dataclass(frozen=True)
class FullRankWitness:
    """Proof object for congruence(embed(input), T, q) = I."""

    input_matrix: MatrixF
    q: int
    t_matrix: MatrixF
    field: FieldCtx
    stages: Tuple[Tuple[str, MatrixF, MatrixF], ...]  # (name, transform, state after)

    def trace_steps(self):
        """Stage records with identity transforms dropped."""
        return [st for st in self.stages if not st[1].is_identity()]


def asymmetry(a: MatrixF, q: int) -> MatrixF:
    """P(A) = (transpose A)^{-1} A^(q); equals I exactly when A is q-Hermitian.

    Under A' = congruence(A, T, q) it transforms as P(A') = T^{-1} P(A) T^(q^2),
    so trivializing P is a Frobenius-equation problem in T.
    """
    if a.nrows != a.ncols:
        raise InputError("asymmetry needs a square matrix")
    twist_exponent(a.ctx.p, q)
    if not a.det().val:
        raise UnsupportedRankError("asymmetry of a singular matrix")
    return a.transpose().inverse() @ a.twist(q)


def lang_solve(
    q_matrix: MatrixF, q: int, max_degree: int = MAX_EXT_DEGREE
) -> Tuple[MatrixF, FieldCtx]:
    """Invertible T over an extension with T^(q^2) = Q T exactly.

    Climbs ambient fields of degree M * lcm(d, 2e) for M = 1, 2, ...; the
    fixed space of v -> Q^{-1} v^(q^2) has F_{q^2}-dimension at most the
    matrix size, and reaches it exactly when the ambient field contains the
    solution entries, at which point any basis assembled as columns is
    invertible by Galois descent.
    """
    ctx = q_matrix.ctx
    if q_matrix.nrows != q_matrix.ncols:
        raise InputError("lang_solve needs a square matrix")
    e = twist_exponent(ctx.p, q)
    if not q_matrix.det().val:
        raise UnsupportedRankError("lang_solve needs an invertible matrix")
    n1 = q_matrix.nrows

    # Which rung works is decided in the base field before any extension is
    # built.  Iterating the equation gives T^(q^(2k)) = N_k T with N_1 = Q
    # and N_{k+1} = N_k^(q^2) Q, so an invertible T over F_{p^(2ek)} forces
    # N_k = I; Galois descent gives the converse.  N_k never leaves the base
    # field, so doomed instances cost a handful of small matrix products
    # instead of a tower of fixed-space eliminations.
    rung = lcm(ctx.d, 2 * e)
    kappa = rung // (2 * e)
    norm = MatrixF.identity(ctx, n1)
    degree = 0
    k = 0
    while k < max_degree // (2 * e):
        k += 1
        norm = norm.twist(q, 2) @ q_matrix
        if k % kappa == 0 and norm.is_identity():
            degree = 2 * e * k
            break
    if not degree:
        needed = _norm_order_degree(q_matrix, q, e, kappa, norm, k)
        raise ExtensionCapError(
            f"Frobenius equation needs extension degree {needed}, beyond the "
            f"cap {max_degree}" if needed else
            f"Frobenius equation not solvable below the degree cap {max_degree}"
        )
    ambient = build_field(ctx.p, degree)
    basis = semilinear_fixed_space(SemilinearSpec(q_matrix, q, 2), ambient)
    if len(basis) != n1:
        raise AssertionError("fixed space dimension disagrees with the norm criterion")
    t = MatrixF(ambient, tuple(
        tuple(basis[j][i] for j in range(n1)) for i in range(n1)
    ))
    if not t.det().val:
        raise AssertionError("descent basis assembled into a singular matrix")
    if t.twist(q, 2) != q_matrix.map_field(ambient) @ t:
        raise AssertionError("Frobenius equation post-check failed")
    return t, ambient


def _norm_order_degree(q_matrix, q, e, kappa, norm, k, scan_limit=4096):
    """Smallest admissible degree for the Frobenius equation, or 0.

    Continues the twisted-norm iteration past the cap purely to make the
    failure message name the degree that would have been required.
    """
    while k < scan_limit:
        k += 1
        norm = norm.twist(q, 2) @ q_matrix
        if k % kappa == 0 and norm.is_identity():
            return 2 * e * k
    return 0


def hermitize(
    a: MatrixF, q: int, max_degree: int = MAX_EXT_DEGREE
) -> Tuple[MatrixF, MatrixF, FieldCtx]:
    """(A_h, T1, field) with A_h = congruence(A, T1, q) q-Hermitian.

    Even when A is already q-Hermitian the working field is extended to
    contain F_{q^2}: the later pivot search needs that subfield available.
    """
    ctx = a.ctx
    e = twist_exponent(ctx.p, q)
    p_matrix = asymmetry(a, q)
    if p_matrix.is_identity():
        field = build_field(ctx.p, lcm(ctx.d, 2 * e))
        t1 = MatrixF.identity(field, a.nrows)
        a_h = a.map_field(field)
    else:
        t1, field = lang_solve(p_matrix.inverse(), q, max_degree)
        a_h = congruence(a.map_field(field), t1, q, check=False)
    if a_h.transpose() != a_h.twist(q):
        raise AssertionError("hermitize post-check failed")
    return a_h, t1, field


def hermitian_diagonalize(h: MatrixF, q: int) -> Tuple[MatrixF, MatrixF]:
    """(D, T2) with congruence(H, T2, q) = D diagonal, entries in F_q*.

    Gram-Schmidt for phi(x, y) = transpose(x) H y^(q).  Hermitian symmetry
    gives phi(y, x) = phi(x, y)^q, so one-sided orthogonalization clears
    both sides at once.
    """
    ctx = h.ctx
    if h.nrows != h.ncols:
        raise InputError("diagonalization needs a square matrix")
    e = twist_exponent(ctx.p, q)
    if ctx.d % (2 * e):
        raise InputError(
            "ambient field must contain F_{q^2} for the anisotropic-vector search"
        )
    if h.transpose() != h.twist(q):
        raise InputError("matrix is not q-Hermitian")
    if not h.det().val:
        raise UnsupportedRankError("diagonalization needs an invertible matrix")
    n1 = h.nrows
    zero, one = ctx.zero, ctx.one
    lambdas = [x for x in subfield_elements(ctx, 2 * e) if x.val]

    def phi(x, y):
        return form_value(h, x, y, q)

    def axpy(u, lam, v):
        # u + lam * v, componentwise
        return tuple(ui + lam * vi for ui, vi in zip(u, v))

    work: List[Tuple[FieldElem, ...]] = [
        tuple(one if k == i else zero for k in range(n1)) for i in range(n1)
    ]
    columns, diag = [], []
    while work:
        pivot_at, pivot = None, None
        for i, u in enumerate(work):
            if phi(u, u).val:
                pivot_at, pivot = i, u
                break
        if pivot is None:
            # all current diagonal values vanish; phi(u + lam v, u + lam v)
            # is the F_{q^2}/F_q trace of lam * phi(u, v), nonzero for some
            # lam as soon as phi(u, v) != 0
            for i in range(len(work)):
                if pivot is not None:
                    break
                for j in range(i + 1, len(work)):
                    if not phi(work[i], work[j]).val:
                        continue
                    for lam in lambdas:
                        cand = axpy(work[i], lam, work[j])
                        if phi(cand, cand).val:
                            pivot_at, pivot = i, cand
                            break
                    if pivot is not None:
                        break
            if pivot is None:
                raise AssertionError(
                    "no anisotropic vector in a nondegenerate Hermitian block"
                )
        c = phi(pivot, pivot)
        columns.append(pivot)
        diag.append(c)
        c_inv = c.inv()
        next_work = []
        for k, u in enumerate(work):
            if k == pivot_at:
                continue
            coeff = frobenius_pow(phi(pivot, u) * c_inv, q, -1)
            next_work.append(axpy(u, -coeff, pivot))
        work = next_work
    t2 = MatrixF(ctx, tuple(
        tuple(columns[j][i] for j in range(n1)) for i in range(n1)
    ))
    d_matrix = congruence(h, t2, q)
    if d_matrix != MatrixF.diagonal(ctx, diag):
        raise AssertionError("diagonalization post-check failed")
    for c in diag:
        if not c.val or frobenius_pow(c, q, 1) != c:
            raise AssertionError("diagonal entry escaped F_q")
    return d_matrix, t2


def scale_diagonal_to_identity(
    d_matrix: MatrixF, q: int, max_degree: int = MAX_EXT_DEGREE
) -> Tuple[MatrixF, FieldCtx]:
    """(T3, field) with congruence(D, T3, q) = I; T3 = diag(mu_i), mu_i^{q+1} = 1/c_i."""
    ctx = d_matrix.ctx
    twist_exponent(ctx.p, q)
    n1 = d_matrix.nrows
    if n1 != d_matrix.ncols:
        raise InputError("scaling needs a square matrix")
    for i in range(n1):
        for j in range(n1):
            if i != j and d_matrix.rows[i][j].val:
                raise InputError("scaling needs a diagonal matrix")
    roots = []
    chain_pos = []
    for i in range(n1):
        c = d_matrix.rows[i][i]
        if not c.val:
            raise UnsupportedRankError("zero diagonal entry cannot be scaled to 1")
        if frobenius_pow(c, q, 1) != c:
            raise InputError("diagonal entry outside F_q")
        mu, fld = kth_root(c.inv(), q + 1, max_degree)
        roots.append(mu)
        chain_pos.append(fld.d // ctx.d)
    total = ctx.d * lcm(*chain_pos)
    if total > max_degree:
        raise ExtensionCapError(
            f"combining the scaling roots needs degree {total}, over the cap {max_degree}"
        )
    field = build_field(ctx.p, total)
    t3 = MatrixF.diagonal(field, [embed(mu, field) for mu in roots])
    if congruence(d_matrix.map_field(field), t3, q, check=False) != \
            MatrixF.identity(field, n1):
        raise AssertionError("scaling post-check failed")
    return t3, field


def normalize_full_rank(
    a: MatrixF, q: int, max_degree: int = MAX_EXT_DEGREE
) -> FullRankWitness:
    """Witness T with congruence(embed(A), T, q) = I exactly."""
    if a.nrows != a.ncols:
        raise InputError("full-rank normalization needs a square matrix")
    if not a.det().val:
        raise UnsupportedRankError(
            "full-rank normalization needs an invertible matrix"
        )
    a_h, t1, field = hermitize(a, q, max_degree)
    d_matrix, t2 = hermitian_diagonalize(a_h, q)
    t3, final = scale_diagonal_to_identity(d_matrix, q, max_degree)
    if final != field:
        t1 = t1.map_field(final)
        t2 = t2.map_field(final)
        a_h = a_h.map_field(final)
        d_matrix = d_matrix.map_field(final)
    t = t1 @ t2 @ t3
    identity = MatrixF.identity(final, a.nrows)
    if congruence(a.map_field(final), t, q, check=False) != identity:
        raise AssertionError("full-rank normalization post-check failed")
    return FullRankWitness(
        input_matrix=a,
        q=q,
        t_matrix=t,
        field=final,
        stages=(
            (STEP_HERMITIZE, t1, a_h),
            (STEP_DIAGONALIZE, t2, d_matrix),
            (STEP_SCALE, t3, identity),
        ),
    )
