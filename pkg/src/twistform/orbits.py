"""Exhaustive orbit computation for the twisted congruence action.

Small matrix spaces only: every matrix of a target rank over a tiny field is
enumerated, and the action tA.A.T^(q) is applied for every invertible T over
each field of a short extension ladder.  The resulting partition is an oracle
that is completely independent of the reduction pipeline, so agreement with
the certificate labels is meaningful evidence; disagreement in either
direction is recorded in the report rather than silently repaired.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .classify import classify_form
from .errors import BudgetError, ExtensionCapError, InputError
from .gf import FieldCtx, build_field, embed, prime_power
from .linalg import MatrixF, TwistedForm, det_int, rank_int
from .normform import NormalFormLabel, label_matrix

# ceilings for exhaustive enumeration; beyond them the answer is not going to
# arrive in reasonable time and a coarser experiment should be designed
MATRIX_ENUM_LIMIT = 1 << 19
WORK_LIMIT = 1 << 23

_IntRows = Tuple[Tuple[int, ...], ...]


def gl_order(field_size: int, dim: int) -> int:
    """|GL_dim(F_field_size)| by the classical product formula."""
    total = 1
    qd = field_size ** dim
    for i in range(dim):
        total *= qd - field_size ** i
    return total


def _matrix_of(ctx: FieldCtx, rows: _IntRows) -> MatrixF:
    return MatrixF(ctx, tuple(
        tuple(ctx.elem(v) for v in row) for row in rows
    ))


def _iter_int_rows(ctx: FieldCtx, size: int) -> Iterator[_IntRows]:
    span = range(ctx.size)
    for flat in itertools.product(span, repeat=size * size):
        yield tuple(
            flat[i * size:(i + 1) * size] for i in range(size)
        )


def enumerate_matrices(ctx: FieldCtx, size: int) -> Iterator[MatrixF]:
    """All size x size matrices over ctx in lexicographic entry order."""
    total = ctx.size ** (size * size)
    if total > MATRIX_ENUM_LIMIT:
        raise BudgetError(
            f"refusing to enumerate {total} matrices (limit {MATRIX_ENUM_LIMIT})"
        )
    for rows in _iter_int_rows(ctx, size):
        yield _matrix_of(ctx, rows)


def enumerate_gl(ctx: FieldCtx, size: int) -> Iterator[MatrixF]:
    """All invertible size x size matrices over ctx, same order as above."""
    total = ctx.size ** (size * size)
    if total > MATRIX_ENUM_LIMIT:
        raise BudgetError(
            f"refusing to enumerate {total} matrices (limit {MATRIX_ENUM_LIMIT})"
        )
    for rows in _iter_int_rows(ctx, size):
        if det_int(ctx, rows):
            yield _matrix_of(ctx, rows)


def _congruence_int(ctx: FieldCtx, a_rows: _IntRows, t_rows: _IntRows,
                    tq_rows: _IntRows) -> _IntRows:
    """tT . A . T^(q) on integer-encoded rows, for the hot enumeration loop."""
    size = len(a_rows)
    mul, add = ctx.mul_int, ctx.add_int
    mid = [[0] * size for _ in range(size)]
    for i in range(size):
        arow = a_rows[i]
        out = mid[i]
        for k in range(size):
            c = arow[k]
            if c:
                trow = tq_rows[k]
                for j in range(size):
                    v = trow[j]
                    if v:
                        out[j] = add(out[j], mul(c, v))
    result = []
    for i in range(size):
        row = []
        for j in range(size):
            acc = 0
            for k in range(size):
                tki = t_rows[k][i]
                if tki:
                    v = mid[k][j]
                    if v:
                        acc = add(acc, mul(tki, v))
            row.append(acc)
        result.append(tuple(row))
    return tuple(result)


@dataclass
class OrbitClass:
    member_count: int
    representative: MatrixF
    named_forms: Tuple[str, ...]
    labels: Tuple[str, ...]
    consistent: bool


@dataclass
class OrbitReport:
    n: int
    q: int
    m: int
    target_rank: int
    ladder: Tuple[int, ...]
    field: FieldCtx
    base_count: int
    work: int
    classes: List[OrbitClass]
    named_class: Dict[str, int]
    consistent: bool


def _named_forms(ctx: FieldCtx, size: int, target_rank: int) -> Dict[str, _IntRows]:
    named: Dict[str, NormalFormLabel] = {}
    if target_rank == size:
        named["Identity"] = NormalFormLabel("Identity")
    if target_rank == size - 1:
        for s in range(size):
            named[f"W{s}"] = NormalFormLabel("Ws", s)
    if size == 3 and target_rank == 1:
        named["PlaneZ0"] = NormalFormLabel("PlaneZ0")
        named["PlaneZ1"] = NormalFormLabel("PlaneZ1")
    return {
        name: tuple(
            tuple(x.val for x in row)
            for row in label_matrix(lab, ctx, size).rows
        )
        for name, lab in named.items()
    }


def brute_force_orbits(n: int, q: int, m: int, target_rank: int,
                       ladder: Sequence[int] = (1, 2)) -> OrbitReport:
    """Partition the rank-`target_rank` matrices over F_{q^m} into orbits.

    Two base matrices are merged whenever some invertible T over one of the
    ladder fields F_{q^{m*m'}} carries one to the other; merges whose image
    leaves the base field cannot occur, so scanning images against the
    embedded base set is exhaustive.
    """
    size = n + 1
    if n < 1:
        raise InputError(f"ambient dimension must be at least 1, got n = {n}")
    if not 1 <= target_rank <= size:
        raise InputError(f"target rank {target_rank} out of range for size {size}")
    if m < 1:
        raise InputError(f"base extension m must be positive, got {m}")
    p, e = prime_power(q)
    if size > 3 or q ** m > 4:
        raise BudgetError(
            f"exhaustive orbits need size <= 3 over at most F_4; "
            f"got size {size} over F_{q ** m}"
        )
    rungs = tuple(sorted(set(int(x) for x in ladder)))
    if not rungs or rungs[0] < 1:
        raise InputError(f"ladder must list positive extension steps, got {ladder!r}")
    ctx0 = build_field(p, e * m)
    candidates = ctx0.size ** (size * size)
    budget = candidates * sum(gl_order(q ** (m * mp), size) for mp in rungs)
    if budget > WORK_LIMIT:
        raise BudgetError(
            f"estimated {budget} congruences exceeds the work limit {WORK_LIMIT}"
        )

    base = [rows for rows in _iter_int_rows(ctx0, size)
            if rank_int(ctx0, rows) == target_rank]

    parent: Dict[_IntRows, _IntRows] = {k: k for k in base}

    def find(k: _IntRows) -> _IntRows:
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    def union(a: _IntRows, b: _IntRows) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    work = 0
    for mp in rungs:
        ext = build_field(p, e * m * mp)
        emb = [embed(ctx0.elem(v), ext).val for v in range(ctx0.size)]
        lifted = [
            (key, tuple(tuple(emb[v] for v in row) for row in key))
            for key in base
        ]
        lookup = {lift: key for key, lift in lifted}
        for t_rows in _iter_int_rows(ext, size):
            if not det_int(ext, t_rows):
                continue
            tq_rows = tuple(
                tuple(ext.pow_int(v, q) for v in row) for row in t_rows
            )
            for key, lift in lifted:
                image = _congruence_int(ext, lift, t_rows, tq_rows)
                other = lookup.get(image)
                if other is not None and other != key:
                    union(key, other)
                work += 1

    groups: Dict[_IntRows, List[_IntRows]] = {}
    for k in base:
        groups.setdefault(find(k), []).append(k)

    named_keys = _named_forms(ctx0, size, target_rank)
    labels: Dict[_IntRows, str] = {}
    for k in base:
        try:
            cert = classify_form(TwistedForm(_matrix_of(ctx0, k), q))
            labels[k] = str(cert.label)
        except ExtensionCapError:
            labels[k] = "capped"

    classes: List[OrbitClass] = []
    named_class: Dict[str, int] = {}
    consistent = True
    for index, root in enumerate(sorted(groups)):
        members = sorted(groups[root])
        found = sorted(
            name for name, rows in named_keys.items() if find(rows) == root
        )
        seen = tuple(sorted({labels[k] for k in members}))
        ok = len(seen) == 1 and all(name in seen for name in found)
        consistent = consistent and ok
        for name in found:
            named_class[name] = index
        classes.append(OrbitClass(
            member_count=len(members),
            representative=_matrix_of(ctx0, members[0]),
            named_forms=tuple(found),
            labels=seen,
            consistent=ok,
        ))
    return OrbitReport(
        n=n, q=q, m=m, target_rank=target_rank, ladder=rungs, field=ctx0,
        base_count=len(base), work=work, classes=classes,
        named_class=named_class, consistent=consistent,
    )
