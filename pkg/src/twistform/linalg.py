"""Matrices over finite fields and the twisted congruence action.

The central object is the form x |-> sum_ij a_ij x_i x_j^q, carried by its
coefficient matrix A.  A basis change T acts by A |-> transpose(T) A T^(q),
where T^(q) raises every entry to the q-th power; congruence() implements
exactly that product and everything downstream replays against it.

Matrices are immutable; all arithmetic goes through the integer-level field
ops so that hot enumeration loops stay cheap.
"""

from __future__ import annotations

from typing import Iterable, List, Sequence, Tuple

from .errors import InputError
from .gf import FieldCtx, FieldElem, embed, frobenius_pow, twist_exponent


class MatrixF:
    """Immutable matrix with entries in one FieldCtx."""

    __slots__ = ("ctx", "rows", "nrows", "ncols")

    def __init__(self, ctx: FieldCtx, rows: Tuple[Tuple[FieldElem, ...], ...]):
        self.ctx = ctx
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else 0

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_rows(cls, ctx: FieldCtx, rows: Iterable[Iterable]) -> "MatrixF":
        out = []
        width = None
        for row in rows:
            cooked = []
            for entry in row:
                if isinstance(entry, FieldElem):
                    if entry.ctx != ctx:
                        raise InputError("matrix entry from a different field")
                    cooked.append(ctx.elem(entry.val))
                elif isinstance(entry, int):
                    cooked.append(ctx.scalar(entry))
                else:
                    raise InputError(
                        f"matrix entry must be int or FieldElem, got {type(entry).__name__}"
                    )
            if width is None:
                width = len(cooked)
            elif len(cooked) != width:
                raise InputError("matrix rows have unequal lengths")
            out.append(tuple(cooked))
        if not out or width == 0:
            raise InputError("matrix must have at least one row and column")
        return cls(ctx, tuple(out))

    @classmethod
    def identity(cls, ctx: FieldCtx, n: int) -> "MatrixF":
        one, zero = ctx.one, ctx.zero
        return cls(ctx, tuple(
            tuple(one if i == j else zero for j in range(n)) for i in range(n)
        ))

    @classmethod
    def zeros(cls, ctx: FieldCtx, nrows: int, ncols: int) -> "MatrixF":
        zero = ctx.zero
        return cls(ctx, tuple(tuple(zero for _ in range(ncols)) for _ in range(nrows)))

    @classmethod
    def diagonal(cls, ctx: FieldCtx, entries: Sequence) -> "MatrixF":
        n = len(entries)
        zero = ctx.zero
        rows = []
        for i in range(n):
            e = entries[i]
            if isinstance(e, int):
                e = ctx.scalar(e)
            rows.append(tuple(e if j == i else zero for j in range(n)))
        return cls(ctx, tuple(rows))

    @classmethod
    def identity_with(cls, ctx: FieldCtx, n: int, assignments: dict) -> "MatrixF":
        """Identity of size n with the given (i, j) -> value entries overwritten."""
        grid = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        for (i, j), val in assignments.items():
            grid[i][j] = val
        return cls.from_rows(ctx, grid)

    # -- access ---------------------------------------------------------------

    def __getitem__(self, ij) -> FieldElem:
        i, j = ij
        return self.rows[i][j]

    def row(self, i: int) -> Tuple[FieldElem, ...]:
        return self.rows[i]

    def col(self, j: int) -> Tuple[FieldElem, ...]:
        return tuple(r[j] for r in self.rows)

    def key(self):
        """Hashable identity of the matrix including its field."""
        ctx = self.ctx
        return (ctx.p, ctx.d, self.ncols) + tuple(
            e.val for r in self.rows for e in r
        )

    def __eq__(self, other):
        if not isinstance(other, MatrixF):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        body = "; ".join(
            " ".join(str(list(e.coeffs)) for e in r) for r in self.rows
        )
        return f"MatrixF(F_{self.ctx.p}^{self.ctx.d}, [{body}])"

    def is_zero(self) -> bool:
        return all(e.val == 0 for r in self.rows for e in r)

    def is_identity(self) -> bool:
        if self.nrows != self.ncols:
            return False
        return all(
            e.val == (1 if i == j else 0)
            for i, r in enumerate(self.rows) for j, e in enumerate(r)
        )

    # -- arithmetic -----------------------------------------------------------

    def _same_shape(self, other: "MatrixF"):
        if self.ctx != other.ctx:
            raise InputError("matrices live in different fields")
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise InputError("matrix shapes do not match")

    def __add__(self, other: "MatrixF") -> "MatrixF":
        self._same_shape(other)
        ctx = self.ctx
        add = ctx.add_int
        return MatrixF(ctx, tuple(
            tuple(ctx.elem(add(a.val, b.val)) for a, b in zip(ra, rb))
            for ra, rb in zip(self.rows, other.rows)
        ))

    def __sub__(self, other: "MatrixF") -> "MatrixF":
        self._same_shape(other)
        ctx = self.ctx
        sub = ctx.sub_int
        return MatrixF(ctx, tuple(
            tuple(ctx.elem(sub(a.val, b.val)) for a, b in zip(ra, rb))
            for ra, rb in zip(self.rows, other.rows)
        ))

    def __neg__(self) -> "MatrixF":
        ctx = self.ctx
        neg = ctx.neg_int
        return MatrixF(ctx, tuple(
            tuple(ctx.elem(neg(a.val)) for a in r) for r in self.rows
        ))

    def scale(self, c) -> "MatrixF":
        ctx = self.ctx
        cv = c.val if isinstance(c, FieldElem) else c % ctx.p
        mul = ctx.mul_int
        return MatrixF(ctx, tuple(
            tuple(ctx.elem(mul(cv, a.val)) for a in r) for r in self.rows
        ))

    def __matmul__(self, other: "MatrixF") -> "MatrixF":
        if self.ctx != other.ctx:
            raise InputError("matrices live in different fields")
        if self.ncols != other.nrows:
            raise InputError("matrix shapes are not composable")
        ctx = self.ctx
        add, mul = ctx.add_int, ctx.mul_int
        cols = tuple(tuple(e.val for e in other.col(j)) for j in range(other.ncols))
        out = []
        for r in self.rows:
            rv = tuple(e.val for e in r)
            out_row = []
            for cv in cols:
                acc = 0
                for a, b in zip(rv, cv):
                    if a and b:
                        acc = add(acc, mul(a, b))
                out_row.append(ctx.elem(acc))
            out.append(tuple(out_row))
        return MatrixF(ctx, tuple(out))

    def mul_vec(self, v: Sequence[FieldElem]) -> Tuple[FieldElem, ...]:
        ctx = self.ctx
        add, mul = ctx.add_int, ctx.mul_int
        vv = tuple(e.val for e in v)
        out = []
        for r in self.rows:
            acc = 0
            for a, b in zip(r, vv):
                if a.val and b:
                    acc = add(acc, mul(a.val, b))
            out.append(ctx.elem(acc))
        return tuple(out)

    def transpose(self) -> "MatrixF":
        return MatrixF(self.ctx, tuple(
            tuple(self.rows[i][j] for i in range(self.nrows))
            for j in range(self.ncols)
        ))

    def twist(self, q: int, i: int = 1) -> "MatrixF":
        """Entrywise Frobenius: every entry raised to the q^i power."""
        if i == 0:
            return self
        return MatrixF(self.ctx, tuple(
            tuple(frobenius_pow(e, q, i) for e in r) for r in self.rows
        ))

    # -- elimination ----------------------------------------------------------

    def det(self) -> FieldElem:
        if self.nrows != self.ncols:
            raise InputError("determinant of a non-square matrix")
        ctx = self.ctx
        n = self.nrows
        mul, sub = ctx.mul_int, ctx.sub_int
        g = [[e.val for e in r] for r in self.rows]
        if n == 1:
            return ctx.elem(g[0][0])
        if n == 2:
            return ctx.elem(sub(mul(g[0][0], g[1][1]), mul(g[0][1], g[1][0])))
        if n == 3:
            pos = 0
            for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
                pos = ctx.add_int(pos, mul(g[0][a], mul(g[1][b], g[2][c])))
            neg = 0
            for a, b, c in ((0, 2, 1), (1, 0, 2), (2, 1, 0)):
                neg = ctx.add_int(neg, mul(g[0][a], mul(g[1][b], g[2][c])))
            return ctx.elem(sub(pos, neg))
        det = 1
        for c in range(n):
            piv = next((r for r in range(c, n) if g[r][c]), None)
            if piv is None:
                return ctx.zero
            if piv != c:
                g[c], g[piv] = g[piv], g[c]
                det = ctx.neg_int(det)
            det = mul(det, g[c][c])
            inv = ctx.inv_int(g[c][c])
            for r in range(c + 1, n):
                if g[r][c]:
                    f = mul(g[r][c], inv)
                    for k in range(c, n):
                        g[r][k] = sub(g[r][k], mul(f, g[c][k]))
        return ctx.elem(det)

    def inverse(self) -> "MatrixF":
        if self.nrows != self.ncols:
            raise InputError("inverse of a non-square matrix")
        ctx = self.ctx
        n = self.nrows
        mul, sub = ctx.mul_int, ctx.sub_int
        g = [[e.val for e in r] + [1 if k == i else 0 for k in range(n)]
             for i, r in enumerate(self.rows)]
        for c in range(n):
            piv = next((r for r in range(c, n) if g[r][c]), None)
            if piv is None:
                raise ValueError("matrix is singular")
            if piv != c:
                g[c], g[piv] = g[piv], g[c]
            inv = ctx.inv_int(g[c][c])
            if inv != 1:
                g[c] = [mul(inv, x) for x in g[c]]
            for r in range(n):
                if r != c and g[r][c]:
                    f = g[r][c]
                    grow, crow = g[r], g[c]
                    for k in range(2 * n):
                        if crow[k]:
                            grow[k] = sub(grow[k], mul(f, crow[k]))
        return MatrixF(ctx, tuple(
            tuple(ctx.elem(x) for x in g[i][n:]) for i in range(n)
        ))

    def _rref(self):
        """Reduced row echelon form; returns (grid of ints, pivot columns)."""
        ctx = self.ctx
        mul, sub = ctx.mul_int, ctx.sub_int
        g = [[e.val for e in r] for r in self.rows]
        pivots = []
        lead = 0
        for c in range(self.ncols):
            piv = next((r for r in range(lead, self.nrows) if g[r][c]), None)
            if piv is None:
                continue
            if piv != lead:
                g[lead], g[piv] = g[piv], g[lead]
            inv = ctx.inv_int(g[lead][c])
            if inv != 1:
                g[lead] = [mul(inv, x) for x in g[lead]]
            for r in range(self.nrows):
                if r != lead and g[r][c]:
                    f = g[r][c]
                    grow, lrow = g[r], g[lead]
                    for k in range(self.ncols):
                        if lrow[k]:
                            grow[k] = sub(grow[k], mul(f, lrow[k]))
            pivots.append(c)
            lead += 1
            if lead == self.nrows:
                break
        return g, pivots

    def rank(self) -> int:
        return len(self._rref()[1])

    def kernel(self) -> List[Tuple[FieldElem, ...]]:
        """Canonical basis of the right kernel {x : A x = 0}.

        One vector per free column, ascending, with 1 at the free position,
        so the output is reproducible across runs.
        """
        ctx = self.ctx
        g, pivots = self._rref()
        free = [c for c in range(self.ncols) if c not in pivots]
        basis = []
        for f in free:
            vec = [0] * self.ncols
            vec[f] = 1
            for k, pc in enumerate(pivots):
                vec[pc] = ctx.neg_int(g[k][f])
            basis.append(tuple(ctx.elem(v) for v in vec))
        return basis

    def row_space_dependency(self) -> List[Tuple[FieldElem, ...]]:
        """Canonical left-kernel basis: vectors w with w . A = 0."""
        return self.transpose().kernel()

    # -- structure ------------------------------------------------------------

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "MatrixF":
        return MatrixF(self.ctx, tuple(
            tuple(self.rows[i][j] for j in col_idx) for i in row_idx
        ))

    @staticmethod
    def block_diag(blocks: Sequence["MatrixF"]) -> "MatrixF":
        ctx = blocks[0].ctx
        size = sum(b.nrows for b in blocks)
        grid = [[ctx.zero] * size for _ in range(size)]
        off = 0
        for b in blocks:
            if b.ctx != ctx:
                raise InputError("block fields do not match")
            if b.nrows != b.ncols:
                raise InputError("diagonal blocks must be square")
            for i in range(b.nrows):
                for j in range(b.ncols):
                    grid[off + i][off + j] = b.rows[i][j]
            off += b.nrows
        return MatrixF(ctx, tuple(tuple(r) for r in grid))

    def map_field(self, target: FieldCtx) -> "MatrixF":
        """Entrywise embedding into a larger field of the same characteristic."""
        if target == self.ctx:
            return self
        return MatrixF(target, tuple(
            tuple(embed(e, target) for e in r) for r in self.rows
        ))


# ---------------------------------------------------------------------------
# the twisted form and its congruence action

class TwistedForm:
    """Coefficient matrix plus twist power q, validated once at the boundary."""

    __slots__ = ("matrix", "q", "twist_e")

    def __init__(self, matrix: MatrixF, q: int):
        if matrix.nrows != matrix.ncols:
            raise InputError("form matrix must be square")
        if matrix.is_zero():
            raise InputError("form matrix must be nonzero")
        self.twist_e = twist_exponent(matrix.ctx.p, q)
        self.matrix = matrix
        self.q = q

    @property
    def ctx(self) -> FieldCtx:
        return self.matrix.ctx

    @property
    def n(self) -> int:
        """Dimension of the ambient projective space."""
        return self.matrix.nrows - 1

    def value(self, x: Sequence[FieldElem], y: Sequence[FieldElem] = None) -> FieldElem:
        return form_value(self.matrix, x, x if y is None else y, self.q)


def congruence(a: MatrixF, t: MatrixF, q: int, check: bool = True) -> MatrixF:
    """transpose(T) . A . T^(q), the basis-change action on form matrices."""
    if a.ctx != t.ctx:
        raise InputError("form and transform live in different fields")
    if t.nrows != t.ncols or t.nrows != a.nrows:
        raise InputError("transform shape does not match the form")
    if check and not t.det():
        raise InputError("transform matrix is singular")
    return t.transpose() @ a @ t.twist(q)


def form_value(
    a: MatrixF, x: Sequence[FieldElem], y: Sequence[FieldElem], q: int
) -> FieldElem:
    """transpose(x) . A . y^(q); with y = x this is sum_ij a_ij x_i x_j^q."""
    ctx = a.ctx
    if len(x) != a.nrows or len(y) != a.ncols:
        raise InputError("point dimension does not match the form")
    add, mul = ctx.add_int, ctx.mul_int
    yq = [frobenius_pow(e, q, 1).val for e in y]
    acc = 0
    for xi, row in zip(x, a.rows):
        if xi.val:
            inner = 0
            for aij, yjq in zip(row, yq):
                if aij.val and yjq:
                    inner = add(inner, mul(aij.val, yjq))
            acc = add(acc, mul(xi.val, inner))
    return ctx.elem(acc)


def rank_kernel(a: MatrixF):
    """(rank, canonical right-kernel basis) from one elimination pass."""
    kernel = a.kernel()
    return a.ncols - len(kernel), kernel


def det_int(ctx: FieldCtx, rows) -> int:
    """Determinant on integer-encoded rows; sized for hot enumeration loops."""
    size = len(rows)
    mul, sub = ctx.mul_int, ctx.sub_int
    if size == 1:
        return rows[0][0]
    if size == 2:
        (a, b), (c, d) = rows
        return sub(mul(a, d), mul(b, c))
    if size == 3:
        (a, b, c), (d, e, f), (g, h, i) = rows
        return sub(
            ctx.add_int(
                mul(a, sub(mul(e, i), mul(f, h))),
                mul(c, sub(mul(d, h), mul(e, g))),
            ),
            mul(b, sub(mul(d, i), mul(f, g))),
        )
    return MatrixF(ctx, tuple(
        tuple(ctx.elem(v) for v in row) for row in rows
    )).det().val


def rank_int(ctx: FieldCtx, rows) -> int:
    """Row rank on integer-encoded rows by plain Gaussian elimination."""
    mat = [list(r) for r in rows]
    nrows, ncols = len(mat), len(mat[0]) if mat else 0
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if mat[r][col]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = ctx.inv_int(mat[rank][col])
        prow = [ctx.mul_int(inv, v) for v in mat[rank]]
        mat[rank] = prow
        for r in range(nrows):
            if r != rank and mat[r][col]:
                c = mat[r][col]
                mat[r] = [
                    ctx.sub_int(v, ctx.mul_int(c, w))
                    for v, w in zip(mat[r], prow)
                ]
        rank += 1
        if rank == nrows:
            break
    return rank


def complete_basis(v: Sequence[FieldElem], position: int) -> MatrixF:
    """Invertible matrix whose column `position` is v.

    The other columns are standard basis vectors in ascending order, skipping
    e_l where l is the last nonzero coordinate of v; expanding the
    determinant along column `position` shows it equals v_l up to sign.
    """
    n = len(v)
    ctx = v[0].ctx
    last = max((i for i in range(n) if v[i].val), default=None)
    if last is None:
        raise InputError("cannot complete the zero vector to a basis")
    if not 0 <= position < n:
        raise InputError("column position out of range")
    keep = [k for k in range(n) if k != last]
    cols = []
    it = iter(keep)
    for j in range(n):
        if j == position:
            cols.append(tuple(v))
        else:
            k = next(it)
            cols.append(tuple(ctx.one if i == k else ctx.zero for i in range(n)))
    return MatrixF(ctx, tuple(
        tuple(cols[j][i] for j in range(n)) for i in range(n)
    ))


# ---------------------------------------------------------------------------
# fixed spaces of twisted-linear (semilinear) maps, by restriction to F_p

class _FpEchelon:
    """Incremental echelon of F_p row vectors, for span membership tests."""

    def __init__(self, p: int):
        self.p = p
        self.rows = {}  # pivot index -> normalized row (list of ints)

    def _reduce(self, vec: List[int]) -> List[int]:
        p = self.p
        for piv, row in self.rows.items():
            c = vec[piv]
            if c:
                for k in range(len(vec)):
                    if row[k]:
                        vec[k] = (vec[k] - c * row[k]) % p
        return vec

    def insert(self, vec: Sequence[int]) -> bool:
        """Add vec to the span; returns True if the rank grew."""
        vec = self._reduce([x % self.p for x in vec])
        piv = next((i for i, x in enumerate(vec) if x), None)
        if piv is None:
            return False
        inv = pow(vec[piv], -1, self.p)
        self.rows[piv] = [x * inv % self.p for x in vec]
        return True

    def contains(self, vec: Sequence[int]) -> bool:
        return all(x == 0 for x in self._reduce([x % self.p for x in vec]))


def _kernel_mod_p(rows: List[List[int]], p: int) -> List[List[int]]:
    """Canonical kernel basis of an integer matrix mod p (one per free column)."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    g = [[x % p for x in r] for r in rows]
    pivots = []
    lead = 0
    for c in range(ncols):
        piv = next((r for r in range(lead, nrows) if g[r][c]), None)
        if piv is None:
            continue
        if piv != lead:
            g[lead], g[piv] = g[piv], g[lead]
        inv = pow(g[lead][c], -1, p)
        if inv != 1:
            g[lead] = [inv * x % p for x in g[lead]]
        for r in range(nrows):
            if r != lead and g[r][c]:
                f = g[r][c]
                grow, lrow = g[r], g[lead]
                for k in range(ncols):
                    if lrow[k]:
                        grow[k] = (grow[k] - f * lrow[k]) % p
        pivots.append(c)
        lead += 1
        if lead == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [0] * ncols
        vec[f] = 1
        for k, pc in enumerate(pivots):
            vec[pc] = (-g[k][f]) % p
        basis.append(vec)
    return basis


class SemilinearSpec:
    """The equation v^(q^j) = Q v, with j the twist power of sigma."""

    __slots__ = ("q_matrix", "q", "sigma_exponent")

    def __init__(self, q_matrix: MatrixF, q: int, sigma_exponent: int = 2):
        if q_matrix.nrows != q_matrix.ncols:
            raise InputError("semilinear coefficient matrix must be square")
        if sigma_exponent < 1:
            raise InputError("sigma exponent must be at least 1")
        twist_exponent(q_matrix.ctx.p, q)
        self.q_matrix = q_matrix
        self.q = q
        self.sigma_exponent = sigma_exponent


def semilinear_fixed_space(
    spec: SemilinearSpec, ambient: FieldCtx
) -> List[Tuple[FieldElem, ...]]:
    """Basis of {v over ambient : v^(q^j) = Q v} over the fixed field F_{q^j}.

    The map v -> v^(q^j) - Qv is only F_p-linear, so the ambient field is
    restricted to the prime field, the kernel is computed there, and an
    F_{q^j}-basis is then extracted greedily in canonical order.  The ambient
    must contain both the fixed field and the entries of Q.
    """
    return _fixed_space_core(
        spec.q_matrix.map_field(ambient), spec.q, spec.sigma_exponent
    )


def _fixed_space_core(
    q_matrix: MatrixF, q: int, power: int
) -> List[Tuple[FieldElem, ...]]:
    ctx = q_matrix.ctx
    if q_matrix.nrows != q_matrix.ncols:
        raise InputError("coefficient matrix of a semilinear map must be square")
    e = twist_exponent(ctx.p, q)
    if power < 1:
        raise InputError("twist power must be at least 1")
    t = e * power
    p, big_d = ctx.p, ctx.d
    if big_d % t:
        raise InputError(
            f"fixed field F_{p}^{t} is not a subfield of the ambient F_{p}^{big_d}"
        )
    n1 = q_matrix.nrows
    m = ctx.size - 1
    fro_e = pow(q, power, m) if m > 1 else 1

    def digits_of(val: int) -> List[int]:
        out = []
        for _ in range(big_d):
            val, r = divmod(val, p)
            out.append(r)
        return out

    # columns of the F_p matrix of Phi, indexed by (coordinate i, power m)
    ncols_fp = n1 * big_d
    cols = []
    for i in range(n1):
        for mm in range(big_d):
            vval = p ** mm
            fro = ctx.pow_int(vval, fro_e)
            col = []
            for r in range(n1):
                acc = ctx.neg_int(ctx.mul_int(q_matrix.rows[r][i].val, vval))
                if r == i:
                    acc = ctx.add_int(acc, fro)
                col.extend(digits_of(acc))
            cols.append(col)
    fp_rows = [[cols[c][r] for c in range(ncols_fp)] for r in range(ncols_fp)]
    kernel = _kernel_mod_p(fp_rows, p)

    def to_field_vec(flat: List[int]) -> Tuple[FieldElem, ...]:
        out = []
        for i in range(n1):
            val = 0
            for mm in reversed(range(big_d)):
                val = val * p + flat[i * big_d + mm]
            out.append(ctx.elem(val))
        return tuple(out)

    sub = [embed(x, ctx).val for x in _power_basis(p, t)]
    span = _FpEchelon(p)
    basis = []
    for flat in kernel:
        if span.contains(flat):
            continue
        vec = to_field_vec(flat)
        basis.append(vec)
        for lam in sub:
            scaled = [ctx.mul_int(lam, comp.val) for comp in vec]
            span.insert([dig for sv in scaled for dig in digits_of(sv)])
    return basis


def _power_basis(p: int, t: int) -> List[FieldElem]:
    from .gf import build_field
    sub = build_field(p, t)
    g = sub.elem(p if t > 1 else 1)
    return [g ** m for m in range(t)] if t > 1 else [sub.one]
