"""Geometry of the normal-form hypersurfaces: points, cones, automorphisms.

Everything here works over explicit finite fields by direct evaluation, so
the module doubles as an independent oracle for the classification pipeline:
point counts separate the normal forms, the cone fibration explains their
structure, and the automorphism conditions can be cross-checked exhaustively
against the raw stabilizer definition on desk-sized groups.
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .errors import BudgetError, InputError
from .gf import (FieldCtx, FieldElem, build_field, frobenius_pow,
                 prime_power, twist_exponent)
from .linalg import MatrixF, TwistedForm, det_int
from .normform import w_matrix

POINT_ENUM_LIMIT = 1 << 24


@dataclass(frozen=True)
class ProjectivePoint:
    """A point of P^n with the canonical representative (first nonzero = 1)."""

    coords: Tuple[FieldElem, ...]

    @classmethod
    def of(cls, coords: Sequence[FieldElem]) -> "ProjectivePoint":
        coords = tuple(coords)
        if not coords:
            raise InputError("a projective point needs at least one coordinate")
        lead = next((c for c in coords if c.val), None)
        if lead is None:
            raise InputError("the zero vector is not a projective point")
        if lead.val != 1:
            inv = lead.inv()
            coords = tuple(c * inv for c in coords)
        return cls(coords)

    @property
    def ctx(self) -> FieldCtx:
        return self.coords[0].ctx

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    def key(self) -> Tuple[int, ...]:
        return tuple(c.val for c in self.coords)

    def __str__(self):
        return "(" + ":".join(str(c.val) for c in self.coords) + ")"


def _embedded_int_rows(a: MatrixF, field: FieldCtx) -> List[List[int]]:
    return [[x.val for x in row] for row in a.map_field(field).rows]


def _iter_projective_zeros(a_rows: Sequence[Sequence[int]], q: int,
                           field: FieldCtx) -> Iterator[Tuple[int, ...]]:
    """Integer-encoded canonical representatives on the zero locus.

    Walks each affine chart (leading coordinate 1, earlier ones 0), so every
    projective point appears exactly once.
    """
    size = len(a_rows)
    mul, add = field.mul_int, field.add_int
    powq = [field.pow_int(v, q) for v in range(field.size)]
    span = range(field.size)
    for lead in range(size):
        head = (0,) * lead + (1,)
        for tail in itertools.product(span, repeat=size - lead - 1):
            x = head + tail
            xq = [powq[c] for c in x]
            acc = 0
            for i in range(size):
                xi = x[i]
                if xi:
                    row = a_rows[i]
                    s = 0
                    for j in range(size):
                        aij = row[j]
                        if aij:
                            s = add(s, mul(aij, xq[j]))
                    if s:
                        acc = add(acc, mul(xi, s))
            if acc == 0:
                yield x


def _check_point_budget(field: FieldCtx, size: int) -> None:
    if field.size ** size > POINT_ENUM_LIMIT:
        raise BudgetError(
            f"point enumeration over F_{field.p}^{field.d} in P^{size - 1} "
            f"needs {field.size ** size} coordinate tuples "
            f"(limit {POINT_ENUM_LIMIT})"
        )


def enum_points(form: TwistedForm, field: FieldCtx) -> List[ProjectivePoint]:
    """All rational points of the hypersurface over `field`, sorted."""
    size = form.n + 1
    _check_point_budget(field, size)
    rows = _embedded_int_rows(form.matrix, field)
    elem = field.elem
    pts = [
        ProjectivePoint(tuple(elem(v) for v in x))
        for x in _iter_projective_zeros(rows, form.q, field)
    ]
    pts.sort(key=ProjectivePoint.key)
    return pts


def count_points(form: TwistedForm, field: FieldCtx) -> int:
    """|X(F)| without materializing the points."""
    size = form.n + 1
    _check_point_budget(field, size)
    rows = _embedded_int_rows(form.matrix, field)
    return sum(1 for _ in _iter_projective_zeros(rows, form.q, field))


def point_count_vector(n: int, s: int, q: int,
                       degrees: Sequence[int] = (1, 2, 3)) -> Tuple[int, ...]:
    """Counts of the normal form W_s over F_{q^j} for each j in degrees."""
    p, e = prime_power(q)
    counts = []
    for j in degrees:
        field = build_field(p, e * j)
        counts.append(count_points(TwistedForm(w_matrix(field, n, s), q), field))
    return tuple(counts)


def singular_points(form: TwistedForm, field: FieldCtx) -> List[ProjectivePoint]:
    """Points where the gradient A.x^(q) vanishes.

    In characteristic p the partial derivatives of sum a_ij x_i x_j^q are the
    entries of A.x^(q), so the singular locus is the inverse Frobenius image
    of the kernel of A; the form itself vanishes there automatically.
    """
    q = form.q
    a = form.matrix.map_field(field)
    basis = a.kernel()
    k = len(basis)
    if k == 0:
        return []
    if field.size ** k > POINT_ENUM_LIMIT:
        raise BudgetError(
            f"kernel of dimension {k} over F_{field.p}^{field.d} is too large "
            f"to enumerate (limit {POINT_ENUM_LIMIT})"
        )
    size = a.ncols
    zero = field.zero
    pts = []
    span = range(field.size)
    for lead in range(k):
        for tail in itertools.product(span, repeat=k - lead - 1):
            coeffs = (0,) * lead + (1,) + tail
            v = [zero] * size
            for c, b in zip(coeffs, basis):
                if c:
                    ce = field.elem(c)
                    v = [vi + ce * bi for vi, bi in zip(v, b)]
            root = tuple(frobenius_pow(vi, q, -1) for vi in v)
            pts.append(ProjectivePoint.of(root))
    pts.sort(key=ProjectivePoint.key)
    return pts


# ---------------------------------------------------------------------------
# the cone fibration over the hyperplane at infinity

class FiberClass(enum.Enum):
    EMPTY = "empty"
    SINGLE = "single"
    LINE = "line"


@dataclass(frozen=True)
class ConeData:
    """Split of the defining form as (coefficient of x_n) * x_n + remainder.

    The coefficient has degree q and the remainder degree q+1; both only
    involve x_0 .. x_{n-1}, which is what makes the projection away from the
    singular point (0 : ... : 0 : 1) so tractable.
    """

    s: int
    n: int
    q: int

    def __post_init__(self):
        if self.n < 1:
            raise InputError("cone analysis needs ambient dimension n >= 1")
        if not 0 <= self.s <= self.n:
            raise InputError(f"s = {self.s} out of range [0, {self.n}]")

    def fq_part(self, y: Sequence[FieldElem]) -> FieldElem:
        """Coefficient of x_n, evaluated at y in P^{n-1}."""
        y = self._validated(y)
        if self.s == self.n:
            return y[0].ctx.zero
        return y[self.n - 1] ** self.q

    def fq1_part(self, y: Sequence[FieldElem]) -> FieldElem:
        """The x_n-free remainder, evaluated at y in P^{n-1}."""
        y = self._validated(y)
        q, s, n = self.q, self.s, self.n
        acc = y[0].ctx.zero
        for i in range(s):
            acc = acc + y[i] ** (q + 1)
        # mixed terms x_{k+1} x_k^q stop before the x_n column we split off
        for k in range(s, n - 1):
            acc = acc + y[k + 1] * y[k] ** q
        return acc

    def vs_matrix(self, ctx: FieldCtx) -> Optional[MatrixF]:
        """Matrix of the common zero locus {both parts = 0} when s <= n-2."""
        if self.s > self.n - 2:
            return None
        return w_matrix(ctx, self.n - 2, self.s)

    def _validated(self, y: Sequence[FieldElem]) -> Tuple[FieldElem, ...]:
        y = tuple(y)
        if len(y) != self.n:
            raise InputError(
                f"expected {self.n} coordinates on the base, got {len(y)}"
            )
        return y


def cone_invariants(s: int, n: int, q: int) -> ConeData:
    return ConeData(s=s, n=n, q=q)


def fiber_class(s: int, n: int, q: int, point: ProjectivePoint) -> FiberClass:
    """Class of the fiber of the cone projection over a point at infinity."""
    if len(point.coords) != n + 1:
        raise InputError(
            f"expected a point of P^{n}, got {len(point.coords)} coordinates"
        )
    if point.coords[n].val:
        raise InputError("fiber classification needs a point with last coordinate 0")
    cone = cone_invariants(s, n, q)
    y = point.coords[:n]
    if cone.fq_part(y).val:
        return FiberClass.SINGLE
    if cone.fq1_part(y).val:
        return FiberClass.EMPTY
    return FiberClass.LINE


# ---------------------------------------------------------------------------
# rationality of the corank-one forms

@dataclass(frozen=True)
class RoundtripReport:
    s: int
    n: int
    q: int
    field: FieldCtx
    attempted: int
    skipped: int
    exact: int

    @property
    def all_exact(self) -> bool:
        return self.exact == self.attempted


def rational_roundtrip(s: int, n: int, q: int, field: FieldCtx,
                       samples: int = 20,
                       seed: Optional[int] = None) -> RoundtripReport:
    """Sample the chart inverse of the projection from the singular point.

    Points y of the chart {y_{n-1} != 0} lift to (y, -fq1(y)/y_{n-1}^q); the
    report records how many sampled lifts land on the hypersurface and
    project straight back.
    """
    if n < 2 or not 0 <= s < n or (n, s) == (2, 0):
        raise InputError(
            f"the chart inverse needs n >= 2, s < n and (n, s) != (2, 0); "
            f"got (n, s) = ({n}, {s})"
        )
    twist_exponent(field.p, q)
    cone = cone_invariants(s, n, q)
    surface = TwistedForm(w_matrix(field, n, s), q)
    rng = random.Random(seed)
    attempted = skipped = exact = 0
    draws = 0
    while attempted < samples and draws < 100 * samples:
        draws += 1
        y = tuple(field.elem(rng.randrange(field.size)) for _ in range(n))
        if not any(c.val for c in y):
            continue
        if not y[n - 1].val:
            skipped += 1
            continue
        attempted += 1
        z = -cone.fq1_part(y) / y[n - 1] ** q
        lift = ProjectivePoint.of(y + (z,))
        on_surface = not surface.value(lift.coords).val
        back = ProjectivePoint.of(lift.coords[:n])
        if on_surface and back == ProjectivePoint.of(y):
            exact += 1
    return RoundtripReport(s=s, n=n, q=q, field=field,
                           attempted=attempted, skipped=skipped, exact=exact)


# ---------------------------------------------------------------------------
# tangents and strangeness

def tangent_hyperplane(form: TwistedForm, x: ProjectivePoint) -> Tuple[FieldElem, ...]:
    """Coefficients g of the tangent hyperplane {y : sum g_i y_i = 0} at x."""
    a = form.matrix
    if x.ctx != a.ctx:
        a = a.map_field(x.ctx)
    if len(x.coords) != a.ncols:
        raise InputError("point dimension does not match the form")
    xq = tuple(c ** form.q for c in x.coords)
    g = a.mul_vec(xq)
    if not any(c.val for c in g):
        raise InputError("tangent hyperplane undefined at a singular point")
    value = sum((xi * gi for xi, gi in zip(x.coords, g)), x.ctx.zero)
    if value.val:
        raise InputError("tangent hyperplane requested at a point off the hypersurface")
    lead = next(c for c in g if c.val)
    inv = lead.inv()
    return tuple(c * inv for c in g)


@dataclass(frozen=True)
class StrangenessReport:
    status: str                      # "center" | "none" | "inconclusive"
    center: Optional[ProjectivePoint]
    smooth_count: int
    reason: Optional[str] = None


def strangeness_center(form: TwistedForm, field: FieldCtx) -> StrangenessReport:
    """Common point of all tangent lines at smooth rational points, if any."""
    if form.n != 2:
        raise InputError("strangeness analysis is for plane curves (n = 2)")
    a = form.matrix.map_field(field)
    q = form.q
    rows = []
    smooth = 0
    for x in enum_points(form, field):
        xq = tuple(c ** q for c in x.coords)
        g = a.mul_vec(xq)
        if any(c.val for c in g):
            smooth += 1
            rows.append(g)
    if smooth < 3:
        return StrangenessReport("inconclusive", None, smooth,
                                 "too few smooth points; try a larger field")
    kernel = MatrixF(field, tuple(rows)).kernel()
    if not kernel:
        return StrangenessReport("none", None, smooth)
    if len(kernel) > 1:
        return StrangenessReport("inconclusive", None, smooth,
                                 "all tangent lines coincide")
    return StrangenessReport("center", ProjectivePoint.of(kernel[0]), smooth)


# ---------------------------------------------------------------------------
# the automorphism group of a normal form, two independent ways

@lru_cache(maxsize=None)
def _w_support(n: int, s: int) -> Tuple[Tuple[int, int], ...]:
    return tuple(
        [(i, i) for i in range(s)] + [(i + 1, i) for i in range(s, n)]
    )


def aut_membership(m: MatrixF, s: int, n: int, q: int) -> Optional[FieldElem]:
    """delta with tM.W_s.M^(q) = delta.W_s, or None when M is no stabilizer."""
    ctx = m.ctx
    size = n + 1
    if m.nrows != size or m.ncols != size:
        raise InputError(f"expected a {size} x {size} matrix, got "
                         f"{m.nrows} x {m.ncols}")
    if not 0 <= s <= n:
        raise InputError(f"s = {s} out of range [0, {n}]")
    twist_exponent(ctx.p, q)
    rows = [[x.val for x in row] for row in m.rows]
    if not det_int(ctx, rows):
        raise InputError("stabilizer membership is defined for invertible matrices")
    mul, add, powi = ctx.mul_int, ctx.add_int, ctx.pow_int
    mq = [[powi(v, q) for v in row] for row in rows]
    supp = _w_support(n, s)
    image = [
        [
            _twisted_entry(rows, mq, supp, i, j, mul, add)
            for j in range(size)
        ]
        for i in range(size)
    ]
    delta = image[supp[0][0]][supp[0][1]]
    if not delta:
        return None
    suppset = set(supp)
    for i in range(size):
        for j in range(size):
            want = delta if (i, j) in suppset else 0
            if image[i][j] != want:
                return None
    return ctx.elem(delta)


def _twisted_entry(rows, mq, supp, i, j, mul, add):
    acc = 0
    for (k, l) in supp:
        v = rows[k][i]
        if v:
            w = mq[l][j]
            if w:
                acc = add(acc, mul(v, w))
    return acc


@dataclass(frozen=True)
class AutCandidate:
    """Block decomposition of a stabilizer candidate in the cone regime."""

    t_block: MatrixF
    a_col: Tuple[FieldElem, ...]
    b_row: Tuple[FieldElem, ...]
    c_row: Tuple[FieldElem, ...]
    d: FieldElem
    e: FieldElem
    delta: FieldElem


@dataclass(frozen=True)
class AutReport:
    matrix: MatrixF                      # corner-normalized representative
    s: int
    n: int
    q: int
    regime: str                          # "s<=n-2" | "s=n-1" | "s=n"
    shape_ok: bool
    conditions: Tuple[Tuple[str, bool], ...]
    delta: Optional[FieldElem]
    candidate: Optional[AutCandidate]
    flags: Tuple[Tuple[str, bool], ...]  # informational, not part of `ok`

    @property
    def ok(self) -> bool:
        return self.shape_ok and all(v for _, v in self.conditions)


def _regime_of(s: int, n: int) -> str:
    if s == n:
        return "s=n"
    if s == n - 1:
        return "s=n-1"
    return "s<=n-2"


def aut_report(m: MatrixF, s: int, n: int, q: int) -> AutReport:
    """Structural stabilizer test through the block equations.

    The candidate is normalized so its lower-right corner is 1 (the
    stabilizer condition is projective: scaling M by c scales delta by
    c^{q+1}).  A matrix whose last column is not supported on that corner
    cannot fix the unique singular point and fails the shape check.
    """
    ctx = m.ctx
    size = n + 1
    if m.nrows != size or m.ncols != size:
        raise InputError(f"expected a {size} x {size} matrix, got "
                         f"{m.nrows} x {m.ncols}")
    if not 0 <= s <= n:
        raise InputError(f"s = {s} out of range [0, {n}]")
    twist_exponent(ctx.p, q)
    regime = _regime_of(s, n)

    corner = m[size - 1, size - 1]
    shape_ok = bool(corner.val) and not any(
        m[i, size - 1].val for i in range(size - 1)
    )
    if not shape_ok:
        return AutReport(m, s, n, q, regime, False, (), None, None, ())
    if corner.val != 1:
        m = m.scale(corner.inv())

    if regime == "s=n":
        return _report_last(m, s, n, q)
    if regime == "s=n-1":
        return _report_penultimate(m, s, n, q)
    return _report_cone(m, s, n, q)


def aut_structural_check(m: MatrixF, s: int, n: int, q: int) -> bool:
    return aut_report(m, s, n, q).ok


def _block(m: MatrixF, rows: Sequence[int], cols: Sequence[int]) -> MatrixF:
    return m.submatrix(rows, cols)


def _report_last(m: MatrixF, s: int, n: int, q: int) -> AutReport:
    # stabilizer of the cylinder form (no x_n term): [[T, 0], [u, 1]] with
    # tT.T^(q) scalar; the last row is unconstrained
    ctx = m.ctx
    t = _block(m, range(n), range(n))
    gram = t.transpose() @ t.twist(q)
    lam = gram[0, 0]
    scalar_ok = bool(lam.val) and gram == MatrixF.identity(ctx, n).scale(lam)
    conditions = (("gram-scalar", scalar_ok),)
    delta = lam if scalar_ok else None
    return AutReport(m, s, n, q, "s=n", True, conditions, delta, None, ())


def _report_penultimate(m: MatrixF, s: int, n: int, q: int) -> AutReport:
    # diag(T, beta, 1) with tT.T^(q) = beta^q I; everything off the diagonal
    # blocks is forced to vanish
    ctx = m.ctx
    t = _block(m, range(n - 1), range(n - 1))
    beta = m[n - 1, n - 1]
    border = not (
        any(m[i, n - 1].val for i in range(n - 1))
        or any(m[n - 1, j].val for j in range(n - 1))
        or any(m[n, j].val for j in range(n))
    )
    delta = beta ** q
    gram_ok = bool(beta.val) and (
        t.transpose() @ t.twist(q) == MatrixF.identity(ctx, n - 1).scale(delta)
    )
    conditions = (("border-zeros", border), ("gram-scalar", gram_ok))
    return AutReport(m, s, n, q, "s=n-1", True, conditions,
                     delta if beta.val else None, None, ())


def _report_cone(m: MatrixF, s: int, n: int, q: int) -> AutReport:
    ctx = m.ctx
    k = n - 1
    t = _block(m, range(k), range(k))
    a_col = tuple(m[i, k] for i in range(k))
    b_row = tuple(m[k, j] for j in range(k))
    c_row = tuple(m[n, j] for j in range(k))
    d = m[k, k]
    e = m[n, k]
    delta = d ** q
    wp = w_matrix(ctx, n - 2, s)

    tw_t = t.transpose() @ wp
    # row vector a.W' + d.e_last over the k block columns
    border = [
        sum((a_col[i] * wp[i, j] for i in range(k)), ctx.zero)
        for j in range(k)
    ]
    border[k - 1] = border[k - 1] + d
    tq = t.twist(q)
    aq = tuple(x ** q for x in a_col)
    dq = delta

    form_block = (tw_t @ tq) == wp.scale(delta)
    border_row = all(
        sum((border[i] * tq[i, j] for i in range(k)), ctx.zero)
        == (delta if j == k - 1 else ctx.zero)
        for j in range(k)
    )
    column_mix = all(
        sum((tw_t[i, l] * aq[l] for l in range(k)), ctx.zero) + c_row[i] * dq
        == ctx.zero
        for i in range(k)
    )
    corner_mix = (
        sum((border[i] * aq[i] for i in range(k)), ctx.zero) + e * dq
        == ctx.zero
    )
    conditions = (
        ("form-block", form_block),
        ("border-row", border_row),
        ("column-mix", column_mix),
        ("corner-mix", corner_mix),
        ("b-vanishes", not any(x.val for x in b_row)),
        ("middle-scalar-nonzero", bool(d.val)),
        ("block-invertible", bool(t.det().val)),
    )
    candidate = AutCandidate(t, a_col, b_row, c_row, d, e, delta)
    flags = (
        ("middle-scalar-equals-delta", d == delta),
        ("delta-fixed-by-twist", delta ** q == delta),
    )
    return AutReport(m, s, n, q, "s<=n-2", True, conditions,
                     delta if d.val else None, candidate, flags)
