"""Exact arithmetic in finite-field towers F_{p^d}.

Every field is presented as F_p[x]/(f) where f is the lexicographically
smallest monic irreducible polynomial of degree d over F_p, coefficients
compared low-degree first.  This makes field construction, embeddings and
root choices reproducible across runs and processes.

An element is stored as a single integer 0 <= v < p^d whose base-p digits
are its coefficients in the power basis of the generator, so enumeration
order (0, 1, g, 1+g, ...) is plain integer order.  Small fields get exp/log
tables and constant-time multiplication; large fields fall back to
polynomial arithmetic with precomputed reduction rows, so towers up to the
degree cap stay usable without table blow-up.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Iterator, List, Tuple

from .errors import BudgetError, ExtensionCapError, InputError

MAX_EXT_DEGREE = 24
MUL_TABLE_LIMIT = 1 << 16
ENUM_LIMIT = 1 << 20
ELEM_CACHE_LIMIT = 1 << 16


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _factorize(n: int) -> List[int]:
    """Distinct prime factors of n by trial division (desk-scale n only)."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# dense polynomial arithmetic over F_p (coefficient lists, low degree first)

def _poly_trim(c: List[int]) -> List[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mod(a: List[int], f: Tuple[int, ...], p: int) -> List[int]:
    a = list(a)
    df = len(f) - 1
    # f is monic, so reduction is plain long division
    for i in range(len(a) - 1, df - 1, -1):
        c = a[i]
        if c:
            a[i] = 0
            for j in range(df):
                a[i - df + j] = (a[i - df + j] - c * f[j]) % p
    del a[df:]
    return a


def _poly_mulmod(a: List[int], b: List[int], f: Tuple[int, ...], p: int) -> List[int]:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] = (prod[i + j] + ai * bj) % p
    return _poly_trim(_poly_mod(prod, f, p))


def _poly_powmod(a: List[int], e: int, f: Tuple[int, ...], p: int) -> List[int]:
    result = [1]
    base = _poly_trim(_poly_mod(list(a), f, p))
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, f, p)
        base = _poly_mulmod(base, base, f, p)
        e >>= 1
    return result


def _poly_gcd(a: List[int], b: List[int], p: int) -> List[int]:
    a, b = list(a), list(b)
    while _poly_trim(b):
        lead_inv = pow(b[-1], -1, p)
        bm = tuple((c * lead_inv) % p for c in b)
        a = _poly_trim(_poly_mod(a, bm, p))
        a, b = b, a
    return _poly_trim(a)


def _poly_is_irreducible(f: Tuple[int, ...], p: int) -> bool:
    """True iff monic f has no factor of degree at most deg(f)/2.

    Walks h = x^{p^j} mod f for j = 1..d/2 and checks gcd(h - x, f) = 1;
    reducible candidates die at the degree of their smallest factor, which
    keeps the lexicographic search for defining polynomials cheap.
    """
    d = len(f) - 1
    if d == 1:
        return True
    if f[0] == 0:
        return False  # divisible by x
    # root scan over the prime field kills most candidates without powmods
    for r in range(p):
        acc = 0
        for c in reversed(f):
            acc = (acc * r + c) % p
        if acc == 0:
            return False
    if d <= 3:
        return True  # degree 2 or 3 without roots is irreducible
    h = [0, 1]
    for _ in range(d // 2):
        h = _poly_powmod(h, p, f, p)
        diff = list(h)
        while len(diff) < 2:
            diff.append(0)
        diff[1] = (diff[1] - 1) % p
        g = _poly_gcd(diff, list(f), p)
        if g != [] and len(g) - 1 != 0:
            return False
    return True


def _find_defining_poly(p: int, d: int) -> Tuple[int, ...]:
    if d == 1:
        return (0, 1)
    # constant term 0 means divisible by x, so enumerate it nonzero outermost;
    # this walks the same candidates in the same lexicographic order without
    # burning p^(d-1) iterations skipping each dead block
    for const in range(1, p):
        for rest in itertools.product(range(p), repeat=d - 1):
            f = (const,) + rest + (1,)
            if _poly_is_irreducible(f, p):
                return f
    raise AssertionError("no irreducible polynomial found")  # unreachable


def _digits(v: int, p: int, d: int) -> Tuple[int, ...]:
    out = []
    for _ in range(d):
        v, r = divmod(v, p)
        out.append(r)
    return tuple(out)


def _undigits(digits, p: int) -> int:
    v = 0
    for c in reversed(digits):
        v = v * p + c
    return v


class FieldElem:
    """One element of a FieldCtx, stored as its integer encoding."""

    __slots__ = ("ctx", "val")

    def __init__(self, ctx: "FieldCtx", val: int):
        self.ctx = ctx
        self.val = val

    @property
    def coeffs(self) -> Tuple[int, ...]:
        return _digits(self.val, self.ctx.p, self.ctx.d)

    def _coerce(self, other) -> "FieldElem":
        if not isinstance(other, FieldElem):
            raise TypeError(f"cannot combine FieldElem with {type(other).__name__}")
        if other.ctx is not self.ctx and other.ctx != self.ctx:
            raise ValueError(
                f"field mismatch: F_{self.ctx.p}^{self.ctx.d} vs F_{other.ctx.p}^{other.ctx.d}"
            )
        return other

    def __add__(self, other):
        other = self._coerce(other)
        ctx = self.ctx
        return ctx.elem(ctx.add_int(self.val, other.val))

    def __sub__(self, other):
        other = self._coerce(other)
        ctx = self.ctx
        return ctx.elem(ctx.sub_int(self.val, other.val))

    def __neg__(self):
        ctx = self.ctx
        return ctx.elem(ctx.neg_int(self.val))

    def __mul__(self, other):
        other = self._coerce(other)
        ctx = self.ctx
        return ctx.elem(ctx.mul_int(self.val, other.val))

    def __truediv__(self, other):
        other = self._coerce(other)
        ctx = self.ctx
        return ctx.elem(ctx.mul_int(self.val, ctx.inv_int(other.val)))

    def __pow__(self, e: int):
        ctx = self.ctx
        return ctx.elem(ctx.pow_int(self.val, e))

    def inv(self) -> "FieldElem":
        ctx = self.ctx
        return ctx.elem(ctx.inv_int(self.val))

    def __bool__(self):
        return self.val != 0

    def __eq__(self, other):
        if not isinstance(other, FieldElem):
            return NotImplemented
        return (
            self.val == other.val
            and self.ctx.p == other.ctx.p
            and self.ctx.d == other.ctx.d
        )

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.d, self.val))

    def __repr__(self):
        return f"FieldElem(F_{self.ctx.p}^{self.ctx.d}, {list(self.coeffs)})"


class FieldCtx:
    """The field F_{p^d} with its canonical defining polynomial.

    Instances are interned through build_field, so contexts for the same
    (p, d) compare equal and normally are the same object.
    """

    __slots__ = (
        "p", "d", "size", "poly",
        "_elems", "_exp", "_log", "_red",
        "_gen_val", "_ph",
        "_lane_w", "_lane_mask", "_lane_low", "_lane_red",
    )

    def __init__(self, p: int, d: int):
        if not _is_prime(p):
            raise InputError(f"p = {p} is not prime")
        if d < 1:
            raise InputError(f"extension degree must be positive, got {d}")
        self.p = p
        self.d = d
        self.size = p ** d
        self.poly = _find_defining_poly(p, d)
        self._gen_val = None
        self._ph = None
        # reduction rows: x^{d+j} mod f as digit tuples, for schoolbook products
        red = []
        if d > 1:
            row = [(-c) % p for c in self.poly[:d]]
            red.append(tuple(row))
            for _ in range(d - 2):
                prev = red[-1]
                row = [0] + list(prev[:-1])
                top = prev[-1]
                if top:
                    base = red[0]
                    row = [(row[k] + top * base[k]) % p for k in range(d)]
                red.append(tuple(row))
        self._red = tuple(red)
        # lane packing: digits in fixed-width bit lanes of one integer, so a
        # polynomial product is a single native multiply; the width must hold
        # a full convolution plus the reduction fold without lane overflow
        if d > 1:
            bound = (2 * d - 1) * (p - 1) * (p - 1)
            w = 8
            while (1 << w) <= bound:
                w *= 2
            self._lane_w = w
            self._lane_mask = (1 << w) - 1
            self._lane_low = (1 << (w * d)) - 1
            self._lane_red = tuple(
                sum(row[k] << (w * k) for k in range(d)) for row in red
            )
        else:
            self._lane_w = self._lane_mask = self._lane_low = 0
            self._lane_red = ()
        self._exp = None
        self._log = None
        if d >= 2 and self.size <= MUL_TABLE_LIMIT:
            self._build_tables()
        if self.size <= ELEM_CACHE_LIMIT:
            self._elems = tuple(FieldElem(self, v) for v in range(self.size))
        else:
            self._elems = None

    # -- construction helpers -------------------------------------------------

    def _to_lanes(self, v: int) -> int:
        p, w = self.p, self._lane_w
        out = shift = 0
        while v:
            v, r = divmod(v, p)
            if r:
                out += r << shift
            shift += w
        return out

    def _from_lanes(self, x: int) -> int:
        p, w, mask = self.p, self._lane_w, self._lane_mask
        out = 0
        scale = 1
        while x:
            out += ((x & mask) % p) * scale
            x >>= w
            scale *= p
        return out

    def _lane_mul(self, xa: int, xb: int) -> int:
        # inputs and output carry reduced digits, one per lane
        w, mask = self._lane_w, self._lane_mask
        prod = xa * xb
        acc = prod & self._lane_low
        prod >>= w * self.d
        j = 0
        while prod:
            c = (prod & mask) % self.p
            if c:
                acc += c * self._lane_red[j]
            prod >>= w
            j += 1
        # renormalize lanes mod p
        p = self.p
        out = shift = 0
        while acc:
            r = (acc & mask) % p
            if r:
                out += r << shift
            acc >>= w
            shift += w
        return out

    def _mul_poly_int(self, a: int, b: int) -> int:
        return self._from_lanes(self._lane_mul(self._to_lanes(a), self._to_lanes(b)))

    def _pow_poly_int(self, a: int, e: int) -> int:
        result = 1
        base = self._to_lanes(a)
        while e:
            if e & 1:
                result = self._lane_mul(result, base) if result != 1 else base
            if e > 1:
                base = self._lane_mul(base, base)
            e >>= 1
        return self._from_lanes(result)

    def _order_is_full(self, v: int, factors) -> bool:
        m = self.size - 1
        for ell in factors:
            if self._pow_poly_int(v, m // ell) == 1:
                return False
        return True

    def generator_val(self) -> int:
        """Encoding of the first multiplicative generator in element order."""
        if self._gen_val is None:
            m = self.size - 1
            if m == 1:
                self._gen_val = 1
            else:
                factors = _factorize(m)
                v = 2
                while True:
                    if self._order_is_full(v, factors):
                        self._gen_val = v
                        break
                    v += 1
                    if v >= self.size:
                        raise AssertionError("no generator found")  # unreachable
        return self._gen_val

    def _build_tables(self):
        m = self.size - 1
        g = self.generator_val()
        exp = [0] * (2 * m)
        acc = 1
        shift = g == self.p  # multiplying by x is a digit shift plus reduction
        p, d = self.p, self.d
        red0 = self._red[0] if self._red else None
        for i in range(m):
            exp[i] = acc
            if shift:
                digitsv = _digits(acc, p, d)
                row = [0] + list(digitsv[:-1])
                top = digitsv[-1]
                if top:
                    row = [(row[k] + top * red0[k]) % p for k in range(d)]
                acc = _undigits(row, p)
            else:
                acc = self._mul_poly_int(acc, g)
        for i in range(m):
            exp[m + i] = exp[i]
        log = [0] * self.size
        for i in range(m):
            log[exp[i]] = i
        self._exp = exp
        self._log = log

    # -- integer-level arithmetic --------------------------------------------

    def elem(self, v: int) -> FieldElem:
        elems = self._elems
        if elems is not None:
            return elems[v]
        return FieldElem(self, v)

    def scalar(self, k: int) -> FieldElem:
        """The prime-subfield element k mod p."""
        return self.elem(k % self.p)

    @property
    def zero(self) -> FieldElem:
        return self.elem(0)

    @property
    def one(self) -> FieldElem:
        return self.elem(1)

    def add_int(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        if self.d == 1:
            return (a + b) % p
        out = 0
        shift = 1
        while a or b:
            a, ra = divmod(a, p)
            b, rb = divmod(b, p)
            out += ((ra + rb) % p) * shift
            shift *= p
        return out

    def neg_int(self, a: int) -> int:
        p = self.p
        if p == 2:
            return a
        if self.d == 1:
            return (-a) % p
        out = 0
        shift = 1
        while a:
            a, ra = divmod(a, p)
            out += ((-ra) % p) * shift
            shift *= p
        return out

    def sub_int(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        return self.add_int(a, self.neg_int(b))

    def mul_int(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        log = self._log
        if log is not None:
            return self._exp[log[a] + log[b]]
        if self.d == 1:
            return a * b % self.p
        return self._mul_poly_int(a, b)

    def inv_int(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("division by zero in finite field")
        log = self._log
        if log is not None:
            return self._exp[self.size - 1 - log[a]]
        if self.d == 1:
            return pow(a, -1, self.p)
        # extended Euclid in F_p[x]
        p = self.p
        f = list(self.poly)
        r0, r1 = f, _poly_trim(list(_digits(a, p, self.d)))
        s0, s1 = [], [1]
        while _poly_trim(list(r1)):
            lead_inv = pow(r1[-1], -1, p)
            # one long-division step
            q = [0] * (len(r0) - len(r1) + 1)
            rem = list(r0)
            for i in range(len(rem) - 1, len(r1) - 2, -1):
                c = rem[i]
                if c:
                    k = i - (len(r1) - 1)
                    coef = c * lead_inv % p
                    q[k] = coef
                    for j, r1j in enumerate(r1):
                        rem[k + j] = (rem[k + j] - coef * r1j) % p
            rem = _poly_trim(rem)
            # s update: s0 - q*s1
            qs1 = [0] * (len(q) + len(s1) - 1) if q and s1 else []
            for i, qi in enumerate(q):
                if qi:
                    for j, sj in enumerate(s1):
                        qs1[i + j] = (qs1[i + j] + qi * sj) % p
            new_s = [0] * max(len(s0), len(qs1))
            for i in range(len(new_s)):
                v0 = s0[i] if i < len(s0) else 0
                v1 = qs1[i] if i < len(qs1) else 0
                new_s[i] = (v0 - v1) % p
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_trim(new_s)
        # f irreducible and a != 0, so the gcd r0 is a nonzero constant
        c_inv = pow(r0[0], -1, p)
        inv_digits = [(c * c_inv) % p for c in s0] + [0] * self.d
        return _undigits(inv_digits[: self.d], p)

    def pow_int(self, a: int, e: int) -> int:
        if a == 0:
            if e > 0:
                return 0
            if e == 0:
                return 1
            raise ZeroDivisionError("zero to a negative power")
        m = self.size - 1
        if m:
            e %= m
        if e == 0:
            return 1
        log = self._log
        if log is not None:
            return self._exp[log[a] * e % m]
        if self.d == 1:
            return pow(a, e, self.p)
        return self._pow_poly_int(a, e)

    def _ph_components(self):
        # Pohlig-Hellman setup: one baby-step table per prime factor of the
        # group order, each for the subgroup of that prime order.  A direct
        # BSGS table would need sqrt(p^d) entries, hopeless at degree 20+.
        if self._ph is None:
            m = self.size - 1
            g = self.generator_val()
            comps = []
            for prime in _factorize(m):
                pe = prime
                while (m // pe) % prime == 0:
                    pe *= prime
                gamma = self.pow_int(g, m // prime)
                bm = math.isqrt(prime - 1) + 1
                baby = {}
                acc = 1
                for j in range(bm):
                    baby.setdefault(acc, j)
                    acc = self.mul_int(acc, gamma)
                giant = self.inv_int(self.pow_int(gamma, bm))
                comps.append((prime, pe, bm, baby, giant))
            self._ph = comps
        return self._ph

    def _dlog_order_prime(self, h: int, prime: int, bm: int, baby, giant) -> int:
        cur = h
        for i in range(bm + 1):
            j = baby.get(cur)
            if j is not None:
                return (i * bm + j) % prime
            cur = self.mul_int(cur, giant)
        raise AssertionError("BSGS failed")  # unreachable for cyclic groups

    def dlog(self, a: int) -> int:
        """Discrete log of a nonzero element w.r.t. the canonical generator."""
        if a == 0:
            raise ZeroDivisionError("discrete log of zero")
        if self._log is not None:
            return self._log[a]
        m = self.size - 1
        if m == 1:
            return 0
        g = self.generator_val()
        result, modulus = 0, 1
        for prime, pe, bm, baby, giant in self._ph_components():
            # digits of the residue mod prime^e, least significant first
            exp = 0
            t = pe
            while t > 1:
                t //= prime
                exp += 1
            gp_inv = self.inv_int(self.pow_int(g, m // pe))
            ap = self.pow_int(a, m // pe)
            x = 0
            for k in range(exp):
                h = self.pow_int(
                    self.mul_int(ap, self.pow_int(gp_inv, x)),
                    prime ** (exp - 1 - k),
                )
                x += self._dlog_order_prime(h, prime, bm, baby, giant) * prime ** k
            # CRT fold into the combined residue
            inc = (x - result) * pow(modulus, -1, pe) % pe
            result += modulus * inc
            modulus *= pe
        return result % m

    # -- identity -------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, FieldCtx):
            return NotImplemented
        return self.p == other.p and self.d == other.d

    def __hash__(self):
        return hash((self.p, self.d))

    def __repr__(self):
        return f"FieldCtx(p={self.p}, d={self.d})"


@lru_cache(maxsize=None)
def build_field(p: int, d: int, max_degree: int = MAX_EXT_DEGREE) -> FieldCtx:
    """The canonical F_{p^d}; construction is deterministic and cached."""
    if d > max_degree:
        raise ExtensionCapError(
            f"degree {d} over the prime field exceeds the cap {max_degree}"
        )
    return FieldCtx(p, d)


def twist_exponent(p: int, q: int) -> int:
    """e such that q = p^e, validating that q is a power of p."""
    if q < p:
        raise InputError(f"q = {q} is not a positive power of p = {p}")
    e = 0
    m = q
    while m > 1:
        if m % p:
            raise InputError(f"q = {q} is not a power of p = {p}")
        m //= p
        e += 1
    return e


def prime_power(q: int) -> Tuple[int, int]:
    """(p, e) with q = p^e, rejecting non-prime-powers."""
    if q < 2:
        raise InputError(f"q = {q} is not a prime power")
    p = 2
    while q % p:
        p += 1
    return p, twist_exponent(p, q)


def frobenius_pow(x: FieldElem, q: int, i: int) -> FieldElem:
    """x^{q^i}, where negative i walks the Frobenius backwards (exact roots)."""
    ctx = x.ctx
    twist_exponent(ctx.p, q)
    if x.val == 0:
        return x
    m = ctx.size - 1
    if m == 1:
        return x
    # gcd(q, p^d - 1) = 1, so q is invertible mod m and negative i is exact
    e = pow(q, i, m)
    return ctx.elem(ctx.pow_int(x.val, e))


def embed(x: FieldElem, target: FieldCtx) -> FieldElem:
    """Carry x into the larger field via the canonical generator image."""
    src = x.ctx
    if target.p != src.p:
        raise InputError("cannot embed between different characteristics")
    if target.d % src.d:
        raise InputError(
            f"F_{src.p}^{src.d} does not embed into F_{target.p}^{target.d}"
        )
    if src.d == target.d:
        return target.elem(x.val)
    pows = _embedding_powers(src.p, src.d, target.d)
    acc = 0
    for c, rp in zip(x.coeffs, pows):
        if c:
            acc = target.add_int(acc, target.mul_int(c, rp))
    return target.elem(acc)


@lru_cache(maxsize=None)
def _embedding_powers(p: int, d_src: int, d_dst: int) -> Tuple[int, ...]:
    src = build_field(p, d_src)
    dst = build_field(p, d_dst)
    if d_src == 1:
        return (1,)
    root = _smallest_root_in(src.poly, dst, p ** d_src)
    pows = [1]
    for _ in range(d_src - 1):
        pows.append(dst.mul_int(pows[-1], root))
    return tuple(pows)


def _eval_poly_int(f, ctx: FieldCtx, v: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = ctx.add_int(ctx.mul_int(acc, v), c % ctx.p)
    return acc


def _smallest_root_in(f, dst: FieldCtx, subfield_size: int) -> int:
    """Smallest root (in element order) of the prime-coefficient polynomial f.

    Small targets are scanned directly.  In large ones a single root is
    split off the polynomial instead, which is enough: the full root set of
    an irreducible factor is its Frobenius orbit, so the minimum over the
    orbit equals the minimum over a scan.
    """
    if dst.size <= MUL_TABLE_LIMIT:
        for v in range(dst.size):
            if _eval_poly_int(f, dst, v) == 0:
                return v
        raise AssertionError("irreducible factor has no root in its splitting field")
    root = _split_off_root(f, dst, subfield_size)
    best = cur = root
    for _ in range(len(f) - 2):
        cur = dst.pow_int(cur, dst.p)
        best = min(best, cur)
    return best


def _fpoly_mod(dst: FieldCtx, u, m):
    # m monic; u reduced in place semantics, returns trimmed remainder
    u = list(u)
    dm = len(m) - 1
    for i in range(len(u) - 1, dm - 1, -1):
        c = u[i]
        if c:
            for j in range(dm):
                u[i - dm + j] = dst.sub_int(u[i - dm + j], dst.mul_int(c, m[j]))
        u.pop()
    while u and u[-1] == 0:
        u.pop()
    return u


def _fpoly_mulmod(dst: FieldCtx, u, v, m):
    out = [0] * (len(u) + len(v) - 1) if u and v else []
    for i, a in enumerate(u):
        if a:
            for j, b in enumerate(v):
                if b:
                    out[i + j] = dst.add_int(out[i + j], dst.mul_int(a, b))
    return _fpoly_mod(dst, out, m)


def _fpoly_powmod(dst: FieldCtx, u, exp, m):
    acc = [1]
    base = _fpoly_mod(dst, u, m)
    while exp:
        if exp & 1:
            acc = _fpoly_mulmod(dst, acc, base, m)
        base = _fpoly_mulmod(dst, base, base, m)
        exp >>= 1
    return acc


def _fpoly_gcd_monic(dst: FieldCtx, u, v):
    while v:
        u, v = v, _fpoly_mod(dst, u, [dst.mul_int(c, dst.inv_int(v[-1])) for c in v])
    if u:
        lead = dst.inv_int(u[-1])
        u = [dst.mul_int(c, lead) for c in u]
    return u


def _split_off_root(f, dst: FieldCtx, subfield_size: int) -> int:
    """One root of the prime-coefficient irreducible f inside dst.

    Equal-degree splitting with multipliers walking the cyclic group of the
    subfield the roots generate; the multiplier order is fixed, so the root
    found is deterministic.  Prime-field multipliers alone cannot separate
    Frobenius-conjugate roots, hence the subfield generator.
    """
    cur = [c % dst.p for c in f]
    sigma = dst.pow_int(dst.generator_val(), (dst.size - 1) // (subfield_size - 1))
    half = (subfield_size - 1) // 2
    subfield_deg = len(f) - 1
    c = 1
    while len(cur) > 2:
        c = dst.mul_int(c, sigma)
        if dst.p == 2:
            # trace splitting: roots sort by Tr(c*x) over the subfield
            term = _fpoly_mod(dst, [0, c], cur)
            total = list(term)
            for _ in range(subfield_deg - 1):
                term = _fpoly_mulmod(dst, term, term, cur)
                for i, b in enumerate(term):
                    if i < len(total):
                        total[i] = dst.add_int(total[i], b)
                    else:
                        total.append(b)
                while total and total[-1] == 0:
                    total.pop()
            probe = total
        else:
            # quadratic-character splitting: (x + c)^((|S|-1)/2) is +-1 at roots
            probe = _fpoly_powmod(dst, [c, 1], half, cur)
            probe = list(probe) if probe else [0]
            probe[0] = dst.sub_int(probe[0], 1)
            while probe and probe[-1] == 0:
                probe.pop()
        part = _fpoly_gcd_monic(dst, probe, cur)
        if len(part) < 2 or len(part) >= len(cur):
            continue
        other = _fpoly_quot_monic(dst, cur, part)
        cur = part if len(part) <= len(other) else other
    if len(cur) != 2:
        raise AssertionError("irreducible factor has no root in its splitting field")
    return dst.neg_int(cur[0])


def _fpoly_quot_monic(dst: FieldCtx, u, m):
    # exact quotient of u by the monic divisor m
    u = list(u)
    dm = len(m) - 1
    out = [0] * (len(u) - dm)
    for i in range(len(u) - 1, dm - 1, -1):
        c = u[i]
        out[i - dm] = c
        if c:
            for j in range(dm):
                u[i - dm + j] = dst.sub_int(u[i - dm + j], dst.mul_int(c, m[j]))
        u.pop()
    return out


def kth_root(x: FieldElem, k: int, max_degree: int = MAX_EXT_DEGREE):
    """Smallest y with y^k = x, extending along the chain d, 2d, 3d, ...

    Returns (y, field).  The field is the first link of the chain where a
    root exists; the root is the lexicographically smallest one there.
    """
    if k <= 0:
        raise InputError(f"root exponent must be positive, got {k}")
    ctx = x.ctx
    if x.val == 0:
        return x, ctx
    j = 1
    while True:
        big_d = ctx.d * j
        if big_d > max_degree:
            raise ExtensionCapError(
                f"no {k}-th root of the given element below degree cap {max_degree}"
            )
        field = build_field(ctx.p, big_d)
        xf = embed(x, field)
        m = field.size - 1
        g = math.gcd(k, m)
        if field.pow_int(xf.val, m // g) == 1:
            t = field.dlog(xf.val)
            kk, mm = k // g, m // g
            u0 = (t // g) * pow(kk, -1, mm) % mm if mm > 1 else 0
            gen = field.generator_val()
            best = None
            for i in range(g):
                cand = field.pow_int(gen, u0 + i * mm)
                if best is None or cand < best:
                    best = cand
            assert field.pow_int(best, k) == xf.val
            return field.elem(best), field
        j += 1


def enumerate_elements(ctx: FieldCtx) -> Iterator[FieldElem]:
    """All p^d elements in canonical order, zero first."""
    if ctx.size > ENUM_LIMIT:
        raise BudgetError(
            f"refusing to enumerate {ctx.size} elements (limit {ENUM_LIMIT})"
        )
    for v in range(ctx.size):
        yield ctx.elem(v)


def subfield_elements(ctx: FieldCtx, sub_degree: int) -> List[FieldElem]:
    """Elements of the canonical subfield F_{p^sub_degree}, embedded, in order."""
    if ctx.d % sub_degree:
        raise InputError(f"F_{ctx.p}^{sub_degree} is not a subfield of F_{ctx.p}^{ctx.d}")
    sub = build_field(ctx.p, sub_degree)
    return [embed(e, ctx) for e in enumerate_elements(sub)]


# ---------------------------------------------------------------------------
# JSON encoding

def elem_to_dict(x: FieldElem) -> dict:
    return {"p": x.ctx.p, "d": x.ctx.d, "coeffs": list(x.coeffs)}


def elem_from_dict(obj, expect_ctx: FieldCtx = None) -> FieldElem:
    if not isinstance(obj, dict):
        raise InputError(f"field element must be an object, got {type(obj).__name__}")
    try:
        p, d, coeffs = obj["p"], obj["d"], obj["coeffs"]
    except KeyError as missing:
        raise InputError(f"field element is missing key {missing}") from None
    if not isinstance(p, int) or not isinstance(d, int) or not isinstance(coeffs, list):
        raise InputError("field element keys p, d, coeffs have wrong types")
    if len(coeffs) != d:
        raise InputError(f"expected {d} coefficients, got {len(coeffs)}")
    if not all(isinstance(c, int) and 0 <= c < p for c in coeffs):
        raise InputError("coefficients must be integers in [0, p)")
    if expect_ctx is not None:
        if expect_ctx.p != p or expect_ctx.d != d:
            raise InputError(
                f"element field F_{p}^{d} does not match the enclosing field "
                f"F_{expect_ctx.p}^{expect_ctx.d}"
            )
        ctx = expect_ctx
    else:
        ctx = build_field(p, d)
    return ctx.elem(_undigits(coeffs, p))


def field_to_dict(ctx: FieldCtx) -> dict:
    return {"p": ctx.p, "d": ctx.d, "defining_poly": list(ctx.poly)}


def field_from_dict(obj) -> FieldCtx:
    if not isinstance(obj, dict):
        raise InputError(f"field must be an object, got {type(obj).__name__}")
    try:
        p, d = obj["p"], obj["d"]
    except KeyError as missing:
        raise InputError(f"field is missing key {missing}") from None
    if not isinstance(p, int) or not isinstance(d, int):
        raise InputError("field keys p and d must be integers")
    ctx = build_field(p, d)
    echoed = obj.get("defining_poly")
    if echoed is not None and list(ctx.poly) != list(echoed):
        raise InputError(
            f"defining polynomial mismatch for F_{p}^{d}: "
            f"canonical {list(ctx.poly)}, got {echoed}"
        )
    return ctx
