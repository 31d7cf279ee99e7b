"""Field tower: canonical construction, arithmetic, Frobenius, roots, codecs."""

import pytest

from twistform.errors import BudgetError, ExtensionCapError, InputError
from twistform.gf import (ENUM_LIMIT, MAX_EXT_DEGREE, build_field,
                          elem_from_dict, elem_to_dict, embed,
                          enumerate_elements, field_from_dict, field_to_dict,
                          frobenius_pow, kth_root, prime_power,
                          subfield_elements, twist_exponent)

F2 = build_field(2, 1)
F3 = build_field(3, 1)
F4 = build_field(2, 2)
F8 = build_field(2, 3)
F9 = build_field(3, 2)
F16 = build_field(2, 4)

# lex-smallest monic irreducibles, frozen from a trial-division search that
# shares no code with _find_defining_poly
CANONICAL_POLYS = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 0, 1, 1),
    (2, 4): (1, 0, 0, 1, 1),
    (2, 6): (1, 0, 0, 0, 0, 1, 1),
    (2, 8): (1, 0, 0, 0, 1, 1, 0, 1, 1),
    (2, 12): (1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1),
    (3, 2): (1, 0, 1),
    (3, 3): (1, 0, 2, 1),
    (3, 4): (1, 0, 1, 1, 1),
    (3, 6): (1, 0, 0, 0, 1, 1, 1),
    (5, 2): (1, 1, 1),
}


def test_canonical_defining_polynomials():
    for (p, d), coeffs in CANONICAL_POLYS.items():
        assert tuple(build_field(p, d).poly) == coeffs


def test_build_field_interns():
    assert build_field(2, 2) is F4
    assert build_field(2, 2) == build_field(2, 2)


def test_build_field_rejects_bad_arguments():
    with pytest.raises(InputError):
        build_field(4, 1)
    with pytest.raises(InputError):
        build_field(2, 0)
    with pytest.raises(ExtensionCapError):
        build_field(2, MAX_EXT_DEGREE + 1)


def test_f4_multiplication_table():
    g = F4.elem(2)
    assert g * g == F4.elem(3)            # g^2 = g + 1
    assert g * (g + F4.one) == F4.one     # g . g^2 = g^3 = 1
    assert g.inv() == F4.elem(3)
    assert g + F4.zero == g


def test_field_axioms_exhaustive_small():
    for ctx in (F4, F8, F9):
        elems = list(enumerate_elements(ctx))
        assert len(elems) == ctx.size
        for x in elems:
            assert x + (-x) == ctx.zero
            if x:
                assert x * x.inv() == ctx.one
        # associativity and distributivity spot grid
        picks = elems[:: max(1, len(elems) // 4)]
        for a in picks:
            for b in picks:
                for c in picks:
                    assert (a + b) * c == a * c + b * c
                    assert (a * b) * c == a * (b * c)


def test_pow_matches_repeated_multiplication():
    for ctx in (F9, F16):
        g = ctx.elem(ctx.p)
        acc = ctx.one
        for e in range(10):
            assert g ** e == acc
            acc = acc * g
        assert g ** (ctx.size - 1) == ctx.one


def test_frobenius_examples():
    g = F4.elem(2)
    assert frobenius_pow(g, 2, 1) == g + F4.one
    assert frobenius_pow(g + F4.one, 2, -1) == g
    assert frobenius_pow(g, 2, 0) == g


def test_frobenius_roundtrip_and_homomorphism():
    for ctx, q in ((F4, 2), (F8, 2), (F9, 3), (F16, 4), (F9, 9)):
        for x in enumerate_elements(ctx):
            for i in (1, 2, 3):
                assert frobenius_pow(frobenius_pow(x, q, i), q, -i) == x
        for x in list(enumerate_elements(ctx))[:6]:
            for y in list(enumerate_elements(ctx))[:6]:
                assert frobenius_pow(x * y, q, 1) == \
                    frobenius_pow(x, q, 1) * frobenius_pow(y, q, 1)
                assert frobenius_pow(x + y, q, 1) == \
                    frobenius_pow(x, q, 1) + frobenius_pow(y, q, 1)


def test_frobenius_rejects_incompatible_twist():
    with pytest.raises(InputError):
        frobenius_pow(F4.one, 3, 1)


def test_prime_power():
    assert prime_power(8) == (2, 3)
    assert prime_power(81) == (3, 4)
    with pytest.raises(InputError):
        prime_power(6)
    with pytest.raises(InputError):
        prime_power(1)
    assert twist_exponent(3, 27) == 3


def test_kth_root_stays_home_when_possible():
    x, fld = kth_root(F4.one, 3)
    assert x == F4.one and fld is F4
    g = F9.elem(3)
    y, fld = kth_root(g ** 4, 4)
    assert fld.d % F9.d == 0
    assert y ** 4 == embed(g ** 4, fld)


def test_kth_root_needs_sextic_extension():
    # an element of order 3 has no cube root until the multiplicative order
    # 4^k - 1 picks up a factor 9, first at F_64
    g = F4.elem(2)
    root, fld = kth_root(g, 3)
    assert fld.d == 6
    assert root ** 3 == embed(g, fld)
    assert root.val == 18  # deterministic lex-smallest root


def test_kth_root_postcondition_randomized():
    import random
    rng = random.Random(4101)
    for ctx, q in ((F4, 2), (F9, 3), (F8, 2)):
        for _ in range(12):
            x = ctx.elem(rng.randrange(1, ctx.size))
            y, fld = kth_root(x, q + 1)
            assert y ** (q + 1) == embed(x, fld)


def test_kth_root_of_zero_and_identity_power():
    z, fld = kth_root(F9.zero, 5)
    assert z == F9.zero and fld is F9
    x = F9.elem(5)
    y, fld = kth_root(x, 1)
    assert y == x and fld is F9


def test_kth_root_respects_cap():
    g = F4.elem(2)
    with pytest.raises(ExtensionCapError):
        kth_root(g, 3, max_degree=4)


def test_embed_is_homomorphism_exhaustive():
    for src, dst in ((F2, F4), (F4, F16), (F3, F9)):
        for x in enumerate_elements(src):
            for y in enumerate_elements(src):
                assert embed(x, dst) * embed(y, dst) == embed(x * y, dst)
                assert embed(x, dst) + embed(y, dst) == embed(x + y, dst)
        assert embed(src.one, dst) == dst.one
        assert embed(src.zero, dst) == dst.zero


def test_embed_fixes_prime_subfield_and_rejects_bad_target():
    assert embed(F3.elem(2), F9) == F9.scalar(2)
    with pytest.raises(InputError):
        embed(F4.elem(2), F8)  # d = 2 does not divide 3
    with pytest.raises(InputError):
        embed(F4.elem(2), F9)  # different characteristic


def test_embed_lands_in_image_of_subfield():
    sub = set(x.val for x in subfield_elements(F16, 2))
    for x in enumerate_elements(F4):
        assert embed(x, F16).val in sub


def test_enumerate_elements_order():
    assert [x.val for x in enumerate_elements(F4)] == [0, 1, 2, 3]
    assert [tuple(x.coeffs) for x in enumerate_elements(F4)] == \
        [(0, 0), (1, 0), (0, 1), (1, 1)]


def test_enum_limit_guard():
    assert 2 ** 21 > ENUM_LIMIT
    with pytest.raises(BudgetError):
        list(enumerate_elements(build_field(2, 21)))


def test_elem_codec_roundtrip():
    for ctx in (F2, F9, F16):
        for x in enumerate_elements(ctx):
            doc = elem_to_dict(x)
            assert doc == {"p": ctx.p, "d": ctx.d,
                           "coeffs": list(x.coeffs)}
            assert elem_from_dict(doc) == x
            assert elem_from_dict(doc, ctx) == x


def test_elem_codec_rejects_malformed():
    with pytest.raises(InputError):
        elem_from_dict({"p": 2, "d": 1})
    with pytest.raises(InputError):
        elem_from_dict({"p": 2, "d": 1, "coeffs": [2]})
    with pytest.raises(InputError):
        elem_from_dict({"p": 2, "d": 1, "coeffs": [0, 1]})
    with pytest.raises(InputError):
        elem_from_dict(elem_to_dict(F4.one), F8)


def test_field_codec_roundtrip_and_poly_validation():
    doc = field_to_dict(F9)
    assert doc == {"p": 3, "d": 2, "defining_poly": [1, 0, 1]}
    assert field_from_dict(doc) is F9
    doc["defining_poly"] = [2, 0, 1]
    with pytest.raises(InputError):
        field_from_dict(doc)
