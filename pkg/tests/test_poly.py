"""Exact/float polynomial arithmetic against independent schoolbook oracles."""

import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rcskit.errors import (
    FieldMismatchError,
    PoleError,
    UnsupportedFieldError,
    ZeroDenominatorError,
)
from rcskit.poly import (
    EXACT,
    FLOAT,
    GaussianRational,
    Poly,
    PolyVector,
    RationalFn,
    gcd,
    simplify,
)

from conftest import st_exact_poly, st_gaussian_rational, st_theta_fraction


def _random_gr(rnd, span=9):
    return GaussianRational(
        Fraction(rnd.randint(-span, span), rnd.randint(1, span)),
        Fraction(rnd.randint(-span, span), rnd.randint(1, span)),
    )


def _random_poly(rnd, degree):
    return Poly.exact([_random_gr(rnd) for _ in range(degree + 1)])


# -- oracles ---------------------------------------------------------------


def schoolbook_add(p, q):
    n = max(len(p), len(q))
    a = list(p) + [GaussianRational(0)] * (n - len(p))
    b = list(q) + [GaussianRational(0)] * (n - len(q))
    return [x + y for x, y in zip(a, b)]


def schoolbook_convolution(p, q):
    out = [GaussianRational(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return out


def power_sum_eval(coeffs, x):
    total = GaussianRational(0)
    for k, c in enumerate(coeffs):
        term = c
        for _ in range(k):
            term = term * GaussianRational(x)
        total = total + term
    return total


# -- oracle crosschecks on seeded random inputs ----------------------------


def test_addition_matches_schoolbook_oracle():
    rnd = random.Random(101)
    for _ in range(25):
        p, q = _random_poly(rnd, 5), _random_poly(rnd, 5)
        expect = schoolbook_add(p.coeffs, q.coeffs)
        got = (p + q).coeffs
        assert list(got) == expect[: len(got)]
        assert all(c.is_zero for c in expect[len(got) :])


def test_multiplication_matches_convolution_oracle():
    rnd = random.Random(102)
    for _ in range(25):
        p, q = _random_poly(rnd, 4), _random_poly(rnd, 3)
        expect = schoolbook_convolution(p.coeffs, q.coeffs)
        assert list((p * q).coeffs) == expect


def test_eval_matches_power_sum_oracle():
    rnd = random.Random(103)
    for _ in range(25):
        p = _random_poly(rnd, 6)
        x = Fraction(rnd.randint(-12, 12), 13)
        assert p(x) == power_sum_eval(p.coeffs, x)


def test_gcd_common_factor_recovered():
    rnd = random.Random(104)
    for _ in range(15):
        g = _random_poly(rnd, 2)
        a = _random_poly(rnd, 3)
        b = _random_poly(rnd, 3)
        got = gcd(g * a, g * b)
        # oracle: the monic common factor divides both products with zero remainder
        assert (g * a % got).is_zero
        assert (g * b % got).is_zero
        assert got.degree >= g.degree
        assert got.coeffs[-1] == GaussianRational(1)


# -- ring axioms (property-based) ------------------------------------------


@given(st_exact_poly(), st_exact_poly(), st_exact_poly())
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert p + q == q + p
    assert (p * q) * r == p * (q * r)
    assert p * q == q * p
    assert p * (q + r) == p * q + p * r


@given(st_exact_poly(allow_zero=False), st_exact_poly(allow_zero=False))
def test_degree_law_exact_multiplication(p, q):
    assert (p * q).degree == p.degree + q.degree


@given(st_exact_poly(), st_exact_poly())
def test_degree_law_addition(p, q):
    assert (p + q).degree <= max(p.degree, q.degree)


@given(st_exact_poly(), st_exact_poly(allow_zero=False))
def test_divmod_reconstructs(p, q):
    quo, rem = divmod(p, q)
    assert quo * q + rem == p
    assert rem.degree < q.degree


@given(st_exact_poly(), st_exact_poly(), st_theta_fraction)
def test_eval_is_ring_homomorphism(p, q, theta):
    assert (p + q)(theta) == p(theta) + q(theta)
    assert (p * q)(theta) == p(theta) * q(theta)


@given(st_exact_poly(), st_theta_fraction)
def test_conjugate_matches_pointwise_conjugation_on_real_theta(p, theta):
    assert p.conjugate()(theta) == p(theta).conjugate()


# -- float/exact bridge ----------------------------------------------------


def test_float_and_exact_agree_on_integer_coefficients():
    rnd = random.Random(105)
    for _ in range(30):
        coeffs = [rnd.randint(-50, 50) for _ in range(7)]
        pe = Poly.exact(coeffs)
        pf = Poly.floating(coeffs)
        theta = rnd.uniform(-1, 1)
        exact_val = pe(Fraction(theta)).to_complex()
        float_val = pf(theta)
        scale = max(abs(exact_val), 1.0)
        assert abs(exact_val - float_val) / scale <= 1e-12


def test_mixed_field_operations_rejected():
    pe = Poly.exact([1, 2])
    pf = Poly.floating([1.0, 2.0])
    with pytest.raises(FieldMismatchError):
        pe + pf
    with pytest.raises(FieldMismatchError):
        pe * pf
    with pytest.raises(UnsupportedFieldError):
        gcd(pf, pf)
    with pytest.raises(UnsupportedFieldError):
        divmod(pf, pf)


# -- zero polynomial conventions -------------------------------------------


def test_zero_polynomial_normal_form():
    z = Poly.exact([0, 0, 0])
    assert z.is_zero and z.degree == -1 and z.coeffs == ()
    p = Poly.exact([1, 2])
    assert (p - p).is_zero
    assert (p * z).is_zero


def test_trailing_zero_trim():
    p = Poly.exact([3, 0, 0])
    assert p.degree == 0


# -- rational functions -----------------------------------------------------


def test_simplify_cancels_and_makes_denominator_monic():
    rnd = random.Random(106)
    for _ in range(15):
        g = _random_poly(rnd, 2)
        num = _random_poly(rnd, 2)
        den = _random_poly(rnd, 1)
        f = simplify(g * num, g * den)
        assert f.den.coeffs[-1] == GaussianRational(1)
        # same function: cross-multiplication identity
        assert f.num * (g * den) == (g * num) * f.den
        assert gcd(f.num, f.den).degree == 0 or f.num.is_zero


def test_simplify_zero_numerator():
    f = simplify(Poly.exact([]), Poly.exact([2, 3]))
    assert f.num.is_zero
    assert f.den == Poly.exact([1])


def test_zero_denominator_rejected():
    with pytest.raises(ZeroDenominatorError):
        simplify(Poly.exact([1]), Poly.exact([]))
    with pytest.raises(ZeroDenominatorError):
        RationalFn(Poly.exact([1]), Poly.exact([]), (0, 0))


def test_eval_at_pole_raises():
    # f = 1 / (theta - 1/2)
    f = RationalFn(Poly.exact([1]), Poly.exact([Fraction(-1, 2), 1]), (0, 1))
    with pytest.raises(PoleError):
        f(Fraction(1, 2))
    assert f(Fraction(3, 4)) == GaussianRational(4)


def test_degree_bound_enforced():
    with pytest.raises(Exception):
        RationalFn(Poly.exact([1, 2, 3]), Poly.exact([1]), (1, 0))


@given(st_exact_poly(allow_zero=False), st_exact_poly(allow_zero=False))
def test_simplify_preserves_function_value(num, den):
    f = simplify(num, den)
    for k in range(-3, 4):
        theta = Fraction(k, 3)
        if den(theta).is_zero or f.den(theta).is_zero:
            continue
        assert f(theta) == num(theta) / den(theta)


# -- serialization ----------------------------------------------------------


def test_coefficient_string_roundtrip():
    rnd = random.Random(107)
    for _ in range(40):
        c = _random_gr(rnd)
        assert GaussianRational.parse(str(c)) == c
    assert GaussianRational.parse("1/2-3/4*i") == GaussianRational(
        Fraction(1, 2), Fraction(-3, 4)
    )


@given(st_exact_poly())
def test_exact_poly_json_roundtrip(p):
    blob = json.dumps(p.to_jsonable())
    back = Poly.from_jsonable(json.loads(blob), EXACT)
    assert back == p


def test_float_poly_json_roundtrip():
    p = Poly.floating([1.25 + 0.5j, -2.0, 0.125j])
    back = Poly.from_jsonable(p.to_jsonable(), FLOAT)
    assert back == p


def test_rational_fn_json_roundtrip():
    f = simplify(Poly.exact([1, 2]), Poly.exact([Fraction(1, 3), 0, 1]))
    back = RationalFn.from_jsonable(json.loads(json.dumps(f.to_jsonable())))
    assert back == f


# -- polynomial vectors ------------------------------------------------------


def test_inner_product_is_conjugate_linear_in_first_slot():
    i = GaussianRational(0, 1)
    v = PolyVector([Poly.exact([i]), Poly.exact([1, 1])])
    w = PolyVector([Poly.exact([1]), Poly.exact([0, 2])])
    # <i*v, w> = -i <v, w>
    vi = PolyVector([Poly.exact([i]) * e for e in v.entries])
    assert vi.inner(w) == v.inner(w) * Poly.exact([-i])


@given(st.lists(st_gaussian_rational, min_size=1, max_size=4), st_theta_fraction)
def test_norm_sq_nonnegative_on_real_theta(consts, theta):
    v = PolyVector([Poly.exact([c, c * GaussianRational(0, 1)]) for c in consts])
    val = v.norm_sq()(theta)
    assert val.im == 0
    assert val.re >= 0
