import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cftheta.errors import DomainError, InsufficientPrecision
from cftheta.exactreal import (
    BigRational,
    Dyadic,
    PrecisionContext,
    QuadraticSurd,
    RigorousReal,
    _div_dyadic,
    _fraction_to_dyadic,
    _sqrt_dyadic,
    certainly_gt,
    certainly_lt,
    exact_sqrt,
    floor_checked,
    frac_sqrt,
    squarefree_split,
    surd_recip_shift,
)

fractions_st = st.fractions(
    min_value=Fraction(-1000), max_value=Fraction(1000), max_denominator=10**6
)
nonsquare_d = st.integers(min_value=2, max_value=5000).filter(
    lambda d: math.isqrt(d) ** 2 != d
)


# ---------------------------------------------------------------------------
# BigRational is fractions.Fraction; pin the contract we rely on
# ---------------------------------------------------------------------------


def test_bigrational_contract():
    r = BigRational(6, -4)
    assert r.denominator > 0
    assert math.gcd(r.numerator, r.denominator) == 1
    assert r == Fraction(-3, 2)


# ---------------------------------------------------------------------------
# dyadics
# ---------------------------------------------------------------------------


def test_dyadic_normalization_and_arith():
    a = Dyadic.make(12, 0)  # 12 = 3 * 2^2
    assert (a.man, a.exp) == (3, 2)
    b = Dyadic.make(1, -3)
    assert float(a + b) == 12.125
    assert float(a - b) == 11.875
    assert float(a * b) == 1.5
    assert a.floor() == 12
    assert Dyadic.make(-5, -2).floor() == -2  # floor(-1.25)


@given(fractions_st, st.integers(min_value=8, max_value=200))
def test_fraction_to_dyadic_brackets(fr, prec):
    lo = _fraction_to_dyadic(fr, prec, up=False)
    hi = _fraction_to_dyadic(fr, prec, up=True)
    assert lo.as_fraction() <= fr <= hi.as_fraction()
    assert hi.as_fraction() - lo.as_fraction() <= Fraction(abs(fr) + 1) / (1 << (prec - 4))


@given(fractions_st, fractions_st.filter(lambda f: f != 0), st.integers(32, 128))
def test_dyadic_div_directed(a, b, prec):
    da = _fraction_to_dyadic(a, 256, up=False)
    db = _fraction_to_dyadic(b, 256, up=False)
    exact = da.as_fraction() / db.as_fraction()
    lo = _div_dyadic(da, db, prec, up=False)
    hi = _div_dyadic(da, db, prec, up=True)
    assert lo.as_fraction() <= exact <= hi.as_fraction()


@given(
    st.fractions(min_value=Fraction(0), max_value=Fraction(10**6), max_denominator=10**4),
    st.integers(32, 128),
)
def test_dyadic_sqrt_directed(fr, prec):
    d = _fraction_to_dyadic(fr, 256, up=False)
    lo = _sqrt_dyadic(d, prec, up=False)
    hi = _sqrt_dyadic(d, prec, up=True)
    v = d.as_fraction()
    assert lo.as_fraction() ** 2 <= v <= hi.as_fraction() ** 2


# ---------------------------------------------------------------------------
# rigorous intervals: outward rounding soundness
# ---------------------------------------------------------------------------


def test_interval_point_examples():
    one = RigorousReal.from_int(1, 64)
    two = RigorousReal.from_int(2, 64)
    three = one + two
    assert three.contains(3) and three.width() == 0
    assert RigorousReal.from_int(4, 64).sqrt().contains(2)


def test_interval_division_by_zero_enclosure():
    z = RigorousReal.from_fraction_bounds(Fraction(-1, 10), Fraction(1, 10), 64)
    with pytest.raises(DomainError):
        1 / z


def test_interval_sqrt_negative():
    neg = RigorousReal.from_fraction_bounds(Fraction(-1), Fraction(1), 64)
    with pytest.raises(DomainError):
        neg.sqrt()


def test_sqrt_of_discriminant_example():
    # sqrt(1 - 4*0.2*0.2) = sqrt(0.84) = 0.9165151...
    v = RigorousReal.from_fraction(Fraction(84, 100), 128).sqrt()
    assert v.lower.as_fraction() ** 2 <= Fraction(84, 100) <= v.upper.as_fraction() ** 2
    assert v.width() < Fraction(1, 1 << 100)
    assert abs(float(v.lower) - 0.9165151389911680) < 1e-15


@settings(max_examples=300)
@given(
    st.lists(
        st.tuples(st.sampled_from("+-*/sqrt abs".split()), fractions_st),
        min_size=1,
        max_size=6,
    ),
    fractions_st,
)
def test_enclosure_soundness(ops, start):
    """Exact rational reference value always stays inside the enclosure."""
    iv = RigorousReal.from_fraction(start, 96)
    exact = start
    for op, operand in ops:
        if op == "+":
            iv, exact = iv + operand, exact + operand
        elif op == "-":
            iv, exact = iv - operand, exact - operand
        elif op == "*":
            iv, exact = iv * operand, exact * operand
        elif op == "/":
            if operand == 0:
                continue
            iv, exact = iv / operand, exact / operand
        elif op == "abs":
            iv, exact = abs(iv), abs(exact)
        elif op == "sqrt":
            if exact < 0:
                continue
            iv, exact = iv.sqrt(), exact  # exact sqrt not rational in general
            assert iv.lower.as_fraction() ** 2 <= exact
            assert exact <= iv.upper.as_fraction() ** 2
            return
    assert iv.contains(exact)


def test_floor_checked_straddle():
    enc = RigorousReal.from_fraction_bounds(
        Fraction(29999, 10000), Fraction(30001, 10000), 64
    )
    with pytest.raises(InsufficientPrecision):
        floor_checked(enc)
    ok = RigorousReal.from_fraction_bounds(
        Fraction(29999, 10000), Fraction(29999, 10000), 64
    )
    assert floor_checked(ok) == 2


def test_from_decimal_uncertainty():
    x = RigorousReal.from_decimal("0.50")
    assert x.lower.as_fraction() <= Fraction(49, 100)
    assert x.upper.as_fraction() >= Fraction(51, 100)
    assert x.contains(Fraction(1, 2))


# ---------------------------------------------------------------------------
# precision context
# ---------------------------------------------------------------------------


def test_precision_context_schedule():
    ctx = PrecisionContext(initial_bits=64, max_bits=300, growth_factor=2)
    assert list(ctx.precisions()) == [64, 128, 256, 300]
    with pytest.raises(ValueError):
        PrecisionContext(initial_bits=0)
    with pytest.raises(ValueError):
        PrecisionContext(initial_bits=256, max_bits=128)


# ---------------------------------------------------------------------------
# quadratic surds
# ---------------------------------------------------------------------------


def test_surd_constructor_rejects_rationals():
    with pytest.raises(ValueError):
        QuadraticSurd(0, 4, 1)  # sqrt(4) = 2
    with pytest.raises(ValueError):
        QuadraticSurd(1, 9, 3)
    with pytest.raises(ValueError):
        QuadraticSurd(1, 2, 0)
    with pytest.raises(ValueError):
        QuadraticSurd(1, -2, 1)


def test_surd_canonical_examples():
    assert QuadraticSurd(0, 8, 2) == QuadraticSurd(0, 2, 1)
    s = QuadraticSurd(0, 8, 2)
    assert (s.P, s.D, s.Q) == (0, 2, 1)
    # sqrt(2)/4 normalizes with the scaling that makes Q | D - P^2
    t = QuadraticSurd(0, 2, 4)
    assert (t.P, t.D, t.Q) == (0, 8, 8)
    assert (t.D - t.P**2) % t.Q == 0


@settings(max_examples=300)
@given(nonsquare_d, st.integers(-50, 50), st.integers(-30, 30).filter(bool), st.integers(1, 12))
def test_surd_canonicalization_scaling(d, p, q, k):
    """(kP, k^2 D, kQ) is the same value; normalized fields must agree."""
    base = QuadraticSurd(p, d, q)
    scaled = QuadraticSurd(k * p, k * k * d, k * q)
    assert base == scaled
    assert (base.P, base.D, base.Q) == (scaled.P, scaled.D, scaled.Q)
    assert (base.D - base.P**2) % base.Q == 0
    r = math.isqrt(base.D)
    assert r * r != base.D


def test_floor_checked_surds():
    assert floor_checked(QuadraticSurd(1, 5, 2)) == 1  # golden ratio
    assert floor_checked(QuadraticSurd(0, 2, 1)) == 1  # sqrt 2
    assert floor_checked(QuadraticSurd(-4, 7, 3)) == -1


def test_recip_shift_fixed_points():
    r2m1 = QuadraticSurd(-1, 2, 1)
    assert surd_recip_shift(r2m1, 2) == r2m1
    g = QuadraticSurd(-1, 5, 2)
    assert surd_recip_shift(g, 1) == g


def test_recip_shift_sqrt7():
    # 1/(sqrt7 - 2) = (2 + sqrt7)/3, whose Gauss step (digit 1) lands on
    # (-1 + sqrt7)/3 ~ 0.548584; Q | D - P^2 holds throughout
    x = QuadraticSurd(-2, 7, 1)
    rec = x.reciprocal()
    assert rec == QuadraticSurd(2, 7, 3)
    out = surd_recip_shift(x, 1)
    assert out == QuadraticSurd(-1, 7, 3)
    assert (out.D - out.P**2) % out.Q == 0
    assert abs(float(out) - 0.5485837703548635) < 1e-12


@settings(max_examples=200)
@given(nonsquare_d, st.integers(-20, 20), st.integers(-15, 15).filter(bool))
def test_surd_field_identities(d, p, q):
    x = QuadraticSurd(p, d, q)
    assert x.reciprocal() * x == 1
    conj_prod = x * x.conjugate()
    assert isinstance(conj_prod, Fraction)  # norm is rational
    assert (x + 1) - 1 == x
    assert -(-x) == x
    assert abs(x).sign() == 1
    f = math.floor(x)
    assert f <= float(x) < f + 1 or abs(float(x) - f) < 1e-9


@settings(max_examples=500, deadline=None)
@given(nonsquare_d, st.integers(-40, 40), st.integers(-25, 25).filter(bool))
def test_floor_surd_agrees_with_interval(d, p, q):
    x = QuadraticSurd(p, d, q)
    assert floor_checked(x) == floor_checked(x.to_interval(128))


def test_floor_agreement_bulk_1000():
    import random

    rng = random.Random(20260808)
    checked = 0
    while checked < 1000:
        d = rng.randrange(2, 10000)
        if math.isqrt(d) ** 2 == d:
            continue
        p = rng.randrange(-1000, 1000)
        q = rng.randrange(1, 500) * rng.choice((1, -1))
        x = QuadraticSurd(p, d, q)
        assert floor_checked(x) == floor_checked(x.to_interval(128))
        checked += 1


def test_cross_field_mixing_raises():
    a = QuadraticSurd(0, 2, 1)
    b = QuadraticSurd(0, 3, 1)
    with pytest.raises(ValueError):
        a + b
    with pytest.raises(ValueError):
        a * b


def test_surd_interval_containment():
    x = QuadraticSurd(-1, 5, 2)
    iv = x.to_interval(160)
    t = 200
    root5 = Fraction(math.isqrt(5 << (2 * t)), 1 << t)
    tight = Fraction(-1, 2) + root5 / 2
    assert iv.lower.as_fraction() <= tight <= iv.upper.as_fraction() + Fraction(1, 1 << 150)


# ---------------------------------------------------------------------------
# exact square roots
# ---------------------------------------------------------------------------


def test_frac_sqrt():
    assert frac_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert frac_sqrt(Fraction(2)) is None
    assert frac_sqrt(Fraction(-1)) is None


def test_squarefree_split():
    assert squarefree_split(1) == (1, 1)
    assert squarefree_split(8) == (2, 2)
    assert squarefree_split(360) == (6, 10)
    s, d0 = squarefree_split(2**6 * 3**3 * 11)
    assert s * s * d0 == 2**6 * 3**3 * 11


def test_exact_sqrt_rational_to_surd():
    r = exact_sqrt(Fraction(1, 5))
    assert r == QuadraticSurd(0, 5, 5)
    assert r * r == Fraction(1, 5)
    assert exact_sqrt(Fraction(19, 25)) * exact_sqrt(Fraction(19, 25)) == Fraction(19, 25)


def test_exact_sqrt_in_field():
    phi = QuadraticSurd(1, 5, 2)
    assert exact_sqrt(phi * phi) == phi
    # (sqrt5 - 2)^2 = 9 - 4*sqrt5
    v = QuadraticSurd.from_parts(Fraction(9), Fraction(-4), 5)
    s = exact_sqrt(v)
    assert s == QuadraticSurd.from_parts(Fraction(-2), Fraction(1), 5)
    # not a square in its field
    assert exact_sqrt(QuadraticSurd(0, 2, 1)) is None


@settings(max_examples=200)
@given(nonsquare_d, st.integers(-12, 12), st.integers(1, 9))
def test_exact_sqrt_roundtrip(d, p, q):
    x = QuadraticSurd(p, d, q)
    sq = x * x
    root = exact_sqrt(sq)
    assert root == abs(x)


# ---------------------------------------------------------------------------
# certified comparisons
# ---------------------------------------------------------------------------


def test_certified_comparisons():
    g = QuadraticSurd(-1, 5, 2)
    assert certainly_lt(g, 1)
    assert certainly_gt(g, Fraction(1, 2))
    assert certainly_lt(QuadraticSurd(0, 2, 1), QuadraticSurd(0, 3, 1))  # cross-field
    wide = RigorousReal.from_fraction_bounds(Fraction(0), Fraction(1), 64)
    assert not certainly_lt(wide, Fraction(1, 2))  # unprovable, not false
