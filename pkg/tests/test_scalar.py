import math
import random
from fractions import Fraction

import pytest

from bjseq.errors import ValidationError
from bjseq.scalar import (
    APPROX,
    EQUAL,
    EXACT,
    GREATER,
    INDETERMINATE,
    LESS,
    Scalar,
    Verdict,
    compare_mod,
    int_nth_root,
    nth_root_bounds,
    pow_bounds,
    rational_pow,
    rational_sqrt,
    as_exponent,
    sgn,
)


def rat(v):
    return Scalar.rational(v)


def test_sgn_zero():
    assert sgn(rat(0)).is_zero()


def test_sgn_real():
    assert sgn(rat(Fraction(-7, 3))) == rat(-1)
    assert sgn(rat(5)) == rat(1)


def test_sgn_pythagorean_exact():
    # 3^2 + 4^2 = 5^2, so the modulus is rational and sgn stays exact
    z = Scalar.gaussian(3, 4)
    s = sgn(z)
    assert s.mode == EXACT
    assert s.re == Fraction(3, 5) and s.im == Fraction(4, 5)


def test_sgn_degrades_to_approx():
    z = Scalar.gaussian(1, 1)
    s = sgn(z)
    assert s.mode == APPROX
    assert s.tol > 0
    r = 1 / math.sqrt(2)
    assert abs(s.re - r) < 1e-15 and abs(s.im - r) < 1e-15


def test_mod_sq():
    assert rat(0).mod_sq().re == 0
    assert rat(Fraction(-2, 3)).mod_sq().re == Fraction(4, 9)
    assert Scalar.gaussian(1, 1).mod_sq().re == 2


def test_compare_mod():
    assert compare_mod(rat(1), rat(-1)) == EQUAL
    assert compare_mod(rat(Fraction(1, 2)), rat(Fraction(2, 3))) == LESS
    assert compare_mod(Scalar.gaussian(3, 4), rat(5)) == EQUAL
    assert compare_mod(rat(3), rat(2)) == GREATER


def test_compare_mod_indeterminate_band():
    a = Scalar.approx(1.0, tol=1e-6)
    b = Scalar.approx(1.0 + 1e-9)
    assert compare_mod(a, b) == INDETERMINATE
    c = Scalar.approx(2.0, tol=1e-6)
    assert compare_mod(a, c) == LESS


def test_exact_field_laws_random():
    rng = random.Random(7)

    def rand_scalar():
        re = Fraction(rng.randint(-9, 9), rng.randint(1, 7))
        im = Fraction(rng.randint(-9, 9), rng.randint(1, 7))
        return Scalar.gaussian(re, im)

    for _ in range(100):
        a, b, c = rand_scalar(), rand_scalar(), rand_scalar()
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        # mod_sq is multiplicative
        assert (a * b).mod_sq().re == a.mod_sq().re * b.mod_sq().re


def test_sgn_times_modulus_recovers_value():
    rng = random.Random(3)
    for _ in range(50):
        v = Fraction(rng.randint(-20, 20), rng.randint(1, 9))
        z = rat(v)
        m = rational_sqrt(z.mod_sq().re)
        assert m is not None
        assert sgn(z).scale(m) == z
    # Pythagorean complex values
    for a, b in [(3, 4), (5, 12), (8, 15), (20, 21)]:
        z = Scalar.gaussian(a, b)
        m = rational_sqrt(z.mod_sq().re)
        assert m is not None
        assert sgn(z).scale(m) == z


def test_conj_and_neg():
    z = Scalar.gaussian(2, -3)
    assert z.conj() == Scalar.gaussian(2, 3)
    assert -z == Scalar.gaussian(-2, 3)


def test_approx_tolerance_propagates():
    a = Scalar.approx(2.0, tol=1e-10)
    b = Scalar.approx(3.0, tol=1e-10)
    assert (a + b).tol == pytest.approx(2e-10)
    assert (a * b).tol >= 5e-10


def test_verdict_exact_never_indeterminate():
    with pytest.raises(ValidationError):
        Verdict("indeterminate", 0.0, EXACT)


def test_int_nth_root():
    assert int_nth_root(0, 3) == 0
    assert int_nth_root(26, 3) == 2
    assert int_nth_root(27, 3) == 3
    assert int_nth_root(10**30, 5) == 10**6
    big = 12345678901234567890
    r = int_nth_root(big, 7)
    assert r**7 <= big < (r + 1) ** 7


def test_rational_sqrt():
    assert rational_sqrt(Fraction(25)) == 5
    assert rational_sqrt(Fraction(4, 9)) == Fraction(2, 3)
    assert rational_sqrt(Fraction(2)) is None


def test_nth_root_bounds_contains_truth():
    lo, hi = nth_root_bounds(Fraction(2), 2, Fraction(1, 10**12))
    assert hi - lo <= Fraction(1, 10**12)
    assert float(lo) <= math.sqrt(2) <= float(hi)
    lo, hi = nth_root_bounds(Fraction(10), 3, Fraction(1, 10**9))
    assert lo**3 <= 10 <= hi**3


def test_pow_bounds():
    lo, hi = pow_bounds(Fraction(1, 2), Fraction(3, 2), Fraction(1, 10**12))
    truth = 0.5**1.5
    assert float(lo) <= truth <= float(hi)
    assert hi - lo <= Fraction(1, 10**12)


def test_rational_pow():
    assert rational_pow(Fraction(4), Fraction(1, 2)) == 2
    assert rational_pow(Fraction(8, 27), Fraction(2, 3)) == Fraction(4, 9)
    assert rational_pow(Fraction(2), Fraction(1, 2)) is None


def test_as_exponent():
    assert as_exponent(3) == 3
    assert as_exponent(1.5) == Fraction(3, 2)
    assert as_exponent("3/2") == Fraction(3, 2)
    with pytest.raises(ValidationError):
        as_exponent(math.pi)


def test_scalar_json_roundtrip():
    for z in [rat(Fraction(-3, 7)), Scalar.gaussian(1, -2), Scalar.approx(1.5, 1e-9)]:
        assert Scalar.from_json(z.to_json()) == z
