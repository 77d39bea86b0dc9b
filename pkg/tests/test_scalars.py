from fractions import Fraction

import pytest
from mpmath import mp, mpf

import aimorse as am
from aimorse.scalars import coerce_scalar, mode_of, to_bigreal, to_rational


def test_mode_classification():
    assert mode_of(Fraction(1, 3)) == am.EXACT
    assert mode_of(7) == am.EXACT
    assert mode_of(mpf("1.5")) == am.NUMERIC
    assert mode_of(1.5) == am.NUMERIC
    with pytest.raises(TypeError):
        mode_of("1.5")
    with pytest.raises(TypeError):
        mode_of(True)


def test_rational_round_trip_through_bigreal():
    # BigReal values are dyadic rationals, so the reverse conversion is exact
    with am.working_precision(50):
        x = to_bigreal(Fraction(1, 3))
        back = to_rational(x)
        assert abs(back - Fraction(1, 3)) < Fraction(1, 10**49)
        assert to_bigreal(back) == x


def test_rational_to_bigreal_correctly_rounded():
    # single-step rounding: result is the nearest representable float
    with am.working_precision(40):
        x = to_bigreal(Fraction(1, 3))
        ulp = Fraction(2) ** int(x._mpf_[2])  # grid spacing at this significand
        assert abs(to_rational(x) - Fraction(1, 3)) <= ulp / 2


def test_precision_floor_enforced():
    with pytest.raises(ValueError):
        am.working_precision(31)
    with am.working_precision(32):
        assert mp.dps == 32


def test_coerce_scalar_modes():
    assert coerce_scalar(0.5, am.EXACT) == Fraction(1, 2)
    assert isinstance(coerce_scalar(Fraction(1, 2), am.NUMERIC), mpf)
    with pytest.raises(ValueError):
        coerce_scalar(1, "other")


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        to_rational(mpf("inf"))
