import math

import pytest

from subspec.errors import ValidationError
from subspec.surd import Surd


def test_rational_normalization():
    x = Surd.rational(6, 4)
    assert (x.a, x.den) == (3, 2)
    assert Surd.rational(1, -2) == Surd.rational(-1, 2)


def test_perfect_square_radicand_folds():
    x = Surd(1, 2, 1, 9)  # 1 + 2*sqrt(9) = 7
    assert x.is_rational
    assert x == Surd.rational(7)


def test_arithmetic_matches_floats():
    golden = Surd(-1, 1, 2, 5)
    x = golden * 7 + Surd.rational(3, 4) - golden
    assert math.isclose(float(x), 6 * (math.sqrt(5) - 1) / 2 + 0.75)


def test_comparisons_are_exact_near_ties():
    golden = Surd(-1, 1, 2, 5)   # 0.618...
    # golden is a root of x^2 + x - 1, so golden^2 equals 1 - golden exactly
    assert golden * golden == Surd.rational(1) - golden
    assert golden * golden < Surd.rational(1) - golden + Surd.rational(1, 10 ** 30)


def test_floor_and_frac():
    golden = Surd(-1, 1, 2, 5)
    assert (golden * 5).floor() == 3            # 3.09...
    assert (golden * -1).floor() == -1
    frac = (golden * 8).frac()
    assert Surd.rational(0) <= frac < Surd.rational(1)
    assert math.isclose(float(frac), (8 * (math.sqrt(5) - 1) / 2) % 1)


def test_mixing_fields_raises():
    with pytest.raises(ValidationError):
        Surd(0, 1, 1, 2) + Surd(0, 1, 1, 3)


def test_zero_denominator_rejected():
    with pytest.raises(ValidationError):
        Surd(1, 0, 0)
