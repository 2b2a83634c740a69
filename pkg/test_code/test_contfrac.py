"""
test_contfrac.py
────────────────────────────────────────────────────────
- 정확 연분수 (유리수 / 2차 무리수 / 구간 인증) 와 killer 수렴분수 선택
- 2차 무리수 산술 (부호, floor, 상쇄 없는 float)
"""

from __future__ import annotations

import math
from fractions import Fraction

import pytest

from ghtorus.drivers.contfrac import (
    HighPrecisionValue,
    QuadraticNumber,
    QuadraticValue,
    RationalValue,
    alpha_to_spec,
    continued_fraction,
    decimal_value,
    killer_convergents,
    liouville_truncated,
    log_distance_to_integers,
    parse_alpha,
    sqrt_in_field,
)
from ghtorus.errors import ExhaustedExpansion, PrecisionExhausted, RationalAlpha


# =====================================================
# 1️⃣ 전개
# =====================================================
def test_sqrt2_expansion(sqrt2_cf):
    assert sqrt2_cf.partial_quotients[:6] == (1, 2, 2, 2, 2, 2)
    assert sqrt2_cf.convergents[:6] == ((1, 1), (3, 2), (7, 5), (17, 12), (41, 29), (99, 70))
    assert sqrt2_cf.value_kind == "QuadraticIrrational"


def test_golden_expansion_is_fibonacci(golden_cf):
    assert set(golden_cf.partial_quotients) == {1}
    assert golden_cf.convergents[:5] == ((1, 1), (2, 1), (3, 2), (5, 3), (8, 5))


def test_rational_expansion_terminates():
    cf = continued_fraction(RationalValue(Fraction(7, 5)), 10)
    assert cf.partial_quotients == (1, 2, 2)
    assert cf.terminated


def test_killer_convergents_sqrt2_above(sqrt2_cf):
    pairs = killer_convergents(sqrt2_cf, "Above", 6)
    assert [q for _, q in pairs] == [2, 12, 70, 408, 2378, 13860]
    assert [p for p, _ in pairs] == [3, 17, 99, 577, 3363, 19601]
    assert all(p * p - 2 * q * q == 1 for p, q in pairs)


def test_killer_convergents_golden_above(golden_cf):
    pairs = killer_convergents(golden_cf, "Above", 2)
    assert pairs == [(2, 1), (5, 3)]


def test_killer_convergents_errors(sqrt2):
    with pytest.raises(RationalAlpha):
        killer_convergents(continued_fraction(RationalValue(Fraction(3, 2)), 4), "Above", 1)
    with pytest.raises(ExhaustedExpansion):
        killer_convergents(continued_fraction(sqrt2, 4), "Above", 3)
    with pytest.raises(ValueError):
        killer_convergents(continued_fraction(sqrt2, 4), "Sideways", 1)


def test_named_constant_pi():
    pi = decimal_value("pi", digits=60)
    assert isinstance(pi, HighPrecisionValue)
    assert pi.hi - pi.lo == 2 * Fraction(1, 10 ** 59)
    assert abs(float(pi) - math.pi) < 1e-15
    cf = continued_fraction(pi, 5)
    assert cf.partial_quotients == (3, 7, 15, 1, 292)


def test_short_decimal_runs_out_of_precision():
    with pytest.raises(PrecisionExhausted):
        continued_fraction(decimal_value("3.14"), 3)


def test_liouville_truncated_is_rational():
    val = liouville_truncated(3)
    assert val.value == Fraction(1, 10) + Fraction(1, 100) + Fraction(1, 10 ** 6)
    assert continued_fraction(val, 64).terminated


# =====================================================
# 2️⃣ 2차 무리수 산술
# =====================================================
def test_quadratic_arithmetic():
    r2 = QuadraticNumber.make(0, 1, 2)
    one = QuadraticNumber.rational(1, 2)
    prod = (one + r2) * (one - r2)
    assert prod.is_rational and prod.as_fraction() == -1
    assert (17 - 12 * r2).sign() == 1
    assert (r2 * 12 - 17).sign() == -1
    assert r2.floor() == 1
    assert (r2 * r2).as_fraction() == 2


def test_make_normalizes_square_factors():
    q = QuadraticNumber.make(0, 1, 8)
    assert (q.y, q.d) == (Fraction(2), 2)
    assert QuadraticNumber.make(1, 3, 9).is_rational


def test_float_without_cancellation():
    r2 = QuadraticNumber.make(0, 1, 2)
    small = 19601 - 13860 * r2
    exact = 1.0 / (19601 + 13860 * math.sqrt(2.0))
    assert float(small) == pytest.approx(exact, rel=1e-13)


def test_sqrt_in_field():
    root = sqrt_in_field(8, 2)
    assert root is not None and root.y == 2 and root.x == 0
    assert sqrt_in_field(3, 2) is None
    nine = sqrt_in_field(9, 2)
    assert nine is not None and nine.as_fraction() == 3


def test_log_distance_to_integers():
    assert log_distance_to_integers(Fraction(7, 2)) == pytest.approx(math.log(0.5))
    assert log_distance_to_integers(5) == -math.inf
    tiny = log_distance_to_integers(Fraction(1, 10 ** 400))
    assert tiny == pytest.approx(-400 * math.log(10.0))
    r2 = QuadraticNumber.make(0, 1, 2)
    assert log_distance_to_integers(r2) == pytest.approx(math.log(math.sqrt(2.0) - 1.0))


# =====================================================
# 3️⃣ JSON α 스펙
# =====================================================
def test_parse_alpha_kinds():
    assert isinstance(parse_alpha({"rational": ["7", "5"]}), RationalValue)
    golden = parse_alpha({"quadratic": {"a": "1/2", "b": "1/2", "d": "5"}})
    assert isinstance(golden, QuadraticValue)
    assert float(golden) == pytest.approx((1 + math.sqrt(5)) / 2)
    collapsed = parse_alpha({"quadratic": {"a": 0, "b": 2, "d": 4}})
    assert isinstance(collapsed, RationalValue) and collapsed.value == 4
    assert isinstance(parse_alpha({"liouville_truncated": 2}), RationalValue)
    with pytest.raises(ValueError):
        parse_alpha({"unknown": 1})
    with pytest.raises(ValueError):
        parse_alpha({"rational": [1, 2], "decimal": "1.5"})


def test_alpha_spec_round_trip(golden):
    again = parse_alpha(alpha_to_spec(golden))
    assert isinstance(again, QuadraticValue)
    assert again.value == golden.value
    lv = liouville_truncated(4)
    assert parse_alpha(alpha_to_spec(lv)).value == lv.value
