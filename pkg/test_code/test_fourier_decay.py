"""
test_fourier_decay.py
────────────────────────────────────────────────────────
- 소볼레프 꼬리합 / 레벨 크기 (스펙트럴 미분) / 감쇠 분류
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from ghtorus.errors import ParameterOutOfRange
from ghtorus.services.fourier_decay import (
    DecayClass,
    classify_decay,
    level_magnitudes,
    sobolev_tail,
)
from ghtorus.drivers.symbols import CoeffTable


def _table(max_j: int, fn) -> CoeffTable:
    return CoeffTable(max_j, {j: np.array([fn(j), 0.0]) for j in range(1, max_j + 1)})


def _phase_table(max_j: int) -> CoeffTable:
    """c_j(t) = e^{-ijt} 를 첫 성분에 (τ_j = j)."""
    levels = {}
    for j in range(1, max_j + 1):
        arr = np.zeros((2, 2 * j + 1), dtype=complex)
        arr[0, 0] = 1.0   # 인덱스 0 ↔ 모드 n = -j
        levels[j] = arr
    return CoeffTable(max_j, levels)


# -----------------------------------------------------
# sobolev_tail
# -----------------------------------------------------
def test_sobolev_tail_zeta4():
    u = _table(10_000, lambda j: j ** -2.0)
    assert abs(sobolev_tail(u, 0.0, 10_000) - math.pi ** 4 / 90) <= 1e-3


def test_sobolev_tail_single_term():
    u = CoeffTable(8, {5: np.array([1.0, 0.0])})
    assert sobolev_tail(u, 3.0, 8) == pytest.approx(15625.0)
    assert sobolev_tail(u, 3.0, 4) == 0.0


@pytest.mark.parametrize("s", [-2.0, 0.0, 5.0])
def test_sobolev_tail_zero(s):
    assert sobolev_tail(CoeffTable(16, {}), s, 16) == 0.0


def test_sobolev_tail_beyond_table():
    with pytest.raises(ParameterOutOfRange):
        sobolev_tail(_table(8, lambda j: 1.0), 0.0, 9)


def test_super_decay_tail_is_cauchy():
    u = _table(200, lambda j: math.exp(-j))
    assert classify_decay(u).decay_class is DecayClass.SUPER
    for s in (-10.0, 0.0, 10.0):
        assert math.isclose(sobolev_tail(u, s, 150), sobolev_tail(u, s, 200), rel_tol=1e-12)


# -----------------------------------------------------
# level_magnitudes
# -----------------------------------------------------
def test_spectral_derivative_magnitude():
    js, mags = level_magnitudes(_phase_table(8), alpha_max=2)
    assert list(js) == list(range(1, 9))
    assert np.allclose(mags, js.astype(float) ** 2, rtol=1e-9)


def test_level_magnitudes_rejects_negative_alpha():
    with pytest.raises(ValueError):
        level_magnitudes(_table(4, lambda j: 1.0), alpha_max=-1)


# -----------------------------------------------------
# classify_decay
# -----------------------------------------------------
def test_exponential_is_super():
    verdict = classify_decay(_table(200, lambda j: math.exp(-j)))
    assert verdict.decay_class is DecayClass.SUPER
    # max_j = 200 이므로 [256, ...) 이후 윈도우는 평가하지 않음
    assert [(w.lo, w.hi) for w in verdict.window_slopes] == [(16, 32), (32, 64), (64, 128), (128, 201)]


def test_identically_zero_is_super():
    verdict = classify_decay(CoeffTable(64, {}))
    assert verdict.decay_class is DecayClass.SUPER
    assert verdict.evidence == "identically zero"
    assert verdict.fitted_slope == -math.inf


def test_unit_modulus_is_polynomial():
    verdict = classify_decay(_phase_table(64))
    assert verdict.decay_class is DecayClass.POLYNOMIAL
    assert abs(verdict.fitted_slope) <= 1e-9


def test_cubic_growth_slope():
    verdict = classify_decay(_table(4096, lambda j: float(j) ** 3))
    assert verdict.decay_class is DecayClass.POLYNOMIAL
    assert verdict.fitted_slope == pytest.approx(3.0, abs=0.01)


def test_fast_growth_is_unbounded():
    verdict = classify_decay(_table(1024, lambda j: float(j) ** 10))
    assert verdict.decay_class is DecayClass.UNBOUNDED


def test_scaling_leaves_class_and_slopes():
    base = _table(1024, lambda j: float(j) ** 1.5)
    scaled = base.scaled(3.7j)
    v0, v1 = classify_decay(base), classify_decay(scaled)
    assert v0.decay_class is v1.decay_class
    for w0, w1 in zip(v0.window_slopes, v1.window_slopes):
        assert w0.slope == pytest.approx(w1.slope, abs=1e-9)


def test_rejects_overlapping_windows():
    with pytest.raises(ValueError):
        classify_decay(_table(64, lambda j: 1.0), windows=[(16, 32), (24, 48)])


def test_verdict_json_shape():
    doc = classify_decay(_table(64, lambda j: 1.0)).to_dict()
    assert set(doc) == {"class", "fitted_slope", "windows", "evidence"}
    assert doc["class"] == "PolynomialGrowth"
    assert {"lo", "hi", "slope"} == set(doc["windows"][0])
