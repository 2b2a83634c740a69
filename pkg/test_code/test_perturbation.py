"""
test_perturbation.py
────────────────────────────────────────────────────────
- α/β 재귀 급수 vs √ 닫힌형식 vs eigen2 직접 계산
- 꼬리 상계, S(ε) 조립, 1차 따름정리, 절단 인증, 경험적 수렴 반경
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from ghtorus.drivers.eigen2x2 import eigen2
from ghtorus.drivers.loglog import dyadic_windows
from ghtorus.errors import NearSingular, ParameterOutOfRange, ZeroOmega
from ghtorus.services.perturbation import (
    KatoSeries,
    assemble_S_eps,
    binom_half,
    empirical_radius,
    evaluate,
    first_order_corollary,
    growth_of_corrections,
    kato_series,
    measured_tail,
    series_vs_direct,
    sqrt_series,
    tail_bound,
    tail_bound_profile,
    truncation_certificate,
)


def _offdiag(j: int, delta: float = 0.5) -> tuple[float, float, float, float]:
    g = float(j) ** delta
    return 0.0, g, g, 0.0


# =====================================================
# 1️⃣ 재귀 급수
# =====================================================
def test_second_order_offdiag():
    series = kato_series(1.0, (0, 2, 2, 0), 5, 4)
    assert series.sigma1_coeffs[2] == pytest.approx(-0.4)
    assert series.sigma2_coeffs[2] == pytest.approx(0.4)


def test_third_order_general():
    series = kato_series(1.0, (0, 1, 1, 2), 1, 4)
    assert series.sigma1_coeffs[3] == pytest.approx(0.5)
    assert series.sigma2_coeffs[3] == pytest.approx(-0.5)


def test_leading_coefficients():
    series = kato_series(2.0, (0.3, 0.7, -0.4, 1.1), 3, 6)
    assert series.sigma1_coeffs[0] == -6.0
    assert series.sigma2_coeffs[0] == 6.0
    assert series.sigma1_coeffs[1] == 0.3
    assert series.sigma2_coeffs[1] == 1.1


def test_diagonal_symbol_terminates():
    series = kato_series(1.0, (0.5, 0, 0, -0.25), 7, 8)
    assert all(c == 0 for c in series.sigma1_coeffs[2:])
    assert all(c == 0 for c in series.sigma2_coeffs[2:])


def test_eigvec_correction_structure():
    series = kato_series(1.0, (0.3, 0.7, -0.4, 1.1), 3, 5)
    for k in range(1, 6):
        first, second = series.eigvec_correction(1, k)
        assert first == 0
        assert second == series.alpha_coeffs[k - 1]
        first, second = series.eigvec_correction(2, k)
        assert second == 0
    with pytest.raises(ValueError):
        series.eigvec_correction(3, 1)
    with pytest.raises(ValueError):
        series.eigvec_correction(1, 6)


def test_series_rows_shape():
    rows = kato_series(1.0, _offdiag(4), 4, 3).rows()
    assert len(rows) == 8
    assert rows[0] == (4, 1, 0, -4.0, 0.0)


def test_series_argument_errors():
    with pytest.raises(ZeroOmega):
        kato_series(0.0, _offdiag(2), 2, 4)
    with pytest.raises(ParameterOutOfRange):
        kato_series(1.0, _offdiag(2), 2, 0)
    with pytest.raises(ParameterOutOfRange):
        kato_series(1.0, _offdiag(2), 2, 17)
    with pytest.raises(ValueError):
        kato_series(1.0, _offdiag(2), 0, 4)


# =====================================================
# 2️⃣ √ 닫힌형식 / 직접 계산
# =====================================================
def test_binomial_half_coefficients():
    assert binom_half(1) == pytest.approx(0.5)
    assert binom_half(2) == pytest.approx(-0.125)
    assert binom_half(3) == pytest.approx(0.0625)
    assert np.all(np.abs(binom_half(np.arange(1, 30))) <= 0.5)


@pytest.mark.parametrize("j", [1, 10, 100, 1000])
def test_recursion_matches_sqrt_expansion(j):
    entries = _offdiag(j)
    rec = kato_series(1.0, entries, j, 12)
    closed = sqrt_series(1.0, entries[1], j, 12)
    for k in range(13):
        for got, want in ((rec.sigma1_coeffs[k], closed.sigma1_coeffs[k]), (rec.sigma2_coeffs[k], closed.sigma2_coeffs[k])):
            assert abs(got - want) <= 1e-12 * abs(want)
        if k % 2 == 1:
            assert rec.sigma1_coeffs[k] == 0 and rec.sigma2_coeffs[k] == 0


def test_sqrt_series_value():
    series = sqrt_series(1.0, 1.0, 1, 8)
    assert abs(evaluate(series, 0.1)[1] - math.sqrt(1.01)) < 1e-10
    assert sqrt_series(3.0, 0.0, 2, 8).sigma2_coeffs == (6.0,) + (0j,) * 8


@pytest.mark.parametrize("j", [10, 100, 1000])
def test_recursion_matches_direct(j):
    cmp = series_vs_direct(1.0, _offdiag(j), j, 0.05, 8)
    assert cmp.abs_err <= 1e-10


def test_nilpotent_series_is_exact():
    cmp = series_vs_direct(1.0, (0, 0, 3.0, 0), 5, 0.4, 8)
    assert cmp.abs_err == 0.0
    assert cmp.series_vals == (-5.0, 5.0)


def test_triangular_first_order_exact():
    cmp = series_vs_direct(1.0, (0.5, 0, 2.0, -1.5), 4, 0.3, 1)
    assert cmp.abs_err <= 1e-12
    assert cmp.direct_vals[0] == pytest.approx(-4 + 0.15)
    assert cmp.direct_vals[1] == pytest.approx(4 - 0.45)


def test_trace_and_determinant_conservation():
    a, b, c, d = 0.3, 0.7, -0.4, 1.1
    j, eps = 3, 0.05
    s1, s2 = evaluate(kato_series(1.0, (a, b, c, d), j, 8), eps)
    assert abs((s1 + s2) - eps * (a + d)) <= 1e-12
    det = (-j + eps * a) * (j + eps * d) - eps * eps * b * c
    assert abs(s1 * s2 - det) <= 1e-10


def test_growth_of_corrections():
    js = np.unique(np.geomspace(16, 4096, 24).astype(int))
    for k in (1, 3):
        slope = growth_of_corrections(1.0, _offdiag, js, k)
        assert slope <= k * (0.5 - 1.0) + 0.1


# =====================================================
# 3️⃣ 꼬리 상계
# =====================================================
def test_tail_bound_eta_boundary():
    with pytest.raises(ParameterOutOfRange):
        tail_bound(0.5, 1.0, 1.0, 100, 1, 0.1)


def test_tail_bound_value():
    assert tail_bound(0.5, 1.0, 1.0, 100, 2, 0.1) == pytest.approx(1.0 / 9600)
    prof = tail_bound_profile(0.5, 1.0, 1.0, 2)
    assert prof.eta == 1.0
    assert prof.epsilon0 == 0.5


def test_tail_bound_preconditions():
    with pytest.raises(ParameterOutOfRange):
        tail_bound(0.5, 1.0, 1.0, 100, 2, 0.5)
    with pytest.raises(ParameterOutOfRange):
        tail_bound_profile(1.0, 1.0, 1.0, 2)
    with pytest.raises(ParameterOutOfRange):
        tail_bound_profile(0.5, 0.0, 1.0, 2)
    with pytest.raises(ZeroOmega):
        tail_bound_profile(0.5, 1.0, 0.0, 2)


def test_measured_tail_value():
    tail = measured_tail(1.0, 10.0, 100, 0.1, 2)
    assert tail == pytest.approx(6.25e-12, rel=1e-3)
    assert tail <= tail_bound(0.5, 1.0, 1.0, 100, 2, 0.1)


def test_tail_domination_grid():
    prof = tail_bound_profile(0.5, 1.0, 1.0, 2)
    for j in np.geomspace(10, 10_000, 10).astype(int):
        for eps in np.linspace(0.01, 0.49, 10):
            tail = measured_tail(1.0, math.sqrt(j), int(j), float(eps), 2)
            assert tail <= prof.bound_value(int(j), float(eps))


# =====================================================
# 4️⃣ S(ε) 조립
# =====================================================
def test_assemble_identity_without_coupling():
    asm = assemble_S_eps(kato_series(1.0, (0, 0, 0, 0), 5, 8), 0.5)
    assert np.array_equal(asm.S, np.eye(2))
    assert asm.det_margin == 1.0


def test_assemble_matches_eigenvectors():
    j, eps = 100, 0.05
    asm = assemble_S_eps(kato_series(1.0, _offdiag(j), j, 8), eps)
    assert asm.S[1, 0] == pytest.approx(-0.0025, abs=1e-7)
    assert asm.S[0, 1] == pytest.approx(0.0025, abs=1e-7)
    assert asm.det_margin == pytest.approx(1.0 + 6.25e-6, abs=1e-9)
    ref = eigen2(np.array([[-j, eps * 10.0], [eps * 10.0, j]]))
    assert np.allclose(asm.S, ref.S, atol=1e-12)


def test_assemble_near_singular():
    series = KatoSeries(1, 1, (-1, 0), (1, 0), alpha_coeffs=(1 + 0j,), beta_coeffs=(1 + 0j,))
    with pytest.raises(NearSingular):
        assemble_S_eps(series, 0.9999999)


def test_assemble_rejects_large_eps_and_sqrt_series():
    with pytest.raises(ParameterOutOfRange):
        assemble_S_eps(kato_series(1.0, _offdiag(4), 4, 4), 1.0)
    with pytest.raises(ParameterOutOfRange):
        assemble_S_eps(sqrt_series(1.0, 2.0, 4, 4), 0.1)


# =====================================================
# 5️⃣ 보조 결과
# =====================================================
def test_first_order_corollary():
    cor = first_order_corollary(0.25)
    assert (cor.N, cor.eta) == (1, 0.5)
    assert cor.applies(0.3)
    assert not cor.applies(0.6)
    with pytest.raises(ParameterOutOfRange):
        first_order_corollary(0.5)


def test_truncation_certificate():
    cert = truncation_certificate(1.0, 1.0, 0.5, 0.1, 2, dyadic_windows(16, 4095))
    assert cert.eta == 1.0
    assert cert.theta1 == pytest.approx(0.0, abs=1e-6)
    assert cert.theta2 == pytest.approx(2.0, abs=0.05)
    assert cert.sufficient
    with pytest.raises(ParameterOutOfRange):
        truncation_certificate(1.0, 1.0, 0.5, 0.6, 2, dyadic_windows(16, 4095))


def test_empirical_radius():
    r_small = empirical_radius(1.0, _offdiag(10), 10, 8)
    assert 0.05 < r_small < 0.99
    assert series_vs_direct(1.0, _offdiag(10), 10, r_small, 8).abs_err <= 1e-10
    assert empirical_radius(1.0, _offdiag(1000), 1000, 8) == 0.99
