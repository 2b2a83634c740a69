"""
services/perturbation.py
────────────────────────────────────────────────────────
- (Service Layer) Q_j(ε) = ωD_j + εR_j 고유값 섭동 급수
- 구성
  • kato_series        : α/β 재귀 → σ¹_k, σ²_k (k = 0..K)
  • sqrt_series        : 대칭 비대각 (a = d = 0, b = c = γ) 닫힌형식 √ 전개 (짝수 차수만)
  • tail_bound         : 꼬리합 상계 (|ω| / (3·2^{2N+1}))·j^{-η}
  • assemble_S_eps     : S_j(ε) = [[1, Σβε^k], [Σαε^k, 1]] + 행렬식 여유
  • series_vs_direct   : 절단 급수 vs eigen2 직접 계산
  • truncation_certificate / first_order_corollary / empirical_radius

재귀 (v¹ = (1, A), v² = (B, 1), A = Σα_kε^k, B = Σβ_kε^k)
  α_1 = -c/(2ωj),  α_k = ((a−d)·α_{k-1} + b·Σ_{i+l=k-1} α_iα_l) / (2ωj)
  β_1 =  b/(2ωj),  β_k = ((a−d)·β_{k-1} − c·Σ_{i+l=k-1} β_iβ_l) / (2ωj)
  σ¹_0 = -ωj, σ¹_1 = a, σ¹_k = b·α_{k-1}
  σ²_0 = +ωj, σ²_1 = d, σ²_k = c·β_{k-1}

!! 주의 사항 !!
- β 재귀의 c 항 부호는 고유방정식에서 직접 유도한 것 (k ≥ 2 에서 σ¹_k + σ²_k = 0 로 검증)
- 급수 평가는 math.fsum (실부/허부 분리) → 부호가 번갈아도 상쇄 오차 없음
- |ε| < 1 에서만 S(ε) 조립
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import binom

from config import NEAR_SINGULAR, SERIES_ORDER, SERIES_ORDER_MAX
from ghtorus.drivers.eigen2x2 import eigen_batch
from ghtorus.drivers.loglog import fit_loglog
from ghtorus.errors import Defective, NearSingular, ParameterOutOfRange, ZeroOmega
from ghtorus.services.diophantine import EigenTrack, diophantine_fit, split_ells

log = logging.getLogger(__name__)

Entries = tuple[complex, complex, complex, complex]


# =====================================================
# 1️⃣ 급수 타입
# =====================================================
@dataclass(frozen=True)
class KatoSeries:
    j: int
    K: int
    sigma1_coeffs: tuple[complex, ...]
    sigma2_coeffs: tuple[complex, ...]
    alpha_coeffs: tuple[complex, ...] = ()
    beta_coeffs: tuple[complex, ...] = ()
    source: str = "recursion"

    def eigvec_correction(self, m: int, k: int) -> tuple[complex, complex]:
        """v¹_k = (0, α_k),  v²_k = (β_k, 0)."""
        if not 1 <= k <= len(self.alpha_coeffs):
            raise ValueError("k 는 1..K 범위여야 합니다.")
        if m == 1:
            return 0j, self.alpha_coeffs[k - 1]
        if m == 2:
            return self.beta_coeffs[k - 1], 0j
        raise ValueError("m 은 1 또는 2 여야 합니다.")

    def rows(self) -> list[tuple[int, int, int, float, float]]:
        """CSV 덤프 행 (j, m, k, re, im)."""
        out = []
        for m, coeffs in ((1, self.sigma1_coeffs), (2, self.sigma2_coeffs)):
            for k, c in enumerate(coeffs):
                out.append((self.j, m, k, c.real, c.imag))
        return out


def _check_common(omega: complex, j: int, K: int) -> complex:
    w = complex(omega)
    if w == 0:
        raise ZeroOmega("ω = 0 이면 Q_j(0) 의 고유값이 겹칩니다.", j=j)
    if j < 1:
        raise ValueError("j 는 1 이상이어야 합니다.")
    if not 1 <= K <= SERIES_ORDER_MAX:
        raise ParameterOutOfRange(f"K 는 1..{SERIES_ORDER_MAX} 범위여야 합니다: K={K}", j=j)
    return w


def _convolution(coeffs: Sequence[complex], total: int) -> complex:
    """Σ_{i+l=total, i,l ≥ 1} c_i c_l  (coeffs[0] = c_1)."""
    return sum((coeffs[i - 1] * coeffs[total - i - 1] for i in range(1, total)), 0j)


def kato_series(omega: complex, R_entries: Entries, j: int, K: int = SERIES_ORDER) -> KatoSeries:
    """재귀로 σ^m_k (k ≤ K), α_k, β_k (k ≤ K) 계산."""
    w = _check_common(omega, j, K)
    a, b, c, d = (complex(x) for x in R_entries)
    two = 2.0 * w * j
    alpha: list[complex] = [-c / two]
    beta: list[complex] = [b / two]
    for k in range(2, K + 1):
        alpha.append(((a - d) * alpha[-1] + b * _convolution(alpha, k - 1)) / two)
        beta.append(((a - d) * beta[-1] - c * _convolution(beta, k - 1)) / two)
    s1 = [-w * j, a] + [b * alpha[k - 2] for k in range(2, K + 1)]
    s2 = [w * j, d] + [c * beta[k - 2] for k in range(2, K + 1)]
    return KatoSeries(j, K, tuple(s1), tuple(s2), tuple(alpha), tuple(beta))


def binom_half(k: int | np.ndarray) -> float | np.ndarray:
    """a_k = binom(1/2, k)."""
    return binom(0.5, k)


def sqrt_series(omega: complex, gamma_j: float, j: int, K: int = SERIES_ORDER) -> KatoSeries:
    """σ^m(ε) = (−1)^m ωj + Σ_k (−1)^{m(2k−1)} a_k γ^{2k}/(ωj)^{2k−1} ε^{2k}  (짝수 차수만)."""
    w = _check_common(omega, j, K)
    wj = w * j
    g2 = complex(gamma_j) ** 2
    s1 = [0j] * (K + 1)
    s2 = [0j] * (K + 1)
    s1[0], s2[0] = -wj, wj
    for k in range(1, K // 2 + 1):
        coef = complex(binom_half(k)) * g2 ** k / wj ** (2 * k - 1)
        s1[2 * k] = -coef
        s2[2 * k] = coef
    return KatoSeries(j, K, tuple(s1), tuple(s2), source="sqrt")


def _fsum_complex(terms: Sequence[complex]) -> complex:
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


def _power_sum(coeffs: Sequence[complex], eps: complex, start: int = 0) -> complex:
    e = complex(eps)
    return _fsum_complex([c * e ** (k + start) for k, c in enumerate(coeffs)])


def evaluate(series: KatoSeries, eps: complex) -> tuple[complex, complex]:
    """절단 급수 (σ¹(ε), σ²(ε))."""
    return _power_sum(series.sigma1_coeffs, eps), _power_sum(series.sigma2_coeffs, eps)


# =====================================================
# 2️⃣ 꼬리 상계
# =====================================================
@dataclass(frozen=True)
class TailBound:
    eta: float
    epsilon0: float
    N: int
    j0: int
    omega_abs: float

    def bound_value(self, j: int | np.ndarray, eps: float) -> float | np.ndarray:
        if abs(eps) >= self.epsilon0:
            raise ParameterOutOfRange(f"|ε|={abs(eps)} ≥ ε0={self.epsilon0}")
        return self.omega_abs / (3.0 * 2.0 ** (2 * self.N + 1)) * np.asarray(j, dtype=float) ** (-self.eta)

    def to_dict(self) -> dict:
        return {"eta": self.eta, "epsilon0": self.epsilon0, "N": self.N, "j0": self.j0}


def tail_bound_profile(delta: float, C_gamma: float, omega: complex, N: int, *, j0: int = 1) -> TailBound:
    if delta >= 1:
        raise ParameterOutOfRange(f"δ={delta} 는 1 보다 작아야 합니다.")
    if C_gamma <= 0:
        raise ParameterOutOfRange("C_γ 는 양수여야 합니다.")
    if N < 1:
        raise ParameterOutOfRange("N 은 1 이상이어야 합니다.")
    eta = -(2 * N * (delta - 1) + 1)
    if eta <= 0:
        raise ParameterOutOfRange(f"η = {eta:g} ≤ 0 입니다 (δ={delta}, N={N}). N 을 늘리세요.")
    w = abs(complex(omega))
    if w == 0:
        raise ZeroOmega("ω = 0 에는 꼬리 상계가 없습니다.")
    return TailBound(eta, w / (2.0 * C_gamma), N, j0, w)


def tail_bound(delta: float, C_gamma: float, omega: complex, j: int, N: int, eps: float) -> float:
    """Σ_{k>N} |γ^{2k}/(ωj)^{2k−1} a_k ε^{2k}| 의 상계 (|ω|/(3·2^{2N+1}))·j^{-η}."""
    return float(tail_bound_profile(delta, C_gamma, omega, N).bound_value(j, eps))


def measured_tail(omega: complex, gamma_j: float, j: int, eps: float, N: int, *, k_max: int = 400) -> float:
    """실제 꼬리합 Σ_{k=N+1}^{k_max} |항| (로그 공간에서 계산)."""
    ks = np.arange(N + 1, k_max + 1)
    if gamma_j == 0 or eps == 0:
        return 0.0
    logs = (
        2 * ks * math.log(abs(gamma_j))
        - (2 * ks - 1) * math.log(abs(complex(omega)) * j)
        + np.log(np.abs(binom_half(ks)))
        + 2 * ks * math.log(abs(eps))
    )
    return math.fsum(np.exp(logs[logs > -745.0]).tolist())


# =====================================================
# 3️⃣ S(ε) 조립 / 직접 계산 비교
# =====================================================
@dataclass(frozen=True)
class SAssembly:
    S: np.ndarray
    det_margin: float


def assemble_S_eps(series: KatoSeries, eps: complex) -> SAssembly:
    if not series.alpha_coeffs:
        raise ParameterOutOfRange("고유벡터 계수가 없는 급수입니다 (kato_series 결과가 필요).", j=series.j)
    if abs(eps) >= 1:
        raise ParameterOutOfRange(f"|ε| < 1 이어야 합니다: ε={eps}", j=series.j)
    A = _power_sum(series.alpha_coeffs, eps, start=1)
    B = _power_sum(series.beta_coeffs, eps, start=1)
    S = np.array([[1.0, B], [A, 1.0]], dtype=complex)
    margin = abs(1.0 - A * B)
    if margin < NEAR_SINGULAR:
        raise NearSingular(f"det S(ε) 여유 {margin:.3e} < {NEAR_SINGULAR:g}", j=series.j)
    return SAssembly(S, float(margin))


@dataclass(frozen=True)
class SeriesComparison:
    series_vals: tuple[complex, complex]
    direct_vals: tuple[complex, complex]
    abs_err: float
    per_label: tuple[float, float] = field(default=(0.0, 0.0))


def direct_eigenvalues(omega: complex, R_entries: Entries, j: int, eps: complex) -> tuple[complex, complex]:
    """eigen2(ωD_j + εR_j), 1차 선형화 (−ωj + aε, ωj + dε) 에 맞춰 라벨링."""
    a, b, c, d = (complex(x) for x in R_entries)
    w = complex(omega)
    e = complex(eps)
    M = np.array([[[-w * j + e * a, e * b], [e * c, w * j + e * d]]], dtype=complex)
    ref = np.array([[-w * j + e * a, w * j + e * d]], dtype=complex)
    vals, _, _, bad = eigen_batch(M, reference=ref)
    if bad[0]:
        raise Defective(f"ωD_j + εR_j 가 결손입니다 (j={j}, ε={eps}).", j=j)
    return complex(vals[0, 0]), complex(vals[0, 1])


def series_vs_direct(omega: complex, R_entries: Entries, j: int, eps: complex, K: int = SERIES_ORDER) -> SeriesComparison:
    series = kato_series(omega, R_entries, j, K)
    s_vals = evaluate(series, eps)
    d_vals = direct_eigenvalues(omega, R_entries, j, eps)
    errs = (abs(s_vals[0] - d_vals[0]), abs(s_vals[1] - d_vals[1]))
    return SeriesComparison(s_vals, d_vals, max(errs), errs)


# =====================================================
# 4️⃣ 보조 결과
# =====================================================
@dataclass(frozen=True)
class FirstOrderCorollary:
    N: int
    eta: float

    def applies(self, theta: float) -> bool:
        """섭동 없는 θ 가 η 보다 작으면 GH 유지."""
        return 0 < theta < self.eta


def first_order_corollary(delta: float) -> FirstOrderCorollary:
    """δ < 1/2 → N = 1, η = 1 − 2δ (보정항 없이 원래 디오판토스 조건으로 충분)."""
    if not 0 <= delta < 0.5:
        raise ParameterOutOfRange(f"δ={delta} 는 [0, 1/2) 범위여야 합니다.")
    return FirstOrderCorollary(1, 1.0 - 2.0 * delta)


def truncated_sqrt_track(omega: complex, C_gamma: float, delta: float, eps: float, N: int, max_probed: int) -> EigenTrack:
    """σ^{m,N}_j(ε) = (−1)^m ωj + Σ_{k≤N} (−1)^{m(2k−1)} a_k γ_j^{2k}/(ωj)^{2k−1} ε^{2k},  γ_j = C j^δ."""
    w = complex(omega)

    def gen(ells: np.ndarray) -> np.ndarray:
        js, ms = split_ells(ells)
        jf = js.astype(float)
        sign = np.where(ms == 1, -1.0, 1.0)
        g2 = (C_gamma * jf ** delta) ** 2
        total = w * jf
        for k in range(1, N + 1):
            total = total + binom_half(k) * g2 ** k / (w * jf) ** (2 * k - 1) * eps ** (2 * k)
        return sign * total

    return EigenTrack.from_function(gen, max_probed, description=f"truncated sqrt N={N}")


@dataclass(frozen=True)
class TruncationCertificate:
    C1: float
    theta1: float
    theta2: float
    eta: float
    sufficient: bool

    def to_dict(self) -> dict:
        return {
            "C1": self.C1,
            "theta1": self.theta1,
            "theta2": self.theta2,
            "eta": self.eta,
            "sufficient": self.sufficient,
        }


def truncation_certificate(
    omega: complex,
    C_gamma: float,
    delta: float,
    eps: float,
    N: int,
    ell_windows: Sequence[tuple[int, int]],
) -> TruncationCertificate:
    """
    절단 트랙의 포락선 (C1, θ1) 과 꼬리 감쇠 지수 θ2 비교.
    θ2 > θ1 이면 절단 트랙의 GH 가 전체 연산자로 이전됨.
    """
    profile = tail_bound_profile(delta, C_gamma, omega, N)
    if abs(eps) >= profile.epsilon0:
        raise ParameterOutOfRange(f"|ε|={abs(eps)} ≥ ε0={profile.epsilon0}")
    top = ell_windows[-1][1] - 1
    fit = diophantine_fit(truncated_sqrt_track(omega, C_gamma, delta, eps, N, top), ell_windows)
    js = np.unique((np.geomspace(max(2, ell_windows[0][0] // 2), max(4, top // 2), 24)).astype(np.int64))
    tails = np.array([measured_tail(omega, C_gamma * float(j) ** delta, int(j), eps, N) for j in js])
    theta2 = -fit_loglog(js, tails).slope
    log.info("[Series] truncation θ1=%.4f θ2=%.4f η=%.4f", fit.theta, theta2, profile.eta)
    return TruncationCertificate(fit.C, fit.theta, float(theta2), profile.eta, bool(theta2 > fit.theta))


def empirical_radius(
    omega: complex,
    R_entries: Entries,
    j: int,
    K: int = SERIES_ORDER,
    tol: float = 1e-10,
    *,
    eps_max: float = 0.99,
    iters: int = 48,
) -> float:
    """series_vs_direct 오차가 tol 이하로 유지되는 최대 실수 ε (이분법, 경험값)."""

    def ok(eps: float) -> bool:
        try:
            return series_vs_direct(omega, R_entries, j, eps, K).abs_err <= tol
        except Defective:
            return False

    if ok(eps_max):
        return eps_max
    lo, hi = 0.0, eps_max
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    log.debug("[Series] empirical radius j=%d K=%d → %.6g", j, K, lo)
    return lo


def growth_of_corrections(omega: complex, entries_at: Callable[[int], Entries], js: Sequence[int], k: int, K: int = SERIES_ORDER) -> float:
    """log|α_{j,k}| vs log j 기울기."""
    mags = [abs(kato_series(omega, entries_at(int(j)), int(j), K).alpha_coeffs[k - 1]) for j in js]
    return fit_loglog(np.asarray(js, dtype=float), np.asarray(mags)).slope
