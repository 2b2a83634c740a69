"""
drivers/trig.py
────────────────────────────────────────────────────────
- (Driver Layer) t ∈ T 위 삼각다항식 유틸
- 계수 배열 규약: 마지막 축 길이 2N+1, 인덱스 i ↔ 모드 n = i - N
- FFT 기반 격자 평가 / 역변환, 스펙트럴 미분, 임의 점 평가
- 복합 Gauss–Legendre 구적 (적분 공식 경로에서 사용)

!! 주의 사항 !!
- 격자 크기 G 는 2N+1 이상이어야 앨리어싱이 없음
- 격자점 t_k = 2πk/G, k = 0..G-1
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import roots_legendre


def n_modes(coeffs: np.ndarray) -> int:
    """계수 배열의 N (마지막 축 = 2N+1)."""
    size = coeffs.shape[-1]
    if size % 2 != 1:
        raise ValueError("t-모드 배열 길이는 홀수(2N+1)여야 합니다.")
    return (size - 1) // 2


def mode_numbers(N: int) -> np.ndarray:
    return np.arange(-N, N + 1)


def grid(G: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(G) / G


def eval_on_grid(coeffs: np.ndarray, G: int) -> np.ndarray:
    """계수 → 격자 표본 c(t_k). 앞쪽 축은 그대로 유지."""
    N = n_modes(coeffs)
    if G < 2 * N + 1:
        raise ValueError("격자 크기가 모드 수보다 작습니다.")
    buf = np.zeros(coeffs.shape[:-1] + (G,), dtype=complex)
    buf[..., mode_numbers(N) % G] = coeffs
    return np.fft.ifft(buf, axis=-1) * G


def modes_from_grid(samples: np.ndarray, N: int) -> np.ndarray:
    """격자 표본 → 모드 -N..N 계수 (대역 제한 가정)."""
    G = samples.shape[-1]
    if G < 2 * N + 1:
        raise ValueError("격자 크기가 모드 수보다 작습니다.")
    spec = np.fft.fft(samples, axis=-1) / G
    return spec[..., mode_numbers(N) % G]


def derivative(coeffs: np.ndarray, alpha: int) -> np.ndarray:
    """∂_t^α : 모드 n 에 (in)^α 곱."""
    if alpha == 0:
        return np.asarray(coeffs, dtype=complex)
    n = mode_numbers(n_modes(coeffs))
    return coeffs * (1j * n) ** alpha


def eval_at(coeffs: np.ndarray, t: np.ndarray) -> np.ndarray:
    """임의 점 t 에서 Σ c_n e^{int} (1차원 계수만)."""
    n = mode_numbers(n_modes(coeffs))
    phase = np.exp(1j * np.outer(np.asarray(t, dtype=float), n))
    return phase @ coeffs


def max_norm_on_grid(coeffs: np.ndarray, alpha: int = 0) -> float:
    """
    max_t ‖∂_t^α c(t)‖ 를 4N+1 격자에서 근사.
    coeffs 모양 (d, 2N+1) → 성분별 유클리드 노름의 최대값.
    """
    arr = np.atleast_2d(coeffs)
    N = n_modes(arr)
    if N == 0:
        d = derivative(arr, alpha)[..., 0]
        return float(np.linalg.norm(d))
    samples = eval_on_grid(derivative(arr, alpha), 4 * N + 1)
    return float(np.max(np.linalg.norm(samples, axis=0)))


def gauss_legendre_panels(a: float, b: float, panels: int, order: int = 20) -> tuple[np.ndarray, np.ndarray]:
    """[a, b] 를 panels 등분한 복합 Gauss–Legendre 노드/가중치."""
    x, w = roots_legendre(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def panels_for(freq: float, length: float = 2.0 * math.pi, per_panel: float = 6.0) -> int:
    """진동수 freq 를 분해하는 데 필요한 패널 수 (패널당 위상 변화 ≤ per_panel)."""
    return max(4, int(math.ceil(freq * length / per_panel)) + 1)
