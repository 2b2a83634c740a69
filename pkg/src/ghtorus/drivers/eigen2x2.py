"""
drivers/eigen2x2.py
────────────────────────────────────────────────────────
- (Driver Layer) 2x2 복소 행렬 닫힌형식 고유분해 (배치/단일)
- 특성다항식 근: 안정적 이차공식 (큰 근 m ± s 를 먼저, 작은 근은 det/큰 근)
- 고유벡터: (b, λ−a) 와 (λ−d, c) 중 큰 쪽 → 최대 성분 1 로 정규화
- 결손 판정: |(a−d)² + 4bc| < tol·(1 + ‖M‖²) 이고 대각행렬이 아닐 때

!! 주의 사항 !!
- eigen2() 는 결손이어도 예외를 던지지 않고 defective=True 로 돌려줌
  → 호출 측에서 EigenPair2.require() 로 분기
- 정렬 규약(ε 무관 호출): σ¹ = 실수부가 작은 쪽, 같으면 허수부가 작은 쪽
- ε 연속 라벨이 필요하면 label_by_reference() 로 기준값에 맞춰 재배열
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from config import EIG_TOL
from ghtorus.errors import Defective


@dataclass(frozen=True)
class EigenPair2:
    eigenvalues: tuple[complex, complex]
    S: np.ndarray
    S_inv: np.ndarray
    defective: bool

    def require(self, *, j: Optional[int] = None) -> "EigenPair2":
        if self.defective:
            raise Defective(f"결손(Jordan) 모드입니다 (j={j}).", j=j)
        return self

    def diag(self) -> np.ndarray:
        return np.diag(np.asarray(self.eigenvalues, dtype=complex))


# =====================================================
# 1️⃣ 배치 고유값
# =====================================================
def _split(M: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    return M[..., 0, 0], M[..., 0, 1], M[..., 1, 0], M[..., 1, 1]


def eigvals_batch(M: np.ndarray) -> np.ndarray:
    """(n, 2, 2) → (n, 2) 고유값, 실수부 → 허수부 순 정렬."""
    a, b, c, d = _split(np.asarray(M, dtype=complex))
    m = 0.5 * (a + d)
    h = 0.5 * (a - d)
    s = np.sqrt(h * h + b * c)
    det = a * d - b * c
    plus = m + s
    minus = m - s
    use_plus = np.abs(plus) >= np.abs(minus)
    big = np.where(use_plus, plus, minus)
    with np.errstate(divide="ignore", invalid="ignore"):
        small = np.where(big != 0, det / np.where(big != 0, big, 1.0), 0.0)
    out = np.stack([big, small], axis=-1)
    # 삼각행렬: 대각 성분이 정확한 고유값
    tri = (b == 0) | (c == 0)
    if np.any(tri):
        out = np.where(tri[..., None], np.stack([a, d], axis=-1), out)
    return sort_pairs(out)


def sort_pairs(vals: np.ndarray) -> np.ndarray:
    v0, v1 = vals[..., 0], vals[..., 1]
    swap = (v0.real > v1.real) | ((v0.real == v1.real) & (v0.imag > v1.imag))
    return np.where(swap[..., None], vals[..., ::-1], vals)


def label_by_reference(vals: np.ndarray, ref: np.ndarray) -> np.ndarray:
    """각 행을 기준값 ref 에 가장 가깝게 (σ¹, σ²) 순서로 재배열."""
    return np.where(_swap_mask(vals, ref)[..., None], vals[..., ::-1], vals)


def _swap_mask(vals: np.ndarray, ref: np.ndarray) -> np.ndarray:
    keep = np.abs(vals[..., 0] - ref[..., 0]) + np.abs(vals[..., 1] - ref[..., 1])
    swap = np.abs(vals[..., 0] - ref[..., 1]) + np.abs(vals[..., 1] - ref[..., 0])
    return swap < keep


# =====================================================
# 2️⃣ 배치 고유분해
# =====================================================
def _eigvec_columns(M: np.ndarray, vals: np.ndarray) -> np.ndarray:
    a, b, c, d = _split(M)
    cols = []
    for k in range(2):
        lam = vals[..., k]
        v1 = np.stack([b, lam - a], axis=-1)
        v2 = np.stack([lam - d, c], axis=-1)
        n1 = np.abs(v1).max(axis=-1)
        n2 = np.abs(v2).max(axis=-1)
        v = np.where((n1 >= n2)[..., None], v1, v2)
        cols.append(v)
    S = np.stack(cols, axis=-1)
    # 대각(b = c = 0) 행렬: 고유벡터는 좌표축
    diag_mask = (b == 0) & (c == 0)
    if np.any(diag_mask):
        eye = np.eye(2, dtype=complex)
        flip = np.array([[0, 1], [1, 0]], dtype=complex)
        on_first = np.abs(vals[..., 0] - a) <= np.abs(vals[..., 0] - d)
        base = np.where(on_first[..., None, None], eye, flip)
        S = np.where(diag_mask[..., None, None], base, S)
    return S


def normalize_columns(S: np.ndarray) -> np.ndarray:
    idx = np.abs(S).argmax(axis=-2)                      # (n, 2)
    pivot = np.take_along_axis(S, idx[..., None, :], axis=-2)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(pivot != 0, S / np.where(pivot != 0, pivot, 1.0), S)


def inv2(S: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a, b, c, d = _split(S)
    det = a * d - b * c
    inv = np.empty_like(S)
    with np.errstate(divide="ignore", invalid="ignore"):
        inv[..., 0, 0] = d / det
        inv[..., 0, 1] = -b / det
        inv[..., 1, 0] = -c / det
        inv[..., 1, 1] = a / det
    return inv, det


def eigen_batch(M: np.ndarray, tol: float = EIG_TOL, reference: Optional[np.ndarray] = None) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    (n, 2, 2) 배치 분해.
    Returns: (eigvals (n,2), S (n,2,2), S_inv (n,2,2), defective (n,))
    reference 가 주어지면 그 값에 맞춰 라벨(열 순서) 재배열.
    """
    if tol <= 0:
        raise ValueError("tol 은 양수여야 합니다.")
    Mc = np.asarray(M, dtype=complex)
    vals = eigvals_batch(Mc)
    if reference is not None:
        vals = label_by_reference(vals, np.asarray(reference, dtype=complex))
    a, b, c, d = _split(Mc)
    disc = (a - d) ** 2 + 4.0 * b * c
    norm = np.abs(Mc).max(axis=(-2, -1))
    is_diag = (b == 0) & (c == 0)
    defective = (np.abs(disc) < tol * (1.0 + norm ** 2)) & ~is_diag
    S = normalize_columns(_eigvec_columns(Mc, vals))
    S_inv, det = inv2(S)
    bad = defective | (np.abs(det) == 0)
    if np.any(bad):
        S_inv = np.where(bad[..., None, None], np.nan, S_inv)
    return vals, S, S_inv, bad


# =====================================================
# 3️⃣ 단일 행렬 API
# =====================================================
def eigen2(M: np.ndarray, tol: float = EIG_TOL) -> EigenPair2:
    """2x2 닫힌형식 고유분해. 결손이면 defective=True."""
    vals, S, S_inv, bad = eigen_batch(np.asarray(M, dtype=complex)[None, ...], tol)
    return EigenPair2(
        (complex(vals[0, 0]), complex(vals[0, 1])),
        S[0],
        S_inv[0],
        bool(bad[0]),
    )


if __name__ == "__main__":
    print(eigen2(np.array([[-1, 1], [1, 1]])))
    print(eigen2(np.array([[0, 1], [0, 0]])).defective)
