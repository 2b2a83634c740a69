"""
services/diagonalizer.py
────────────────────────────────────────────────────────
- (Service Layer) 모드별 Q_j = ωD_j + εR_j 대각화 + 강한 대각화 가능성 검사
- 제공 기능
  • eigen2 / EigenPair2      : drivers/eigen2x2 재노출
  • closed_form_noncomm      : 비가환 닫힌형식 (ω 실수 / ω 순허수)
  • strong_diag_profile      : ‖S_j‖, ‖S_j⁻¹‖ 의 log-log 성장 적합
  • simultaneous_shift       : R_j 가 대각일 때 σ = ∓ωj + ερ (정확)
  • track_eigenvalues        : ε 방향 연속 라벨링된 (σ¹, σ²) 배치

!! 주의 사항 !!
- S_j 열은 "최대 성분 1" 로 정규화 → 적합 지수 (r, s) 는 대표값이지 유일하지 않음
- 행렬 노름은 최대 성분 노름 max|s_ik| (symbols.estimate_order 와 같은 노름)
- 결손 모드는 예외 대신 j_0 정책: 결손이 난 가장 큰 j 다음부터 적합
  (남은 점이 2개 미만이면 Defective)
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from config import BOUNDED_SLOPE, EIG_TOL
from ghtorus.drivers.eigen2x2 import EigenPair2, eigen2, eigen_batch, inv2, label_by_reference, normalize_columns
from ghtorus.drivers.loglog import fit_loglog
from ghtorus.drivers.symbols import SymbolFamily, perturbed_symbols, symbol_at
from ghtorus.errors import Defective, MixedOmega, ParameterOutOfRange, SmallJ, ZeroOmega

log = logging.getLogger(__name__)

__all__ = [
    "EigenPair2",
    "GrowthFit",
    "closed_form_noncomm",
    "eigen2",
    "simultaneous_shift",
    "strong_diag_profile",
    "track_eigenvalues",
]


# =====================================================
# 1️⃣ 닫힌형식 (비가환, R_j = [[0, γ], [γ, 0]])
# =====================================================
def _pair(vals: tuple[complex, complex], cols: np.ndarray) -> EigenPair2:
    S = normalize_columns(cols[None, ...])[0]
    S_inv, _ = inv2(S[None, ...])
    return EigenPair2(vals, S, S_inv[0], False)


def closed_form_noncomm(omega: complex, gamma_j: float, j: int) -> EigenPair2:
    """
    ω 실수  : σ = ∓ sign(α)·√(α²j² + γ²)   (σ¹ 은 -ωj 쪽)
    ω = iβ  : σ = ∓ i·sign(β)·√(β²j² − γ²)
    """
    if j < 1:
        raise ValueError("j 는 1 이상이어야 합니다.")
    w = complex(omega)
    g = float(gamma_j)
    if w == 0:
        raise ZeroOmega("ω = 0 에는 닫힌형식이 정의되지 않습니다.", j=j)
    if w.real != 0 and w.imag != 0:
        raise MixedOmega(f"ω={w} 는 실수도 순허수도 아닙니다. eigen2 를 사용하세요.", j=j)

    if w.imag == 0:
        sg = 1.0 if w.real > 0 else -1.0
        A = abs(w.real) * j
        r = math.hypot(A, g)
        cols = np.array([[-sg * (r + A), g], [g, sg * (r + A)]], dtype=complex)
        return _pair((complex(-sg * r), complex(sg * r)), cols)

    sg = 1.0 if w.imag > 0 else -1.0
    B = abs(w.imag) * j
    if B * B <= g * g:
        raise SmallJ(f"β²j² ≤ γ_j² 입니다 (j={j}, γ={g}).", j=j)
    s = math.sqrt(B * B - g * g)
    # 열 = (γ, λ + iβj) 를 상쇄 없이 다시 쓴 형태
    cols = np.array([[1.0, g / (B + s)], [1j * sg * g / (B + s), 1j * sg]], dtype=complex)
    return _pair((-1j * sg * s, 1j * sg * s), cols)


# =====================================================
# 2️⃣ 강한 대각화 가능성 (‖S_j‖, ‖S_j⁻¹‖ 성장)
# =====================================================
@dataclass(frozen=True)
class GrowthFit:
    slope_S: float
    slope_Sinv: float
    residuals: tuple[float, float]
    bounded: tuple[bool, bool]
    j0: int
    k_const: float
    defective_js: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "slope_S": self.slope_S,
            "slope_Sinv": self.slope_Sinv,
            "residuals": list(self.residuals),
            "bounded": list(self.bounded),
            "j0": self.j0,
            "k_const": self.k_const,
            "defective_js": list(self.defective_js),
        }


def entry_norms(S: np.ndarray) -> np.ndarray:
    return np.abs(S).max(axis=(-2, -1))


def strong_diag_profile(
    omega: complex,
    family: SymbolFamily,
    j_min: int,
    j_max: int,
    tol: float = EIG_TOL,
    *,
    eps: complex = 1.0,
) -> GrowthFit:
    """j_min..j_max 에서 ωD_j + εR_j 를 분해하고 ‖S_j‖, ‖S_j⁻¹‖ 를 log-log 적합."""
    if not 1 <= j_min <= j_max:
        raise ValueError("1 <= j_min <= j_max 이어야 합니다.")
    js = np.arange(j_min, j_max + 1)
    _, S, S_inv, bad = eigen_batch(perturbed_symbols(omega, family, js, eps), tol)

    defective_js = [int(j) for j in js[bad]]
    j0 = max(defective_js) + 1 if defective_js else j_min
    keep = js >= j0
    if np.count_nonzero(keep) < 2:
        raise Defective(
            f"결손 모드 때문에 적합할 점이 부족합니다 (j0={j0}, j_max={j_max}).",
            j=defective_js[-1] if defective_js else None,
        )
    if defective_js:
        log.warning("[Diag] 결손 모드 %d개 제외 → j0=%d", len(defective_js), j0)

    jk = js[keep]
    nS = entry_norms(S[keep])
    nSi = entry_norms(S_inv[keep])
    fit_s = fit_loglog(jk, nS)
    fit_i = fit_loglog(jk, nSi)
    jf = jk.astype(float)
    k_const = float(max(np.max(nS / jf ** fit_s.slope), np.max(nSi / jf ** fit_i.slope)))
    bounded = (
        bool(fit_s.slope < BOUNDED_SLOPE and np.all(np.isfinite(nS))),
        bool(fit_i.slope < BOUNDED_SLOPE and np.all(np.isfinite(nSi))),
    )
    log.debug("[Diag] slope_S=%.4f slope_Sinv=%.4f j0=%d", fit_s.slope, fit_i.slope, j0)
    return GrowthFit(
        fit_s.slope,
        fit_i.slope,
        (fit_s.residual, fit_i.residual),
        bounded,
        int(j0),
        k_const,
        defective_js,
    )


# =====================================================
# 3️⃣ 가환 경우: 동시 대각화
# =====================================================
def simultaneous_shift(omega: complex, family: SymbolFamily, eps: complex, j: int) -> EigenPair2:
    """R_j 가 대각이면 σ^m = ∓ωj + ερ^m (S = I)."""
    if j < 1:
        raise ValueError("j 는 1 이상이어야 합니다.")
    R = symbol_at(family, j)
    if R[0, 1] != 0 or R[1, 0] != 0:
        raise ParameterOutOfRange(f"R_j 가 대각이 아닙니다 (j={j}).", j=j)
    w = complex(omega)
    vals = (-w * j + eps * R[0, 0], w * j + eps * R[1, 1])
    eye = np.eye(2, dtype=complex)
    return EigenPair2((complex(vals[0]), complex(vals[1])), eye, eye.copy(), False)


# =====================================================
# 4️⃣ ε 연속 라벨링 배치 트랙
# =====================================================
def track_eigenvalues(
    omega: complex,
    family: SymbolFamily,
    eps: complex,
    js: np.ndarray | list[int],
    *,
    steps: int = 8,
) -> np.ndarray:
    """
    (n, 2) 배열 [σ¹_j(ε), σ²_j(ε)].
    ε = 0 의 (-ωj, ωj) 에서 출발해 steps 단계로 ε 까지 라벨을 이어감.
    """
    ja = np.asarray(js, dtype=np.int64)
    w = complex(omega)
    ref = np.stack([-w * ja, w * ja], axis=-1).astype(complex)
    if eps == 0:
        return ref
    for t in np.linspace(0.0, 1.0, steps + 1)[1:]:
        vals, _, _, _ = eigen_batch(perturbed_symbols(w, family, ja, t * eps), EIG_TOL)
        ref = label_by_reference(vals, ref)
    return ref
