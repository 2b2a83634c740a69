"""
services/fourier_decay.py
────────────────────────────────────────────────────────
- (Service Layer) 계수열 감쇠 분류 + 소볼레프 꼬리합
- 레벨 크기 M_j
  • x 전용  : ‖c_j‖
  • t 의존  : max_{α ≤ alpha_max} max_t ‖∂_t^α c_j(t)‖   (4N_t+1 격자, 스펙트럴 미분)
- 윈도우별 log M_j vs log j 기울기 → 분류
  • SuperPolynomialDecay : 모든 기울기 < -threshold, 그리고 비증가
  • Unbounded            : 마지막 기울기 > threshold, 그리고 비감소
  • PolynomialGrowth     : 유한 기울기가 모두 ≤ threshold
  • Undecided            : 그 밖

!! 주의 사항 !!
- "유한 스케일" 판정: 점근 개념을 주어진 윈도우 안에서만 판단
- M_j = 0 인 레벨은 적합에서 제외, 전부 0 인 윈도우는 기울기 -inf (단조성 검사에서 무시)
- 점이 1개뿐인 윈도우는 유효 지수 log M_j / log j 를 기울기로 사용
- max_j 를 넘는 윈도우는 데이터가 없으므로 평가하지 않음
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from config import SLOPE_THRESHOLD, default_windows
from ghtorus.drivers.loglog import check_windows, fit_loglog, window_slope
from ghtorus.drivers.symbols import CoeffTable
from ghtorus.drivers.trig import max_norm_on_grid
from ghtorus.errors import ParameterOutOfRange

log = logging.getLogger(__name__)


class DecayClass(str, enum.Enum):
    SUPER = "SuperPolynomialDecay"
    POLYNOMIAL = "PolynomialGrowth"
    UNBOUNDED = "Unbounded"
    UNDECIDED = "Undecided"


@dataclass(frozen=True)
class WindowSlope:
    lo: int
    hi: int
    slope: float
    points: int


@dataclass(frozen=True)
class DecayVerdict:
    decay_class: DecayClass
    fitted_slope: float
    window_slopes: list[WindowSlope] = field(default_factory=list)
    evidence: str = ""

    def to_dict(self) -> dict:
        return {
            "class": self.decay_class.value,
            "fitted_slope": self.fitted_slope,
            "windows": [{"lo": w.lo, "hi": w.hi, "slope": w.slope} for w in self.window_slopes],
            "evidence": self.evidence,
        }


# =====================================================
# 1️⃣ 소볼레프 꼬리합
# =====================================================
def sobolev_tail(u: CoeffTable, s: float, J: int) -> float:
    """Σ_{j ≤ J} ‖û_j‖² j^{2s}  (j = 0 은 가중치 1)."""
    if J > u.max_j:
        raise ParameterOutOfRange(f"J={J} 가 테이블 max_j={u.max_j} 보다 큽니다.", j=J)
    js, norms = u.level_norms()
    keep = js <= J
    if not np.any(keep):
        return 0.0
    weight = np.maximum(js[keep], 1).astype(float) ** (2.0 * s)
    return math.fsum((norms[keep] ** 2 * weight).tolist())


# =====================================================
# 2️⃣ 레벨 크기
# =====================================================
def level_magnitudes(c: CoeffTable, alpha_max: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """(js, M_j): j ≥ 1 이고 저장된 레벨만."""
    if alpha_max < 0:
        raise ValueError("alpha_max 는 0 이상이어야 합니다.")
    js = [j for j in c.js() if j >= 1]
    mags = np.zeros(len(js))
    for idx, j in enumerate(js):
        arr = c.level(j)
        if arr.ndim == 1:
            mags[idx] = float(np.linalg.norm(arr))
        else:
            mags[idx] = max(max_norm_on_grid(arr, alpha) for alpha in range(alpha_max + 1))
    return np.array(js, dtype=np.int64), mags


# =====================================================
# 3️⃣ 분류
# =====================================================
def _monotone(values: Sequence[float], *, increasing: bool) -> bool:
    pairs = zip(values, values[1:])
    if increasing:
        return all(b >= a - 1e-9 for a, b in pairs)
    return all(b <= a + 1e-9 for a, b in pairs)


def classify_decay(
    c: CoeffTable,
    alpha_max: int = 0,
    windows: Optional[Sequence[tuple[int, int]]] = None,
    slope_threshold: float = SLOPE_THRESHOLD,
) -> DecayVerdict:
    """윈도우별 기울기로 감쇠 등급 판정."""
    wins = list(windows) if windows is not None else default_windows()
    check_windows(wins)
    js, mags = level_magnitudes(c, alpha_max)

    if not np.any(mags > 0):
        return DecayVerdict(DecayClass.SUPER, -math.inf, [], "identically zero")

    slopes: list[WindowSlope] = []
    for lo, hi in wins:
        if lo > c.max_j:
            continue
        hi_eff = min(hi, c.max_j + 1)
        mask = (js >= lo) & (js < hi_eff)
        s = window_slope(js[mask], mags[mask])
        slopes.append(WindowSlope(lo, hi_eff, s, int(np.count_nonzero(mags[mask] > 0))))

    positive = mags > 0
    if np.count_nonzero(positive) >= 2 and np.ptp(js[positive]) > 0:
        fitted = fit_loglog(js[positive], mags[positive]).slope
    else:
        fitted = window_slope(js, mags)

    checked = [w.slope for w in slopes if not math.isnan(w.slope)]
    finite = [s for s in checked if math.isfinite(s)]
    thr = slope_threshold

    if checked and all(s < -thr for s in checked) and _monotone(finite, increasing=False):
        verdict, evidence = DecayClass.SUPER, f"all {len(checked)} window slopes < -{thr:g}, non-increasing"
    elif finite and finite[-1] > thr and _monotone(finite, increasing=True):
        verdict, evidence = DecayClass.UNBOUNDED, f"last window slope {finite[-1]:.3g} > {thr:g}, non-decreasing"
    elif finite and all(s <= thr for s in finite):
        verdict, evidence = DecayClass.POLYNOMIAL, f"window slopes bounded by {max(finite):.3g} <= {thr:g}"
    else:
        verdict, evidence = DecayClass.UNDECIDED, "window slopes inconsistent with every class"

    log.debug("[Decay] %s fitted=%.4g windows=%d", verdict.value, fitted, len(slopes))
    return DecayVerdict(verdict, float(fitted), slopes, evidence)
