"""
drivers/loglog.py
────────────────────────────────────────────────────────
- (Driver Layer) 로그-로그 최소제곱 적합 + 2진(dyadic) 윈도우 유틸
- 심볼 차수 추정, 감쇠 분류, ‖S_j‖ 성장 적합이 모두 이 모듈을 공유

!! 주의 사항 !!
- y <= 0 인 점은 로그가 정의되지 않으므로 적합에서 제외
- 모든 y 가 같으면 기울기는 정확히 0 으로 고정 (polyfit 잔여 오차 제거)
- 윈도우는 반열린 구간 [lo, hi)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class LogLogFit:
    slope: float
    intercept: float
    residual: float   # 로그 공간 RMS 잔차
    n: int


def fit_loglog(x: Sequence[float] | np.ndarray, y: Sequence[float] | np.ndarray) -> LogLogFit:
    """
    log y = intercept + slope·log x 최소제곱 적합.
    y > 0, x > 0 인 점만 사용. 유효 점이 2개 미만이면 ValueError.
    """
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    keep = (xa > 0) & (ya > 0) & np.isfinite(ya)
    if np.count_nonzero(keep) < 2:
        raise ValueError("로그-로그 적합에는 양수 점이 2개 이상 필요합니다.")
    return fit_log_points(np.log(xa[keep]), np.log(ya[keep]))


def fit_log_points(lx: np.ndarray, ly: np.ndarray) -> LogLogFit:
    """이미 로그를 취한 점 (lx, ly) 에 대한 직선 적합 (점 2개 이상)."""
    lx = np.asarray(lx, dtype=float)
    ly = np.asarray(ly, dtype=float)
    if lx.size < 2:
        raise ValueError("적합에는 점이 2개 이상 필요합니다.")
    if np.ptp(ly) == 0.0:
        return LogLogFit(0.0, float(ly[0]), 0.0, int(lx.size))
    if np.ptp(lx) == 0.0:
        raise ValueError("x 값이 모두 같아 기울기를 정할 수 없습니다.")
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (intercept + slope * lx)
    return LogLogFit(float(slope), float(intercept), float(np.sqrt(np.mean(resid ** 2))), int(lx.size))


def window_slope(x: np.ndarray, y: np.ndarray) -> float:
    """
    윈도우 하나의 기울기.
    - 양수 점 2개 이상 → 최소제곱 기울기
    - 1개 → 유효 지수 log y / log x  (x = 1 이면 정의 불가 → nan)
    - 0개 → -inf (전부 0 인 윈도우)
    """
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    keep = (ya > 0) & np.isfinite(ya)
    count = int(np.count_nonzero(keep))
    if count == 0:
        return -math.inf
    if count == 1:
        x0 = float(xa[keep][0])
        if x0 <= 1.0:
            return math.nan
        return math.log(float(ya[keep][0])) / math.log(x0)
    if np.ptp(xa[keep]) == 0.0:
        return math.nan
    return fit_loglog(xa[keep], ya[keep]).slope


def dyadic_windows(lo: int, hi: int) -> list[tuple[int, int]]:
    """
    [lo, hi] 를 덮는 2진 윈도우 [2^k, 2^(k+1)) 목록. 양 끝은 lo, hi+1 로 잘라냄.
    """
    if lo < 1 or hi < lo:
        raise ValueError("1 <= lo <= hi 이어야 합니다.")
    out: list[tuple[int, int]] = []
    k = int(math.floor(math.log2(lo)))
    while 2 ** k <= hi:
        a = max(2 ** k, lo)
        b = min(2 ** (k + 1), hi + 1)
        if a < b:
            out.append((a, b))
        k += 1
    return out


def check_windows(windows: Sequence[tuple[int, int]]) -> None:
    """오름차순·서로소 검사."""
    prev_hi = None
    for lo, hi in windows:
        if hi <= lo:
            raise ValueError(f"빈 윈도우: [{lo}, {hi})")
        if prev_hi is not None and lo < prev_hi:
            raise ValueError("윈도우는 오름차순이고 서로 겹치지 않아야 합니다.")
        prev_hi = hi
