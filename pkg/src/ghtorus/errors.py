"""
errors.py
────────────────────────────────────────────────────────
- 패키지 공통 예외 계층
- AnalysisError  → CLI 종료코드 2 (분석 실패: 결손 행렬, 정밀도 소진 등)
- ScenarioError  → CLI 종료코드 1 (입출력/스키마 오류, JSON pointer 포함)

!! 주의 사항 !!
- 위치 정보(j, m, ell)는 알 수 있을 때만 채움 (None 허용)
- 잘못된 입력 형태는 ValueError 계열로도 잡히도록 다중 상속
"""

from __future__ import annotations

from typing import Optional

EXIT_OK = 0
EXIT_IO = 1
EXIT_ANALYSIS = 2


class GHError(Exception):
    """ghtorus 최상위 예외."""

    exit_code: int = EXIT_ANALYSIS

    def __init__(
        self,
        message: str,
        *,
        j: Optional[int] = None,
        m: Optional[int] = None,
        ell: Optional[int] = None,
    ) -> None:
        super().__init__(message)
        self.j = j
        self.m = m
        self.ell = ell

    def to_dict(self) -> dict:
        out: dict = {"type": type(self).__name__, "message": str(self)}
        for key in ("j", "m", "ell"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        return out


# =====================================================
# 1️⃣ 분석 오류 (exit 2)
# =====================================================
class AnalysisError(GHError):
    exit_code = EXIT_ANALYSIS


class ZeroSymbol(AnalysisError):
    pass


class Defective(AnalysisError):
    pass


class MixedOmega(AnalysisError):
    pass


class SmallJ(AnalysisError):
    pass


class IntegerHit(AnalysisError):
    pass


class PrecisionExhausted(AnalysisError):
    pass


class ExhaustedExpansion(AnalysisError):
    pass


class ZeroOmega(AnalysisError):
    pass


class ParameterOutOfRange(AnalysisError, ValueError):
    pass


class NearSingular(AnalysisError):
    pass


class RationalAlpha(AnalysisError, ValueError):
    pass


class EmptyPicks(AnalysisError, ValueError):
    pass


class IntegerSigma(AnalysisError):
    pass


class ResonanceNear(AnalysisError):
    pass


class ShapeMismatch(AnalysisError, ValueError):
    pass


# =====================================================
# 2️⃣ 시나리오/입출력 오류 (exit 1)
# =====================================================
class ScenarioError(GHError):
    exit_code = EXIT_IO

    def __init__(self, message: str, *, pointer: str = "") -> None:
        super().__init__(message)
        self.pointer = pointer

    def __str__(self) -> str:
        base = super().__str__()
        return f"{base} (at {self.pointer})" if self.pointer else base

    def to_dict(self) -> dict:
        out = super().to_dict()
        out["pointer"] = self.pointer
        return out
