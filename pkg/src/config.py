"""
config.py
────────────────────────────────────────────────────────
- 분석 기본값/환경변수 설정
- 모든 서비스 함수는 명시적 키워드 인자를 받고, 여기 값은 "기본값"으로만 사용

!! 주의 사항 !!
- main.py 에서 load_dotenv() 를 먼저 호출해야 .env 값이 반영됨
  (테스트에서는 .env 없이 아래 기본값 그대로 사용)
- 윈도우는 [2^k, 2^(k+1)) 형태 (k = GH_WINDOW_K_MIN .. GH_WINDOW_K_MAX)
- GH_REPORT_TIMING=1 이면 report.json 에 실행시간이 들어가므로
  바이트 단위 재현성(determinism)이 깨짐 → 기본 0 유지

📌 환경변수 요약
- GH_SLOPE_THRESHOLD   : 감쇠 분류 기울기 임계값 (기본 8)
- GH_WINDOW_K_MIN/MAX  : 감쇠/디오판토스 윈도우 지수 범위
- GH_SERIES_ORDER      : 섭동 급수 기본 차수 K
- GH_HP_DIGITS         : 고정밀 실수 입력 자릿수
- GH_EIG_TOL           : 2x2 결손(defective) 판정 허용오차
- GH_NEAR_SINGULAR     : S(ε) 행렬식 여유 하한
- GH_RESONANCE_TOL     : dist(σ, Z) 공명 경고 하한
- GH_LIOUVILLE_STEP/RUN: 리우빌 패턴 휴리스틱 (지수 증가폭 / 연속 윈도우 수)
- GH_SEED              : 랜덤 프로브 시드
- GH_OUT_DIR           : 결과 출력 폴더
- GH_LOG_LEVEL         : 로깅 레벨
"""

import os

# =====================================================
# 1️⃣ 감쇠 분류 / 윈도우
# =====================================================
SLOPE_THRESHOLD: float = float(os.getenv("GH_SLOPE_THRESHOLD", "8.0"))
WINDOW_K_MIN: int = int(os.getenv("GH_WINDOW_K_MIN", "4"))
WINDOW_K_MAX: int = int(os.getenv("GH_WINDOW_K_MAX", "13"))

# =====================================================
# 2️⃣ 수치 허용오차
# =====================================================
EIG_TOL: float = float(os.getenv("GH_EIG_TOL", "1e-12"))
NEAR_SINGULAR: float = float(os.getenv("GH_NEAR_SINGULAR", "1e-6"))
RESONANCE_TOL: float = float(os.getenv("GH_RESONANCE_TOL", "1e-13"))
BOUNDED_SLOPE: float = 0.05   # GrowthFit.bounded 판정

# =====================================================
# 3️⃣ 급수 / 연분수
# =====================================================
SERIES_ORDER: int = int(os.getenv("GH_SERIES_ORDER", "8"))
SERIES_ORDER_MAX: int = 16
HP_DIGITS: int = int(os.getenv("GH_HP_DIGITS", "4096"))

# =====================================================
# 4️⃣ 디오판토스 판정 휴리스틱
# =====================================================
LIOUVILLE_STEP: float = float(os.getenv("GH_LIOUVILLE_STEP", "1.0"))
LIOUVILLE_RUN: int = int(os.getenv("GH_LIOUVILLE_RUN", "3"))
ELL_MAX_MIN: int = 64

# =====================================================
# 5️⃣ 실행/출력
# =====================================================
SEED: int = int(os.getenv("GH_SEED", "20240917"))
OUT_DIR: str = os.getenv("GH_OUT_DIR", "out")
LOG_LEVEL: str = os.getenv("GH_LOG_LEVEL", "INFO").upper()
LOG_FORMAT: str = "%(asctime)s %(levelname)-7s %(name)s %(message)s"
REPORT_TIMING: bool = os.getenv("GH_REPORT_TIMING", "0") == "1"
CSV_DIGITS: int = 17


def default_windows(k_min: int = WINDOW_K_MIN, k_max: int = WINDOW_K_MAX) -> list[tuple[int, int]]:
    """[2^k, 2^(k+1)) 윈도우 목록 (hi 는 포함하지 않음)."""
    return [(2 ** k, 2 ** (k + 1)) for k in range(k_min, k_max + 1)]


__all__ = [
    # 감쇠/윈도우
    "SLOPE_THRESHOLD", "WINDOW_K_MIN", "WINDOW_K_MAX", "default_windows",
    # 허용오차
    "EIG_TOL", "NEAR_SINGULAR", "RESONANCE_TOL", "BOUNDED_SLOPE",
    # 급수/연분수
    "SERIES_ORDER", "SERIES_ORDER_MAX", "HP_DIGITS",
    # 디오판토스
    "LIOUVILLE_STEP", "LIOUVILLE_RUN", "ELL_MAX_MIN",
    # 실행/출력
    "SEED", "OUT_DIR", "LOG_LEVEL", "LOG_FORMAT", "REPORT_TIMING", "CSV_DIGITS",
]
