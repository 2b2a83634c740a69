"""
ghtorus
────────────────────────────────────────────────────────
- T² 위 연산자 L(ε) = D_t + ωD_x + εR 의 전역 준타원성(GH) 분석 패키지
- drivers/  : 저수준 수치 (심볼, 2x2 고유분해, 연분수, 로그-로그 적합, 삼각다항식)
- services/ : 분석 로직 (감쇠 분류, 대각화, 디오판토스 판정, 섭동 급수, 실험실, 시나리오/리포트)
"""

__version__ = "0.4.0"
