"""
services/diophantine.py
────────────────────────────────────────────────────────
- (Service Layer) 고유값 트랙의 디오판토스 판정 → GH 등급
- 구성
  • EigenTrack        : ℓ ↦ σ_ℓ (벡터화 생성기) + 선택적 정확 규칙 ℓ ↦ Fraction | QuadraticNumber | None
  • log_distances     : log dist(σ_ℓ, Z) (실부/허부/전체), 의심 구간은 정확 산술로 재계산
  • diophantine_fit   : 윈도우별 최소 거리 → (C, θ) 하한 포락선
  • gamma_Q_scan      : 정수 적중(Γ_Q) 탐색
  • classify_gh_type  : Type I / Type II / NotGH / Undecided
  • type_preservation : ε 스윕에서 등급 유지 여부

!! 주의 사항 !!
- 평탄화 규약 ℓ = 2(j−1) + m  (m ∈ {1, 2}),  ℓ = 0 은 레벨 0 (별도 사전 검사)
- 정확 규칙이 None 을 돌려주면 "무리수 인증" 의미 → 정수 적중 아님
- θ 는 윈도우 최소값 (ℓ_w, m_w) 의 log-log 기울기로부터 θ = max(0, −slope)
  C 는 ℓ ≥ ℓ_0 인 모든 프로브 점에서 min d_ℓ·ℓ^θ → 포락선이 항상 성립
- 리우빌 패턴은 휴리스틱 (윈도우 지수가 LIOUVILLE_STEP 이상씩 LIOUVILLE_RUN 번 증가)
  정확한 NotGH 주장은 정수 적중으로만 함
- 정수 적중이 서로 다른 윈도우 2개 이상에 있어야 NotGH_IntegerHits
  (한 윈도우에 몰리거나 첫 윈도우 아래면 유한 예외로 보고 ℓ_0 을 그 뒤로 이동)
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence, Union

import numpy as np

from config import LIOUVILLE_RUN, LIOUVILLE_STEP, default_windows
from ghtorus.drivers.contfrac import (
    AlphaValue,
    HighPrecisionValue,
    QuadraticNumber,
    QuadraticValue,
    RationalValue,
    is_integer_value,
    log_distance_to_integers,
)
from ghtorus.drivers.loglog import check_windows, fit_log_points
from ghtorus.drivers.symbols import SymbolFamily
from ghtorus.errors import IntegerHit, ParameterOutOfRange
from ghtorus.services.diagonalizer import track_eigenvalues

log = logging.getLogger(__name__)

ExactValue = Union[Fraction, QuadraticNumber, None]
ExactRule = Callable[[int], ExactValue]
Generator = Callable[[np.ndarray], np.ndarray]

CHUNK = 1 << 16
DENSE_LIMIT = 1 << 21
EXACT_REFINE = 1e-9   # float 거리가 |σ|·이 값보다 작으면 정확 규칙으로 재계산


# =====================================================
# 1️⃣ 평탄화 ℓ ↔ (j, m)
# =====================================================
def index_map(ell: int) -> tuple[int, int]:
    """ℓ ↦ (j, m),  ℓ = 2(j−1) + m."""
    if ell < 1:
        raise ValueError("ℓ 은 1 이상이어야 합니다. (ℓ = 0 은 레벨 0)")
    j = (ell + 1) // 2
    return j, ell - 2 * (j - 1)


def ell_of(j: int, m: int) -> int:
    if j < 1 or m not in (1, 2):
        raise ValueError("j >= 1, m ∈ {1, 2} 이어야 합니다.")
    return 2 * (j - 1) + m


def split_ells(ells: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """벡터 버전 index_map → (js, ms)."""
    ea = np.asarray(ells, dtype=np.int64)
    js = (ea + 1) // 2
    return js, ea - 2 * (js - 1)


# =====================================================
# 2️⃣ EigenTrack
# =====================================================
@dataclass(eq=False)
class EigenTrack:
    generator: Generator
    max_probed: int
    exact: Optional[ExactRule] = None
    level0: Optional[complex] = None
    level0_exact: ExactValue = None
    description: str = ""
    _cache: Optional[np.ndarray] = field(default=None, repr=False)

    def values(self, ells: np.ndarray | Sequence[int]) -> np.ndarray:
        ea = np.asarray(ells, dtype=np.int64)
        if ea.size == 0:
            return np.zeros(0, dtype=complex)
        if ea.min() < 1:
            raise ValueError("values() 는 ℓ >= 1 만 받습니다.")
        top = int(ea.max())
        if top > DENSE_LIMIT:
            return np.asarray(self.generator(ea), dtype=complex)
        if self._cache is None or self._cache.size <= top:
            old = 0 if self._cache is None else self._cache.size
            size = max(top, min(2 * old, self.max_probed, DENSE_LIMIT))
            full = np.arange(1, size + 1, dtype=np.int64)
            cache = np.empty(size + 1, dtype=complex)
            cache[0] = np.nan if self.level0 is None else self.level0
            cache[1:] = np.asarray(self.generator(full), dtype=complex)
            self._cache = cache
        return self._cache[ea]

    def index_map(self, ell: int) -> tuple[int, int]:
        return index_map(ell)

    # -------------------------------------------------
    # 생성자
    # -------------------------------------------------
    @classmethod
    def from_function(
        cls,
        fn: Generator,
        max_probed: int,
        *,
        exact: Optional[ExactRule] = None,
        level0: Optional[complex] = None,
        description: str = "",
    ) -> "EigenTrack":
        return cls(fn, int(max_probed), exact, level0, None, description)

    @classmethod
    def from_symbol(
        cls,
        omega: complex,
        family: SymbolFamily,
        eps: complex,
        max_probed: int,
        *,
        steps: int = 8,
    ) -> "EigenTrack":
        """σ_ℓ = σ_j^m(ε) of ωD_j + εR_j (ε 연속 라벨)."""

        def gen(ells: np.ndarray) -> np.ndarray:
            js, ms = split_ells(ells)
            uniq, inv = np.unique(js, return_inverse=True)
            vals = track_eigenvalues(omega, family, eps, uniq, steps=steps)
            return vals[inv, ms - 1]

        level0 = complex(eps) * complex(family.scalar_at_zero)
        return cls(gen, int(max_probed), None, level0, None, f"ω={omega} ε={eps} {family.description}")

    @classmethod
    def linear(cls, coef: AlphaValue | Fraction | QuadraticNumber | float, max_probed: int, *, offset: Fraction | float = 0) -> "EigenTrack":
        """σ_ℓ = coef·ℓ + offset (ℓ 직접 인덱스)."""
        exact_coef = _exact_coef(coef)
        c = float(coef)
        off = float(offset)

        def gen(ells: np.ndarray) -> np.ndarray:
            return (c * ells + off).astype(complex)

        rule: Optional[ExactRule] = None
        if exact_coef is not None and isinstance(offset, (int, Fraction)):
            exact_off = Fraction(offset)

            def rule(ell: int) -> ExactValue:
                return exact_coef * ell + exact_off

        return cls(gen, int(max_probed), rule, None, None, f"linear {c:.6g}·ℓ + {off:g}")

    @classmethod
    def paired(cls, coef: AlphaValue | Fraction | QuadraticNumber | float, max_probed: int) -> "EigenTrack":
        """σ_ℓ = ∓coef·j (m = 1 → −, m = 2 → +): 섭동 없는 ωD_x 트랙."""
        exact_coef = _exact_coef(coef)
        c = float(coef)

        def gen(ells: np.ndarray) -> np.ndarray:
            js, ms = split_ells(ells)
            return (np.where(ms == 1, -1.0, 1.0) * c * js).astype(complex)

        rule: Optional[ExactRule] = None
        if exact_coef is not None:

            def rule(ell: int) -> ExactValue:
                j, m = index_map(ell)
                return exact_coef * (-j if m == 1 else j)

        return cls(gen, int(max_probed), rule, 0j, Fraction(0), f"paired ∓{c:.6g}·j")


def _exact_coef(coef: object) -> Optional[Fraction | QuadraticNumber]:
    if isinstance(coef, RationalValue):
        return coef.value
    if isinstance(coef, QuadraticValue):
        return coef.value
    if isinstance(coef, HighPrecisionValue):
        return None
    if isinstance(coef, (int, Fraction)):
        return Fraction(coef)
    if isinstance(coef, QuadraticNumber):
        return coef
    return None


# =====================================================
# 3️⃣ 거리
# =====================================================
def _chunks(lo: int, hi: int) -> Iterator[np.ndarray]:
    """[lo, hi) 를 CHUNK 단위로."""
    for start in range(lo, hi, CHUNK):
        yield np.arange(start, min(start + CHUNK, hi), dtype=np.int64)


def log_distances(track: EigenTrack, ells: np.ndarray, part: str = "full") -> np.ndarray:
    """
    log d_ℓ.
    part = "full" : min_τ |τ + σ_ℓ|  (실부 거리와 허부의 hypot)
           "real" : dist(Re σ_ℓ, Z)
           "imag" : |Im σ_ℓ|
    정수 적중은 -inf.
    """
    if part not in ("full", "real", "imag"):
        raise ValueError("part 는 'full' | 'real' | 'imag' 중 하나여야 합니다.")
    sig = track.values(ells)
    with np.errstate(divide="ignore"):
        if part == "imag":
            return np.log(np.abs(sig.imag))
        frac = np.abs(sig.real - np.rint(sig.real))
        d = np.hypot(frac, sig.imag) if part == "full" else frac
        out = np.log(d)
    if track.exact is None:
        return out
    suspect = np.nonzero(d < EXACT_REFINE * np.maximum(1.0, np.abs(sig)))[0]
    for idx in suspect:
        ell = int(np.asarray(ells)[idx])
        val = track.exact(ell)
        if val is not None:
            out[idx] = log_distance_to_integers(val)
        elif not np.isfinite(out[idx]):
            # 무리수로 인증됨: float 해상도 하한으로 대체
            out[idx] = math.log(float(np.spacing(max(1.0, abs(sig[idx])))))
    return out


# =====================================================
# 4️⃣ Γ_Q 탐색
# =====================================================
def gamma_Q_scan(track: EigenTrack, ell_max: int, tol: float = 0.0) -> list[int]:
    """dist(σ_ℓ, Z) ≤ tol 인 ℓ (1 ≤ ℓ ≤ ell_max). tol = 0 은 정확 판정."""
    if tol < 0:
        raise ValueError("tol 은 0 이상이어야 합니다.")
    if ell_max > track.max_probed:
        raise ParameterOutOfRange(f"ell_max={ell_max} 가 max_probed={track.max_probed} 를 넘습니다.", ell=ell_max)
    if tol == 0 and track.exact is None:
        log.warning("[GH] 정확 규칙이 없는 트랙: tol=0 판정을 float 거리 0 으로 대체")
    hits: list[int] = []
    for ells in _chunks(1, ell_max + 1):
        # 허부가 있으면 정수일 수 없음
        logd = log_distances(track, ells, "full")
        mask = np.isneginf(logd) if tol == 0 else logd <= math.log(tol)
        hits.extend(int(e) for e in ells[mask])
    return hits


def level0_hit(track: EigenTrack) -> Optional[bool]:
    """레벨 0 사전 검사: σ_0 ∈ Z 여부 (레벨 0 값이 없으면 None)."""
    if track.level0_exact is not None:
        return is_integer_value(track.level0_exact)
    if track.level0 is None or np.isnan(track.level0):
        return None
    z = complex(track.level0)
    return z.imag == 0 and z.real == round(z.real)


# =====================================================
# 5️⃣ 디오판토스 적합
# =====================================================
@dataclass(frozen=True)
class WindowMin:
    lo: int
    hi: int
    ell: int
    log_min: float

    @property
    def min_dist(self) -> float:
        return math.exp(self.log_min) if self.log_min > -math.inf else 0.0

    @property
    def exponent(self) -> float:
        """유효 지수 −log m_w / log ℓ_w."""
        if self.ell <= 1:
            return math.nan
        return -self.log_min / math.log(self.ell)

    def to_dict(self) -> dict:
        return {
            "lo": self.lo,
            "hi": self.hi,
            "ell": self.ell,
            "min_dist": self.min_dist,
            "log_min": self.log_min,
            "exponent": self.exponent,
        }


@dataclass(frozen=True)
class DiophantineFit:
    C: float
    theta: float
    per_window: list[WindowMin]
    ell0: int
    liouville_run: int = 0
    part: str = "full"

    @property
    def passes(self) -> bool:
        return (
            bool(self.per_window)
            and all(w.log_min > -math.inf for w in self.per_window)
            and math.isfinite(self.theta)
            and self.liouville_run < LIOUVILLE_RUN
        )

    def to_dict(self) -> dict:
        return {
            "C": self.C,
            "theta": self.theta,
            "ell0": self.ell0,
            "liouville_run": self.liouville_run,
            "windows": [w.to_dict() for w in self.per_window],
        }


def liouville_run(exponents: Sequence[float], step: float = LIOUVILLE_STEP) -> int:
    """윈도우 순서를 지키며 지수가 step 이상씩 증가하는 가장 긴 사슬 길이."""
    vals = [e for e in exponents if math.isfinite(e)]
    best = [1] * len(vals)
    for i in range(len(vals)):
        for k in range(i):
            if vals[i] - vals[k] >= step - 1e-9:
                best[i] = max(best[i], best[k] + 1)
    return max(best, default=0)


def _window_minima(track: EigenTrack, windows: Sequence[tuple[int, int]], ell0: int, part: str) -> list[WindowMin]:
    mins: list[WindowMin] = []
    for lo, hi in windows:
        lo_eff = max(lo, ell0)
        if lo_eff >= hi:
            continue
        best_log, best_ell = math.inf, lo_eff
        for ells in _chunks(lo_eff, hi):
            logd = log_distances(track, ells, part)
            idx = int(np.argmin(logd))
            if logd[idx] < best_log:
                best_log, best_ell = float(logd[idx]), int(ells[idx])
        mins.append(WindowMin(lo, hi, best_ell, best_log))
    return mins


def _envelope_C(track: EigenTrack, windows: Sequence[tuple[int, int]], ell0: int, theta: float, part: str) -> float:
    best = math.inf
    for lo, hi in windows:
        lo_eff = max(lo, ell0)
        for ells in _chunks(lo_eff, hi):
            logd = log_distances(track, ells, part) + theta * np.log(ells.astype(float))
            best = min(best, float(np.min(logd)))
    return math.exp(best) if best > -math.inf else 0.0


def diophantine_fit(
    track: EigenTrack,
    ell_windows: Optional[Sequence[tuple[int, int]]] = None,
    *,
    ell0: Optional[int] = None,
    part: str = "full",
    step: float = LIOUVILLE_STEP,
    strict: bool = True,
) -> DiophantineFit:
    """
    윈도우별 최소 거리 m_w (ℓ_w 에서) → θ = max(0, −slope(log m_w ~ log ℓ_w)),
    C = min_{ℓ ≥ ℓ_0} d_ℓ·ℓ^θ.
    strict=True 이면 d_ℓ = 0 (정수 적중) 에서 IntegerHit.
    """
    wins = list(ell_windows) if ell_windows is not None else default_windows()
    check_windows(wins)
    if wins and wins[-1][1] - 1 > track.max_probed:
        raise ParameterOutOfRange(
            f"윈도우 끝 {wins[-1][1] - 1} 이 max_probed={track.max_probed} 를 넘습니다.",
            ell=wins[-1][1] - 1,
        )
    start = wins[0][0] if ell0 is None else int(ell0)
    mins = _window_minima(track, wins, start, part)

    zero = [w for w in mins if w.log_min == -math.inf]
    if zero and strict:
        raise IntegerHit(f"ℓ={zero[0].ell} 에서 σ_ℓ 이 정수입니다. gamma_Q_scan 을 사용하세요.", ell=zero[0].ell)

    finite = [w for w in mins if w.log_min > -math.inf]
    if len(finite) >= 2:
        slope = fit_log_points(np.log([w.ell for w in finite]), np.array([w.log_min for w in finite])).slope
    elif finite and finite[0].ell > 1:
        slope = finite[0].log_min / math.log(finite[0].ell)
    else:
        slope = 0.0
    theta = max(0.0, -slope) if not zero else math.inf
    C = _envelope_C(track, wins, start, theta, part) if math.isfinite(theta) else 0.0
    run = liouville_run([w.exponent for w in mins], step)
    log.debug("[GH] fit part=%s θ=%.4f C=%.4g run=%d", part, theta, C, run)
    return DiophantineFit(C, theta, mins, start, run, part)


# =====================================================
# 6️⃣ GH 판정
# =====================================================
class GHVerdict(str, enum.Enum):
    TYPE_I = "GH_TypeI"
    TYPE_II = "GH_TypeII"
    INTEGER_HITS = "NotGH_IntegerHits"
    LIOUVILLE = "NotGH_LiouvillePattern"
    UNDECIDED = "Undecided"

    @property
    def is_gh(self) -> bool:
        return self in (GHVerdict.TYPE_I, GHVerdict.TYPE_II)


@dataclass
class GHReport:
    verdict: GHVerdict
    fitted_C: float
    fitted_theta: float
    gamma_Q_hits: list[int]
    window_data: list[WindowMin]
    notes: list[str] = field(default_factory=list)
    ell0: int = 1
    branches: dict[str, DiophantineFit] = field(default_factory=dict)
    level0_integer: Optional[bool] = None

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "fitted_C": self.fitted_C,
            "fitted_theta": self.fitted_theta,
            "ell0": self.ell0,
            "gamma_Q_hits": list(self.gamma_Q_hits),
            "level0_integer": self.level0_integer,
            "window_data": [w.to_dict() for w in self.window_data],
            "branches": {k: v.to_dict() for k, v in sorted(self.branches.items())},
            "notes": list(self.notes),
        }


def window_index(ell: int, windows: Sequence[tuple[int, int]]) -> Optional[int]:
    for idx, (lo, hi) in enumerate(windows):
        if lo <= ell < hi:
            return idx
    return None


def hit_policy(hits: Sequence[int], windows: Sequence[tuple[int, int]]) -> tuple[bool, int, list[str]]:
    """
    (NotGH 여부, ℓ_0, 노트).
    적중이 서로 다른 윈도우 2개 이상 → NotGH.
    아니면 유한 예외로 보고 ℓ_0 을 마지막 적중 다음으로 이동.
    """
    first = windows[0][0]
    notes: list[str] = []
    if not hits:
        return False, first, notes
    hit_windows = {window_index(h, windows) for h in hits} - {None}
    if len(hit_windows) >= 2:
        notes.append(f"integer hits in {len(hit_windows)} distinct windows: {list(hits)[:12]}")
        return True, first, notes
    ell0 = max(first, max(hits) + 1)
    notes.append(f"finite integer hits {list(hits)} treated as exceptions; ell0 moved to {ell0}")
    return False, ell0, notes


def classify_gh_type(
    track: EigenTrack,
    fit: DiophantineFit,
    *,
    windows: Optional[Sequence[tuple[int, int]]] = None,
    hits: Optional[Sequence[int]] = None,
    notes: Sequence[str] = (),
    step: float = LIOUVILLE_STEP,
) -> GHReport:
    """Type II (|Im σ| 분기) 우선, 다음 Type I (실부 거리 분기), 그 밖은 NotGH/Undecided."""
    wins = list(windows) if windows is not None else [(w.lo, w.hi) for w in fit.per_window]
    all_notes = list(notes)
    if hits is None:
        hits = gamma_Q_scan(track, wins[-1][1] - 1, 0.0)
        spread, _, extra = hit_policy(hits, wins)
        all_notes.extend(extra)
    else:
        spread = len({window_index(h, wins) for h in hits} - {None}) >= 2

    lvl0 = level0_hit(track)
    if lvl0:
        all_notes.append(f"level-0 eigenvalue {track.level0} is an integer: Gamma_Q hit at ell=0 (finite exception)")
    hit_list = ([0] if lvl0 else []) + list(hits)

    if spread:
        return GHReport(GHVerdict.INTEGER_HITS, 0.0, math.inf, hit_list, fit.per_window, all_notes, fit.ell0, {}, lvl0)

    branches = {
        "imag": diophantine_fit(track, wins, ell0=fit.ell0, part="imag", step=step, strict=False),
        "real": diophantine_fit(track, wins, ell0=fit.ell0, part="real", step=step, strict=False),
    }
    if branches["imag"].passes:
        verdict = GHVerdict.TYPE_II
    elif branches["real"].passes:
        verdict = GHVerdict.TYPE_I
    elif fit.liouville_run >= LIOUVILLE_RUN:
        verdict = GHVerdict.LIOUVILLE
        all_notes.append(f"window exponents rise by >= {step:g} across {fit.liouville_run} windows (heuristic)")
    else:
        verdict = GHVerdict.UNDECIDED
        all_notes.append("neither the real-part nor the imaginary-part bound holds on every window")
    log.info("[GH] %s θ=%.4g C=%.4g hits=%d", verdict.value, fit.theta, fit.C, len(hit_list))
    return GHReport(verdict, fit.C, fit.theta, hit_list, fit.per_window, all_notes, fit.ell0, branches, lvl0)


def analyze_track(
    track: EigenTrack,
    windows: Optional[Sequence[tuple[int, int]]] = None,
    *,
    tol: float = 0.0,
    step: float = LIOUVILLE_STEP,
) -> GHReport:
    """Γ_Q 탐색 → 적중 정책 → 적합 → 판정 전체 흐름."""
    wins = list(windows) if windows is not None else default_windows()
    check_windows(wins)
    hits = gamma_Q_scan(track, wins[-1][1] - 1, tol)
    spread, ell0, notes = hit_policy(hits, wins)
    if spread:
        lvl0 = level0_hit(track)
        hit_list = ([0] if lvl0 else []) + hits
        log.info("[GH] %s hits=%d", GHVerdict.INTEGER_HITS.value, len(hit_list))
        return GHReport(GHVerdict.INTEGER_HITS, 0.0, math.inf, hit_list, [], notes, ell0, {}, lvl0)
    fit = diophantine_fit(track, wins, ell0=ell0, step=step, strict=tol == 0)
    return classify_gh_type(track, fit, windows=wins, hits=hits, notes=notes, step=step)


# =====================================================
# 7️⃣ ε 스윕 등급 유지
# =====================================================
@dataclass(frozen=True)
class TypePreservation:
    verdicts: list[tuple[complex, GHVerdict]]
    stable: bool

    def to_dict(self) -> dict:
        return {
            "per_eps": [{"eps": [e.real, e.imag], "verdict": v.value} for e, v in self.verdicts],
            "stable": self.stable,
        }


def type_preservation(
    omega: complex,
    family: SymbolFamily,
    eps_list: Sequence[complex],
    ell_max: int,
    *,
    windows: Optional[Sequence[tuple[int, int]]] = None,
) -> TypePreservation:
    """ε 마다 트랙을 만들어 판정하고 등급이 모두 같은지 확인."""
    if not eps_list:
        raise ValueError("eps_list 가 비어 있습니다.")
    wins = list(windows) if windows is not None else [w for w in default_windows() if w[1] - 1 <= ell_max]
    out: list[tuple[complex, GHVerdict]] = []
    for eps in eps_list:
        track = EigenTrack.from_symbol(omega, family, complex(eps), ell_max)
        out.append((complex(eps), analyze_track(track, wins).verdict))
    stable = len({v for _, v in out}) == 1
    return TypePreservation(out, stable)
