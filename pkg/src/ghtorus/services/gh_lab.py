"""
services/gh_lab.py
────────────────────────────────────────────────────────
- (Service Layer) GH 를 깨는 섭동 / 비매끄러운 증인 해 / 모드별 ODE 풀이
- 구성
  • build_killer  : 연분수 수렴분수 (p_k, q_k) 로 j = q_k 에서 σ = ±p_k 가 되는 섭동
                    NonCommutative: R_j = [[0, γ_j], [γ_j, 0]], γ_{q_k}² = p_k² − α²q_k²
                    Commutative   : R_j = r_j·I,               r_{q_k} = αq_k − p_k
                    그 밖의 j 는 γ_j = √j (r_j = √j)
  • build_witness : v_ℓ = e^{−iτt}, g_ℓ = i(σ_ℓ − τ)e^{−iτt}  ((∂_t + iσ)v = g 가 모드별 항등식)
  • solve_mode    : (∂_t + iσ)v = g, FourierSpace (모드 나눗셈) / Integral (적분 공식 + Gauss–Legendre)
  • solve_system  : (D_t + Q_j(ε)^⊤)Û_j = F̂_j 를 대각화로 스칼라 모드들로 분리
  • lt2_probe     : dist(σ_ℓ, Z) 와 |1 − e^{−2πiσ_ℓ}| 나란히

!! 주의 사항 !!
- 측(side)은 α 의 부호로 결정 (α > 0 → Above, α < 0 → Below), γ² = p² − α²q² 는 양쪽 모두 양수
- 2차 무리수 α 는 정확 규칙 제공 → gamma_Q_scan(tol=0) 이 정확 산술로 적중 판정
  (√2 위 γ_j = √j 트랙은 2j² + j 가 제곱수인 j = 4, 144, 4900, … 에서도 적중: certificate 의 extra)
- 적분 경로: Im σ ≤ 0 → 1/(1 − e^{−2πiσ})·∫ e^{−iσs} g(t−s) ds
             Im σ > 0 → 1/(e^{2πiσ} − 1)·∫ e^{iσs} g(t+s) ds
  g 는 격자 표본의 삼각 보간으로 평가, 적분은 복합 Gauss–Legendre
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from config import RESONANCE_TOL
from ghtorus.drivers.contfrac import (
    CFExpansion,
    HighPrecisionValue,
    QuadraticNumber,
    QuadraticValue,
    RationalValue,
    alpha_to_spec,
    killer_convergents,
    sqrt_in_field,
)
from ghtorus.drivers.eigen2x2 import eigen2
from ghtorus.drivers.loglog import fit_loglog
from ghtorus.drivers.symbols import CoeffTable, EntryArrays, SymbolFamily, perturbed_symbols
from ghtorus.drivers.trig import (
    derivative,
    eval_on_grid,
    gauss_legendre_panels,
    mode_numbers,
    modes_from_grid,
    n_modes,
    panels_for,
)
from ghtorus.errors import EmptyPicks, IntegerSigma, PrecisionExhausted, RationalAlpha, ResonanceNear
from ghtorus.services.diophantine import EigenTrack, ExactValue, ell_of, gamma_Q_scan, index_map, split_ells

log = logging.getLogger(__name__)


# =====================================================
# 1️⃣ Killer 섭동
# =====================================================
class KillerMode(str, enum.Enum):
    NONCOMMUTATIVE = "NonCommutative"
    COMMUTATIVE = "Commutative"


@dataclass(frozen=True)
class KillerCertificate:
    hits: list[int]
    expected: list[int]
    contained: bool
    extra: list[int]

    def to_dict(self) -> dict:
        return {"hits": self.hits, "expected": self.expected, "contained": self.contained, "extra": self.extra}


@dataclass(frozen=True, eq=False)
class KillerPerturbation:
    alpha: CFExpansion
    mode: KillerMode
    side: str
    sign: int
    special_js: tuple[int, ...]
    special_p: tuple[int, ...]
    special_values: tuple[float, ...]
    special_exact: tuple[Union[QuadraticNumber, Fraction], ...]

    @property
    def omega(self) -> float:
        return float(self.alpha.value)

    @property
    def alpha_exact(self) -> Optional[QuadraticNumber]:
        val = self.alpha.value
        return val.value if isinstance(val, QuadraticValue) else None

    def fallback(self, js: np.ndarray) -> np.ndarray:
        """특수하지 않은 j 의 수열 √j."""
        return np.sqrt(np.asarray(js, dtype=float))

    # -------------------------------------------------
    # 수열 / 심볼
    # -------------------------------------------------
    def _special_lookup(self, js: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        sj = np.asarray(self.special_js, dtype=np.int64)
        pos = np.clip(np.searchsorted(sj, js), 0, len(sj) - 1)
        match = sj[pos] == js
        return match, pos

    def sequence(self, js: np.ndarray) -> np.ndarray:
        """γ_j (NonCommutative) 또는 r_j (Commutative)."""
        ja = np.asarray(js, dtype=np.int64)
        out = self.fallback(ja)
        match, pos = self._special_lookup(ja)
        out[match] = np.asarray(self.special_values)[pos[match]]
        return out

    def to_family(self) -> SymbolFamily:
        def rule(js: np.ndarray) -> EntryArrays:
            seq = self.sequence(js).astype(complex)
            zero = np.zeros(js.shape, dtype=complex)
            if self.mode is KillerMode.NONCOMMUTATIVE:
                return zero, seq, seq, zero
            return seq, zero, zero, seq

        return SymbolFamily(rule, 0j, 0.5, f"killer {self.mode.value} over {self.alpha.value_kind}", self.to_spec())

    def to_spec(self) -> dict:
        kind = "killer_noncommutative" if self.mode is KillerMode.NONCOMMUTATIVE else "killer_commutative"
        return {
            "kind": kind,
            "alpha": alpha_to_spec(self.alpha.value),
            "count": len(self.special_js),
            "convergents": [[str(p), str(q)] for p, q in zip(self.special_p, self.special_js)],
        }

    # -------------------------------------------------
    # 고유값 트랙
    # -------------------------------------------------
    def killer_ells(self) -> list[int]:
        out: list[int] = []
        for q in self.special_js:
            out.append(ell_of(q, 1))
            if self.mode is KillerMode.NONCOMMUTATIVE:
                out.append(ell_of(q, 2))
        return sorted(out)

    def eigen_track(self, max_probed: int) -> EigenTrack:
        alpha = self.omega
        s = float(self.sign)
        p_abs = np.abs(np.asarray(self.special_p, dtype=float))
        p_signed = np.asarray(self.special_p, dtype=float)

        def gen(ells: np.ndarray) -> np.ndarray:
            js, ms = split_ells(ells)
            jf = js.astype(float)
            seq = self.sequence(js)
            match, pos = self._special_lookup(js)
            if self.mode is KillerMode.NONCOMMUTATIVE:
                r = np.sqrt(alpha * alpha * jf * jf + seq * seq)
                r[match] = p_abs[pos[match]]
                return (np.where(ms == 1, -s, s) * r).astype(complex)
            vals = np.where(ms == 1, -alpha * jf, alpha * jf) + seq
            hit = match & (ms == 1)
            vals[hit] = -p_signed[pos[hit]]
            return vals.astype(complex)

        exact = self._exact_rule()
        if exact is None:
            log.warning("[Lab] α 가 2차 무리수가 아니어서 정확 규칙이 없습니다 (float 판정).")
        return EigenTrack.from_function(
            gen,
            max_probed,
            exact=exact,
            level0=0j,
            description=f"killer {self.mode.value}",
        )

    def _exact_rule(self):
        aq = self.alpha_exact
        if aq is None:
            return None
        special = dict(zip(self.special_js, zip(self.special_p, self.special_exact)))
        s = self.sign

        if self.mode is KillerMode.NONCOMMUTATIVE:
            a2 = aq.square()

            def rule(ell: int) -> ExactValue:
                j, m = index_map(ell)
                if j in special:
                    p = abs(special[j][0])
                    return Fraction(-s * p if m == 1 else s * p)
                sq = a2 * (j * j) + j
                if not sq.is_rational:
                    return None
                num, den = sq.x.numerator, sq.x.denominator
                rn, rd = math.isqrt(num), math.isqrt(den)
                if rn * rn != num or rd * rd != den:
                    return None
                root = Fraction(rn, rd)
                return -s * root if m == 1 else s * root

            return rule

        def rule_comm(ell: int) -> ExactValue:
            j, m = index_map(ell)
            base = aq * (-j if m == 1 else j)
            if j in special:
                return base + special[j][1]
            root = sqrt_in_field(j, aq.d)
            return None if root is None else base + root

        return rule_comm

    def certificate(self, ell_max: int, track: Optional[EigenTrack] = None) -> KillerCertificate:
        """구성한 적중 {ℓ(q_k)} 이 정확 탐색 결과에 모두 들어 있는지."""
        tr = track if track is not None else self.eigen_track(ell_max)
        hits = gamma_Q_scan(tr, ell_max, 0.0)
        expected = [e for e in self.killer_ells() if e <= ell_max]
        hit_set = set(hits)
        return KillerCertificate(hits, expected, set(expected) <= hit_set, sorted(hit_set - set(expected)))


def _alpha_sign(alpha: CFExpansion) -> int:
    val = alpha.value
    if isinstance(val, QuadraticValue):
        return val.value.sign()
    if isinstance(val, HighPrecisionValue):
        if val.lo > 0:
            return 1
        if val.hi < 0:
            return -1
        raise PrecisionExhausted("α 의 부호를 구간에서 정할 수 없습니다.")
    raise RationalAlpha("유리수 α 에서는 killer 섭동을 만들 수 없습니다.")


def build_killer(alpha: CFExpansion, mode: KillerMode | str, count: int) -> KillerPerturbation:
    """j = q_k 에서 σ = ±p_k ∈ Z 가 되도록 γ_j (또는 r_j) 를 고른 섭동."""
    kmode = KillerMode(mode)
    if count < 1:
        raise ValueError("count 는 1 이상이어야 합니다.")
    if isinstance(alpha.value, RationalValue):
        raise RationalAlpha("유리수 α 에서는 killer 섭동을 만들 수 없습니다.")
    sign = _alpha_sign(alpha)
    side = "Above" if sign > 0 else "Below"
    pairs = killer_convergents(alpha, side, count)

    val = alpha.value
    exact_alpha: Union[QuadraticNumber, Fraction]
    if isinstance(val, QuadraticValue):
        exact_alpha = val.value
    else:
        exact_alpha = (val.lo + val.hi) / 2

    values: list[float] = []
    exacts: list[Union[QuadraticNumber, Fraction]] = []
    for p, q in pairs:
        if kmode is KillerMode.NONCOMMUTATIVE:
            g2 = p * p - exact_alpha * exact_alpha * (q * q)
            exacts.append(g2)
            values.append(math.sqrt(float(g2)))
        else:
            r = exact_alpha * q - p
            exacts.append(r)
            values.append(float(r))
    log.info("[Lab] killer %s side=%s q=%s", kmode.value, side, [q for _, q in pairs])
    return KillerPerturbation(
        alpha,
        kmode,
        side,
        sign,
        tuple(q for _, q in pairs),
        tuple(p for p, _ in pairs),
        tuple(values),
        tuple(exacts),
    )


# =====================================================
# 2️⃣ 증인 쌍 (v, g)
# =====================================================
@dataclass(frozen=True)
class WitnessPair:
    v: CoeffTable
    g: CoeffTable
    tau_picks: tuple[int, ...]
    ell_picks: tuple[int, ...]
    gaps: tuple[complex, ...]
    residual: float

    def achieved_rates(self) -> list[float]:
        """−log|σ_ℓ − τ| / log ℓ  (0 이면 inf)."""
        out = []
        for ell, gap in zip(self.ell_picks, self.gaps):
            mag = abs(gap)
            out.append(math.inf if mag == 0 else (-math.log(mag) / math.log(ell) if ell > 1 else math.nan))
        return out


Pick = Union[int, tuple[int, int]]


def build_witness(track: EigenTrack, picks: Sequence[Pick]) -> WitnessPair:
    """
    픽 (ℓ_n, τ_n) 마다 v 레벨 j(ℓ_n), 성분 m−1 에 e^{−iτ_n t}, g 에 i(σ − τ_n)e^{−iτ_n t}.
    τ_n 을 생략하면 round(Re σ_ℓ).
    """
    if not picks:
        raise EmptyPicks("picks 가 비어 있습니다.")
    norm: list[tuple[int, Optional[int]]] = [(p, None) if isinstance(p, (int, np.integer)) else (int(p[0]), int(p[1])) for p in picks]
    ells = [int(e) for e, _ in norm]
    if len(set(ells)) != len(ells):
        raise ValueError("같은 ℓ 이 picks 에 두 번 있습니다.")
    sig = track.values(np.array(ells, dtype=np.int64))

    taus: list[int] = []
    gaps: list[complex] = []
    for (ell, tau), s in zip(norm, sig):
        t = int(round(s.real)) if tau is None else tau
        gap = complex(s) - t
        if track.exact is not None:
            val = track.exact(ell)
            if val is not None:
                gap = complex(float(val - t))
        taus.append(t)
        gaps.append(gap)

    levels_n: dict[int, int] = {}
    for ell, t in zip(ells, taus):
        j, _ = index_map(ell)
        levels_n[j] = max(levels_n.get(j, 0), abs(t))
    v_arr = {j: np.zeros((2, 2 * n + 1), dtype=complex) for j, n in levels_n.items()}
    g_arr = {j: np.zeros((2, 2 * n + 1), dtype=complex) for j, n in levels_n.items()}
    sigma_eff = {j: np.zeros(2, dtype=complex) for j in levels_n}
    for ell, t, gap in zip(ells, taus, gaps):
        j, m = index_map(ell)
        n = levels_n[j]
        v_arr[j][m - 1, n - t] = 1.0
        g_arr[j][m - 1, n - t] = 1j * gap
        sigma_eff[j][m - 1] = t + gap

    # (∂_t + iσ)v − g 를 스펙트럴로 재확인
    residual = 0.0
    for j, arr in v_arr.items():
        lhs = derivative(arr, 1) + 1j * sigma_eff[j][:, None] * arr
        residual = max(residual, float(np.max(np.abs(lhs - g_arr[j]))))

    max_j = max(levels_n)
    log.debug("[Lab] witness picks=%d max_j=%d residual=%.2e", len(ells), max_j, residual)
    return WitnessPair(
        CoeffTable(max_j, v_arr),
        CoeffTable(max_j, g_arr),
        tuple(taus),
        tuple(ells),
        tuple(gaps),
        residual,
    )


# =====================================================
# 3️⃣ 모드별 풀이 (∂_t + iσ)v = g
# =====================================================
class SolveMethod(str, enum.Enum):
    FOURIER = "FourierSpace"
    INTEGRAL = "Integral"


def _check_sigma(sigma: complex) -> None:
    s = complex(sigma)
    if s.imag == 0 and s.real == round(s.real):
        raise IntegerSigma(f"σ={s.real:g} 가 정수입니다 (해가 유일하지 않음).")
    dist = math.hypot(abs(s.real - round(s.real)), s.imag)
    if dist < RESONANCE_TOL:
        raise ResonanceNear(f"dist(σ, Z)={dist:.3e} < {RESONANCE_TOL:g}: 전치 인자가 발산합니다.")


def solve_integral(sigma: complex, samples: np.ndarray, *, order: int = 20) -> np.ndarray:
    """등간격 격자 표본 g(t_k) → 같은 격자에서의 v(t_k) (적분 공식)."""
    _check_sigma(sigma)
    s = complex(sigma)
    G = samples.shape[-1]
    N = (G - 1) // 2
    ghat = modes_from_grid(np.asarray(samples, dtype=complex), N)
    n = mode_numbers(N)
    nodes, weights = gauss_legendre_panels(0.0, 2.0 * math.pi, panels_for(abs(s) + N + 1), order)
    if s.imag <= 0:
        pref = 1.0 / (1.0 - np.exp(-2j * math.pi * s))
        phase = np.exp(-1j * np.outer(s + n, nodes))
    else:
        pref = 1.0 / (np.exp(2j * math.pi * s) - 1.0)
        phase = np.exp(1j * np.outer(s + n, nodes))
    vhat = pref * ghat * (phase @ weights)
    return eval_on_grid(vhat, G)


def solve_mode(
    sigma: complex,
    g: np.ndarray,
    method: SolveMethod | str = SolveMethod.FOURIER,
    *,
    grid_size: Optional[int] = None,
) -> np.ndarray:
    """
    FourierSpace: v̂_n = ĝ_n / (i(n + σ))  → t-모드 벡터
    Integral    : 격자 표본 (기본 크기 max(4N+1, 8(N+1)))
    """
    kind = SolveMethod(method)
    gm = np.asarray(g, dtype=complex)
    _check_sigma(sigma)
    N = n_modes(gm)
    if kind is SolveMethod.FOURIER:
        return gm / (1j * (mode_numbers(N) + complex(sigma)))
    G = grid_size if grid_size is not None else max(4 * N + 1, 8 * (N + 1))
    if G < 4 * N:
        raise ValueError(f"격자 크기 {G} 가 4·N_t={4 * N} 보다 작습니다.")
    return solve_integral(sigma, eval_on_grid(gm, G))


@dataclass(frozen=True)
class SystemSolution:
    u: CoeffTable
    residuals: dict[int, float] = field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)


def _as_t_dependent(arr: np.ndarray) -> np.ndarray:
    return arr[:, None] if arr.ndim == 1 else arr


def solve_system(omega: complex, family: SymbolFamily, eps: complex, f: CoeffTable) -> SystemSolution:
    """
    레벨 j 마다 Q_j(ε)^⊤ = SΛS⁻¹, V = S⁻¹U, G = iS⁻¹F → (∂_t + iσ_m)V_m = G_m → U = SV.
    잔차 ‖(n + Q^⊤)Û_n − F̂_n‖_max 를 레벨별로 보고.
    """
    out: dict[int, np.ndarray] = {}
    residuals: dict[int, float] = {}
    for j in f.js():
        F = _as_t_dependent(f.level(j))
        n = mode_numbers(n_modes(F))
        if j == 0:
            sigma0 = complex(eps) * complex(family.scalar_at_zero)
            try:
                U = solve_mode(sigma0, 1j * F[0])[None, :]
            except (IntegerSigma, ResonanceNear) as exc:
                raise type(exc)(str(exc), j=0, m=1) from exc
            res = (n + sigma0) * U[0] - F[0]
        else:
            QT = perturbed_symbols(omega, family, [j], eps)[0].T
            pair = eigen2(QT).require(j=j)
            Gm = 1j * (pair.S_inv @ F)
            V = np.empty_like(Gm)
            for m in range(2):
                try:
                    V[m] = solve_mode(pair.eigenvalues[m], Gm[m])
                except (IntegerSigma, ResonanceNear) as exc:
                    raise type(exc)(str(exc), j=j, m=m + 1) from exc
            U = pair.S @ V
            res = QT @ U + U * n[None, :] - F
        out[j] = U
        residuals[j] = float(np.max(np.abs(res))) if res.size else 0.0
    log.debug("[Lab] solve_system levels=%d max_res=%.2e", len(out), max(residuals.values(), default=0.0))
    return SystemSolution(CoeffTable(f.max_j, out), residuals)


# =====================================================
# 4️⃣ 보조정리 비교: dist(σ, Z) vs |1 − e^{−2πiσ}|
# =====================================================
@dataclass(frozen=True)
class Lt2Table:
    ells: np.ndarray
    dist: np.ndarray
    lemma: np.ndarray
    dist_slope: float
    lemma_slope: float

    def rows(self) -> list[tuple[int, float, float]]:
        return [(int(e), float(d), float(q)) for e, d, q in zip(self.ells, self.dist, self.lemma)]


def lt2_probe(track: EigenTrack, ell_range: tuple[int, int]) -> Lt2Table:
    """[lo, hi] 의 각 ℓ 에서 두 양과 각각의 log-log 기울기."""
    lo, hi = ell_range
    if not 1 <= lo <= hi <= track.max_probed:
        raise ValueError(f"ℓ 범위 [{lo}, {hi}] 가 프로브 깊이 {track.max_probed} 를 벗어납니다.")
    ells = np.arange(lo, hi + 1, dtype=np.int64)
    sig = track.values(ells)
    reduced = sig - np.rint(sig.real)
    dist = np.hypot(np.abs(reduced.real), sig.imag)
    lemma = np.abs(np.expm1(-2j * np.pi * reduced))

    def slope(y: np.ndarray) -> float:
        try:
            return fit_loglog(ells, y).slope
        except ValueError:
            return math.nan

    return Lt2Table(ells, dist, lemma, slope(dist), slope(lemma))
