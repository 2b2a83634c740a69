"""
drivers/symbols.py
────────────────────────────────────────────────────────
- (Driver Layer) T¹ 위 E = -D_x² 불변 연산자의 행렬 심볼
- 레벨 j ≥ 1 : 2x2 복소 행렬 R_j = [[a_j, b_j], [c_j, d_j]]  (기저 e^{∓ijx})
- 레벨 j = 0 : 스칼라 R_0  (d_0 = 1)
- 심볼은 "규칙(함수)"으로 보관 → j 범위 제한 없음, 조회 값은 캐시

핵심 연산
1) symbol_at          : R_j 조회
2) apply_symbol       : 계수 테이블에 R_j^⊤ 작용
3) estimate_order     : log‖R_j‖ vs log j 적합 (max-entry 노름)
4) commutator_with_dx : [D_j, R_j]
5) normality_check    : ‖MM* − M*M‖ ≤ tol

!! 주의 사항 !!
- 계수에는 R_j 가 아니라 전치 R_j^⊤ 가 작용 (D_t + Q_j^⊤ 형태와 일치)
- 규칙 함수는 numpy 정수 배열 js 를 받아 (a, b, c, d) 배열 4개를 돌려줘야 함
- SymbolFamily 는 eq=False → 동일 객체 기준 해시 (캐시 키로 사용)

📌 JSON 스펙 (시나리오의 "perturbation")
  {"kind": "offdiag_gamma", "gamma": SEQ}
  {"kind": "diagonal_r",    "r": SEQ}
  {"kind": "general",       "a": SEQ, "b": SEQ, "c": SEQ, "d": SEQ}
  {"kind": "nilpotent",     "c": SEQ}
  {"kind": "constant",      "value": [re, im]}
  SEQ = {"coef": 수 또는 [re, im], "power": p}   →  coef · j^p
  (killer_* 종류는 services/gh_lab.py 에서 생성)
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any, Callable, Mapping, Optional

import numpy as np

from ghtorus.drivers.loglog import fit_loglog
from ghtorus.errors import ShapeMismatch, ZeroSymbol

log = logging.getLogger(__name__)

EntryArrays = tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]
EntryRule = Callable[[np.ndarray], EntryArrays]


# =====================================================
# 1️⃣ 수열 규칙: coef · j^power
# =====================================================
def as_complex(value: Any) -> complex:
    """수 또는 [re, im] → complex."""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError("복소수는 [re, im] 길이 2 배열이어야 합니다.")
        return complex(float(value[0]), float(value[1]))
    return complex(value)


@dataclass(frozen=True)
class PowerSequence:
    coef: complex = 0j
    power: float = 0.0

    def __call__(self, js: np.ndarray) -> np.ndarray:
        jf = np.asarray(js, dtype=float)
        if self.coef == 0:
            return np.zeros(jf.shape, dtype=complex)
        return self.coef * jf ** self.power

    @property
    def growth(self) -> float:
        return self.power if self.coef != 0 else 0.0

    @classmethod
    def from_spec(cls, spec: Mapping[str, Any] | None) -> "PowerSequence":
        if spec is None:
            return cls()
        return cls(as_complex(spec.get("coef", 0.0)), float(spec.get("power", 0.0)))

    def to_spec(self) -> dict:
        return {"coef": [self.coef.real, self.coef.imag], "power": self.power}


# =====================================================
# 2️⃣ 도메인 타입
# =====================================================
@dataclass(frozen=True, eq=False)
class SymbolFamily:
    """
    행렬 심볼 규칙 j ↦ R_j (+ 스칼라 R_0).
    declared_delta: ‖R_j‖ ≤ C j^δ 의 선언 지수
    """

    entries: EntryRule
    scalar_at_zero: complex = 0j
    declared_delta: float = 0.0
    description: str = ""
    spec: Optional[Mapping[str, Any]] = None

    def matrices(self, js: np.ndarray | list[int]) -> np.ndarray:
        """js (j ≥ 1) 에 대한 R_j 배치, 모양 (n, 2, 2)."""
        ja = np.asarray(js, dtype=np.int64)
        if ja.size and ja.min() < 1:
            raise ValueError("matrices() 는 j >= 1 만 받습니다. (j = 0 은 scalar_at_zero)")
        a, b, c, d = (np.broadcast_to(np.asarray(x, dtype=complex), ja.shape) for x in self.entries(ja))
        out = np.empty(ja.shape + (2, 2), dtype=complex)
        out[..., 0, 0] = a
        out[..., 0, 1] = b
        out[..., 1, 0] = c
        out[..., 1, 1] = d
        return out

    def is_commutative(self, js: np.ndarray | list[int]) -> bool:
        """probe 범위에서 b_j = c_j = 0 이면 [D_x, R] = 0."""
        mats = self.matrices(js)
        return bool(np.all(mats[..., 0, 1] == 0) and np.all(mats[..., 1, 0] == 0))


@dataclass(frozen=True)
class DiagSymbol:
    """D_x 의 심볼 D_j = diag(-j, j) (정수 정확)."""

    j: int

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[-self.j, 0], [0, self.j]], dtype=np.int64)

    def scaled(self, omega: complex) -> np.ndarray:
        return omega * self.matrix.astype(complex)


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=complex, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class CoeffTable:
    """
    푸리에 계수 테이블 (희소: 없는 레벨은 0).
    - x 전용   : levels[j].shape == (d_j,)
    - t 의존   : levels[j].shape == (d_j, 2N_t+1)  (레벨마다 N_t 하나)
    """

    max_j: int
    levels: Mapping[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self) -> None:
        frozen: dict[int, np.ndarray] = {}
        kinds = set()
        for j in sorted(self.levels):
            arr = np.asarray(self.levels[j])
            if j < 0 or j > self.max_j:
                raise ShapeMismatch(f"레벨 j={j} 가 범위 [0, {self.max_j}] 밖입니다.", j=j)
            dj = 1 if j == 0 else 2
            if arr.ndim not in (1, 2) or arr.shape[0] != dj:
                raise ShapeMismatch(f"레벨 j={j} 는 성분이 {dj}개여야 합니다: shape={arr.shape}", j=j)
            if arr.ndim == 2 and arr.shape[1] % 2 != 1:
                raise ShapeMismatch(f"레벨 j={j} 의 t-모드 길이는 홀수여야 합니다.", j=j)
            kinds.add(arr.ndim)
            frozen[j] = _freeze(arr)
        if len(kinds) > 1:
            raise ShapeMismatch("x 전용 레벨과 t 의존 레벨을 섞을 수 없습니다.")
        object.__setattr__(self, "levels", MappingProxyType(frozen))

    # -------------------------------------------------
    # 조회
    # -------------------------------------------------
    @property
    def t_dependent(self) -> bool:
        return any(arr.ndim == 2 for arr in self.levels.values())

    def js(self) -> list[int]:
        return list(self.levels)

    def level(self, j: int) -> np.ndarray:
        if j in self.levels:
            return self.levels[j]
        dj = 1 if j == 0 else 2
        return np.zeros((dj, 1) if self.t_dependent else (dj,), dtype=complex)

    def n_t(self, j: int) -> int:
        arr = self.level(j)
        return (arr.shape[1] - 1) // 2 if arr.ndim == 2 else 0

    def level_norms(self) -> tuple[np.ndarray, np.ndarray]:
        """(js, ‖û_j‖). t 의존이면 모드 전체의 L² (파스발)."""
        js = np.array(self.js(), dtype=np.int64)
        norms = np.array([float(np.linalg.norm(self.levels[j])) for j in self.js()])
        return js, norms

    def scaled(self, factor: complex) -> "CoeffTable":
        return CoeffTable(self.max_j, {j: factor * arr for j, arr in self.levels.items()})

    def __add__(self, other: "CoeffTable") -> "CoeffTable":
        if self.t_dependent or other.t_dependent:
            raise ShapeMismatch("덧셈은 x 전용 테이블만 지원합니다.")
        out = {j: np.array(arr) for j, arr in self.levels.items()}
        for j, arr in other.levels.items():
            out[j] = out[j] + arr if j in out else np.array(arr)
        return CoeffTable(max(self.max_j, other.max_j), out)


# =====================================================
# 3️⃣ 연산
# =====================================================
@functools.lru_cache(maxsize=8192)
def _entries_cached(family: SymbolFamily, j: int) -> tuple[complex, complex, complex, complex]:
    mat = family.matrices(np.array([j]))[0]
    return complex(mat[0, 0]), complex(mat[0, 1]), complex(mat[1, 0]), complex(mat[1, 1])


def symbol_at(family: SymbolFamily, j: int) -> np.ndarray | complex:
    """R_j (j ≥ 1 이면 2x2, j = 0 이면 스칼라 R_0)."""
    if j < 0:
        raise ValueError("j 는 0 이상이어야 합니다.")
    if j == 0:
        return complex(family.scalar_at_zero)
    a, b, c, d = _entries_cached(family, int(j))
    return np.array([[a, b], [c, d]], dtype=complex)


def perturbed_symbols(omega: complex, family: SymbolFamily, js: np.ndarray | list[int], eps: complex = 1.0) -> np.ndarray:
    """Q_j(ε) = ωD_j + εR_j 배치, 모양 (n, 2, 2)."""
    ja = np.asarray(js, dtype=np.int64)
    q = eps * family.matrices(ja)
    q[..., 0, 0] -= omega * ja
    q[..., 1, 1] += omega * ja
    return q


def apply_symbol(family: SymbolFamily, u: CoeffTable) -> CoeffTable:
    """레벨별 R_j^⊤ û_j (j = 0 은 R_0 · û_0). x 전용 데이터만."""
    if u.t_dependent:
        raise ShapeMismatch("apply_symbol 은 x 전용 계수만 받습니다.")
    out: dict[int, np.ndarray] = {}
    js = [j for j in u.js() if j >= 1]
    if 0 in u.levels:
        out[0] = family.scalar_at_zero * u.levels[0]
    if js:
        mats = family.matrices(np.array(js))
        vecs = np.stack([u.levels[j] for j in js])
        res = np.einsum("nki,nk->ni", mats, vecs)
        for idx, j in enumerate(js):
            out[j] = res[idx]
    return CoeffTable(u.max_j, out)


@dataclass(frozen=True)
class OrderEstimate:
    slope: float
    intercept: float
    residual: float


def max_entry_norms(family: SymbolFamily, js: np.ndarray) -> np.ndarray:
    return np.abs(family.matrices(js)).max(axis=(-2, -1))


def estimate_order(family: SymbolFamily, j_min: int, j_max: int) -> OrderEstimate:
    """log‖R_j‖ vs log j (j_min..j_max 포함) 최소제곱 → 심볼 차수 추정."""
    if not 1 <= j_min < j_max:
        raise ValueError("1 <= j_min < j_max 이어야 합니다.")
    js = np.arange(j_min, j_max + 1)
    norms = max_entry_norms(family, js)
    if not np.any(norms > 0):
        raise ZeroSymbol(f"[{j_min}, {j_max}] 범위에서 심볼이 전부 0 입니다.")
    fit = fit_loglog(js, norms)
    log.debug("[Order] %s slope=%.6f resid=%.3e", family.description, fit.slope, fit.residual)
    return OrderEstimate(fit.slope, fit.intercept, fit.residual)


def commutator_with_dx(family: SymbolFamily, j: int) -> np.ndarray:
    """D_j R_j − R_j D_j."""
    if j < 1:
        raise ValueError("j 는 1 이상이어야 합니다.")
    D = DiagSymbol(j).matrix.astype(complex)
    R = symbol_at(family, j)
    return D @ R - R @ D


def normality_check(matrix: np.ndarray, tol: float) -> bool:
    if tol <= 0:
        raise ValueError("tol 은 양수여야 합니다.")
    M = np.asarray(matrix, dtype=complex)
    H = M.conj().T
    return bool(np.abs(M @ H - H @ M).max() <= tol)


# =====================================================
# 4️⃣ 생성자 (JSON 스펙 포함)
# =====================================================
def zero_family() -> SymbolFamily:
    def rule(js: np.ndarray) -> EntryArrays:
        z = np.zeros(js.shape, dtype=complex)
        return z, z, z, z

    return SymbolFamily(rule, 0j, 0.0, "zero", {"kind": "offdiag_gamma", "gamma": {"coef": 0.0, "power": 0.0}})


def general_family(
    a: PowerSequence,
    b: PowerSequence,
    c: PowerSequence,
    d: PowerSequence,
    *,
    r0: complex = 0j,
    description: str = "general",
    spec: Optional[Mapping[str, Any]] = None,
) -> SymbolFamily:
    def rule(js: np.ndarray) -> EntryArrays:
        return a(js), b(js), c(js), d(js)

    delta = max(s.growth for s in (a, b, c, d))
    return SymbolFamily(rule, complex(r0), delta, description, spec)


def offdiag_gamma(gamma: PowerSequence, *, r0: complex = 0j, spec: Optional[Mapping[str, Any]] = None) -> SymbolFamily:
    zero = PowerSequence()
    return general_family(zero, gamma, gamma, zero, r0=r0, description=f"offdiag γ={gamma.coef}·j^{gamma.power}", spec=spec)


def diagonal_r(r: PowerSequence, *, r0: complex = 0j, spec: Optional[Mapping[str, Any]] = None) -> SymbolFamily:
    zero = PowerSequence()
    return general_family(r, zero, zero, r, r0=r0, description=f"diagonal r={r.coef}·j^{r.power}", spec=spec)


def nilpotent(c: PowerSequence, *, r0: complex = 0j, spec: Optional[Mapping[str, Any]] = None) -> SymbolFamily:
    zero = PowerSequence()
    return general_family(zero, zero, c, zero, r0=r0, description=f"nilpotent c={c.coef}·j^{c.power}", spec=spec)


def constant_family(value: complex) -> SymbolFamily:
    """R = c·I (스칼라 ε 섭동). R_0 = c."""
    seq = PowerSequence(complex(value), 0.0)
    spec = {"kind": "constant", "value": [complex(value).real, complex(value).imag]}
    return diagonal_r(seq, r0=complex(value), spec=spec)


FAMILY_KINDS = ("offdiag_gamma", "diagonal_r", "general", "nilpotent", "constant")


def family_from_spec(spec: Mapping[str, Any]) -> SymbolFamily:
    """기본 종류의 JSON 스펙 → SymbolFamily. killer_* 는 여기서 다루지 않음."""
    kind = spec.get("kind")
    r0 = as_complex(spec.get("r0", 0.0))
    if kind == "offdiag_gamma":
        return offdiag_gamma(PowerSequence.from_spec(spec.get("gamma")), r0=r0, spec=dict(spec))
    if kind == "diagonal_r":
        return diagonal_r(PowerSequence.from_spec(spec.get("r")), r0=r0, spec=dict(spec))
    if kind == "nilpotent":
        return nilpotent(PowerSequence.from_spec(spec.get("c")), r0=r0, spec=dict(spec))
    if kind == "general":
        seqs = [PowerSequence.from_spec(spec.get(key)) for key in ("a", "b", "c", "d")]
        return general_family(*seqs, r0=r0, description="general", spec=dict(spec))
    if kind == "constant":
        return constant_family(as_complex(spec.get("value", 0.0)))
    raise ValueError(f"알 수 없는 심볼 종류: {kind!r}")


if __name__ == "__main__":
    fam = offdiag_gamma(PowerSequence(1.0, 0.5))
    print("R_4 =", symbol_at(fam, 4))
    print("[D, R]_3 =", commutator_with_dx(fam, 3))
    print("order ≈", estimate_order(fam, 16, 8192))
