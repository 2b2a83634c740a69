"""
services/scenario.py
────────────────────────────────────────────────────────
- (Service Layer) JSON 시나리오 → 각 모듈 호출 → Report
- 구성
  • SCENARIO_SCHEMA / Scenario   : jsonschema 검증 + 왕복 가능한 값 객체
  • list_builtins / load_builtin : ghtorus/scenarios/*.json
  • run_scenario                 : 차수 추정, ε 별 GH 판정, 강한 대각화, 급수 비교,
                                   killer 인증, 증인, 모드별 풀이 데모를 모아 Report 로

!! 주의 사항 !!
- 스키마 오류는 ScenarioError (exit 1), pointer = 첫 오류의 JSON pointer
- 분석 오류(GHError)는 섹션 단위로 잡아 report["errors"] 에 넣고 exit 2
- |ε| ≤ 1 허용 (ε = 1 은 배율 없는 killer 연산자), 급수/S(ε)/경험 반경은 |ε| < 1 에서만
- 로그와 실행시간은 report 에 들어가지 않음 (GH_REPORT_TIMING=1 일 때만 timing)

📌 Report.sections 의 각 항목은 "module" 키로 만든 모듈을 표시
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping, Optional, Sequence, Union

import numpy as np
from jsonschema import Draft7Validator

from config import (
    ELL_MAX_MIN,
    EIG_TOL,
    LIOUVILLE_RUN,
    LIOUVILLE_STEP,
    REPORT_TIMING,
    SERIES_ORDER,
    SERIES_ORDER_MAX,
    SLOPE_THRESHOLD,
    default_windows,
)
from ghtorus import __version__
from ghtorus.drivers.contfrac import (
    AlphaValue,
    alpha_to_spec,
    expansion_for,
    parse_alpha,
)
from ghtorus.drivers.symbols import (
    CoeffTable,
    SymbolFamily,
    as_complex,
    estimate_order,
    family_from_spec,
    symbol_at,
    zero_family,
)
from ghtorus.errors import GHError, ScenarioError, ZeroSymbol
from ghtorus.services.diagonalizer import strong_diag_profile
from ghtorus.services.diophantine import (
    EigenTrack,
    GHVerdict,
    TypePreservation,
    analyze_track,
    log_distances,
    split_ells,
)
from ghtorus.services.fourier_decay import classify_decay
from ghtorus.services.gh_lab import (
    KillerMode,
    KillerPerturbation,
    build_killer,
    build_witness,
    lt2_probe,
    solve_system,
)
from ghtorus.services.perturbation import (
    assemble_S_eps,
    empirical_radius,
    kato_series,
    series_vs_direct,
)

log = logging.getLogger(__name__)

BUILTIN_DIR = Path(__file__).resolve().parent.parent / "scenarios"

OUTPUT_KINDS = ("report", "eigen_track", "series", "witness", "solve_demo")
KILLER_KINDS = {"killer_noncommutative": KillerMode.NONCOMMUTATIVE, "killer_commutative": KillerMode.COMMUTATIVE}
FAMILY_KINDS = ("zero", "offdiag_gamma", "diagonal_r", "general", "nilpotent", "constant", *KILLER_KINDS)

PROFILE_J_MAX = 4096
LT2_ELL_MAX = 1024
SOLVE_DEMO_LEVELS = 4


# =====================================================
# 1️⃣ 스키마
# =====================================================
_COMPLEX = {
    "oneOf": [
        {"type": "number"},
        {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
    ]
}
_POWER_SEQ = {
    "type": "object",
    "additionalProperties": False,
    "properties": {"coef": _COMPLEX, "power": {"type": "number"}},
}
_INT_LIKE = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": "^-?[0-9]+$"}]}
_RATIONAL_LIKE = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": "^-?[0-9]+(/[0-9]+)?$"}]}

ALPHA_SCHEMA = {
    "type": "object",
    "minProperties": 1,
    "maxProperties": 1,
    "additionalProperties": False,
    "properties": {
        "rational": {"type": "array", "items": _INT_LIKE, "minItems": 2, "maxItems": 2},
        "quadratic": {
            "type": "object",
            "additionalProperties": False,
            "required": ["d"],
            "properties": {"a": _RATIONAL_LIKE, "b": _RATIONAL_LIKE, "d": _INT_LIKE},
        },
        "decimal": {"type": "string", "minLength": 1},
        "liouville_truncated": {"type": "integer", "minimum": 1, "maximum": 8},
    },
}

PERTURBATION_SCHEMA = {
    "type": "object",
    "required": ["kind"],
    "additionalProperties": False,
    "properties": {
        "kind": {"enum": list(FAMILY_KINDS)},
        "r0": _COMPLEX,
        "gamma": _POWER_SEQ,
        "r": _POWER_SEQ,
        "a": _POWER_SEQ,
        "b": _POWER_SEQ,
        "c": _POWER_SEQ,
        "d": _POWER_SEQ,
        "value": _COMPLEX,
        "count": {"type": "integer", "minimum": 1, "maximum": 64},
        "alpha": ALPHA_SCHEMA,
        "convergents": {"type": "array", "items": {"type": "array", "items": _INT_LIKE}},
    },
}

SCENARIO_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "additionalProperties": False,
    "required": ["name", "perturbation", "epsilon", "ell_max"],
    "anyOf": [{"required": ["omega"]}, {"required": ["alpha"]}],
    "properties": {
        "name": {"type": "string", "pattern": "^[A-Za-z0-9_.-]+$"},
        "description": {"type": "string"},
        "omega": _COMPLEX,
        "alpha": ALPHA_SCHEMA,
        "perturbation": PERTURBATION_SCHEMA,
        "epsilon": {"type": "array", "items": _COMPLEX, "minItems": 1},
        "ell_max": {"type": "integer", "minimum": ELL_MAX_MIN},
        "K": {"type": "integer", "minimum": 1, "maximum": SERIES_ORDER_MAX},
        "outputs": {"type": "array", "items": {"enum": list(OUTPUT_KINDS)}, "uniqueItems": True},
        "series_js": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
        "witness_picks": {
            "type": "array",
            "minItems": 1,
            "items": {
                "oneOf": [
                    {"type": "integer", "minimum": 1},
                    {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
                ]
            },
        },
    },
}

_VALIDATOR = Draft7Validator(SCENARIO_SCHEMA)


def _pointer(path: Sequence[Any]) -> str:
    return "/" + "/".join(str(p) for p in path) if path else "/"


def validate_scenario(data: Any) -> None:
    """스키마 위반이면 첫 오류(경로 순)로 ScenarioError."""
    errors = sorted(_VALIDATOR.iter_errors(data), key=lambda e: [str(p) for p in e.absolute_path])
    if errors:
        first = errors[0]
        raise ScenarioError(first.message, pointer=_pointer(list(first.absolute_path)))


def _complex_to_json(z: complex) -> list[float]:
    return [z.real, z.imag]


# =====================================================
# 2️⃣ Scenario
# =====================================================
@dataclass(frozen=True)
class Scenario:
    name: str
    omega: complex
    perturbation: Mapping[str, Any]
    epsilon_list: tuple[complex, ...]
    ell_max: int
    K: int = SERIES_ORDER
    outputs: tuple[str, ...] = ("report",)
    alpha_spec: Optional[Mapping[str, Any]] = None
    description: str = ""
    series_js: tuple[int, ...] = (10, 100, 1000)
    witness_picks: Optional[tuple[Union[int, tuple[int, int]], ...]] = None

    @classmethod
    def from_dict(cls, data: Any) -> "Scenario":
        validate_scenario(data)
        alpha_spec = data.get("alpha")
        if "omega" in data:
            omega = as_complex(data["omega"])
        else:
            omega = complex(float(_parse_alpha_or_raise(alpha_spec)))
        if omega == 0:
            raise ScenarioError("ω = 0 은 분석할 수 없습니다.", pointer="/omega")
        eps = tuple(as_complex(e) for e in data["epsilon"])
        for idx, e in enumerate(eps):
            if abs(e) > 1:
                raise ScenarioError(f"|ε| ≤ 1 이어야 합니다: {e}", pointer=f"/epsilon/{idx}")
        kind = data["perturbation"]["kind"]
        if kind in KILLER_KINDS and alpha_spec is None:
            raise ScenarioError("killer 섭동에는 alpha 가 필요합니다.", pointer="/alpha")
        if kind in KILLER_KINDS and omega != float(_parse_alpha_or_raise(alpha_spec)):
            raise ScenarioError("killer 섭동은 ω = α 에서만 정의됩니다 (omega 를 생략하세요).", pointer="/omega")
        picks = data.get("witness_picks")
        return cls(
            name=data["name"],
            omega=omega,
            perturbation=dict(data["perturbation"]),
            epsilon_list=eps,
            ell_max=int(data["ell_max"]),
            K=int(data.get("K", SERIES_ORDER)),
            outputs=tuple(data.get("outputs", ["report"])),
            alpha_spec=dict(alpha_spec) if alpha_spec is not None else None,
            description=data.get("description", ""),
            series_js=tuple(int(j) for j in data.get("series_js", [10, 100, 1000])),
            witness_picks=None if picks is None else tuple(p if isinstance(p, int) else (int(p[0]), int(p[1])) for p in picks),
        )

    def to_dict(self) -> dict:
        out: dict[str, Any] = {
            "name": self.name,
            "omega": _complex_to_json(self.omega),
            "perturbation": dict(self.perturbation),
            "epsilon": [_complex_to_json(e) for e in self.epsilon_list],
            "ell_max": self.ell_max,
            "K": self.K,
            "outputs": list(self.outputs),
            "series_js": list(self.series_js),
        }
        if self.alpha_spec is not None:
            out["alpha"] = dict(self.alpha_spec)
        if self.description:
            out["description"] = self.description
        if self.witness_picks is not None:
            out["witness_picks"] = [p if isinstance(p, int) else list(p) for p in self.witness_picks]
        return out

    def with_ell_max(self, ell_max: Optional[int]) -> "Scenario":
        if ell_max is None:
            return self
        if ell_max < ELL_MAX_MIN:
            raise ScenarioError(f"ell_max 는 {ELL_MAX_MIN} 이상이어야 합니다.", pointer="/ell_max")
        return replace(self, ell_max=int(ell_max))

    def windows(self) -> list[tuple[int, int]]:
        return [w for w in default_windows() if w[1] - 1 <= self.ell_max]


def _parse_alpha_or_raise(spec: Optional[Mapping[str, Any]]) -> AlphaValue:
    if spec is None:
        raise ScenarioError("alpha 가 없습니다.", pointer="/alpha")
    try:
        return parse_alpha(spec)
    except (ValueError, ZeroDivisionError) as exc:
        raise ScenarioError(str(exc), pointer="/alpha") from exc


def load_scenario(path: Union[str, Path]) -> Scenario:
    p = Path(path)
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ScenarioError(f"시나리오를 읽을 수 없습니다: {p} ({exc.strerror})") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"JSON 파싱 실패: {p}:{exc.lineno}:{exc.colno} {exc.msg}") from exc
    return Scenario.from_dict(data)


# -------------------------------------------------
# 내장 시나리오
# -------------------------------------------------
def list_builtins() -> list[str]:
    return sorted(p.stem for p in BUILTIN_DIR.glob("*.json"))


def builtin_path(name: str) -> Path:
    path = BUILTIN_DIR / f"{name}.json"
    if not path.is_file():
        raise ScenarioError(f"내장 시나리오가 없습니다: {name!r} (가능: {', '.join(list_builtins())})")
    return path


def load_builtin(name: str) -> Scenario:
    return load_scenario(builtin_path(name))


def dump_builtin(name: str) -> str:
    return builtin_path(name).read_text(encoding="utf-8")


# =====================================================
# 3️⃣ Report
# =====================================================
@dataclass
class Report:
    scenario: Scenario
    sections: dict[str, Any] = field(default_factory=dict)
    tables: dict[str, tuple[list[str], list[tuple]]] = field(default_factory=dict)
    errors: list[dict] = field(default_factory=list)
    timing: Optional[dict[str, float]] = None

    @property
    def exit_code(self) -> int:
        return 2 if self.errors else 0

    def to_dict(self) -> dict:
        out = {
            "scenario": self.scenario.to_dict(),
            "provenance": {
                "package": "ghtorus",
                "version": __version__,
                "config": {
                    "slope_threshold": SLOPE_THRESHOLD,
                    "eig_tol": EIG_TOL,
                    "liouville_step": LIOUVILLE_STEP,
                    "liouville_run": LIOUVILLE_RUN,
                    "windows": [list(w) for w in self.scenario.windows()],
                },
            },
            "errors": list(self.errors),
            **self.sections,
        }
        if self.timing is not None:
            out["timing"] = dict(self.timing)
        return out


class _Run:
    """섹션 하나를 실행하고 GHError 를 report 에 기록. ScenarioError 는 입력 오류라 그대로 전파."""

    def __init__(self, report: Report) -> None:
        self.report = report
        self.timing: dict[str, float] = {}

    def section(self, name: str, fn, *args, **kwargs) -> Any:
        t0 = time.perf_counter()
        try:
            return fn(*args, **kwargs)
        except ScenarioError:
            raise
        except GHError as exc:
            err = exc.to_dict()
            err["section"] = name
            self.report.errors.append(err)
            log.warning("[Scenario] %s 실패: %s", name, exc)
            return None
        finally:
            self.timing[name] = self.timing.get(name, 0.0) + time.perf_counter() - t0


# =====================================================
# 4️⃣ 조립 도우미
# =====================================================
def _is_zero_spec(spec: Mapping[str, Any]) -> bool:
    return spec.get("kind") == "zero"


def build_family(sc: Scenario, alpha: Optional[AlphaValue]) -> tuple[SymbolFamily, Optional[KillerPerturbation]]:
    kind = sc.perturbation["kind"]
    if kind in KILLER_KINDS:
        assert alpha is not None
        count = int(sc.perturbation.get("count", 3))
        sign_side = "Above" if float(alpha) > 0 else "Below"
        killer = build_killer(expansion_for(alpha, sign_side, count), KILLER_KINDS[kind], count)
        return killer.to_family(), killer
    if _is_zero_spec(sc.perturbation):
        return zero_family(), None
    try:
        return family_from_spec(sc.perturbation), None
    except ValueError as exc:
        raise ScenarioError(str(exc), pointer="/perturbation") from exc


def eigen_track_for(
    sc: Scenario,
    family: SymbolFamily,
    eps: complex,
    *,
    alpha: Optional[AlphaValue],
    killer: Optional[KillerPerturbation],
) -> EigenTrack:
    """정확 규칙이 있는 트랙을 우선 사용 (killer ε = 1, 섭동 없는 α)."""
    if killer is not None and eps == 1:
        return killer.eigen_track(sc.ell_max)
    if alpha is not None and (eps == 0 or _is_zero_spec(sc.perturbation)) and sc.omega == float(alpha):
        return EigenTrack.paired(alpha, sc.ell_max)
    return EigenTrack.from_symbol(sc.omega, family, eps, sc.ell_max)


def _alpha_section(alpha: AlphaValue) -> dict:
    cf = expansion_for(alpha, "Above", 8)
    return {
        "module": "diophantine-gh",
        "kind": alpha.kind,
        "spec": alpha_to_spec(alpha),
        "approx": float(alpha),
        "partial_quotients": list(cf.partial_quotients),
        "terminated": cf.terminated,
    }


def _order_section(family: SymbolFamily) -> dict:
    try:
        est = estimate_order(family, 16, 8192)
    except ZeroSymbol:
        return {"module": "symbol-core", "j_range": [16, 8192], "zero_symbol": True}
    return {
        "module": "symbol-core",
        "j_range": [16, 8192],
        "slope": est.slope,
        "intercept": est.intercept,
        "residual": est.residual,
        "declared_delta": family.declared_delta,
    }


def _series_section(sc: Scenario, family: SymbolFamily, eps: complex, eps_index: int, rows: list[tuple]) -> dict:
    out = []
    for j in sc.series_js:
        R = symbol_at(family, j)
        entries = (complex(R[0, 0]), complex(R[0, 1]), complex(R[1, 0]), complex(R[1, 1]))
        series = kato_series(sc.omega, entries, j, sc.K)
        cmp = series_vs_direct(sc.omega, entries, j, eps, sc.K)
        asm = assemble_S_eps(series, eps)
        rows.extend((eps_index, *r) for r in series.rows())
        out.append(
            {
                "j": j,
                "K": sc.K,
                "abs_err": cmp.abs_err,
                "per_label": list(cmp.per_label),
                "series_vals": list(cmp.series_vals),
                "direct_vals": list(cmp.direct_vals),
                "det_margin": asm.det_margin,
                "empirical_radius": empirical_radius(sc.omega, entries, j, sc.K),
            }
        )
    return {"module": "perturbation-engine", "eps": eps, "per_j": out}


def _eigen_rows(track: EigenTrack, ell_max: int, eps_index: int) -> list[tuple]:
    ells = np.arange(1, ell_max + 1, dtype=np.int64)
    vals = track.values(ells)
    js, ms = split_ells(ells)
    dist = np.exp(log_distances(track, ells))
    return [
        (eps_index, int(e), int(j), int(m), float(v.real), float(v.imag), float(d))
        for e, j, m, v, d in zip(ells, js, ms, vals, dist)
    ]


def _default_picks(killer: Optional[KillerPerturbation], ell_max: int) -> Optional[list]:
    if killer is None:
        return None
    return [e for e in killer.killer_ells() if e <= ell_max]


def _witness_section(sc: Scenario, track: EigenTrack, picks: Sequence, rows: list[tuple]) -> dict:
    pair = build_witness(track, list(picks))
    dv = classify_decay(pair.v)
    dg = classify_decay(pair.g)
    for name, table in (("v", pair.v), ("g", pair.g)):
        for j in table.js():
            arr = table.level(j)
            N = (arr.shape[1] - 1) // 2
            for k in range(arr.shape[0]):
                for idx in np.flatnonzero(arr[k]):
                    c = arr[k, idx]
                    rows.append((name, j, k + 1, int(idx) - N, float(c.real), float(c.imag)))
    return {
        "module": "gh-lab",
        "ell_picks": list(pair.ell_picks),
        "tau_picks": list(pair.tau_picks),
        "gaps": list(pair.gaps),
        "achieved_rates": pair.achieved_rates(),
        "residual": pair.residual,
        "decay_v": dv.to_dict(),
        "decay_g": dg.to_dict(),
    }


def _solve_demo_section(sc: Scenario, family: SymbolFamily, eps: complex, rows: list[tuple]) -> dict:
    levels = {}
    for j in range(1, SOLVE_DEMO_LEVELS + 1):
        levels[j] = np.array([[0.5, 1.0, 0.5], [0.25j, 1.0, -0.25j]], dtype=complex) / (j * j)
    sol = solve_system(sc.omega, family, eps, CoeffTable(SOLVE_DEMO_LEVELS, levels))
    for j in sol.u.js():
        arr = sol.u.level(j)
        N = (arr.shape[1] - 1) // 2
        for k in range(arr.shape[0]):
            for idx in range(arr.shape[1]):
                c = arr[k, idx]
                rows.append((j, k + 1, idx - N, float(c.real), float(c.imag)))
    return {
        "module": "gh-lab",
        "eps": eps,
        "residuals": {str(j): r for j, r in sorted(sol.residuals.items())},
        "max_residual": sol.max_residual,
    }


# =====================================================
# 5️⃣ run_scenario
# =====================================================
def run_scenario(source: Union[str, Path, Scenario], *, ell_max: Optional[int] = None) -> Report:
    """시나리오 파일(또는 Scenario) 하나를 끝까지 실행."""
    sc = source if isinstance(source, Scenario) else load_scenario(source)
    sc = sc.with_ell_max(ell_max)
    report = Report(sc)
    run = _Run(report)
    windows = sc.windows()
    log.info("[Scenario] %s: ω=%s ε=%s ell_max=%d", sc.name, sc.omega, list(sc.epsilon_list), sc.ell_max)

    alpha = _parse_alpha_or_raise(sc.alpha_spec) if sc.alpha_spec is not None else None
    if alpha is not None:
        report.sections["alpha"] = run.section("alpha", _alpha_section, alpha)

    built = run.section("perturbation", build_family, sc, alpha)
    if built is None:
        return _finish(report, run)
    family, killer = built
    report.sections["order_estimate"] = run.section("order_estimate", _order_section, family)

    if killer is not None:
        cert = run.section("killer", killer.certificate, sc.ell_max)
        report.sections["killer"] = {
            "module": "gh-lab",
            "perturbation": killer.to_spec(),
            "side": killer.side,
            "special_values": list(killer.special_values),
            "certificate": None if cert is None else cert.to_dict(),
        }

    eigen_rows: list[tuple] = []
    series_rows: list[tuple] = []
    per_eps: list[dict] = []
    verdicts: list[tuple[complex, GHVerdict]] = []
    first_track: Optional[EigenTrack] = None

    for idx, eps in enumerate(sc.epsilon_list):
        entry: dict[str, Any] = {"eps": eps}
        track = eigen_track_for(sc, family, eps, alpha=alpha, killer=killer)
        if first_track is None:
            first_track = track
        gh = run.section(f"gh[{idx}]", analyze_track, track, windows)
        if gh is not None:
            entry["gh"] = {"module": "diophantine-gh", "track": track.description, **gh.to_dict()}
            verdicts.append((eps, gh.verdict))

        prof = run.section(
            f"strong_diag[{idx}]", strong_diag_profile, sc.omega, family, 1, min(PROFILE_J_MAX, (sc.ell_max + 1) // 2), eps=eps
        )
        entry["strong_diag"] = None if prof is None else {"module": "diagonalizer", **prof.to_dict()}

        lt2 = run.section(f"lt2[{idx}]", lt2_probe, track, (1, min(LT2_ELL_MAX, sc.ell_max)))
        if lt2 is not None:
            entry["lt2"] = {"module": "gh-lab", "dist_slope": lt2.dist_slope, "lemma_slope": lt2.lemma_slope}

        if 0 < abs(eps) < 1:
            entry["series"] = run.section(f"series[{idx}]", _series_section, sc, family, eps, idx, series_rows)
        if "eigen_track" in sc.outputs:
            eigen_rows.extend(_eigen_rows(track, sc.ell_max, idx))
        per_eps.append(entry)

    report.sections["per_eps"] = per_eps
    if len(verdicts) > 1:
        report.sections["type_preservation"] = {
            "module": "diophantine-gh",
            **TypePreservation(verdicts, len({v for _, v in verdicts}) == 1).to_dict(),
        }

    if "eigen_track" in sc.outputs:
        report.tables["eigen_track"] = (["eps_index", "ell", "j", "m", "re", "im", "dist_to_Z"], eigen_rows)
    if "series" in sc.outputs:
        report.tables["series"] = (["eps_index", "j", "m", "k", "re", "im"], series_rows)

    if "witness" in sc.outputs and first_track is not None:
        picks = list(sc.witness_picks) if sc.witness_picks is not None else _default_picks(killer, sc.ell_max)
        if picks:
            w_rows: list[tuple] = []
            report.sections["witness"] = run.section("witness", _witness_section, sc, first_track, picks, w_rows)
            report.tables["witness"] = (["field", "j", "k", "n", "re", "im"], w_rows)
        else:
            report.sections["witness"] = {"module": "gh-lab", "skipped": "no picks"}

    if "solve_demo" in sc.outputs:
        s_rows: list[tuple] = []
        report.sections["solve_demo"] = run.section("solve_demo", _solve_demo_section, sc, family, sc.epsilon_list[0], s_rows)
        report.tables["solve_demo"] = (["j", "k", "n", "re", "im"], s_rows)

    return _finish(report, run)


def _finish(report: Report, run: _Run) -> Report:
    if REPORT_TIMING:
        report.timing = {k: round(v, 6) for k, v in sorted(run.timing.items())}
    log.info("[Scenario] %s 완료 (errors=%d)", report.scenario.name, len(report.errors))
    return report


__all__ = [
    "BUILTIN_DIR",
    "OUTPUT_KINDS",
    "Report",
    "SCENARIO_SCHEMA",
    "Scenario",
    "build_family",
    "dump_builtin",
    "eigen_track_for",
    "list_builtins",
    "load_builtin",
    "load_scenario",
    "run_scenario",
    "validate_scenario",
]
