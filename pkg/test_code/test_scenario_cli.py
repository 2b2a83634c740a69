"""
test_scenario_cli.py
────────────────────────────────────────────────────────
- 시나리오 스키마 검증 (JSON pointer), 내장 시나리오 왕복
- run_scenario 판정 / 보고서 결정성 / emit_report 파일
- main() 종료 코드 (0 / 1 / 2)
"""

from __future__ import annotations

import json
from pathlib import Path

import pytest

import main
from ghtorus.errors import ScenarioError
from ghtorus.services.diophantine import GHVerdict
from ghtorus.services.report import emit_report, report_json, to_jsonable
from ghtorus.services.scenario import (
    Scenario,
    list_builtins,
    load_builtin,
    load_scenario,
    run_scenario,
)

BASE = {
    "name": "probe",
    "omega": 1.5,
    "perturbation": {"kind": "offdiag_gamma", "gamma": {"coef": 1.0, "power": 0.5}},
    "epsilon": [0.1],
    "ell_max": 1023,
}


def _with(**changes) -> dict:
    data = json.loads(json.dumps(BASE))
    data.update(changes)
    return data


def _write(tmp_path: Path, data: dict, name: str = "sc.json") -> Path:
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def _verdicts(report) -> list[str]:
    doc = json.loads(report_json(report))
    return [entry["gh"]["verdict"] for entry in doc["per_eps"]]


# =====================================================
# 1️⃣ 스키마
# =====================================================
def test_minimal_scenario_defaults():
    sc = Scenario.from_dict(BASE)
    assert sc.omega == 1.5
    assert sc.K == 8
    assert sc.outputs == ("report",)
    assert sc.windows()[-1] == (512, 1024)


@pytest.mark.parametrize(
    "data, pointer",
    [
        ({k: v for k, v in BASE.items() if k != "ell_max"}, "/"),
        (_with(perturbation={"kind": "bogus"}), "/perturbation/kind"),
        (_with(ell_max=10), "/ell_max"),
        (_with(epsilon=[2.0]), "/epsilon/0"),
        (_with(omega=0.0), "/omega"),
        (_with(outputs=["report", "plot"]), "/outputs/1"),
    ],
)
def test_schema_errors_carry_pointer(data, pointer):
    with pytest.raises(ScenarioError) as info:
        Scenario.from_dict(data)
    assert info.value.pointer == pointer
    assert info.value.exit_code == 1


def test_killer_requires_matching_alpha():
    killer = {"kind": "killer_noncommutative", "count": 2}
    with pytest.raises(ScenarioError) as info:
        Scenario.from_dict(_with(perturbation=killer))
    assert info.value.pointer == "/alpha"

    sqrt2 = {"quadratic": {"a": "0", "b": "1", "d": "2"}}
    with pytest.raises(ScenarioError) as info:
        Scenario.from_dict(_with(perturbation=killer, alpha=sqrt2))
    assert info.value.pointer == "/omega"


def test_load_scenario_io_errors(tmp_path):
    with pytest.raises(ScenarioError):
        load_scenario(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(ScenarioError):
        load_scenario(bad)


# -----------------------------------------------------
# 내장 시나리오
# -----------------------------------------------------
def test_builtins_load_and_round_trip():
    names = list_builtins()
    assert len(names) == 7
    for name in names:
        sc = load_builtin(name)
        assert sc.name == name
        assert Scenario.from_dict(sc.to_dict()) == sc


def test_unknown_builtin():
    with pytest.raises(ScenarioError):
        load_builtin("no_such_scenario")


# =====================================================
# 2️⃣ run_scenario
# =====================================================
def test_vector_field_alone_is_type_one():
    report = run_scenario(load_builtin("gw_vectorfield_goldenratio"), ell_max=1023)
    assert report.errors == []
    assert _verdicts(report) == [GHVerdict.TYPE_I.value]
    assert report.sections["alpha"]["partial_quotients"][:4] == [1, 1, 1, 1]


def test_imaginary_omega_builtin_is_type_two():
    report = run_scenario(load_builtin("beta_nonzero_offdiag"), ell_max=1023)
    assert _verdicts(report) == [GHVerdict.TYPE_II.value]


def test_constant_shift_stays_type_two():
    report = run_scenario(load_builtin("constant_shift_imaginary"), ell_max=1023)
    assert _verdicts(report) == [GHVerdict.TYPE_II.value] * 3


@pytest.mark.parametrize("name", ["killer_sqrt2_noncommutative", "killer_sqrt2_commutative"])
def test_killer_builtins_break_gh(name):
    report = run_scenario(load_builtin(name), ell_max=1023)
    assert _verdicts(report) == [GHVerdict.INTEGER_HITS.value]
    assert report.sections["killer"]["certificate"]["contained"]
    assert report.sections["witness"]["residual"] == 0.0


def test_nilpotent_type_is_kept_across_eps():
    report = run_scenario(load_builtin("nilpotent_goldenratio"), ell_max=4095)
    assert set(_verdicts(report)) == {GHVerdict.TYPE_I.value}
    assert report.sections["type_preservation"]["stable"] is True
    assert report.tables["series"][1]


def test_analysis_error_is_recorded_not_raised():
    data = _with(omega=1.0, perturbation={"kind": "zero"}, epsilon=[0.0], outputs=["report", "solve_demo"])
    report = run_scenario(Scenario.from_dict(data))
    assert report.exit_code == 2
    err = report.errors[0]
    assert (err["type"], err["section"], err["j"], err["m"]) == ("IntegerSigma", "solve_demo", 1, 1)
    assert _verdicts(report) == [GHVerdict.INTEGER_HITS.value]


def _broken_family(spec):
    raise ValueError("bad family")


def test_input_error_inside_section_propagates(monkeypatch):
    monkeypatch.setattr("ghtorus.services.scenario.family_from_spec", _broken_family)
    with pytest.raises(ScenarioError) as info:
        run_scenario(Scenario.from_dict(BASE))
    assert info.value.pointer == "/perturbation"
    assert info.value.exit_code == 1


def test_report_is_deterministic():
    sc = load_builtin("killer_sqrt2_commutative")
    assert report_json(run_scenario(sc)) == report_json(run_scenario(sc))


def test_to_jsonable_special_values():
    assert to_jsonable(float("inf")) == "inf"
    assert to_jsonable(complex(1, float("nan"))) == [1.0, "nan"]
    assert to_jsonable(2 ** 60) == str(2 ** 60)
    assert to_jsonable(GHVerdict.TYPE_II) == "GH_TypeII"


# -----------------------------------------------------
# emit_report
# -----------------------------------------------------
def test_emit_report_files(out_dir):
    report = run_scenario(load_builtin("killer_sqrt2_noncommutative"), ell_max=1023)
    written = emit_report(report, out_dir, ["json", "csv"])
    assert sorted(p.name for p in written) == ["eigen_track.csv", "report.json", "witness.csv"]
    lines = (out_dir / "eigen_track.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "eps_index,ell,j,m,re,im,dist_to_Z"
    assert len(lines) == 1024
    doc = json.loads((out_dir / "report.json").read_text(encoding="utf-8"))
    assert doc["scenario"]["name"] == "killer_sqrt2_noncommutative"
    with pytest.raises(ValueError):
        emit_report(report, out_dir, ["yaml"])


# =====================================================
# 3️⃣ CLI
# =====================================================
def test_cli_list_and_dump(capsys):
    assert main.main(["list-builtins"]) == 0
    assert "killer_sqrt2_commutative" in capsys.readouterr().out.split()
    assert main.main(["dump-builtin", "nilpotent_goldenratio"]) == 0
    assert json.loads(capsys.readouterr().out)["name"] == "nilpotent_goldenratio"


def test_cli_analyze_ok(out_dir, capsys):
    rc = main.main(["analyze", "gw_vectorfield_goldenratio", "--ell-max", "1023", "--out", str(out_dir)])
    assert rc == 0
    assert "✅" in capsys.readouterr().out
    assert (out_dir / "report.json").is_file()


def test_cli_schema_error_exit(tmp_path, out_dir, capsys):
    path = _write(tmp_path, _with(ell_max=3))
    assert main.main(["analyze", str(path), "--out", str(out_dir)]) == 1
    assert "/ell_max" in capsys.readouterr().err
    assert not out_dir.exists()


def test_cli_analysis_error_exit(tmp_path, out_dir):
    data = _with(omega=1.0, perturbation={"kind": "zero"}, epsilon=[0.0], outputs=["report", "solve_demo"])
    rc = main.main(["analyze", str(_write(tmp_path, data)), "--out", str(out_dir), "--quiet"])
    assert rc == 2
    doc = json.loads((out_dir / "report.json").read_text(encoding="utf-8"))
    assert doc["errors"][0]["type"] == "IntegerSigma"


def test_cli_input_error_inside_run_exit(tmp_path, out_dir, monkeypatch):
    monkeypatch.setattr("ghtorus.services.scenario.family_from_spec", _broken_family)
    rc = main.main(["analyze", str(_write(tmp_path, BASE)), "--out", str(out_dir), "--quiet"])
    assert rc == 1
    assert not out_dir.exists()


def test_cli_missing_file_exit(tmp_path):
    assert main.main(["analyze", str(tmp_path / "nope.json"), "--quiet"]) == 1
