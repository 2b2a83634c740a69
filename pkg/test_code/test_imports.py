"""
test_imports.py
────────────────────────────────────────────────────────
- import_test.py 의 대상 모듈/속성이 모두 임포트되는지
"""

from __future__ import annotations

import importlib

import pytest

import import_test


@pytest.mark.parametrize("mod_name, members", import_test.TARGETS)
def test_target_imports(mod_name, members):
    assert import_test.try_import(mod_name, members)


@pytest.mark.parametrize(
    "mod_name",
    [
        "ghtorus.drivers.symbols",
        "ghtorus.services.diophantine",
        "ghtorus.services.gh_lab",
        "ghtorus.services.scenario",
    ],
)
def test_all_names_resolve(mod_name):
    mod = importlib.import_module(mod_name)
    for name in getattr(mod, "__all__", []):
        assert hasattr(mod, name), name


def test_smoke_script_passes(capsys):
    assert import_test.main() == 0
    assert "RESULT: PASS" in capsys.readouterr().out
