"""
conftest.py
────────────────────────────────────────────────────────
- src/ 를 sys.path 에 추가 (main.py 와 같은 보정)
- 공용 픽스처: 시드 고정 rng, √2 / φ 값과 연분수 전개, 임시 출력 폴더
"""

from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

# --- sys.path 보정: 프로젝트의 src 를 import path에 추가 ---
SRC_DIR = Path(__file__).resolve().parent.parent / "src"
if str(SRC_DIR) not in sys.path:
    sys.path.insert(0, str(SRC_DIR))

from config import SEED  # noqa: E402
from ghtorus.drivers.contfrac import QuadraticNumber, QuadraticValue, continued_fraction  # noqa: E402


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(SEED)


@pytest.fixture
def sqrt2() -> QuadraticValue:
    return QuadraticValue(QuadraticNumber.make(0, 1, 2), "sqrt2")


@pytest.fixture
def golden() -> QuadraticValue:
    return QuadraticValue(QuadraticNumber.make(Fraction(1, 2), Fraction(1, 2), 5), "golden")


@pytest.fixture
def sqrt2_cf(sqrt2):
    return continued_fraction(sqrt2, 16)


@pytest.fixture
def golden_cf(golden):
    return continued_fraction(golden, 16)


@pytest.fixture
def out_dir(tmp_path: Path) -> Path:
    return tmp_path / "out"
