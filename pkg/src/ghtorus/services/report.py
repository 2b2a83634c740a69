"""
services/report.py
────────────────────────────────────────────────────────
- (Service Layer) Report → report.json / *.csv
- JSON: sort_keys + indent=2, 끝에 개행 하나 → 같은 입력이면 바이트 동일
- CSV : 헤더 1행, 쉼표 구분, 실수는 17 유효숫자 (format ".17g")

!! 주의 사항 !!
- 복소수는 [re, im], 2^53 을 넘는 정수는 10진 문자열 (Pell 수 잘림 방지)
- inf / nan 은 JSON 에 넣을 수 없으므로 "inf" / "-inf" / "nan" 문자열
- 쓰기 실패는 OSError 를 경로와 함께 다시 올림
"""

from __future__ import annotations

import csv
import enum
import io
import json
import logging
import math
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from config import CSV_DIGITS
from ghtorus.drivers.contfrac import QuadraticNumber
from ghtorus.services.scenario import Report

log = logging.getLogger(__name__)

FORMATS = ("json", "csv")
EXACT_INT_LIMIT = 2 ** 53


# =====================================================
# 1️⃣ JSON 변환
# =====================================================
def _float(x: float) -> Any:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def to_jsonable(obj: Any) -> Any:
    """report 값 → json.dumps 가능한 값 (재귀)."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (int, np.integer)):
        val = int(obj)
        return str(val) if abs(val) >= EXACT_INT_LIMIT else val
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        return [_float(z.real), _float(z.imag)]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, QuadraticNumber):
        return obj.to_spec()
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    raise TypeError(f"JSON 으로 바꿀 수 없는 값: {type(obj).__name__}")


def report_json(report: Report) -> str:
    return json.dumps(to_jsonable(report.to_dict()), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


# =====================================================
# 2️⃣ CSV
# =====================================================
def _cell(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return format(float(value), f".{CSV_DIGITS}g")
    if isinstance(value, (complex, np.complexfloating)):
        raise TypeError("CSV 셀에는 복소수를 넣지 않습니다 (re/im 로 분리).")
    return str(value)


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


# =====================================================
# 3️⃣ emit_report
# =====================================================
def _write(path: Path, text: str) -> Path:
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(exc.errno, f"쓰기 실패: {exc.strerror}", str(path)) from exc
    return path


def emit_report(report: Report, out_dir: str | Path, formats: Iterable[str] = ("json",)) -> list[Path]:
    """
    formats ⊆ {json, csv}.
    - json → report.json
    - csv  → report.tables 중 scenario.outputs 에 있는 것만 <name>.csv
    """
    fmts = set(formats)
    unknown = fmts - set(FORMATS)
    if unknown:
        raise ValueError(f"알 수 없는 형식: {sorted(unknown)}")
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(exc.errno, f"출력 디렉터리를 만들 수 없습니다: {exc.strerror}", str(out)) from exc

    written: list[Path] = []
    if "json" in fmts:
        written.append(_write(out / "report.json", report_json(report)))
    if "csv" in fmts:
        for name in sorted(report.tables):
            if name not in report.scenario.outputs:
                continue
            header, rows = report.tables[name]
            written.append(_write(out / f"{name}.csv", csv_text(header, rows)))
    log.info("[Report] %d files → %s", len(written), out)
    return written


__all__ = ["FORMATS", "csv_text", "emit_report", "report_json", "to_jsonable"]
