#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
main.py
────────────────────────────────────────────────────────
- ghtorus CLI: JSON 시나리오 → GH 분석 → report.json / CSV
- 하위 명령
  • analyze <scenario.json | 내장 이름> [--out DIR] [--formats json,csv] [--ell-max N] [--quiet]
  • list-builtins
  • dump-builtin <name>

종료 코드:
- 0 : 성공
- 2 : 분석 오류 (Defective, PrecisionExhausted, ...) → report 의 errors 에 기록된 채로 파일은 씀
- 1 : 입출력/스키마 오류

필수 의존:
- config.py                    : GH_* 환경변수 기본값
- ghtorus/services/scenario.py : run_scenario / 내장 시나리오
- ghtorus/services/report.py   : emit_report
"""

# =====================================================
# 0️⃣ Imports & Env
# =====================================================
import argparse
import logging
import sys
from pathlib import Path

from dotenv import load_dotenv

# --- sys.path 보정: 이 파일(=src)의 절대경로를 import path에 추가 ---
SRC_DIR = Path(__file__).resolve().parent
if str(SRC_DIR) not in sys.path:
    sys.path.insert(0, str(SRC_DIR))

# config 가 import 시점에 환경변수를 읽으므로 .env 를 먼저 로드
load_dotenv()

from config import LOG_FORMAT, LOG_LEVEL, OUT_DIR  # noqa: E402
from ghtorus.errors import EXIT_IO, EXIT_OK, GHError  # noqa: E402
from ghtorus.services.report import FORMATS, emit_report  # noqa: E402
from ghtorus.services.scenario import (  # noqa: E402
    builtin_path,
    dump_builtin,
    list_builtins,
    run_scenario,
)

log = logging.getLogger("ghtorus.cli")


# =====================================================
# 1️⃣ 인자 파서
# =====================================================
def _formats(text: str) -> list[str]:
    items = [t.strip() for t in text.split(",") if t.strip()]
    bad = [t for t in items if t not in FORMATS]
    if not items or bad:
        raise argparse.ArgumentTypeError(f"--formats 는 {','.join(FORMATS)} 의 부분집합이어야 합니다: {text!r}")
    return items


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ghtorus", description="D_t + ωD_x + εR 의 전역 준타원성 분석")
    sub = parser.add_subparsers(dest="command", required=True)

    p_an = sub.add_parser("analyze", help="시나리오 실행")
    p_an.add_argument("scenario", help="시나리오 JSON 경로 또는 내장 이름")
    p_an.add_argument("--out", default=None, help=f"출력 디렉터리 (기본 {OUT_DIR}/<name>)")
    p_an.add_argument("--formats", type=_formats, default=["json"], help="json,csv 중 선택 (쉼표 구분)")
    p_an.add_argument("--ell-max", type=int, default=None, help="시나리오의 ell_max 덮어쓰기")
    p_an.add_argument("--quiet", action="store_true", help="WARNING 이상만 출력, 상태 줄 생략")

    sub.add_parser("list-builtins", help="내장 시나리오 이름")

    p_dump = sub.add_parser("dump-builtin", help="내장 시나리오 JSON 출력")
    p_dump.add_argument("name")
    return parser


# =====================================================
# 2️⃣ 하위 명령
# =====================================================
def _resolve_scenario(arg: str) -> Path:
    path = Path(arg)
    if path.is_file():
        return path
    if path.suffix == "" and arg in list_builtins():
        return builtin_path(arg)
    return path


def cmd_analyze(args: argparse.Namespace) -> int:
    report = run_scenario(_resolve_scenario(args.scenario), ell_max=args.ell_max)
    out_dir = Path(args.out) if args.out else Path(OUT_DIR) / report.scenario.name
    written = emit_report(report, out_dir, args.formats)

    if not args.quiet:
        for entry in report.sections.get("per_eps", []):
            gh = entry.get("gh")
            verdict = gh["verdict"] if gh else "error"
            print(f"🔎 ε={entry['eps']}: {verdict}")
        for path in written:
            print(f"📝 {path}")
    if report.errors:
        print(f"⚠️ 분석 오류 {len(report.errors)}건 (report.json 의 errors 참고)", file=sys.stderr)
        return report.exit_code
    if not args.quiet:
        print(f"✅ {report.scenario.name} done.")
    return EXIT_OK


def cmd_list(_: argparse.Namespace) -> int:
    for name in list_builtins():
        print(name)
    return EXIT_OK


def cmd_dump(args: argparse.Namespace) -> int:
    sys.stdout.write(dump_builtin(args.name))
    return EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "list-builtins": cmd_list, "dump-builtin": cmd_dump}


# =====================================================
# 3️⃣ main
# =====================================================
def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    quiet = getattr(args, "quiet", False)
    logging.basicConfig(level=logging.WARNING if quiet else LOG_LEVEL, format=LOG_FORMAT)

    try:
        return COMMANDS[args.command](args)
    except GHError as exc:
        print(f"❌ {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"❌ I/O: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
