"""Command-line gateway. Every operation maps onto the same Engine facade
the HTTP API uses.

Exit codes are part of the contract:
  0 success, 2 usage, 3 invalid manuscript payload, 4 unknown manuscript or
  reference, 5 stage dependency not satisfied, 6 malformed gold labels,
  7 configuration error, 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import ENGINE_VERSION
from .config import load_config
from .corpus import EXPORTABLE, fixture_text
from .errors import (
    AuditError,
    ConfigError,
    DuplicateIdError,
    GoldLabelError,
    PayloadError,
    StageOrderError,
    StaleStageError,
    UnknownManuscriptError,
    UnknownReferenceError,
)
from .pipeline import Engine
from .report import to_html, to_json
from .store import OVERRIDE_DECISIONS

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PAYLOAD = 3
EXIT_UNKNOWN = 4
EXIT_STALE = 5
EXIT_GOLD = 6
EXIT_CONFIG = 7
EXIT_OTHER = 1

_ERROR_CODES = (
    ((PayloadError, DuplicateIdError), EXIT_PAYLOAD),
    ((UnknownManuscriptError, UnknownReferenceError), EXIT_UNKNOWN),
    ((StageOrderError, StaleStageError), EXIT_STALE),
    ((GoldLabelError,), EXIT_GOLD),
    ((ConfigError,), EXIT_CONFIG),
)


def _fail(exc: Exception) -> int:
    print(
        json.dumps({"error": type(exc).__name__, "detail": str(exc)}),
        file=sys.stderr,
    )
    for types, code in _ERROR_CODES:
        if isinstance(exc, types):
            return code
    return EXIT_OTHER


def _emit(data, out: str | None = None) -> None:
    text = data if isinstance(data, str) else json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _parse_taus(raw: str) -> list[float]:
    try:
        return [float(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {raw!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="citeaudit",
        description="Audit manuscript citations: relevance scores, integrity flags, reports.",
    )
    parser.add_argument("--version", action="version", version=f"citeaudit {ENGINE_VERSION}")
    parser.add_argument("--config", help="path to a JSON config file")
    parser.add_argument("--db", help="database path (overrides config)")
    parser.add_argument("-v", "--verbose", action="store_true", help="log pipeline progress")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate and store a manuscript payload")
    p.add_argument("payload", help="path to the manuscript JSON payload")
    p.add_argument("--process", action="store_true", help="run all stages after ingest")

    p = sub.add_parser("process", help="run pipeline stages for a stored manuscript")
    p.add_argument("manuscript_id")
    p.add_argument(
        "--stages",
        help="comma-separated subset (parse,enrich,score,integrity,report); default all after parse",
    )

    p = sub.add_parser("report", help="render the audit report")
    p.add_argument("manuscript_id")
    p.add_argument("--tau", type=float, help="triage threshold override")
    p.add_argument("--html", action="store_true", help="render HTML instead of JSON")
    p.add_argument("--out", help="write to a file instead of stdout")

    p = sub.add_parser("status", help="show stage statuses for a manuscript")
    p.add_argument("manuscript_id")

    p = sub.add_parser("evaluate", help="score the engine against expert gold labels")
    p.add_argument("manuscript_id")
    p.add_argument("--gold", required=True, help="CSV file with header reference_id,label")
    p.add_argument("--tau", type=float, help="evaluate at this threshold")
    p.add_argument("--sweep", type=_parse_taus, metavar="T1,T2,...", help="evaluate at each threshold")

    p = sub.add_parser("diagnostics", help="recency, concentration, and network exports")
    p.add_argument("manuscript_id")
    p.add_argument("--window", type=int, help="recency window in years")
    p.add_argument("--reference-year", type=int, help="anchor year (default: newest cited)")

    p = sub.add_parser("override", help="record an analyst decision for one reference")
    p.add_argument("manuscript_id")
    p.add_argument("reference_id")
    p.add_argument("--decision", required=True, choices=OVERRIDE_DECISIONS)
    p.add_argument("--note", default="")

    p = sub.add_parser("tau", help="persist a triage threshold for a manuscript")
    p.add_argument("manuscript_id")
    p.add_argument("value", type=float)

    p = sub.add_parser("corpus", help="export a bundled corpus file")
    p.add_argument("name", choices=sorted(EXPORTABLE))
    p.add_argument("--out", help="write to a file instead of stdout")

    p = sub.add_parser("serve", help="start the HTTP API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def _run(args: argparse.Namespace) -> int:
    if args.command == "corpus":
        _emit(fixture_text(EXPORTABLE[args.name]), args.out)
        return EXIT_OK

    overrides = {}
    if args.db:
        overrides["db_path"] = args.db
    config = load_config(args.config, **overrides)

    if args.command == "serve":
        import uvicorn

        from .api import create_app

        uvicorn.run(create_app(config), host=args.host, port=args.port)
        return EXIT_OK

    engine = Engine(config)
    try:
        if args.command == "ingest":
            payload = json.loads(Path(args.payload).read_text(encoding="utf-8"))
            manuscript_id = engine.ingest(payload)
            result = {"manuscript_id": manuscript_id}
            if args.process:
                result["stages"] = engine.process(manuscript_id)
            _emit(result)
        elif args.command == "process":
            stages = [s.strip() for s in args.stages.split(",")] if args.stages else None
            _emit({"stages": engine.process(args.manuscript_id, stages)})
        elif args.command == "report":
            report = engine.report(args.manuscript_id, args.tau)
            _emit(to_html(report) if args.html else to_json(report), args.out)
        elif args.command == "status":
            _emit(engine.status(args.manuscript_id))
        elif args.command == "evaluate":
            gold_text = Path(args.gold).read_text(encoding="utf-8")
            if args.sweep:
                engine.evaluate(args.manuscript_id, gold_text, args.tau)
                rows = engine.sweep(args.manuscript_id, args.sweep)
                _emit({"rows": [r.as_dict() for r in rows]})
            else:
                _emit(engine.evaluate(args.manuscript_id, gold_text, args.tau).as_dict())
        elif args.command == "diagnostics":
            _emit(engine.diagnostics(args.manuscript_id, args.window, args.reference_year))
        elif args.command == "override":
            _emit(
                engine.record_override(
                    args.manuscript_id, args.reference_id, args.decision, args.note
                )
            )
        elif args.command == "tau":
            _emit(engine.set_tau(args.manuscript_id, args.value))
        else:  # pragma: no cover - argparse enforces the choices
            return EXIT_USAGE
    finally:
        engine.close()
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return _run(args)
    except json.JSONDecodeError as exc:
        return _fail(PayloadError("payload", f"not valid JSON: {exc}"))
    except FileNotFoundError as exc:
        print(json.dumps({"error": "FileNotFoundError", "detail": str(exc)}), file=sys.stderr)
        return EXIT_USAGE
    except (AuditError, ValueError) as exc:
        return _fail(exc)


if __name__ == "__main__":
    sys.exit(main())
