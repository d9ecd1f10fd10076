"""Regenerate tests/fixtures.ts from a stub-mode engine run.

The workbench tests mock the HTTP API, so their canned responses must stay
byte-faithful to what the engine actually serves. This script processes the
bundled corpora in stub mode and snapshots the JSON payloads the gateway
would return. Run from the repository root:

    python3 frontend/tools/capture_fixtures.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parents[2]
sys.path.insert(0, str(REPO_ROOT / "src"))

from citeaudit import corpus  # noqa: E402
from citeaudit.config import RunConfig  # noqa: E402
from citeaudit.errors import GoldLabelError, StaleStageError  # noqa: E402
from citeaudit.pipeline import Engine  # noqa: E402
from citeaudit.store import Store  # noqa: E402

OUT_PATH = REPO_ROOT / "frontend" / "tests" / "fixtures.ts"

HEADER = """\
// Canned HTTP API payloads captured from a stub-mode engine run over the
// bundled corpora. Regenerate with `python3 frontend/tools/capture_fixtures.py`
// after engine changes; do not edit by hand.

import type {
  CitationDetail,
  CitationsPage,
  DocumentStatus,
  MetricsRow,
  SweepResponse,
} from '../src/types.js';

"""


def ts_const(name: str, ts_type: str, value: object) -> str:
    body = json.dumps(value, indent=2)
    return f"export const {name}: {ts_type} = {body};\n\n"


def ts_string(name: str, value: str) -> str:
    return f"export const {name}: string = {json.dumps(value)};\n\n"


def main() -> None:
    engine = Engine(RunConfig(db_path=":memory:"), store=Store(":memory:"))

    small = engine.ingest(corpus.manuscript_small())
    engine.process(small)
    status_small = engine.status(small)
    page_17 = engine.citations(small, tau=17.0, offset=0, limit=50)
    page_60 = engine.citations(small, tau=60.0, offset=0, limit=50)
    detail_004 = engine.citation_detail(small, "ref_004")
    detail_007 = engine.citation_detail(small, "ref_007")
    detail_008 = engine.citation_detail(small, "ref_008")

    screening = engine.ingest(corpus.manuscript_screening())
    engine.process(screening)
    status_screening = engine.status(screening)
    page_screening_17 = engine.citations(screening, tau=17.0, offset=0, limit=200)
    page_screening_25 = engine.citations(screening, tau=25.0, offset=0, limit=200)
    gold_csv = corpus.gold_screening_csv()
    metrics_17 = engine.evaluate(screening, gold_csv).as_dict()
    sweep_rows = [row.as_dict() for row in engine.sweep(screening, [10.0, 15.0, 17.0, 20.0, 25.0])]

    flagged_page = engine.citations(screening, tau=17.0, offset=0, limit=200)
    perfect_lines = ["reference_id,label"]
    for entry in flagged_page["entries"]:
        # Gold label 1 marks a relevant citation, so flagged entries get 0.
        label = "0" if entry["flagged_at_tau"] else "1"
        perfect_lines.append(f"{entry['reference_id']},{label}")
    gold_perfect = "\n".join(perfect_lines) + "\n"
    metrics_perfect = engine.evaluate(screening, gold_perfect).as_dict()

    gold_malformed = "reference_id,label\nref_001,2\n"
    try:
        engine.evaluate(small, gold_malformed)
        raise SystemExit("expected the malformed gold fixture to be rejected")
    except GoldLabelError as exc:
        gold_error_detail = str(exc)

    # Selective reprocessing of one stage leaves its successors stale.
    engine.process(small, ["score"])
    status_partial = engine.status(small)
    try:
        engine.citations(small, tau=17.0, offset=0, limit=5)
        raise SystemExit("expected stale stages to be rejected")
    except StaleStageError as exc:
        stale_detail = str(exc)

    engine.close()

    parts = [HEADER]
    parts.append(ts_string("SMALL_ID", small))
    parts.append(ts_string("SCREENING_ID", screening))
    parts.append(ts_const("STATUS_SMALL", "DocumentStatus", status_small))
    parts.append(ts_const("STATUS_SMALL_PARTIAL", "DocumentStatus", status_partial))
    parts.append(ts_const("STATUS_SCREENING", "DocumentStatus", status_screening))
    parts.append(ts_const("PAGE_TAU_17", "CitationsPage", page_17))
    parts.append(ts_const("PAGE_TAU_60", "CitationsPage", page_60))
    parts.append(ts_const("PAGE_SCREENING_17", "CitationsPage", page_screening_17))
    parts.append(ts_const("PAGE_SCREENING_25", "CitationsPage", page_screening_25))
    parts.append(ts_const("DETAIL_REF_004", "CitationDetail", detail_004))
    parts.append(ts_const("DETAIL_REF_007", "CitationDetail", detail_007))
    parts.append(ts_const("DETAIL_REF_008", "CitationDetail", detail_008))
    parts.append(ts_const("METRICS_TAU_17", "MetricsRow", metrics_17))
    parts.append(ts_const("METRICS_PERFECT", "MetricsRow", metrics_perfect))
    parts.append(ts_const("SWEEP_FIVE", "SweepResponse", {"rows": sweep_rows}))
    parts.append(ts_string("GOLD_SCREENING_CSV", gold_csv))
    parts.append(ts_string("GOLD_PERFECT_CSV", gold_perfect))
    parts.append(ts_string("GOLD_MALFORMED_CSV", gold_malformed))
    parts.append(ts_string("GOLD_ERROR_DETAIL", gold_error_detail))
    parts.append(ts_string("STALE_DETAIL", stale_detail))

    OUT_PATH.write_text("".join(parts))
    print(f"wrote {OUT_PATH}")


if __name__ == "__main__":
    main()
