"""Audit report assembly and rendering.

The report is the contract with downstream consumers, so its shape is kept
deliberately boring: a fixed field order per entry, scores rendered at one
decimal (full precision stays in the store), provenance in the envelope, and
no timestamps anywhere in the body. The same store state and tau must always
produce byte-identical output.
"""

from __future__ import annotations

import html
import json

from .scoring import triage
from .store import STAGES, Store

TRIAGE_RULE = "flagged_at_tau = (RS_final < tau)"


def _score(value: float | None) -> float | None:
    return None if value is None else round(value, 1)


def _tau_repr(tau: float) -> float | int:
    return int(tau) if float(tau).is_integer() else tau


def build_report(store: Store, manuscript_id: str, tau: float) -> dict:
    """Assemble the canonical report dict for one manuscript at one tau.

    flagged_at_tau is recomputed from stored full-precision scores, so the
    rendered threshold always agrees with the rendered verdicts even when
    tau differs from the one used at scoring time.
    """
    config_snapshot = store.get_document_config(manuscript_id)
    statuses = store.stage_statuses(manuscript_id)
    assessments = store.get_assessments(manuscript_id)
    enrichment = store.get_enrichment(manuscript_id)
    contexts = store.get_contexts(manuscript_id)
    overrides = store.get_overrides(manuscript_id)
    suggestions = store.get_suggestions(manuscript_id) or {
        "label": "",
        "candidates": [],
        "notices": [],
    }

    occurrences: dict[str, int] = {}
    for ctx in contexts:
        occurrences[ctx["ref_id"]] = occurrences.get(ctx["ref_id"], 0) + 1

    entries = []
    for assessment in assessments:
        ref_id = assessment["reference_id"]
        rs_final = assessment["rs_final"]
        flagged = None if rs_final is None else triage(rs_final, tau)
        enriched = enrichment.get(ref_id, {})
        entries.append(
            {
                "manuscript_id": manuscript_id,
                "reference_id": ref_id,
                "RS_final": _score(rs_final),
                "RS_llm": _score(assessment["rs_llm"]),
                "RS_embed": _score(assessment["rs_embed"]),
                "band": assessment["band"],
                "flagged_at_tau": flagged,
                "tau": _tau_repr(tau),
                "intent": assessment["intent"],
                "rationale": assessment["rationale"],
                "flags": list(assessment["flags"]),
                "self_cite": assessment["self_cite"],
                "extensions": {
                    "notices": list(assessment["notices"]),
                    "evidence": assessment["evidence"],
                    "occurrences": occurrences.get(ref_id, 0),
                    "consistency": enriched.get("consistency"),
                },
            }
        )

    return {
        "manuscript_id": manuscript_id,
        "engine_version": config_snapshot.get("engine_version", ""),
        "tau": _tau_repr(tau),
        "triage_rule": TRIAGE_RULE,
        "fusion_weights": config_snapshot.get("fusion_weights", {}),
        "config": config_snapshot,
        "stages": {stage: statuses[stage].status for stage in STAGES},
        "entries": entries,
        "overrides": [
            {
                "id": o["id"],
                "reference_id": o["reference_id"],
                "decision": o["decision"],
                "note": o["note"],
            }
            for o in overrides
        ],
        "suggestions": suggestions,
    }


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def _esc(value) -> str:
    return html.escape("" if value is None else str(value))


def to_html(report: dict) -> str:
    """Static single-file rendering of a report for humans."""
    rows = []
    for entry in report["entries"]:
        flags = ", ".join(entry["flags"])
        rows.append(
            "<tr>"
            f"<td>{_esc(entry['reference_id'])}</td>"
            f"<td>{_esc(entry['RS_final'])}</td>"
            f"<td>{_esc(entry['RS_llm'])}</td>"
            f"<td>{_esc(entry['RS_embed'])}</td>"
            f"<td>{_esc(entry['band'])}</td>"
            f"<td>{_esc(entry['flagged_at_tau'])}</td>"
            f"<td>{_esc(entry['intent'])}</td>"
            f"<td>{_esc(flags)}</td>"
            f"<td>{_esc(entry['self_cite'])}</td>"
            "</tr>"
        )
    suggestion_items = "".join(
        f"<li><strong>{_esc(c['title'])}</strong>: {_esc(c['rationale'])}</li>"
        for c in report["suggestions"].get("candidates", [])
    )
    override_items = "".join(
        f"<li>{_esc(o['reference_id'])}: {_esc(o['decision'])} {_esc(o['note'])}</li>"
        for o in report["overrides"]
    )
    stage_items = "".join(
        f"<li>{_esc(stage)}: {_esc(status)}</li>" for stage, status in report["stages"].items()
    )
    return (
        "<!DOCTYPE html>\n<html><head><meta charset='utf-8'>"
        f"<title>Audit {_esc(report['manuscript_id'])}</title>"
        "<style>body{font-family:sans-serif;margin:2rem}table{border-collapse:collapse}"
        "td,th{border:1px solid #999;padding:0.3rem 0.6rem;text-align:left}</style>"
        "</head><body>"
        f"<h1>Citation audit: {_esc(report['manuscript_id'])}</h1>"
        f"<p>tau = {_esc(report['tau'])}; {_esc(report['triage_rule'])}; "
        f"engine {_esc(report['engine_version'])}</p>"
        f"<ul>{stage_items}</ul>"
        "<table><thead><tr><th>reference</th><th>RS_final</th><th>RS_llm</th>"
        "<th>RS_embed</th><th>band</th><th>flagged</th><th>intent</th>"
        "<th>flags</th><th>self-cite</th></tr></thead>"
        f"<tbody>{''.join(rows)}</tbody></table>"
        f"<h2>Overrides</h2><ul>{override_items}</ul>"
        f"<h2>Suggestions ({_esc(report['suggestions'].get('label', ''))})</h2>"
        f"<ul>{suggestion_items}</ul>"
        "</body></html>\n"
    )
