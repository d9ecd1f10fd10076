"""Embedded persistence: documents, stage logs, provider cache, assessments.

Backed by SQLite. One Store owns one database file (or ':memory:'); all
access is serialized through an internal lock so enrichment workers can share
it. Stage records form a linear DAG (parse -> enrich -> score -> integrity ->
report): a stage can only begin once its predecessor is done, and re-running
a stage invalidates everything downstream.
"""

from __future__ import annotations

import hashlib
import json
import sqlite3
import threading
import time
from dataclasses import dataclass

from .errors import (
    StageOrderError,
    StaleStageError,
    UnknownManuscriptError,
    UnknownReferenceError,
)

STAGES = ("parse", "enrich", "score", "integrity", "report")

OVERRIDE_DECISIONS = ("accept-flag", "dismiss-flag")

_SCHEMA = """
CREATE TABLE IF NOT EXISTS documents (
    manuscript_id TEXT PRIMARY KEY,
    payload TEXT NOT NULL,
    config TEXT NOT NULL,
    engine_version TEXT NOT NULL,
    created_at REAL NOT NULL
);
CREATE TABLE IF NOT EXISTS stages (
    manuscript_id TEXT NOT NULL,
    stage TEXT NOT NULL,
    status TEXT NOT NULL,
    started_at REAL,
    finished_at REAL,
    message TEXT NOT NULL DEFAULT '',
    PRIMARY KEY (manuscript_id, stage)
);
CREATE TABLE IF NOT EXISTS cache (
    provider TEXT NOT NULL,
    query TEXT NOT NULL,
    payload TEXT NOT NULL,
    fetched_at REAL NOT NULL,
    ttl_seconds INTEGER NOT NULL,
    PRIMARY KEY (provider, query)
);
CREATE TABLE IF NOT EXISTS contexts (
    manuscript_id TEXT NOT NULL,
    ref_id TEXT NOT NULL,
    ordinal INTEGER NOT NULL,
    target_index INTEGER NOT NULL,
    window_text TEXT NOT NULL,
    PRIMARY KEY (manuscript_id, ref_id, ordinal)
);
CREATE TABLE IF NOT EXISTS enrichment (
    manuscript_id TEXT NOT NULL,
    ref_id TEXT NOT NULL,
    data TEXT NOT NULL,
    PRIMARY KEY (manuscript_id, ref_id)
);
CREATE TABLE IF NOT EXISTS assessments (
    manuscript_id TEXT NOT NULL,
    ref_id TEXT NOT NULL,
    position INTEGER NOT NULL,
    data TEXT NOT NULL,
    PRIMARY KEY (manuscript_id, ref_id)
);
CREATE TABLE IF NOT EXISTS overrides (
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    manuscript_id TEXT NOT NULL,
    ref_id TEXT NOT NULL,
    decision TEXT NOT NULL,
    note TEXT NOT NULL DEFAULT '',
    created_at REAL NOT NULL
);
CREATE TABLE IF NOT EXISTS settings (
    manuscript_id TEXT PRIMARY KEY,
    tau REAL NOT NULL
);
CREATE TABLE IF NOT EXISTS gold_labels (
    manuscript_id TEXT NOT NULL,
    ref_id TEXT NOT NULL,
    label INTEGER NOT NULL,
    PRIMARY KEY (manuscript_id, ref_id)
);
CREATE TABLE IF NOT EXISTS suggestions (
    manuscript_id TEXT PRIMARY KEY,
    data TEXT NOT NULL
);
"""


def content_hash(payload: dict) -> str:
    """Stable manuscript identity: hash of the canonical payload encoding."""
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class StageRecord:
    manuscript_id: str
    stage: str
    status: str  # pending | running | done | failed
    started_at: float | None
    finished_at: float | None
    message: str


class Store:
    def __init__(self, path: str = ":memory:"):
        self.path = str(path)
        self._conn = sqlite3.connect(self.path, check_same_thread=False)
        self._conn.execute("PRAGMA journal_mode=WAL") if self.path != ":memory:" else None
        self._lock = threading.RLock()
        with self._lock:
            self._conn.executescript(_SCHEMA)
            self._conn.commit()

    def close(self) -> None:
        with self._lock:
            self._conn.close()

    def _execute(self, sql: str, params=()):
        with self._lock:
            cur = self._conn.execute(sql, params)
            self._conn.commit()
            return cur

    def _query(self, sql: str, params=()):
        with self._lock:
            return self._conn.execute(sql, params).fetchall()

    # -- documents ---------------------------------------------------------

    def put_document(self, payload: dict, config_snapshot: dict, engine_version: str) -> str:
        manuscript_id = content_hash(payload)
        self._execute(
            "INSERT OR REPLACE INTO documents VALUES (?, ?, ?, ?, ?)",
            (
                manuscript_id,
                json.dumps(payload, ensure_ascii=False),
                json.dumps(config_snapshot, ensure_ascii=False, sort_keys=True),
                engine_version,
                time.time(),
            ),
        )
        return manuscript_id

    def get_document(self, manuscript_id: str) -> dict:
        rows = self._query(
            "SELECT payload FROM documents WHERE manuscript_id = ?", (manuscript_id,)
        )
        if not rows:
            raise UnknownManuscriptError(manuscript_id)
        return json.loads(rows[0][0])

    def get_document_config(self, manuscript_id: str) -> dict:
        rows = self._query(
            "SELECT config FROM documents WHERE manuscript_id = ?", (manuscript_id,)
        )
        if not rows:
            raise UnknownManuscriptError(manuscript_id)
        return json.loads(rows[0][0])

    def has_document(self, manuscript_id: str) -> bool:
        return bool(
            self._query("SELECT 1 FROM documents WHERE manuscript_id = ?", (manuscript_id,))
        )

    def list_documents(self) -> list[str]:
        return [r[0] for r in self._query("SELECT manuscript_id FROM documents ORDER BY created_at")]

    # -- stage log ---------------------------------------------------------

    def stage_statuses(self, manuscript_id: str) -> dict[str, StageRecord]:
        rows = self._query(
            "SELECT stage, status, started_at, finished_at, message FROM stages"
            " WHERE manuscript_id = ?",
            (manuscript_id,),
        )
        found = {
            stage: StageRecord(manuscript_id, stage, status, started, finished, message)
            for stage, status, started, finished, message in rows
        }
        return {
            stage: found.get(
                stage, StageRecord(manuscript_id, stage, "pending", None, None, "")
            )
            for stage in STAGES
        }

    def begin_stage(self, manuscript_id: str, stage: str) -> None:
        """Mark a stage running; downstream stages become stale.

        Raises StageOrderError unless the predecessor stage is done
        (parse has no predecessor).
        """
        if stage not in STAGES:
            raise ValueError(f"unknown stage: {stage}")
        if not self.has_document(manuscript_id):
            raise UnknownManuscriptError(manuscript_id)
        position = STAGES.index(stage)
        statuses = self.stage_statuses(manuscript_id)
        if position > 0:
            predecessor = STAGES[position - 1]
            if statuses[predecessor].status != "done":
                raise StageOrderError(stage, predecessor)
        self._execute(
            "INSERT OR REPLACE INTO stages VALUES (?, ?, 'running', ?, NULL, '')",
            (manuscript_id, stage, time.time()),
        )
        for downstream in STAGES[position + 1:]:
            if statuses[downstream].status != "pending":
                self._execute(
                    "INSERT OR REPLACE INTO stages VALUES (?, ?, 'pending', NULL, NULL, ?)",
                    (manuscript_id, downstream, f"invalidated by reprocess of {stage}"),
                )

    def finish_stage(self, manuscript_id: str, stage: str, message: str = "") -> None:
        self._execute(
            "UPDATE stages SET status = 'done', finished_at = ?, message = ?"
            " WHERE manuscript_id = ? AND stage = ?",
            (time.time(), message, manuscript_id, stage),
        )

    def fail_stage(self, manuscript_id: str, stage: str, message: str) -> None:
        self._execute(
            "UPDATE stages SET status = 'failed', finished_at = ?, message = ?"
            " WHERE manuscript_id = ? AND stage = ?",
            (time.time(), message, manuscript_id, stage),
        )

    def require_done(self, manuscript_id: str, stages: tuple[str, ...]) -> None:
        statuses = self.stage_statuses(manuscript_id)
        stale = [s for s in stages if statuses[s].status != "done"]
        if stale:
            raise StaleStageError(stale)

    # -- provider cache ------------------------------------------------------

    def cache_get(self, provider: str, query: str, now: float | None = None) -> dict | None:
        """Fresh cached payload, or None on miss/expiry."""
        now = time.time() if now is None else now
        rows = self._query(
            "SELECT payload, fetched_at, ttl_seconds FROM cache WHERE provider = ? AND query = ?",
            (provider, query),
        )
        if not rows:
            return None
        payload, fetched_at, ttl = rows[0]
        if now - fetched_at >= ttl:
            return None
        return json.loads(payload)

    def cache_put(
        self, provider: str, query: str, payload: dict, ttl_seconds: int, now: float | None = None
    ) -> None:
        now = time.time() if now is None else now
        self._execute(
            "INSERT OR REPLACE INTO cache VALUES (?, ?, ?, ?, ?)",
            (provider, query, json.dumps(payload, ensure_ascii=False), now, ttl_seconds),
        )

    # -- stage artifacts -----------------------------------------------------

    def put_contexts(self, manuscript_id: str, contexts) -> None:
        self._execute("DELETE FROM contexts WHERE manuscript_id = ?", (manuscript_id,))
        with self._lock:
            self._conn.executemany(
                "INSERT INTO contexts VALUES (?, ?, ?, ?, ?)",
                [
                    (manuscript_id, c.ref_id, c.occurrence_ordinal, c.target_index, c.window_text)
                    for c in contexts
                ],
            )
            self._conn.commit()

    def get_contexts(self, manuscript_id: str) -> list[dict]:
        rows = self._query(
            "SELECT ref_id, ordinal, target_index, window_text FROM contexts"
            " WHERE manuscript_id = ? ORDER BY ref_id, ordinal",
            (manuscript_id,),
        )
        return [
            {
                "ref_id": ref_id,
                "occurrence_ordinal": ordinal,
                "target_index": target,
                "window_text": window,
            }
            for ref_id, ordinal, target, window in rows
        ]

    def put_enrichment(self, manuscript_id: str, records: dict[str, dict]) -> None:
        self._execute("DELETE FROM enrichment WHERE manuscript_id = ?", (manuscript_id,))
        with self._lock:
            self._conn.executemany(
                "INSERT INTO enrichment VALUES (?, ?, ?)",
                [
                    (manuscript_id, ref_id, json.dumps(data, ensure_ascii=False))
                    for ref_id, data in records.items()
                ],
            )
            self._conn.commit()

    def get_enrichment(self, manuscript_id: str) -> dict[str, dict]:
        rows = self._query(
            "SELECT ref_id, data FROM enrichment WHERE manuscript_id = ?", (manuscript_id,)
        )
        return {ref_id: json.loads(data) for ref_id, data in rows}

    def put_assessments(self, manuscript_id: str, assessments: list[dict]) -> None:
        self._execute("DELETE FROM assessments WHERE manuscript_id = ?", (manuscript_id,))
        with self._lock:
            self._conn.executemany(
                "INSERT INTO assessments VALUES (?, ?, ?, ?)",
                [
                    (manuscript_id, a["reference_id"], i, json.dumps(a, ensure_ascii=False))
                    for i, a in enumerate(assessments)
                ],
            )
            self._conn.commit()

    def get_assessments(self, manuscript_id: str) -> list[dict]:
        rows = self._query(
            "SELECT data FROM assessments WHERE manuscript_id = ? ORDER BY position",
            (manuscript_id,),
        )
        return [json.loads(data) for (data,) in rows]

    def get_assessment(self, manuscript_id: str, ref_id: str) -> dict:
        rows = self._query(
            "SELECT data FROM assessments WHERE manuscript_id = ? AND ref_id = ?",
            (manuscript_id, ref_id),
        )
        if not rows:
            raise UnknownReferenceError(manuscript_id, ref_id)
        return json.loads(rows[0][0])

    # -- analyst overrides ---------------------------------------------------

    def record_override(
        self, manuscript_id: str, ref_id: str, decision: str, note: str = ""
    ) -> dict:
        """Append to the override journal; never mutates scores or flags."""
        if decision not in OVERRIDE_DECISIONS:
            raise ValueError(f"decision must be one of {OVERRIDE_DECISIONS}")
        self.get_assessment(manuscript_id, ref_id)  # raises if unknown
        created_at = time.time()
        cur = self._execute(
            "INSERT INTO overrides (manuscript_id, ref_id, decision, note, created_at)"
            " VALUES (?, ?, ?, ?, ?)",
            (manuscript_id, ref_id, decision, note, created_at),
        )
        return {
            "id": cur.lastrowid,
            "reference_id": ref_id,
            "decision": decision,
            "note": note,
            "created_at": created_at,
        }

    def get_overrides(self, manuscript_id: str) -> list[dict]:
        rows = self._query(
            "SELECT id, ref_id, decision, note, created_at FROM overrides"
            " WHERE manuscript_id = ? ORDER BY id",
            (manuscript_id,),
        )
        return [
            {
                "id": oid,
                "reference_id": ref_id,
                "decision": decision,
                "note": note,
                "created_at": created_at,
            }
            for oid, ref_id, decision, note, created_at in rows
        ]

    # -- session settings / gold labels / suggestions -------------------------

    def set_tau(self, manuscript_id: str, tau: float) -> None:
        if not self.has_document(manuscript_id):
            raise UnknownManuscriptError(manuscript_id)
        self._execute(
            "INSERT OR REPLACE INTO settings VALUES (?, ?)", (manuscript_id, float(tau))
        )

    def get_tau(self, manuscript_id: str) -> float | None:
        rows = self._query(
            "SELECT tau FROM settings WHERE manuscript_id = ?", (manuscript_id,)
        )
        return rows[0][0] if rows else None

    def put_gold_labels(self, manuscript_id: str, labels: list[tuple[str, int]]) -> None:
        self._execute("DELETE FROM gold_labels WHERE manuscript_id = ?", (manuscript_id,))
        with self._lock:
            self._conn.executemany(
                "INSERT INTO gold_labels VALUES (?, ?, ?)",
                [(manuscript_id, ref_id, label) for ref_id, label in labels],
            )
            self._conn.commit()

    def get_gold_labels(self, manuscript_id: str) -> list[tuple[str, int]]:
        return [
            (r, int(l))
            for r, l in self._query(
                "SELECT ref_id, label FROM gold_labels WHERE manuscript_id = ? ORDER BY ref_id",
                (manuscript_id,),
            )
        ]

    def put_suggestions(self, manuscript_id: str, data: dict) -> None:
        self._execute(
            "INSERT OR REPLACE INTO suggestions VALUES (?, ?)",
            (manuscript_id, json.dumps(data, ensure_ascii=False)),
        )

    def get_suggestions(self, manuscript_id: str) -> dict | None:
        rows = self._query(
            "SELECT data FROM suggestions WHERE manuscript_id = ?", (manuscript_id,)
        )
        return json.loads(rows[0][0]) if rows else None
