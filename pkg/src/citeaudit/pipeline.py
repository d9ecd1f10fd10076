"""Stage orchestration: parse -> enrich -> score -> integrity -> report.

The Engine facade wires configuration, persistence, and providers together
and is the single entry point the CLI and the HTTP API both call, so the two
front ends cannot drift apart in behavior.
"""

from __future__ import annotations

import hashlib
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import ENGINE_VERSION, corpus
from .config import RunConfig, provider_credential
from .enrich import EnrichedMetadata, enrich_reference, enriched_from_dict
from .errors import ConfigError, GoldLabelError
from .evaluate import GoldLabel, MetricsReport, align, evaluate_at, parse_gold_csv
from .diagnostics import concentration, export_network, recency
from .ingest import (
    CitationContext,
    ManuscriptDocument,
    extract_contexts,
    load_manuscript,
)
from .integrity import (
    SUGGESTION_LABEL,
    analyze_self_citation,
    apply_integrity,
    suggest_missing,
)
from .providers import (
    HttpEmbeddingProvider,
    HttpJudgmentProvider,
    HttpMetadataProvider,
    HttpSuggestionProvider,
    ProviderChain,
    ProviderDescriptor,
    StubEmbeddingProvider,
    StubJudgmentProvider,
    StubMetadataProvider,
    StubSuggestionProvider,
    build_chain,
)
from .report import build_report
from .scoring import (
    Assessment,
    FusionWeights,
    assessment_from_dict,
    score_document,
)
from .store import STAGES, Store

log = logging.getLogger(__name__)


@dataclass
class Components:
    chain: ProviderChain
    embedder: object
    judge: object
    advisor: object


def build_components(config: RunConfig) -> Components:
    enabled = [p for p in config.providers if p.enabled]
    descriptors = [ProviderDescriptor(p.name, p.role, p.rate_limit) for p in enabled]

    if config.stub_mode:
        fixtures_dir = config.fixtures_dir
        metadata_providers = []
        for descriptor in descriptors:
            file_name = corpus.STUB_FILES.get(descriptor.name, f"stub_{descriptor.name}.json")
            fixtures = corpus.optional_fixture_json(file_name, fixtures_dir)
            metadata_providers.append(StubMetadataProvider(descriptor, fixtures))
        chain = build_chain(metadata_providers)
        embedder = StubEmbeddingProvider(
            corpus.optional_fixture_json(corpus.EMBEDDINGS_FILE, fixtures_dir)
        )
        judge = StubJudgmentProvider(
            corpus.optional_fixture_json(corpus.JUDGMENTS_FILE, fixtures_dir)
        )
        suggestions = corpus.optional_fixture_json(corpus.SUGGESTIONS_FILE, fixtures_dir)
        advisor = StubSuggestionProvider(suggestions.get("candidates", []))
        return Components(chain, embedder, judge, advisor)

    if not config.judgment_url or not config.embedding_url:
        raise ConfigError("live mode requires judgment_url and embedding_url")
    metadata_providers = []
    for setting, descriptor in zip(enabled, descriptors):
        if not setting.base_url:
            raise ConfigError(f"provider {setting.name} is enabled without a base_url")
        metadata_providers.append(
            HttpMetadataProvider(descriptor, setting.base_url, provider_credential(setting.name))
        )
    chain = build_chain(metadata_providers)
    embedder = HttpEmbeddingProvider(
        "embedder", config.embedding_url, provider_credential("embedder")
    )
    judge = HttpJudgmentProvider("judge", config.judgment_url, provider_credential("judge"))
    if config.suggestion_url:
        advisor = HttpSuggestionProvider(
            "advisor", config.suggestion_url, provider_credential("advisor")
        )
    else:
        advisor = StubSuggestionProvider([])
    return Components(chain, embedder, judge, advisor)


# -- stage runners -------------------------------------------------------------


def ingest_document(store: Store, payload: dict, config: RunConfig) -> str:
    """Validate and persist a manuscript; runs the parse stage.

    Validation happens before any write: a bad payload leaves no trace.
    """
    doc = load_manuscript(payload)
    snapshot = config.snapshot()
    snapshot["engine_version"] = ENGINE_VERSION
    manuscript_id = store.put_document(payload, snapshot, ENGINE_VERSION)
    store.begin_stage(manuscript_id, "parse")
    contexts = extract_contexts(doc)
    store.put_contexts(manuscript_id, contexts)
    store.finish_stage(
        manuscript_id,
        "parse",
        f"{len(doc.references)} references, {len(contexts)} contexts",
    )
    return manuscript_id


def _load_document(store: Store, manuscript_id: str) -> ManuscriptDocument:
    return load_manuscript(store.get_document(manuscript_id))


def _load_contexts(store: Store, manuscript_id: str) -> list[CitationContext]:
    return [
        CitationContext(
            ref_id=row["ref_id"],
            target_index=row["target_index"],
            window_text=row["window_text"],
            occurrence_ordinal=row["occurrence_ordinal"],
        )
        for row in store.get_contexts(manuscript_id)
    ]


def _load_enrichment(store: Store, manuscript_id: str) -> dict[str, EnrichedMetadata]:
    return {
        ref_id: enriched_from_dict(data)
        for ref_id, data in store.get_enrichment(manuscript_id).items()
    }


def _load_assessments(store: Store, manuscript_id: str) -> list[Assessment]:
    return [assessment_from_dict(d) for d in store.get_assessments(manuscript_id)]


def run_parse(store: Store, manuscript_id: str, config: RunConfig) -> None:
    doc = _load_document(store, manuscript_id)
    store.begin_stage(manuscript_id, "parse")
    contexts = extract_contexts(doc)
    store.put_contexts(manuscript_id, contexts)
    store.finish_stage(
        manuscript_id, "parse", f"{len(doc.references)} references, {len(contexts)} contexts"
    )


def run_enrich(
    store: Store, manuscript_id: str, components: Components, config: RunConfig
) -> None:
    doc = _load_document(store, manuscript_id)
    store.begin_stage(manuscript_id, "enrich")
    try:
        def worker(ref):
            return enrich_reference(
                ref,
                components.chain,
                store,
                config.cache_ttl_seconds,
                config.title_similarity_threshold,
                config.year_tolerance,
            )

        if config.worker_cap > 1 and len(doc.references) > 1:
            with ThreadPoolExecutor(max_workers=config.worker_cap) as pool:
                records = list(pool.map(worker, doc.references))
        else:
            records = [worker(ref) for ref in doc.references]
        store.put_enrichment(manuscript_id, {r.ref_id: r.as_dict() for r in records})
    except Exception as exc:
        store.fail_stage(manuscript_id, "enrich", str(exc))
        raise
    misses = sum(1 for r in records if r.source is None)
    store.finish_stage(
        manuscript_id, "enrich", f"{len(records)} references enriched, {misses} unresolved"
    )


def run_score(
    store: Store, manuscript_id: str, components: Components, config: RunConfig
) -> None:
    doc = _load_document(store, manuscript_id)
    contexts = _load_contexts(store, manuscript_id)
    enriched = store.get_enrichment(manuscript_id)
    tau = store.get_tau(manuscript_id)
    tau = config.tau_default if tau is None else tau
    store.begin_stage(manuscript_id, "score")
    try:
        abstracts = {ref_id: data.get("abstract") for ref_id, data in enriched.items()}
        assessments = score_document(
            doc,
            contexts,
            abstracts,
            components.embedder,
            components.judge,
            FusionWeights(config.w_llm, config.w_embed),
            tau,
            config.judgment_batch_size,
        )
        store.put_assessments(manuscript_id, [a.as_dict() for a in assessments])
    except Exception as exc:
        store.fail_stage(manuscript_id, "score", str(exc))
        raise
    unscorable = sum(1 for a in assessments if a.unscorable)
    store.finish_stage(
        manuscript_id, "score", f"{len(assessments)} scored, {unscorable} unscorable"
    )


def _score_fingerprint(assessments: list[Assessment]) -> str:
    basis = [
        (a.reference_id, a.rs_llm, a.rs_embed, a.rs_final, a.band, a.flagged_at_tau, a.tau)
        for a in assessments
    ]
    return hashlib.sha256(json.dumps(basis, sort_keys=True).encode("utf-8")).hexdigest()


def run_integrity(
    store: Store, manuscript_id: str, components: Components, config: RunConfig
) -> None:
    doc = _load_document(store, manuscript_id)
    enriched = _load_enrichment(store, manuscript_id)
    assessments = _load_assessments(store, manuscript_id)
    store.begin_stage(manuscript_id, "integrity")
    try:
        before = _score_fingerprint(assessments)
        apply_integrity(doc, enriched, assessments, config.author_match_threshold)
        after = _score_fingerprint(assessments)
        # Integrity annotates; a changed score here is a bug worth crashing on.
        if before != after:
            raise RuntimeError("integrity stage altered score fields")

        known_titles = []
        for ref in doc.references:
            record = enriched.get(ref.ref_id)
            if record is not None and record.title:
                known_titles.append(record.title)
            elif ref.parsed_title:
                known_titles.append(ref.parsed_title)
            else:
                known_titles.append(ref.raw_string)
        candidates, notices = suggest_missing(
            doc.title,
            doc.abstract,
            known_titles,
            components.advisor,
            config.suggestion_duplicate_threshold,
        )
        store.put_assessments(manuscript_id, [a.as_dict() for a in assessments])
        store.put_suggestions(
            manuscript_id,
            {
                "label": SUGGESTION_LABEL,
                "candidates": [c.as_dict() for c in candidates],
                "notices": notices,
            },
        )
    except Exception as exc:
        store.fail_stage(manuscript_id, "integrity", str(exc))
        raise
    flagged = sum(1 for a in assessments if a.flags)
    store.finish_stage(
        manuscript_id, "integrity", f"{flagged} references carry integrity flags"
    )


def run_report(
    store: Store, manuscript_id: str, config: RunConfig, tau: float | None = None
) -> dict:
    store.require_done(manuscript_id, ("parse", "enrich", "score", "integrity"))
    if tau is None:
        stored = store.get_tau(manuscript_id)
        tau = config.tau_default if stored is None else stored
    store.begin_stage(manuscript_id, "report")
    store.finish_stage(manuscript_id, "report", f"rendered at tau={tau:g}")
    return build_report(store, manuscript_id, tau)


_STAGE_RUNNERS = {
    "parse": run_parse,
    "enrich": run_enrich,
    "score": run_score,
    "integrity": run_integrity,
}


def process(
    store: Store,
    manuscript_id: str,
    components: Components,
    config: RunConfig,
    stages: list[str] | None = None,
) -> dict[str, str]:
    """Run the requested stages in pipeline order (default: everything after
    parse). Stage preconditions are enforced by the store, so requesting
    'score' on a freshly parsed manuscript fails loudly instead of silently
    scoring stale data."""
    requested = list(stages) if stages else ["enrich", "score", "integrity", "report"]
    for stage in requested:
        if stage not in STAGES:
            raise ValueError(f"unknown stage: {stage}")
    for stage in STAGES:
        if stage not in requested:
            continue
        log.info("running stage %s for %s", stage, manuscript_id)
        if stage == "report":
            run_report(store, manuscript_id, config)
        elif stage in ("enrich", "score", "integrity"):
            _STAGE_RUNNERS[stage](store, manuscript_id, components, config)
        else:
            run_parse(store, manuscript_id, config)
    return {stage: rec.status for stage, rec in store.stage_statuses(manuscript_id).items()}


# -- evaluation and diagnostics -------------------------------------------------


def evaluate_document(
    store: Store,
    manuscript_id: str,
    gold_text: str,
    config: RunConfig,
    tau: float | None = None,
) -> MetricsReport:
    labels = parse_gold_csv(gold_text)
    store.require_done(manuscript_id, ("parse", "enrich", "score"))
    store.put_gold_labels(manuscript_id, [(l.ref_id, l.label) for l in labels])
    if tau is None:
        stored = store.get_tau(manuscript_id)
        tau = config.tau_default if stored is None else stored
    assessments = _load_assessments(store, manuscript_id)
    alignment = align(labels, assessments)
    return evaluate_at(alignment.pairs, tau, alignment.notices)


def sweep_document(
    store: Store,
    manuscript_id: str,
    taus: list[float],
    config: RunConfig,
) -> list[MetricsReport]:
    stored = store.get_gold_labels(manuscript_id)
    if not stored:
        raise GoldLabelError("no gold labels stored for this manuscript; upload them first")
    store.require_done(manuscript_id, ("parse", "enrich", "score"))
    labels = [GoldLabel(ref_id, label) for ref_id, label in stored]
    assessments = _load_assessments(store, manuscript_id)
    alignment = align(labels, assessments)
    return [evaluate_at(alignment.pairs, tau, alignment.notices) for tau in taus]


def diagnostics_document(
    store: Store,
    manuscript_id: str,
    config: RunConfig,
    window_years: int | None = None,
    reference_year: int | None = None,
) -> dict:
    store.require_done(manuscript_id, ("parse", "enrich"))
    doc = _load_document(store, manuscript_id)
    enriched = _load_enrichment(store, manuscript_id)

    years: list[int | None] = []
    venues: list[str | None] = []
    author_lists: list[list[str]] = []
    for ref in doc.references:
        record = enriched.get(ref.ref_id)
        year = record.year if record is not None and record.year is not None else ref.parsed_year
        years.append(year)
        venues.append(record.venue if record is not None else None)
        if record is not None and record.authors:
            author_lists.append(list(record.authors))
        else:
            author_lists.append([p.full for p in ref.parsed_authors])

    profile = recency(
        years,
        window_years or config.recency_window_years,
        reference_year,
    )
    summary = concentration(venues, author_lists)
    network = export_network(
        manuscript_id,
        [r.ref_id for r in doc.references],
        author_lists,
        config.author_match_threshold,
    )
    return {
        "manuscript_id": manuscript_id,
        "recency": profile.as_dict(),
        "concentration": summary.as_dict(),
        "network": network.as_dict(),
    }


# -- facade ---------------------------------------------------------------------


class Engine:
    """One configured audit engine: store + providers + operations."""

    def __init__(
        self,
        config: RunConfig | None = None,
        store: Store | None = None,
        components: Components | None = None,
    ):
        self.config = config or RunConfig()
        self.store = store or Store(self.config.db_path)
        self.components = components or build_components(self.config)

    def close(self) -> None:
        self.store.close()

    def effective_tau(self, manuscript_id: str) -> float:
        stored = self.store.get_tau(manuscript_id)
        return self.config.tau_default if stored is None else stored

    def ingest(self, payload: dict) -> str:
        return ingest_document(self.store, payload, self.config)

    def process(self, manuscript_id: str, stages: list[str] | None = None) -> dict[str, str]:
        return process(self.store, manuscript_id, self.components, self.config, stages)

    def report(self, manuscript_id: str, tau: float | None = None) -> dict:
        return run_report(self.store, manuscript_id, self.config, tau)

    def evaluate(self, manuscript_id: str, gold_text: str, tau: float | None = None):
        return evaluate_document(self.store, manuscript_id, gold_text, self.config, tau)

    def sweep(self, manuscript_id: str, taus: list[float]):
        return sweep_document(self.store, manuscript_id, taus, self.config)

    def diagnostics(
        self,
        manuscript_id: str,
        window_years: int | None = None,
        reference_year: int | None = None,
    ) -> dict:
        return diagnostics_document(
            self.store, manuscript_id, self.config, window_years, reference_year
        )

    def status(self, manuscript_id: str) -> dict:
        payload = self.store.get_document(manuscript_id)
        statuses = self.store.stage_statuses(manuscript_id)
        return {
            "manuscript_id": manuscript_id,
            "title": payload.get("title", ""),
            "reference_count": len(payload.get("references", [])),
            "tau": self.effective_tau(manuscript_id),
            "stages": {
                stage: {
                    "status": rec.status,
                    "message": rec.message,
                    "started_at": rec.started_at,
                    "finished_at": rec.finished_at,
                }
                for stage, rec in statuses.items()
            },
        }

    def set_tau(self, manuscript_id: str, tau: float) -> dict:
        if not 0.0 <= tau <= 100.0:
            raise ValueError(f"tau must lie in [0, 100], got {tau}")
        self.store.set_tau(manuscript_id, tau)
        return {"manuscript_id": manuscript_id, "tau": tau}

    def citations(
        self,
        manuscript_id: str,
        tau: float | None = None,
        offset: int = 0,
        limit: int = 500,
    ) -> dict:
        self.store.require_done(manuscript_id, ("parse", "enrich", "score", "integrity"))
        tau = self.effective_tau(manuscript_id) if tau is None else tau
        entries = build_report(self.store, manuscript_id, tau)["entries"]
        total = len(entries)
        offset = max(0, offset)
        limit = max(1, min(limit, 500))
        page = entries[offset:offset + limit]
        return {
            "manuscript_id": manuscript_id,
            "tau": tau,
            "total": total,
            "offset": offset,
            "limit": limit,
            "entries": page,
        }

    def citation_detail(self, manuscript_id: str, ref_id: str) -> dict:
        assessment = self.store.get_assessment(manuscript_id, ref_id)
        doc = _load_document(self.store, manuscript_id)
        enriched = _load_enrichment(self.store, manuscript_id)
        contexts = [
            c for c in self.store.get_contexts(manuscript_id) if c["ref_id"] == ref_id
        ]
        finding = analyze_self_citation(
            doc,
            enriched,
            _load_assessments(self.store, manuscript_id),
            self.config.author_match_threshold,
        ).get(ref_id)
        record = enriched.get(ref_id)
        overrides = [
            o for o in self.store.get_overrides(manuscript_id) if o["reference_id"] == ref_id
        ]
        return {
            "manuscript_id": manuscript_id,
            "assessment": assessment,
            "contexts": contexts,
            "enrichment": record.as_dict() if record is not None else None,
            "self_citation": finding.as_dict() if finding is not None else None,
            "overrides": overrides,
        }

    def record_override(
        self, manuscript_id: str, ref_id: str, decision: str, note: str = ""
    ) -> dict:
        return self.store.record_override(manuscript_id, ref_id, decision, note)
