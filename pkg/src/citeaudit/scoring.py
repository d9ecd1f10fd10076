"""Relevance scoring: judgment signal, embedding signal, weighted fusion.

Two independent signals on a 0-100 scale. A structured judgment of the
citation in context carries weight 0.6; cosine similarity between the
manuscript abstract and the reference abstract carries weight 0.4. A missing
signal is absent, never zero: fusion degrades to the surviving signal with a
notice, and a reference with no signal at all is unscorable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from .errors import ProviderError
from .ingest import CitationContext, ManuscriptDocument
from .providers import EmbeddingProvider, JudgmentProvider, JudgmentRequest

BAND_RELEVANT = "Relevant"
BAND_BORDERLINE = "Borderline"
BAND_IRRELEVANT = "Irrelevant"

RELEVANT_MIN = 70.0
BORDERLINE_MIN = 40.0

DEFAULT_TAU = 17.0

# In-text context handed to the judgment provider: most recent mention first,
# truncated so prompts stay bounded.
CONTEXT_CHAR_CAP = 1500


@dataclass(frozen=True)
class FusionWeights:
    w_llm: float = 0.6
    w_embed: float = 0.4

    def __post_init__(self):
        if self.w_llm < 0 or self.w_embed < 0:
            raise ValueError("fusion weights must be non-negative")
        if abs(self.w_llm + self.w_embed - 1.0) >= 1e-9:
            raise ValueError(
                f"fusion weights must sum to 1, got {self.w_llm} + {self.w_embed}"
            )


@dataclass(frozen=True)
class ScoringJudgment:
    score: float  # 0-100 after clamping
    intent: str
    evidence: str
    rationale: str


@dataclass(frozen=True)
class RelevanceSignals:
    rs_llm: float | None
    rs_embed: float | None
    rs_final: float
    notices: tuple[str, ...] = ()


@dataclass
class Assessment:
    """Everything downstream consumers need about one reference."""

    reference_id: str
    rs_llm: float | None
    rs_embed: float | None
    rs_final: float | None
    band: str | None
    flagged_at_tau: bool | None
    tau: float
    intent: str | None
    evidence: str | None
    rationale: str | None
    self_cite: bool = False
    flags: list[str] = field(default_factory=list)
    notices: list[str] = field(default_factory=list)

    @property
    def unscorable(self) -> bool:
        return self.rs_final is None

    def as_dict(self) -> dict:
        return {
            "reference_id": self.reference_id,
            "rs_llm": self.rs_llm,
            "rs_embed": self.rs_embed,
            "rs_final": self.rs_final,
            "band": self.band,
            "flagged_at_tau": self.flagged_at_tau,
            "tau": self.tau,
            "intent": self.intent,
            "evidence": self.evidence,
            "rationale": self.rationale,
            "self_cite": self.self_cite,
            "flags": list(self.flags),
            "notices": list(self.notices),
        }


def assessment_from_dict(data: dict) -> Assessment:
    return Assessment(
        reference_id=data["reference_id"],
        rs_llm=data["rs_llm"],
        rs_embed=data["rs_embed"],
        rs_final=data["rs_final"],
        band=data["band"],
        flagged_at_tau=data["flagged_at_tau"],
        tau=data["tau"],
        intent=data["intent"],
        evidence=data["evidence"],
        rationale=data["rationale"],
        self_cite=data.get("self_cite", False),
        flags=list(data.get("flags", [])),
        notices=list(data.get("notices", [])),
    )


def categorize(rs_final: float) -> str:
    if not 0.0 <= rs_final <= 100.0:
        raise ValueError(f"score out of range: {rs_final}")
    if rs_final >= RELEVANT_MIN:
        return BAND_RELEVANT
    if rs_final >= BORDERLINE_MIN:
        return BAND_BORDERLINE
    return BAND_IRRELEVANT


def triage(rs_final: float, tau: float) -> bool:
    """Triage is a separate dial from the bands: flag anything below tau."""
    return rs_final < tau


def fuse(
    rs_llm: float | None,
    rs_embed: float | None,
    weights: FusionWeights = FusionWeights(),
) -> RelevanceSignals:
    if rs_llm is None and rs_embed is None:
        raise ValueError("both relevance signals absent; reference is unscorable")
    if rs_llm is not None and rs_embed is not None:
        final = weights.w_llm * rs_llm + weights.w_embed * rs_embed
        return RelevanceSignals(rs_llm, rs_embed, final)
    if rs_llm is not None:
        notice = "DEGRADED_SIGNAL: embedding signal absent; fused score is the judgment signal alone"
        return RelevanceSignals(rs_llm, None, rs_llm, (notice,))
    notice = "DEGRADED_SIGNAL: judgment signal absent; fused score is the embedding signal alone"
    return RelevanceSignals(None, rs_embed, rs_embed, (notice,))


# -- embedding signal ---------------------------------------------------------


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float | None:
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0 or not (math.isfinite(na) and math.isfinite(nb)):
        return None
    return float(np.dot(a, b) / (na * nb))


def embed_score(
    manuscript_abstract: str | None,
    reference_abstract: str | None,
    embedder: EmbeddingProvider,
) -> tuple[float | None, list[str]]:
    """Cosine of the two abstract embeddings, mapped to 0-100.

    Negative cosine clips to 0. A missing abstract yields an absent signal
    with a notice; nothing is ever fabricated as a zero score.
    """
    if not reference_abstract or not reference_abstract.strip():
        return None, ["MISSING_ABSTRACT: reference abstract unavailable; embedding signal absent"]
    if not manuscript_abstract or not manuscript_abstract.strip():
        return None, ["MISSING_ABSTRACT: manuscript abstract unavailable; embedding signal absent"]
    try:
        va = embedder.embed(manuscript_abstract)
        vb = embedder.embed(reference_abstract)
    except ProviderError as exc:
        return None, [f"PROVIDER_FAILURE: embedding provider {exc.provider} failed: {exc.cause}"]
    cos = cosine_similarity(np.asarray(va, dtype=np.float64), np.asarray(vb, dtype=np.float64))
    if cos is None:
        return None, ["PROVIDER_FAILURE: embedding provider returned a degenerate vector"]
    return 100.0 * min(1.0, max(0.0, cos)), []


# -- judgment signal ----------------------------------------------------------


class MalformedJudgment(ValueError):
    pass


def parse_judgment(raw: Any) -> tuple[ScoringJudgment, list[str]]:
    """Validate one raw judgment payload into a ScoringJudgment.

    Raises MalformedJudgment when the payload cannot be trusted; the caller
    retries once and then records an absent signal.
    """
    if not isinstance(raw, Mapping):
        raise MalformedJudgment("judgment payload is not an object")
    score = raw.get("score")
    if isinstance(score, bool) or not isinstance(score, (int, float)) or not math.isfinite(score):
        raise MalformedJudgment(f"score is not a finite number: {score!r}")
    intent = raw.get("intent")
    if not isinstance(intent, str) or not intent.strip():
        raise MalformedJudgment("intent is missing or empty")
    evidence = raw.get("evidence")
    if not isinstance(evidence, str):
        raise MalformedJudgment("evidence is missing")
    rationale = raw.get("rationale")
    if not isinstance(rationale, str):
        raise MalformedJudgment("rationale is missing")
    if score > 0 and not evidence.strip():
        raise MalformedJudgment("positive score without supporting evidence")

    notices: list[str] = []
    clamped = float(score)
    if clamped < 0.0 or clamped > 100.0:
        bounded = min(100.0, max(0.0, clamped))
        notices.append(f"CLAMPED_SCORE: provider score {clamped:g} clamped to {bounded:g}")
        clamped = bounded
    return ScoringJudgment(clamped, intent.strip(), evidence, rationale), notices


def build_context_text(contexts: list[CitationContext]) -> str:
    """Concatenate mention windows newest-first, capped at CONTEXT_CHAR_CAP."""
    ordered = sorted(contexts, key=lambda c: c.target_index, reverse=True)
    joined = "\n".join(c.window_text for c in ordered)
    return joined[:CONTEXT_CHAR_CAP]


# -- document-level scoring ---------------------------------------------------


def _judge_batch(
    judge: JudgmentProvider, batch: list[JudgmentRequest]
) -> dict[str, Any]:
    try:
        return judge.judge(batch)
    except ProviderError:
        return {}


def score_document(
    doc: ManuscriptDocument,
    contexts: list[CitationContext],
    abstracts: Mapping[str, str | None],
    embedder: EmbeddingProvider,
    judge: JudgmentProvider,
    weights: FusionWeights = FusionWeights(),
    tau: float = DEFAULT_TAU,
    batch_size: int = 8,
) -> list[Assessment]:
    """Score every reference in document order.

    abstracts maps ref_id -> retrieved abstract (None when all sources came
    up empty). Judgment calls go out in batches keyed by ref_id; a failed or
    malformed item is retried once individually before its signal is
    recorded absent.
    """
    by_ref: dict[str, list[CitationContext]] = {}
    for ctx in contexts:
        by_ref.setdefault(ctx.ref_id, []).append(ctx)

    requests: list[JudgmentRequest] = []
    base_notices: dict[str, list[str]] = {}
    for ref in doc.references:
        ref_contexts = by_ref.get(ref.ref_id, [])
        notices: list[str] = []
        no_context = not ref_contexts
        if no_context:
            notices.append("NO_CONTEXT: no in-text context; judged from bibliography entry alone")
        base_notices[ref.ref_id] = notices
        requests.append(
            JudgmentRequest(
                ref_id=ref.ref_id,
                manuscript_abstract=doc.abstract,
                context_text=build_context_text(ref_contexts) if ref_contexts else ref.raw_string,
                reference_abstract=abstracts.get(ref.ref_id),
                no_context=no_context,
            )
        )

    raw_by_ref: dict[str, Any] = {}
    for start in range(0, len(requests), max(1, batch_size)):
        raw_by_ref.update(_judge_batch(judge, requests[start:start + max(1, batch_size)]))

    assessments: list[Assessment] = []
    for ref, request in zip(doc.references, requests):
        notices = list(base_notices[ref.ref_id])
        judgment: ScoringJudgment | None = None

        raw = raw_by_ref.get(request.ref_id)
        for attempt in (1, 2):
            if raw is not None:
                try:
                    judgment, clamp_notices = parse_judgment(raw)
                    notices.extend(clamp_notices)
                    break
                except MalformedJudgment as exc:
                    if attempt == 2:
                        notices.append(f"PROVIDER_FAILURE: judgment unusable after retry: {exc}")
                        break
            elif attempt == 2:
                notices.append("PROVIDER_FAILURE: judgment provider returned nothing after retry")
                break
            raw = _judge_batch(judge, [request]).get(request.ref_id)

        rs_embed, embed_notices = embed_score(
            doc.abstract, abstracts.get(ref.ref_id), embedder
        )
        notices.extend(embed_notices)

        rs_llm = judgment.score if judgment is not None else None
        if rs_llm is None and rs_embed is None:
            notices.append("UNSCORABLE: both relevance signals absent")
            assessments.append(
                Assessment(
                    reference_id=ref.ref_id,
                    rs_llm=None,
                    rs_embed=None,
                    rs_final=None,
                    band=None,
                    flagged_at_tau=None,
                    tau=tau,
                    intent=None,
                    evidence=None,
                    rationale=None,
                    notices=notices,
                )
            )
            continue

        fused = fuse(rs_llm, rs_embed, weights)
        notices.extend(fused.notices)
        assessments.append(
            Assessment(
                reference_id=ref.ref_id,
                rs_llm=fused.rs_llm,
                rs_embed=fused.rs_embed,
                rs_final=fused.rs_final,
                band=categorize(fused.rs_final),
                flagged_at_tau=triage(fused.rs_final, tau),
                tau=tau,
                intent=judgment.intent if judgment else None,
                evidence=judgment.evidence if judgment else None,
                rationale=judgment.rationale if judgment else None,
                notices=notices,
            )
        )
    return assessments
