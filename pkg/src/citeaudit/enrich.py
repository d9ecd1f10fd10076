"""Reference enrichment: metadata retrieval, abstract fallback, consistency.

One primary metadata provider is asked first. If it yields no abstract, the
numbered abstract tiers are tried in order and the walk stops at the first
hit. Provider failures never escape this module; they are accumulated as
per-provider reasons on the enriched record.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ProviderError
from .ingest import ReferenceRecord
from .providers import MetadataRecord, ProviderChain, fetch_with_cache, make_query
from .textmatch import similarity

TITLE_SIMILARITY_THRESHOLD = 0.85
YEAR_TOLERANCE = 1

CONSISTENT = "consistent"
MISMATCH = "mismatch"
UNVERIFIABLE = "unverifiable"


@dataclass(frozen=True)
class ConsistencyVerdict:
    status: str  # consistent | mismatch | unverifiable
    title_similarity: float | None
    year_delta: int | None
    reasons: tuple[str, ...]

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "title_similarity": self.title_similarity,
            "year_delta": self.year_delta,
            "reasons": list(self.reasons),
        }


@dataclass(frozen=True)
class EnrichedMetadata:
    ref_id: str
    source: str | None  # provider that supplied the main record
    title: str | None
    year: int | None
    doi: str | None
    abstract: str | None
    abstract_source_tier: int | None  # None when the primary record had it
    authors: tuple[str, ...]
    venue: str | None
    is_retracted: bool
    consistency: ConsistencyVerdict
    failure_reasons: tuple[str, ...] = ()

    def as_dict(self) -> dict:
        return {
            "ref_id": self.ref_id,
            "source": self.source,
            "title": self.title,
            "year": self.year,
            "doi": self.doi,
            "abstract": self.abstract,
            "abstract_source_tier": self.abstract_source_tier,
            "authors": list(self.authors),
            "venue": self.venue,
            "is_retracted": self.is_retracted,
            "consistency": self.consistency.as_dict(),
            "failure_reasons": list(self.failure_reasons),
        }


def enriched_from_dict(data: dict) -> EnrichedMetadata:
    consistency = data["consistency"]
    return EnrichedMetadata(
        ref_id=data["ref_id"],
        source=data["source"],
        title=data["title"],
        year=data["year"],
        doi=data["doi"],
        abstract=data["abstract"],
        abstract_source_tier=data["abstract_source_tier"],
        authors=tuple(data["authors"]),
        venue=data["venue"],
        is_retracted=data["is_retracted"],
        consistency=ConsistencyVerdict(
            status=consistency["status"],
            title_similarity=consistency["title_similarity"],
            year_delta=consistency["year_delta"],
            reasons=tuple(consistency["reasons"]),
        ),
        failure_reasons=tuple(data.get("failure_reasons", ())),
    )


def title_similarity(a: str, b: str) -> float:
    return similarity(a, b)


def check_consistency(
    parsed: ReferenceRecord,
    retrieved_title: str | None,
    retrieved_year: int | None,
    title_threshold: float = TITLE_SIMILARITY_THRESHOLD,
    year_tolerance: int = YEAR_TOLERANCE,
) -> ConsistencyVerdict:
    """Compare what the bibliography claims against what a provider returned.

    A rule only applies when both sides of its comparison exist. No
    applicable rule at all means the verdict is unverifiable, not a pass.
    """
    reasons: list[str] = []
    sim: float | None = None
    delta: int | None = None
    any_rule = False
    failed = False

    if parsed.parsed_title and retrieved_title:
        any_rule = True
        sim = title_similarity(parsed.parsed_title, retrieved_title)
        if sim < title_threshold:
            failed = True
            reasons.append(
                f"title similarity {sim:.2f} below threshold {title_threshold:.2f}"
            )
    if parsed.parsed_year is not None and retrieved_year is not None:
        any_rule = True
        delta = retrieved_year - parsed.parsed_year
        if abs(delta) > year_tolerance:
            failed = True
            reasons.append(f"year delta {abs(delta)} exceeds tolerance {year_tolerance}")

    if not any_rule:
        return ConsistencyVerdict(
            UNVERIFIABLE, None, None, ("no comparable title or year on both sides",)
        )
    return ConsistencyVerdict(MISMATCH if failed else CONSISTENT, sim, delta, tuple(reasons))


def enrich_reference(
    ref: ReferenceRecord,
    chain: ProviderChain,
    cache,
    ttl_seconds: int,
    title_threshold: float = TITLE_SIMILARITY_THRESHOLD,
    year_tolerance: int = YEAR_TOLERANCE,
    now: float | None = None,
) -> EnrichedMetadata:
    query = make_query(ref)
    failures: list[str] = []
    record: MetadataRecord | None = None

    try:
        payload = fetch_with_cache(cache, chain.primary, query, ttl_seconds, now=now)
        record = chain.primary.parse(payload)
    except ProviderError as exc:
        failures.append(f"{exc.provider}: {exc.cause}")

    source = title = doi = abstract = venue = None
    year: int | None = None
    authors: tuple[str, ...] = ()
    is_retracted = False
    abstract_tier: int | None = None

    if record is not None and record.found:
        source = chain.primary.descriptor.name
        title = record.title
        year = record.year
        doi = record.doi
        abstract = record.abstract
        authors = record.authors
        venue = record.venue
        is_retracted = record.is_retracted

    if abstract is None:
        for tier, provider in chain.tiers:
            try:
                payload = fetch_with_cache(cache, provider, query, ttl_seconds, now=now)
                tier_record = provider.parse(payload)
            except ProviderError as exc:
                failures.append(f"{exc.provider}: {exc.cause}")
                continue
            if tier_record.found and tier_record.abstract:
                abstract = tier_record.abstract
                abstract_tier = tier
                # Tier hits only ever contribute the abstract; bibliographic
                # fields stay with the primary record to keep one authority.
                break

    consistency = check_consistency(ref, title, year, title_threshold, year_tolerance)
    return EnrichedMetadata(
        ref_id=ref.ref_id,
        source=source,
        title=title,
        year=year,
        doi=doi,
        abstract=abstract,
        abstract_source_tier=abstract_tier,
        authors=authors,
        venue=venue,
        is_retracted=is_retracted,
        consistency=consistency,
        failure_reasons=tuple(failures),
    )
