"""Corpus-level diagnostics: recency, venue/author concentration, network.

These read enriched metadata only. They never touch relevance scores, so a
diagnostics run cannot perturb an audit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .ingest import PersonName
from .textmatch import normalize_text, similarity

DEFAULT_WINDOW_YEARS = 5
SHARED_AUTHOR_THRESHOLD = 0.90


@dataclass(frozen=True)
class RecencyProfile:
    reference_year: int
    window_years: int
    in_window: int
    dated: int  # references with a known year
    undated: int
    fraction_in_window: float  # over dated references
    histogram: tuple[tuple[int, int], ...]  # (year, count), ascending

    def as_dict(self) -> dict:
        return {
            "reference_year": self.reference_year,
            "window_years": self.window_years,
            "in_window": self.in_window,
            "dated": self.dated,
            "undated": self.undated,
            "fraction_in_window": self.fraction_in_window,
            "histogram": [list(pair) for pair in self.histogram],
        }


def recency(
    years: Iterable[int | None],
    window_years: int = DEFAULT_WINDOW_YEARS,
    reference_year: int | None = None,
) -> RecencyProfile:
    """Share of dated references inside the trailing window.

    The window covers window_years calendar years ending at reference_year
    inclusive. reference_year defaults to the newest year present; undated
    references are counted separately, never guessed.
    """
    if window_years < 1:
        raise ValueError("window_years must be >= 1")
    materialized = list(years)
    known = [y for y in materialized if y is not None]
    undated = len(materialized) - len(known)
    histogram: dict[int, int] = {}
    for y in known:
        histogram[y] = histogram.get(y, 0) + 1
    if reference_year is None:
        reference_year = max(known) if known else 0
    cutoff = reference_year - window_years + 1
    in_window = sum(1 for y in known if cutoff <= y <= reference_year)
    dated = len(known)
    return RecencyProfile(
        reference_year=reference_year,
        window_years=window_years,
        in_window=in_window,
        dated=dated,
        undated=undated,
        fraction_in_window=(in_window / dated) if dated else 0.0,
        histogram=tuple(sorted(histogram.items())),
    )


@dataclass(frozen=True)
class ConcentrationSummary:
    venue_counts: tuple[tuple[str, int], ...]  # by count desc, then name
    venue_index: float  # sum of squared shares over known venues
    unknown_venue: int
    author_counts: tuple[tuple[str, int], ...]
    author_index: float

    def as_dict(self) -> dict:
        return {
            "venue_counts": [list(pair) for pair in self.venue_counts],
            "venue_index": self.venue_index,
            "unknown_venue": self.unknown_venue,
            "author_counts": [list(pair) for pair in self.author_counts],
            "author_index": self.author_index,
        }


def _herfindahl(counts: dict[str, int]) -> float:
    total = sum(counts.values())
    if not total:
        return 0.0
    return sum((c / total) ** 2 for c in counts.values())


def concentration(
    venues: Sequence[str | None],
    author_lists: Sequence[Sequence[str]],
) -> ConcentrationSummary:
    """How concentrated the bibliography is across venues and authors.

    The index is the sum of squared shares: 1.0 means everything from a
    single source, 1/n means an even spread over n. Venue names and authors
    are normalized before counting so casing noise does not split buckets.
    """
    venue_counts: dict[str, int] = {}
    display: dict[str, str] = {}
    unknown = 0
    for venue in venues:
        if venue is None or not venue.strip():
            unknown += 1
            continue
        key = normalize_text(venue)
        venue_counts[key] = venue_counts.get(key, 0) + 1
        display.setdefault(key, venue.strip())

    author_counts: dict[str, int] = {}
    author_display: dict[str, str] = {}
    for authors in author_lists:
        seen_in_ref: set[str] = set()
        for author in authors:
            key = normalize_text(author)
            if not key or key in seen_in_ref:
                continue
            seen_in_ref.add(key)
            author_counts[key] = author_counts.get(key, 0) + 1
            author_display.setdefault(key, author.strip())

    def ranked(counts: dict[str, int], names: dict[str, str]) -> tuple[tuple[str, int], ...]:
        return tuple(
            (names[key], count)
            for key, count in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        )

    return ConcentrationSummary(
        venue_counts=ranked(venue_counts, display),
        venue_index=_herfindahl(venue_counts),
        unknown_venue=unknown,
        author_counts=ranked(author_counts, author_display),
        author_index=_herfindahl(author_counts),
    )


@dataclass(frozen=True)
class NetworkExport:
    nodes: tuple[dict, ...]
    edges: tuple[dict, ...]

    def as_dict(self) -> dict:
        return {"nodes": [dict(n) for n in self.nodes], "edges": [dict(e) for e in self.edges]}


def export_network(
    manuscript_id: str,
    ref_ids: Sequence[str],
    author_lists: Sequence[Sequence[str]],
    threshold: float = SHARED_AUTHOR_THRESHOLD,
) -> NetworkExport:
    """Citation graph: the manuscript cites each reference; references that
    share an author (fuzzy match at threshold) are linked to each other.

    Edges are emitted in document order (i < j) so the export is stable.
    """
    nodes = [{"id": manuscript_id, "kind": "manuscript"}]
    nodes.extend({"id": rid, "kind": "reference"} for rid in ref_ids)
    edges = [
        {"source": manuscript_id, "target": rid, "kind": "cites"} for rid in ref_ids
    ]

    normalized: list[list[PersonName]] = [
        [PersonName(a) for a in authors] for authors in author_lists
    ]
    for i in range(len(ref_ids)):
        for j in range(i + 1, len(ref_ids)):
            shared = any(
                similarity(a.normalized, b.normalized) >= threshold
                for a in normalized[i]
                for b in normalized[j]
            )
            if shared:
                edges.append(
                    {"source": ref_ids[i], "target": ref_ids[j], "kind": "shared_author"}
                )
    return NetworkExport(tuple(nodes), tuple(edges))
