"""Integrity screens layered on top of scoring: flags, self-citation, gaps.

Everything here annotates. Scores computed upstream are never touched; a
reference gains flags and notices, never a different number.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .enrich import MISMATCH, EnrichedMetadata
from .errors import ProviderError
from .ingest import ManuscriptDocument, PersonName
from .providers import SuggestionProvider
from .scoring import BORDERLINE_MIN, Assessment
from .textmatch import similarity

FLAG_RETRACTED = "RETRACTED"
FLAG_METADATA_MISMATCH = "METADATA_MISMATCH"
FLAG_MISSING_DOI = "MISSING_DOI"
FLAG_MISSING_ABSTRACT = "MISSING_ABSTRACT"
FLAG_UNSCORABLE = "UNSCORABLE"
FLAG_QUESTIONABLE_SELF_CITE = "QUESTIONABLE_SELF_CITE"

AUTHOR_MATCH_THRESHOLD = 0.90
SUGGESTION_CAP = 3
SUGGESTION_DUPLICATE_THRESHOLD = 0.85
SUGGESTION_LABEL = "generative hypotheses for expert verification"


@dataclass(frozen=True)
class IntegrityFlag:
    kind: str
    detail: str


@dataclass(frozen=True)
class SelfCitationFinding:
    ref_id: str
    author_pairs: tuple[tuple[str, str, float], ...]  # (manuscript, reference, ratio)
    team_overlap: bool  # >= 2 distinct authors matched on each side
    venue_overlap: bool | None  # None when either venue is unknown
    questionable: bool

    @property
    def self_cite(self) -> bool:
        return bool(self.author_pairs)

    def as_dict(self) -> dict:
        return {
            "ref_id": self.ref_id,
            "author_pairs": [list(p) for p in self.author_pairs],
            "team_overlap": self.team_overlap,
            "venue_overlap": self.venue_overlap,
            "questionable": self.questionable,
        }


def author_match(a: PersonName, b: PersonName) -> float:
    return similarity(a.normalized, b.normalized)


def match_author_lists(
    manuscript_authors: tuple[PersonName, ...],
    reference_authors: tuple[PersonName, ...],
    threshold: float = AUTHOR_MATCH_THRESHOLD,
) -> list[tuple[int, int, float]]:
    pairs = []
    for i, ma in enumerate(manuscript_authors):
        for j, ra in enumerate(reference_authors):
            ratio = author_match(ma, ra)
            if ratio >= threshold:
                pairs.append((i, j, ratio))
    return pairs


def _max_bipartite_matching(pairs: list[tuple[int, int, float]]) -> int:
    """Size of a maximum one-to-one matching over candidate pairs.

    Counting raw pairs would let one prolific author satisfy the team-overlap
    rule alone; the matching forces distinct people on both sides.
    """
    adjacency: dict[int, list[int]] = {}
    for left, right, _ in pairs:
        adjacency.setdefault(left, []).append(right)
    match_right: dict[int, int] = {}

    def assign(left: int, seen: set[int]) -> bool:
        for right in adjacency.get(left, ()):
            if right in seen:
                continue
            seen.add(right)
            if right not in match_right or assign(match_right[right], seen):
                match_right[right] = left
                return True
        return False

    return sum(1 for left in sorted(adjacency) if assign(left, set()))


def analyze_self_citation(
    doc: ManuscriptDocument,
    enriched: dict[str, EnrichedMetadata],
    assessments: list[Assessment],
    author_threshold: float = AUTHOR_MATCH_THRESHOLD,
) -> dict[str, SelfCitationFinding]:
    """Author-overlap findings per reference.

    Any overlap marks a self-citation. It only becomes questionable when the
    fused relevance score also sits in the low band (below BORDERLINE_MIN):
    citing your own relevant work is normal practice.
    """
    score_by_ref = {a.reference_id: a.rs_final for a in assessments}
    findings: dict[str, SelfCitationFinding] = {}
    for ref in doc.references:
        record = enriched.get(ref.ref_id)
        names = record.authors if record is not None and record.authors else ref.parsed_authors
        ref_authors = tuple(n if isinstance(n, PersonName) else PersonName(n) for n in names)
        index_pairs = match_author_lists(doc.authors, ref_authors, author_threshold)
        author_pairs = tuple(
            (doc.authors[i].full, ref_authors[j].full, round(ratio, 4))
            for i, j, ratio in index_pairs
        )
        team_overlap = _max_bipartite_matching(index_pairs) >= 2

        venue_overlap: bool | None = None
        if doc.venue and record is not None and record.venue:
            venue_overlap = similarity(doc.venue, record.venue) >= author_threshold

        rs_final = score_by_ref.get(ref.ref_id)
        questionable = bool(author_pairs) and rs_final is not None and rs_final < BORDERLINE_MIN
        findings[ref.ref_id] = SelfCitationFinding(
            ref_id=ref.ref_id,
            author_pairs=author_pairs,
            team_overlap=team_overlap,
            venue_overlap=venue_overlap,
            questionable=questionable,
        )
    return findings


def detect_flags(
    assessment: Assessment,
    enriched: EnrichedMetadata | None,
    parsed_doi: str | None,
    finding: SelfCitationFinding | None,
) -> list[IntegrityFlag]:
    flags: list[IntegrityFlag] = []
    if enriched is not None and enriched.is_retracted:
        flags.append(IntegrityFlag(FLAG_RETRACTED, "retrieved record is marked retracted"))
    if enriched is not None and enriched.consistency.status == MISMATCH:
        flags.append(
            IntegrityFlag(
                FLAG_METADATA_MISMATCH,
                "; ".join(enriched.consistency.reasons) or "bibliography disagrees with record",
            )
        )
    if not parsed_doi and (enriched is None or not enriched.doi):
        flags.append(IntegrityFlag(FLAG_MISSING_DOI, "no DOI parsed or retrieved"))
    if enriched is None or not enriched.abstract:
        flags.append(
            IntegrityFlag(FLAG_MISSING_ABSTRACT, "no abstract from any source")
        )
    if assessment.unscorable:
        flags.append(IntegrityFlag(FLAG_UNSCORABLE, "both relevance signals absent"))
    if finding is not None and finding.questionable:
        flags.append(
            IntegrityFlag(
                FLAG_QUESTIONABLE_SELF_CITE,
                "author overlap with a low fused relevance score",
            )
        )
    return flags


def apply_integrity(
    doc: ManuscriptDocument,
    enriched: dict[str, EnrichedMetadata],
    assessments: list[Assessment],
    author_threshold: float = AUTHOR_MATCH_THRESHOLD,
) -> dict[str, SelfCitationFinding]:
    """Annotate assessments in place with flags and self-citation markers.

    Returns the per-reference findings so callers can persist the evidence.
    Score fields are read, never written.
    """
    findings = analyze_self_citation(doc, enriched, assessments, author_threshold)
    parsed_doi = {r.ref_id: r.parsed_doi for r in doc.references}
    for assessment in assessments:
        record = enriched.get(assessment.reference_id)
        finding = findings.get(assessment.reference_id)
        flags = detect_flags(assessment, record, parsed_doi.get(assessment.reference_id), finding)
        assessment.flags = [f.kind for f in flags]
        assessment.self_cite = finding.self_cite if finding is not None else False
        for f in flags:
            assessment.notices.append(f"{f.kind}: {f.detail}")
    return findings


@dataclass(frozen=True)
class SuggestionCandidate:
    title: str
    rationale: str
    doi: str | None = None

    def as_dict(self) -> dict:
        return {"title": self.title, "rationale": self.rationale, "doi": self.doi}


def suggest_missing(
    title: str,
    abstract: str,
    bibliography_titles: list[str],
    advisor: SuggestionProvider,
    duplicate_threshold: float = SUGGESTION_DUPLICATE_THRESHOLD,
    cap: int = SUGGESTION_CAP,
) -> tuple[list[SuggestionCandidate], list[str]]:
    """Candidate citations the manuscript may be missing.

    Candidates near-duplicating an existing bibliography title (or an earlier
    candidate) are dropped. Output is capped and explicitly labeled a
    hypothesis list; nothing here asserts an omission.
    """
    notices: list[str] = []
    try:
        raw_candidates = advisor.suggest(title, abstract, list(bibliography_titles))
    except ProviderError as exc:
        return [], [f"PROVIDER_FAILURE: suggestion provider {exc.provider} failed: {exc.cause}"]

    accepted: list[SuggestionCandidate] = []
    for i, raw in enumerate(raw_candidates):
        if not isinstance(raw, dict):
            notices.append(f"DROPPED_SUGGESTION: candidate {i} is not an object")
            continue
        cand_title = raw.get("title")
        rationale = raw.get("rationale")
        if not isinstance(cand_title, str) or not cand_title.strip():
            notices.append(f"DROPPED_SUGGESTION: candidate {i} has no title")
            continue
        if not isinstance(rationale, str) or not rationale.strip():
            notices.append(f"DROPPED_SUGGESTION: candidate {i} has no rationale")
            continue
        doi = raw.get("doi")
        doi = doi.strip() if isinstance(doi, str) and doi.strip() else None

        duplicate_of = None
        for existing in bibliography_titles:
            if similarity(cand_title, existing) >= duplicate_threshold:
                duplicate_of = existing
                break
        if duplicate_of is None:
            for prior in accepted:
                if similarity(cand_title, prior.title) >= duplicate_threshold:
                    duplicate_of = prior.title
                    break
        if duplicate_of is not None:
            notices.append(
                f"DROPPED_SUGGESTION: {cand_title!r} duplicates {duplicate_of!r}"
            )
            continue
        accepted.append(SuggestionCandidate(cand_title.strip(), rationale.strip(), doi))
        if len(accepted) >= cap:
            break
    return accepted, notices
