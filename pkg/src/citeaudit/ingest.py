"""Manuscript ingestion: payload validation, parse planning, context windows.

The engine canonicalizes a structured manuscript payload as its input;
raw-document parsing (PDF extraction etc.) is an external provider's job and
is out of scope here. ``load_manuscript`` enforces the payload contract and
every document invariant, and ``extract_contexts`` cuts the +/-1-sentence
window around each in-text citation marker.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DuplicateIdError, PayloadError
from .textmatch import normalize_text

# Two-mode parse policy: inputs below this run in one call ...
SINGLE_CALL_LIMIT = 60_000
# ... longer inputs are chunked into segments of at most this many chars.
SEGMENT_SIZE = 50_000

YEAR_MIN, YEAR_MAX = 1400, 2100


@dataclass(frozen=True)
class PersonName:
    """An author name plus its deterministic normalized form."""

    full: str
    normalized: str = field(default="")

    def __post_init__(self):
        if not self.normalized:
            object.__setattr__(self, "normalized", normalize_text(self.full))


@dataclass(frozen=True)
class Sentence:
    index: int
    text: str


@dataclass(frozen=True)
class CitationMarker:
    ref_id: str
    sentence_index: int
    char_span: tuple[int, int] | None = None


@dataclass(frozen=True)
class ReferenceRecord:
    ref_id: str
    raw_string: str
    parsed_title: str | None = None
    parsed_year: int | None = None
    parsed_doi: str | None = None
    parsed_authors: tuple[PersonName, ...] = ()


@dataclass(frozen=True)
class ManuscriptDocument:
    doc_id: str
    title: str
    abstract: str
    authors: tuple[PersonName, ...]
    venue: str | None
    body: tuple[Sentence, ...]
    markers: tuple[CitationMarker, ...]
    references: tuple[ReferenceRecord, ...]

    def reference_ids(self) -> list[str]:
        return [r.ref_id for r in self.references]


@dataclass(frozen=True)
class CitationContext:
    """The in-text neighborhood for one marker: target sentence +/-1."""

    ref_id: str
    target_index: int
    window_text: str
    occurrence_ordinal: int


@dataclass(frozen=True)
class ParsePlan:
    total_chars: int
    mode: str  # "single-call" | "segmented"
    segments: tuple[tuple[int, int], ...]


def plan_parsing(total_chars: int) -> ParsePlan:
    """Decide single-call vs segmented processing for a raw document.

    Inputs under 60,000 chars are one implicit segment (empty input has
    none); longer inputs are covered by maximal 50,000-char segments with the
    remainder in the last one. Segment spans always partition [0, total).
    """
    if total_chars < 0:
        raise ValueError("total_chars must be >= 0")
    if total_chars < SINGLE_CALL_LIMIT:
        segments = ((0, total_chars),) if total_chars > 0 else ()
        return ParsePlan(total_chars, "single-call", segments)
    bounds = list(range(0, total_chars, SEGMENT_SIZE)) + [total_chars]
    segments = tuple(
        (bounds[i], bounds[i + 1]) for i in range(len(bounds) - 1)
    )
    return ParsePlan(total_chars, "segmented", segments)


def _require(payload: dict, key: str, kind, where: str):
    if key not in payload:
        raise PayloadError(f"{where}.{key}" if where else key, "missing required field")
    value = payload[key]
    if kind is int:
        # bools are ints in Python; reject them explicitly
        if isinstance(value, bool) or not isinstance(value, int):
            raise PayloadError(f"{where}.{key}" if where else key, "expected an integer")
    elif not isinstance(value, kind):
        raise PayloadError(
            f"{where}.{key}" if where else key,
            f"expected {kind.__name__}",
        )
    return value


def _optional_str(payload: dict, key: str, where: str) -> str | None:
    value = payload.get(key)
    if value is None:
        return None
    if not isinstance(value, str):
        raise PayloadError(f"{where}.{key}" if where else key, "expected a string or null")
    return value


def _person_names(raw, where: str) -> tuple[PersonName, ...]:
    if not isinstance(raw, list):
        raise PayloadError(where, "expected a list of names")
    names = []
    for i, item in enumerate(raw):
        if isinstance(item, str):
            names.append(PersonName(full=item))
        elif isinstance(item, dict) and isinstance(item.get("full"), str):
            names.append(PersonName(full=item["full"]))
        else:
            raise PayloadError(f"{where}[{i}]", "expected a name string or {full: ...}")
    return tuple(names)


def load_manuscript(payload: dict) -> ManuscriptDocument:
    """Validate a structured manuscript payload into a ManuscriptDocument.

    Rejections name the first failing field; duplicate reference ids are
    rejected with the full duplicate list.
    """
    if not isinstance(payload, dict):
        raise PayloadError("payload", "expected an object")
    doc_id = _require(payload, "doc_id", str, "")
    if not doc_id:
        raise PayloadError("doc_id", "must be non-empty")
    title = _require(payload, "title", str, "")
    abstract = _require(payload, "abstract", str, "")
    authors = _person_names(_require(payload, "authors", list, ""), "authors")
    venue = _optional_str(payload, "venue", "")

    raw_body = _require(payload, "body", list, "")
    body = []
    for i, item in enumerate(raw_body):
        if not isinstance(item, dict):
            raise PayloadError(f"body[{i}]", "expected an object")
        index = _require(item, "index", int, f"body[{i}]")
        text = _require(item, "text", str, f"body[{i}]")
        body.append(Sentence(index=index, text=text))
    for i, sentence in enumerate(body):
        if sentence.index != i:
            raise PayloadError(
                f"body[{i}].index",
                f"sentence indices must be contiguous from 0 (got {sentence.index})",
            )

    raw_refs = _require(payload, "references", list, "")
    references = []
    for i, item in enumerate(raw_refs):
        where = f"references[{i}]"
        if not isinstance(item, dict):
            raise PayloadError(where, "expected an object")
        ref_id = _require(item, "ref_id", str, where)
        if not ref_id:
            raise PayloadError(f"{where}.ref_id", "must be non-empty")
        raw_string = _require(item, "raw_string", str, where)
        parsed_title = _optional_str(item, "parsed_title", where)
        parsed_year = item.get("parsed_year")
        if parsed_year is not None:
            if isinstance(parsed_year, bool) or not isinstance(parsed_year, int):
                raise PayloadError(f"{where}.parsed_year", "expected an integer year")
            if not (YEAR_MIN <= parsed_year <= YEAR_MAX):
                raise PayloadError(
                    f"{where}.parsed_year",
                    f"implausible year {parsed_year} (allowed {YEAR_MIN}-{YEAR_MAX})",
                )
        parsed_doi = _optional_str(item, "parsed_doi", where)
        parsed_authors = _person_names(item.get("parsed_authors", []), f"{where}.parsed_authors")
        references.append(
            ReferenceRecord(
                ref_id=ref_id,
                raw_string=raw_string,
                parsed_title=parsed_title,
                parsed_year=parsed_year,
                parsed_doi=parsed_doi,
                parsed_authors=parsed_authors,
            )
        )
    seen: dict[str, int] = {}
    for ref in references:
        seen[ref.ref_id] = seen.get(ref.ref_id, 0) + 1
    duplicates = sorted(ref_id for ref_id, n in seen.items() if n > 1)
    if duplicates:
        raise DuplicateIdError("ref_id", duplicates)

    known_ids = set(seen)
    raw_markers = _require(payload, "markers", list, "")
    markers = []
    for i, item in enumerate(raw_markers):
        where = f"markers[{i}]"
        if not isinstance(item, dict):
            raise PayloadError(where, "expected an object")
        ref_id = _require(item, "ref_id", str, where)
        if ref_id not in known_ids:
            raise PayloadError(f"{where}.ref_id", f"unknown reference '{ref_id}'")
        sentence_index = _require(item, "sentence_index", int, where)
        if not (0 <= sentence_index < len(body)):
            raise PayloadError(
                f"{where}.sentence_index",
                f"sentence index {sentence_index} outside body (0-{len(body) - 1})",
            )
        char_span = None
        raw_span = item.get("char_span")
        if raw_span is not None:
            if (
                not isinstance(raw_span, (list, tuple))
                or len(raw_span) != 2
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in raw_span)
            ):
                raise PayloadError(f"{where}.char_span", "expected [start, end] integers")
            start, end = raw_span
            limit = len(body[sentence_index].text)
            if not (0 <= start <= end <= limit):
                raise PayloadError(
                    f"{where}.char_span",
                    f"span [{start}, {end}) outside sentence of length {limit}",
                )
            char_span = (start, end)
        markers.append(
            CitationMarker(ref_id=ref_id, sentence_index=sentence_index, char_span=char_span)
        )

    return ManuscriptDocument(
        doc_id=doc_id,
        title=title,
        abstract=abstract,
        authors=authors,
        venue=venue,
        body=tuple(body),
        markers=tuple(markers),
        references=tuple(references),
    )


def extract_contexts(doc: ManuscriptDocument) -> list[CitationContext]:
    """One context window per marker, ordered by (ref_id, occurrence ordinal).

    Windows cover sentences [target-1, target+1] clipped at the document
    edges. A reference cited at several places yields one context per
    occurrence; occurrence ordinals follow document position.
    """
    by_ref: dict[str, list[CitationMarker]] = {}
    for marker in doc.markers:
        by_ref.setdefault(marker.ref_id, []).append(marker)

    contexts: list[CitationContext] = []
    for ref_id in sorted(by_ref):
        ordered = sorted(
            by_ref[ref_id],
            key=lambda m: (m.sentence_index, m.char_span or (-1, -1)),
        )
        for ordinal, marker in enumerate(ordered, start=1):
            lo = max(marker.sentence_index - 1, 0)
            hi = min(marker.sentence_index + 1, len(doc.body) - 1)
            window = " ".join(doc.body[i].text for i in range(lo, hi + 1))
            contexts.append(
                CitationContext(
                    ref_id=ref_id,
                    target_index=marker.sentence_index,
                    window_text=window,
                    occurrence_ordinal=ordinal,
                )
            )
    return contexts


def uncited_references(doc: ManuscriptDocument) -> list[str]:
    """Reference ids that never appear in-text; they still get audited."""
    cited = {m.ref_id for m in doc.markers}
    return [r.ref_id for r in doc.references if r.ref_id not in cited]
