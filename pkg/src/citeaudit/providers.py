"""Provider contracts, deterministic stubs, and thin HTTP clients.

Every external dependency of the pipeline sits behind one of four contracts:

* metadata providers (one primary + ordered abstract-fallback tiers),
* an embedding provider (text -> vector),
* a judgment provider (batched structured relevance judgments),
* a suggestion provider (missing-citation candidates).

Stub implementations load canned payloads from fixture files keyed by
normalized query (or reference id) and record every call, so tests can
assert fallback order and cache behavior. HTTP implementations speak a
neutral JSON shape; they are only constructed when stub mode is off.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from dataclasses import dataclass, field
from typing import Any, Protocol

import numpy as np

from .errors import ConfigError, ProviderError
from .ingest import ReferenceRecord
from .textmatch import normalize_text

ROLE_PRIMARY = "primary-metadata"
ROLE_TIER_PREFIX = "abstract-tier-"
ROLE_RETRACTION = "retraction-signal"

# Instrumentation: every real HTTP request bumps this. Stub-mode runs must
# leave it untouched; tests assert on it.
NETWORK_CALLS = 0


def reset_network_counter() -> None:
    global NETWORK_CALLS
    NETWORK_CALLS = 0


@dataclass(frozen=True)
class ProviderDescriptor:
    name: str
    role: str
    rate_limit: float = 10.0  # requests per second

    def tier(self) -> int | None:
        if self.role.startswith(ROLE_TIER_PREFIX):
            return int(self.role[len(ROLE_TIER_PREFIX):])
        return None


@dataclass(frozen=True)
class MetadataRecord:
    """Normalized view of one provider payload."""

    title: str | None = None
    year: int | None = None
    doi: str | None = None
    abstract: str | None = None
    authors: tuple[str, ...] = ()
    venue: str | None = None
    is_retracted: bool = False
    found: bool = True


def make_query(ref: ReferenceRecord) -> str:
    """Deterministic provider query for a reference.

    DOI wins when parsed; otherwise the normalized title (or raw string).
    Normalization doubles as the cache-key canonicalization.
    """
    if ref.parsed_doi:
        return "doi:" + ref.parsed_doi.strip().lower()
    basis = ref.parsed_title or ref.raw_string
    return "title:" + normalize_text(basis)


def parse_generic_payload(payload: dict) -> MetadataRecord:
    """Parse the neutral wire shape shared by stub and HTTP providers."""
    if not isinstance(payload, dict) or payload.get("found") is False:
        return MetadataRecord(found=False)
    authors = tuple(
        a for a in payload.get("authors", []) if isinstance(a, str) and a.strip()
    )
    year = payload.get("year")
    if not isinstance(year, int) or isinstance(year, bool):
        year = None
    return MetadataRecord(
        title=payload.get("title") or None,
        year=year,
        doi=payload.get("doi") or None,
        abstract=payload.get("abstract") or None,
        authors=authors,
        venue=payload.get("venue") or None,
        is_retracted=bool(payload.get("is_retracted", False)),
        found=True,
    )


class MetadataProvider(Protocol):
    descriptor: ProviderDescriptor

    def fetch(self, query: str) -> dict:
        """Return the verbatim payload for a query; raise ProviderError on failure."""
        ...

    def parse(self, payload: dict) -> MetadataRecord: ...


@dataclass
class JudgmentRequest:
    ref_id: str
    manuscript_abstract: str
    context_text: str
    reference_abstract: str | None
    no_context: bool = False


class EmbeddingProvider(Protocol):
    name: str

    def embed(self, text: str) -> np.ndarray:
        """Return a non-zero 1-D vector; identical texts embed identically."""
        ...


class JudgmentProvider(Protocol):
    name: str

    def judge(self, requests: list[JudgmentRequest]) -> dict[str, Any]:
        """Map ref_id -> raw judgment payload. Missing ids mean per-item failure."""
        ...


class SuggestionProvider(Protocol):
    name: str

    def suggest(
        self, title: str, abstract: str, bibliography_titles: list[str]
    ) -> list[dict]: ...


class ManuscriptParserProvider(Protocol):
    """Optional delegate that turns a raw document into the structured payload.

    The engine itself never extracts text from PDFs; a deployment may plug a
    parser in behind this contract and feed its output to load_manuscript.
    """

    name: str

    def parse_document(self, raw_text: str) -> dict: ...


# --------------------------------------------------------------------------
# Stub providers (fixture-backed, deterministic, call-recording)
# --------------------------------------------------------------------------


class StubMetadataProvider:
    """Fixture-backed metadata provider.

    Fixture payloads are keyed by normalized query. A payload of
    ``{"fail": "<cause>"}`` simulates a provider failure; a missing key or
    ``{"found": false}`` is a well-formed miss.
    """

    def __init__(self, descriptor: ProviderDescriptor, fixtures: dict[str, dict]):
        self.descriptor = descriptor
        self.fixtures = fixtures
        self.calls: list[str] = []

    def fetch(self, query: str) -> dict:
        self.calls.append(query)
        payload = self.fixtures.get(query)
        if payload is None:
            return {"found": False}
        if "fail" in payload:
            raise ProviderError(self.descriptor.name, str(payload["fail"]))
        return payload

    def parse(self, payload: dict) -> MetadataRecord:
        return parse_generic_payload(payload)


class StubEmbeddingProvider:
    """Deterministic embedder: fixture vectors with a hash-derived fallback.

    Fixture keys are normalized texts mapped to plain vectors. Unknown texts
    get a unit vector on the circle whose angle is derived from a content
    hash, so arbitrary inputs embed deterministically and never to zero.
    """

    name = "stub-embedder"

    def __init__(self, vectors: dict[str, list[float]] | None = None):
        self.vectors = vectors or {}
        self.calls: list[str] = []

    def embed(self, text: str) -> np.ndarray:
        key = normalize_text(text)
        self.calls.append(key)
        if key in self.vectors:
            return np.asarray(self.vectors[key], dtype=np.float64)
        digest = hashlib.sha256(key.encode("utf-8")).digest()
        angle = int.from_bytes(digest[:8], "big") / 2**64 * 2 * math.pi
        return np.array([math.cos(angle), math.sin(angle)], dtype=np.float64)


class StubJudgmentProvider:
    """Fixture table keyed by ref_id; absent ids are per-item failures."""

    name = "stub-judge"

    def __init__(self, table: dict[str, Any]):
        self.table = table
        self.calls: list[list[str]] = []

    def judge(self, requests: list[JudgmentRequest]) -> dict[str, Any]:
        self.calls.append([r.ref_id for r in requests])
        return {r.ref_id: self.table[r.ref_id] for r in requests if r.ref_id in self.table}


class StubSuggestionProvider:
    name = "stub-advisor"

    def __init__(self, candidates: list[dict], fail: str | None = None):
        self.candidates = candidates
        self.fail = fail
        self.calls = 0

    def suggest(
        self, title: str, abstract: str, bibliography_titles: list[str]
    ) -> list[dict]:
        self.calls += 1
        if self.fail:
            raise ProviderError(self.name, self.fail)
        # pass malformed entries through untouched; validation is downstream
        return [dict(c) if isinstance(c, dict) else c for c in self.candidates]


# --------------------------------------------------------------------------
# HTTP providers (neutral JSON wire shape)
# --------------------------------------------------------------------------


class RateLimiter:
    """Minimum-interval limiter, one per provider."""

    def __init__(self, rate_limit: float, clock=time.monotonic, sleep=time.sleep):
        self.min_interval = 1.0 / rate_limit if rate_limit > 0 else 0.0
        self._clock = clock
        self._sleep = sleep
        self._last: float | None = None

    def wait(self) -> None:
        if self.min_interval <= 0:
            return
        now = self._clock()
        if self._last is not None:
            remaining = self.min_interval - (now - self._last)
            if remaining > 0:
                self._sleep(remaining)
                now = self._clock()
        self._last = now


def _http_request(method: str, url: str, *, params=None, json_body=None, headers=None, timeout=30):
    global NETWORK_CALLS
    import requests

    NETWORK_CALLS += 1
    response = requests.request(
        method, url, params=params, json=json_body, headers=headers, timeout=timeout
    )
    response.raise_for_status()
    return response.json()


class HttpMetadataProvider:
    """GET <base_url>?q=<query> expecting the neutral metadata shape."""

    def __init__(
        self,
        descriptor: ProviderDescriptor,
        base_url: str,
        api_key: str | None = None,
        limiter: RateLimiter | None = None,
    ):
        self.descriptor = descriptor
        self.base_url = base_url
        self.api_key = api_key
        self.limiter = limiter or RateLimiter(descriptor.rate_limit)

    def fetch(self, query: str) -> dict:
        self.limiter.wait()
        headers = {"Authorization": f"Bearer {self.api_key}"} if self.api_key else None
        try:
            return _http_request("GET", self.base_url, params={"q": query}, headers=headers)
        except Exception as exc:  # noqa: BLE001 - every transport failure degrades, never aborts
            raise ProviderError(self.descriptor.name, str(exc)) from exc

    def parse(self, payload: dict) -> MetadataRecord:
        return parse_generic_payload(payload)


class HttpJudgmentProvider:
    """POST {items: [...]} -> {items: {ref_id: judgment}}."""

    def __init__(self, name: str, base_url: str, api_key: str | None = None):
        self.name = name
        self.base_url = base_url
        self.api_key = api_key

    def judge(self, requests_: list[JudgmentRequest]) -> dict[str, Any]:
        headers = {"Authorization": f"Bearer {self.api_key}"} if self.api_key else None
        body = {
            "items": [
                {
                    "ref_id": r.ref_id,
                    "manuscript_abstract": r.manuscript_abstract,
                    "context": r.context_text,
                    "reference_abstract": r.reference_abstract,
                    "no_context": r.no_context,
                }
                for r in requests_
            ]
        }
        try:
            payload = _http_request("POST", self.base_url, json_body=body, headers=headers)
        except Exception as exc:  # noqa: BLE001
            raise ProviderError(self.name, str(exc)) from exc
        items = payload.get("items")
        return items if isinstance(items, dict) else {}


class HttpEmbeddingProvider:
    """POST {text: ...} -> {vector: [...]}."""

    def __init__(self, name: str, base_url: str, api_key: str | None = None):
        self.name = name
        self.base_url = base_url
        self.api_key = api_key

    def embed(self, text: str) -> np.ndarray:
        headers = {"Authorization": f"Bearer {self.api_key}"} if self.api_key else None
        try:
            payload = _http_request(
                "POST", self.base_url, json_body={"text": text}, headers=headers
            )
        except Exception as exc:  # noqa: BLE001
            raise ProviderError(self.name, str(exc)) from exc
        vector = payload.get("vector")
        if not isinstance(vector, list) or not vector:
            raise ProviderError(self.name, "response carried no vector")
        return np.asarray(vector, dtype=np.float64)


class HttpSuggestionProvider:
    """POST manuscript summary -> {candidates: [...]}."""

    def __init__(self, name: str, base_url: str, api_key: str | None = None):
        self.name = name
        self.base_url = base_url
        self.api_key = api_key

    def suggest(
        self, title: str, abstract: str, bibliography_titles: list[str]
    ) -> list[dict]:
        headers = {"Authorization": f"Bearer {self.api_key}"} if self.api_key else None
        body = {"title": title, "abstract": abstract, "bibliography": bibliography_titles}
        try:
            payload = _http_request("POST", self.base_url, json_body=body, headers=headers)
        except Exception as exc:  # noqa: BLE001
            raise ProviderError(self.name, str(exc)) from exc
        candidates = payload.get("candidates")
        return candidates if isinstance(candidates, list) else []


# --------------------------------------------------------------------------
# Chain assembly and validation
# --------------------------------------------------------------------------


@dataclass
class ProviderChain:
    primary: MetadataProvider
    tiers: list[tuple[int, MetadataProvider]] = field(default_factory=list)

    def all_providers(self) -> list[MetadataProvider]:
        return [self.primary] + [p for _, p in self.tiers]


def validate_chain(descriptors: list[ProviderDescriptor]) -> None:
    """Exactly one primary; abstract tiers strictly increasing."""
    primaries = [d for d in descriptors if d.role == ROLE_PRIMARY]
    if len(primaries) != 1:
        raise ConfigError(
            f"exactly one {ROLE_PRIMARY} provider required, got {len(primaries)}"
        )
    tiers = [d.tier() for d in descriptors if d.tier() is not None]
    if any(t not in (1, 2, 3, 4) for t in tiers):
        raise ConfigError("abstract tiers must be numbered 1-4")
    if tiers != sorted(tiers) or len(set(tiers)) != len(tiers):
        raise ConfigError(f"abstract tiers must be strictly ordered, got {tiers}")


def build_chain(providers: list[MetadataProvider]) -> ProviderChain:
    validate_chain([p.descriptor for p in providers])
    primary = next(p for p in providers if p.descriptor.role == ROLE_PRIMARY)
    tiers = sorted(
        ((p.descriptor.tier(), p) for p in providers if p.descriptor.tier() is not None),
        key=lambda pair: pair[0],
    )
    return ProviderChain(primary=primary, tiers=tiers)


def fetch_with_cache(
    cache,
    provider: MetadataProvider,
    query: str,
    ttl_seconds: int,
    now: float | None = None,
) -> dict:
    """Cache-through fetch keyed by (provider name, query).

    Only responses are cached; a ProviderError propagates uncached so the
    next run retries. A cached miss ({"found": false}) is a response.
    """
    name = provider.descriptor.name
    hit = cache.cache_get(name, query, now=now)
    if hit is not None:
        return hit
    payload = provider.fetch(query)
    cache.cache_put(name, query, payload, ttl_seconds, now=now)
    return payload


def load_fixture_file(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
