"""Bundled synthetic corpus: manuscripts, gold labels, provider fixtures.

Two manuscripts ship with the package so the whole pipeline runs offline:

* ``manuscript-small``: a dozen references exercising every edge the engine
  handles (retraction, metadata drift, missing DOI/abstract, self-citation,
  an unscorable entry, an uncited entry).
* ``manuscript-screening``: a screening-sized bibliography with a matching
  expert gold file for evaluation and threshold sweeps.

Provider fixtures live beside them, one file per stub provider.
"""

from __future__ import annotations

import json
from importlib.resources import files
from pathlib import Path

MANUSCRIPT_SMALL = "manuscript_small.json"
MANUSCRIPT_SCREENING = "manuscript_screening.json"
GOLD_SCREENING = "gold_screening.csv"

STUB_FILES = {
    "openalex": "stub_openalex.json",
    "semantic-scholar": "stub_semantic_scholar.json",
    "crossref": "stub_crossref.json",
    "arxiv": "stub_arxiv.json",
    "publisher-page": "stub_publisher_page.json",
}
JUDGMENTS_FILE = "stub_judgments.json"
EMBEDDINGS_FILE = "stub_embeddings.json"
SUGGESTIONS_FILE = "stub_suggestions.json"

# CLI-facing aliases for `citeaudit corpus <name>`.
EXPORTABLE = {
    "manuscript-small": MANUSCRIPT_SMALL,
    "manuscript-screening": MANUSCRIPT_SCREENING,
    "gold-screening": GOLD_SCREENING,
}


def _root(fixtures_dir: str | None = None):
    if fixtures_dir is not None:
        return Path(fixtures_dir)
    return files("citeaudit") / "fixtures"


def fixture_text(name: str, fixtures_dir: str | None = None) -> str:
    resource = _root(fixtures_dir) / name
    return resource.read_text(encoding="utf-8")


def fixture_json(name: str, fixtures_dir: str | None = None) -> dict:
    return json.loads(fixture_text(name, fixtures_dir))


def optional_fixture_json(name: str, fixtures_dir: str | None = None) -> dict:
    """Fixture content, or an empty mapping when the file does not exist.

    Custom fixture directories may cover only some providers; the rest then
    behave as well-formed misses.
    """
    try:
        return fixture_json(name, fixtures_dir)
    except (FileNotFoundError, OSError):
        return {}


def manuscript_small() -> dict:
    return fixture_json(MANUSCRIPT_SMALL)


def manuscript_screening() -> dict:
    return fixture_json(MANUSCRIPT_SCREENING)


def gold_screening_csv() -> str:
    return fixture_text(GOLD_SCREENING)
