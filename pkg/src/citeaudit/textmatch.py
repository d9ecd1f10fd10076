"""Normalized text similarity shared by title, author, and venue matching.

One primitive serves all fuzzy comparisons in the engine: a normalized
edit-distance ratio. Normalization casefolds, strips punctuation, and
collapses whitespace, so "Data" vs "data" is an exact match while transposed
or misspelled titles degrade smoothly.
"""

from __future__ import annotations

import re
import unicodedata
from functools import lru_cache

from ._kernels import levenshtein

_WS = re.compile(r"\s+")


@lru_cache(maxsize=65536)
def normalize_text(text: str) -> str:
    """Casefold, drop punctuation, collapse runs of whitespace."""
    folded = text.casefold()
    stripped = "".join(
        c for c in folded if not unicodedata.category(c).startswith("P")
    )
    return _WS.sub(" ", stripped).strip()


def similarity(a: str, b: str) -> float:
    """Normalized edit-distance ratio in [0, 1].

    ratio = 1 - dist(norm(a), norm(b)) / max(len(norm(a)), len(norm(b)), 1)

    Symmetric; 1.0 exactly when the normalized forms are equal. The max(.., 1)
    keeps the empty-vs-empty case at 1.0 and empty-vs-nonempty at 0.0.
    """
    na, nb = normalize_text(a), normalize_text(b)
    if na == nb:
        return 1.0
    dist = levenshtein(na, nb)
    return 1.0 - dist / max(len(na), len(nb), 1)
