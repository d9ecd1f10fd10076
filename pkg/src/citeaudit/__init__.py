"""citeaudit: manuscript-level citation auditing engine.

Ingests a structured manuscript, enriches every reference against external
metadata providers, fuses an embedding signal with a language-model judgment
into a single relevance score, attaches integrity flags, and triages
citations against an analyst-adjustable threshold. Exposed as a library, a
CLI (``citeaudit``), and an HTTP service for the analyst workbench.
"""

__version__ = "0.1.0"

ENGINE_VERSION = __version__
