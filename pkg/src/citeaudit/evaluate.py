"""Evaluation against expert gold labels: confusion counts, metrics, sweeps.

Gold labels are binary: 1 means the citation is relevant, 0 means it is not.
The engine's prediction at threshold tau is "flagged" (rs_final < tau) or
"clean". Flagged is the positive class for triage: a true positive is an
irrelevant citation (gold 0) that was flagged.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .errors import GoldLabelError
from .scoring import Assessment, triage

GOLD_HEADER = ("reference_id", "label")


@dataclass(frozen=True)
class GoldLabel:
    ref_id: str
    label: int  # 1 relevant, 0 irrelevant


def parse_gold_csv(text: str) -> list[GoldLabel]:
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    if not rows:
        raise GoldLabelError("gold file is empty")
    header = tuple(cell.strip() for cell in rows[0])
    if header != GOLD_HEADER:
        raise GoldLabelError(
            f"gold header must be {','.join(GOLD_HEADER)!r}, got {','.join(header)!r}"
        )
    labels: list[GoldLabel] = []
    seen: dict[str, int] = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise GoldLabelError(f"line {lineno}: expected 2 columns, got {len(row)}")
        ref_id = row[0].strip()
        raw_label = row[1].strip()
        if not ref_id:
            raise GoldLabelError(f"line {lineno}: empty reference_id")
        if raw_label not in ("0", "1"):
            raise GoldLabelError(f"line {lineno}: label must be 0 or 1, got {raw_label!r}")
        if ref_id in seen:
            raise GoldLabelError(
                f"line {lineno}: duplicate reference_id {ref_id!r} (first at line {seen[ref_id]})"
            )
        seen[ref_id] = lineno
        labels.append(GoldLabel(ref_id, int(raw_label)))
    if not labels:
        raise GoldLabelError("gold file has a header but no rows")
    return labels


@dataclass(frozen=True)
class AlignedPair:
    ref_id: str
    label: int
    rs_final: float


@dataclass(frozen=True)
class Alignment:
    pairs: tuple[AlignedPair, ...]
    gold_only: tuple[str, ...]  # labeled but never scored
    scored_only: tuple[str, ...]  # scored but unlabeled
    unscorable: tuple[str, ...]  # labeled but no usable score
    notices: tuple[str, ...]


def align(gold: list[GoldLabel], assessments: list[Assessment]) -> Alignment:
    """Join gold labels with scored assessments by reference id.

    Unscorable references cannot be placed on either side of the threshold,
    so they are excluded from the counts and reported instead of guessed.
    """
    by_ref = {a.reference_id: a for a in assessments}
    pairs: list[AlignedPair] = []
    gold_only: list[str] = []
    unscorable: list[str] = []
    for entry in gold:
        assessment = by_ref.get(entry.ref_id)
        if assessment is None:
            gold_only.append(entry.ref_id)
        elif assessment.rs_final is None:
            unscorable.append(entry.ref_id)
        else:
            pairs.append(AlignedPair(entry.ref_id, entry.label, assessment.rs_final))
    labeled = {entry.ref_id for entry in gold}
    scored_only = [a.reference_id for a in assessments if a.reference_id not in labeled]

    notices: list[str] = []
    if gold_only:
        notices.append(f"UNMATCHED_GOLD: {len(gold_only)} labeled ids were never scored")
    if scored_only:
        notices.append(f"UNLABELED_SCORED: {len(scored_only)} scored ids carry no gold label")
    if unscorable:
        notices.append(
            f"EXCLUDED_UNSCORABLE: {len(unscorable)} labeled references had no usable score"
        )
    return Alignment(
        tuple(pairs), tuple(gold_only), tuple(scored_only), tuple(unscorable), tuple(notices)
    )


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts at one threshold. Flagged is the predicted positive class."""

    tp_flagged: int  # gold 0, flagged
    fp_flagged: int  # gold 1, flagged
    fn_flagged: int  # gold 0, clean
    tn_clean: int  # gold 1, clean

    @property
    def total(self) -> int:
        return self.tp_flagged + self.fp_flagged + self.fn_flagged + self.tn_clean


def confusion_at(pairs: tuple[AlignedPair, ...] | list[AlignedPair], tau: float) -> ConfusionMatrix:
    tp = fp = fn = tn = 0
    for pair in pairs:
        flagged = triage(pair.rs_final, tau)
        if pair.label == 0:
            if flagged:
                tp += 1
            else:
                fn += 1
        else:
            if flagged:
                fp += 1
            else:
                tn += 1
    return ConfusionMatrix(tp, fp, fn, tn)


def _safe_div(num: float, den: float) -> float:
    return num / den if den else 0.0


def _f1(precision: float, recall: float) -> float:
    return _safe_div(2 * precision * recall, precision + recall)


@dataclass(frozen=True)
class MetricsReport:
    tau: float
    matrix: ConfusionMatrix
    accuracy: float
    precision_flagged: float
    recall_flagged: float
    f1_flagged: float
    precision_clean: float
    recall_clean: float
    f1_clean: float
    macro_f1: float
    weighted_f1: float
    kappa: float
    notices: tuple[str, ...] = ()

    def as_dict(self) -> dict:
        return {
            "tau": self.tau,
            "matrix": {
                "tp_flagged": self.matrix.tp_flagged,
                "fp_flagged": self.matrix.fp_flagged,
                "fn_flagged": self.matrix.fn_flagged,
                "tn_clean": self.matrix.tn_clean,
            },
            "accuracy": self.accuracy,
            "precision_flagged": self.precision_flagged,
            "recall_flagged": self.recall_flagged,
            "f1_flagged": self.f1_flagged,
            "precision_clean": self.precision_clean,
            "recall_clean": self.recall_clean,
            "f1_clean": self.f1_clean,
            "macro_f1": self.macro_f1,
            "weighted_f1": self.weighted_f1,
            "kappa": self.kappa,
            "notices": list(self.notices),
        }


def metrics_from_matrix(matrix: ConfusionMatrix, tau: float) -> MetricsReport:
    tp, fp, fn, tn = (
        matrix.tp_flagged,
        matrix.fp_flagged,
        matrix.fn_flagged,
        matrix.tn_clean,
    )
    total = matrix.total
    notices: list[str] = []

    accuracy = _safe_div(tp + tn, total)
    precision_flagged = _safe_div(tp, tp + fp)
    recall_flagged = _safe_div(tp, tp + fn)
    f1_flagged = _f1(precision_flagged, recall_flagged)
    precision_clean = _safe_div(tn, tn + fn)
    recall_clean = _safe_div(tn, tn + fp)
    f1_clean = _f1(precision_clean, recall_clean)
    macro_f1 = (f1_flagged + f1_clean) / 2.0

    support_flagged = tp + fn  # gold irrelevant
    support_clean = tn + fp  # gold relevant
    weighted_f1 = _safe_div(
        f1_flagged * support_flagged + f1_clean * support_clean, total
    )

    # Chance-corrected agreement between the engine's flag/clean split and
    # the gold split.
    if total:
        predicted_flagged = tp + fp
        predicted_clean = fn + tn
        p_observed = accuracy
        p_expected = (
            predicted_flagged * support_flagged + predicted_clean * support_clean
        ) / (total * total)
        if p_expected == 1.0:
            kappa = 0.0
            notices.append("KAPPA_DEGENERATE: expected agreement is 1; kappa reported as 0")
        else:
            kappa = (p_observed - p_expected) / (1.0 - p_expected)
    else:
        kappa = 0.0
        notices.append("EMPTY_EVALUATION: no aligned pairs")

    return MetricsReport(
        tau=tau,
        matrix=matrix,
        accuracy=accuracy,
        precision_flagged=precision_flagged,
        recall_flagged=recall_flagged,
        f1_flagged=f1_flagged,
        precision_clean=precision_clean,
        recall_clean=recall_clean,
        f1_clean=f1_clean,
        macro_f1=macro_f1,
        weighted_f1=weighted_f1,
        kappa=kappa,
        notices=tuple(notices),
    )


def evaluate_at(
    pairs: tuple[AlignedPair, ...] | list[AlignedPair],
    tau: float,
    extra_notices: tuple[str, ...] = (),
) -> MetricsReport:
    report = metrics_from_matrix(confusion_at(pairs, tau), tau)
    if extra_notices:
        report = MetricsReport(
            **{**report.__dict__, "notices": tuple(extra_notices) + report.notices}
        )
    return report


def sweep(
    pairs: tuple[AlignedPair, ...] | list[AlignedPair], taus: list[float]
) -> list[MetricsReport]:
    """Metrics at each threshold, in the order given. Pure recomputation:
    nothing is cached between thresholds, so rows cannot contaminate each
    other."""
    return [evaluate_at(pairs, tau) for tau in taus]
