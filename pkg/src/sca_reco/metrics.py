"""Micro-averaged scoring of recommendations against optimal label sets.

Counting rule per project: a prediction inside the truth set is a true
positive for the predicted analyzer, and every other analyzer in the truth
set takes a false negative; a prediction outside the truth set is a false
positive for the predicted analyzer, and every analyzer in the truth set
takes a false negative.  Micro scores are computed from the summed counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import ScaId
from .exceptions import LengthMismatch


@dataclass(frozen=True)
class MicroMetrics:
    p_micro: float
    r_micro: float
    f1_micro: float


def micro_metrics(
    truth_sets: Sequence[Sequence[ScaId]], predictions: Sequence[ScaId]
) -> MicroMetrics:
    """Score one prediction per project against its set of best analyzers."""
    if len(truth_sets) != len(predictions):
        raise LengthMismatch(
            f"{len(truth_sets)} truth sets but {len(predictions)} predictions"
        )
    tp = fp = fn = 0
    for truth, predicted in zip(truth_sets, predictions):
        members = set(truth)
        if not members:
            raise ValueError("a truth set is never empty")
        if predicted in members:
            tp += 1
            fn += len(members) - 1
        else:
            fp += 1
            fn += len(members)
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn) if tp + fn else 0.0
    # Computing F1 from the counts keeps p == r == f1 exact when fp == fn.
    f1 = 2 * tp / (2 * tp + fp + fn) if 2 * tp + fp + fn else 0.0
    return MicroMetrics(p, r, f1)


def mean_metrics(metrics: Sequence[MicroMetrics]) -> MicroMetrics:
    """Arithmetic mean per component (the usual cross-validation summary)."""
    if not metrics:
        raise ValueError("cannot average zero metric records")
    n = len(metrics)
    return MicroMetrics(
        p_micro=sum(m.p_micro for m in metrics) / n,
        r_micro=sum(m.r_micro for m in metrics) / n,
        f1_micro=sum(m.f1_micro for m in metrics) / n,
    )
