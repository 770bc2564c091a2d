# -*- coding: utf-8 -*-
"""
Error curves, precision-recall sweeps and PR areas

Rates are exact fractions of integer counts; strong-classifier outputs and
thresholds are Q16 integers.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from ..boosting.adaboost import DECISION_HALF
from ..boosting.fixedpoint import Q16_ONE

ERROR_CURVE_COLUMNS = ["round", "train_error", "test_error"]
PR_COLUMNS = ["threshold", "precision", "recall", "tp", "fp", "fn", "tn", "precision_defined"]


@dataclass(frozen=True)
class ErrorCurvePoint:
    round: int
    train_error: Fraction
    test_error: Optional[Fraction]

    def as_row(self) -> dict:
        return {
            "round": self.round,
            "train_error": f"{float(self.train_error):.6f}",
            "test_error": "" if self.test_error is None else f"{float(self.test_error):.6f}",
        }


@dataclass(frozen=True)
class PRPoint:
    """Confusion counts at a Q16 decision threshold

    Precision with no predicted positive is reported as 1 and flagged.
    """

    threshold: int
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def precision_defined(self) -> bool:
        return self.tp + self.fp > 0

    @property
    def precision(self) -> Fraction:
        if not self.precision_defined:
            return Fraction(1)
        return Fraction(self.tp, self.tp + self.fp)

    @property
    def recall(self) -> Fraction:
        positives = self.tp + self.fn
        return Fraction(self.tp, positives) if positives else Fraction(0)

    def as_row(self) -> dict:
        return {
            "threshold": f"{self.threshold / Q16_ONE:.6f}",
            "precision": f"{float(self.precision):.6f}",
            "recall": f"{float(self.recall):.6f}",
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "tn": self.tn,
            "precision_defined": int(self.precision_defined),
        }


def misclassification_rate(outputs: np.ndarray, labels: np.ndarray, decision: int = DECISION_HALF) -> Fraction:
    outputs = np.asarray(outputs, dtype=np.int64)
    labels = np.asarray(labels).astype(bool)
    if labels.size == 0:
        return Fraction(0)
    return Fraction(int(((outputs >= decision) != labels).sum()), int(labels.size))


def error_curves(
    train_traces: np.ndarray,
    train_labels: Sequence[int],
    test_traces: Optional[np.ndarray] = None,
    test_labels: Optional[Sequence[int]] = None,
    decision: int = DECISION_HALF,
) -> List[ErrorCurvePoint]:
    """Per-round error rates from vote traces, one trace row per image

    Column t of a trace matrix holds the output of the (t + 1)-round prefix.
    """
    train_traces = np.asarray(train_traces, dtype=np.int64)
    rounds = train_traces.shape[1] if train_traces.ndim == 2 else 0
    have_test = test_traces is not None and test_labels is not None and len(test_labels) > 0
    if have_test:
        test_traces = np.asarray(test_traces, dtype=np.int64)

    points = []
    for t in range(rounds):
        points.append(ErrorCurvePoint(
            round=t + 1,
            train_error=misclassification_rate(train_traces[:, t], train_labels, decision),
            test_error=misclassification_rate(test_traces[:, t], test_labels, decision) if have_test else None,
        ))
    return points


def pr_point(outputs: Sequence[int], labels: Sequence[int], threshold: int) -> PRPoint:
    """Confusion counts of `output >= threshold` against labels"""
    predicted = np.asarray(outputs, dtype=np.int64) >= threshold
    actual = np.asarray(labels).astype(bool)
    return PRPoint(
        threshold=int(threshold),
        tp=int((predicted & actual).sum()),
        fp=int((predicted & ~actual).sum()),
        fn=int((~predicted & actual).sum()),
        tn=int((~predicted & ~actual).sum()),
    )


def pr_curve(outputs: Sequence[int], labels: Sequence[int], decision: int = DECISION_HALF) -> List[PRPoint]:
    """One point per distinct output value plus the decision threshold, highest first

    Recall is non-decreasing along the curve; the decision point equals the
    classifier's operating point in error_curves.
    """
    values = np.append(np.asarray(outputs, dtype=np.int64), decision)
    thresholds = np.unique(values)[::-1]
    return [pr_point(outputs, labels, int(t)) for t in thresholds]


def pr_area(points: Sequence[PRPoint]) -> Fraction:
    """Area under a PR curve with step interpolation, starting at recall 0"""
    area = Fraction(0)
    previous = Fraction(0)
    for point in sorted(points, key=lambda p: (p.recall, -p.threshold)):
        area += (point.recall - previous) * point.precision
        previous = point.recall
    return area


def best_balanced_point(points: Sequence[PRPoint]) -> Optional[PRPoint]:
    """Point maximizing min(precision, recall)"""
    if not points:
        return None
    return max(points, key=lambda p: (min(p.precision, p.recall), p.recall))
