"""Exact-match span evaluation: per-type and micro P/R/F.

A prediction is a true positive only when (doc_id, start, end, label) all
match a gold span; off-by-one boundaries or a wrong label cost both a false
positive and a false negative.  Undefined ratios (0/0) report as 0, which is
how rows with no predictions and no hits print in study tables.  Percentages
round half-up to two decimals.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from .annotations import AnnotationSet, DocMismatch


@dataclass(frozen=True)
class TypeCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    def __add__(self, other):
        return TypeCounts(self.tp + other.tp, self.fp + other.fp, self.fn + other.fn)


def confusion(gold: AnnotationSet, pred: AnnotationSet) -> dict[str, TypeCounts]:
    """Per-type tp/fp/fn under exact span+label matching."""
    if set(gold.entries) != set(pred.entries):
        raise DocMismatch("gold and predictions cover different documents")
    gold_keys = gold.all_keys()
    pred_keys = pred.all_keys()
    counts = {}

    def bump(label, **kw):
        c = counts.get(label, TypeCounts())
        counts[label] = TypeCounts(c.tp + kw.get("tp", 0), c.fp + kw.get("fp", 0), c.fn + kw.get("fn", 0))

    for key in pred_keys:
        if key in gold_keys:
            bump(key[3], tp=1)
        else:
            bump(key[3], fp=1)
    for key in gold_keys - pred_keys:
        bump(key[3], fn=1)
    return dict(sorted(counts.items()))


def _round2(x: float) -> float:
    return float(Decimal(repr(x)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def prf(counts: TypeCounts) -> tuple[float, float, float]:
    """(precision, recall, F) as percentages, 0/0 -> 0 by convention."""
    tp, fp, fn = counts.tp, counts.fp, counts.fn
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn) if tp + fn else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return _round2(100 * p), _round2(100 * r), _round2(100 * f)


@dataclass(frozen=True)
class MetricsReport:
    per_type: dict[str, tuple[float, float, float]]
    micro: tuple[float, float, float]
    counts: dict[str, TypeCounts]

    def to_record(self) -> dict:
        return {
            "per_type": {
                t: {
                    "precision": v[0],
                    "recall": v[1],
                    "f_score": v[2],
                    "tp": self.counts[t].tp,
                    "fp": self.counts[t].fp,
                    "fn": self.counts[t].fn,
                }
                for t, v in self.per_type.items()
            },
            "micro": {
                "precision": self.micro[0],
                "recall": self.micro[1],
                "f_score": self.micro[2],
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record(), indent=2)

    def to_table(self) -> str:
        rows = [("Entity Type", "Precision", "Recall", "F-Score", "TP", "FP", "FN")]
        for t, (p, r, f) in self.per_type.items():
            c = self.counts[t]
            rows.append((t, f"{p:.2f}", f"{r:.2f}", f"{f:.2f}", str(c.tp), str(c.fp), str(c.fn)))
        p, r, f = self.micro
        rows.append(("micro", f"{p:.2f}", f"{r:.2f}", f"{f:.2f}", "", "", ""))
        widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
        lines = []
        for i, row in enumerate(rows):
            line = "  ".join(
                cell.ljust(widths[j]) if j == 0 else cell.rjust(widths[j])
                for j, cell in enumerate(row)
            )
            lines.append(line.rstrip())
            if i == 0 or i == len(rows) - 2:
                lines.append("-" * len(line.rstrip()))
        return "\n".join(lines)


def report(gold: AnnotationSet, pred: AnnotationSet) -> MetricsReport:
    counts = confusion(gold, pred)
    per_type = {t: prf(c) for t, c in counts.items()}
    total = TypeCounts()
    for c in counts.values():
        total = total + c
    return MetricsReport(per_type=per_type, micro=prf(total), counts=counts)
