"""Annotation sets, JSONL persistence, inter-annotator agreement and merging.

An :class:`AnnotationSet` is one annotator's (or one pipeline's) typed spans
over a document collection.  Agreement is strict: two annotators agree on a
mention only when document, start, end and label are all identical.  Boundary
variants ("Windows" vs "Windows OS", parentheses kept or dropped) therefore
count as disagreement, and only the exact intersection survives a merge.

JSONL format, one line per document::

    {"doc_id": str, "annotator": str, "spans": [
        {"start": int, "end": int, "label": str, "provenance": str}, ...]}

Spans from the statistical tagger or the linker additionally carry a
``score`` key; human- and rule-provenance spans are score 1.0 by definition
and omit it.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field, replace

from . import schema as schema_mod

PROVENANCES = ("rule", "model", "human", "linker")
_SCORED = ("model", "linker")


class AnnotationError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        at = f" (line {line})" if line is not None else ""
        super().__init__(f"{message}{at}")


class ParseError(AnnotationError):
    pass


class SpanOutOfBounds(AnnotationError):
    pass


class UnknownLabel(AnnotationError):
    pass


class OverlappingSpans(AnnotationError):
    pass


class DocMismatch(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Mention:
    start: int
    end: int
    label: str
    provenance: str = "human"
    score: float = 1.0

    def __post_init__(self):
        if not (0 <= self.start < self.end):
            raise ValueError(f"bad span ({self.start},{self.end})")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"bad provenance {self.provenance!r}")
        if not (0.0 <= self.score <= 1.0):
            raise ValueError(f"score {self.score} outside [0,1]")

    def key(self):
        return (self.start, self.end, self.label)

    def to_record(self) -> dict:
        rec = {
            "start": self.start,
            "end": self.end,
            "label": self.label,
            "provenance": self.provenance,
        }
        if self.provenance in _SCORED:
            rec["score"] = self.score
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "Mention":
        return cls(
            start=rec["start"],
            end=rec["end"],
            label=rec["label"],
            provenance=rec.get("provenance", "human"),
            score=rec.get("score", 1.0),
        )


def check_mentions(mentions, text_length=None, schema=None):
    """Sortedness, non-overlap, bounds and label checks for one document."""
    prev_end = 0
    for m in sorted(mentions):
        if m.start < prev_end:
            raise OverlappingSpans(f"span ({m.start},{m.end}) overlaps a previous span")
        prev_end = m.end
        if text_length is not None and m.end > text_length:
            raise SpanOutOfBounds(f"span ({m.start},{m.end}) beyond text length {text_length}")
        if schema is not None and m.label not in schema_mod.get_version(schema):
            raise UnknownLabel(f"label {m.label!r} not in schema {schema_mod.get_version(schema).id}")


@dataclass
class AnnotationSet:
    annotator_id: str
    entries: dict[str, list[Mention]] = field(default_factory=dict)

    def __len__(self):
        return sum(len(v) for v in self.entries.values())

    def doc_ids(self):
        return sorted(self.entries)

    def add(self, doc_id, mentions):
        self.entries[doc_id] = sorted(mentions)

    def all_keys(self):
        """Set of (doc_id, start, end, label) across the collection."""
        return {(d, *m.key()) for d, ms in self.entries.items() for m in ms}

    def with_annotator(self, annotator_id):
        return AnnotationSet(annotator_id, {d: list(ms) for d, ms in self.entries.items()})


def save_jsonl(aset: AnnotationSet, path):
    with open(path, "w", encoding="utf-8") as fh:
        for doc_id in aset.doc_ids():
            rec = {
                "doc_id": doc_id,
                "annotator": aset.annotator_id,
                "spans": [m.to_record() for m in sorted(aset.entries[doc_id])],
            }
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def load_jsonl(path, schema=None, doc_lengths=None) -> AnnotationSet:
    """Load an annotation set, validating spans line by line.

    ``doc_lengths`` (doc_id -> text length) enables bounds checks; ``schema``
    (a version id or SchemaVersion) enables label checks.  Errors carry the
    offending 1-based line number.
    """
    annotator = None
    entries = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                doc_id = rec["doc_id"]
                annotator = annotator or rec.get("annotator", "unknown")
                mentions = [Mention.from_record(s) for s in rec["spans"]]
            except (KeyError, TypeError, ValueError) as exc:
                if isinstance(exc, AnnotationError):
                    raise
                raise ParseError(str(exc), line=lineno) from exc
            length = doc_lengths.get(doc_id) if doc_lengths else None
            try:
                check_mentions(mentions, text_length=length, schema=schema)
            except AnnotationError as exc:
                raise type(exc)(str(exc), line=lineno) from None
            entries[doc_id] = sorted(mentions)
    return AnnotationSet(annotator or "unknown", entries)


# --- agreement ---------------------------------------------------------------


@dataclass(frozen=True)
class IAAReport:
    pair: tuple[str, str]
    count_a: int
    count_b: int
    total_max: int
    accepted: int
    acceptance_rate: float
    pairwise_f1: float
    per_type_agreement: dict[str, tuple[int, int, int]]

    def to_record(self) -> dict:
        return {
            "pair": list(self.pair),
            "count_a": self.count_a,
            "count_b": self.count_b,
            "total_max": self.total_max,
            "accepted": self.accepted,
            "acceptance_rate": self.acceptance_rate,
            "pairwise_f1": self.pairwise_f1,
            "per_type": {
                t: {"a_count": a, "b_count": b, "agreed": g}
                for t, (a, b, g) in sorted(self.per_type_agreement.items())
            },
        }


def agreement(a: AnnotationSet, b: AnnotationSet) -> IAAReport:
    """Strict-intersection agreement between two sets over the same documents.

    ``total_max`` is the larger of the two annotation counts, the accounting
    used when a study reports "N annotations, M accepted".
    """
    if set(a.entries) != set(b.entries):
        raise DocMismatch(
            f"annotators {a.annotator_id!r} and {b.annotator_id!r} cover different documents"
        )
    keys_a = a.all_keys()
    keys_b = b.all_keys()
    accepted = len(keys_a & keys_b)
    count_a, count_b = len(keys_a), len(keys_b)
    total_max = max(count_a, count_b)
    rate = accepted / total_max if total_max else 0.0
    f1 = 2 * accepted / (count_a + count_b) if (count_a + count_b) else 0.0

    per_type = {}
    ca = Counter(k[3] for k in keys_a)
    cb = Counter(k[3] for k in keys_b)
    cg = Counter(k[3] for k in keys_a & keys_b)
    for t in sorted(set(ca) | set(cb)):
        per_type[t] = (ca.get(t, 0), cb.get(t, 0), cg.get(t, 0))

    return IAAReport(
        pair=(a.annotator_id, b.annotator_id),
        count_a=count_a,
        count_b=count_b,
        total_max=total_max,
        accepted=accepted,
        acceptance_rate=rate,
        pairwise_f1=f1,
        per_type_agreement=per_type,
    )


def combine_reports(reports) -> dict:
    """Study-level accounting: per-group maxima summed across groups."""
    reports = list(reports)
    total_max = sum(r.total_max for r in reports)
    accepted = sum(r.accepted for r in reports)
    return {
        "groups": len(reports),
        "total_max": total_max,
        "accepted": accepted,
        "acceptance_rate": accepted / total_max if total_max else 0.0,
    }


def merge_group(sets) -> AnnotationSet:
    """Exact intersection across all sets; the accepted gold standard."""
    sets = list(sets)
    if len(sets) < 2:
        raise ValueError("merge_group needs at least two annotation sets")
    doc_ids = set(sets[0].entries)
    for s in sets[1:]:
        if set(s.entries) != doc_ids:
            raise DocMismatch("annotation sets cover different documents")
    common = sets[0].all_keys()
    for s in sets[1:]:
        common &= s.all_keys()
    # Mentions accepted into the gold standard are human-vetted regardless
    # of how they were first produced.
    by_key = {(d, *m.key()): m for d, ms in sets[0].entries.items() for m in ms}
    entries = {d: [] for d in doc_ids}
    for key in common:
        m = replace(by_key[key], provenance="human", score=1.0)
        entries[key[0]].append(m)
    return AnnotationSet("accepted", {d: sorted(ms) for d, ms in entries.items()})


def label_distribution(aset: AnnotationSet) -> dict[str, int]:
    counts = Counter(m.label for ms in aset.entries.values() for m in ms)
    return dict(sorted(counts.items()))


def round1_reference_counts() -> dict[str, int]:
    """Shipped label distribution of the original study's first round.

    For side-by-side comparison when profiling a new corpus; reproducing it
    needs the original (non-public) corpus, so nothing should assert it.
    """
    from pathlib import Path

    path = Path(__file__).parent / "data" / "round1_annotation_counts.json"
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)["counts"]
