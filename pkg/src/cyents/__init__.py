"""cyents: cybersecurity entity extraction toolkit.

Turns unstructured threat-intelligence text into typed, optionally
Wikidata-linked entity mentions, and manages the training loop around it:
corpus ingestion, rule-based pre-annotation, multi-annotator agreement,
statistical tagger training, and per-type evaluation.
"""

from .annotations import AnnotationSet, IAAReport, Mention, agreement, label_distribution, merge_group
from .schema import EntityType, SchemaVersion, lookup_type, migrate_label, round1, round2
from .textcorpus import Document, TilingParams, Token, build_document, segment_paragraphs, split_sentences, tokenize

__version__ = "0.1.0"

__all__ = [
    "AnnotationSet",
    "Document",
    "EntityType",
    "IAAReport",
    "Mention",
    "SchemaVersion",
    "TilingParams",
    "Token",
    "agreement",
    "build_document",
    "label_distribution",
    "lookup_type",
    "merge_group",
    "migrate_label",
    "round1",
    "round2",
    "segment_paragraphs",
    "split_sentences",
    "tokenize",
]
