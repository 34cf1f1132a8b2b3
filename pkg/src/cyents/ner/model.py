"""Hashed-embedding BILOU tagger: embed, encode, predict.

Tokens are embedded without a vocabulary: the normalized surface (case-folded,
every digit run collapsed to "0") is hashed with four seeds, each hash picks a
row of a fixed table modulo its size, and the token vector is the sum of the
four rows.  Unseen tokens therefore need no special handling.  The token
matrix is contextualized by two width-3 convolution layers with residual
connections and a tanh squashing, then a linear layer scores one BILOU label
per token.

The hash is fixed and portable so serialized models mean the same thing
everywhere: FNV-1a over the UTF-8 bytes with the 64-bit offset basis XORed
with the seed, followed by the splitmix64 finalizer.  All arithmetic is
modulo 2**64; constants are in :func:`hash64`.

Greedy per-token argmax can emit label sequences no span encoding accepts
(O followed by I-t, mismatched types, dangling opens).  :func:`repair_tags`
rewrites them with a deterministic left-to-right table; ``state`` is whether
an entity run of type t is open:

    closed  O        keep O
    closed  B-t      open t
    closed  I-t      rewrite to B-t, open t
    closed  L-t      rewrite to U-t
    closed  U-t      keep
    open t  I-t/L-t  continue / close span
    open t  O        close the open run at the previous token, keep O
    open t  B-s/U-s  close the open run, then handle as from closed
    open t  I-s/L-s  (s != t) close the open run, then handle as from closed
    end     open t   close the run at the last token

"Close the open run" retags its last token L-t (or the whole run U-t when it
is a single token), so every emitted span is B..L or U and spans never
overlap.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .. import schema as schema_mod
from ..annotations import Mention
from ..textcorpus import Document, tokenize

DEFAULT_ROWS = 5000
DEFAULT_DIM = 64
DEFAULT_SEEDS = (
    0x9E3779B97F4A7C15,
    0xC2B2AE3D27D4EB4F,
    0x165667B19E3779F9,
    0x27D4EB2F165667C5,
)

_MASK64 = (1 << 64) - 1
_FNV_BASIS = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def hash64(text: str, seed: int) -> int:
    """Seeded FNV-1a (64-bit) with splitmix64 finalization."""
    h = (_FNV_BASIS ^ seed) & _MASK64
    for b in text.encode("utf-8"):
        h = ((h ^ b) * _FNV_PRIME) & _MASK64
    # splitmix64 mix
    h = (h ^ (h >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    h = (h ^ (h >> 27)) * 0x94D049BB133111EB & _MASK64
    return (h ^ (h >> 31)) & _MASK64


_DIGIT_RUN = re.compile(r"\d+")


def normalize_surface(surface: str) -> str:
    return _DIGIT_RUN.sub("0", surface.casefold())


def build_label_list(version) -> list[str]:
    """O plus BILOU tags for every statistical-category type, fixed order."""
    labels = ["O"]
    for t in schema_mod.get_version(version).statistical_types():
        labels.extend((f"B-{t}", f"I-{t}", f"L-{t}", f"U-{t}"))
    return labels


@dataclass
class TaggerModel:
    schema_version: str
    label_list: list[str]
    hash_seeds: tuple[int, ...]
    embed: np.ndarray          # (rows, dim)
    conv1_w: np.ndarray        # (3*dim, dim)
    conv1_b: np.ndarray        # (dim,)
    conv2_w: np.ndarray        # (3*dim, dim)
    conv2_b: np.ndarray        # (dim,)
    out_w: np.ndarray          # (dim, labels)
    out_b: np.ndarray          # (labels,)
    training_meta: dict = field(default_factory=dict)

    @property
    def rows(self):
        return self.embed.shape[0]

    @property
    def dim(self):
        return self.embed.shape[1]

    def label_index(self):
        return {lab: i for i, lab in enumerate(self.label_list)}

    def check_finite(self):
        for name, arr in self.arrays().items():
            if not np.isfinite(arr).all():
                raise ValueError(f"non-finite values in weight group {name}")

    def arrays(self):
        return {
            "embed": self.embed,
            "conv1_w": self.conv1_w,
            "conv1_b": self.conv1_b,
            "conv2_w": self.conv2_w,
            "conv2_b": self.conv2_b,
            "out_w": self.out_w,
            "out_b": self.out_b,
        }

    @classmethod
    def init(cls, schema_version="round2", rows=DEFAULT_ROWS, dim=DEFAULT_DIM, seed=0):
        rng = np.random.default_rng(seed)
        labels = build_label_list(schema_version)
        n_lab = len(labels)
        return cls(
            schema_version=schema_mod.get_version(schema_version).id,
            label_list=labels,
            hash_seeds=DEFAULT_SEEDS,
            embed=rng.normal(0.0, 0.1, size=(rows, dim)),
            conv1_w=rng.normal(0.0, 0.05, size=(3 * dim, dim)),
            conv1_b=np.zeros(dim),
            conv2_w=rng.normal(0.0, 0.05, size=(3 * dim, dim)),
            conv2_b=np.zeros(dim),
            out_w=rng.normal(0.0, 0.05, size=(dim, n_lab)),
            out_b=np.zeros(n_lab),
        )

    def row_indices(self, surfaces) -> np.ndarray:
        """(n, n_seeds) table rows selected by each token's hashes."""
        rows = self.rows
        idx = np.empty((len(surfaces), len(self.hash_seeds)), dtype=np.int64)
        for i, surf in enumerate(surfaces):
            norm = normalize_surface(surf)
            for j, seed in enumerate(self.hash_seeds):
                idx[i, j] = hash64(norm, seed) % rows
        return idx


def hash_embed(surface: str, model: TaggerModel) -> np.ndarray:
    """Token vector: sum of the table rows selected by the four hashes."""
    idx = model.row_indices([surface])
    return model.embed[idx[0]].sum(axis=0)


def _windows(x: np.ndarray) -> np.ndarray:
    """(n, d) -> (n, 3d): previous/self/next rows, zero-padded at edges."""
    n, d = x.shape
    out = np.zeros((n, 3 * d))
    out[:, d : 2 * d] = x
    out[1:, :d] = x[:-1]
    out[:-1, 2 * d :] = x[1:]
    return out


def forward(model: TaggerModel, row_idx: np.ndarray, dropout_mask=None) -> dict:
    """Full forward pass; returns every intermediate needed by backprop."""
    x0 = model.embed[row_idx].sum(axis=1)
    w1_in = _windows(x0)
    a1 = np.tanh(w1_in @ model.conv1_w + model.conv1_b)
    h1 = x0 + a1
    w2_in = _windows(h1)
    a2 = np.tanh(w2_in @ model.conv2_w + model.conv2_b)
    h2 = h1 + a2
    h2d = h2 * dropout_mask if dropout_mask is not None else h2
    logits = h2d @ model.out_w + model.out_b
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    probs = exp / exp.sum(axis=1, keepdims=True)
    return {
        "row_idx": row_idx,
        "x0": x0,
        "w1_in": w1_in,
        "a1": a1,
        "h1": h1,
        "w2_in": w2_in,
        "a2": a2,
        "h2": h2,
        "h2d": h2d,
        "dropout_mask": dropout_mask,
        "logits": logits,
        "probs": probs,
    }


def encode(model: TaggerModel, token_vectors: np.ndarray) -> np.ndarray:
    """Context-encode pre-embedded token vectors; shape-preserving."""
    a1 = np.tanh(_windows(token_vectors) @ model.conv1_w + model.conv1_b)
    h1 = token_vectors + a1
    a2 = np.tanh(_windows(h1) @ model.conv2_w + model.conv2_b)
    return h1 + a2


def token_probabilities(model: TaggerModel, surfaces) -> np.ndarray:
    if not surfaces:
        return np.zeros((0, len(model.label_list)))
    return forward(model, model.row_indices(surfaces))["probs"]


def _argmax_prefer_o(probs: np.ndarray) -> list[int]:
    """Row argmax; exact ties involving O resolve to O, else lowest index."""
    picks = []
    for row in probs:
        top = row.max()
        if row[0] == top:
            picks.append(0)
        else:
            picks.append(int(np.argmax(row)))
    return picks


def repair_tags(tags: list[str]) -> tuple[list[str], list[tuple[int, int, str]]]:
    """Rewrite a raw BILOU sequence per the repair table in the module docs.

    Returns the repaired sequence and the spans as (first, last, type) token
    index pairs, inclusive of last.
    """
    fixed = list(tags)
    spans = []
    open_type = None
    open_start = None

    def close_at(idx):
        nonlocal open_type, open_start
        if open_start == idx:
            fixed[idx] = f"U-{open_type}"
        else:
            fixed[idx] = f"L-{open_type}"
        spans.append((open_start, idx, open_type))
        open_type = None
        open_start = None

    for i, tag in enumerate(tags):
        if tag == "O":
            if open_type is not None:
                close_at(i - 1)
            fixed[i] = "O"
            continue
        kind, typ = tag.split("-", 1)
        if open_type is not None:
            if kind == "I" and typ == open_type:
                fixed[i] = tag
                continue
            if kind == "L" and typ == open_type:
                fixed[i] = tag
                spans.append((open_start, i, open_type))
                open_type = None
                open_start = None
                continue
            close_at(i - 1)
        # closed state from here
        if kind in ("B", "I"):
            fixed[i] = f"B-{typ}"
            open_type = typ
            open_start = i
        elif kind in ("L", "U"):
            fixed[i] = f"U-{typ}"
            spans.append((i, i, typ))
    if open_type is not None:
        close_at(len(tags) - 1)
    return fixed, spans


def decode(model: TaggerModel, probs: np.ndarray, tokens) -> list[Mention]:
    """Argmax + repair, then map token spans back to character offsets."""
    if len(tokens) == 0:
        return []
    picks = _argmax_prefer_o(probs)
    raw = [model.label_list[i] for i in picks]
    fixed, spans = repair_tags(raw)
    index = model.label_index()
    mentions = []
    for first, last, typ in sorted(spans):
        token_probs = [probs[i][index[fixed[i]]] for i in range(first, last + 1)]
        score = float(np.mean(token_probs))
        mentions.append(
            Mention(
                start=tokens[first].start,
                end=tokens[last].end,
                label=typ,
                provenance="model",
                score=min(1.0, max(0.0, score)),
            )
        )
    return sorted(mentions)


def predict(doc: Document, model: TaggerModel) -> list[Mention]:
    """Tag one document: well-formed, non-overlapping model mentions."""
    tokens = tokenize(doc.text)
    if not tokens:
        return []
    probs = token_probabilities(model, [t.surface for t in tokens])
    return decode(model, probs, tokens)
