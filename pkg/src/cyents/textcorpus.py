"""Document model: character-offset tokens, sentences and topical paragraphs.

Article text is stored flat, with every newline collapsed away, so offsets
stay stable across storage, annotation and evaluation.  Sentences are
``(start, end)`` character ranges over the text; paragraphs are
``(first, last+1)`` index ranges over the sentence list, produced by a
TextTiling-style block-comparison segmenter.

Offsets throughout are Unicode code point counts, end-exclusive.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Token:
    start: int
    end: int
    surface: str


@dataclass
class Document:
    doc_id: str
    text: str
    source_url: str | None = None
    sentences: list[tuple[int, int]] = field(default_factory=list)
    paragraphs: list[tuple[int, int]] = field(default_factory=list)

    def __post_init__(self):
        if "\n" in self.text or "\r" in self.text:
            raise ValueError(f"document {self.doc_id}: text contains newline characters")
        _check_ranges(self.sentences, len(self.text), "sentence")
        _check_partition(self.paragraphs, len(self.sentences))

    def sentence_text(self, i):
        s, e = self.sentences[i]
        return self.text[s:e]

    def to_record(self) -> dict:
        rec = {
            "doc_id": self.doc_id,
            "text": self.text,
            "source_url": self.source_url,
            "sentences": [list(r) for r in self.sentences],
            "paragraphs": [list(r) for r in self.paragraphs],
        }
        return rec

    def to_json(self) -> str:
        return json.dumps(self.to_record(), ensure_ascii=False)

    @classmethod
    def from_record(cls, rec: dict) -> "Document":
        return cls(
            doc_id=rec["doc_id"],
            text=rec["text"],
            source_url=rec.get("source_url"),
            sentences=[tuple(r) for r in rec.get("sentences", [])],
            paragraphs=[tuple(r) for r in rec.get("paragraphs", [])],
        )

    @classmethod
    def from_json(cls, line: str) -> "Document":
        return cls.from_record(json.loads(line))


def _check_ranges(ranges, length, what):
    prev_end = 0
    for s, e in ranges:
        if not (0 <= s < e <= length):
            raise ValueError(f"{what} range ({s},{e}) out of bounds for length {length}")
        if s < prev_end:
            raise ValueError(f"{what} ranges overlap or are unsorted at ({s},{e})")
        prev_end = e


def _check_partition(ranges, n):
    expect = 0
    for s, e in ranges:
        if s != expect or e <= s:
            raise ValueError(f"paragraphs do not partition sentences at ({s},{e})")
        expect = e
    if ranges and expect != n:
        raise ValueError(f"paragraphs cover {expect} of {n} sentences")


# --- tokenizer ---------------------------------------------------------------

# Patterns whose internal punctuation must not be split: URLs, emails,
# Windows paths, then the general word shape where -._/\ are word-internal
# when flanked by alphanumerics (covers IPs, hashes, CVE ids, versions and
# unix paths; an optional leading / or \ keeps absolute paths whole).
_TOKEN_RE = re.compile(
    r"""(?:https?|ftp)://[^\s]+[^\s.,;:!?)\]}>"']   # URL, no trailing punct
      | [\w.+%-]+@[\w-]+(?:\.[\w-]+)+               # email
      | [A-Za-z]:\\[\w\\/.~-]*\w                    # windows drive path
      | [/\\]?\w+(?:[._/\\-]\w+)*                   # word with internal joiners
      | \S                                          # any other single char
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    """Split text into offset-carrying tokens.

    Whitespace separates tokens; punctuation becomes its own token unless it
    is internal to a recognized pattern.  Every non-space character lands in
    exactly one token, so surfaces plus skipped whitespace reconstruct the
    input.
    """
    return [Token(m.start(), m.end(), m.group()) for m in _TOKEN_RE.finditer(text)]


# --- sentence splitting ------------------------------------------------------

_CLOSERS = set('"\'”’)]}')


def split_sentences(text: str) -> list[tuple[int, int]]:
    """Sentence ranges over flat text.

    A boundary needs a sentence-final punctuation token (. ! ?), optionally
    followed by closing quotes/brackets, then whitespace and an uppercase
    letter or digit.  Punctuation inside a single token ("10.2",
    "CVE-2021-44228") can never end a sentence because it never surfaces as
    its own token.
    """
    tokens = tokenize(text)
    if not tokens:
        return []
    breaks = []  # char offsets where a new sentence starts
    for i, tok in enumerate(tokens):
        if tok.surface not in (".", "!", "?"):
            continue
        j = i + 1
        while j < len(tokens) and tokens[j].surface in _CLOSERS:
            j += 1
        if j >= len(tokens):
            continue
        nxt = tokens[j]
        end_of_run = tokens[j - 1].end
        if nxt.start > end_of_run and (nxt.surface[0].isupper() or nxt.surface[0].isdigit()):
            breaks.append(nxt.start)
    starts = [tokens[0].start] + breaks
    sentences = []
    for k, s in enumerate(starts):
        hard_end = starts[k + 1] if k + 1 < len(starts) else len(text)
        e = hard_end
        while e > s and text[e - 1].isspace():
            e -= 1
        if e > s:
            sentences.append((s, e))
    return sentences


# --- TextTiling paragraph segmentation --------------------------------------


@dataclass(frozen=True)
class TilingParams:
    """Block-comparison parameters.

    ``window_w`` tokens per pseudo-sentence window, ``block_k`` windows per
    comparison block, and a depth cutoff of ``mean - multiplier * stddev``.
    Gaps closer than ``block_k + 2`` windows to a deeper boundary are
    suppressed: block overlap (k windows) plus score smoothing makes their
    similarity dips correlated with the stronger boundary, not independent
    topic shifts.
    """

    window_w: int = 20
    block_k: int = 6
    depth_cutoff_multiplier: float = 0.5


DEFAULT_TILING = TilingParams()


def _word_tokens(text):
    return [t for t in tokenize(text) if any(c.isalnum() for c in t.surface)]


def _vector(counts_list):
    total = {}
    for counts in counts_list:
        for w, c in counts.items():
            total[w] = total.get(w, 0) + c
    return total


def _cosine(a, b):
    if not a or not b:
        return 0.0
    dot = sum(c * b[w] for w, c in a.items() if w in b)
    na = math.sqrt(sum(c * c for c in a.values()))
    nb = math.sqrt(sum(c * c for c in b.values()))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return dot / (na * nb)


def _smooth(scores, width=3):
    half = width // 2
    out = []
    for i in range(len(scores)):
        lo = max(0, i - half)
        hi = min(len(scores), i + half + 1)
        out.append(sum(scores[lo:hi]) / (hi - lo))
    return out


def gap_scores(text: str, params: TilingParams = DEFAULT_TILING):
    """Raw block-comparison cosine per inter-window gap, plus window spans.

    Returns ``(scores, windows)`` where ``windows[i]`` is the (start, end)
    char span of pseudo-sentence window i.  Exposed for inspection and for
    oracle checks; ``segment_paragraphs`` builds on it.
    """
    w, k = params.window_w, params.block_k
    words = _word_tokens(text)
    n_win = len(words) // w
    windows = []
    counts = []
    for i in range(n_win):
        chunk = words[i * w : (i + 1) * w]
        windows.append((chunk[0].start, chunk[-1].end))
        freq = {}
        for t in chunk:
            s = t.surface.lower()
            freq[s] = freq.get(s, 0) + 1
        counts.append(freq)
    scores = []
    for g in range(n_win - 1):
        left = _vector(counts[max(0, g - k + 1) : g + 1])
        right = _vector(counts[g + 1 : min(n_win, g + 1 + k)])
        scores.append(_cosine(left, right))
    return scores, windows


def _depth_scores(scores):
    depths = []
    for i, s in enumerate(scores):
        lpeak = s
        for v in scores[i::-1]:
            if v >= lpeak:
                lpeak = v
            else:
                break
        rpeak = s
        for v in scores[i:]:
            if v >= rpeak:
                rpeak = v
            else:
                break
        depths.append((lpeak - s) + (rpeak - s))
    return depths


def segment_paragraphs(doc: Document, params: TilingParams = DEFAULT_TILING) -> list[tuple[int, int]]:
    """Partition the sentence list into topical paragraphs.

    Degenerate input (no sentences is an error; fewer than ``2 * block_k``
    windows) comes back as a single paragraph rather than an error.
    """
    n_sent = len(doc.sentences)
    if n_sent == 0:
        raise ValueError("segment_paragraphs needs computed sentences")
    whole = [(0, n_sent)]

    scores, windows = gap_scores(doc.text, params)
    if len(windows) < 2 * params.block_k:
        return whole
    scores = _smooth(scores)
    depths = _depth_scores(scores)

    mean = sum(depths) / len(depths)
    var = sum((d - mean) ** 2 for d in depths) / len(depths)
    cutoff = mean - params.depth_cutoff_multiplier * math.sqrt(var)
    # depths at rounding-error scale are numeric noise, never topic shifts
    cutoff = max(cutoff, 1e-9)

    # gaps near the edges compare one-sided, truncated blocks; their depths
    # are unreliable, so they never become boundaries
    clip = min(max(len(depths) // 10, 1), 3)
    candidates = [
        (d, g) for g, d in enumerate(depths)
        if d > cutoff and clip <= g < len(depths) - clip
    ]
    candidates.sort(key=lambda t: (-t[0], t[1]))
    min_sep = params.block_k + 2
    chosen = []
    for d, g in candidates:
        if all(abs(g - h) >= min_sep for h in chosen):
            chosen.append(g)

    sent_ends = [e for _, e in doc.sentences]
    break_idx = set()
    for g in chosen:
        gap_char = windows[g][1]  # end of the window left of the gap
        nearest = min(range(n_sent), key=lambda i: (abs(sent_ends[i] - gap_char), i))
        b = nearest + 1
        if 0 < b < n_sent:
            break_idx.add(b)

    if not break_idx:
        return whole
    bounds = [0] + sorted(break_idx) + [n_sent]
    return [(bounds[i], bounds[i + 1]) for i in range(len(bounds) - 1)]


def build_document(doc_id, text, source_url=None, params: TilingParams = DEFAULT_TILING) -> Document:
    """Split sentences and segment paragraphs in one step."""
    doc = Document(doc_id=doc_id, text=text, source_url=source_url)
    doc.sentences = split_sentences(text)
    doc.paragraphs = segment_paragraphs(doc, params) if doc.sentences else []
    return doc
