"""High-precision recognizers: format regexes and gazetteer automata.

Two rule families cover the entity types that do not need a trained model:
types with a strict surface format (IP addresses, hashes, ports, CVE ids,
plus emails and URLs) are matched by regular expressions; types with a
finite vocabulary (operating systems, protocols, ...) are matched from
curated term lists compiled into an Aho-Corasick automaton so a document is
scanned once regardless of list size.

``prepopulate`` unions both families into a non-overlapping annotation set
used to prime human annotation tasks.  Regex matches outrank gazetteer
matches when they collide (a format match is unambiguous); remaining
collisions resolve leftmost-longest.
"""

from __future__ import annotations

import ipaddress
import re
from collections import deque
from dataclasses import dataclass

from .annotations import AnnotationSet, Mention
from .textcorpus import Document, tokenize


class EmptyGazetteer(ValueError):
    pass


# --- case folding that preserves offsets -------------------------------------


def fold_char(c: str) -> str:
    low = c.lower()
    return low if len(low) == 1 else c


def fold_text(text: str) -> str:
    """Per-character lowercase; length-preserving so offsets survive."""
    return "".join(fold_char(c) for c in text)


def normalize_entry(term: str) -> str:
    return " ".join(fold_text(term).split())


# --- Aho-Corasick automaton ---------------------------------------------------


class _AhoCorasick:
    """Multi-pattern matcher over folded text; emits (start, end) per hit."""

    def __init__(self, patterns):
        self.goto = [{}]
        self.fail = [0]
        self.out = [[]]  # pattern lengths ending at each state
        for pat in patterns:
            state = 0
            for ch in pat:
                nxt = self.goto[state].get(ch)
                if nxt is None:
                    self.goto.append({})
                    self.fail.append(0)
                    self.out.append([])
                    nxt = len(self.goto) - 1
                    self.goto[state][ch] = nxt
                state = nxt
            self.out[state].append(len(pat))
        queue = deque(self.goto[0].values())  # depth-1 states fail to root
        while queue:
            state = queue.popleft()
            for ch, nxt in self.goto[state].items():
                queue.append(nxt)
                f = self.fail[state]
                while f and ch not in self.goto[f]:
                    f = self.fail[f]
                self.fail[nxt] = self.goto[f].get(ch, 0)
                self.out[nxt] = self.out[nxt] + self.out[self.fail[nxt]]

    def scan(self, text):
        state = 0
        for i, ch in enumerate(text):
            while state and ch not in self.goto[state]:
                state = self.fail[state]
            state = self.goto[state].get(ch, 0)
            for length in self.out[state]:
                yield i + 1 - length, i + 1


@dataclass(frozen=True)
class Gazetteer:
    type_label: str
    entries: frozenset[str]
    automaton: _AhoCorasick

    def __len__(self):
        return len(self.entries)


def compile_gazetteer(type_label: str, entries) -> Gazetteer:
    """Normalize, dedupe and compile entries into a single-pass matcher."""
    normalized = {normalize_entry(e) for e in entries}
    normalized.discard("")
    if not normalized:
        raise EmptyGazetteer(f"gazetteer {type_label!r} has no usable entries")
    return Gazetteer(
        type_label=type_label,
        entries=frozenset(normalized),
        automaton=_AhoCorasick(sorted(normalized)),
    )


def load_gazetteer_dir(path) -> list[Gazetteer]:
    """Read every ``*.tsv`` in a directory (``term<TAB>type``, # comments)."""
    from pathlib import Path

    by_type = {}
    for tsv in sorted(Path(path).glob("*.tsv")):
        with open(tsv, encoding="utf-8") as fh:
            for raw in fh:
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                term, _, label = line.partition("\t")
                if not label:
                    raise ValueError(f"{tsv}: malformed line {raw!r}")
                by_type.setdefault(label.strip(), []).append(term)
    return [compile_gazetteer(label, terms) for label, terms in sorted(by_type.items())]


def _leftmost_longest(spans):
    """Greedy non-overlap resolution over (start, end, ...) tuples."""
    chosen = []
    last_end = -1
    for span in sorted(spans, key=lambda s: (s[0], -(s[1] - s[0]))):
        if span[0] >= last_end:
            chosen.append(span)
            last_end = span[1]
    return chosen


def match_gazetteer(gaz: Gazetteer, doc: Document) -> list[Mention]:
    """Case-insensitive, token-boundary-aligned gazetteer matches."""
    folded = fold_text(doc.text)
    tokens = tokenize(doc.text)
    starts = {t.start for t in tokens}
    ends = {t.end for t in tokens}
    hits = [
        (s, e) for s, e in gaz.automaton.scan(folded) if s in starts and e in ends
    ]
    return [
        Mention(s, e, gaz.type_label, provenance="rule", score=1.0)
        for s, e in _leftmost_longest(hits)
    ]


# --- format recognizers -------------------------------------------------------

_OCTET = r"(?:25[0-5]|2[0-4]\d|1\d\d|[1-9]?\d)"
IPV4_RE = re.compile(
    rf"(?<![\w.]){_OCTET}(?:\.{_OCTET}){{3}}(?!\.?\d)(?!\w)"
)
# Maximal runs of hex/colon/dot characters; stdlib validation decides
# what is actually an address.
_IPV6_RUN = re.compile(r"(?<![\w:.])[0-9A-Fa-f:.]+(?![\w:])")
HASH_RE = re.compile(
    r"(?<!\w)(?:[0-9A-Fa-f]{64}|[0-9A-Fa-f]{40}|[0-9A-Fa-f]{32})(?!\w)"
)
CVE_RE = re.compile(r"(?<![\w-])CVE-\d{4}-\d{4,7}(?!\d)", re.IGNORECASE)
PORT_TRIGGER_RE = re.compile(r"\bports?\s+(\d{1,5})(?!\d)", re.IGNORECASE)
EMAIL_RE = re.compile(r"(?<![\w.+%-])[\w.+%-]+@[\w-]+(?:\.[\w-]+)*\.[A-Za-z]{2,}(?!\w)")
URL_RE = re.compile(r"(?:https?|ftp)://[^\s<>\"']+", re.IGNORECASE)
_URL_TRIM = ".,;:!?)]}'\""


def _ipv6_spans(text):
    for m in _IPV6_RUN.finditer(text):
        run = m.group()
        end = m.end()
        while run.endswith("."):  # sentence punctuation, not address syntax
            run = run[:-1]
            end -= 1
        if run.endswith(":") and not run.endswith("::"):
            run = run[:-1]
            end -= 1
        if run.count(":") < 2:
            continue
        try:
            ipaddress.IPv6Address(run)
        except (ipaddress.AddressValueError, ValueError):
            continue
        yield m.start(), end


def match_patterns(doc: Document) -> list[Mention]:
    """Format-based mentions: IP_Address, Hash, Port, CVE, Email, URL.

    Ports are only labeled next to a lexical trigger ("port 443", "ports 80")
    or as the digits after a colon that immediately follows an IP address;
    bare small integers stay unlabeled.  Hashes must be exactly 32, 40 or 64
    hex characters (MD5, SHA-1, SHA-256).
    """
    text = doc.text
    raw = []

    for m in URL_RE.finditer(text):
        end = m.end()
        while end > m.start() and text[end - 1] in _URL_TRIM:
            candidate = text[m.start() : end]
            if text[end - 1] == ")" and candidate.count("(") >= candidate.count(")"):
                break  # balanced paren belongs to the URL
            end -= 1
        if end > m.start() + len(m.group().split("://")[0]) + 3:
            raw.append((m.start(), end, "URL"))
    for m in EMAIL_RE.finditer(text):
        raw.append((m.start(), m.end(), "Email"))
    for m in CVE_RE.finditer(text):
        raw.append((m.start(), m.end(), "CVE"))
    for m in HASH_RE.finditer(text):
        raw.append((m.start(), m.end(), "Hash"))

    ip_spans = [(m.start(), m.end()) for m in IPV4_RE.finditer(text)]
    ip_spans.extend(_ipv6_spans(text))
    for s, e in ip_spans:
        raw.append((s, e, "IP_Address"))
        # port written as ip:443
        m = re.match(r":(\d{1,5})(?!\d)", text[e:])
        if m and int(m.group(1)) <= 65535:
            raw.append((e + 1, e + m.end(1), "Port"))
    for m in PORT_TRIGGER_RE.finditer(text):
        if int(m.group(1)) <= 65535:
            raw.append((m.start(1), m.end(1), "Port"))

    chosen = _leftmost_longest(raw)
    return sorted(Mention(s, e, label, provenance="rule", score=1.0) for s, e, label in chosen)


def prepopulate(doc: Document, gazetteers) -> AnnotationSet:
    """Rule-based pre-annotations for one document.

    Union of the format recognizers and all gazetteers; on overlap a regex
    match beats a gazetteer match, then leftmost-longest applies.
    """
    regex_mentions = match_patterns(doc)
    gaz_mentions = []
    for gaz in gazetteers:
        gaz_mentions.extend(match_gazetteer(gaz, doc))

    final = list(regex_mentions)  # already non-overlapping
    taken = [(m.start, m.end) for m in final]
    for m in sorted(gaz_mentions, key=lambda m: (m.start, -(m.end - m.start))):
        if all(m.end <= s or m.start >= e for s, e in taken):
            final.append(m)
            taken.append((m.start, m.end))
    aset = AnnotationSet("rules")
    aset.add(doc.doc_id, final)
    return aset
