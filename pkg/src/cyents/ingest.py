"""Corpus ingestion: RSS/Atom feeds, article extraction, persistent store.

The HTTP side is an injected two-method client so the whole pipeline runs
against directory-backed fixtures in tests and offline environments.  The
live client is a thin urllib wrapper with a politeness delay.

Extraction keeps the container element whose <p> children carry the most
text (vendor blogs wrap the article body in one div), drops script, style
and navigation subtrees, and collapses every whitespace run to one space so
the stored text has no newlines.

Store layout::

    store/
      index.json          {"article_url": "doc_id", ...}
      docs/<doc_id>.jsonl one Document record per file
"""

from __future__ import annotations

import hashlib
import json
import logging
import time
import urllib.request
from dataclasses import dataclass, field
from html.parser import HTMLParser
from pathlib import Path
from xml.etree import ElementTree

from .textcorpus import Document, TilingParams, build_document

log = logging.getLogger(__name__)


class NetworkError(IOError):
    pass


class FeedParseError(ValueError):
    pass


class EmptyExtraction(ValueError):
    pass


@dataclass(frozen=True)
class ArticleRef:
    feed_url: str
    article_url: str
    title: str
    published: str = ""


# --- http clients -------------------------------------------------------------


class LiveHttpClient:
    """urllib-backed client with a delay between requests."""

    def __init__(self, delay=1.0, timeout=30.0, user_agent="cyents/0.1"):
        self.delay = delay
        self.timeout = timeout
        self.user_agent = user_agent
        self._last = 0.0

    def get(self, url: str) -> str:
        wait = self._last + self.delay - time.monotonic()
        if wait > 0:
            time.sleep(wait)
        req = urllib.request.Request(url, headers={"User-Agent": self.user_agent})
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                data = resp.read()
        except OSError as exc:
            raise NetworkError(f"GET {url}: {exc}") from exc
        finally:
            self._last = time.monotonic()
        return data.decode("utf-8", errors="replace")


class FixtureHttpClient:
    """Serves recorded responses from a directory.

    The directory holds an ``index.json`` mapping URL to file name; anything
    unmapped raises NetworkError like a dead link would.
    """

    def __init__(self, root):
        self.root = Path(root)
        with open(self.root / "index.json", encoding="utf-8") as fh:
            self.index = json.load(fh)

    def get(self, url: str) -> str:
        name = self.index.get(url)
        if name is None:
            raise NetworkError(f"GET {url}: no fixture recorded")
        return (self.root / name).read_text(encoding="utf-8")


# --- feeds ---------------------------------------------------------------------

_ATOM_NS = "{http://www.w3.org/2005/Atom}"


def fetch_feed(url: str, http) -> list[ArticleRef]:
    """Parse one RSS 2.0 or Atom feed into refs, in feed order."""
    body = http.get(url)
    try:
        root = ElementTree.fromstring(body)
    except ElementTree.ParseError as exc:
        raise FeedParseError(f"{url}: {exc}") from exc

    refs = []
    if root.tag in ("rss", "rdf:RDF") or root.tag.endswith("rss"):
        for item in root.iter("item"):
            link = (item.findtext("link") or "").strip()
            if not link:
                continue
            refs.append(
                ArticleRef(
                    feed_url=url,
                    article_url=link,
                    title=(item.findtext("title") or "").strip(),
                    published=(item.findtext("pubDate") or "").strip(),
                )
            )
    elif root.tag == f"{_ATOM_NS}feed":
        for entry in root.iter(f"{_ATOM_NS}entry"):
            link = ""
            for el in entry.findall(f"{_ATOM_NS}link"):
                if el.get("rel") in (None, "alternate"):
                    link = el.get("href", "")
                    break
            if not link:
                continue
            refs.append(
                ArticleRef(
                    feed_url=url,
                    article_url=link,
                    title=(entry.findtext(f"{_ATOM_NS}title") or "").strip(),
                    published=(entry.findtext(f"{_ATOM_NS}updated") or "").strip(),
                )
            )
    else:
        raise FeedParseError(f"{url}: unrecognized feed root element {root.tag!r}")
    return refs


# --- article extraction ---------------------------------------------------------

_SKIP_TAGS = {"script", "style", "nav", "header", "footer", "aside", "form", "noscript"}
_BLOCK_TAGS = {"p", "h1", "h2", "h3", "h4", "li"}
_VOID_TAGS = {"br", "img", "hr", "meta", "link", "input", "source", "wbr"}


class _ParagraphCollector(HTMLParser):
    """Collects text blocks keyed by the container element they sit in.

    Containers are identified by the serial numbers of the open elements, so
    sibling <div>s stay distinct and unclosed <p> tags (common in the wild)
    simply end at the next block tag.
    """

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.stack = []  # (tag, serial)
        self.serial = 0
        self.skip_depth = 0
        self.block = None  # (parent_key, tag, parts)
        self.blocks = []  # (parent_key, tag, text)

    def _close_block(self):
        if self.block is not None:
            parent, tag, parts = self.block
            text = " ".join("".join(parts).split())
            if text:
                self.blocks.append((parent, tag, text))
            self.block = None

    def handle_starttag(self, tag, attrs):
        if tag in _VOID_TAGS:
            return
        if tag in _SKIP_TAGS:
            self.skip_depth += 1
        if self.skip_depth == 0 and tag in _BLOCK_TAGS:
            self._close_block()
            self.block = (tuple(s for _, s in self.stack), tag, [])
        self.serial += 1
        self.stack.append((tag, self.serial))

    def handle_endtag(self, tag):
        if tag in _VOID_TAGS:
            return
        if self.block is not None and self.block[1] == tag:
            self._close_block()
        if any(t == tag for t, _ in self.stack):
            while self.stack:
                if self.stack.pop()[0] == tag:
                    break
        if tag in _SKIP_TAGS and self.skip_depth > 0:
            self.skip_depth -= 1

    def handle_data(self, data):
        if self.skip_depth == 0 and self.block is not None:
            self.block[2].append(data)


def extract_article(html: str) -> str:
    """Main article text, whitespace-flattened: never contains a newline."""
    parser = _ParagraphCollector()
    parser.feed(html)
    parser.close()
    parser._close_block()
    weight = {}
    for parent, tag, text in parser.blocks:
        if tag == "p":
            weight[parent] = weight.get(parent, 0) + len(text)
    if not weight:
        raise EmptyExtraction("no paragraph-like content found")
    best = max(weight, key=lambda k: (weight[k], k))
    texts = [
        text
        for parent, tag, text in parser.blocks
        if parent[: len(best)] == best  # the container itself or a descendant
    ]
    flat = " ".join(" ".join(texts).split())
    if not flat:
        raise EmptyExtraction("no paragraph-like content found")
    return flat


# --- corpus store ----------------------------------------------------------------


def _doc_id_for(url: str) -> str:
    return hashlib.sha1(url.encode("utf-8")).hexdigest()[:12]


class CorpusStore:
    def __init__(self, root):
        self.root = Path(root)
        self.docs_dir = self.root / "docs"
        self.docs_dir.mkdir(parents=True, exist_ok=True)
        self.index_path = self.root / "index.json"
        if self.index_path.exists():
            with open(self.index_path, encoding="utf-8") as fh:
                self.index = json.load(fh)
        else:
            self.index = {}

    def __contains__(self, article_url):
        return article_url in self.index

    def __len__(self):
        return len(self.doc_ids())

    def doc_ids(self):
        return sorted(p.stem for p in self.docs_dir.glob("*.jsonl"))

    def save(self, doc: Document, article_url=None):
        path = self.docs_dir / f"{doc.doc_id}.jsonl"
        path.write_text(doc.to_json() + "\n", encoding="utf-8")
        if article_url:
            self.index[article_url] = doc.doc_id
            self._flush_index()

    def _flush_index(self):
        tmp = self.index_path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(self.index, indent=0, sort_keys=True), encoding="utf-8")
        tmp.replace(self.index_path)

    def load(self, doc_id) -> Document:
        path = self.docs_dir / f"{doc_id}.jsonl"
        return Document.from_json(path.read_text(encoding="utf-8"))

    def documents(self):
        for doc_id in self.doc_ids():
            yield self.load(doc_id)

    def doc_lengths(self) -> dict[str, int]:
        return {d.doc_id: len(d.text) for d in self.documents()}


@dataclass
class SyncResult:
    added: int = 0
    skipped: int = 0
    errors: list = field(default_factory=list)


def read_feed_list(path) -> list[str]:
    urls = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                urls.append(line)
    return urls


def sync(store: CorpusStore, feeds, http, tiling: TilingParams = TilingParams()) -> SyncResult:
    """Fetch feeds, ingest unseen articles; idempotent over identical inputs.

    Per-article failures are recorded and never abort the batch.
    """
    result = SyncResult()
    for feed_url in feeds:
        try:
            refs = fetch_feed(feed_url, http)
        except (NetworkError, FeedParseError) as exc:
            log.error("feed %s failed: %s", feed_url, exc)
            result.errors.append((feed_url, str(exc)))
            continue
        for ref in refs:
            if ref.article_url in store:
                result.skipped += 1
                continue
            try:
                html = http.get(ref.article_url)
                text = extract_article(html)
                doc = build_document(
                    _doc_id_for(ref.article_url), text, source_url=ref.article_url, params=tiling
                )
            except (NetworkError, EmptyExtraction, ValueError) as exc:
                log.error("article %s failed: %s", ref.article_url, exc)
                result.errors.append((ref.article_url, str(exc)))
                continue
            store.save(doc, article_url=ref.article_url)
            result.added += 1
    return result
