"""Wikidata entity linking: candidate retrieval, feature ranking, NIL calls.

A mention surface goes to a search client (live API or recorded fixtures)
which returns hydrated candidates: Q-id, label, aliases, description, type
Q-ids (direct and inherited), sitelink-count prominence and optionally the
first sentence of an encyclopedia abstract.  Candidates are scored by a
weighted sum of

* string match: exact label 1.0, exact alias 0.8, otherwise the longest
  common substring over the longer length,
* prominence: log(1+sitelinks) normalized by the best candidate,
* context: tf-idf cosine between the mention's sentence context and the
  candidate's description plus abstract sentence,
* type relevance: whether the candidate carries one of the configured
  domain type Q-ids.

Ties break on ascending numeric Q-id, so ranking is fully deterministic.
The top candidate becomes the decision when its score clears the NIL
threshold; types outside the linkable set are skipped as NOT_LINKABLE.
"""

from __future__ import annotations

import json
import math
import re
import urllib.parse
import urllib.request
from dataclasses import dataclass
from pathlib import Path

from .annotations import Mention
from .textcorpus import Document

NIL = "NIL"
NOT_LINKABLE = "NOT_LINKABLE"

LINKABLE_TYPES = frozenset(
    {
        "Threat_Actor",
        "Malware_Name",
        "Software_Name",
        "Operating_System",
        "Campaign",
        "ORG",
        "GPE",
        "PERSON",
        "Programming_Language",
        "Protocol",
    }
)

_QID_RE = re.compile(r"Q\d+$")


class ClientError(IOError):
    pass


@dataclass(frozen=True)
class LinkCandidate:
    qid: str
    label: str
    aliases: tuple[str, ...] = ()
    description: str = ""
    types: tuple[str, ...] = ()
    prominence: int = 0
    abstract_first_sentence: str = ""

    def __post_init__(self):
        if not _QID_RE.match(self.qid):
            raise ValueError(f"bad qid {self.qid!r}")
        if self.prominence < 0:
            raise ValueError("prominence must be >= 0")

    @classmethod
    def from_record(cls, rec: dict) -> "LinkCandidate":
        return cls(
            qid=rec["qid"],
            label=rec.get("label", ""),
            aliases=tuple(rec.get("aliases", [])),
            description=rec.get("description", ""),
            types=tuple(rec.get("types", [])),
            prominence=int(rec.get("prominence", 0)),
            abstract_first_sentence=rec.get("abstract_first_sentence", ""),
        )


@dataclass(frozen=True)
class LinkResult:
    mention: Mention
    ranked: tuple[tuple[LinkCandidate, float], ...]
    decision: str  # a qid, NIL, or NOT_LINKABLE

    def to_link_record(self, alternatives=5) -> dict:
        top_score = self.ranked[0][1] if self.ranked else 0.0
        return {
            "qid": self.decision if self.decision.startswith("Q") else None,
            "score": round(top_score, 6),
            "alternatives": [
                {"qid": c.qid, "score": round(s, 6)}
                for c, s in self.ranked[1 : 1 + alternatives]
            ],
        }


@dataclass(frozen=True)
class LinkerConfig:
    w_match: float = 0.4
    w_prom: float = 0.2
    w_ctx: float = 0.3
    w_type: float = 0.1
    nil_threshold: float = 0.35
    relevant_types: frozenset[str] = frozenset()
    max_candidates: int = 50

    @classmethod
    def with_packaged_types(cls, **kw):
        return cls(relevant_types=frozenset(load_relevant_types()), **kw)


def load_relevant_types() -> list[str]:
    path = Path(__file__).parent / "data" / "linker_types.json"
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return [entry["qid"] for entry in doc["types"]]


# --- search clients -------------------------------------------------------------


class FixtureSearchClient:
    """Recorded search responses: one JSON file per query string.

    File name is the URL-quoted query; content is
    ``{"query": str, "candidates": [candidate records]}``.
    """

    def __init__(self, root):
        self.root = Path(root)

    def search(self, surface: str, limit=50) -> list[LinkCandidate]:
        name = urllib.parse.quote(surface, safe="") + ".json"
        path = self.root / name
        if not path.exists():
            raise ClientError(f"no fixture recorded for query {surface!r}")
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        return [LinkCandidate.from_record(rec) for rec in doc["candidates"][:limit]]


class WikidataSearchClient:
    """Live client against a wbsearchentities/wbgetentities endpoint."""

    def __init__(self, endpoint="https://www.wikidata.org/w/api.php", timeout=30.0):
        self.endpoint = endpoint
        self.timeout = timeout

    def _call(self, params):
        url = self.endpoint + "?" + urllib.parse.urlencode({**params, "format": "json"})
        req = urllib.request.Request(url, headers={"User-Agent": "cyents/0.1"})
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                return json.load(resp)
        except (OSError, ValueError) as exc:
            raise ClientError(f"{url}: {exc}") from exc

    def search(self, surface: str, limit=50) -> list[LinkCandidate]:
        found = self._call(
            {"action": "wbsearchentities", "search": surface, "language": "en", "limit": min(limit, 50)}
        ).get("search", [])
        qids = [hit["id"] for hit in found if _QID_RE.match(hit.get("id", ""))]
        if not qids:
            return []
        entities = self._call(
            {"action": "wbgetentities", "ids": "|".join(qids[:50]), "props": "labels|aliases|descriptions|claims|sitelinks", "languages": "en"}
        ).get("entities", {})
        out = []
        for qid in qids:
            ent = entities.get(qid)
            if not ent:
                continue
            claims = ent.get("claims", {})
            types = []
            for prop in ("P31", "P279"):
                for claim in claims.get(prop, []):
                    value = claim.get("mainsnak", {}).get("datavalue", {}).get("value", {})
                    if isinstance(value, dict) and "id" in value:
                        types.append(value["id"])
            out.append(
                LinkCandidate(
                    qid=qid,
                    label=ent.get("labels", {}).get("en", {}).get("value", ""),
                    aliases=tuple(a["value"] for a in ent.get("aliases", {}).get("en", [])),
                    description=ent.get("descriptions", {}).get("en", {}).get("value", ""),
                    types=tuple(types),
                    prominence=len(ent.get("sitelinks", {})),
                )
            )
        return out


def search_candidates(surface: str, client, limit=50) -> list[LinkCandidate]:
    """Up to ``limit`` hydrated candidates for a mention surface."""
    if not surface.strip():
        raise ValueError("empty mention surface")
    return list(client.search(surface, limit=limit))


# --- ranking ---------------------------------------------------------------------

_WORD_RE = re.compile(r"\w+")


def _tokens(text):
    return _WORD_RE.findall(text.casefold())


def _lcsubstring(a: str, b: str) -> int:
    """Length of the longest common contiguous substring."""
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    best = 0
    for i in range(1, len(a) + 1):
        cur = [0] * (len(b) + 1)
        for j in range(1, len(b) + 1):
            if a[i - 1] == b[j - 1]:
                cur[j] = prev[j - 1] + 1
                best = max(best, cur[j])
        prev = cur
    return best


def string_match(surface: str, candidate: LinkCandidate) -> float:
    s = surface.casefold().strip()
    if s == candidate.label.casefold().strip():
        return 1.0
    if any(s == a.casefold().strip() for a in candidate.aliases):
        return 0.8
    longest = max(len(s), len(candidate.label.casefold().strip()), 1)
    return _lcsubstring(s, candidate.label.casefold()) / longest


def _tfidf_vectors(docs: list[list[str]]):
    n = len(docs)
    df = {}
    for toks in docs:
        for t in set(toks):
            df[t] = df.get(t, 0) + 1
    idf = {t: math.log((1 + n) / (1 + d)) + 1.0 for t, d in df.items()}
    vecs = []
    for toks in docs:
        tf = {}
        for t in toks:
            tf[t] = tf.get(t, 0) + 1
        vecs.append({t: c * idf[t] for t, c in tf.items()})
    return vecs


def _cosine(a: dict, b: dict) -> float:
    if not a or not b:
        return 0.0
    dot = sum(v * b[t] for t, v in a.items() if t in b)
    na = math.sqrt(sum(v * v for v in a.values()))
    nb = math.sqrt(sum(v * v for v in b.values()))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return dot / (na * nb)


def score_components(surface, context_text, candidate, candidates, relevant_types):
    """The four raw features for one candidate; exposed for oracle tests."""
    max_prom = max((c.prominence for c in candidates), default=0)
    prom = (
        math.log1p(candidate.prominence) / math.log1p(max_prom) if max_prom > 0 else 0.0
    )
    docs = [_tokens(context_text)] + [
        _tokens(c.description + " " + c.abstract_first_sentence) for c in candidates
    ]
    vecs = _tfidf_vectors(docs)
    ctx = _cosine(vecs[0], vecs[1 + candidates.index(candidate)])
    typ = 1.0 if set(candidate.types) & set(relevant_types) else 0.0
    return {
        "string_match": string_match(surface, candidate),
        "prominence": prom,
        "context": ctx,
        "type_match": typ,
    }


def rank(surface, context_text, candidates, config: LinkerConfig, mention=None) -> LinkResult:
    """Score and order candidates; decide a Q-id or NIL."""
    candidates = list(candidates)
    mention = mention or Mention(0, max(1, len(surface)), "Threat_Actor", provenance="model")
    if not candidates:
        return LinkResult(mention=mention, ranked=(), decision=NIL)

    max_prom = max(c.prominence for c in candidates)
    prom_denom = math.log1p(max_prom) if max_prom > 0 else 0.0
    docs = [_tokens(context_text)] + [
        _tokens(c.description + " " + c.abstract_first_sentence) for c in candidates
    ]
    vecs = _tfidf_vectors(docs)

    scored = []
    for i, cand in enumerate(candidates):
        prom = math.log1p(cand.prominence) / prom_denom if prom_denom else 0.0
        ctx = _cosine(vecs[0], vecs[1 + i])
        typ = 1.0 if set(cand.types) & set(config.relevant_types) else 0.0
        score = (
            config.w_match * string_match(surface, cand)
            + config.w_prom * prom
            + config.w_ctx * ctx
            + config.w_type * typ
        )
        scored.append((cand, score))
    scored.sort(key=lambda t: (-t[1], int(t[0].qid[1:])))
    top_cand, top_score = scored[0]
    decision = top_cand.qid if top_score >= config.nil_threshold else NIL
    return LinkResult(mention=mention, ranked=tuple(scored), decision=decision)


def link_document(doc: Document, mentions, client, config: LinkerConfig):
    """Link every linkable mention; failures are recorded, not raised.

    Context is the containing sentence plus one sentence either side.
    Returns (results, errors).
    """
    results = []
    errors = []
    for m in sorted(mentions):
        if m.label not in LINKABLE_TYPES:
            results.append(LinkResult(mention=m, ranked=(), decision=NOT_LINKABLE))
            continue
        surface = doc.text[m.start : m.end]
        context = _context_for(doc, m)
        try:
            candidates = search_candidates(surface, client, limit=config.max_candidates)
        except ClientError as exc:
            errors.append((m, str(exc)))
            continue
        results.append(rank(surface, context, candidates, config, mention=m))
    return results, errors


def _context_for(doc: Document, m: Mention) -> str:
    if not doc.sentences:
        return doc.text
    idx = 0
    for i, (s, e) in enumerate(doc.sentences):
        if s <= m.start < e or (m.start >= s and m.end <= e):
            idx = i
            break
        if m.start >= e:
            idx = i
    lo = max(0, idx - 1)
    hi = min(len(doc.sentences), idx + 2)
    return doc.text[doc.sentences[lo][0] : doc.sentences[hi - 1][1]]
