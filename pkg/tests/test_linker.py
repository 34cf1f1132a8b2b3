import math

import pytest

from cyents.annotations import Mention
from cyents.linker import (
    NIL,
    NOT_LINKABLE,
    ClientError,
    FixtureSearchClient,
    LinkCandidate,
    LinkerConfig,
    link_document,
    rank,
    search_candidates,
    string_match,
)
from cyents.textcorpus import build_document

CONTEXT = "Lazarus was behind the WannaCry attack"


@pytest.fixture
def client(fixtures_dir):
    return FixtureSearchClient(fixtures_dir / "lazarus")


@pytest.fixture
def config():
    return LinkerConfig.with_packaged_types()


# --- candidate search --------------------------------------------------------


def test_search_fixture_returns_hydrated_candidates(client):
    cands = search_candidates("Lazarus", client)
    assert len(cands) >= 20
    by_qid = {c.qid: c for c in cands}
    assert "Q19284445" in by_qid
    group = by_qid["Q19284445"]
    assert group.types and group.prominence > 0 and group.description


def test_search_empty_result_is_not_an_error(client):
    assert search_candidates("zzqqxx-nonexistent", client) == []


def test_search_missing_fixture_raises(client):
    with pytest.raises(ClientError):
        search_candidates("UnrecordedQuery", client)


def test_search_rejects_empty_surface(client):
    with pytest.raises(ValueError):
        search_candidates("   ", client)


def test_candidate_validation():
    with pytest.raises(ValueError):
        LinkCandidate(qid="X123", label="bad")
    with pytest.raises(ValueError):
        LinkCandidate(qid="Q1", label="bad", prominence=-1)


# --- ranking -------------------------------------------------------------------


def test_lazarus_context_ranks_the_hacker_group_first(client, config):
    cands = search_candidates("Lazarus", client)
    result = rank("Lazarus", CONTEXT, cands, config)
    assert result.ranked[0][0].qid == "Q19284445"
    assert result.decision == "Q19284445"


def test_ranking_deterministic(client, config):
    cands = search_candidates("Lazarus", client)
    r1 = rank("Lazarus", CONTEXT, cands, config)
    r2 = rank("Lazarus", CONTEXT, list(cands), config)
    assert [(c.qid, s) for c, s in r1.ranked] == [(c.qid, s) for c, s in r2.ranked]


def test_tie_break_ascending_qid(config):
    twins = [
        LinkCandidate(qid="Q900", label="Same", description="same thing", prominence=5),
        LinkCandidate(qid="Q89", label="Same", description="same thing", prominence=5),
    ]
    result = rank("Same", "context words", twins, config)
    assert [c.qid for c, _ in result.ranked] == ["Q89", "Q900"]
    assert result.ranked[0][1] == result.ranked[1][1]


def test_single_candidate_score_matches_independent_oracle(config):
    cand = LinkCandidate(
        qid="Q77",
        label="WannaCry",
        aliases=("WannaCrypt",),
        description="ransomware cryptoworm attack",
        types=("Q14001",),
        prominence=55,
        abstract_first_sentence="The WannaCry ransomware attack spread worldwide.",
    )
    surface = "WannaCry"
    context = "the WannaCry attack hit hospitals"
    result = rank(surface, context, [cand], config)

    # oracle: recompute the linear formula from scratch
    s_match = 1.0  # exact label
    s_prom = math.log1p(55) / math.log1p(55)

    def toks(s):
        import re
        return re.findall(r"\w+", s.casefold())

    docs = [toks(context), toks(cand.description + " " + cand.abstract_first_sentence)]
    n = len(docs)
    df = {}
    for d in docs:
        for t in set(d):
            df[t] = df.get(t, 0) + 1
    idf = {t: math.log((1 + n) / (1 + c)) + 1.0 for t, c in df.items()}
    vecs = []
    for d in docs:
        tf = {}
        for t in d:
            tf[t] = tf.get(t, 0) + 1
        vecs.append({t: c * idf[t] for t, c in tf.items()})
    dot = sum(v * vecs[1].get(t, 0.0) for t, v in vecs[0].items())
    na = math.sqrt(sum(v * v for v in vecs[0].values()))
    nb = math.sqrt(sum(v * v for v in vecs[1].values()))
    s_ctx = dot / (na * nb)
    s_type = 1.0  # Q14001 is in the packaged relevant set
    expected = 0.4 * s_match + 0.2 * s_prom + 0.3 * s_ctx + 0.1 * s_type
    assert result.ranked[0][1] == pytest.approx(expected, abs=1e-9)


def test_prominence_monotone_all_else_fixed(client, config):
    cands = search_candidates("Lazarus", client)
    base = rank("Lazarus", CONTEXT, cands, config)
    base_score = dict((c.qid, s) for c, s in base.ranked)["Q19284445"]
    bumped = [
        LinkCandidate(
            qid=c.qid, label=c.label, aliases=c.aliases, description=c.description,
            types=c.types, prominence=(c.prominence + 30 if c.qid == "Q19284445" else c.prominence),
            abstract_first_sentence=c.abstract_first_sentence,
        )
        for c in cands
    ]
    bumped_score = dict((c.qid, s) for c, s in rank("Lazarus", CONTEXT, bumped, config).ranked)["Q19284445"]
    assert bumped_score > base_score


def test_string_match_tiers():
    cand = LinkCandidate(qid="Q1", label="Lazarus Group", aliases=("Lazarus", "HIDDEN COBRA"))
    assert string_match("Lazarus Group", cand) == 1.0
    assert string_match("lazarus group", cand) == 1.0
    assert string_match("Lazarus", cand) == 0.8
    partial = string_match("Lazar", cand)
    assert 0.0 < partial < 0.8  # lcs("lazar") / len("lazarus group")
    assert partial == pytest.approx(5 / 13)


def test_match_only_weights_pick_max_string_match(client):
    cands = search_candidates("Lazarus", client)
    cfg = LinkerConfig(w_match=1.0, w_prom=0.0, w_ctx=0.0, w_type=0.0, nil_threshold=0.0)
    result = rank("Lazarus", CONTEXT, cands, cfg)
    top_match = max(string_match("Lazarus", c) for c in cands)
    assert string_match("Lazarus", result.ranked[0][0]) == top_match


def test_low_scores_decide_nil(config):
    cand = LinkCandidate(qid="Q5001", label="Entirely Different", description="nothing shared")
    result = rank("Lazarus", CONTEXT, [cand], config)
    assert result.decision == NIL
    assert result.to_link_record()["qid"] is None


# --- document-level linking ---------------------------------------------------


def make_doc():
    return build_document("d1", "Intrusions continued all week. Lazarus was behind the WannaCry attack. The ransomware spread worldwide within hours.")


def test_link_document_links_threat_actor(client, config):
    doc = make_doc()
    mentions = [Mention(31, 38, "Threat_Actor", provenance="model", score=0.9)]
    results, errors = link_document(doc, mentions, client, config)
    assert errors == []
    assert len(results) == 1
    assert results[0].decision == "Q19284445"


def test_link_document_skips_unlinkable_types(client, config):
    doc = build_document("d2", "Digest d41d8cd98f00b204e9800998ecf8427e repeated.")
    mentions = [Mention(7, 39, "Hash", provenance="rule")]
    results, errors = link_document(doc, mentions, client, config)
    assert results[0].decision == NOT_LINKABLE
    assert results[0].ranked == ()
    assert errors == []


class FlakyClient:
    def __init__(self, inner, fail_surface):
        self.inner = inner
        self.fail_surface = fail_surface

    def search(self, surface, limit=50):
        if surface == self.fail_surface:
            raise ClientError(f"boom on {surface}")
        return self.inner.search(surface, limit=limit)


def test_link_document_records_client_errors_and_continues(client, config):
    text = "Lazarus and Lazarus and Failme struck."
    doc = build_document("d3", text)
    mentions = [
        Mention(0, 7, "Threat_Actor", provenance="model"),
        Mention(12, 19, "Threat_Actor", provenance="model"),
        Mention(24, 30, "Threat_Actor", provenance="model"),
    ]
    flaky = FlakyClient(client, "Failme")
    results, errors = link_document(doc, mentions, flaky, config)
    assert len(results) == 2
    assert len(errors) == 1
    assert errors[0][0].start == 24
