"""``cyents`` command line: the pipeline end to end.

Subcommands mirror the pipeline stages: ingest a fixture or live feed set,
export the schema, pre-annotate with rules, compute agreement, merge
annotator sets, train and apply the tagger, link mentions to Wikidata, and
score predictions.  ``serve`` runs the annotation service.

Exit codes: 0 success, 1 domain errors (bad data, failed validation),
2 usage errors.  A JSON config file can pre-set any flag value; explicit
flags win.  The live Wikidata endpoint can also come from the
``CYENTS_WIKIDATA_ENDPOINT`` environment variable.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import annotations as anns
from . import evaluation, ingest, linker, rules, schema as schema_mod
from .ner import TrainConfig, load_model, predict, save_model, train
from .textcorpus import TilingParams

log = logging.getLogger(__name__)

_PACKAGED_GAZETTEERS = Path(__file__).parent / "data" / "gazetteers"


class CliError(Exception):
    pass


def _load_config(path):
    if not path:
        return {}
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _store(args):
    return ingest.CorpusStore(args.store)


def _gazetteers(args):
    gaz_dir = getattr(args, "gazetteers", None) or _PACKAGED_GAZETTEERS
    return rules.load_gazetteer_dir(gaz_dir)


def _load_set(path, store=None, schema="round2"):
    lengths = store.doc_lengths() if store else None
    return anns.load_jsonl(path, schema=schema, doc_lengths=lengths)


# --- subcommand handlers ---------------------------------------------------


def cmd_schema(args):
    version = schema_mod.get_version(args.version)
    print(version.to_json())
    return 0


def cmd_ingest(args):
    store = _store(args)
    feeds = ingest.read_feed_list(args.feeds)
    if args.fixture:
        http = ingest.FixtureHttpClient(args.fixture)
    else:
        http = ingest.LiveHttpClient(delay=args.delay)
    result = ingest.sync(store, feeds, http)
    print(f"added={result.added} skipped={result.skipped} errors={len(result.errors)}")
    for what, why in result.errors:
        print(f"  error: {what}: {why}", file=sys.stderr)
    return 0


def cmd_prepopulate(args):
    store = _store(args)
    gazetteers = _gazetteers(args)
    merged = anns.AnnotationSet(args.annotator)
    for doc in store.documents():
        aset = rules.prepopulate(doc, gazetteers)
        merged.add(doc.doc_id, aset.entries.get(doc.doc_id, []))
    anns.save_jsonl(merged, args.out)
    print(f"pre-annotated {len(merged.doc_ids())} documents, {len(merged)} mentions -> {args.out}")
    return 0


def cmd_iaa(args):
    store = _store(args) if args.store else None
    set_a = _load_set(args.a, store)
    set_b = _load_set(args.b, store)
    report = anns.agreement(set_a, set_b)
    if args.json:
        print(json.dumps(report.to_record(), indent=2))
    else:
        print(f"pair: {report.pair[0]} vs {report.pair[1]}")
        print(f"annotations: {report.count_a} vs {report.count_b} (max {report.total_max})")
        print(f"accepted:    {report.accepted}")
        print(f"acceptance:  {report.acceptance_rate:.4f}")
        print(f"pairwise F1: {report.pairwise_f1:.4f}")
        for t, (ca, cb, g) in report.per_type_agreement.items():
            print(f"  {t}: {ca} vs {cb}, agreed {g}")
    return 0


def cmd_merge(args):
    store = ingest.CorpusStore(args.store) if args.store else None
    sets = [_load_set(p, store) for p in args.group]
    merged = anns.merge_group(sets)
    anns.save_jsonl(merged, args.out)
    print(f"accepted {len(merged)} of {min(len(s) for s in sets)} (smallest set) -> {args.out}")
    return 0


def cmd_train(args):
    store = _store(args)
    cfg_doc = _load_config(args.config)
    config = TrainConfig(
        epochs=cfg_doc.get("epochs", 20),
        learning_rate=cfg_doc.get("learning_rate", 0.01),
        batch_size=cfg_doc.get("batch_size", 8),
        rng_seed=cfg_doc.get("rng_seed", 0),
        dropout=cfg_doc.get("dropout", 0.2),
    )
    gold = _load_set(args.data, store)
    docs = [d for d in store.documents() if d.doc_id in gold.entries]
    model = train(
        docs,
        gold,
        config,
        schema_version=cfg_doc.get("schema_version", "round2"),
        rows=cfg_doc.get("rows"),
        dim=cfg_doc.get("dim"),
    )
    save_model(model, args.out)
    curve = model.training_meta["loss_curve"]
    print(f"trained on {len(docs)} docs, loss {curve[0]:.4f} -> {curve[-1]:.4f}, model -> {args.out}")
    return 0


def cmd_extract(args):
    store = _store(args)
    model = load_model(args.model)
    out = anns.AnnotationSet("model")
    n = 0
    for doc in store.documents():
        mentions = predict(doc, model)
        out.add(doc.doc_id, mentions)
        n += len(mentions)
    anns.save_jsonl(out, args.out)
    print(f"extracted {n} mentions over {len(out.doc_ids())} documents -> {args.out}")
    return 0


def cmd_link(args):
    store = _store(args)
    pred = _load_set(args.model_output, store)
    if args.fixture:
        client = linker.FixtureSearchClient(args.fixture)
    else:
        endpoint = args.endpoint or os.environ.get("CYENTS_WIKIDATA_ENDPOINT")
        if not endpoint:
            raise CliError("need --fixture, --endpoint, or CYENTS_WIKIDATA_ENDPOINT")
        client = linker.WikidataSearchClient(endpoint)
    config = linker.LinkerConfig.with_packaged_types(nil_threshold=args.nil_threshold)
    n_linked = 0
    n_errors = 0
    with open(args.out, "w", encoding="utf-8") as fh:
        for doc_id in pred.doc_ids():
            doc = store.load(doc_id)
            mentions = pred.entries[doc_id]
            results, errors = linker.link_document(doc, mentions, client, config)
            n_errors += len(errors)
            by_mention = {r.mention: r for r in results}
            spans = []
            for m in mentions:
                rec = m.to_record()
                r = by_mention.get(m)
                if r is not None:
                    rec["link"] = r.to_link_record()
                    if r.decision.startswith("Q"):
                        n_linked += 1
                spans.append(rec)
            fh.write(json.dumps({"doc_id": doc_id, "annotator": pred.annotator_id, "spans": spans},
                                ensure_ascii=False) + "\n")
    print(f"linked {n_linked} mentions ({n_errors} client errors) -> {args.out}")
    return 0


def cmd_eval(args):
    store = _store(args) if args.store else None
    gold = _load_set(args.gold, store)
    pred = _load_set(args.pred, store)
    rep = evaluation.report(gold, pred)
    print(rep.to_json() if args.json else rep.to_table())
    return 0


def cmd_serve(args):
    from . import annoservice

    store = _store(args)
    annotators = annoservice.load_annotator_config(args.annotators)
    service = annoservice.AnnotationService(
        store=store,
        annotations_dir=Path(args.annotations),
        annotators=annotators,
        schema_version=args.version,
        gazetteers=_gazetteers(args),
    )
    annoservice.serve(service, port=args.port, static_dir=args.ui, host=args.host)
    return 0


# --- parser ------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="cyents", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("schema", help="schema inspection")
    schema_sub = p.add_subparsers(dest="schema_command", required=True)
    pe = schema_sub.add_parser("export", help="print the schema as JSON")
    pe.add_argument("--version", default="round2", choices=["round1", "round2"])
    pe.set_defaults(func=cmd_schema)

    p = sub.add_parser("ingest", help="fetch feeds and grow the corpus store")
    p.add_argument("--feeds", required=True, help="file with one feed URL per line")
    p.add_argument("--store", required=True)
    p.add_argument("--fixture", help="directory of recorded HTTP responses")
    p.add_argument("--delay", type=float, default=1.0, help="live fetch politeness delay")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("prepopulate", help="rule-based pre-annotation of the whole store")
    p.add_argument("--store", required=True)
    p.add_argument("--gazetteers", help="directory of term<TAB>type .tsv files")
    p.add_argument("--out", required=True)
    p.add_argument("--annotator", default="rules", help="annotator id on the output set")
    p.set_defaults(func=cmd_prepopulate)

    p = sub.add_parser("iaa", help="inter-annotator agreement between two sets")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--store", help="corpus store for span bounds checking")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_iaa)

    p = sub.add_parser("merge", help="intersection-merge annotator sets into gold")
    p.add_argument("--group", nargs="+", required=True, help="two or more annotation files")
    p.add_argument("--store")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("train", help="train the statistical tagger")
    p.add_argument("--data", required=True, help="gold annotation JSONL")
    p.add_argument("--store", required=True)
    p.add_argument("--config", help="JSON training config")
    p.add_argument("--out", required=True, help="model file path")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("extract", help="apply a trained model to the store")
    p.add_argument("--model", required=True)
    p.add_argument("--store", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("link", help="link mentions to Wikidata items")
    p.add_argument("--model-output", required=True, dest="model_output")
    p.add_argument("--store", required=True)
    p.add_argument("--fixture", help="directory of recorded search responses")
    p.add_argument("--endpoint", help="live Wikidata API endpoint")
    p.add_argument("--nil-threshold", type=float, default=0.35)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_link)

    p = sub.add_parser("eval", help="exact-match span evaluation")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--store")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("serve", help="run the annotation service")
    p.add_argument("--store", required=True)
    p.add_argument("--annotations", required=True)
    p.add_argument("--annotators", required=True, help="JSON annotator/group/token config")
    p.add_argument("--gazetteers")
    p.add_argument("--port", type=int, default=8642)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--ui", help="static UI bundle directory")
    p.add_argument("--version", default="round2", choices=["round1", "round2"])
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 2
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (CliError, OSError, ValueError, KeyError) as exc:
        print(f"cyents: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
