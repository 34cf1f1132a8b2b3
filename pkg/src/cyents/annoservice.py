"""HTTP/JSON service behind the annotation UI.

A single-process WSGI app over file-backed state: the corpus store is
read-only, each annotator's submissions live in ``<annotations>/<id>.jsonl``
(the same JSONL the rest of the toolkit reads), and a submission is written
to disk before the request is acknowledged, so a restart loses nothing.
Completion state is derived from the stored sets rather than tracked
separately: a document is complete for an annotator once a line for it
exists, even with zero spans.

Endpoints (all JSON)::

    GET  /api/schema                    active schema export
    GET  /api/tasks/next?annotator=ID   next task + rule pre-annotations
    GET  /api/docs/<doc_id>             stored document record
    POST /api/annotations               {"doc_id", "annotator", "spans": [...]}
    GET  /api/iaa?group=G               live agreement for a group

Annotators authenticate with an ``X-Annotator-Token`` header checked against
the annotator config; requests for annotator A must carry A's token.  Static
files (the browser UI bundle) are served for any non-/api path.
"""

from __future__ import annotations

import json
import logging
import mimetypes
import threading
from dataclasses import dataclass, field
from pathlib import Path
from wsgiref.simple_server import WSGIServer, make_server

from . import rules, schema as schema_mod
from .annotations import (
    AnnotationError,
    AnnotationSet,
    Mention,
    agreement,
    check_mentions,
    load_jsonl,
    save_jsonl,
)
from .ingest import CorpusStore

log = logging.getLogger(__name__)


class UnknownAnnotator(KeyError):
    pass


class InsufficientData(ValueError):
    pass


@dataclass
class AnnotatorConfig:
    annotator_id: str
    group: str
    token: str = ""


def load_annotator_config(path) -> dict[str, AnnotatorConfig]:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    out = {}
    for aid, rec in doc["annotators"].items():
        out[aid] = AnnotatorConfig(annotator_id=aid, group=rec["group"], token=rec.get("token", ""))
    return out


@dataclass
class AnnotationService:
    store: CorpusStore
    annotations_dir: Path
    annotators: dict[str, AnnotatorConfig]
    schema_version: str = "round2"
    gazetteers: list = field(default_factory=list)

    def __post_init__(self):
        self.annotations_dir = Path(self.annotations_dir)
        self.annotations_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._doc_ids = self.store.doc_ids()
        self._lengths = self.store.doc_lengths()
        self._sets: dict[str, AnnotationSet] = {}
        for aid in self.annotators:
            path = self._path_for(aid)
            if path.exists():
                self._sets[aid] = load_jsonl(
                    path, schema=self.schema_version, doc_lengths=self._lengths
                )
            else:
                self._sets[aid] = AnnotationSet(aid)

    def _path_for(self, annotator_id):
        return self.annotations_dir / f"{annotator_id}.jsonl"

    # -- task queue ------------------------------------------------------

    def assignment(self, annotator_id) -> list[str]:
        """Every group member sees the same ordered document list."""
        if annotator_id not in self.annotators:
            raise UnknownAnnotator(annotator_id)
        return list(self._doc_ids)

    def completed(self, annotator_id) -> set[str]:
        if annotator_id not in self.annotators:
            raise UnknownAnnotator(annotator_id)
        return set(self._sets[annotator_id].entries)

    def next_task(self, annotator_id):
        """Next uncompleted document with rule pre-annotations, or None."""
        done = self.completed(annotator_id)
        for doc_id in self.assignment(annotator_id):
            if doc_id not in done:
                doc = self.store.load(doc_id)
                pre = rules.prepopulate(doc, self.gazetteers)
                return doc, pre.entries.get(doc_id, [])
        return None

    def submit(self, annotator_id, doc_id, mentions):
        """Validate, persist (write-ahead), then mark complete."""
        if annotator_id not in self.annotators:
            raise UnknownAnnotator(annotator_id)
        if doc_id not in self._lengths:
            raise KeyError(f"unknown document {doc_id!r}")
        check_mentions(mentions, text_length=self._lengths[doc_id], schema=self.schema_version)
        with self._lock:
            aset = self._sets[annotator_id]
            if doc_id in aset.entries:
                log.info("annotator %s resubmitted %s: %d spans replace %d",
                         annotator_id, doc_id, len(mentions), len(aset.entries[doc_id]))
            aset.add(doc_id, mentions)
            tmp = self._path_for(annotator_id).with_suffix(".jsonl.tmp")
            save_jsonl(aset, tmp)
            tmp.replace(self._path_for(annotator_id))
        return {"ok": True, "doc_id": doc_id, "completed": len(aset.entries)}

    def iaa_status(self, group_id):
        members = sorted(a.annotator_id for a in self.annotators.values() if a.group == group_id)
        if len(members) < 2:
            raise InsufficientData(f"group {group_id!r} needs two annotators")
        a_id, b_id = members[0], members[1]
        common = self.completed(a_id) & self.completed(b_id)
        if not common:
            raise InsufficientData(f"group {group_id!r} has no commonly completed documents")
        sa = AnnotationSet(a_id, {d: self._sets[a_id].entries[d] for d in common})
        sb = AnnotationSet(b_id, {d: self._sets[b_id].entries[d] for d in common})
        return agreement(sa, sb)


# --- WSGI layer ---------------------------------------------------------------


def _json_response(start_response, status, payload):
    body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
    start_response(status, [
        ("Content-Type", "application/json; charset=utf-8"),
        ("Content-Length", str(len(body))),
    ])
    return [body]


def make_app(service: AnnotationService, static_dir=None):
    """WSGI application wrapping an :class:`AnnotationService`."""

    schema_doc = schema_mod.get_version(service.schema_version).export()
    require_tokens = any(a.token for a in service.annotators.values())

    def check_auth(environ, annotator_id):
        if not require_tokens:
            return None
        token = environ.get("HTTP_X_ANNOTATOR_TOKEN", "")
        cfg = service.annotators.get(annotator_id)
        if cfg is None or not token or token != cfg.token:
            return "invalid or missing X-Annotator-Token"
        return None

    def app(environ, start_response):
        method = environ["REQUEST_METHOD"]
        path = environ.get("PATH_INFO", "/")
        query = dict(
            part.split("=", 1)
            for part in environ.get("QUERY_STRING", "").split("&")
            if "=" in part
        )

        try:
            if path == "/api/schema" and method == "GET":
                return _json_response(start_response, "200 OK", schema_doc)

            if path == "/api/tasks/next" and method == "GET":
                annotator = query.get("annotator", "")
                denied = check_auth(environ, annotator)
                if denied:
                    return _json_response(start_response, "401 Unauthorized", {"error": denied})
                task = service.next_task(annotator)
                if task is None:
                    return _json_response(start_response, "200 OK", {"done": True})
                doc, pre = task
                return _json_response(
                    start_response,
                    "200 OK",
                    {
                        "done": False,
                        "doc": doc.to_record(),
                        "pre_annotations": [m.to_record() for m in pre],
                    },
                )

            if path.startswith("/api/docs/") and method == "GET":
                doc_id = path[len("/api/docs/") :]
                if doc_id not in service._lengths:
                    return _json_response(start_response, "404 Not Found", {"error": f"unknown document {doc_id!r}"})
                return _json_response(start_response, "200 OK", service.store.load(doc_id).to_record())

            if path == "/api/annotations" and method == "POST":
                try:
                    size = int(environ.get("CONTENT_LENGTH") or 0)
                except ValueError:
                    size = 0
                try:
                    payload = json.loads(environ["wsgi.input"].read(size).decode("utf-8"))
                    annotator = payload["annotator"]
                    doc_id = payload["doc_id"]
                    spans = [Mention.from_record(s) for s in payload["spans"]]
                except (KeyError, TypeError, ValueError) as exc:
                    return _json_response(start_response, "400 Bad Request", {"error": f"bad payload: {exc}"})
                denied = check_auth(environ, annotator)
                if denied:
                    return _json_response(start_response, "401 Unauthorized", {"error": denied})
                try:
                    ack = service.submit(annotator, doc_id, spans)
                except AnnotationError as exc:
                    return _json_response(start_response, "400 Bad Request", {"error": str(exc)})
                except UnknownAnnotator as exc:
                    return _json_response(start_response, "404 Not Found", {"error": f"unknown annotator {exc.args[0]!r}"})
                except KeyError as exc:
                    return _json_response(start_response, "404 Not Found", {"error": str(exc)})
                return _json_response(start_response, "200 OK", ack)

            if path == "/api/iaa" and method == "GET":
                group = query.get("group", "")
                try:
                    report = service.iaa_status(group)
                except InsufficientData as exc:
                    return _json_response(start_response, "409 Conflict", {"error": str(exc)})
                return _json_response(start_response, "200 OK", report.to_record())

            if path.startswith("/api/"):
                return _json_response(start_response, "404 Not Found", {"error": f"no such endpoint {path}"})

            return _serve_static(start_response, static_dir, path)
        except UnknownAnnotator as exc:
            return _json_response(start_response, "404 Not Found", {"error": f"unknown annotator {exc.args[0]!r}"})
        except Exception as exc:  # last-resort guard so one request can't kill the app
            log.exception("unhandled error for %s %s", method, path)
            return _json_response(start_response, "500 Internal Server Error", {"error": str(exc)})

    return app


def _serve_static(start_response, static_dir, path):
    if static_dir is None:
        return _json_response(start_response, "404 Not Found", {"error": "no UI bundle configured"})
    name = path.lstrip("/") or "index.html"
    target = (Path(static_dir) / name).resolve()
    root = Path(static_dir).resolve()
    if root not in target.parents and target != root:
        return _json_response(start_response, "404 Not Found", {"error": "not found"})
    if target.is_dir():
        target = target / "index.html"
    if not target.is_file():
        return _json_response(start_response, "404 Not Found", {"error": "not found"})
    ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
    body = target.read_bytes()
    start_response("200 OK", [("Content-Type", ctype), ("Content-Length", str(len(body)))])
    return [body]


class _ThreadingWSGIServer(WSGIServer):
    daemon_threads = True

    def process_request(self, request, client_address):
        t = threading.Thread(target=self._work, args=(request, client_address), daemon=True)
        t.start()

    def _work(self, request, client_address):
        try:
            self.finish_request(request, client_address)
        except Exception:
            self.handle_error(request, client_address)
        finally:
            self.shutdown_request(request)


def serve(service: AnnotationService, port=8642, static_dir=None, host="127.0.0.1"):
    """Run the HTTP server until interrupted."""
    app = make_app(service, static_dir=static_dir)
    with make_server(host, port, app, server_class=_ThreadingWSGIServer) as httpd:
        log.info("annotation service on http://%s:%d/", host, port)
        httpd.serve_forever()
