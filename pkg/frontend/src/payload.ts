/**
 * Canonical submission serialization.
 *
 * The annotation store's JSONL span schema is the contract:
 * {"start":int,"end":int,"label":str,"provenance":str}. Serialization is
 * hand-assembled in that key order with no extra whitespace, so a payload
 * is byte-identical to the schema regardless of engine quirks.
 */

import type { SpanRecord } from "./types.js";

export function spanToJson(span: SpanRecord): string {
  const parts = [
    `"start":${span.start}`,
    `"end":${span.end}`,
    `"label":${JSON.stringify(span.label)}`,
    `"provenance":${JSON.stringify(span.provenance)}`,
  ];
  if (span.score !== undefined) {
    parts.push(`"score":${JSON.stringify(span.score)}`);
  }
  return `{${parts.join(",")}}`;
}

export function submissionBody(docId: string, annotator: string, spans: SpanRecord[]): string {
  const items = spans.map(spanToJson).join(",");
  return `{"doc_id":${JSON.stringify(docId)},"annotator":${JSON.stringify(annotator)},"spans":[${items}]}`;
}
