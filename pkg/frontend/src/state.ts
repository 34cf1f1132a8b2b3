/**
 * Task state machine.
 *
 * A task starts with the server's rule pre-annotations, each pending until
 * the annotator accepts or rejects it. New spans come from text selections.
 * Submission is blocked while anything is still pending, and the submitted
 * set is the accepted pre-annotations (now human provenance: the annotator
 * vouched for them) plus the added spans, sorted and non-overlapping.
 *
 * All offsets here are code points against the canonical document text.
 */

import { codePointLength } from "./offsets.js";
import type { DocRecord, SpanRecord } from "./types.js";

export type SpanStatus = "pending" | "accepted" | "rejected" | "added";

export interface TrackedSpan {
  span: SpanRecord;
  status: SpanStatus;
}

export class OffsetError extends Error {}

export class TaskState {
  readonly doc: DocRecord;
  readonly textLength: number;
  readonly tracked: TrackedSpan[];

  constructor(doc: DocRecord, preAnnotations: SpanRecord[]) {
    this.doc = doc;
    this.textLength = codePointLength(doc.text);
    for (const span of preAnnotations) {
      if (!(0 <= span.start && span.start < span.end && span.end <= this.textLength)) {
        throw new OffsetError(
          `pre-annotation (${span.start},${span.end}) outside document of length ${this.textLength}`,
        );
      }
    }
    this.tracked = [...preAnnotations]
      .sort((a, b) => a.start - b.start || a.end - b.end)
      .map((span) => ({ span: { ...span }, status: "pending" as SpanStatus }));
  }

  pendingCount(): number {
    return this.tracked.filter((t) => t.status === "pending").length;
  }

  canSubmit(): boolean {
    return this.pendingCount() === 0;
  }

  accept(index: number): void {
    this.expectStatus(index, ["pending", "rejected"]);
    this.tracked[index].status = "accepted";
  }

  reject(index: number): void {
    this.expectStatus(index, ["pending", "accepted"]);
    this.tracked[index].status = "rejected";
  }

  acceptAll(): void {
    for (const t of this.tracked) if (t.status === "pending") t.status = "accepted";
  }

  rejectAll(): void {
    for (const t of this.tracked) if (t.status === "pending") t.status = "rejected";
  }

  /** Change a span's label; touching a pending span counts as accepting it. */
  retype(index: number, label: string): void {
    this.expectStatus(index, ["pending", "accepted", "added"]);
    this.tracked[index].span.label = label;
    if (this.tracked[index].status === "pending") {
      this.tracked[index].status = "accepted";
    }
  }

  /** Add a selection as a new span; overlap with a live span is an error. */
  addSpan(start: number, end: number, label: string): void {
    if (!(0 <= start && start < end && end <= this.textLength)) {
      throw new OffsetError(`selection (${start},${end}) outside document`);
    }
    for (const t of this.tracked) {
      if (t.status === "rejected") continue;
      if (start < t.span.end && t.span.start < end) {
        throw new OffsetError(
          `selection (${start},${end}) overlaps existing ${t.span.label} span (${t.span.start},${t.span.end})`,
        );
      }
    }
    this.tracked.push({
      span: { start, end, label, provenance: "human" },
      status: "added",
    });
    this.tracked.sort((a, b) => a.span.start - b.span.start || a.span.end - b.span.end);
  }

  removeAdded(index: number): void {
    this.expectStatus(index, ["added"]);
    this.tracked.splice(index, 1);
  }

  /** Spans visible as highlights: everything not rejected. */
  visible(): { span: SpanRecord; status: SpanStatus; index: number }[] {
    return this.tracked
      .map((t, index) => ({ span: t.span, status: t.status, index }))
      .filter((t) => t.status !== "rejected");
  }

  /**
   * The spans to submit. Pre-annotations the annotator accepted become
   * human provenance: acceptance is a human labeling decision.
   */
  submissionSpans(): SpanRecord[] {
    if (!this.canSubmit()) {
      throw new Error(`cannot submit: ${this.pendingCount()} pre-annotations unresolved`);
    }
    return this.tracked
      .filter((t) => t.status === "accepted" || t.status === "added")
      .map((t) => ({
        start: t.span.start,
        end: t.span.end,
        label: t.span.label,
        provenance: "human",
      }))
      .sort((a, b) => a.start - b.start || a.end - b.end);
  }

  private expectStatus(index: number, allowed: SpanStatus[]): void {
    const t = this.tracked[index];
    if (!t) throw new Error(`no span at index ${index}`);
    if (!allowed.includes(t.status)) {
      throw new Error(`span ${index} is ${t.status}, expected ${allowed.join("/")}`);
    }
  }
}
