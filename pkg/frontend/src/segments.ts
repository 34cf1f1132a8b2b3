/**
 * Pure text segmentation for rendering: cut the document into plain and
 * highlighted pieces along span boundaries, in code points. The DOM layer
 * turns each piece into a text node or a <mark>, so the concatenated text
 * content always equals the canonical document text.
 */

import { sliceCodePoints } from "./offsets.js";
import type { SpanRecord } from "./types.js";
import type { SpanStatus } from "./state.js";

export interface Segment {
  start: number;
  end: number;
  text: string;
  spanIndex: number | null;
  status?: SpanStatus;
  label?: string;
}

export function segmentText(
  text: string,
  textLength: number,
  spans: { span: SpanRecord; status: SpanStatus; index: number }[],
): Segment[] {
  const ordered = [...spans].sort((a, b) => a.span.start - b.span.start);
  const segments: Segment[] = [];
  let cursor = 0;
  for (const { span, status, index } of ordered) {
    if (span.start > cursor) {
      segments.push({
        start: cursor,
        end: span.start,
        text: sliceCodePoints(text, cursor, span.start),
        spanIndex: null,
      });
    }
    segments.push({
      start: span.start,
      end: span.end,
      text: sliceCodePoints(text, span.start, span.end),
      spanIndex: index,
      status,
      label: span.label,
    });
    cursor = span.end;
  }
  if (cursor < textLength) {
    segments.push({
      start: cursor,
      end: textLength,
      text: sliceCodePoints(text, cursor, textLength),
      spanIndex: null,
    });
  }
  return segments;
}

/** Stable highlight hue per label so colors survive schema reordering. */
export function labelHue(label: string): number {
  let h = 2166136261;
  for (let i = 0; i < label.length; i++) {
    h = (h ^ label.charCodeAt(i)) >>> 0;
    h = (h * 16777619) >>> 0;
  }
  return h % 360;
}
