/** DOM construction for the task view and the agreement panel. */

import { iaaView } from "./iaa.js";
import { sliceCodePoints } from "./offsets.js";
import { segmentText, labelHue } from "./segments.js";
import type { TaskState } from "./state.js";
import type { IaaReport, SchemaType } from "./types.js";

export interface TaskCallbacks {
  onAccept(index: number): void;
  onReject(index: number): void;
  onRemove(index: number): void;
  onRetype(index: number, label: string): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderText(container: HTMLElement, state: TaskState): void {
  container.textContent = "";
  const segments = segmentText(state.doc.text, state.textLength, state.visible());
  for (const segment of segments) {
    if (segment.spanIndex === null) {
      container.appendChild(document.createTextNode(segment.text));
    } else {
      // the label renders via CSS ::after from data-label so the container's
      // textContent stays exactly the canonical document text (selection
      // offsets depend on that)
      const mark = el("mark", `span-${segment.status}`);
      mark.dataset.index = String(segment.spanIndex);
      mark.dataset.label = segment.label!;
      mark.style.backgroundColor = `hsl(${labelHue(segment.label!)} 85% 82%)`;
      mark.appendChild(document.createTextNode(segment.text));
      container.appendChild(mark);
    }
  }
}

export function renderSpanList(
  container: HTMLElement,
  state: TaskState,
  callbacks: TaskCallbacks,
): void {
  container.textContent = "";
  state.tracked.forEach((t, index) => {
    const row = el("li", `span-row status-${t.status}`);
    const label = el("span", "row-label", t.span.label);
    label.style.backgroundColor = `hsl(${labelHue(t.span.label)} 85% 82%)`;
    row.appendChild(label);
    const surface = sliceCodePoints(state.doc.text, t.span.start, t.span.end);
    row.appendChild(el("span", "row-surface", JSON.stringify(surface)));
    row.appendChild(el("span", "row-extent", `(${t.span.start},${t.span.end})`));
    row.appendChild(el("span", "row-status", t.status));
    if (t.status === "pending" || t.status === "rejected") {
      const accept = el("button", "accept", "accept");
      accept.addEventListener("click", () => callbacks.onAccept(index));
      row.appendChild(accept);
    }
    if (t.status === "pending" || t.status === "accepted") {
      const reject = el("button", "reject", "reject");
      reject.addEventListener("click", () => callbacks.onReject(index));
      row.appendChild(reject);
    }
    if (t.status === "added") {
      const remove = el("button", "remove", "remove");
      remove.addEventListener("click", () => callbacks.onRemove(index));
      row.appendChild(remove);
    }
    container.appendChild(row);
  });
}

export function renderPalette(
  container: HTMLElement,
  types: SchemaType[],
  shortcuts: Map<string, string>,
  active: string,
  onPick: (label: string) => void,
): void {
  container.textContent = "";
  const keyOf = new Map<string, string>();
  for (const [key, label] of shortcuts) keyOf.set(label, key);
  for (const t of types) {
    const btn = el("button", `palette${t.name === active ? " active" : ""}`);
    btn.style.backgroundColor = `hsl(${labelHue(t.name)} 85% 82%)`;
    btn.title = t.description;
    const key = keyOf.get(t.name);
    btn.textContent = key ? `${t.name} [${key}]` : t.name;
    btn.addEventListener("click", () => onPick(t.name));
    container.appendChild(btn);
  }
}

/** Keyboard shortcuts: 1-9 then a-z over the palette order. */
export function assignShortcuts(types: SchemaType[]): Map<string, string> {
  const keys = "123456789abcdefghijklmnopqrstuvwxyz";
  const map = new Map<string, string>();
  types.slice(0, keys.length).forEach((t, i) => map.set(keys[i], t.name));
  return map;
}

export function renderIaa(container: HTMLElement, report: IaaReport | null, problem?: string): void {
  container.textContent = "";
  if (!report) {
    container.appendChild(el("p", "iaa-placeholder", problem ?? "No agreement data yet."));
    return;
  }
  const view = iaaView(report);
  container.appendChild(el("p", "iaa-headline", view.headline));
  container.appendChild(el("p", "iaa-rates", `acceptance ${view.acceptance} · pairwise F1 ${view.pairwiseF1}`));
  const table = el("table", "iaa-table");
  const head = el("tr");
  for (const h of ["type", report.pair[0], report.pair[1], "agreed"]) {
    head.appendChild(el("th", undefined, h));
  }
  table.appendChild(head);
  for (const row of view.rows) {
    const tr = el("tr");
    tr.appendChild(el("td", undefined, row.type));
    tr.appendChild(el("td", undefined, String(row.aCount)));
    tr.appendChild(el("td", undefined, String(row.bCount)));
    tr.appendChild(el("td", undefined, String(row.agreed)));
    table.appendChild(tr);
  }
  container.appendChild(table);
}
