/**
 * DOM selection -> code point offsets.
 *
 * The text container renders the document as text nodes and <mark> elements
 * whose concatenated textContent equals the canonical text exactly. A
 * selection endpoint is therefore (sum of UTF-16 lengths of text nodes
 * before it) + the in-node offset; that UTF-16 offset converts to code
 * points against the canonical text, never against DOM geometry.
 */

import { utf16ToCodePoint } from "./offsets.js";

function utf16OffsetWithin(container: Node, node: Node, offsetInNode: number): number | null {
  let total = 0;
  const walk = (current: Node): boolean => {
    if (current === node) {
      total += offsetInNode;
      return true;
    }
    if (current.nodeType === Node.TEXT_NODE) {
      total += (current.textContent ?? "").length;
      return false;
    }
    for (const child of Array.from(current.childNodes)) {
      if (walk(child)) return true;
    }
    return false;
  };
  // element-anchored endpoints (offset counts child nodes) are resolved by
  // walking the children before the offset
  if (node.nodeType !== Node.TEXT_NODE) {
    let found = false;
    const children = Array.from(node.childNodes).slice(0, offsetInNode);
    const target = children.length ? children[children.length - 1] : null;
    if (!container.contains(node)) return null;
    const walkUpTo = (current: Node): boolean => {
      if (target !== null && current === target) {
        total += (current.textContent ?? "").length;
        return true;
      }
      if (current === node && target === null) return true;
      if (current.nodeType === Node.TEXT_NODE) {
        total += (current.textContent ?? "").length;
        return false;
      }
      for (const child of Array.from(current.childNodes)) {
        if (walkUpTo(child)) return true;
      }
      return false;
    };
    found = walkUpTo(container);
    return found ? total : null;
  }
  return walk(container) ? total : null;
}

export interface SelectionOffsets {
  start: number;
  end: number;
}

export function selectionToCodePoints(
  container: HTMLElement,
  canonicalText: string,
): SelectionOffsets | null {
  const selection = window.getSelection();
  if (!selection || selection.rangeCount === 0 || selection.isCollapsed) return null;
  const range = selection.getRangeAt(0);
  if (!container.contains(range.startContainer) || !container.contains(range.endContainer)) {
    return null;
  }
  const startU16 = utf16OffsetWithin(container, range.startContainer, range.startOffset);
  const endU16 = utf16OffsetWithin(container, range.endContainer, range.endOffset);
  if (startU16 === null || endU16 === null) return null;
  const start = utf16ToCodePoint(canonicalText, Math.min(startU16, endU16));
  const end = utf16ToCodePoint(canonicalText, Math.max(startU16, endU16));
  if (start === end) return null;
  return { start, end };
}
