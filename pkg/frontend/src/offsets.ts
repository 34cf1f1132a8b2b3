/**
 * Offset conversions between JS strings (UTF-16 code units) and the server's
 * offset space (Unicode code points, end-exclusive).
 *
 * Every span the server sends or accepts counts code points, so astral
 * characters (emoji, rare CJK) are one unit. JS string indexing counts
 * UTF-16 units, where those characters are two. All selection handling
 * converts at this boundary and the rest of the app thinks in code points.
 */

export function codePointLength(text: string): number {
  let n = 0;
  for (let i = 0; i < text.length; ) {
    const code = text.codePointAt(i)!;
    i += code > 0xffff ? 2 : 1;
    n++;
  }
  return n;
}

/** UTF-16 offset -> code point offset; boundaries inside a surrogate pair round down. */
export function utf16ToCodePoint(text: string, utf16: number): number {
  if (utf16 <= 0) return 0;
  let cp = 0;
  let i = 0;
  while (i < text.length && i < utf16) {
    const code = text.codePointAt(i)!;
    const step = code > 0xffff ? 2 : 1;
    if (i + step > utf16) break;
    i += step;
    cp++;
  }
  return cp;
}

/** Code point offset -> UTF-16 offset; clamps to the end of the string. */
export function codePointToUtf16(text: string, cp: number): number {
  let i = 0;
  let seen = 0;
  while (i < text.length && seen < cp) {
    const code = text.codePointAt(i)!;
    i += code > 0xffff ? 2 : 1;
    seen++;
  }
  return i;
}

/** Slice by code point offsets (end-exclusive), mirroring server-side slicing. */
export function sliceCodePoints(text: string, startCp: number, endCp: number): string {
  return text.slice(codePointToUtf16(text, startCp), codePointToUtf16(text, endCp));
}
