/**
 * iCode emission and server-line parsing for the demo form.
 *
 * Every emitted line must parse under the analyzer's strict grammar:
 *
 *   entry(Ins|Del|Focus) VTYPE 'TEXT' INT " @"INT
 *   button(Pressed|Exit) " @"INT
 *   Scale(INT) " @"INT
 *   yscroll(DIGITS.DIGITS) " @"INT
 *
 * The quoted text field has no escape syntax, so characters the grammar
 * cannot carry (single quotes, newlines) are substituted with "?" --
 * detection cares about keystroke timing, not glyphs.
 */

export type EntryAction = "Ins" | "Del" | "Focus";

export function sanitizeText(text: string): string {
  return text.replace(/['\n\r]/g, "?");
}

function sanitizeWord(word: string): string {
  const cleaned = word.replace(/[\s]/g, "_");
  return cleaned.length > 0 ? cleaned : "key";
}

export function entryLine(
  action: EntryAction,
  vtype: string,
  changed: string,
  index: number,
  t: number,
): string {
  const idx = action === "Focus" ? -1 : Math.max(index, 0);
  return `entry(${action}) ${sanitizeWord(vtype)} '${sanitizeText(changed)}' ${idx} @${Math.round(t)}`;
}

export function buttonLine(kind: "Pressed" | "Exit", t: number): string {
  return `button(${kind}) @${Math.round(t)}`;
}

export function scaleLine(value: number, t: number): string {
  return `Scale(${Math.round(value)}) @${Math.round(t)}`;
}

export function yscrollLine(fraction: number, t: number): string {
  const clamped = Math.min(Math.max(fraction, 0), 1);
  return `yscroll(${clamped.toFixed(4)}) @${Math.round(t)}`;
}

export function reauthLine(ok: boolean, principal: string): string {
  return `REAUTH ${ok ? "ok" : "fail"} ${sanitizeWord(principal)}`;
}

export function challengeLine(ok: boolean): string {
  return `CHALLENGE ${ok ? "ok" : "fail"}`;
}

export const RESTORE_LINE = "RESTORE";

/** One parsed line of the server's outbound protocol. */
export type ServerLine =
  | { type: "directive"; name: string; params: Record<string, string> }
  | { type: "alert"; level: string; message: string }
  | { type: "detection"; detector: string; verdict: string; params: Record<string, string> }
  | { type: "error"; reason: string }
  | { type: "unknown"; raw: string };

function parseParams(parts: string[]): Record<string, string> {
  const params: Record<string, string> = {};
  for (const part of parts) {
    const eq = part.indexOf("=");
    if (eq > 0) {
      params[part.slice(0, eq)] = part.slice(eq + 1);
    }
  }
  return params;
}

export function parseServerLine(line: string): ServerLine {
  const trimmed = line.replace(/\r?\n$/, "");
  const words = trimmed.split(" ");
  switch (words[0]) {
    case "DIRECTIVE":
      if (words.length < 2) break;
      return { type: "directive", name: words[1], params: parseParams(words.slice(2)) };
    case "ALERT":
      if (words.length < 2) break;
      return { type: "alert", level: words[1], message: words.slice(2).join(" ") };
    case "DETECTION":
      if (words.length < 3) break;
      return {
        type: "detection",
        detector: words[1],
        verdict: words[2],
        params: parseParams(words.slice(3)),
      };
    case "ERROR":
      return { type: "error", reason: words.slice(1).join(" ") };
  }
  return { type: "unknown", raw: trimmed };
}

/** Monotonic millisecond clock, shared by browser and node. */
export function monotonicNow(): number {
  return Math.round(globalThis.performance.now());
}
