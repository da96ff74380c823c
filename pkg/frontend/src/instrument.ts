/**
 * Form instrumentation: every widget interaction becomes one iCode line.
 *
 * Text edits are diffed against the previous field value so inserts and
 * deletes carry the changed characters and their position, mirroring the
 * validation callback of the original toolkit form.
 */

import { buttonLine, entryLine, monotonicNow, scaleLine, yscrollLine } from "./icode.js";

export type EmitFn = (line: string) => void;

export function diffEdit(before: string, after: string): {
  action: "Ins" | "Del";
  changed: string;
  index: number;
} | null {
  if (before === after) {
    return null;
  }
  let start = 0;
  while (start < before.length && start < after.length && before[start] === after[start]) {
    start += 1;
  }
  let endB = before.length;
  let endA = after.length;
  while (endB > start && endA > start && before[endB - 1] === after[endA - 1]) {
    endB -= 1;
    endA -= 1;
  }
  if (endA > start && endB === start) {
    return { action: "Ins", changed: after.slice(start, endA), index: start };
  }
  if (endB > start && endA === start) {
    return { action: "Del", changed: before.slice(start, endB), index: start };
  }
  // replacement: report it as the insert that produced the new text
  return { action: "Ins", changed: after.slice(start, endA), index: start };
}

export interface DemoWidgets {
  nameEntry: HTMLInputElement;
  ageScale: HTMLInputElement;
  pushButton: HTMLButtonElement;
  finishedButton: HTMLButtonElement;
  outputArea: HTMLElement;
}

export function instrument(
  widgets: DemoWidgets,
  emit: EmitFn,
  now: () => number = monotonicNow,
): void {
  let lastValue = widgets.nameEntry.value;

  widgets.nameEntry.addEventListener("focus", () => {
    emit(entryLine("Focus", "focusin", "", -1, now()));
  });
  widgets.nameEntry.addEventListener("input", () => {
    const edit = diffEdit(lastValue, widgets.nameEntry.value);
    lastValue = widgets.nameEntry.value;
    if (edit) {
      emit(entryLine(edit.action, "key", edit.changed, edit.index, now()));
    }
  });
  widgets.ageScale.addEventListener("input", () => {
    emit(scaleLine(Number(widgets.ageScale.value), now()));
  });
  widgets.pushButton.addEventListener("click", () => {
    emit(buttonLine("Pressed", now()));
  });
  widgets.finishedButton.addEventListener("click", () => {
    emit(buttonLine("Exit", now()));
  });
  widgets.outputArea.addEventListener("scroll", () => {
    const el = widgets.outputArea;
    const range = el.scrollHeight - el.clientHeight;
    emit(yscrollLine(range > 0 ? el.scrollTop / range : 0, now()));
  });
}
