/**
 * View state machine: how incoming directives reshape the demo form.
 *
 * Kept free of DOM code so the adaptation rules are testable headless;
 * the page layer renders this state. While the lock overlay is up, only
 * the credential/challenge controls stay live.
 */

import type { ServerLine } from "./icode.js";

export interface SliderView {
  orientation: "horizontal" | "vertical";
  length: number;
}

export interface ViewState {
  slider: SliderView;
  lockOverlay: boolean;
  lockReason: string | null;
  challengeOverlay: boolean;
  pagedTo: string | null;
  hiddenWidgets: string[];
  alert: { level: string; message: string } | null;
  detections: number;
}

export function initialView(): ViewState {
  return {
    slider: { orientation: "horizontal", length: 200 },
    lockOverlay: false,
    lockReason: null,
    challengeOverlay: false,
    pagedTo: null,
    hiddenWidgets: [],
    alert: null,
    detections: 0,
  };
}

export function inputsEnabled(view: ViewState): boolean {
  return !view.lockOverlay;
}

/**
 * Interaction events may only leave the form while it is unlocked;
 * credential and challenge submissions are the lockout's escape hatch.
 */
export function mayEmit(view: ViewState, kind: "interaction" | "reauth" | "challenge"): boolean {
  return kind === "interaction" ? inputsEnabled(view) : true;
}

export function applyServerLine(view: ViewState, line: ServerLine): ViewState {
  switch (line.type) {
    case "directive":
      return applyDirective(view, line.name, line.params);
    case "alert":
      view.alert = { level: line.level, message: line.message };
      return view;
    case "detection":
      view.detections += 1;
      return view;
    case "error":
      return view;
    case "unknown":
      console.warn("unknown server line:", line.raw);
      return view;
  }
}

function applyDirective(
  view: ViewState,
  name: string,
  params: Record<string, string>,
): ViewState {
  switch (name) {
    case "resize":
      view.slider.length = Number(params.length);
      break;
    case "reorient":
      view.slider.orientation = params.orientation === "vertical" ? "vertical" : "horizontal";
      view.slider.length = Number(params.length);
      break;
    case "lock":
      view.lockOverlay = true;
      view.lockReason = params.reason ?? null;
      break;
    case "unlock":
      view.lockOverlay = false;
      view.lockReason = null;
      view.challengeOverlay = false;
      break;
    case "challenge":
      view.challengeOverlay = true;
      break;
    case "page":
      view.pagedTo = params.winner ?? null;
      view.hiddenWidgets = [];
      break;
    case "restore":
      view.pagedTo = null;
      view.hiddenWidgets = [];
      break;
    case "evict":
      if (params.widget && !view.hiddenWidgets.includes(params.widget)) {
        view.hiddenWidgets.push(params.widget);
      }
      break;
    default:
      console.warn("unknown directive:", name, params);
  }
  return view;
}
