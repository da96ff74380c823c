/**
 * Demo page wiring: form -> iCode lines -> bridge -> session server,
 * with incoming directives enacted live on the page.
 *
 * The form geometry lives on a 260-unit virtual screen scaled to the
 * viewport, so the resize/reorient numerology matches the planner's.
 */

import { challengeLine, monotonicNow, parseServerLine, reauthLine, RESTORE_LINE } from "./icode.js";
import { connectWebSocket } from "./client.js";
import { instrument } from "./instrument.js";
import { applyServerLine, initialView, mayEmit, ViewState } from "./view.js";

const UNIT_PX = 2; // 260-unit virtual screen, 2px per unit

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function render(view: ViewState): void {
  const slider = el<HTMLInputElement>("age_scale");
  const sliderBox = el<HTMLDivElement>("age_scale_box");
  slider.style.width = `${view.slider.length * UNIT_PX}px`;
  if (view.slider.orientation === "vertical") {
    sliderBox.classList.add("vertical");
  } else {
    sliderBox.classList.remove("vertical");
  }

  el<HTMLDivElement>("lock_overlay").style.display = view.lockOverlay ? "flex" : "none";
  el<HTMLSpanElement>("lock_reason").textContent = view.lockReason ?? "";
  el<HTMLDivElement>("challenge_box").style.display = view.challengeOverlay ? "block" : "none";

  const banner = el<HTMLDivElement>("alert_banner");
  if (view.alert) {
    banner.textContent = `${view.alert.level}: ${view.alert.message}`;
    banner.dataset.level = view.alert.level;
    banner.style.display = "block";
  } else {
    banner.style.display = "none";
  }

  for (const id of ["name_box", "push_box", "finished_box", "output_box"]) {
    const visible =
      view.pagedTo === null
        ? !view.hiddenWidgets.includes(id.replace("_box", "_widget"))
        : false;
    el<HTMLDivElement>(id).style.display = visible || view.pagedTo === id ? "" : "";
  }
  el<HTMLButtonElement>("restore_button").style.display =
    view.pagedTo === null ? "none" : "inline-block";

  const disabled = view.lockOverlay;
  el<HTMLInputElement>("name_entry").disabled = disabled;
  el<HTMLInputElement>("age_scale").disabled = disabled;
  el<HTMLButtonElement>("push_button").disabled = disabled;
  el<HTMLButtonElement>("finished_button").disabled = disabled;
}

function main(): void {
  const view = initialView();
  const status = el<HTMLSpanElement>("status");
  const log = el<HTMLDivElement>("output_area");

  const wsUrl = `ws://${location.hostname}:${Number(location.port) + 1 || 8766}`;
  const { sender } = connectWebSocket(
    wsUrl,
    (line) => {
      applyServerLine(view, parseServerLine(line));
      log.append(Object.assign(document.createElement("div"), { textContent: `<- ${line}` }));
      render(view);
    },
    (connected) => {
      status.textContent = connected ? "connected" : "disconnected (events buffered)";
    },
  );

  const emit = (line: string): void => {
    if (!mayEmit(view, "interaction")) {
      return;
    }
    sender.send(line);
  };

  instrument(
    {
      nameEntry: el<HTMLInputElement>("name_entry"),
      ageScale: el<HTMLInputElement>("age_scale"),
      pushButton: el<HTMLButtonElement>("push_button"),
      finishedButton: el<HTMLButtonElement>("finished_button"),
      outputArea: log,
    },
    emit,
  );

  el<HTMLButtonElement>("push_button").addEventListener("click", () => {
    const name = el<HTMLInputElement>("name_entry").value;
    const age = el<HTMLInputElement>("age_scale").value;
    log.append(
      Object.assign(document.createElement("div"), {
        textContent: `Hello, ${name}. You are ${age} years old.`,
      }),
    );
  });

  el<HTMLButtonElement>("reauth_button").addEventListener("click", () => {
    const principal = el<HTMLInputElement>("credential_entry").value || "operator";
    sender.send(reauthLine(true, principal));
  });
  el<HTMLButtonElement>("reauth_fail_button").addEventListener("click", () => {
    sender.send(reauthLine(false, "unknown"));
  });
  el<HTMLButtonElement>("challenge_pass").addEventListener("click", () => {
    sender.send(challengeLine(true));
  });
  el<HTMLButtonElement>("challenge_fail").addEventListener("click", () => {
    sender.send(challengeLine(false));
  });
  el<HTMLButtonElement>("restore_button").addEventListener("click", () => {
    sender.send(RESTORE_LINE);
  });

  render(view);
  console.log("demo ready at", monotonicNow(), "ms");
}

main();
