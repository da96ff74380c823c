"""Per-session orchestration of the full adaptation loop.

Each ingested event is appended to the trace, then the whole trace is
re-analyzed with the ingest time as the live boundary that closes any
burst still open at the tail (the role the analyzer's appended exit
action plays for an offline log copy, without injecting a scannable
action). The resulting report feeds the situation counters; new
situations and rapid scale runs are planned into directives, which are
applied to the UI model. Everything lands in an append-only black-box
log.

While the session is locked, events are still recorded as evidence but
produce no directives; only a re-authentication or challenge verdict can
unlock.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .analyzers import AnalysisReport, Detection, Verdict, run_all, scan_bursts
from .config import EngineConfig
from .model import (
    ActionCategory,
    Event,
    EventKind,
    EventTrace,
    IcodeError,
    Millis,
    category,
)
from .parser import canonical_line
from .planner import (
    Directive,
    DirectiveKind,
    UIModel,
    WidgetState,
    apply_directive,
    plan_paging,
    plan_scale,
    plan_situation,
)
from .planner import restore as plan_restore
from .situations import Situation, SituationId, SituationState

SCALE_BURST = "scale-burst"

BLACKBOX_HEADER = "icode-blackbox v1"


class SessionTerminatedError(IcodeError):
    """Event arrived after the session ended."""


class NotLockedError(IcodeError):
    """Re-authentication offered while the session is not locked."""


class NoChallengeError(IcodeError):
    """Challenge verdict offered while none is pending."""


@dataclass(frozen=True)
class ReauthResult:
    ok: bool
    principal: str = ""


@dataclass(frozen=True)
class BlackboxEntry:
    rel: Millis
    kind: str  # EVENT | DETECT | SITUATION | DIRECTIVE | REAUTH
    payload: str


def _fmt_num(value) -> str:
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return format(value, "g") if isinstance(value, float) else str(value)


def directive_record(d: Directive) -> str:
    parts = [d.kind.value]
    parts.extend(f"{k}={_fmt_num(v)}" for k, v in d.params.items())
    return " ".join(parts)


def detection_record(d: Detection) -> str:
    parts = [d.detector, d.verdict.value, f"span={d.span[0]}:{d.span[1]}"]
    parts.extend(f"{k}={_fmt_num(v)}" for k, v in d.metrics.items())
    return " ".join(parts)


def situation_record(s: Situation) -> str:
    return f"id={s.id.value} onset={s.onset}"


def default_ui(config: EngineConfig) -> UIModel:
    """UI model mirroring the demonstrator form's widget set."""
    return UIModel(
        widgets=[
            WidgetState("name_entry", length=120),
            WidgetState(config.scale_widget, length=config.context.scale_initial_length),
            WidgetState("push_button", length=60),
            WidgetState("finished_button", length=60),
            WidgetState("output_area", length=200),
        ]
    )


_USAGE_BY_KIND = {
    EventKind.BUTTON_PRESSED: "push_button",
    EventKind.BUTTON_EXIT: "finished_button",
}
_USAGE_BY_CATEGORY = {
    ActionCategory.ENTRY: "name_entry",
    ActionCategory.YSCROLL: "output_area",
}


class Session:
    """One user session: serial event stream in, directives out."""

    def __init__(
        self,
        config: Optional[EngineConfig] = None,
        *,
        ui: Optional[UIModel] = None,
        end_on_exit: bool = True,
    ):
        self.config = config or EngineConfig()
        self.trace = EventTrace()
        self.ui = ui if ui is not None else default_ui(self.config)
        self.situations = SituationState(self.config.situation)
        self.locked = False
        self.lock_reason: Optional[SituationId] = None
        self.pending_challenge: Optional[str] = None
        self.terminated = False
        self.end_on_exit = end_on_exit
        self.blackbox: list[BlackboxEntry] = []
        self.failed_reauths = 0
        self.last_ko_detections: list[Detection] = []
        self._adapted_scale_starts: set[int] = set()
        self._seen_detections: set[tuple[str, int, Verdict]] = set()
        self._forgiven_until = 0  # trace length adjudicated by the last unlock

    # -- event ingestion ------------------------------------------------

    def ingest(self, e: Event) -> list[Directive]:
        """Record one event and run the analyze/identify/plan/execute cycle."""
        if self.terminated:
            raise SessionTerminatedError("session already ended")
        self.trace.append(e, strict=False)
        now = self.trace.rel_times[-1]
        self._record("EVENT", now, canonical_line(e, self.trace.epoch + now))
        self._touch_widget(e, now)
        self.last_ko_detections = []

        if self.locked:
            self._maybe_terminate(e)
            return []

        report = run_all(self.trace, self.config.analyzer, close_at=now)
        for d in report.ko_detections():
            key = (d.detector, d.span[0], d.verdict)
            if key not in self._seen_detections:
                self._seen_detections.add(key)
                self.last_ko_detections.append(d)
                self._record("DETECT", now, detection_record(d))

        declared: list[Situation] = []
        overdue = self.situations.check_deadline(now)
        if overdue is not None:
            declared.append(overdue)
        declared.extend(self.situations.update(self._unforgiven(report), now))
        for s in declared:
            self._record("SITUATION", now, situation_record(s))

        directives: list[Directive] = []
        for s in declared:
            directives.extend(plan_situation(s, self.config.safe_default_action))
        if not any(d.kind is DirectiveKind.LOCK for d in directives):
            directives.extend(self._plan_scale_bursts(now))
            if self.config.paging_policy is not None:
                paged = plan_paging(self.ui, self.config.paging_policy, self.config.context)
                if paged is not None:
                    directives.append(paged)

        for d in directives:
            self._apply(d, now)
        self._maybe_terminate(e)
        return directives

    def _maybe_terminate(self, e: Event) -> None:
        if self.end_on_exit and e.kind is EventKind.BUTTON_EXIT:
            self.terminated = True

    def _unforgiven(self, report: AnalysisReport) -> AnalysisReport:
        """Drop KO evidence already adjudicated by a successful unlock.

        Full-trace re-analysis re-reports old KOs forever; counting them
        again would mechanically re-declare S1 right after every re-auth.
        A KO only feeds the counters if its span reaches past the last
        unlock point, so genuinely fresh misbehaviour (including a run
        still open across the unlock) is still counted.
        """
        if self._forgiven_until == 0:
            return report
        kept = [
            d
            for d in report.detections
            if d.verdict is not Verdict.KO or d.span[1] > self._forgiven_until
        ]
        ko_count = sum(1 for d in kept if d.verdict is Verdict.KO)
        return AnalysisReport(kept, ko_count, report.trace_len)

    def _touch_widget(self, e: Event, now: Millis) -> None:
        cat = category(e)
        if e.kind in _USAGE_BY_KIND:
            widget_id = _USAGE_BY_KIND[e.kind]
        elif cat is ActionCategory.SCALE:
            widget_id = self.config.scale_widget
        elif cat in _USAGE_BY_CATEGORY:
            widget_id = _USAGE_BY_CATEGORY[cat]
        else:
            return
        try:
            w = self.ui.widget(widget_id)
        except IcodeError:
            return
        w.usage_count += 1
        w.last_used = now

    def _plan_scale_bursts(self, now: Millis) -> list[Directive]:
        """One adaptation per rapid run of scale actions.

        Reuses the entry-burst machinery on the SCALE alphabet; a run is
        adapted once, keyed by its start index, no matter how often
        re-analysis sees it.
        """
        bursts = scan_bursts(
            self.trace.categories(),
            self.trace.rel_times,
            ActionCategory.SCALE,
            self.config.analyzer.fastest_avg_entry_ms,
            close_at=now,
        )
        directives: list[Directive] = []
        for b in bursts:
            if b.verdict is not Verdict.KO or b.start in self._adapted_scale_starts:
                continue
            self._adapted_scale_starts.add(b.start)
            detection = Detection(
                SCALE_BURST,
                Verdict.KO,
                (b.start, b.end),
                {"burst_duration": b.duration, "run_length": b.run_length, "gradient": b.gradient},
            )
            self._record("DETECT", now, detection_record(detection))
            widget = self.ui.widget(self.config.scale_widget)
            planned = plan_scale(widget, detection, self.config.context)
            if planned is not None:
                directives.append(planned)
        return directives

    def _apply(self, d: Directive, now: Millis) -> None:
        apply_directive(self.ui, d, self.config.context)
        if d.kind is DirectiveKind.LOCK:
            self.locked = True
            self.lock_reason = SituationId(d.params["reason"])
        elif d.kind is DirectiveKind.UNLOCK:
            self.locked = False
            self.lock_reason = None
            self.pending_challenge = None
        elif d.kind is DirectiveKind.CHALLENGE:
            self.pending_challenge = d.params["kind"]
        self._record("DIRECTIVE", now, directive_record(d))

    def _record(self, kind: str, rel: Millis, payload: str) -> None:
        self.blackbox.append(BlackboxEntry(rel, kind, payload))

    def _now(self) -> Millis:
        return self.trace.rel_times[-1] if len(self.trace) else 0

    # -- lockout protocol ------------------------------------------------

    def handle_reauth(self, r: ReauthResult) -> list[Directive]:
        """Credential re-entry verdict; only valid while locked."""
        if not self.locked:
            raise NotLockedError("session is not locked")
        now = self._now()
        if r.ok:
            self._record("REAUTH", now, f"kind=credentials ok=true principal={r.principal}")
            return self._unlock(now)
        self.failed_reauths += 1
        self._record(
            "REAUTH",
            now,
            f"kind=credentials ok=false principal={r.principal} fails={self.failed_reauths}",
        )
        d = Directive.alert("critical", "reauthentication-failed")
        self._apply(d, now)
        return [d]

    def handle_challenge(self, passed: bool) -> list[Directive]:
        """Challenge (captcha) verdict; only valid while one is pending."""
        if self.pending_challenge is None:
            raise NoChallengeError("no challenge pending")
        now = self._now()
        self._record("REAUTH", now, f"kind=challenge ok={'true' if passed else 'false'}")
        if passed:
            return self._unlock(now)
        d = Directive.alert("critical", "challenge-failed")
        self._apply(d, now)
        return [d]

    def _unlock(self, now: Millis) -> list[Directive]:
        if self.lock_reason is not None and self.situations.is_active(self.lock_reason):
            self.situations.clear(self.lock_reason)
        self.situations.reset_counters()
        self._forgiven_until = len(self.trace)
        d = Directive.unlock()
        self._apply(d, now)
        return [d]

    def handle_restore(self) -> list[Directive]:
        """User asked to return from a paged layout to the full widget set."""
        d = plan_restore(self.ui)
        self._apply(d, self._now())
        return [d]

    # -- black box --------------------------------------------------------

    def export_blackbox(self) -> str:
        """Complete time-ordered session record, one line per entry."""
        lines = [BLACKBOX_HEADER]
        lines.extend(f"{e.rel} {e.kind} {e.payload}" for e in self.blackbox)
        return "\n".join(lines) + "\n"


def blackbox_event_lines(document: str) -> list[str]:
    """Extract the verbatim event lines from an exported black box."""
    lines = []
    for line in document.splitlines():
        parts = line.split(" ", 2)
        if len(parts) == 3 and parts[1] == "EVENT":
            lines.append(parts[2])
    return lines
