"""Rule-based discomfort/misuse detectors over an event trace.

Three built-in detectors scan the action-category sequence: a premature
button press before any entry, runs of consecutive button actions, and
entry bursts typed faster than the distress threshold (330 ms per
character, i.e. three characters per second). A registry admits further
detectors without touching the callers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, NamedTuple, Optional

from .model import ActionCategory, EventTrace, IcodeError, Millis

BUTTON_BEFORE_ENTRY = "button-before-entry"
BUTTON_BURST = "button-burst"
FAST_ENTRY = "fast-entry"

DISTRESS_GRADIENT_MS = 330.0  # slower than this many ms/char is comfortable


class UnknownDetectorError(IcodeError):
    """A configuration enables a detector id that was never registered."""


class Verdict(str, Enum):
    OK = "OK"
    KO = "KO"
    PENDING = "PENDING"  # burst still open at end of trace


@dataclass(frozen=True)
class Detection:
    """One detector verdict with the trace span and metrics behind it."""

    detector: str
    verdict: Verdict
    span: tuple[int, int]
    metrics: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class AnalyzerConfig:
    fastest_avg_entry_ms: float = DISTRESS_GRADIENT_MS
    enabled_detectors: frozenset[str] = frozenset(
        {BUTTON_BEFORE_ENTRY, BUTTON_BURST, FAST_ENTRY}
    )

    def __post_init__(self) -> None:
        if self.fastest_avg_entry_ms <= 0:
            raise ValueError("fastest_avg_entry_ms must be positive")


@dataclass
class AnalysisReport:
    detections: list[Detection]
    ko_count: int
    trace_len: int

    def ko_detections(self) -> list[Detection]:
        return [d for d in self.detections if d.verdict is Verdict.KO]


class Burst(NamedTuple):
    """A maximal run of one action category, closed by the next event.

    end is the index of the first event after the run; gradient is the
    average ms per action, absent for single-action runs and for runs
    still open when the trace ends (verdict PENDING).
    """

    start: int
    end: int
    verdict: Verdict
    duration: Optional[Millis]
    gradient: Optional[float]

    @property
    def run_length(self) -> int:
        return self.end - self.start


def scan_bursts(
    cats: list[ActionCategory],
    rels: list[Millis],
    target: ActionCategory,
    threshold: float,
    close_at: Optional[Millis] = None,
) -> list[Burst]:
    """Burst driver: walk every maximal run of `target`, in order.

    Each run is timed to the first event after it. A run reaching the end
    of the trace cannot be timed and yields PENDING, unless the caller
    supplies `close_at`: the live-analysis boundary (mirroring the
    analyzer's appended exit action) that closes the run at that time.
    A run of more than one action is KO when its gradient is strictly
    below `threshold`.
    """
    n = len(cats)
    bursts: list[Burst] = []
    ind1 = 0
    while ind1 < n:
        i = ind1
        while i < n and cats[i] is not target:
            i += 1
        if i == n:
            break
        start = i
        i += 1
        while i < n and cats[i] is target:
            i += 1
        end = i
        if end == n and close_at is None:
            bursts.append(Burst(start, end, Verdict.PENDING, None, None))
            break
        duration = (close_at if end == n else rels[end]) - rels[start]
        if end - start > 1:
            gradient = duration / (end - start)
            verdict = Verdict.KO if gradient < threshold else Verdict.OK
        else:
            gradient = None
            verdict = Verdict.OK
        bursts.append(Burst(start, end, verdict, duration, gradient))
        ind1 = end + 1
    return bursts


def detect_button_before_entry(trace: EventTrace) -> Detection:
    """KO when the first button action precedes the first entry action.

    Both scans start from position zero; a trace with a button and no
    entry at all is KO (the missing entry indexes at trace length).
    """
    cats = trace.categories()
    n = len(cats)
    first_entry = next(
        (i for i, c in enumerate(cats) if c is ActionCategory.ENTRY), n
    )
    first_button = next(
        (i for i, c in enumerate(cats) if c is ActionCategory.BUTTON), n
    )
    verdict = Verdict.KO if first_button < first_entry else Verdict.OK
    span = (min(first_button, first_entry), min(max(first_button, first_entry), n))
    return Detection(
        BUTTON_BEFORE_ENTRY,
        verdict,
        span,
        {"first_entry": first_entry, "first_button": first_button},
    )


def detect_button_bursts(trace: EventTrace) -> list[Detection]:
    """One KO per maximal run of more than one consecutive button action.

    A trace without any such run reports a single OK covering the whole
    trace.
    """
    cats = trace.categories()
    detections: list[Detection] = []
    i, n = 0, len(cats)
    while i < n:
        if cats[i] is not ActionCategory.BUTTON:
            i += 1
            continue
        start = i
        while i < n and cats[i] is ActionCategory.BUTTON:
            i += 1
        if i - start > 1:
            detections.append(
                Detection(BUTTON_BURST, Verdict.KO, (start, i), {"run_length": i - start})
            )
    if not detections:
        return [Detection(BUTTON_BURST, Verdict.OK, (0, n))]
    return detections


def detect_fast_entry_bursts(
    trace: EventTrace, cfg: AnalyzerConfig, close_at: Optional[Millis] = None
) -> list[Detection]:
    """Grade every entry burst by its typing gradient (ms per character).

    A burst is timed to the first non-entry event after it; strictly less
    than cfg.fastest_avg_entry_ms per character is KO. A trailing burst
    with no closing event is PENDING and re-graded when more events
    arrive, unless `close_at` closes it at that time (live analysis of a
    stream that is still open).
    """
    bursts = scan_bursts(
        trace.categories(),
        trace.rel_times,
        ActionCategory.ENTRY,
        cfg.fastest_avg_entry_ms,
        close_at,
    )
    detections = []
    for b in bursts:
        if b.verdict is Verdict.PENDING:
            detections.append(Detection(FAST_ENTRY, b.verdict, (b.start, b.end)))
            continue
        metrics: dict[str, float] = {
            "burst_duration": b.duration,
            "run_length": b.run_length,
        }
        if b.gradient is not None:
            metrics["gradient"] = b.gradient
        detections.append(Detection(FAST_ENTRY, b.verdict, (b.start, b.end), metrics))
    return detections


# Detectors receive the live-analysis boundary too; scanners that do not
# time anything simply ignore it.
DetectorFn = Callable[[EventTrace, AnalyzerConfig, Optional[Millis]], list[Detection]]


def _run_button_before_entry(trace, cfg, close_at) -> list[Detection]:
    return [detect_button_before_entry(trace)]


def _run_button_bursts(trace, cfg, close_at) -> list[Detection]:
    return detect_button_bursts(trace)


REGISTRY: dict[str, DetectorFn] = {
    BUTTON_BEFORE_ENTRY: _run_button_before_entry,
    BUTTON_BURST: _run_button_bursts,
    FAST_ENTRY: detect_fast_entry_bursts,
}


def register_detector(identifier: str, fn: DetectorFn) -> None:
    """Add a detector to the registry (runs after the built-ins)."""
    if identifier in REGISTRY:
        raise ValueError(f"detector {identifier!r} already registered")
    REGISTRY[identifier] = fn


def run_all(
    trace: EventTrace,
    cfg: Optional[AnalyzerConfig] = None,
    close_at: Optional[Millis] = None,
) -> AnalysisReport:
    """Run every enabled detector in registry order over one trace."""
    if cfg is None:
        cfg = AnalyzerConfig()
    unknown = set(cfg.enabled_detectors) - set(REGISTRY)
    if unknown:
        raise UnknownDetectorError(f"unregistered detectors: {sorted(unknown)}")
    detections: list[Detection] = []
    for identifier, fn in REGISTRY.items():
        if identifier in cfg.enabled_detectors:
            detections.extend(fn(trace, cfg, close_at))
    ko_count = sum(1 for d in detections if d.verdict is Verdict.KO)
    return AnalysisReport(detections, ko_count, len(trace))
