"""Situation identification: counting rules over successive analysis reports.

Low-level detections are folded into high-level conditions: a streak of
KO-bearing reports suggests the user changed (S1); a streak of
superhumanly fast entry bursts suggests a machine took over (S2); a
missed response deadline is a performance failure. Declared situations
stay active until explicitly cleared.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .analyzers import FAST_ENTRY, AnalysisReport, Detection, Verdict
from .model import IcodeError, Millis


class NotActiveError(IcodeError):
    """Attempt to clear a situation that was never declared."""


class SituationId(str, Enum):
    S1_USER_CHANGED = "S1_UserChanged"
    S2_BOT_TAKEOVER = "S2_BotTakeover"
    PERF_FAILURE = "PerfFailure"


@dataclass
class Situation:
    id: SituationId
    onset: Millis
    evidence: list[Detection] = field(default_factory=list)
    active: bool = True


@dataclass(frozen=True)
class SituationConfig:
    s1_consecutive_ko: int = 3
    s2_consecutive_fast: int = 3
    s2_superhuman_ms: float = 100.0
    perf_deadline_ms: int = 10_000

    def __post_init__(self) -> None:
        if self.s1_consecutive_ko < 1 or self.s2_consecutive_fast < 1:
            raise ValueError("consecutive-report thresholds must be >= 1")
        if self.s2_superhuman_ms <= 0:
            raise ValueError("s2_superhuman_ms must be positive")
        if self.perf_deadline_ms < 1:
            raise ValueError("perf_deadline_ms must be >= 1")


class SituationState:
    """Per-session counters and the set of active situations.

    Owned by one session; updates are serialized in event order.
    """

    def __init__(self, config: Optional[SituationConfig] = None):
        self.config = config or SituationConfig()
        self.consecutive_ko_analyses = 0
        self.consecutive_superhuman_bursts = 0
        self.last_event_rel_time: Millis = 0
        self.active_situations: dict[SituationId, Situation] = {}
        self.response_expected = False

    def is_active(self, sid: SituationId) -> bool:
        return sid in self.active_situations

    def update(self, report: AnalysisReport, now: Millis) -> list[Situation]:
        """Fold one analysis report into the counters; return new declarations.

        Any zero-KO report resets both streaks. A simultaneous S1 and S2
        declaration collapses to S2 alone (the more specific evidence);
        an already-active situation is never re-declared.
        """
        if now < self.last_event_rel_time:
            raise ValueError("reports must arrive in nondecreasing time order")
        self.last_event_rel_time = now
        cfg = self.config

        if report.ko_count > 0:
            self.consecutive_ko_analyses += 1
        else:
            self.consecutive_ko_analyses = 0

        superhuman = [
            d
            for d in report.detections
            if d.detector == FAST_ENTRY
            and d.verdict is Verdict.KO
            and d.metrics.get("gradient", cfg.s2_superhuman_ms) < cfg.s2_superhuman_ms
        ]
        if superhuman:
            self.consecutive_superhuman_bursts += 1
        else:
            self.consecutive_superhuman_bursts = 0

        declared: list[Situation] = []
        if (
            self.consecutive_superhuman_bursts >= cfg.s2_consecutive_fast
            and not self.is_active(SituationId.S2_BOT_TAKEOVER)
        ):
            s2 = Situation(SituationId.S2_BOT_TAKEOVER, now, superhuman)
            self.active_situations[s2.id] = s2
            declared.append(s2)
        if (
            self.consecutive_ko_analyses >= cfg.s1_consecutive_ko
            and not self.is_active(SituationId.S1_USER_CHANGED)
            and not declared
        ):
            s1 = Situation(SituationId.S1_USER_CHANGED, now, report.ko_detections())
            self.active_situations[s1.id] = s1
            declared.append(s1)
        return declared

    def check_deadline(self, now: Millis) -> Optional[Situation]:
        """Declare a performance failure when an expected response is overdue."""
        if not self.response_expected or self.is_active(SituationId.PERF_FAILURE):
            return None
        if now - self.last_event_rel_time > self.config.perf_deadline_ms:
            perf = Situation(SituationId.PERF_FAILURE, now)
            self.active_situations[perf.id] = perf
            return perf
        return None

    def clear(self, sid: SituationId) -> None:
        """Deactivate a situation and reset the counter that fed it."""
        situation = self.active_situations.pop(sid, None)
        if situation is None:
            raise NotActiveError(f"{sid.value} is not active")
        situation.active = False
        if sid is SituationId.S1_USER_CHANGED:
            self.consecutive_ko_analyses = 0
        elif sid is SituationId.S2_BOT_TAKEOVER:
            self.consecutive_superhuman_bursts = 0

    def reset_counters(self) -> None:
        self.consecutive_ko_analyses = 0
        self.consecutive_superhuman_bursts = 0
