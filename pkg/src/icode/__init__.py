"""Streaming interaction-telemetry engine.

Parses timestamped UI event logs (iCode), detects discomfort and misuse
with rule-based analyzers, identifies higher-level safety situations, and
plans UI adaptation directives, with a CLI harness and a live session
endpoint.
"""

from .analyzers import (
    BUTTON_BEFORE_ENTRY,
    BUTTON_BURST,
    FAST_ENTRY,
    AnalysisReport,
    AnalyzerConfig,
    Detection,
    UnknownDetectorError,
    Verdict,
    detect_button_before_entry,
    detect_button_bursts,
    detect_fast_entry_bursts,
    register_detector,
    run_all,
    scan_bursts,
)
from .config import EngineConfig, load_config, parse_config, resolve_config
from .model import (
    ActionCategory,
    EntryPayload,
    Event,
    EventKind,
    EventTrace,
    IcodeError,
    OutOfOrderError,
    category,
)
from .parser import (
    MalformedLineError,
    ParseMode,
    ParseOutcome,
    UnserializableError,
    canonical_line,
    format_event,
    parse_line,
    parse_stream,
)
from .planner import (
    ContextModel,
    Directive,
    DirectiveKind,
    NotPagedError,
    Orientation,
    PagingPolicy,
    UIModel,
    UnknownWidgetError,
    WidgetState,
    apply_directive,
    plan_paging,
    plan_scale,
    plan_situation,
    restore,
)
from .runtime import (
    BlackboxEntry,
    NoChallengeError,
    NotLockedError,
    ReauthResult,
    Session,
    SessionTerminatedError,
    blackbox_event_lines,
)
from .server import IcodeServer, SessionDriver, replay_lines
from .simulate import PROFILES, Profile, simulate
from .situations import (
    NotActiveError,
    Situation,
    SituationConfig,
    SituationId,
    SituationState,
)
from .timeline import TimelineDoc, build_timeline, render_svg, render_text

__all__ = [name for name in dir() if not name.startswith("_")]
