"""Engine configuration: one bundle for all tunables, plus a file loader.

Config files are plain key = value text; blank lines and # comments are
ignored. The ICODE_CONFIG environment variable supplies a default path
when the command line does not.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from typing import Optional

from .analyzers import REGISTRY, AnalyzerConfig
from .planner import ContextModel, PagingPolicy
from .situations import SituationConfig

ENV_CONFIG = "ICODE_CONFIG"

DEFAULT_SCALE_WIDGET = "age_scale"


@dataclass
class EngineConfig:
    analyzer: AnalyzerConfig = field(default_factory=AnalyzerConfig)
    situation: SituationConfig = field(default_factory=SituationConfig)
    context: ContextModel = field(default_factory=ContextModel)
    paging_policy: Optional[PagingPolicy] = None
    safe_default_action: str = "alert"
    scale_widget: str = DEFAULT_SCALE_WIDGET

    def __post_init__(self) -> None:
        if self.situation.s2_superhuman_ms >= self.analyzer.fastest_avg_entry_ms:
            raise ValueError(
                "s2_superhuman_ms must sit below fastest_avg_entry_ms"
            )


_INT_KEYS = {
    "s1_consecutive_ko",
    "s2_consecutive_fast",
    "perf_deadline_ms",
    "screen_width",
    "screen_height",
    "scale_initial_length",
    "scale_growth_step",
    "scale_margin",
    "reorient_length",
}
_FLOAT_KEYS = {"fastest_avg_entry_ms", "s2_superhuman_ms"}
_ANALYZER_KEYS = {"fastest_avg_entry_ms", "enabled_detectors"}
_SITUATION_KEYS = {
    "s1_consecutive_ko",
    "s2_consecutive_fast",
    "s2_superhuman_ms",
    "perf_deadline_ms",
}
_CONTEXT_KEYS = {
    "screen_width",
    "screen_height",
    "scale_initial_length",
    "scale_growth_step",
    "scale_margin",
    "reorient_length",
}


def parse_config(text: str) -> EngineConfig:
    """Build an EngineConfig from key = value text."""
    analyzer: dict = {}
    situation: dict = {}
    context: dict = {}
    top: dict = {}
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {line_no}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in _INT_KEYS:
            parsed: object = int(value)
        elif key in _FLOAT_KEYS:
            parsed = float(value)
        elif key == "enabled_detectors":
            names = [v.strip() for v in value.split(",") if v.strip()]
            unknown = set(names) - set(REGISTRY)
            if unknown:
                raise ValueError(f"config line {line_no}: unknown detectors {sorted(unknown)}")
            parsed = frozenset(names)
        elif key == "paging_policy":
            parsed = None if value == "none" else PagingPolicy(value)
        elif key in {"safe_default_action", "scale_widget"}:
            parsed = value
        else:
            raise ValueError(f"config line {line_no}: unknown key {key!r}")

        if key in _ANALYZER_KEYS:
            analyzer[key] = parsed
        elif key in _SITUATION_KEYS:
            situation[key] = parsed
        elif key in _CONTEXT_KEYS:
            context[key] = parsed
        else:
            top[key] = parsed
    return EngineConfig(
        analyzer=AnalyzerConfig(**analyzer),
        situation=SituationConfig(**situation),
        context=ContextModel(**context),
        **top,
    )


def load_config(path: str) -> EngineConfig:
    with open(path, encoding="utf-8") as f:
        return parse_config(f.read())


def resolve_config(path: Optional[str]) -> EngineConfig:
    """Load the config named on the command line, by env var, or defaults."""
    if path is None:
        path = os.environ.get(ENV_CONFIG)
    if path is None:
        return EngineConfig()
    return load_config(path)


def with_overrides(config: EngineConfig, **kwargs) -> EngineConfig:
    return replace(config, **kwargs)
