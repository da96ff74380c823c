"""Interaction-summary rendering: action categories against time.

One row per action category, one mark per event, detections drawn as
annotated spans. Text output buckets times into a fixed-width grid; SVG
output uses a configurable milliseconds-per-pixel scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional
from xml.sax.saxutils import escape

from .analyzers import AnalysisReport, Verdict
from .model import ActionCategory, EventTrace, Millis, category

ROW_ORDER = [
    ActionCategory.ENTRY,
    ActionCategory.BUTTON,
    ActionCategory.SCALE,
    ActionCategory.YSCROLL,
    ActionCategory.ERROR,
]


@dataclass(frozen=True)
class Annotation:
    label: str
    verdict: str
    start_ms: Millis
    end_ms: Millis


@dataclass
class TimelineDoc:
    rows: list[str]
    marks: list[tuple[str, Millis]]  # one (category, rel_ms) per trace event
    annotations: list[Annotation] = field(default_factory=list)
    format: str = "text"


def _time_at(trace: EventTrace, index: int) -> Millis:
    if not len(trace):
        return 0
    return trace.rel_times[min(index, len(trace) - 1)]


def build_timeline(
    trace: EventTrace, report: Optional[AnalysisReport] = None, fmt: str = "text"
) -> TimelineDoc:
    marks = [
        (category(e).value, rel) for e, rel in zip(trace.events, trace.rel_times)
    ]
    annotations = []
    if report is not None:
        for d in report.detections:
            if d.verdict is not Verdict.KO:
                continue
            annotations.append(
                Annotation(
                    d.detector,
                    d.verdict.value,
                    _time_at(trace, d.span[0]),
                    _time_at(trace, d.span[1]),
                )
            )
    return TimelineDoc([c.value for c in ROW_ORDER], marks, annotations, fmt)


def render_text(doc: TimelineDoc, width: int = 72) -> str:
    """Character-grid rendering: rows of buckets, '*' where events landed."""
    span = max((t for _, t in doc.marks), default=0)
    label_w = max(len(r) for r in doc.rows)
    out = []
    for row in doc.rows:
        cells = [" "] * width
        for cat, t in doc.marks:
            if cat != row:
                continue
            col = t * (width - 1) // span if span else 0
            cells[col] = "*"
        out.append(f"{row.lower():<{label_w}} |{''.join(cells)}|")
    out.append(f"{'':<{label_w}}  0 ms{f'{span} ms':>{width - 4}}")
    if doc.annotations:
        out.append("detections:")
        for a in doc.annotations:
            out.append(f"  {a.label} {a.verdict} {a.start_ms}..{a.end_ms} ms")
    return "\n".join(out) + "\n"


def render_svg(doc: TimelineDoc, ms_per_px: int = 10) -> str:
    """Minimal SVG rendering with one lane per category."""
    span = max((t for _, t in doc.marks), default=0)
    lane_h, label_w = 24, 80
    plot_w = max(span // ms_per_px + 20, 120)
    height = lane_h * len(doc.rows) + 40
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{label_w + plot_w}" '
        f'height="{height}" font-family="monospace" font-size="11">'
    ]
    lane_of = {row: i for i, row in enumerate(doc.rows)}
    for row, i in lane_of.items():
        y = i * lane_h + lane_h
        parts.append(f'<text x="4" y="{y + 4}">{escape(row.lower())}</text>')
        parts.append(
            f'<line x1="{label_w}" y1="{y}" x2="{label_w + plot_w}" y2="{y}" '
            'stroke="#ccc"/>'
        )
    for a in doc.annotations:
        x1 = label_w + a.start_ms // ms_per_px
        x2 = label_w + a.end_ms // ms_per_px
        parts.append(
            f'<rect x="{x1}" y="{lane_h // 2}" width="{max(x2 - x1, 2)}" '
            f'height="{lane_h * len(doc.rows)}" fill="#d33" opacity="0.15">'
            f"<title>{escape(a.label)} {escape(a.verdict)}</title></rect>"
        )
    for cat, t in doc.marks:
        x = label_w + t // ms_per_px
        y = lane_of[cat] * lane_h + lane_h
        parts.append(f'<circle cx="{x}" cy="{y}" r="3" fill="#246"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
