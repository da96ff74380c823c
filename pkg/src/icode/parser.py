"""Bit-exact serialization and parsing of iCode lines.

One event per newline-terminated line:

    line      := event " @" INT
    event     := entry | button | scale | yscroll
    entry     := "entry(" ("Ins"|"Del"|"Focus") ") " VTYPE " '" TEXT "' " INT
    button    := "button(" ("Pressed"|"Exit") ")"
    scale     := "Scale(" INT ")"
    yscroll   := "yscroll(" DECIMAL ")"
    VTYPE     := one or more non-space characters
    TEXT      := zero or more characters excluding "'" and newline
    INT       := optional "-" then decimal digits
    DECIMAL   := digits "." digits

The quoted TEXT field has no escape syntax, so single quotes and newlines
are rejected at format time rather than encoded.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal
from enum import Enum
from typing import Iterable, Optional

from .model import (
    EntryPayload,
    Event,
    EventKind,
    EventTrace,
    IcodeError,
)


class MalformedLineError(IcodeError):
    """A line does not match the grammar (strict mode)."""

    def __init__(self, line_no: int, position: int, expected: str):
        self.line_no = line_no
        self.position = position
        self.expected = expected
        super().__init__(f"line {line_no}, col {position + 1}: expected {expected}")


class UnserializableError(IcodeError):
    """The event has no canonical line form."""


class ParseMode(str, Enum):
    STRICT = "strict"
    RECOVERY = "recovery"


@dataclass(frozen=True)
class ParseOutcome:
    """Per-line parse result.

    A well-formed line yields an event; a malformed line in recovery mode
    yields an Error event plus a diagnostic naming the first offending
    character position.
    """

    event: Optional[Event]
    diagnostic: Optional[str]
    line_no: int


class _Fail(Exception):
    def __init__(self, pos: int, expected: str):
        self.pos = pos
        self.expected = expected


class _Scanner:
    __slots__ = ("text", "pos")

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def literal(self, lit: str, expected: Optional[str] = None) -> None:
        if self.text.startswith(lit, self.pos):
            self.pos += len(lit)
        else:
            raise _Fail(self.pos, expected or repr(lit))

    def _digits(self) -> None:
        text, start = self.text, self.pos
        while self.pos < len(text) and "0" <= text[self.pos] <= "9":
            self.pos += 1
        if self.pos == start:
            raise _Fail(self.pos, "decimal digits")

    def integer(self) -> int:
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] == "-":
            self.pos += 1
        self._digits()
        return int(self.text[start : self.pos])

    def decimal(self) -> float:
        start = self.pos
        self._digits()
        self.literal(".", "'.' in decimal")
        self._digits()
        return float(self.text[start : self.pos])

    def until(self, stop: str) -> str:
        start = self.pos
        idx = self.text.find(stop, start)
        if idx < 0:
            raise _Fail(len(self.text), repr(stop))
        self.pos = idx
        return self.text[start:idx]

    def non_space_word(self) -> str:
        start = self.pos
        text = self.text
        while self.pos < len(text) and text[self.pos] != " ":
            self.pos += 1
        if self.pos == start:
            raise _Fail(self.pos, "one or more non-space characters")
        return text[start : self.pos]


_ENTRY_KIND = {
    "Ins": EventKind.ENTRY_INSERT,
    "Del": EventKind.ENTRY_DELETE,
    "Focus": EventKind.ENTRY_FOCUS,
}


def _parse_event(s: _Scanner) -> Event:
    text = s.text
    if text.startswith("entry("):
        s.pos = len("entry(")
        for tag, kind in _ENTRY_KIND.items():
            if text.startswith(tag + ")", s.pos):
                s.pos += len(tag)
                break
        else:
            raise _Fail(s.pos, "one of Ins, Del, Focus")
        s.literal(") ")
        vtype = s.non_space_word()
        s.literal(" '")
        changed = s.until("'")
        s.literal("' ")
        index_pos = s.pos
        index = s.integer()
        if index < -1:
            raise _Fail(index_pos, "entry index >= -1")
        if kind is EventKind.ENTRY_FOCUS and index != -1:
            raise _Fail(index_pos, "index -1 on focus events")
        payload = EntryPayload(vtype, changed, index)
    elif text.startswith("button("):
        s.pos = len("button(")
        if text.startswith("Pressed)", s.pos):
            s.pos += len("Pressed")
            kind, payload = EventKind.BUTTON_PRESSED, None
        elif text.startswith("Exit)", s.pos):
            s.pos += len("Exit")
            kind, payload = EventKind.BUTTON_EXIT, None
        else:
            raise _Fail(s.pos, "one of Pressed, Exit")
        s.literal(")")
    elif text.startswith("Scale("):
        s.pos = len("Scale(")
        kind, payload = EventKind.SCALE, s.integer()
        s.literal(")")
    elif text.startswith("yscroll("):
        s.pos = len("yscroll(")
        frac_pos = s.pos
        value = s.decimal()
        if not 0.0 <= value <= 1.0:
            raise _Fail(frac_pos, "fraction in [0, 1]")
        kind, payload = EventKind.YSCROLL, value
        s.literal(")")
    else:
        raise _Fail(0, "one of entry(, button(, Scale(, yscroll(")

    s.literal(" @", "' @' before timestamp")
    raw_time = s.integer()
    if s.pos != len(text):
        raise _Fail(s.pos, "end of line")
    return Event(kind, raw_time, payload)


_SALVAGE_RE = re.compile(r" @(-?[0-9]+)$")


def salvage_raw_time(line: str) -> Optional[int]:
    """Best-effort timestamp recovery from a malformed line."""
    m = _SALVAGE_RE.search(line)
    return int(m.group(1)) if m else None


def parse_line(line: str, line_no: int = 1, mode: ParseMode = ParseMode.STRICT) -> ParseOutcome:
    """Parse one newline-free line into an event.

    Strict mode raises MalformedLineError on the first offending character;
    recovery mode instead yields an Error event (timestamped from the
    line's trailing "@<int>" when salvageable, else 0) plus a diagnostic.
    """
    try:
        return ParseOutcome(_parse_event(_Scanner(line)), None, line_no)
    except _Fail as f:
        if mode is ParseMode.STRICT:
            raise MalformedLineError(line_no, f.pos, f.expected) from None
        raw = salvage_raw_time(line)
        diagnostic = f"col {f.pos + 1}: expected {f.expected}"
        return ParseOutcome(Event.error(raw if raw is not None else 0), diagnostic, line_no)


def _format_fraction(value: float) -> str:
    text = repr(value)
    if "e" in text or "E" in text:
        text = format(Decimal(text), "f")
    if "." not in text:
        text += ".0"
    return text


def _check_text(field: str, value: str, banned: str) -> None:
    for ch in banned:
        if ch in value:
            raise UnserializableError(f"{field} may not contain {ch!r}")


def format_event(e: Event) -> str:
    """Canonical line for a non-Error event; parse_line inverts it exactly."""
    k = e.kind
    if k is EventKind.ERROR:
        raise UnserializableError("Error events have no line form")
    if k is EventKind.BUTTON_PRESSED:
        body = "button(Pressed)"
    elif k is EventKind.BUTTON_EXIT:
        body = "button(Exit)"
    elif k is EventKind.SCALE:
        body = f"Scale({e.payload})"
    elif k is EventKind.YSCROLL:
        body = f"yscroll({_format_fraction(e.payload)})"
    else:
        p = e.payload
        _check_text("vtype", p.vtype, " \n\r")
        if not p.vtype:
            raise UnserializableError("vtype may not be empty")
        _check_text("changed text", p.changed, "'\n\r")
        tag = {
            EventKind.ENTRY_INSERT: "Ins",
            EventKind.ENTRY_DELETE: "Del",
            EventKind.ENTRY_FOCUS: "Focus",
        }[k]
        body = f"entry({tag}) {p.vtype} '{p.changed}' {p.index}"
    return f"{body} @{e.raw_time}"


def canonical_line(e: Event, effective_raw: Optional[int] = None) -> str:
    """Line form for any event, including Error placeholders.

    Error events serialize as "!error @<t>", which no grammar rule matches,
    so reparsing them yields an Error event at the same salvaged time.
    """
    if e.kind is EventKind.ERROR:
        raw = e.raw_time if effective_raw is None else effective_raw
        return f"!error @{raw}"
    return format_event(e)


def parse_stream(
    lines: Iterable[str], mode: ParseMode = ParseMode.STRICT
) -> tuple[EventTrace, list[str]]:
    """Parse newline-free lines into a normalized trace.

    Strict mode propagates the first MalformedLineError or OutOfOrderError.
    Recovery mode never drops a line: malformed lines become Error events
    timestamped at the stream position where the parse failed, out-of-order
    times are clamped, and every incident lands in the diagnostics list.
    """
    trace = EventTrace()
    diagnostics: list[str] = []
    strict = mode is ParseMode.STRICT
    for line_no, line in enumerate(lines, 1):
        outcome = parse_line(line, line_no, mode)
        event = outcome.event
        if outcome.diagnostic is not None:
            diagnostics.append(f"line {line_no}: {outcome.diagnostic}")
            if salvage_raw_time(line) is None and len(trace):
                event = Event.error(trace.epoch + trace.rel_times[-1])
        warning = trace.append(event, strict=strict)
        if warning is not None:
            diagnostics.append(f"line {line_no}: {warning}")
    return trace, diagnostics
