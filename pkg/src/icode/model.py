"""Event vocabulary and the normalized interaction trace.

An interaction session is a stream of atomic UI actions ("iCode" events),
each stamped with a raw millisecond clock reading. EventTrace normalizes
those raw clocks into nondecreasing times relative to the first event.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

Millis = int  # milliseconds; raw clocks are arbitrary signed 64-bit values


class IcodeError(Exception):
    """Base class for errors raised by this package."""


class OutOfOrderError(IcodeError):
    """Raised in strict mode when an event's time precedes the trace tail."""


class EventKind(str, Enum):
    ENTRY_INSERT = "EntryInsert"
    ENTRY_DELETE = "EntryDelete"
    ENTRY_FOCUS = "EntryFocus"
    BUTTON_PRESSED = "ButtonPressed"
    BUTTON_EXIT = "ButtonExit"
    SCALE = "Scale"
    YSCROLL = "YScroll"
    ERROR = "Error"


class ActionCategory(str, Enum):
    """The action alphabet the detectors scan."""

    ENTRY = "ENTRY"
    BUTTON = "BUTTON"
    SCALE = "SCALE"
    YSCROLL = "YSCROLL"
    ERROR = "ERROR"


_ENTRY_KINDS = frozenset(
    {EventKind.ENTRY_INSERT, EventKind.ENTRY_DELETE, EventKind.ENTRY_FOCUS}
)
_BUTTON_KINDS = frozenset({EventKind.BUTTON_PRESSED, EventKind.BUTTON_EXIT})


@dataclass(frozen=True)
class EntryPayload:
    """Payload of text-entry events.

    vtype is the validation-condition name reported by the toolkit,
    changed the inserted/deleted character string, index the character
    position (-1 for focus events).
    """

    vtype: str
    changed: str
    index: int

    def __post_init__(self) -> None:
        if self.index < -1:
            raise ValueError(f"entry index must be >= -1, got {self.index}")


Payload = Union[EntryPayload, int, float, None]


@dataclass(frozen=True)
class Event:
    """One atomic UI action: kind, kind-specific payload, raw clock time."""

    kind: EventKind
    raw_time: Millis
    payload: Payload = None

    def __post_init__(self) -> None:
        k, p = self.kind, self.payload
        if k in _ENTRY_KINDS:
            if not isinstance(p, EntryPayload):
                raise ValueError(f"{k.value} requires an EntryPayload")
            if k is EventKind.ENTRY_FOCUS and p.index != -1:
                raise ValueError("focus events carry index -1")
        elif k is EventKind.SCALE:
            if not isinstance(p, int) or isinstance(p, bool):
                raise ValueError("Scale requires an integer payload")
        elif k is EventKind.YSCROLL:
            if not isinstance(p, float) or not (0.0 <= p <= 1.0):
                raise ValueError("YScroll requires a fraction in [0, 1]")
        elif p is not None:
            raise ValueError(f"{k.value} carries no payload")

    @classmethod
    def entry_insert(cls, vtype: str, changed: str, index: int, raw_time: Millis) -> "Event":
        return cls(EventKind.ENTRY_INSERT, raw_time, EntryPayload(vtype, changed, index))

    @classmethod
    def entry_delete(cls, vtype: str, changed: str, index: int, raw_time: Millis) -> "Event":
        return cls(EventKind.ENTRY_DELETE, raw_time, EntryPayload(vtype, changed, index))

    @classmethod
    def entry_focus(cls, vtype: str, raw_time: Millis, changed: str = "") -> "Event":
        return cls(EventKind.ENTRY_FOCUS, raw_time, EntryPayload(vtype, changed, -1))

    @classmethod
    def button_pressed(cls, raw_time: Millis) -> "Event":
        return cls(EventKind.BUTTON_PRESSED, raw_time)

    @classmethod
    def button_exit(cls, raw_time: Millis) -> "Event":
        return cls(EventKind.BUTTON_EXIT, raw_time)

    @classmethod
    def scale(cls, value: int, raw_time: Millis) -> "Event":
        return cls(EventKind.SCALE, raw_time, value)

    @classmethod
    def yscroll(cls, fraction: float, raw_time: Millis) -> "Event":
        return cls(EventKind.YSCROLL, raw_time, fraction)

    @classmethod
    def error(cls, raw_time: Millis) -> "Event":
        return cls(EventKind.ERROR, raw_time)


def category(e: Event) -> ActionCategory:
    """Map an event to its action category (total over all kinds)."""
    if e.kind in _ENTRY_KINDS:
        return ActionCategory.ENTRY
    if e.kind in _BUTTON_KINDS:
        return ActionCategory.BUTTON
    if e.kind is EventKind.SCALE:
        return ActionCategory.SCALE
    if e.kind is EventKind.YSCROLL:
        return ActionCategory.YSCROLL
    return ActionCategory.ERROR


@dataclass
class EventTrace:
    """Ordered events with times normalized relative to the first event.

    Invariants: len(events) == len(rel_times); rel_times[0] == 0 for a
    non-empty trace; rel_times is nondecreasing. The epoch is taken from
    the first appended event unconditionally (a raw clock of 0 is a
    legitimate epoch).

    Single-writer append; a finished trace may be read from any thread.
    """

    events: list[Event] = field(default_factory=list)
    rel_times: list[Millis] = field(default_factory=list)
    epoch: Millis = 0

    def __len__(self) -> int:
        return len(self.events)

    def append(self, e: Event, *, strict: bool = True) -> Optional[str]:
        """Append an event, normalizing its time against the epoch.

        In strict mode an event older than the trace tail raises
        OutOfOrderError; in lenient mode its time is clamped to the last
        relative time and a warning string is returned.
        """
        if not self.events:
            self.epoch = e.raw_time
            self.events.append(e)
            self.rel_times.append(0)
            return None
        rel = e.raw_time - self.epoch
        last = self.rel_times[-1]
        warning = None
        if rel < last:
            if strict:
                raise OutOfOrderError(
                    f"event time {e.raw_time} precedes trace tail "
                    f"(relative {rel} < {last})"
                )
            warning = f"out-of-order time {e.raw_time} clamped to relative {last}"
            rel = last
        self.events.append(e)
        self.rel_times.append(rel)
        return warning

    def categories(self) -> list[ActionCategory]:
        return [category(e) for e in self.events]
