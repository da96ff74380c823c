"""Planning: turn detections and situations into UI adaptation directives.

The planner is pure. It works against an abstract UI model sized in
screen units: a 260-unit-wide handheld screen whose height exceeds 260,
with a scale widget that grows by 20 units per flagged burst of scale
actions until it no longer fits horizontally and flips vertical at 260
units. Widget paging reallocates screen space by usage frequency.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .analyzers import Detection
from .model import IcodeError, Millis
from .situations import Situation, SituationId


class UnknownWidgetError(IcodeError):
    """The UI model has no widget with the requested id."""


class NotPagedError(IcodeError):
    """Restore requested while no widget holds the page."""


class Orientation(str, Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"


class PagingPolicy(str, Enum):
    WINNER_TAKES_ALL = "winner_takes_all"
    LFU_EVICT = "lfu_evict"


@dataclass
class ContextModel:
    """Deployment assumptions constraining planned adaptations."""

    screen_width: int = 260
    screen_height: int = 320
    scale_initial_length: int = 200
    scale_growth_step: int = 20
    scale_margin: int = 0
    reorient_length: int = 260
    user_profile: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.screen_height <= 260:
            raise ValueError("screen_height must exceed 260 units")
        if self.screen_width < 1 or self.scale_growth_step < 1:
            raise ValueError("screen_width and scale_growth_step must be positive")
        if self.scale_margin < 0:
            raise ValueError("scale_margin must be >= 0")


@dataclass
class WidgetState:
    id: str
    orientation: Orientation = Orientation.HORIZONTAL
    length: int = 0
    usage_count: int = 0
    last_used: Millis = 0
    visible: bool = True


@dataclass
class UIModel:
    widgets: list[WidgetState] = field(default_factory=list)
    paged_to: Optional[str] = None

    def widget(self, widget_id: str) -> WidgetState:
        for w in self.widgets:
            if w.id == widget_id:
                return w
        raise UnknownWidgetError(widget_id)

    def visible_widgets(self) -> list[WidgetState]:
        return [w for w in self.widgets if w.visible]


class DirectiveKind(str, Enum):
    RESIZE = "resize"
    REORIENT = "reorient"
    LOCK = "lock"
    UNLOCK = "unlock"
    ALERT = "alert"
    PAGE = "page"
    RESTORE = "restore"
    CHALLENGE = "challenge"
    EVICT = "evict"


@dataclass(frozen=True)
class Directive:
    """A planned corrective action on the abstract UI."""

    kind: DirectiveKind
    params: dict = field(default_factory=dict)

    @classmethod
    def resize(cls, widget: str, length: int) -> "Directive":
        return cls(DirectiveKind.RESIZE, {"widget": widget, "length": length})

    @classmethod
    def reorient(cls, widget: str, orientation: Orientation, length: int) -> "Directive":
        return cls(
            DirectiveKind.REORIENT,
            {"widget": widget, "orientation": orientation.value, "length": length},
        )

    @classmethod
    def lock(cls, reason: SituationId) -> "Directive":
        return cls(DirectiveKind.LOCK, {"reason": reason.value})

    @classmethod
    def unlock(cls) -> "Directive":
        return cls(DirectiveKind.UNLOCK)

    @classmethod
    def alert(cls, level: str, message: str) -> "Directive":
        return cls(DirectiveKind.ALERT, {"level": level, "message": message})

    @classmethod
    def page(cls, winner: str) -> "Directive":
        return cls(DirectiveKind.PAGE, {"winner": winner})

    @classmethod
    def restore(cls) -> "Directive":
        return cls(DirectiveKind.RESTORE)

    @classmethod
    def challenge(cls, kind: str = "captcha") -> "Directive":
        return cls(DirectiveKind.CHALLENGE, {"kind": kind})

    @classmethod
    def evict(cls, widget: str) -> "Directive":
        return cls(DirectiveKind.EVICT, {"widget": widget})


def plan_scale(widget: WidgetState, burst: Detection, ctx: ContextModel) -> Optional[Directive]:
    """Grow the scale widget for a flagged burst, flipping when out of room.

    Horizontal growth steps by ctx.scale_growth_step while the grown
    length still sits strictly inside the screen width (minus margin);
    the burst that would fill it instead reorients the widget vertically
    at ctx.reorient_length (capped by screen height). A vertical widget
    saturates: no further directive.
    """
    if widget.orientation is Orientation.VERTICAL:
        return None
    grown = widget.length + ctx.scale_growth_step
    if grown < ctx.screen_width - ctx.scale_margin:
        return Directive.resize(widget.id, grown)
    return Directive.reorient(
        widget.id, Orientation.VERTICAL, min(ctx.reorient_length, ctx.screen_height)
    )


_SAFE_DEFAULT_ACTIONS = ("alert", "lock")


def plan_situation(s: Situation, safe_default_action: str = "alert") -> list[Directive]:
    """Corrective directives for a newly declared situation."""
    if not s.active:
        raise ValueError("cannot plan for an inactive situation")
    if s.id is SituationId.S1_USER_CHANGED:
        return [
            Directive.lock(s.id),
            Directive.alert("warning", "user-change-suspected"),
        ]
    if s.id is SituationId.S2_BOT_TAKEOVER:
        return [
            Directive.lock(s.id),
            Directive.challenge(),
            Directive.alert("critical", "automation-suspected"),
        ]
    if safe_default_action not in _SAFE_DEFAULT_ACTIONS:
        raise ValueError(f"safe_default_action must be one of {_SAFE_DEFAULT_ACTIONS}")
    directives = [Directive.alert("warning", "response-deadline-exceeded")]
    if safe_default_action == "lock":
        directives.append(Directive.lock(s.id))
    return directives


def plan_paging(ui: UIModel, policy: PagingPolicy, ctx: ContextModel) -> Optional[Directive]:
    """Reallocate screen space by usage frequency.

    winner_takes_all pages to the most-used widget (ties to the most
    recently used, then list order) unless it already holds the page.
    lfu_evict hides the least-used visible widget once the visible
    widgets demand more length than the screen width, never evicting the
    last one standing.
    """
    if not ui.widgets:
        raise ValueError("paging needs at least one widget")
    if policy is PagingPolicy.WINNER_TAKES_ALL:
        winner = ui.widgets[0]
        for w in ui.widgets[1:]:
            if (w.usage_count, w.last_used) > (winner.usage_count, winner.last_used):
                winner = w
        if ui.paged_to == winner.id:
            return None
        return Directive.page(winner.id)

    visible = ui.visible_widgets()
    if len(visible) <= 1:
        return None
    if sum(w.length for w in visible) <= ctx.screen_width:
        return None
    victim = visible[0]
    for w in visible[1:]:
        if (w.usage_count, w.last_used) < (victim.usage_count, victim.last_used):
            victim = w
    return Directive.evict(victim.id)


def restore(ui: UIModel) -> Directive:
    """Directive returning a paged UI to its full widget set."""
    if ui.paged_to is None:
        raise NotPagedError("no widget holds the page")
    return Directive.restore()


def _bound_for(orientation: Orientation, ctx: ContextModel) -> int:
    return ctx.screen_width if orientation is Orientation.HORIZONTAL else ctx.screen_height


def apply_directive(ui: UIModel, d: Directive, ctx: ContextModel) -> None:
    """Apply a directive's geometry effect to the UI model.

    Lock, unlock, alert, and challenge directives have no geometry effect;
    the session runtime owns that state.
    """
    if d.kind is DirectiveKind.RESIZE:
        w = ui.widget(d.params["widget"])
        length = d.params["length"]
        if length > _bound_for(w.orientation, ctx):
            raise ValueError(f"resize of {w.id} to {length} exceeds the screen bound")
        w.length = length
    elif d.kind is DirectiveKind.REORIENT:
        w = ui.widget(d.params["widget"])
        orientation = Orientation(d.params["orientation"])
        length = d.params["length"]
        if length > _bound_for(orientation, ctx):
            raise ValueError(f"reorient of {w.id} to {length} exceeds the screen bound")
        w.orientation = orientation
        w.length = length
    elif d.kind is DirectiveKind.PAGE:
        winner = ui.widget(d.params["winner"])
        ui.paged_to = winner.id
        for w in ui.widgets:
            w.visible = w.id == winner.id
    elif d.kind is DirectiveKind.RESTORE:
        ui.paged_to = None
        for w in ui.widgets:
            w.visible = True
    elif d.kind is DirectiveKind.EVICT:
        ui.widget(d.params["widget"]).visible = False
