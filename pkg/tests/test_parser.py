import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from icode.model import Event, EventKind, OutOfOrderError
from icode.parser import (
    MalformedLineError,
    ParseMode,
    UnserializableError,
    canonical_line,
    format_event,
    parse_line,
    parse_stream,
    salvage_raw_time,
)

from .strategies import serializable_events


class TestParseLine:
    def test_button_pressed(self):
        event = parse_line("button(Pressed) @1361881945123").event
        assert event == Event.button_pressed(1361881945123)

    def test_scale(self):
        event = parse_line("Scale(40) @7").event
        assert event == Event.scale(40, 7)

    def test_entry_insert(self):
        event = parse_line("entry(Ins) key 'a' 3 @250").event
        assert event == Event.entry_insert("key", "a", 3, 250)

    def test_entry_focus(self):
        event = parse_line("entry(Focus) focusin '' -1 @0").event
        assert event == Event.entry_focus("focusin", 0)

    def test_yscroll(self):
        event = parse_line("yscroll(0.25) @10").event
        assert event == Event.yscroll(0.25, 10)

    def test_negative_times_and_values(self):
        assert parse_line("Scale(-5) @-100").event == Event.scale(-5, -100)

    def test_garbage_recovery_yields_error_and_diagnostic(self):
        outcome = parse_line("garbage @@", 1, ParseMode.RECOVERY)
        assert outcome.event.kind is EventKind.ERROR
        assert outcome.diagnostic is not None

    def test_garbage_strict_raises_with_position(self):
        with pytest.raises(MalformedLineError) as exc:
            parse_line("garbage @@", 3)
        assert exc.value.line_no == 3
        assert exc.value.position == 0
        assert "expected" in str(exc.value)

    def test_position_points_at_first_offending_character(self):
        with pytest.raises(MalformedLineError) as exc:
            parse_line("Scale(40] @7")
        assert exc.value.position == 8

    def test_trailing_garbage_rejected(self):
        with pytest.raises(MalformedLineError):
            parse_line("Scale(40) @7 tail")

    def test_missing_timestamp_rejected(self):
        with pytest.raises(MalformedLineError):
            parse_line("button(Pressed)")

    def test_yscroll_out_of_range_rejected(self):
        with pytest.raises(MalformedLineError):
            parse_line("yscroll(1.5) @0")

    def test_focus_with_nonzero_index_rejected(self):
        with pytest.raises(MalformedLineError):
            parse_line("entry(Focus) focusin '' 3 @0")

    def test_entry_index_below_minus_one_rejected(self):
        with pytest.raises(MalformedLineError):
            parse_line("entry(Ins) key 'a' -2 @0")

    def test_recovery_salvages_trailing_timestamp(self):
        outcome = parse_line("junk but stamped @77", 1, ParseMode.RECOVERY)
        assert outcome.event.raw_time == 77


class TestFormatEvent:
    def test_button_exit(self):
        assert format_event(Event.button_exit(99)) == "button(Exit) @99"

    def test_entry_focus(self):
        assert format_event(Event.entry_focus("focusin", 0)) == "entry(Focus) focusin '' -1 @0"

    def test_scale(self):
        assert format_event(Event.scale(70, 0)) == "Scale(70) @0"

    def test_error_event_unserializable(self):
        with pytest.raises(UnserializableError):
            format_event(Event.error(0))

    def test_quote_in_changed_rejected(self):
        event = Event.entry_insert("key", "it's", 0, 0)
        with pytest.raises(UnserializableError):
            format_event(event)

    def test_tiny_fraction_stays_in_grammar(self):
        line = format_event(Event.yscroll(1e-05, 3))
        assert "e" not in line.split(" @")[0]
        assert parse_line(line).event == Event.yscroll(1e-05, 3)

    def test_canonical_line_for_error_events(self):
        assert canonical_line(Event.error(42)) == "!error @42"
        assert parse_line("!error @42", 1, ParseMode.RECOVERY).event.kind is EventKind.ERROR


@given(serializable_events())
@settings(max_examples=300)
def test_round_trip(event):
    assert parse_line(format_event(event)).event == event


class TestParseStream:
    def test_empty_input(self):
        trace, diagnostics = parse_stream([])
        assert len(trace) == 0
        assert diagnostics == []

    def test_recovery_keeps_every_line(self):
        lines = [
            "button(Pressed) @100",
            "entry(Ins) key 'x' 0 @300",
            "entry(Ins) key 'y' 1 @500",
            "this is not icode",
        ]
        trace, diagnostics = parse_stream(lines, ParseMode.RECOVERY)
        assert len(trace) == 4
        assert trace.events[3].kind is EventKind.ERROR
        assert len(diagnostics) == 1

    def test_error_event_timestamped_at_failure_position(self):
        lines = ["button(Pressed) @100", "garbage", "button(Exit) @900"]
        trace, _ = parse_stream(lines, ParseMode.RECOVERY)
        assert trace.rel_times == [0, 0, 800]

    def test_error_event_uses_salvaged_timestamp(self):
        lines = ["button(Pressed) @100", "garbage @600", "button(Exit) @900"]
        trace, _ = parse_stream(lines, ParseMode.RECOVERY)
        assert trace.rel_times == [0, 500, 800]

    def test_strict_aborts_on_malformed(self):
        with pytest.raises(MalformedLineError):
            parse_stream(["button(Pressed) @100", "nope"], ParseMode.STRICT)

    def test_strict_aborts_on_out_of_order(self):
        lines = ["button(Pressed) @100", "button(Pressed) @50"]
        with pytest.raises(OutOfOrderError):
            parse_stream(lines, ParseMode.STRICT)

    def test_recovery_clamps_out_of_order(self):
        lines = ["button(Pressed) @100", "button(Pressed) @50"]
        trace, diagnostics = parse_stream(lines, ParseMode.RECOVERY)
        assert trace.rel_times == [0, 0]
        assert len(diagnostics) == 1

    def test_determinism(self):
        lines = ["button(Pressed) @5", "junk", "Scale(9) @12"]
        assert parse_stream(lines, ParseMode.RECOVERY) == parse_stream(
            lines, ParseMode.RECOVERY
        )

    def test_appended_exit_lands_as_button(self):
        lines = ["entry(Ins) key 'a' 0 @100", "button(Exit) @900"]
        trace, _ = parse_stream(lines)
        assert trace.events[-1].kind is EventKind.BUTTON_EXIT


def test_salvage_raw_time():
    assert salvage_raw_time("anything @123") == 123
    assert salvage_raw_time("anything @-9") == -9
    assert salvage_raw_time("anything @@") is None
    assert salvage_raw_time("no stamp") is None


@given(serializable_events())
@settings(max_examples=100)
def test_stream_round_trip_single(event):
    trace, diagnostics = parse_stream([format_event(event)])
    assert diagnostics == []
    assert trace.events == [event]


@given(
    st.lists(
        st.one_of(
            st.sampled_from(["garbage", "Scale(", "entry(Ins) key 'a'", ""]),
            st.integers(0, 5000).map(lambda t: f"button(Pressed) @{t}"),
            st.integers(0, 5000).map(lambda t: f"Scale(40) @{t}"),
        ),
        max_size=25,
    )
)
@settings(max_examples=150)
def test_recovery_never_drops_a_line(lines):
    trace, _ = parse_stream(lines, ParseMode.RECOVERY)
    assert len(trace) == len(lines)
    assert all(a <= b for a, b in zip(trace.rel_times, trace.rel_times[1:]))
