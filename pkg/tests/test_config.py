import pytest

from icode.analyzers import BUTTON_BURST, FAST_ENTRY
from icode.config import EngineConfig, load_config, parse_config, resolve_config
from icode.planner import PagingPolicy


def test_defaults():
    config = EngineConfig()
    assert config.analyzer.fastest_avg_entry_ms == 330.0
    assert config.situation.s1_consecutive_ko == 3
    assert config.context.screen_width == 260
    assert config.paging_policy is None
    assert config.safe_default_action == "alert"


def test_parse_full_file():
    config = parse_config(
        """
        # analyzer
        fastest_avg_entry_ms = 250.0
        enabled_detectors = button-burst, fast-entry

        s1_consecutive_ko = 2
        s2_consecutive_fast = 4
        s2_superhuman_ms = 80.0
        perf_deadline_ms = 5000

        screen_width = 320   # handheld, landscape
        screen_height = 480
        scale_initial_length = 100
        scale_growth_step = 10
        scale_margin = 5
        reorient_length = 300

        paging_policy = winner_takes_all
        safe_default_action = lock
        scale_widget = size_slider
        """
    )
    assert config.analyzer.fastest_avg_entry_ms == 250.0
    assert config.analyzer.enabled_detectors == frozenset({BUTTON_BURST, FAST_ENTRY})
    assert config.situation.s1_consecutive_ko == 2
    assert config.situation.perf_deadline_ms == 5000
    assert config.context.screen_width == 320
    assert config.context.reorient_length == 300
    assert config.paging_policy is PagingPolicy.WINNER_TAKES_ALL
    assert config.safe_default_action == "lock"
    assert config.scale_widget == "size_slider"


def test_unknown_key_rejected():
    with pytest.raises(ValueError, match="unknown key"):
        parse_config("mystery_knob = 5")


def test_missing_equals_rejected():
    with pytest.raises(ValueError, match="key = value"):
        parse_config("just words")


def test_unknown_detector_rejected():
    with pytest.raises(ValueError, match="unknown detectors"):
        parse_config("enabled_detectors = tea-leaves")


def test_superhuman_must_sit_below_distress_threshold():
    with pytest.raises(ValueError, match="superhuman"):
        parse_config("s2_superhuman_ms = 400.0")


def test_paging_policy_none():
    assert parse_config("paging_policy = none").paging_policy is None


def test_load_from_file(tmp_path):
    path = tmp_path / "engine.conf"
    path.write_text("s1_consecutive_ko = 5\n")
    assert load_config(str(path)).situation.s1_consecutive_ko == 5


def test_resolve_prefers_explicit_path(tmp_path, monkeypatch):
    explicit = tmp_path / "a.conf"
    explicit.write_text("s1_consecutive_ko = 7\n")
    fallback = tmp_path / "b.conf"
    fallback.write_text("s1_consecutive_ko = 9\n")
    monkeypatch.setenv("ICODE_CONFIG", str(fallback))
    assert resolve_config(str(explicit)).situation.s1_consecutive_ko == 7
    assert resolve_config(None).situation.s1_consecutive_ko == 9


def test_resolve_without_any_source(monkeypatch):
    monkeypatch.delenv("ICODE_CONFIG", raising=False)
    assert resolve_config(None) == EngineConfig()
