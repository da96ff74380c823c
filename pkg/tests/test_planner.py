import pytest
from hypothesis import given
from hypothesis import strategies as st

from icode.analyzers import Detection, Verdict
from icode.planner import (
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
from icode.situations import Situation, SituationId

BURST = Detection("scale-burst", Verdict.KO, (0, 3), {"run_length": 3})


def scale_widget(length=200, orientation=Orientation.HORIZONTAL):
    return WidgetState("age_scale", orientation, length)


class TestPlanScale:
    def test_growth_from_initial(self):
        d = plan_scale(scale_widget(200), BURST, ContextModel())
        assert d == Directive.resize("age_scale", 220)

    def test_growth_to_240(self):
        d = plan_scale(scale_widget(220), BURST, ContextModel())
        assert d == Directive.resize("age_scale", 240)

    def test_flip_at_240(self):
        d = plan_scale(scale_widget(240), BURST, ContextModel())
        assert d == Directive.reorient("age_scale", Orientation.VERTICAL, 260)

    def test_vertical_saturates(self):
        w = scale_widget(260, Orientation.VERTICAL)
        assert plan_scale(w, BURST, ContextModel()) is None

    def test_trajectory_from_defaults(self):
        ctx = ContextModel()
        ui = UIModel([scale_widget(ctx.scale_initial_length)])
        produced = []
        for _ in range(3):
            d = plan_scale(ui.widget("age_scale"), BURST, ctx)
            produced.append(d)
            apply_directive(ui, d, ctx)
        assert produced == [
            Directive.resize("age_scale", 220),
            Directive.resize("age_scale", 240),
            Directive.reorient("age_scale", Orientation.VERTICAL, 260),
        ]

    def test_margin_pulls_flip_earlier(self):
        ctx = ContextModel(scale_margin=30)
        d = plan_scale(scale_widget(220), BURST, ctx)
        assert d.kind is DirectiveKind.REORIENT

    def test_reorient_length_capped_by_screen_height(self):
        ctx = ContextModel(screen_height=261, reorient_length=400)
        d = plan_scale(scale_widget(250), BURST, ctx)
        assert d.params["length"] == 261


@given(
    st.integers(100, 400),
    st.integers(1, 100),
    st.integers(0, 50),
    st.integers(261, 500),
    st.integers(0, 12),
)
def test_geometry_safety_under_any_burst_sequence(width, step, margin, height, bursts):
    ctx = ContextModel(
        screen_width=width,
        screen_height=height,
        scale_growth_step=step,
        scale_margin=margin,
        scale_initial_length=1,
    )
    ui = UIModel([scale_widget(min(100, width))])
    for _ in range(bursts):
        d = plan_scale(ui.widget("age_scale"), BURST, ctx)
        if d is None:
            break
        apply_directive(ui, d, ctx)
        w = ui.widget("age_scale")
        bound = width if w.orientation is Orientation.HORIZONTAL else height
        assert w.length <= bound


class TestPlanSituation:
    def test_s1_locks_and_alerts(self):
        directives = plan_situation(Situation(SituationId.S1_USER_CHANGED, 0, [BURST]))
        assert [d.kind for d in directives] == [DirectiveKind.LOCK, DirectiveKind.ALERT]
        assert directives[0].params["reason"] == "S1_UserChanged"

    def test_s2_locks_challenges_alerts(self):
        directives = plan_situation(Situation(SituationId.S2_BOT_TAKEOVER, 0, [BURST]))
        assert [d.kind for d in directives] == [
            DirectiveKind.LOCK,
            DirectiveKind.CHALLENGE,
            DirectiveKind.ALERT,
        ]
        assert directives[1].params["kind"] == "captcha"
        assert directives[2].params["level"] == "critical"

    def test_perf_failure_alert_only_by_default(self):
        directives = plan_situation(Situation(SituationId.PERF_FAILURE, 0))
        assert [d.kind for d in directives] == [DirectiveKind.ALERT]

    def test_perf_failure_configured_safe_default(self):
        directives = plan_situation(
            Situation(SituationId.PERF_FAILURE, 0), safe_default_action="lock"
        )
        assert [d.kind for d in directives] == [DirectiveKind.ALERT, DirectiveKind.LOCK]

    def test_inactive_situation_rejected(self):
        dead = Situation(SituationId.S1_USER_CHANGED, 0, [BURST], active=False)
        with pytest.raises(ValueError):
            plan_situation(dead)


def ui_with_counts(counts, last_used=None, lengths=None):
    last_used = last_used or [0] * len(counts)
    lengths = lengths or [50] * len(counts)
    return UIModel(
        [
            WidgetState(f"w{i + 1}", length=lengths[i], usage_count=counts[i], last_used=last_used[i])
            for i in range(len(counts))
        ]
    )


class TestPaging:
    def test_winner_is_argmax(self):
        ui = ui_with_counts([5, 2, 9])
        d = plan_paging(ui, PagingPolicy.WINNER_TAKES_ALL, ContextModel())
        assert d == Directive.page("w3")

    def test_tie_broken_by_recency(self):
        ui = ui_with_counts([4, 4], last_used=[100, 200])
        d = plan_paging(ui, PagingPolicy.WINNER_TAKES_ALL, ContextModel())
        assert d == Directive.page("w2")

    def test_full_tie_prefers_list_order(self):
        ui = ui_with_counts([4, 4], last_used=[100, 100])
        d = plan_paging(ui, PagingPolicy.WINNER_TAKES_ALL, ContextModel())
        assert d == Directive.page("w1")

    def test_already_paged_is_idempotent(self):
        ui = ui_with_counts([5, 2, 9])
        ui.paged_to = "w3"
        assert plan_paging(ui, PagingPolicy.WINNER_TAKES_ALL, ContextModel()) is None

    @given(st.lists(st.tuples(st.integers(0, 50), st.integers(0, 1000)), min_size=1, max_size=8))
    def test_argmax_against_brute_force(self, pairs):
        counts = [c for c, _ in pairs]
        used = [u for _, u in pairs]
        ui = ui_with_counts(counts, last_used=used)
        d = plan_paging(ui, PagingPolicy.WINNER_TAKES_ALL, ContextModel())
        best = max(range(len(pairs)), key=lambda i: (counts[i], used[i], -i))
        assert d == Directive.page(f"w{best + 1}")

    @given(
        st.lists(st.integers(0, 50), min_size=1, max_size=6),
        st.integers(1, 10),
    )
    def test_scaling_counts_preserves_winner(self, counts, k):
        first = plan_paging(ui_with_counts(counts), PagingPolicy.WINNER_TAKES_ALL, ContextModel())
        scaled = plan_paging(
            ui_with_counts([c * k for c in counts]),
            PagingPolicy.WINNER_TAKES_ALL,
            ContextModel(),
        )
        assert first == scaled

    def test_lfu_evicts_least_used_when_overcommitted(self):
        ui = ui_with_counts([5, 1, 3], lengths=[100, 100, 100])
        d = plan_paging(ui, PagingPolicy.LFU_EVICT, ContextModel())
        assert d == Directive.evict("w2")

    def test_lfu_quiet_when_everything_fits(self):
        ui = ui_with_counts([5, 1], lengths=[100, 100])
        assert plan_paging(ui, PagingPolicy.LFU_EVICT, ContextModel()) is None

    def test_lfu_never_evicts_last_widget(self):
        ui = ui_with_counts([1], lengths=[500])
        assert plan_paging(ui, PagingPolicy.LFU_EVICT, ContextModel()) is None

    def test_paging_requires_a_widget(self):
        with pytest.raises(ValueError):
            plan_paging(UIModel([]), PagingPolicy.WINNER_TAKES_ALL, ContextModel())


class TestRestore:
    def paged_ui(self):
        ui = ui_with_counts([5, 2, 9])
        apply_directive(ui, Directive.page("w3"), ContextModel())
        return ui

    def test_restore_returns_all_widgets(self):
        ui = self.paged_ui()
        assert [w.visible for w in ui.widgets] == [False, False, True]
        d = restore(ui)
        apply_directive(ui, d, ContextModel())
        assert all(w.visible for w in ui.widgets)
        assert ui.paged_to is None

    def test_restore_unpaged_errors(self):
        with pytest.raises(NotPagedError):
            restore(ui_with_counts([1, 2]))

    def test_restore_does_not_reset_counts(self):
        ui = self.paged_ui()
        apply_directive(ui, restore(ui), ContextModel())
        d = plan_paging(ui, PagingPolicy.WINNER_TAKES_ALL, ContextModel())
        assert d == Directive.page("w3")


class TestApplyDirective:
    def test_unknown_widget(self):
        with pytest.raises(UnknownWidgetError):
            UIModel([scale_widget()]).widget("missing")

    def test_resize_beyond_bound_rejected(self):
        ui = UIModel([scale_widget(200)])
        with pytest.raises(ValueError):
            apply_directive(ui, Directive.resize("age_scale", 1000), ContextModel())

    def test_lock_has_no_geometry_effect(self):
        ui = UIModel([scale_widget(200)])
        apply_directive(ui, Directive.lock(SituationId.S1_USER_CHANGED), ContextModel())
        assert ui.widget("age_scale").length == 200

    def test_evict_hides_widget(self):
        ui = ui_with_counts([1, 2])
        apply_directive(ui, Directive.evict("w1"), ContextModel())
        assert not ui.widget("w1").visible


def test_context_model_validation():
    with pytest.raises(ValueError):
        ContextModel(screen_height=260)
    with pytest.raises(ValueError):
        ContextModel(scale_margin=-1)
