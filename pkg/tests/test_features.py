import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mrtsim import features
from mrtsim.features import (
    AlgState,
    ExpAverageParams,
    ParticipantLog,
    build_fresh_state,
    build_stale_state,
    closed_horizon,
    denormalize_abar,
    denormalize_bbar,
    exp_average,
    exp_average_batch,
    normalize_abar,
    normalize_bbar,
)

PARAMS = ExpAverageParams()

# Oracle: exact fraction arithmetic of (1 - g) / (1 - g^14) with g = 13/14.
C_GAMMA = 0.11062796612417193


def test_weight_normalization_identity():
    g = PARAMS.gamma
    total = PARAMS.c_gamma * sum(g ** (j - 1) for j in range(1, 15))
    assert abs(total - 1.0) < 1e-12


def test_c_gamma_value():
    assert PARAMS.c_gamma == pytest.approx(C_GAMMA, abs=1e-15)


def test_exp_average_all_180():
    assert exp_average([180.0] * 14) == pytest.approx(180.0, abs=1e-9)


def test_exp_average_all_zero():
    assert exp_average([0.0] * 14) == 0.0


def test_exp_average_unit_impulse_most_recent():
    hist = [1.0] + [0.0] * 13
    assert exp_average(hist) == pytest.approx(C_GAMMA, abs=1e-12)


def test_exp_average_partial_plain_mean():
    assert exp_average([120.0, 60.0]) == pytest.approx(90.0)


def test_exp_average_empty_default():
    assert exp_average([]) == 0.0
    assert exp_average([], empty_value=-7.0) == -7.0


def test_exp_average_rejects_long_history():
    with pytest.raises(ValueError):
        exp_average([0.0] * 15)


@given(st.lists(st.floats(min_value=0, max_value=180), min_size=1, max_size=14))
def test_exp_average_bounded_by_history(hist):
    val = exp_average(hist)
    assert min(hist) - 1e-9 <= val <= max(hist) + 1e-9


@given(
    st.lists(st.floats(min_value=-50, max_value=50), min_size=14, max_size=14),
    st.lists(st.floats(min_value=-50, max_value=50), min_size=14, max_size=14),
    st.floats(min_value=-3, max_value=3),
)
@settings(max_examples=50)
def test_exp_average_linear(h1, h2, a):
    lhs = exp_average([x + a * y for x, y in zip(h1, h2)])
    rhs = exp_average(h1) + a * exp_average(h2)
    assert lhs == pytest.approx(rhs, abs=1e-8)


def test_normalize_bbar_endpoints():
    assert normalize_bbar(180.0) == pytest.approx(1.0)
    assert normalize_bbar(1.0) == pytest.approx(-1.0)
    assert normalize_bbar(90.5) == pytest.approx(0.0)
    # the raw-zero endpoint sits slightly below -1 by design
    assert normalize_bbar(0.0) == pytest.approx(-1.011173184357542, abs=1e-12)


def test_normalize_bbar_rejects_out_of_range():
    with pytest.raises(ValueError):
        normalize_bbar(-0.5)
    with pytest.raises(ValueError):
        normalize_bbar(180.5)


def test_normalize_abar_endpoints():
    assert normalize_abar(0.0) == -1.0
    assert normalize_abar(1.0) == 1.0
    assert normalize_abar(0.5) == 0.0


@given(st.floats(min_value=0, max_value=180))
def test_bbar_roundtrip(x):
    assert denormalize_bbar(normalize_bbar(x)) == pytest.approx(x, abs=1e-12)


@given(st.floats(min_value=0, max_value=1))
def test_abar_roundtrip(x):
    assert denormalize_abar(normalize_abar(x)) == pytest.approx(x, abs=1e-12)


def test_closed_horizon_rule():
    # day-d states close records through the prior day's morning point
    assert closed_horizon(1) == 0
    assert closed_horizon(2) == 0
    assert closed_horizon(3) == 1
    assert closed_horizon(4) == 1
    assert closed_horizon(5) == 3
    assert closed_horizon(6) == 3


def test_initial_morning_state():
    state = build_fresh_state(ParticipantLog(), 1)
    assert state == AlgState(0, -1.0, -1.0, 0)
    assert np.allclose(state.vector(), [0, -1, -1, 0, 1])


def test_initial_evening_state():
    state = build_fresh_state(ParticipantLog(), 2)
    assert state == AlgState(1, -1.0, -1.0, 0)


def test_fresh_state_partial_history():
    # two closed records: plain-average rule then the normalization maps
    log = ParticipantLog()
    log.append(q=120.0, action=1, app_open=0, window_closed=True)
    log.append(q=60.0, action=0, app_open=1, window_closed=True)
    log.append(q=33.0, action=1, app_open=1, window_closed=False)  # must be ignored
    state = build_fresh_state(log, 5)
    assert state.time_of_day == 0
    assert state.bbar_norm == pytest.approx(normalize_bbar(90.0))
    assert state.abar_norm == pytest.approx(normalize_abar(0.5))
    assert state.prior_day_app == 1  # day-2 morning record's app flag
    assert state.intercept == 1.0


def test_fresh_state_never_reads_open_windows():
    log = ParticipantLog()
    log.append(q=10.0, action=1, app_open=0, window_closed=True)
    log.append(q=180.0, action=1, app_open=0, window_closed=False)
    state = build_fresh_state(log, 4)
    assert state.bbar_norm == pytest.approx(normalize_bbar(10.0))
    assert state.abar_norm == pytest.approx(normalize_abar(1.0))


def test_mark_closed_for_matches_horizon():
    log = ParticipantLog()
    for t in range(1, 9):
        log.append(q=float(t), action=t % 2, app_open=0)
    log.mark_closed_for(7)  # day 4: records through t=5 closed
    assert log.window_closed == [True] * 5 + [False] * 3


def test_stale_state_example():
    state = build_stale_state(0.2, [0] * 14, t=6)
    assert state == AlgState(1, 0.2, -1.0, 0)


def test_stale_state_all_prompts():
    state = build_stale_state(-0.4, [1] * 14, t=4)
    assert state.abar_norm == pytest.approx(1.0)
    assert state.prior_day_app == 0


def test_stale_matches_fresh_on_shared_fields():
    # staleness of zero days: identical action history must give identical abar
    log = ParticipantLog()
    for t in range(1, 6):
        log.append(q=50.0, action=t % 2, app_open=1)
    log.mark_closed_for(7)
    fresh = build_fresh_state(log, 7)
    qs, acts = log.closed_tail(14)
    stale = build_stale_state(fresh.bbar_norm, acts, 7)
    assert stale.time_of_day == fresh.time_of_day
    assert stale.intercept == fresh.intercept
    assert stale.abar_norm == pytest.approx(fresh.abar_norm)
    assert stale.bbar_norm == pytest.approx(fresh.bbar_norm)


def test_alg_state_validation():
    with pytest.raises(ValueError):
        AlgState(0, 0.0, 0.0, 0, intercept=0.5)
    with pytest.raises(ValueError):
        AlgState(2, 0.0, 0.0, 0)


def test_exp_average_batch_agrees_with_scalar():
    rng = np.random.default_rng(3)
    hist = rng.uniform(0, 180, size=(40, 14))
    counts = rng.integers(0, 15, size=40)
    batch = exp_average_batch(hist, counts)
    for i in range(40):
        expect = exp_average(hist[i, : counts[i]].tolist())
        assert batch[i] == pytest.approx(expect, abs=1e-10)


def test_day_parity_convention():
    assert features.day_of(1) == 1 and features.time_of_day(1) == 0
    assert features.day_of(2) == 1 and features.time_of_day(2) == 1
    assert features.day_of(139) == 70 and features.time_of_day(139) == 0
    assert features.day_of(140) == 70 and features.time_of_day(140) == 1
