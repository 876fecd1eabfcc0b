import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mrtsim.reward import CostParams, cost, cost_batch, proximal_outcome, surrogate_reward

import numpy as np

XI = CostParams(xi1=80.0, xi2=40.0)


def test_proximal_outcome_truncation():
    assert proximal_outcome(200.0, 10.0) == 180.0


def test_proximal_outcome_direct():
    assert proximal_outcome(120.0, 20.0) == 100.0


def test_proximal_outcome_zero():
    assert proximal_outcome(0.0, 0.0) == 0.0


def test_proximal_outcome_clamped_below():
    assert proximal_outcome(5.0, 9.0) == 0.0


def test_proximal_outcome_rejects_negative():
    with pytest.raises(ValueError):
        proximal_outcome(-1.0, 0.0)
    with pytest.raises(ValueError):
        proximal_outcome(10.0, -2.0)


def test_cost_zero_when_no_prompt():
    assert cost(179.0, 0.99, 0, XI) == 0.0


def test_cost_first_indicator_pair():
    assert cost(120.0, 0.6, 1, XI) == 80.0


def test_cost_second_indicator_only():
    assert cost(50.0, 0.9, 1, XI) == 40.0


def test_cost_strict_inequalities_at_thresholds():
    # ties at b, a1, a2 incur no cost
    assert cost(111.0, 0.5, 1, XI) == 0.0
    assert cost(112.0, 0.5, 1, XI) == 0.0
    assert cost(50.0, 0.8, 1, XI) == 0.0


def test_cost_exhaustive_indicator_combinations():
    # brute force over all four indicator regions
    grid = {
        (False, False): (50.0, 0.3),
        (True, False): (120.0, 0.6),
        (False, True): (50.0, 0.9),
        (True, True): (120.0, 0.9),
    }
    expected = {
        (False, False): 0.0,
        (True, False): XI.xi1,
        (False, True): XI.xi2,
        (True, True): XI.xi1 + XI.xi2,
    }
    seen = set()
    for key, (bbar, abar) in grid.items():
        val = cost(bbar, abar, 1, XI)
        assert val == expected[key]
        seen.add(val)
    assert seen == {0.0, XI.xi1, XI.xi2, XI.xi1 + XI.xi2}


@given(
    st.floats(min_value=0, max_value=180),
    st.floats(min_value=0, max_value=1),
    st.floats(min_value=0, max_value=180),
    st.floats(min_value=0, max_value=180),
)
def test_cost_monotone_in_xi(bbar, abar, xi1, xi2):
    base = cost(bbar, abar, 1, CostParams(xi1=xi1, xi2=xi2))
    bigger = cost(bbar, abar, 1, CostParams(xi1=min(xi1 + 10, 180), xi2=min(xi2 + 10, 180)))
    assert bigger >= base


def test_cost_params_validation():
    with pytest.raises(ValueError):
        CostParams(xi1=-1.0)
    with pytest.raises(ValueError):
        CostParams(xi1=200.0)
    with pytest.raises(ValueError):
        CostParams(a1=0.9, a2=0.8)


def test_surrogate_reward():
    assert surrogate_reward(100.0, 0.0) == 100.0
    assert surrogate_reward(100.0, 120.0) == -20.0
    assert surrogate_reward(0.0, 0.0) == 0.0


def test_reward_equals_q_when_no_prompt():
    for bbar, abar in itertools.product([0.0, 120.0, 180.0], [0.0, 0.6, 1.0]):
        c = cost(bbar, abar, 0, XI)
        assert surrogate_reward(57.0, c) == 57.0


def test_cost_batch_matches_scalar():
    bbar = np.array([50.0, 120.0, 120.0, 111.0])
    abar = np.array([0.9, 0.6, 0.9, 0.5])
    actions = np.array([1, 1, 1, 1])
    batch = cost_batch(bbar, abar, actions, XI)
    scalars = [cost(b, a, 1, XI) for b, a in zip(bbar, abar)]
    assert batch.tolist() == scalars


def test_cost_params_roundtrip():
    p = CostParams(xi1=10, xi2=20, b=100, a1=0.4, a2=0.7)
    assert CostParams.from_dict(p.to_dict()) == p
