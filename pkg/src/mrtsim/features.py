"""Algorithm state construction: exponential averages, normalization, fresh/stale states.

Decision points are 1-indexed; odd ``t`` is a morning point (time_of_day 0),
even ``t`` an evening point (time_of_day 1). Day ``d`` owns decision points
``2d - 1`` and ``2d``.

Window-closure convention used throughout the simulator: states for both of
day ``d``'s decision points are constructed at the simulated 4 AM boundary of
day ``d``, at which moment the record of the most recent evening (day
``d - 1``) is still inside its outcome window. A record for decision point
``t'`` is therefore usable when constructing the state for decision point
``t`` iff ``t' <= 2*day(t) - 3``, i.e. through the morning of the previous
day. :func:`closed_horizon` encodes this rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._kernels import exp_average_many

#: Order of algorithm state features, shared with the policy's prior tables.
FEATURE_NAMES = ("time_of_day", "bbar_norm", "abar_norm", "prior_day_app", "intercept")

#: Day-1 state constants (normalized scale), used whenever no closed records exist.
INITIAL_BBAR_NORM = -1.0
INITIAL_ABAR_NORM = -1.0
INITIAL_PRIOR_DAY_APP = 0


@dataclass(frozen=True)
class ExpAverageParams:
    """Discounted-average weights over the trailing 14 decision points.

    ``c_gamma`` rescales the geometric weights so they sum to exactly 1 over
    a full lookback window.
    """

    gamma: float = 13.0 / 14.0
    lookback: int = 14

    @property
    def c_gamma(self) -> float:
        return (1.0 - self.gamma) / (1.0 - self.gamma**self.lookback)

    def weights(self) -> np.ndarray:
        """Weights for a most-recent-first history of length ``lookback``."""
        return self.c_gamma * self.gamma ** np.arange(self.lookback)


DEFAULT_EXP_PARAMS = ExpAverageParams()


def exp_average(
    history: Sequence[float],
    params: ExpAverageParams = DEFAULT_EXP_PARAMS,
    empty_value: float = 0.0,
) -> float:
    """Discounted average of a most-recent-first history of closed records.

    A full window of ``params.lookback`` values gets the geometric weights;
    a shorter history falls back to its plain average (the first-week rule);
    an empty history returns ``empty_value`` (the day-1 case).
    """
    h = np.asarray(history, dtype=float)
    if h.ndim != 1:
        raise ValueError("history must be one-dimensional")
    n = h.shape[0]
    if n > params.lookback:
        raise ValueError(f"history longer than lookback ({n} > {params.lookback})")
    if n == 0:
        return float(empty_value)
    if n < params.lookback:
        return float(h.mean())
    return float(params.weights() @ h)


def normalize_bbar(bbar_raw: float) -> float:
    """Map the raw discounted brushing average from [0, 180] seconds to ~[-1, 1].

    Note the affine map hits -1 at 1 second, so a raw 0 maps slightly below -1.
    """
    if not 0.0 <= bbar_raw <= 180.0:
        raise ValueError(f"bbar_raw outside [0, 180]: {bbar_raw}")
    return (bbar_raw - 181.0 / 2.0) / (179.0 / 2.0)


def denormalize_bbar(bbar_norm: float) -> float:
    return bbar_norm * (179.0 / 2.0) + 181.0 / 2.0


def normalize_abar(abar_raw: float) -> float:
    """Map the raw discounted prompt average from [0, 1] to [-1, 1]."""
    if not 0.0 <= abar_raw <= 1.0:
        raise ValueError(f"abar_raw outside [0, 1]: {abar_raw}")
    return 2.0 * (abar_raw - 0.5)


def denormalize_abar(abar_norm: float) -> float:
    return abar_norm / 2.0 + 0.5


def day_of(t: int) -> int:
    """Study day (1-indexed) owning decision point ``t``."""
    if t < 1:
        raise ValueError(f"decision point must be >= 1, got {t}")
    return (t + 1) // 2


def time_of_day(t: int) -> int:
    """0 for morning (odd t), 1 for evening (even t)."""
    return 0 if t % 2 == 1 else 1


def closed_horizon(t: int) -> int:
    """Largest decision-point index whose record is closed when building state for ``t``.

    Both of a day's states are built at that day's 4 AM boundary; the most
    recent evening record is still in its window then, so availability runs
    through the previous day's morning point. Returns 0 when nothing is closed.
    """
    return max(0, 2 * day_of(t) - 3)


@dataclass(frozen=True)
class AlgState:
    """The 5-dimensional algorithm state consumed by the policy."""

    time_of_day: int
    bbar_norm: float
    abar_norm: float
    prior_day_app: int
    intercept: float = 1.0

    def __post_init__(self):
        if self.intercept != 1.0:
            raise ValueError("intercept is always exactly 1")
        if self.time_of_day not in (0, 1):
            raise ValueError(f"time_of_day must be 0/1, got {self.time_of_day}")
        if self.prior_day_app not in (0, 1):
            raise ValueError(f"prior_day_app must be 0/1, got {self.prior_day_app}")

    def vector(self) -> np.ndarray:
        return np.array(
            [
                float(self.time_of_day),
                self.bbar_norm,
                self.abar_norm,
                float(self.prior_day_app),
                self.intercept,
            ]
        )


@dataclass
class ParticipantLog:
    """Per-decision-point records for one participant, in decision-point order.

    ``window_closed`` flags are authoritative: state construction only ever
    reads records whose flag is set. :meth:`mark_closed_for` applies the
    closure rule of :func:`closed_horizon` for a given target decision point.
    """

    q: list[float] = field(default_factory=list)
    action: list[int] = field(default_factory=list)
    app_open: list[int] = field(default_factory=list)
    window_closed: list[bool] = field(default_factory=list)

    def append(self, q: float, action: int, app_open: int, window_closed: bool = False) -> None:
        if not 0.0 <= q <= 180.0:
            raise ValueError(f"Q outside [0, 180]: {q}")
        if action not in (0, 1):
            raise ValueError(f"action must be 0/1: {action}")
        self.q.append(float(q))
        self.action.append(int(action))
        self.app_open.append(int(app_open))
        self.window_closed.append(bool(window_closed))

    def __len__(self) -> int:
        return len(self.q)

    def mark_closed_for(self, t: int) -> None:
        """Set closure flags as they stand when constructing the state for ``t``."""
        horizon = closed_horizon(t)
        for idx in range(len(self.window_closed)):
            self.window_closed[idx] = (idx + 1) <= horizon

    def closed_tail(self, lookback: int) -> tuple[list[float], list[int]]:
        """Most-recent-first (q, action) histories over closed records only."""
        qs: list[float] = []
        acts: list[int] = []
        for idx in range(len(self.q) - 1, -1, -1):
            if not self.window_closed[idx]:
                continue
            qs.append(self.q[idx])
            acts.append(self.action[idx])
            if len(qs) == lookback:
                break
        return qs, acts


def build_fresh_state(
    log: ParticipantLog, t: int, params: ExpAverageParams = DEFAULT_EXP_PARAMS
) -> AlgState:
    """State for decision point ``t`` from a participant's closed records.

    With zero closed records this returns the day-1 constants exactly as the
    design fixes them (bbar_norm = abar_norm = -1), rather than pushing a raw
    zero through the normalization map.
    """
    qs, acts = log.closed_tail(params.lookback)
    if len(qs) == 0:
        bbar_norm = INITIAL_BBAR_NORM
        abar_norm = INITIAL_ABAR_NORM
    else:
        bbar_norm = normalize_bbar(exp_average(qs, params))
        abar_norm = normalize_abar(exp_average(acts, params))
    return AlgState(
        time_of_day=time_of_day(t),
        bbar_norm=bbar_norm,
        abar_norm=abar_norm,
        prior_day_app=_prior_day_app(log, t),
    )


def _prior_day_app(log: ParticipantLog, t: int) -> int:
    """App-engagement flag of the previous study day (0 when there is none)."""
    d = day_of(t)
    if d <= 1:
        return INITIAL_PRIOR_DAY_APP
    morning_idx = 2 * (d - 1) - 2  # 0-based index of prior day's morning record
    if morning_idx >= len(log.app_open):
        return INITIAL_PRIOR_DAY_APP
    return int(log.app_open[morning_idx])


def build_stale_state(
    last_fresh_bbar_norm: float,
    planned_actions: Sequence[int],
    t: int,
    params: ExpAverageParams = DEFAULT_EXP_PARAMS,
) -> AlgState:
    """Modified state used when the participant has not received a fresh schedule.

    The brushing average is frozen at the last fresh value, the app-engagement
    feature is imputed to 0, and the prompt average comes from the action
    history the algorithm itself controls (most-recent-first, including
    already-scheduled rows).
    """
    if len(planned_actions) == 0:
        abar_norm = INITIAL_ABAR_NORM
    else:
        abar_norm = normalize_abar(exp_average(planned_actions, params))
    return AlgState(
        time_of_day=time_of_day(t),
        bbar_norm=last_fresh_bbar_norm,
        abar_norm=abar_norm,
        prior_day_app=0,
    )


def exp_average_batch(
    histories: np.ndarray,
    counts: np.ndarray,
    params: ExpAverageParams = DEFAULT_EXP_PARAMS,
    empty_value: float = 0.0,
) -> np.ndarray:
    """Vectorized :func:`exp_average` over ``(n, lookback)`` most-recent-first rows.

    ``counts[i]`` gives how many leading entries of row ``i`` are valid.
    Used by the trial engine; delegates to the selected kernel backend.
    """
    return exp_average_many(
        np.ascontiguousarray(histories, dtype=np.float64),
        np.ascontiguousarray(counts, dtype=np.int64),
        params.gamma,
        params.lookback,
        empty_value,
    )
