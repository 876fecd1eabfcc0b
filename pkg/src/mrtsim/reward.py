"""Proximal outcome, prompt-burden cost, and the surrogate reward the policy trains on."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CostParams:
    """Burden-cost parameters.

    ``xi1`` penalizes prompting a participant who is already brushing well and
    has received many prompts; ``xi2`` penalizes heavy prompting regardless of
    performance. Thresholds apply to the *raw* (unnormalized) discounted
    averages. All comparisons are strict, so ties incur no cost.
    """

    xi1: float = 80.0
    xi2: float = 40.0
    b: float = 111.0
    a1: float = 0.5
    a2: float = 0.8

    def __post_init__(self):
        if not (0.0 <= self.xi1 <= 180.0 and 0.0 <= self.xi2 <= 180.0):
            raise ValueError(f"xi1/xi2 must lie in [0, 180]: {self.xi1}, {self.xi2}")
        if not self.a1 < self.a2:
            raise ValueError(f"a1 must be < a2: {self.a1}, {self.a2}")

    def to_dict(self) -> dict:
        return {"xi1": self.xi1, "xi2": self.xi2, "b": self.b, "a1": self.a1, "a2": self.a2}

    @classmethod
    def from_dict(cls, d: dict) -> "CostParams":
        return cls(**d)


def proximal_outcome(brush_seconds: float, overpressure_seconds: float) -> float:
    """Brushing quality in seconds: pressure-corrected duration, truncated to 180.

    Clamped below at zero; the outcome is non-negative by definition even if a
    sensor reports more overpressure than duration.
    """
    if brush_seconds < 0 or overpressure_seconds < 0:
        raise ValueError(
            f"durations must be non-negative: B={brush_seconds}, P={overpressure_seconds}"
        )
    return max(0.0, min(brush_seconds - overpressure_seconds, 180.0))


def burden_indicators(
    bbar_raw, abar_raw, p: CostParams = CostParams()
) -> tuple[np.ndarray, np.ndarray]:
    """The two strict-threshold indicators shared by the cost term and the
    responsivity-decay trigger. Accepts scalars or arrays."""
    bbar_raw = np.asarray(bbar_raw, dtype=float)
    abar_raw = np.asarray(abar_raw, dtype=float)
    high_performer_overdose = (bbar_raw > p.b) & (abar_raw > p.a1)
    overdose = abar_raw > p.a2
    return high_performer_overdose, overdose


def cost(bbar_raw: float, abar_raw: float, action: int, p: CostParams = CostParams()) -> float:
    """Burden cost of the selected action given raw trailing averages."""
    if action == 0:
        return 0.0
    i1, i2 = burden_indicators(bbar_raw, abar_raw, p)
    return p.xi1 * float(i1) + p.xi2 * float(i2)


def cost_batch(
    bbar_raw: np.ndarray, abar_raw: np.ndarray, actions: np.ndarray, p: CostParams
) -> np.ndarray:
    i1, i2 = burden_indicators(bbar_raw, abar_raw, p)
    return np.asarray(actions, dtype=float) * (p.xi1 * i1 + p.xi2 * i2)


def surrogate_reward(q: float, c: float) -> float:
    """Reward fed to the learner: proximal outcome minus burden cost."""
    return q - c
