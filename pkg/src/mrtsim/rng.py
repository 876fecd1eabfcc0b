"""Seed discipline: master seed -> per-trial seed -> named substreams.

Every random draw in a simulated trial comes from a named stream so that
toggling one experiment axis (e.g. the responsivity level E) leaves the
draws on unrelated streams untouched (common random numbers across arms).
Streams are derived with ``numpy.random.SeedSequence`` spawn keys, which
are stable across processes and numpy versions.
"""

from __future__ import annotations

import numpy as np

# Stream identifiers. The integer values are part of the reproducibility
# contract: changing them changes every seeded result.
RECRUIT = 0    # sampling participants with replacement, cohort assignment
EFFECTS = 1    # participant-specific treatment effect draws
APP = 2        # daily app-opening Bernoulli draws
ACTION = 3     # micro-randomized action draws
ZGATE = 4      # Bernoulli gate of the outcome model
YDRAW = 5      # Poisson / Normal component of the outcome model


def substream(master_seed: int, *path: int) -> np.random.Generator:
    """Return a Generator for the stream addressed by ``path`` under ``master_seed``.

    ``path`` is typically ``(trial_index, stream_id)``. The same
    ``(master_seed, path)`` always yields the same stream, regardless of
    which other streams were created before it.
    """
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=tuple(path))
    return np.random.Generator(np.random.PCG64(ss))
