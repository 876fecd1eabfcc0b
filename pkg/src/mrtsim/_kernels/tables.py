"""Precomputed quadrature tables shared by every kernel backend.

The allocation-probability integral E[rho(x)] under a Gaussian is evaluated
by deterministic quadrature on two regimes (see ``action_prob_many``):

* narrow regime (sigma_z <= switch): Gauss-Hermite in the Gaussian's own
  coordinate; the sigmoid is wide relative to the node spacing there.
* wide regime: composite Gauss-Legendre on a fixed grid in the sigmoid's
  coordinate ``z`` (where the sigmoid has unit scale) plus the exact Gaussian
  upper-tail mass beyond the grid, where the sigmoid is saturated to within
  ~1e-18.

Both backends consume the same node/weight arrays, so any cross-backend
difference is down to floating-point evaluation of exp/erfc only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

GH_NODES = 64
GL_ORDER = 16
SIGMA_SWITCH = 2.0


@dataclass(frozen=True)
class QuadTables:
    gh_x: np.ndarray      # Gauss-Hermite nodes (physicists' convention)
    gh_w: np.ndarray      # Gauss-Hermite weights
    gl_z: np.ndarray      # composite Gauss-Legendre nodes on [-t_lo, t_hi]
    gl_w: np.ndarray      # matching weights
    t_hi: float           # upper grid edge; beyond it the sigmoid is ~1
    sigma_switch: float = SIGMA_SWITCH


def build_quad_tables(k: float = 1.0) -> QuadTables:
    """Tables for the generalized-logistic exponent ``k``.

    The grid edges and panel width scale with ``k`` because the lower
    saturation of ``(1 + e^{-z})^{-k}`` decays like ``e^{-k z}`` and the
    transition sharpens as ``k`` grows.
    """
    if k <= 0:
        raise ValueError(f"k must be positive, got {k}")
    gh_x, gh_w = np.polynomial.hermite.hermgauss(GH_NODES)

    t_hi = 45.0
    t_lo = max(45.0, 42.0 / k)
    panel = 1.5 * min(1.0, 1.0 / k)
    n_panels = int(np.ceil((t_lo + t_hi) / panel))
    edges = np.linspace(-t_lo, t_hi, n_panels + 1)
    ref_x, ref_w = np.polynomial.legendre.leggauss(GL_ORDER)

    half = np.diff(edges) / 2.0
    mid = (edges[:-1] + edges[1:]) / 2.0
    gl_z = (mid[:, None] + half[:, None] * ref_x[None, :]).ravel()
    gl_w = (half[:, None] * ref_w[None, :]).ravel()
    return QuadTables(
        gh_x=np.ascontiguousarray(gh_x),
        gh_w=np.ascontiguousarray(gh_w),
        gl_z=np.ascontiguousarray(gl_z),
        gl_w=np.ascontiguousarray(gl_w),
        t_hi=t_hi,
    )
