"""Kernel backend selection.

The hot numeric kernels exist twice: a compiled Cython extension
(``mrtsim._kernels._native``) and a pure-numpy fallback. Selection happens
once at import, controlled by the ``MRTSIM_KERNELS`` environment variable:

* ``auto`` (default): compiled backend when importable, else pure python
* ``native``: require the compiled backend, raise if it is not built
* ``python``: force the pure-numpy fallback

Build the extension in place with ``python -m mrtsim._kernels.build``.
Kernels are deterministic float64 math with no random state; backends agree
to floating-point rounding (exercised by the parity tests), while seeded
results are guaranteed bit-reproducible within one backend.
"""

from __future__ import annotations

import os
from types import ModuleType

from .tables import QuadTables, build_quad_tables  # noqa: F401  (re-export)


def load_backend(name: str) -> ModuleType:
    """Import a kernel backend by name ('python' or 'native')."""
    if name == "python":
        from . import pyfallback

        return pyfallback
    if name == "native":
        from . import _native  # type: ignore[attr-defined]

        return _native
    raise ValueError(f"unknown kernel backend {name!r}")


def _resolve() -> ModuleType:
    choice = os.environ.get("MRTSIM_KERNELS", "auto").lower()
    if choice in ("python", "native"):
        return load_backend(choice)
    if choice != "auto":
        raise ValueError(
            f"MRTSIM_KERNELS must be auto/python/native, got {choice!r}"
        )
    try:
        return load_backend("native")
    except ImportError:
        return load_backend("python")


_backend = _resolve()

exp_average_many = _backend.exp_average_many
rho_many = _backend.rho_many
action_prob_many = _backend.action_prob_many
poisson_ppf_many = _backend.poisson_ppf_many


def backend_name() -> str:
    """Name of the kernel backend selected at import."""
    return _backend.BACKEND_NAME
