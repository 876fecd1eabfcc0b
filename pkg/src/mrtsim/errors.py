"""Error taxonomy shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, DataError -> 3,
NumericalError -> 4.
"""


class MrtsimError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(MrtsimError):
    """Invalid or inconsistent configuration (bad variant name, bad axis value)."""


class DataError(MrtsimError):
    """Missing or malformed input data (CSV files, fitted-model bundles)."""


class NumericalError(MrtsimError):
    """Numerical failure: non-finite values, factorization failure after jitter."""
