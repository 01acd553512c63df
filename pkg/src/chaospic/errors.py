"""Exception hierarchy.

The CLI maps ConfigurationError/UsageError to exit code 2 and every other
ChaospicError to exit code 3.
"""


class ChaospicError(Exception):
    """Base class for all chaospic errors."""


class ConfigurationError(ChaospicError):
    """Invalid scenario configuration or construction parameters."""


class UsageError(ChaospicError):
    """API misuse: bad index, shape mismatch, wrong argument combination."""


class LogicError(ChaospicError):
    """Internal ordering violated (e.g. deposit before boundary conditions)."""


class SamplingError(ChaospicError):
    """Degenerate random sample (e.g. zero-variance Maxwellian pool)."""


class FitError(ChaospicError):
    """Rate fitting could not produce an estimate."""


class NumericalError(ChaospicError):
    """Numerical failure during a run."""
