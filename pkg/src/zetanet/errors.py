"""Typed errors shared across the package.

Every error that callers are expected to branch on gets its own class;
generic misuse (bad argument types, inconsistent ranges) stays ValueError.
"""


class ZetanetError(Exception):
    """Base class for package-specific errors."""


class ConvergenceDomainError(ZetanetError):
    """An L-series evaluation was requested at or below its abscissa of
    absolute convergence.  Callers must restrict the parameter window;
    no analytic continuation is performed."""


class UnboundedCoefficientError(ZetanetError):
    """A tail bound was requested for a series with no known coefficient
    bound."""


class ZeroNormalizerError(ZetanetError):
    """The normalizing L-value of a degree distribution is zero (or too
    close to zero for its error bound to exclude zero)."""


class SignedDistributionError(ZetanetError):
    """A sampling or percolation operation was applied to a signed formal
    distribution.  Signed families support threshold algebra only."""


class BalanceFailureError(ZetanetError):
    """Stub-total balancing failed within the redraw budget; the requested
    truncation/size combination is pathological."""


class NoSignChangeError(ZetanetError):
    """Bisection was requested on a bracket whose endpoints have the same
    sign."""


class DegenerateDenominatorError(ZetanetError):
    """A closed-form threshold has a vanishing denominator at the requested
    parameters."""


class EmptyWindowError(ZetanetError):
    """A scan window lies entirely outside the convergence region."""


class FormalDistributionWarning(UserWarning):
    """Generating-function values of a signed distribution are formal
    quantities, not probabilities."""


class ClusteringRangeWarning(UserWarning):
    """The closed-form clustering value left [0, 1]; it is reported
    verbatim."""
