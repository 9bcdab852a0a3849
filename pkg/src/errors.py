"""Exception hierarchy for the lab.

Every error carries an ``exit_code`` (the process exit status the CLI maps
it to) and a human-readable ``detail``, the same shape as an HTTP exception
with ``status_code`` and ``detail``.

Classes
-------
LabError : Exception
    Base class of all lab errors
ConfigError : LabError
    Invalid run configuration (exit 2)
SuiteFailure : LabError
    A suite finished but at least one pass/fail flag failed (exit 1)
PathDisagreement : SuiteFailure
    Perturbative and direct computations of a constant disagree
NumericalError : LabError
    Base class of numerical failures that prevented evaluation (exit 3)
NonConvergence : NumericalError
    Adaptive quadrature hit its subdivision budget
AliasingSuspected : NumericalError
    Angular sampling too coarse for the integrand
BandwidthExceeded : NumericalError
    Discarded Gram bands carry too much mass
NotPositiveDefinite : NumericalError
    Gram factorization failed
ModelError : NumericalError
    A metric model violates its own invariants
StepTooCoarse : NumericalError
    Finite-difference truncation dominates an ODE residual
LedgerError : LabError
    The run ledger could not be written (exit 3)
"""


class LabError(Exception):
    """Base class for lab errors.

    Attributes
    ----------
    exit_code : int
        Process exit status the CLI reports for this error
    detail : str
        Human-readable description
    """

    exit_code = 3

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class ConfigError(LabError):
    """Invalid run configuration.

    Attributes
    ----------
    suggestions : list[str]
        Close matches for a misspelled name, possibly empty
    """

    exit_code = 2

    def __init__(self, detail: str, suggestions: list[str] | None = None):
        super().__init__(detail)
        self.suggestions = list(suggestions or [])


class SuiteFailure(LabError):
    """A suite ran to completion but a pass/fail flag failed.

    Attributes
    ----------
    results : list
        Suite results that were produced before the failure was raised
    """

    exit_code = 1

    def __init__(self, detail: str, results: list | None = None):
        super().__init__(detail)
        self.results = list(results or [])


class PathDisagreement(SuiteFailure):
    """Two independent computation paths of one constant disagree."""


class NumericalError(LabError):
    """Numerical failure that prevented an evaluation."""

    exit_code = 3


class NonConvergence(NumericalError):
    """Adaptive quadrature exhausted its subdivision budget.

    Attributes
    ----------
    partial : object
        Best available result (a ``LogScalar``)
    error_estimate : float
        Relative error estimate of ``partial``
    """

    def __init__(self, detail: str, partial=None, error_estimate: float = float("nan")):
        super().__init__(detail)
        self.partial = partial
        self.error_estimate = error_estimate


class AliasingSuspected(NumericalError):
    """The top decade of sampled angular modes is not negligible."""


class BandwidthExceeded(NumericalError):
    """Truncated Gram bands carry relative mass above tolerance."""


class NotPositiveDefinite(NumericalError):
    """Cholesky factorization failed.

    Attributes
    ----------
    smallest_pivot : float
        Smallest diagonal entry of the scaled matrix seen before failure
    """

    def __init__(self, detail: str, smallest_pivot: float = float("nan")):
        super().__init__(detail)
        self.smallest_pivot = smallest_pivot


class ModelError(NumericalError):
    """A metric model violates one of its invariants."""


class StepTooCoarse(NumericalError):
    """Finite-difference truncation estimate exceeds the residual."""


class LedgerError(LabError):
    """The run ledger could not be written."""

    exit_code = 3
