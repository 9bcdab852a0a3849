"""Rate fitting and extrapolation helpers.

Functions
---------
fit_slope
    Least-squares slope of ``log y`` against ``log x``
richardson_limit
    Repeated Richardson extrapolation of a sequence of refinements
bounded_check
    The factor-ten boundedness criterion used by every sweep
"""

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class SlopeFit:
    """Log-log least-squares fit ``log y = slope * log x + log_constant``.

    Attributes
    ----------
    slope : float
        Fitted exponent, ``nan`` when fewer than two usable points
    log_constant : float
        Fitted intercept
    residuals : list[float]
        ``log y - fit`` at the used points
    defined : bool
        Whether the fit had enough finite positive data
    """

    slope: float
    log_constant: float
    residuals: list = field(default_factory=list)
    defined: bool = True

    @property
    def constant(self) -> float:
        return math.exp(self.log_constant) if self.defined else math.nan

    @property
    def rms_residual(self) -> float:
        if not self.residuals:
            return math.nan
        return float(np.sqrt(np.mean(np.square(self.residuals))))


def fit_slope(x, y, floor: float = 0.0) -> SlopeFit:
    """Fit a power law to positive data.

    Parameters
    ----------
    x, y : array_like
        Abscissae (e.g. ``m``) and observations
    floor : float
        Observations at or below this value are ignored

    Returns
    -------
    SlopeFit
        ``defined`` is false when fewer than two points survive
    """
    x = np.asarray(x, dtype=float)
    y = np.abs(np.asarray(y, dtype=float))
    keep = np.isfinite(y) & (y > floor) & (x > 0)
    if np.count_nonzero(keep) < 2:
        return SlopeFit(math.nan, math.nan, [], defined=False)
    log_x, log_y = np.log(x[keep]), np.log(y[keep])
    slope, intercept = np.polyfit(log_x, log_y, 1)
    residuals = log_y - (slope * log_x + intercept)
    return SlopeFit(float(slope), float(intercept), [float(r) for r in residuals])


def richardson_limit(values, step_ratio: float, power: float = 1.0) -> tuple[float, float]:
    """Extrapolate ``values[i] = L + c h_i^power + ...`` to ``h = 0``.

    ``values`` are ordered from the coarsest to the finest step, consecutive
    steps shrinking by ``step_ratio``. Each elimination level removes the
    next power ``power * level``.

    Parameters
    ----------
    values : Sequence[float | complex]
        Sequence of refinements
    step_ratio : float
        ``h_i / h_{i+1}`` (> 1)
    power : float
        Leading error exponent

    Returns
    -------
    limit : float | complex
        Extrapolated value
    error : float
        Difference between the two best estimates of the last level
    """
    last = list(values)
    if len(last) == 1:
        return last[0], math.inf
    error = math.inf
    for level in range(1, len(values)):
        mult = step_ratio ** (power * level)
        this = [(mult * high - low) / (mult - 1.0) for low, high in zip(last[:-1], last[1:])]
        error = abs(this[-1] - last[-1])
        last = this
    return last[0], float(error)


@dataclass(frozen=True)
class BoundedCheck:
    """Outcome of the boundedness criterion.

    Attributes
    ----------
    bounded : bool
        Overall verdict
    spread : float
        Largest value above the floor over the first one
    slope : float
        Fitted growth exponent (``nan`` when undefined)
    """

    bounded: bool
    spread: float
    slope: float


def bounded_check(m_list, values, factor: float = 10.0, max_slope: float = 0.25, floor: float = 1e-8) -> BoundedCheck:
    """Decide whether a normalized quantity stays bounded over a sweep.

    Values at or below ``floor`` count as bounded. The remainder must never
    exceed ``factor`` times their first value and their fitted log-log slope
    must not exceed ``max_slope``. A decaying sequence is bounded.

    Parameters
    ----------
    m_list : array_like
        Sweep parameter
    values : array_like
        Normalized quantity per sweep entry
    factor, max_slope, floor : float
        Criterion thresholds

    Returns
    -------
    BoundedCheck
    """
    vals = np.abs(np.asarray(values, dtype=float))
    if not np.all(np.isfinite(vals)):
        return BoundedCheck(False, math.inf, math.nan)
    alive = vals > floor
    if np.count_nonzero(alive) == 0:
        return BoundedCheck(True, 1.0, math.nan)
    live = vals[alive]
    spread = float(np.max(live) / live[0])
    fit = fit_slope(m_list, vals, floor=floor)
    slope_ok = not fit.defined or fit.slope <= max_slope
    return BoundedCheck(bool(spread < factor and slope_ok), spread, fit.slope)
