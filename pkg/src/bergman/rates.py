"""Convergence-rate reports of ``g_m`` against the model metric.

Classes
-------
RateGrid
    Evaluation points with area weights
RateRow
    Errors at one tensor power
ModulusStats
    Result of ``grad_modulus``
RateReport
    Per-m rows, fitted slopes and pass/fail criteria

Functions
---------
default_grid
    Annular polar grid plus the basepoint
rate_report
    Sweep ``m`` and tabulate errors
holder_modulus
    ``sup |D(x) - D(y)| / |x - y|^alpha`` over all pairs
grad_modulus
    Log-Lipschitz modulus of a gradient field
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from src.errors import ConfigError
from src.bergman.engine import BergmanField, metric_field, model_field
from src.geometry.conventions import hessian_norm
from src.geometry.metric_models import MetricModel
from src.numerics.fitting import bounded_check, fit_slope
from src.numerics.quadrature import QuadSpec
from src.parallel import ordered_map

logger = logging.getLogger(__name__)

EXACT_TOL = 1e-9
SUP_SLOPE_MAX = -0.85
GRAD_SLOPE_RANGE = (-0.65, -0.40)
HOLDER_BAND = 3.0
SLOPE_FLOOR = 1e-13
# outermost cell ends at 1.05 * RATE_RADIUS, clear of the cutoff ramp at r = 0.5
RATE_RADIUS = 0.4


@dataclass(frozen=True)
class RateGrid:
    """Points with quadrature weights for discrete ``L^q`` norms.

    Attributes
    ----------
    points : np.ndarray
        Chart points
    weights : np.ndarray
        Area weights, summing to the area of the covered disc
    base_index : int | None
        Index of the basepoint ``x_0 = 0`` if present
    """

    points: np.ndarray
    weights: np.ndarray
    base_index: int | None = None

    @classmethod
    def from_points(cls, points) -> "RateGrid":
        points = np.atleast_1d(np.asarray(points, dtype=complex))
        hits = np.nonzero(points == 0)[0]
        return cls(points, np.ones(len(points)), int(hits[0]) if len(hits) else None)


def default_grid(n_radii: int = 10, r_max: float = RATE_RADIUS, n_angles: int = 8) -> RateGrid:
    """Radii ``r_max / n_radii .. r_max`` times ``n_angles`` angles, plus 0.

    Weights are the polar cell areas; the basepoint carries the inner disc.
    """
    dr = r_max / n_radii
    radii = dr * np.arange(1, n_radii + 1)
    theta = 2 * np.pi * np.arange(n_angles) / n_angles
    ring = (radii[:, None] * np.exp(1j * theta[None, :])).ravel()
    ring_w = np.repeat(radii * dr * 2 * np.pi / n_angles, n_angles)
    points = np.concatenate([[0.0 + 0j], ring])
    weights = np.concatenate([[math.pi * (dr / 2) ** 2], ring_w])
    return RateGrid(points, weights, 0)


@dataclass(frozen=True)
class RateRow:
    m: int
    sup_err: float
    grad_err: float
    grad_err_x0: float
    c1alpha_mod: float
    w2q_norm: float
    hess_zz_over_log: float
    hess_zzbar: float


@dataclass(frozen=True)
class ModulusStats:
    """Sup of a difference quotient over point pairs.

    Attributes
    ----------
    sup : float
        Largest quotient
    pair : tuple[int, int]
        Indices attaining it
    n_pairs : int
        Pairs that satisfied the separation constraint
    """

    sup: float
    pair: tuple
    n_pairs: int


def _pairs(points: np.ndarray, max_sep: float = math.inf):
    i, j = np.triu_indices(len(points), k=1)
    sep = np.abs(points[i] - points[j])
    keep = (sep > 0) & (sep < max_sep)
    return i[keep], j[keep], sep[keep]


def holder_modulus(values, points, alpha: float) -> float:
    """``sup |v(x) - v(y)| / |x - y|^alpha`` over all distinct pairs."""
    values = np.asarray(values)
    i, j, sep = _pairs(np.asarray(points))
    if len(i) == 0:
        return 0.0
    return float(np.max(np.abs(values[i] - values[j]) / sep**alpha))


def grad_modulus(gradient, points, pairs=None) -> ModulusStats:
    """Log-Lipschitz modulus ``sup |dV| / (|x - y| |log |x - y||)``.

    Parameters
    ----------
    gradient : array_like
        Gradient field as complex numbers (``2 conj(d u)`` for a real ``u``)
    points : array_like
        Chart points
    pairs : tuple[array_like, array_like], optional
        Index pairs to use; defaults to every pair closer than ``1/e``

    Returns
    -------
    ModulusStats
    """
    gradient = np.asarray(gradient)
    points = np.asarray(points, dtype=complex)
    if pairs is None:
        i, j, sep = _pairs(points, max_sep=math.exp(-1.0))
    else:
        i, j = (np.asarray(p, dtype=int) for p in pairs)
        sep = np.abs(points[i] - points[j])
        keep = (sep > 0) & (sep < math.exp(-1.0))
        i, j, sep = i[keep], j[keep], sep[keep]
    if len(i) == 0:
        return ModulusStats(0.0, (-1, -1), 0)
    quotient = np.abs(gradient[i] - gradient[j]) / (sep * np.abs(np.log(sep)))
    best = int(np.argmax(quotient))
    return ModulusStats(float(quotient[best]), (int(i[best]), int(j[best])), len(i))


@dataclass
class RateReport:
    """Errors of ``g_m`` against ``g`` over an ``m`` sweep.

    Attributes
    ----------
    model : str
        Model name
    rows : list[RateRow]
        One row per ``m``, ascending
    alpha, q : float
        Hölder exponent and Sobolev exponent used
    slopes : dict[str, SlopeFit]
        Log-log fits of ``sup_err``, ``grad_err`` and ``grad_err_x0``
    """

    model: str
    rows: list
    alpha: float
    q: float
    slopes: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(row, name) for row in self.rows], dtype=float)

    @property
    def m_list(self) -> np.ndarray:
        return self.column("m")

    def holder_normalized(self) -> np.ndarray:
        m = self.m_list
        return self.column("c1alpha_mod") / (m ** ((-1.0 + self.alpha) / 2) * np.log(m) ** self.alpha)

    def holder_band(self) -> float:
        """``max / min`` of the normalized Hölder moduli."""
        normalized = self.holder_normalized()
        low = float(np.min(normalized))
        return float(np.max(normalized)) / low if low > 0 else math.inf

    def exact(self, name: str) -> bool:
        """Whether a column stays below ``EXACT_TOL`` for every m."""
        return bool(np.all(self.column(name) < EXACT_TOL))

    def criteria(self) -> dict[str, bool]:
        """Pass/fail flags; a quantity below ``EXACT_TOL`` everywhere passes its slope check."""
        m = self.m_list
        out = {}
        sup = self.slopes["sup_err"]
        out["sup_err_slope"] = self.exact("sup_err") or (sup.defined and sup.slope <= SUP_SLOPE_MAX)
        grad = self.slopes["grad_err_x0"]
        lo, hi = GRAD_SLOPE_RANGE
        out["grad_err_x0_slope"] = self.exact("grad_err_x0") or (grad.defined and lo <= grad.slope <= hi)
        out["m_sup_err_bounded"] = bounded_check(m, m * self.column("sup_err")).bounded
        out["sqrt_m_grad_err_x0_bounded"] = bounded_check(m, np.sqrt(m) * self.column("grad_err_x0")).bounded
        out["c1alpha_band"] = bool(self.exact("c1alpha_mod") or self.holder_band() < HOLDER_BAND)
        out["hess_zz_log_bounded"] = bounded_check(m, self.column("hess_zz_over_log")).bounded
        out["hess_zzbar_bounded"] = bounded_check(m, self.column("hess_zzbar")).bounded
        return out


def _row(m: int, bergman: BergmanField, model: BergmanField, grid: RateGrid, alpha: float, q: float) -> RateRow:
    value_err = np.abs(bergman.value - model.value)
    grad_diff = 2.0 * np.conj(bergman.gradient - model.gradient)
    hess = hessian_norm(bergman.d2, bergman.ddbar)
    w = grid.weights
    w2q = float((np.sum(w * hess**q) / np.sum(w)) ** (1.0 / q))
    x0 = grid.base_index
    return RateRow(
        m=m,
        sup_err=float(np.max(value_err)),
        grad_err=float(np.max(np.abs(grad_diff))),
        grad_err_x0=float(np.abs(grad_diff[x0])) if x0 is not None else math.nan,
        c1alpha_mod=holder_modulus(grad_diff, grid.points, alpha),
        w2q_norm=w2q,
        hess_zz_over_log=float(np.max(np.abs(bergman.d2)) / math.log(m)),
        hess_zzbar=float(np.max(np.abs(bergman.ddbar))),
    )


def rate_report(
    model: MetricModel,
    m_list,
    grid: RateGrid | None = None,
    alpha: float = 0.5,
    q: float = 2.0,
    spec: QuadSpec | None = None,
    seed: int = 0,
    threads: int | None = None,
) -> RateReport:
    """Tabulate ``g_m - g`` and its derivatives over an ``m`` sweep.

    Parameters
    ----------
    model : MetricModel
        Model under test
    m_list : Sequence[int]
        Ascending tensor powers, at least four
    grid : RateGrid, optional
        Evaluation grid; ``default_grid()`` when omitted
    alpha : float
        Hölder exponent in ``(0, 1)``
    q : float
        Sobolev exponent, ``> 1``
    spec : QuadSpec, optional
        Quadrature settings
    seed : int
        Seed of the radial path cross-check
    threads : int, optional
        Worker-pool size over ``m``

    Returns
    -------
    RateReport
    """
    m_list = [int(m) for m in m_list]
    if len(m_list) < 4 or sorted(set(m_list)) != m_list:
        raise ConfigError("m_list must be strictly ascending with at least 4 entries")
    if not 0 < alpha < 1 or q <= 1:
        raise ConfigError(f"need 0 < alpha < 1 and q > 1, got alpha={alpha}, q={q}")
    for m in m_list:
        model.check_degree(m)
    grid = grid or default_grid()
    reference = model_field(model, grid.points)

    def one(m):
        logger.info("rates %s: m = %d", model.name, m)
        field_m = metric_field(model, m, grid.points, spec, seed=seed)
        return _row(m, field_m, reference, grid, alpha, q)

    rows = ordered_map(one, m_list, threads)
    report = RateReport(model.name, rows, alpha, q)
    m = report.m_list
    for name in ("sup_err", "grad_err", "grad_err_x0"):
        report.slopes[name] = fit_slope(m, report.column(name), floor=SLOPE_FLOOR)
    logger.info(
        "rates %s: sup slope %.3f, x0 gradient slope %.3f",
        model.name,
        report.slopes["sup_err"].slope,
        report.slopes["grad_err_x0"].slope,
    )
    return report
