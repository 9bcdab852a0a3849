"""Peak-section normalizations, overlaps and jet asymptotics.

All quantities are taken in the Kähler-normalized coordinate
``zeta = z / kappa`` at the origin (``kappa = rho(0)^{-1/2}``), where the
comparison model is the flat Gaussian ``exp(-pi m |zeta|^2)``, and with the
frame normalized by ``a(0) = 1``.

Classes
-------
PeakSpec
    Index, tensor power and cutoff radius
PeakRow
    One ``(m, p)`` line of a peak table
PeakCheck
    Normalization residuals of one index over an ``m`` sweep
JetRow
    Scaled jets of the orthonormal basis at the origin
JetAsymptotics
    Jet rows with boundedness verdicts

Functions
---------
lambda_inv_sq
    ``lambda_p^{-2}`` by quadrature
flat_lambda_inv_sq
    Incomplete-gamma closed form for the flat model
check_peak_normalization
    ``m |m^{1+p} lambda^{-2} / p! - pi^{-p}|`` over a sweep
peak_overlap
    Normalized overlap of two peak profiles
peak_table
    Normalizations and overlaps for several indices
jet_asymptotics
    Scaled ``f_0``, ``f_1'``, ``f_2''`` and ``f_1''`` at the origin
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammainc, gammaln

from src.bergman.section_space import jets_at
from src.errors import ConfigError
from src.geometry.conventions import kahler_scale
from src.geometry.metric_models import MetricModel, Symmetry
from src.numerics.fitting import BoundedCheck, bounded_check
from src.numerics.log_scalar import LogScalar
from src.numerics.quadrature import QuadSpec, integrate_disc, integrate_radial
from src.parallel import ordered_map

logger = logging.getLogger(__name__)

# normalized residuals below this are quadrature noise around an exact zero
PEAK_FLOOR = 1e-6


@dataclass(frozen=True)
class PeakSpec:
    """A peak profile ``zeta^p`` at tensor power ``m``.

    Attributes
    ----------
    p : int
        Vanishing order
    m : int
        Tensor power, at least 8
    cutoff : float | None
        Radius in ``zeta``; ``log m / sqrt m`` when omitted
    """

    p: int
    m: int
    cutoff: float | None = None

    def __post_init__(self):
        if self.p < 0:
            raise ConfigError(f"peak index must be non-negative, got {self.p}")
        if self.m < 8:
            raise ConfigError(f"peak sections need m >= 8, got {self.m}")

    @property
    def radius(self) -> float:
        return self.cutoff if self.cutoff is not None else math.log(self.m) / math.sqrt(self.m)


def _frame(model: MetricModel) -> tuple[float, float]:
    """``(kappa, log a(0))``."""
    kappa = kahler_scale(float(model.density(np.array([0.0 + 0j]))[0]))
    return kappa, float(model.log_weight(np.array([0.0 + 0j]))[0].real)


def _check_radius(model: MetricModel, spec: PeakSpec, kappa: float):
    if kappa * spec.radius > model.chart_radius:
        raise ConfigError(f"cutoff {spec.radius:.4g} leaves the chart of {model.name}")


def lambda_inv_sq(model: MetricModel, spec: PeakSpec, quad: QuadSpec | None = None) -> LogScalar:
    """``int_{|zeta| <= cutoff} |zeta|^{2p} a^m dV_g``.

    Parameters
    ----------
    model : MetricModel
        Model with ``a(0)`` used as the frame normalization
    spec : PeakSpec
        Index, power and cutoff
    quad : QuadSpec, optional
        Quadrature settings

    Returns
    -------
    LogScalar
    """
    kappa, lw0 = _frame(model)
    _check_radius(model, spec, kappa)
    model.check_degree(spec.m)
    radius = kappa * spec.radius
    p, m = spec.p, spec.m
    bps = [b for b in model.breakpoints if 0 < b < radius]

    def power(r):
        with np.errstate(divide="ignore"):
            return 2 * p * np.log(r / kappa) if p else np.zeros_like(r)

    if model.symmetry is Symmetry.RADIAL:

        def log_f(r):
            return math.log(2 * math.pi) + np.log(r) + power(r) + m * (model.radial_log_weight(r) - lw0) + (
                model.radial_log_density(r)
            )

        return integrate_radial(log_f, 0.0, radius, quad, breakpoints=bps)

    def log_f_polar(r, theta):
        return power(r) + m * (model.polar_log_weight(r, theta).real - lw0) + model.polar_log_density(r, theta)

    return integrate_disc(log_f_polar, radius, quad, breakpoints=bps)


def flat_lambda_inv_sq(p: int, m: int, cutoff: float) -> float:
    """``p! P(p + 1, pi m c^2) / (pi^p m^{p+1})`` for the flat model."""
    log_val = gammaln(p + 1.0) - p * math.log(math.pi) - (p + 1) * math.log(m)
    return float(math.exp(log_val) * gammainc(p + 1.0, math.pi * m * cutoff**2))


def _residual(spec: PeakSpec, value: LogScalar) -> float:
    p, m = spec.p, spec.m
    scaled = math.exp(value.log_mag + (1 + p) * math.log(m) - gammaln(p + 1.0))
    return m * abs(scaled - math.pi ** (-p))


@dataclass
class PeakCheck:
    """Normalization residuals ``m |m^{1+p} lambda^{-2} / p! - pi^{-p}|``.

    Attributes
    ----------
    model : str
    p : int
    m_list : list[int]
    residuals : list[float]
    lambda_inv_sq_log : list[float]
    verdict : BoundedCheck
    """

    model: str
    p: int
    m_list: list
    residuals: list
    lambda_inv_sq_log: list
    verdict: BoundedCheck

    @property
    def bounded(self) -> bool:
        return self.verdict.bounded


def check_peak_normalization(
    model: MetricModel, p: int, m_list, quad: QuadSpec | None = None, threads: int | None = None
) -> PeakCheck:
    """Check that the normalized peak residual stays bounded over ``m_list``."""
    specs = [PeakSpec(p, int(m)) for m in m_list]
    values = ordered_map(lambda s: lambda_inv_sq(model, s, quad), specs, threads)
    residuals = [_residual(s, v) for s, v in zip(specs, values)]
    verdict = bounded_check(m_list, residuals, floor=PEAK_FLOOR)
    logger.info("peak normalization %s p=%d: spread %.3g, bounded %s", model.name, p, verdict.spread, verdict.bounded)
    return PeakCheck(model.name, p, [int(m) for m in m_list], residuals, [v.log_mag for v in values], verdict)


def peak_overlap(
    model: MetricModel, m: int, p: int, p_prime: int, cutoff: float | None = None, quad: QuadSpec | None = None
) -> LogScalar:
    """``lambda_p lambda_p' int_{|zeta| <= cutoff} zeta^p conj(zeta)^p' a^m dV_g``.

    The integral is evaluated with ``p < p'`` and conjugated otherwise, so
    swapping the indices conjugates the result exactly.

    Raises
    ------
    ConfigError
        If ``p == p'``
    """
    if p == p_prime:
        raise ConfigError("peak_overlap needs distinct indices")
    if p > p_prime:
        return peak_overlap(model, m, p_prime, p, cutoff, quad).conjugate()
    lo, hi = PeakSpec(p, m, cutoff), PeakSpec(p_prime, m, cutoff)
    kappa, lw0 = _frame(model)
    _check_radius(model, lo, kappa)
    radius = kappa * lo.radius
    shift = p - p_prime

    def log_f(r, theta):
        with np.errstate(divide="ignore"):
            log_mag = (p + p_prime) * np.log(r / kappa) + m * (model.polar_log_weight(r, theta).real - lw0)
        log_mag = log_mag + model.polar_log_density(r, theta)
        return log_mag, np.broadcast_to(np.exp(1j * shift * theta), np.shape(log_mag))

    raw = integrate_disc(log_f, radius, quad, breakpoints=[b for b in model.breakpoints if 0 < b < radius])
    if raw.is_zero:
        return raw
    norm = lambda_inv_sq(model, lo, quad).log_mag + lambda_inv_sq(model, hi, quad).log_mag
    return raw.scale(-0.5 * norm)


@dataclass(frozen=True)
class PeakRow:
    m: int
    p: int
    lambda_inv_sq_log: float
    residual: float
    overlap_1_re: float
    overlap_1_im: float
    overlap_2_abs: float


def peak_table(model: MetricModel, p_list, m_list, quad: QuadSpec | None = None, threads: int | None = None):
    """Rows for every ``(m, p)`` with overlaps against ``p + 1`` and ``p + 2``."""

    def one(task):
        m, p = task
        spec = PeakSpec(p, m)
        value = lambda_inv_sq(model, spec, quad)
        near = peak_overlap(model, m, p, p + 1, quad=quad).value()
        far = peak_overlap(model, m, p, p + 2, quad=quad).value()
        return PeakRow(m, p, value.log_mag, _residual(spec, value), near.real, near.imag, abs(far))

    tasks = [(int(m), int(p)) for m in m_list for p in p_list]
    return ordered_map(one, tasks, threads)


@dataclass(frozen=True)
class JetRow:
    """Kähler-scaled jets at the origin.

    ``f0 = m^{-1/2}|f_0|``, ``f1 = m^{-1}|f_1'|``, ``f2 = (2 m^3)^{-1/2}|f_2''|``
    and ``mixed = m^{-(1+alpha)/2}|f_1''|``; the limits are ``1``, ``sqrt(pi)``,
    ``pi`` and bounded.
    """

    m: int
    f0: float
    f1: float
    f2: float
    mixed: float


JET_LIMITS = {"f0": 1.0, "f1": math.sqrt(math.pi), "f2": math.pi}


@dataclass
class JetAsymptotics:
    model: str
    rows: list
    verdicts: dict = field(default_factory=dict)

    @property
    def bounded(self) -> bool:
        return all(v.bounded for v in self.verdicts.values())


def jet_asymptotics(
    model: MetricModel, m_list, alpha: float = 0.5, quad: QuadSpec | None = None, threads: int | None = None
) -> JetAsymptotics:
    """Scaled jets of the triangular orthonormal basis at the origin.

    Verdicts test ``m * |scaled - limit|`` for the three jets with known
    limits, and the mixed jet itself, with the factor-ten criterion.
    """
    kappa, lw0 = _frame(model)

    def one(m):
        jets = jets_at(model, m, [0.0], quad)
        # frame normalized so that a(0) = 1
        d = jets.derivatives()[0] * math.exp(jets.log_scale[0] + 0.5 * m * lw0)
        return JetRow(
            m,
            abs(d[0, 0]) / math.sqrt(m),
            kappa * abs(d[1, 1]) / m,
            kappa**2 * abs(d[2, 2]) / math.sqrt(2.0 * m**3),
            kappa**2 * abs(d[1, 2]) / m ** ((1 + alpha) / 2),
        )

    rows = ordered_map(one, [int(m) for m in m_list], threads)
    m = np.array([row.m for row in rows], dtype=float)
    verdicts = {
        name: bounded_check(m, m * np.abs(np.array([getattr(r, name) for r in rows]) - limit), floor=PEAK_FLOOR)
        for name, limit in JET_LIMITS.items()
    }
    verdicts["mixed"] = bounded_check(m, [r.mixed for r in rows], floor=PEAK_FLOOR)
    return JetAsymptotics(model.name, rows, verdicts)
