"""Fourier profiles of test functions on circles and their ODE bounds.

For a function ``f`` on a disc and an integer ``k`` the profile

    h(r) = int_0^{2 pi} f(r e^{i theta}) cos(k theta) d theta

satisfies ``h'' + h'/r - k^2 h / r^2 = int Delta f cos(k theta) d theta``.
When ``f`` vanishes to first order at 0 and has bounded Laplacian,
``|h(r)| <= C r^2 (1 + |log r| [k = 2])``; when it vanishes to third order
and has bounded bi-Laplacian, ``|h(r)| <= C r^4 (1 + |log r| [k in {2, 4}])``.

Classes
-------
TestFunction
    A function with declared vanishing order and optional exact Laplacian
BoundResult
    Outcome of ``check_bound``

Functions
---------
standard_functions
    The built-in test functions
model_functions
    ``psi`` and ``phi`` induced by a metric model
fourier_profile
    ``h(r)`` on a list of radii
ode_residual
    Finite-difference residual of the profile ODE
bound_denominator
    ``r^2 max(1, |log r|)``-type normalizer for each case
bound_table
    ``(r, h, denominator, ratio)`` rows
check_bound
    Sup of ``|h| / denominator`` on a geometric radius grid
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from src.errors import ConfigError, StepTooCoarse
from src.geometry.conventions import kahler_scale
from src.geometry.cutoff import CutoffProfile
from src.geometry.metric_models import MetricModel
from src.numerics.quadrature import QuadSpec, angular_modes
from src.parallel import ordered_map

logger = logging.getLogger(__name__)

FD_RELATIVE_STEP = 1e-3
# largest accepted second-order truncation estimate, relative to the right side
STEP_TOL = 1e-2
VANISH_TOL = 1e-10


def _fd_laplacian(f: Callable, z: np.ndarray, h: float = 1e-3) -> np.ndarray:
    def lap(step):
        return (f(z + step) + f(z - step) + f(z + 1j * step) + f(z - 1j * step) - 4.0 * f(z)) / step**2

    return (4.0 * lap(h / 2) - lap(h)) / 3.0


@dataclass
class TestFunction:
    """A real function on ``|z| < radius``.

    Attributes
    ----------
    name : str
        Identifier used in reports
    f : Callable
        ``z -> f(z)``, vectorized
    jet_order : int
        Order of vanishing at 0: 1 for the second-order bound, 3 for the
        fourth-order bound
    laplacian : Callable | None
        Exact ``Delta f``; finite differences are used when absent
    radius : float
        Radius of the disc of definition
    """

    __test__ = False

    name: str
    f: Callable
    jet_order: int = 1
    laplacian: Callable | None = None
    radius: float = 0.5

    def __post_init__(self):
        if self.jet_order not in (1, 3):
            raise ConfigError(f"jet_order must be 1 or 3, got {self.jet_order}")

    def values(self, z) -> np.ndarray:
        return np.real(self.f(np.asarray(z, dtype=complex)))

    def laplacian_values(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if self.laplacian is not None:
            return np.real(self.laplacian(z))
        return _fd_laplacian(self.values, z)

    def verify(self, n_r: int = 100, n_theta: int = 64) -> dict:
        """Check the declared vanishing at 0 and return the grid bounds.

        ``|f(0)|`` must be below ``VANISH_TOL``, and ``sup_{|z|=e} |f| / e^j``
        (``j = jet_order``) must shrink as ``e`` decreases.

        Returns
        -------
        dict
            ``{"K1": sup |f|, "K2": sup |Delta f|}`` on a polar grid

        Raises
        ------
        ConfigError
            If the declared vanishing does not hold
        """
        at_zero = abs(float(self.values(np.array([0.0 + 0j]))[0]))
        if at_zero > VANISH_TOL:
            raise ConfigError(f"{self.name}: f(0) = {at_zero:.3e} does not vanish")
        theta = 2 * np.pi * np.arange(n_theta) / n_theta
        ratios = []
        for eps in (1e-2, 2.5e-3, 6.25e-4):
            ratios.append(float(np.max(np.abs(self.values(eps * np.exp(1j * theta))))) / eps**self.jet_order)
        if not (ratios[2] <= ratios[1] <= ratios[0] or ratios[0] < VANISH_TOL):
            raise ConfigError(f"{self.name}: does not vanish to order {self.jet_order} at 0 ({ratios})")
        r = np.linspace(0.0, self.radius, n_r + 1)[1:]
        grid = (r[:, None] * np.exp(1j * theta[None, :])).ravel()
        return {
            "K1": float(np.max(np.abs(self.values(grid)))),
            "K2": float(np.max(np.abs(self.laplacian_values(grid)))),
        }


def standard_functions(cutoff: CutoffProfile | None = None) -> dict[str, TestFunction]:
    """Test functions with closed-form profiles or Laplacians."""
    cutoff = cutoff or CutoffProfile()

    def r2logr_cos2(z):
        r = np.abs(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = r**2 * np.log(r) * np.cos(2 * np.angle(z))
        return np.where(r > 0, out, 0.0)

    def r4logr_cos4(z):
        r = np.abs(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = r**4 * np.log(r) * np.cos(4 * np.angle(z))
        return np.where(r > 0, out, 0.0)

    def cubic_bump(z):
        return np.abs(z) ** 2 + z.real**3 * cutoff.value(np.abs(z))

    def cubic_bump_laplacian(z):
        r = np.abs(z)
        x = z.real
        safe = np.where(r > 0, r, 1.0)
        d1 = np.where(r > 0, cutoff.derivative(r) / safe, 0.0)
        eta = cutoff.value(r)
        return 4.0 + 6 * x * eta + 6 * x**3 * d1 + x**3 * (cutoff.second_derivative(r) + d1)

    return {
        "r2logr_cos2": TestFunction("r2logr_cos2", r2logr_cos2, 1, lambda z: 4.0 * np.cos(2 * np.angle(z))),
        "abs_sq": TestFunction("abs_sq", lambda z: np.abs(z) ** 2, 1, lambda z: np.full(np.shape(z), 4.0)),
        "re_z2": TestFunction("re_z2", lambda z: (z**2).real, 1, lambda z: np.zeros(np.shape(z))),
        "r4logr_cos4": TestFunction(
            "r4logr_cos4", r4logr_cos4, 3, lambda z: 8.0 * np.abs(z) ** 2 * np.cos(4 * np.angle(z))
        ),
        "cubic_bump": TestFunction("cubic_bump", cubic_bump, 1, cubic_bump_laplacian, radius=cutoff.r_out),
    }


def model_functions(model: MetricModel, radius: float = 0.5) -> dict[str, TestFunction]:
    """``psi = log a + pi |zeta|^2`` and ``phi = rho kappa^2 - 1`` in the Kähler coordinate."""
    origin = np.array([0.0 + 0j])
    kappa = kahler_scale(float(model.density(origin)[0]))
    lw0 = float(model.log_weight(origin)[0].real)

    def psi(zeta):
        return model.log_weight(kappa * zeta).real - lw0 + math.pi * np.abs(zeta) ** 2

    def phi(zeta):
        return model.density(kappa * zeta) * kappa**2 - 1.0

    return {
        f"{model.name}:psi": TestFunction(f"{model.name}:psi", psi, 1, radius=radius),
        f"{model.name}:phi": TestFunction(f"{model.name}:phi", phi, 1, radius=radius),
    }


def _cos_coefficient(values_of_theta: Callable, k: int, spec: QuadSpec | None) -> float:
    # for real f the cosine coefficient is Re A_k
    return angular_modes(values_of_theta, k, spec)[k].value().real


def fourier_profile(tf: TestFunction, k: int, r_list, spec: QuadSpec | None = None, threads=None) -> np.ndarray:
    """``h(r) = int f(r e^{i theta}) cos(k theta) d theta`` for each ``r``."""
    if k < 0:
        raise ConfigError(f"mode must be non-negative, got {k}")
    radii = [float(r) for r in np.atleast_1d(r_list)]
    if any(r <= 0 or r >= tf.radius for r in radii):
        raise ConfigError(f"radii must lie in (0, {tf.radius})")

    def one(r):
        return _cos_coefficient(lambda th: tf.values(r * np.exp(1j * th)), k, spec)

    return np.array(ordered_map(one, radii, threads))


def ode_residual(tf: TestFunction, k: int, r_list, spec: QuadSpec | None = None, threads=None) -> np.ndarray:
    """``h'' + h'/r - k^2 h / r^2 - int Delta f cos(k theta)`` per radius.

    Central differences with step ``1e-3 r`` and ``5e-4 r`` are combined by
    one Richardson step.

    Raises
    ------
    StepTooCoarse
        If the removed second-order term exceeds ``STEP_TOL`` of the right
        side
    """
    radii = np.atleast_1d(np.asarray(r_list, dtype=float))
    if np.any(radii * (1 + FD_RELATIVE_STEP) >= tf.radius) or np.any(radii <= 0):
        raise ConfigError(f"radii must lie strictly inside (0, {tf.radius})")

    def one(r):
        def operator(delta):
            h = fourier_profile(tf, k, [r - delta, r, r + delta], spec, threads=1)
            d2 = (h[2] - 2 * h[1] + h[0]) / delta**2
            d1 = (h[2] - h[0]) / (2 * delta)
            return d2 + d1 / r - k**2 * h[1] / r**2

        coarse = operator(FD_RELATIVE_STEP * r)
        fine = operator(0.5 * FD_RELATIVE_STEP * r)
        left = (4.0 * fine - coarse) / 3.0
        right = _cos_coefficient(lambda th: tf.laplacian_values(r * np.exp(1j * th)), k, spec)
        truncation = abs(fine - coarse) / 3.0
        if truncation > STEP_TOL * max(1.0, abs(right)):
            raise StepTooCoarse(f"{tf.name}, k={k}, r={r:.4g}: truncation estimate {truncation:.3e}")
        return left - right

    return np.array(ordered_map(one, list(radii), threads))


def bound_denominator(r, k: int, jet_order: int) -> np.ndarray:
    """``r^2 max(1, |log r| [k=2])`` for order 1, ``r^4 max(1, |log r| [k in {2,4}])`` for order 3."""
    r = np.asarray(r, dtype=float)
    if jet_order == 1:
        power, log_modes = 2, (2,)
    else:
        power, log_modes = 4, (2, 4)
    log_term = np.abs(np.log(r)) if k in log_modes else np.zeros_like(r)
    return r**power * np.maximum(1.0, log_term)


@dataclass(frozen=True)
class BoundResult:
    """Sup of ``|h(r)| / denominator(r)``.

    Attributes
    ----------
    name : str
    k : int
    jet_order : int
    sup : float
    r_at_sup : float
    """

    name: str
    k: int
    jet_order: int
    sup: float
    r_at_sup: float


def _geometric_radii(r_max: float, n: int = 120, decades: float = 6.0) -> np.ndarray:
    return r_max * 10.0 ** (-decades * np.arange(n) / (n - 1))


def bound_table(tf: TestFunction, k: int, r_list, spec: QuadSpec | None = None, threads=None) -> list[tuple]:
    """``(r, h, denominator, ratio)`` rows."""
    radii = np.atleast_1d(np.asarray(r_list, dtype=float))
    h = fourier_profile(tf, k, radii, spec, threads)
    den = bound_denominator(radii, k, tf.jet_order)
    return [(float(r), float(v), float(d), float(abs(v) / d)) for r, v, d in zip(radii, h, den)]


def check_bound(
    tf: TestFunction, k: int, r_max: float, spec: QuadSpec | None = None, threads=None, jet_order: int | None = None
) -> BoundResult:
    """Sup over ``r in (0, r_max]`` of ``|h(r)| / bound_denominator(r)``.

    Parameters
    ----------
    tf : TestFunction
        Function under test
    k : int
        Mode
    r_max : float
        Largest radius, below ``tf.radius``
    jet_order : int, optional
        Case of the bound; must match ``tf.jet_order`` when given

    Returns
    -------
    BoundResult
    """
    if jet_order is not None and jet_order != tf.jet_order:
        raise ConfigError(f"{tf.name} vanishes to order {tf.jet_order}, not {jet_order}")
    if not 0 < r_max < tf.radius:
        raise ConfigError(f"r_max must lie in (0, {tf.radius})")
    rows = bound_table(tf, k, _geometric_radii(r_max), spec, threads)
    best = max(rows, key=lambda row: row[3])
    logger.debug("bound %s k=%d: sup %.6g at r=%.3g", tf.name, k, best[3], best[0])
    return BoundResult(tf.name, k, tf.jet_order, best[3], best[0])
