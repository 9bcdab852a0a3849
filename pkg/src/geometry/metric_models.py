"""Explicit polarized Kahler models on charts of CP^1.

Each model supplies the Hermitian weight ``a = h(e_L, e_L)`` in log form, the
metric coefficient ``g`` (closed form, vectorized), and Wirtinger jets of
``log a`` or ``g`` for exact derivatives. See ``src.geometry.conventions``
for the normalizations.

Classes
-------
Symmetry : enum.Enum
    Angular structure of a model, which decides the Gram bandwidth
MetricModel
    Base class of all models
FubiniStudy, FlatGaussian, SharpExample, OscillationModel : MetricModel
    The concrete analytic models
PositivityDiagnostic
    Returned instead of an oscillation model whose metric is not positive

Functions
---------
fubini_study, flat_gaussian, sharp_example, oscillation_family
    Model factories
curvature_at
    ``R_{1 1bar 1 1bar}`` at chart points
radial_symmetry_residual
    Rotation invariance check for radial models
sample_points
    Seeded random points inside a model's sampling disc
"""

import enum
import logging
import math
from dataclasses import dataclass

import numpy as np

from src.errors import ConfigError, ModelError
from src.geometry.conventions import curvature_from_metric_jet, metric_jet_from_log_weight
from src.geometry.cutoff import CutoffProfile
from src.numerics.jets import WirtingerJet

logger = logging.getLogger(__name__)


class Symmetry(str, enum.Enum):
    """Angular structure of a model.

    Attributes
    ----------
    RADIAL : str
        Weight and metric invariant under rotations; diagonal Gram
    ANGULAR_BAND : str
        Finitely many angular harmonics in ``log a``; banded Gram
    GENERIC : str
        No usable structure; full Gram
    """

    RADIAL = "radial"
    ANGULAR_BAND = "angular_band"
    GENERIC = "generic"


DEFAULT_DEGREE_CAPS = {Symmetry.RADIAL: 4096, Symmetry.ANGULAR_BAND: 512, Symmetry.GENERIC: 128}


class MetricModel:
    """A polarized model on a chart of CP^1.

    Attributes
    ----------
    name : str
        Registry name
    symmetry : Symmetry
        Angular structure
    bandwidth : int | None
        Number of angular harmonics in ``log a`` (0 for radial, ``None`` when
        unbounded)
    chart_radius : float
        Radius of the chart disc, ``inf`` for the dense chart of CP^1
    degree_cap : int
        Largest usable tensor power
    angular_support : float
        Radius beyond which the model is radial
    sample_radius : float
        Radius of the disc used for random verification points
    breakpoints : tuple[float, ...]
        Radii where the model's smoothness drops
    params : dict
        Construction parameters, echoed in reports
    """

    name = "model"
    symmetry = Symmetry.GENERIC
    bandwidth: int | None = None

    def __init__(
        self,
        chart_radius: float = math.inf,
        degree_cap: int | None = None,
        angular_support: float = math.inf,
        sample_radius: float = 1.0,
        breakpoints: tuple = (),
        params: dict | None = None,
    ):
        self.chart_radius = float(chart_radius)
        self.degree_cap = degree_cap or DEFAULT_DEGREE_CAPS[self.symmetry]
        self.angular_support = 0.0 if self.symmetry is Symmetry.RADIAL else float(angular_support)
        self.sample_radius = float(min(sample_radius, chart_radius))
        self.breakpoints = tuple(breakpoints)
        self.params = dict(params or {})

    def __repr__(self):
        return f"{type(self).__name__}({self.params})"

    # evaluation -------------------------------------------------------------------

    def log_weight(self, z) -> np.ndarray:
        """``log a(z)``."""
        raise NotImplementedError

    def metric_coeff(self, z) -> np.ndarray:
        """``g(z)``."""
        raise NotImplementedError

    def log_weight_jet(self, z0) -> WirtingerJet:
        """Jet of ``log a`` at ``z0`` to total order 4."""
        raise NotImplementedError

    def metric_jet(self, z0) -> WirtingerJet:
        """Jet of ``g`` at ``z0``, exact to total order 2."""
        return metric_jet_from_log_weight(self.log_weight_jet(z0))

    def density(self, z) -> np.ndarray:
        """Area density ``rho = 2 g`` with respect to ``dA``."""
        return 2.0 * self.metric_coeff(z)

    def polar_log_weight(self, r, theta) -> np.ndarray:
        """``log a(r e^{i theta})`` on broadcast polar arrays."""
        return self.log_weight(np.asarray(r) * np.exp(1j * np.asarray(theta)))

    def polar_log_density(self, r, theta) -> np.ndarray:
        """``log rho(r e^{i theta})`` on broadcast polar arrays."""
        return np.log(self.density(np.asarray(r) * np.exp(1j * np.asarray(theta))))

    def radial_log_weight(self, r) -> np.ndarray:
        """``log a`` along the positive real axis, used to locate peaks."""
        return self.log_weight(np.asarray(r, dtype=float) + 0j)

    def radial_log_density(self, r) -> np.ndarray:
        """``log rho`` along the positive real axis."""
        return np.log(self.density(np.asarray(r, dtype=float) + 0j))

    def fd_step(self, z) -> np.ndarray:
        """Finite-difference step for derivative checks at ``z``."""
        return np.full(np.shape(z), 1e-2)

    def compatibility_residual(self, z) -> np.ndarray:
        """Relative residual of ``(1/2 pi) d dbar log a = -g`` at ``z``.

        The Laplacian is a five-point stencil at steps ``h`` and ``h/2``
        combined by one Richardson step.
        """
        z = np.asarray(z, dtype=complex)
        h = self.fd_step(z)

        def laplacian(step):
            total = (
                self.log_weight(z + step)
                + self.log_weight(z - step)
                + self.log_weight(z + 1j * step)
                + self.log_weight(z - 1j * step)
                - 4.0 * self.log_weight(z)
            )
            return total / step**2

        lap = (4.0 * laplacian(h / 2) - laplacian(h)) / 3.0
        g = self.metric_coeff(z)
        return np.abs(lap / (8.0 * math.pi) + g) / g

    def check_degree(self, m: int):
        """Reject tensor powers outside ``[1, degree_cap]``."""
        if m < 1 or m > self.degree_cap:
            raise ConfigError(f"m = {m} outside [1, {self.degree_cap}] for model {self.name}")

    def describe(self) -> dict:
        return {
            "name": self.name,
            "symmetry": self.symmetry.value,
            "bandwidth": self.bandwidth,
            "degree_cap": self.degree_cap,
            "chart_radius": self.chart_radius,
            "params": self.params,
        }


def _polar(z):
    z = np.asarray(z, dtype=complex)
    return z, np.abs(z)


class FubiniStudy(MetricModel):
    """``a = 1/(1+|z|^2)``, ``g = 1/(2 pi (1+|z|^2)^2)``; balanced for every m."""

    name = "fubini_study"
    symmetry = Symmetry.RADIAL
    bandwidth = 0

    def __init__(self):
        super().__init__(sample_radius=2.0)

    def log_weight(self, z):
        return -np.log1p(np.abs(np.asarray(z)) ** 2)

    def metric_coeff(self, z):
        return 1.0 / (2.0 * math.pi * (1.0 + np.abs(np.asarray(z)) ** 2) ** 2)

    def log_weight_jet(self, z0):
        z, zbar = WirtingerJet.variables(z0)
        return -(1.0 + z * zbar).log()

    def polar_log_density(self, r, theta):
        r = np.broadcast_to(np.asarray(r, dtype=float), np.broadcast_shapes(np.shape(r), np.shape(theta)))
        return -math.log(math.pi) - 2.0 * np.log1p(r**2)


class FlatGaussian(MetricModel):
    """``a = exp(-pi |z|^2)`` and ``g = 1/2`` on a disc of finite radius."""

    name = "flat_gaussian"
    symmetry = Symmetry.RADIAL
    bandwidth = 0

    def __init__(self, chart_radius: float = 8.0):
        if chart_radius <= 0:
            raise ConfigError("chart_radius must be positive")
        super().__init__(chart_radius=chart_radius, sample_radius=2.0, params={"chart_radius": chart_radius})

    def log_weight(self, z):
        return -math.pi * np.abs(np.asarray(z)) ** 2

    def metric_coeff(self, z):
        return np.full(np.shape(z), 0.5)

    def log_weight_jet(self, z0):
        z, zbar = WirtingerJet.variables(z0)
        return -math.pi * (z * zbar)

    def polar_log_density(self, r, theta):
        return np.zeros(np.broadcast_shapes(np.shape(r), np.shape(theta)))


class SharpExample(MetricModel):
    """Fubini-Study weight perturbed by ``amplitude * eta |z|^3 (z + zbar)``.

    With the default amplitude 1/400 the metric is only C^{1,1} at the
    origin, which is what makes the ``m^{-1/2}`` gradient rate sharp.
    """

    name = "sharp_example"
    symmetry = Symmetry.ANGULAR_BAND
    bandwidth = 1

    def __init__(self, cutoff: CutoffProfile | None = None, amplitude: float = 1.0 / 400.0):
        self.cutoff = cutoff or CutoffProfile()
        self.amplitude = float(amplitude)
        super().__init__(
            degree_cap=2048,
            angular_support=self.cutoff.r_out,
            sample_radius=1.5,
            breakpoints=(self.cutoff.r_in, self.cutoff.r_out),
            params={"amplitude": self.amplitude},
        )

    def _radial_terms(self, r):
        eta = self.cutoff.value(r)
        d1 = self.cutoff.derivative(r)
        d2 = self.cutoff.second_derivative(r)
        # Laplacian of eta r^4 cos(theta) is this times cos(theta)
        lap = d2 * r**4 + 9.0 * d1 * r**3 + 15.0 * eta * r**2
        return eta, lap

    def log_weight(self, z):
        z, r = _polar(z)
        eta = self.cutoff.value(r)
        return -np.log1p(r**2) + 2.0 * self.amplitude * eta * r**3 * z.real

    def metric_coeff(self, z):
        z, r = _polar(z)
        _, lap = self._radial_terms(r)
        cos = np.divide(z.real, r, out=np.zeros_like(r), where=r > 0)
        return 1.0 / (2.0 * math.pi * (1.0 + r**2) ** 2) - self.amplitude * lap * cos / (4.0 * math.pi)

    def polar_log_weight(self, r, theta):
        r = np.asarray(r, dtype=float)
        eta = self.cutoff.value(r)
        return -np.log1p(r**2) + 2.0 * self.amplitude * eta * r**4 * np.cos(theta)

    def polar_log_density(self, r, theta):
        r = np.asarray(r, dtype=float)
        _, lap = self._radial_terms(r)
        g = 1.0 / (2.0 * math.pi * (1.0 + r**2) ** 2) - self.amplitude * lap * np.cos(theta) / (4.0 * math.pi)
        return np.log(2.0 * g)

    def radial_log_weight(self, r):
        return -np.log1p(np.asarray(r, dtype=float) ** 2)

    def fd_step(self, z):
        # resolves the cutoff ramps
        return np.full(np.shape(z), 2e-3)

    def log_weight_jet(self, z0):
        z0 = np.asarray(z0, dtype=complex)
        off_origin = np.abs(z0) > 0
        safe = np.where(off_origin, z0, 1.0)
        z, zbar = WirtingerJet.variables(z0)
        base = -(1.0 + z * zbar).log()
        zs, zsbar = WirtingerJet.variables(safe)
        bump = self.cutoff.jet(safe) * (zs * zsbar).power(1.5) * (zs + zsbar) * self.amplitude
        # the perturbation vanishes to third order at the origin
        zero = WirtingerJet.constant(np.zeros(z0.shape, dtype=complex))
        return base + WirtingerJet.where(off_origin, bump, zero)


class OscillationModel(MetricModel):
    """Fubini-Study weight times ``exp(phi_k)``, with
    ``phi_k = k^-4 sin(k z + k zbar) sin(i k z - i k zbar) eta(z)``."""

    name = "oscillation_family"
    symmetry = Symmetry.GENERIC
    bandwidth = None

    def __init__(self, k: int, cutoff: CutoffProfile | None = None):
        self.k = int(k)
        self.cutoff = cutoff or CutoffProfile()
        super().__init__(
            angular_support=self.cutoff.r_out,
            sample_radius=1.0,
            breakpoints=(self.cutoff.r_in, self.cutoff.r_out),
            params={"k": self.k},
        )

    def phi(self, z) -> np.ndarray:
        """``phi_k(z) = -k^-4 sin(2kx) sin(2ky) eta(|z|)``."""
        z, r = _polar(z)
        k = self.k
        return -(k**-4.0) * np.sin(2 * k * z.real) * np.sin(2 * k * z.imag) * self.cutoff.value(r)

    def laplacian_phi(self, z) -> np.ndarray:
        """Closed-form ``Delta phi_k``."""
        z, r = _polar(z)
        k = self.k
        x, y = z.real, z.imag
        scale = -(k**-4.0)
        u = scale * np.sin(2 * k * x) * np.sin(2 * k * y)
        ux = scale * 2 * k * np.cos(2 * k * x) * np.sin(2 * k * y)
        uy = scale * 2 * k * np.sin(2 * k * x) * np.cos(2 * k * y)
        eta = self.cutoff.value(r)
        d1 = self.cutoff.derivative(r)
        d2 = self.cutoff.second_derivative(r)
        radial_d1 = np.divide(d1, r, out=np.zeros_like(r), where=r > 0)
        grad_dot = (ux * x + uy * y) * radial_d1
        lap_eta = d2 + radial_d1
        return eta * (-8.0 * k**2 * u) + 2.0 * grad_dot + u * lap_eta

    def log_weight(self, z):
        z = np.asarray(z, dtype=complex)
        return -np.log1p(np.abs(z) ** 2) + self.phi(z)

    def metric_coeff(self, z):
        z = np.asarray(z, dtype=complex)
        return 1.0 / (2.0 * math.pi * (1.0 + np.abs(z) ** 2) ** 2) - self.laplacian_phi(z) / (8.0 * math.pi)

    def phi_jet(self, z0) -> WirtingerJet:
        z, zbar = WirtingerJet.variables(z0)
        k = self.k
        waves = (k * (z + zbar)).sin() * (1j * k * (z - zbar)).sin()
        return (k**-4.0) * waves * self.cutoff.jet(z0)

    def log_weight_jet(self, z0):
        z, zbar = WirtingerJet.variables(z0)
        return -(1.0 + z * zbar).log() + self.phi_jet(z0)

    def fd_step(self, z):
        return np.full(np.shape(z), 1e-2 / self.k)


@dataclass(frozen=True)
class PositivityDiagnostic:
    """Why an oscillation model was not built.

    Attributes
    ----------
    k : int
        Requested index
    min_metric : float
        Smallest ``g`` on the verification grid
    threshold : int
        Smallest index at or above ``k`` whose metric is positive on the grid
    """

    k: int
    min_metric: float
    threshold: int


def _verification_grid(radius: float, n_r: int = 200, n_theta: int = 256) -> np.ndarray:
    r = np.linspace(0.0, radius, n_r + 1)[1:]
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    return (r[:, None] * np.exp(1j * theta[None, :])).ravel()


def fubini_study() -> FubiniStudy:
    """The Fubini-Study model on the dense chart of CP^1."""
    return FubiniStudy()


def flat_gaussian(chart_radius: float = 8.0) -> FlatGaussian:
    """The Euclidean comparison model on a disc."""
    return FlatGaussian(chart_radius)


def sharp_example(cutoff: CutoffProfile | None = None, amplitude: float = 1.0 / 400.0) -> SharpExample:
    """The C^{1,1} model whose Bergman gradient decays exactly like ``m^{-1/2}``.

    Raises
    ------
    ModelError
        If the cutoff violates its bounds or ``g`` is not positive on the
        verification grid
    """
    model = SharpExample(cutoff, amplitude)
    model.cutoff.verify()
    g_min = float(np.min(model.metric_coeff(_verification_grid(1.2 * model.cutoff.r_out))))
    if g_min <= 0:
        raise ModelError(f"sharp_example metric not positive (min g = {g_min:.3e})")
    return model


def oscillation_family(k: int, cutoff: CutoffProfile | None = None) -> OscillationModel | PositivityDiagnostic:
    """The oscillating perturbation of Fubini-Study with index ``k``.

    Returns
    -------
    OscillationModel | PositivityDiagnostic
        The model, or a diagnostic when ``g`` is not positive on the
        verification grid (small ``k``)
    """
    if k < 1:
        raise ConfigError(f"oscillation index must be positive, got {k}")
    cutoff = cutoff or CutoffProfile()
    grid = _verification_grid(cutoff.r_out, n_r=400, n_theta=512)

    def min_metric(index):
        return float(np.min(OscillationModel(index, cutoff).metric_coeff(grid)))

    g_min = min_metric(k)
    if g_min > 0:
        return OscillationModel(k, cutoff)
    threshold = next((j for j in range(k + 1, 65) if min_metric(j) > 0), 65)
    logger.info("oscillation_family(%d) not positive (min g = %.3e); threshold %d", k, g_min, threshold)
    return PositivityDiagnostic(k, g_min, threshold)


def curvature_at(model: MetricModel, z) -> np.ndarray:
    """``R = -d dbar g + |d g|^2 / g`` at the chart points ``z``."""
    return curvature_from_metric_jet(model.metric_jet(z))


def radial_symmetry_residual(model: MetricModel, radii, n_angles: int = 16) -> float:
    """Largest relative change of ``a`` and ``g`` under rotation."""
    radii = np.asarray(radii, dtype=float)[:, None]
    theta = 2 * np.pi * np.arange(n_angles)[None, :] / n_angles
    points = radii * np.exp(1j * theta)
    worst = 0.0
    for field in (model.log_weight, model.metric_coeff):
        vals = field(points)
        ref = vals[:, :1]
        scale = np.maximum(np.abs(ref), 1e-300)
        worst = max(worst, float(np.max(np.abs(vals - ref) / scale)))
    return worst


def sample_points(model: MetricModel, n: int, seed: int = 0) -> np.ndarray:
    """Seeded uniform random points in the model's sampling disc."""
    rng = np.random.default_rng(seed)
    r = model.sample_radius * np.sqrt(rng.uniform(0.0, 1.0, n))
    theta = rng.uniform(0.0, 2 * np.pi, n)
    return r * np.exp(1j * theta)
