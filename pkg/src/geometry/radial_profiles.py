"""Radial models whose Hermitian weight comes from an ODE.

For a radial metric ``g(r)`` the weight ``Phi = log a`` solves
``Phi'' + Phi'/r = -8 pi g``. In ``t = log r`` this is the first-order system

    dM/dt   = 4 pi g r^2      (M = area of the disc of radius r)
    dPhi/dt = -2 M

started from the exact solution on a neighbourhood of 0 where ``g`` is
constant, and integrated with DOP853 segment by segment between the radii
where the profile changes shape. Beyond ``r = 1`` each model has a
closed-form tail.

Classes
-------
RadialProfileModel : MetricModel
    ODE machinery shared by the families below
LowerBoundFamily : RadialProfileModel
    Metrics whose value at ``[1, 1]`` tends to 0 while their Bergman
    metrics stay bounded below
CuspFamily : RadialProfileModel
    C^{1,1} metrics developing a cone point at the origin

Functions
---------
family_7_2
    Member ``k`` of the lower-bound family
cusp_family
    Member ``n`` of the cusp family
"""

import logging
import math

import numpy as np
from scipy.integrate import solve_ivp

from src.errors import ConfigError, ModelError
from src.geometry.conventions import curvature_from_metric_jet
from src.geometry.cutoff import CutoffProfile
from src.geometry.metric_models import MetricModel, Symmetry
from src.numerics.jets import ORDER, WirtingerJet
from src.numerics.quadrature import QuadSpec, adaptive_log_integral

logger = logging.getLogger(__name__)

_ODE_RTOL = 1e-13
_ODE_ATOL = 1e-15


class RadialProfileModel(MetricModel):
    """Radial model defined by ``log g`` as a function of ``t = log r``.

    Subclasses implement ``log_metric_t`` (values), ``log_metric_jet_t``
    (univariate Taylor jet in ``t``), ``core_metric_jet`` (bivariate jet of
    ``g`` on the core disc ``r <= core_radius``) and ``tail_state`` (the
    closed-form ``(M, Phi)`` for ``t > 0``).
    """

    symmetry = Symmetry.RADIAL
    bandwidth = 0

    def __init__(self, start_t: float, breaks_t=(), core_radius: float = 0.0, **kwargs):
        super().__init__(**kwargs)
        self.start_t = float(start_t)
        self.core_radius = float(core_radius)
        self._solve(sorted(b for b in breaks_t if self.start_t < b < 0.0))

    # subclass interface -----------------------------------------------------------

    def log_metric_t(self, t) -> np.ndarray:
        raise NotImplementedError

    def log_metric_jet_t(self, t0) -> WirtingerJet:
        raise NotImplementedError

    def core_metric_jet(self, z0) -> WirtingerJet:
        raise NotImplementedError

    def tail_state(self, t) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    # ODE --------------------------------------------------------------------------

    def _solve(self, breaks):
        self._g0 = math.exp(float(self.log_metric_t(np.array([self.start_t]))[0]))
        r0_sq = math.exp(2.0 * self.start_t)
        y = np.array([2 * math.pi * self._g0 * r0_sq, -2 * math.pi * self._g0 * r0_sq])

        def rhs(t, state):
            g_r2 = math.exp(float(self.log_metric_t(np.array([t]))[0]) + 2.0 * t)
            return [4.0 * math.pi * g_r2, -2.0 * state[0]]

        edges = [self.start_t, *breaks, 0.0]
        self._edges = np.asarray(edges)
        self._pieces = []
        for lo, hi in zip(edges[:-1], edges[1:]):
            sol = solve_ivp(rhs, (lo, hi), y, method="DOP853", rtol=_ODE_RTOL, atol=_ODE_ATOL, dense_output=True)
            if not sol.success:
                raise ModelError(f"{self.name}: weight ODE failed on [{lo:.4g}, {hi:.4g}]: {sol.message}")
            self._pieces.append(sol.sol)
            y = sol.y[:, -1]
        self.unit_state = (float(y[0]), float(y[1]))
        logger.debug("%s: weight ODE solved on %d segments, M(1) = %.15g", self.name, len(self._pieces), y[0])

    def ode_state(self, t) -> tuple[np.ndarray, np.ndarray]:
        """``(M, Phi)`` at ``t = log r``, vectorized."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        mass = np.empty_like(t)
        phi = np.empty_like(t)
        core = t <= self.start_t
        with np.errstate(under="ignore"):
            r_sq = np.exp(2.0 * np.where(core, t, self.start_t))
        mass[core] = 2 * math.pi * self._g0 * r_sq[core]
        phi[core] = -2 * math.pi * self._g0 * r_sq[core]
        for i, sol in enumerate(self._pieces):
            lo, hi = self._edges[i], self._edges[i + 1]
            mask = (t > lo) & (t <= hi)
            if np.any(mask):
                mass[mask], phi[mask] = sol(t[mask])
        tail = t > 0.0
        if np.any(tail):
            mass[tail], phi[tail] = self.tail_state(t[tail])
        return mass, phi

    # evaluation -------------------------------------------------------------------

    def radial_log_weight(self, r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore"):
            t = np.log(r)
        _, phi = self.ode_state(t.ravel())
        return phi.reshape(r.shape)

    def log_weight(self, z):
        return self.radial_log_weight(np.abs(np.asarray(z)))

    def _log_metric_r(self, r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore"):
            t = np.log(r)
        return np.asarray(self.log_metric_t(t.ravel())).reshape(r.shape)

    def metric_coeff(self, z):
        return np.exp(self._log_metric_r(np.abs(np.asarray(z))))

    def radial_log_density(self, r):
        return math.log(2.0) + self._log_metric_r(r)

    def polar_log_weight(self, r, theta):
        shape = np.broadcast_shapes(np.shape(r), np.shape(theta))
        return np.broadcast_to(self.radial_log_weight(r), shape)

    def polar_log_density(self, r, theta):
        shape = np.broadcast_shapes(np.shape(r), np.shape(theta))
        return np.broadcast_to(self.radial_log_density(r), shape)

    def metric_jet(self, z0):
        z0 = np.asarray(z0, dtype=complex)
        core = np.abs(z0) <= self.core_radius
        safe = np.where(core, 0.5, z0)
        z, zbar = WirtingerJet.variables(safe)
        t = 0.5 * (z * zbar).log()
        log_g = t.compose(self.log_metric_jet_t(np.log(np.abs(safe))).taylor())
        outer = log_g.exp()
        if not np.any(core):
            return outer
        return WirtingerJet.where(core, self.core_metric_jet(np.where(core, z0, 0.0)), outer)

    def fd_step(self, z):
        return np.maximum(1e-3, 2e-2 * np.abs(np.asarray(z)))

    def compatibility_residual(self, z) -> np.ndarray:
        """Residual of the weight equation from the ODE state at ``|z|``.

        Checks ``dPhi/dt = -2 M`` and ``dM/dt = 4 pi g r^2`` by Richardson
        central differences in ``t`` and returns the larger relative
        residual.
        """
        r = np.abs(np.asarray(z, dtype=complex))
        t = np.log(r)
        h = self.fd_step(z) / np.maximum(r, 1e-300)

        def central(step, which):
            return (self.ode_state(t + step)[which] - self.ode_state(t - step)[which]) / (2.0 * step)

        def derivative(which):
            return (4.0 * central(h / 2, which) - central(h, which)) / 3.0

        mass, _ = self.ode_state(t)
        source = 4.0 * math.pi * np.exp(self.log_metric_t(t) + 2.0 * t)
        res_mass = np.abs(derivative(0) - source) / source
        res_phi = np.abs(derivative(1) + 2.0 * mass) / (2.0 * mass)
        return np.maximum(res_mass, res_phi)

    def sectional_curvature(self, z) -> np.ndarray:
        """Gaussian curvature ``R / g^2`` of the normalized metric."""
        jet = self.metric_jet(z)
        g = jet.value.real
        return curvature_from_metric_jet(jet) / g**2


def _flip_jet(jet: WirtingerJet, t0) -> WirtingerJet:
    """Jet of ``G(-t) - 4 t`` at ``t0`` from the jet of ``G`` at ``-t0``."""
    coeffs = jet.coeffs.copy()
    for n in range(1, ORDER + 1):
        coeffs[..., n, 0] *= (-1) ** n
    coeffs[..., 0, 0] -= 4.0 * np.asarray(t0)
    coeffs[..., 1, 0] -= 4.0
    return WirtingerJet(coeffs)


def _composed_cutoff(cutoff: CutoffProfile, log_r: WirtingerJet) -> WirtingerJet:
    """Univariate jet of ``eta(exp(s))`` from the jet ``s``."""
    r0 = np.exp(log_r.value.real)
    return log_r.exp().compose(cutoff.radial_jet(r0).taylor())


class LowerBoundFamily(RadialProfileModel):
    """Radial metric ``g = E^4 f(E^2 r)^2 / (2 Vol')`` on ``r <= 1``,
    reflected by ``g(r) = g(1/r) / r^4`` for ``r > 1``, with ``E = e^{e^k}``
    and

        f(s) = eta(s) + (1 - eta(s)) eta(s/E) / (s log s)
               + (1 - eta(s)) (1 - eta(s/E)) / (e^k s).

    The profile is flat on ``|z| <= 1.5 / E^2`` and its value at ``z = 1`` is
    ``1 / (2 e^{2k} Vol')``, which tends to 0 with ``k``.
    """

    name = "family_7_2"
    max_index = 5

    def __init__(self, k: int, cutoff: CutoffProfile | None = None):
        if not 1 <= k <= self.max_index:
            raise ConfigError(f"family index k must be in [1, {self.max_index}], got {k}")
        self.k = int(k)
        self.log_e = math.exp(self.k)
        self.cutoff = cutoff or CutoffProfile(r_in=1.5, r_out=2.0)
        self.volume = self._volume()
        if not 2 * math.pi < self.volume < 20 * math.pi:
            raise ModelError(f"family_7_2({k}): volume {self.volume:.6g} outside (2 pi, 20 pi)")
        lo_in, lo_out = math.log(self.cutoff.r_in), math.log(self.cutoff.r_out)
        shift = 2 * self.log_e
        breaks_t = (lo_out - shift, lo_in - self.log_e, lo_out - self.log_e)
        super().__init__(
            start_t=lo_in - shift,
            breaks_t=breaks_t,
            core_radius=math.exp(lo_in - shift),
            sample_radius=1.0,
            breakpoints=tuple(math.exp(b) for b in (lo_in - shift, *breaks_t)) + (1.0,),
            params={"k": self.k},
        )
        mass = self.unit_state[0]
        if abs(mass - 0.5) > 1e-8:
            raise ModelError(f"family_7_2({k}): half volume {mass:.12g} != 1/2")

    def log_profile(self, log_s) -> np.ndarray:
        """``log f`` as a function of ``log s`` (s = E^2 r)."""
        log_s = np.asarray(log_s, dtype=float)
        flat = log_s <= math.log(self.cutoff.r_in)
        safe = np.where(flat, 1.0, log_s)
        near = self.cutoff.value(np.exp(safe))
        far = self.cutoff.value(np.exp(safe - self.log_e))
        body = near + (1 - near) * far / (np.exp(safe) * safe) + (1 - near) * (1 - far) / (self.log_e * np.exp(safe))
        return np.where(flat, 0.0, np.log(body))

    def log_profile_jet(self, log_s0) -> WirtingerJet:
        log_s0 = np.asarray(log_s0, dtype=float)
        flat = log_s0 <= math.log(self.cutoff.r_in)
        s = WirtingerJet.real_variable(np.where(flat, 1.0, log_s0))
        near = _composed_cutoff(self.cutoff, s)
        far = _composed_cutoff(self.cutoff, s - self.log_e)
        inv = s.exp().reciprocal()
        body = near + (1.0 - near) * far * inv * s.reciprocal() + (1.0 - near) * (1.0 - far) * inv / self.log_e
        return WirtingerJet.where(flat, WirtingerJet.constant(np.zeros(log_s0.shape)), body.log())

    def _volume(self) -> float:
        """``Vol' = 4 pi int_0^{E^2} f(s)^2 s ds``."""
        head = 0.5 * self.cutoff.r_in**2
        lo = math.log(self.cutoff.r_in)
        hi = 2 * self.log_e
        breaks = (math.log(self.cutoff.r_out), lo + self.log_e, math.log(self.cutoff.r_out) + self.log_e)
        body = adaptive_log_integral(
            lambda u: 2.0 * self.log_profile(u) + 2.0 * u, lo, hi, QuadSpec(rel_tol=1e-13), breaks
        )
        return 4 * math.pi * (head + body.value.real())

    def log_metric_t(self, t):
        t = np.asarray(t, dtype=float)
        inner = np.minimum(t, -t)
        log_g = 4 * self.log_e + 2.0 * self.log_profile(inner + 2 * self.log_e) - math.log(2 * self.volume)
        return np.where(t > 0, log_g - 4.0 * t, log_g)

    def log_metric_jet_t(self, t0):
        t0 = np.asarray(t0, dtype=float)
        inner = np.minimum(t0, -t0)
        jet = 2.0 * self.log_profile_jet(inner + 2 * self.log_e) + (4 * self.log_e - math.log(2 * self.volume))
        return WirtingerJet.where(t0 > 0, _flip_jet(jet, t0), jet)

    def core_metric_jet(self, z0):
        return WirtingerJet.constant(np.full(np.shape(z0), self._g0, dtype=complex))

    def tail_state(self, t):
        mass, phi = self.ode_state(-t)
        return 1.0 - mass, phi - 2.0 * t

    def value_at_one(self) -> float:
        """``g(1) = 1 / (2 e^{2k} Vol')``."""
        return math.exp(-2 * self.k) / (2 * self.volume)

    def normalized_sectional_curvature(self, z) -> np.ndarray:
        """Gaussian curvature of the unnormalized metric ``2 Vol' g``."""
        return self.sectional_curvature(z) / self.volume


class CuspFamily(RadialProfileModel):
    """Radial metric ``g = e^{2 f_n} / (2 Vol')`` with

        f_n = (theta - 1)(e^{2n} r^2 - 1 - 2n) / 2              r <= e^{-n}
        f_n = eta(r)(theta - 1) log r - (1 - eta(r)) log(1 + r^2)   otherwise.

    ``f_n`` is C^{1,1} across ``r = e^{-n}``; as ``n`` grows the metric near
    the origin approaches a cone of angle ``2 pi theta``.
    """

    name = "cusp_family"

    def __init__(self, n: int, theta: float = 0.5, cutoff: CutoffProfile | None = None):
        if n < 1:
            raise ConfigError(f"cusp index must be positive, got {n}")
        if not 0.0 < theta < 1.0:
            raise ConfigError(f"cone parameter theta must lie in (0, 1), got {theta}")
        self.n = int(n)
        self.theta = float(theta)
        self.cutoff = cutoff or CutoffProfile()
        self.volume = self._volume()
        super().__init__(
            start_t=-self.n + math.log(1e-6),
            breaks_t=(-float(self.n), math.log(self.cutoff.r_in)),
            core_radius=math.exp(-self.n),
            sample_radius=2.0,
            breakpoints=(math.exp(-self.n), self.cutoff.r_in, self.cutoff.r_out),
            params={"n": self.n, "theta": self.theta},
        )

    def profile(self, t) -> np.ndarray:
        """``f_n`` at ``t = log r``."""
        t = np.asarray(t, dtype=float)
        inner = t <= -self.n
        with np.errstate(under="ignore"):
            r_sq = np.exp(2.0 * t)
        core = 0.5 * (self.theta - 1) * (math.exp(2 * self.n) * r_sq - 1 - 2 * self.n)
        safe_t = np.where(inner, 0.0, t)
        eta = self.cutoff.value(np.exp(safe_t))
        outer = eta * (self.theta - 1) * safe_t - (1 - eta) * np.log1p(np.exp(2.0 * safe_t))
        return np.where(inner, core, outer)

    def profile_jet(self, t0) -> WirtingerJet:
        t0 = np.asarray(t0, dtype=float)
        inner = t0 <= -self.n
        t = WirtingerJet.real_variable(t0)
        r_sq = (2.0 * t).exp()
        core = 0.5 * (self.theta - 1) * (math.exp(2 * self.n) * r_sq - (1 + 2 * self.n))
        eta = _composed_cutoff(self.cutoff, t)
        outer = (self.theta - 1) * eta * t - (1.0 - eta) * (1.0 + r_sq).log()
        return WirtingerJet.where(inner, core, outer)

    def _volume(self) -> float:
        """``Vol' = int e^{2 f_n} dA`` (the part beyond ``r = 1`` is ``pi / 2``)."""
        body = adaptive_log_integral(
            lambda t: 2.0 * self.profile(t) + 2.0 * t,
            -self.n - 40.0,
            0.0,
            QuadSpec(rel_tol=1e-13),
            (-float(self.n), math.log(self.cutoff.r_in)),
        )
        return 2 * math.pi * body.value.real() + 0.5 * math.pi

    def log_metric_t(self, t):
        return 2.0 * self.profile(t) - math.log(2 * self.volume)

    def log_metric_jet_t(self, t0):
        return 2.0 * self.profile_jet(t0) - math.log(2 * self.volume)

    def core_metric_jet(self, z0):
        z, zbar = WirtingerJet.variables(z0)
        f = 0.5 * (self.theta - 1) * (math.exp(2 * self.n) * (z * zbar) - (1 + 2 * self.n))
        return (2.0 * f).exp() / (2 * self.volume)

    def tail_state(self, t):
        mass_1, phi_1 = self.unit_state
        r_sq = np.exp(2.0 * t)
        ratio = math.pi / self.volume
        mass = 1.0 - ratio / (1.0 + r_sq)
        phi = phi_1 - 2.0 * t + ratio * (np.log(r_sq / (1.0 + r_sq)) + math.log(2.0))
        if abs(mass_1 - (1.0 - 0.5 * ratio)) > 1e-8:
            logger.warning("%s: ODE mass at r = 1 is %.12g, closed form %.12g", self.name, mass_1, 1 - 0.5 * ratio)
        return mass, phi

    def origin_ratio(self) -> float:
        """``g_n(0) / g_FS(0)``."""
        return math.exp(float(self.log_metric_t(np.array([-np.inf]))[0])) * 2 * math.pi


def family_7_2(k: int, cutoff: CutoffProfile | None = None) -> LowerBoundFamily:
    """Member ``k`` of the family whose value at ``[1, 1]`` tends to 0.

    Raises
    ------
    ConfigError
        If ``k`` is outside ``[1, 5]`` (``e^{e^k}`` must stay representable)
    ModelError
        If the volume leaves ``(2 pi, 20 pi)`` or the ODE fails
    """
    return LowerBoundFamily(k, cutoff)


def cusp_family(n: int, theta: float = 0.5) -> CuspFamily:
    """Member ``n`` of the cusp family with cone parameter ``theta``."""
    return CuspFamily(n, theta)
