"""Radial cutoff profiles.

The profile equals 1 on ``[0, r_in]``, vanishes on ``[r_out, inf)`` and
drops in between with a derivative that ramps smoothly up to a plateau
``-slope`` and back down:

    eta'(r) = -slope * s((r - r_in)/ell) * s((r_out - r)/ell)
    s(t)    = 1 / (1 + exp(beta * (1/t - 1/(1 - t))))   on (0, 1)

with ``ell = (r_out - r_in) - 1/slope`` so that the total drop is exactly 1.
Every derivative of ``eta`` is an elementary function, which lets the
Wirtinger jets differentiate it exactly; only the value needs the primitive
of ``s``, evaluated by Gauss-Legendre quadrature.

Classes
-------
CutoffProfile
    Immutable smooth cutoff with jets and bound checks
"""

from dataclasses import dataclass, field

import numpy as np

from src.errors import ModelError
from src.numerics.jets import WirtingerJet

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)


def _step(t: np.ndarray, beta: float) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    inside = (t > 0) & (t < 1)
    safe = np.where(inside, t, 0.5)
    with np.errstate(over="ignore"):
        val = 1.0 / (1.0 + np.exp(beta * (1.0 / safe - 1.0 / (1.0 - safe))))
    return np.where(inside, val, np.where(t >= 1, 1.0, 0.0))


def _step_slope(t: np.ndarray, beta: float) -> np.ndarray:
    """``s'(t)``."""
    t = np.asarray(t, dtype=float)
    inside = (t > 0) & (t < 1)
    safe = np.where(inside, t, 0.5)
    s = _step(safe, beta)
    with np.errstate(over="ignore", invalid="ignore"):
        val = beta * s * (1.0 - s) * (1.0 / safe**2 + 1.0 / (1.0 - safe) ** 2)
    return np.where(inside & np.isfinite(val), val, 0.0)


def _step_primitive(u: np.ndarray, beta: float) -> np.ndarray:
    """``int_0^u s(t) dt`` for ``u`` in ``[0, 1]``."""
    u = np.clip(np.asarray(u, dtype=float), 0.0, 1.0)
    nodes = 0.5 * u[..., None] * (1.0 + _GL_NODES)
    return 0.5 * u * np.sum(_GL_WEIGHTS * _step(nodes, beta), axis=-1)


def _step_jet(t: WirtingerJet, beta: float) -> WirtingerJet:
    t0 = t.value.real
    inside = (t0 > 0) & (t0 < 1)
    mid = np.where(inside, t0, 0.5)
    with np.errstate(divide="ignore", over="ignore"):
        exponent = beta * (1.0 / mid - 1.0 / (1.0 - mid))
    # beyond this the step is flat to double precision
    live = inside & (np.abs(exponent) < 700.0)
    high = (t0 >= 1) | (inside & (exponent < 0))
    safe = WirtingerJet.where(live, t, WirtingerJet.constant(np.full(t.shape, 0.5)))
    u = beta * (safe.reciprocal() - (1.0 - safe).reciprocal())
    val = (u.exp() + 1.0).reciprocal()
    ones = WirtingerJet.constant(np.ones(t.shape))
    zeros = WirtingerJet.constant(np.zeros(t.shape))
    return WirtingerJet.where(live, val, WirtingerJet.where(high, ones, zeros))


@dataclass(frozen=True)
class CutoffProfile:
    """Smooth radial cutoff.

    Attributes
    ----------
    r_in : float
        Radius up to which the profile equals 1
    r_out : float
        Radius from which the profile vanishes
    slope : float
        Plateau value of ``|eta'|``
    beta : float
        Sharpness of the derivative ramps
    max_gradient_bound : float
        Required bound on ``|grad eta|``
    max_hessian_bound : float
        Required bound on ``|grad^2 eta|``
    """

    r_in: float = 0.5
    r_out: float = 1.0
    slope: float = 2.9
    beta: float = 0.6
    max_gradient_bound: float = 3.0
    max_hessian_bound: float = 30.0
    ramp: float = field(init=False)

    def __post_init__(self):
        width = self.r_out - self.r_in
        ramp = width - 1.0 / self.slope
        if not 0.0 < ramp <= 0.5 * width:
            raise ModelError(f"slope {self.slope} cannot drop by 1 over width {width}")
        object.__setattr__(self, "ramp", ramp)

    def value(self, r) -> np.ndarray:
        """``eta(r)``."""
        r = np.asarray(r, dtype=float)
        x = r - self.r_in
        width = self.r_out - self.r_in
        ell = self.ramp
        rising = 1.0 - self.slope * ell * _step_primitive(x / ell, self.beta)
        plateau = 1.0 - self.slope * (0.5 * ell + (x - ell))
        falling = self.slope * ell * _step_primitive((self.r_out - r) / ell, self.beta)
        out = np.where(x <= ell, rising, np.where(x <= width - ell, plateau, falling))
        return np.where(r <= self.r_in, 1.0, np.where(r >= self.r_out, 0.0, out))

    def derivative(self, r) -> np.ndarray:
        """``eta'(r)``."""
        r = np.asarray(r, dtype=float)
        return -self.slope * _step((r - self.r_in) / self.ramp, self.beta) * _step(
            (self.r_out - r) / self.ramp, self.beta
        )

    def radial_jet(self, r0) -> WirtingerJet:
        """Univariate Taylor jet of ``eta`` at real radii ``r0``."""
        r0 = np.asarray(r0, dtype=float)
        rad = WirtingerJet.real_variable(r0)
        ramp_in = _step_jet((rad - self.r_in) / self.ramp, self.beta)
        ramp_out = _step_jet((self.r_out - rad) / self.ramp, self.beta)
        slope_jet = -self.slope * ramp_in * ramp_out
        return slope_jet.integrate(self.value(r0))

    def second_derivative(self, r) -> np.ndarray:
        """``eta''(r)``."""
        r = np.asarray(r, dtype=float)
        t_in = (r - self.r_in) / self.ramp
        t_out = (self.r_out - r) / self.ramp
        return (-self.slope / self.ramp) * (
            _step_slope(t_in, self.beta) * _step(t_out, self.beta)
            - _step(t_in, self.beta) * _step_slope(t_out, self.beta)
        )

    def jet(self, z0) -> WirtingerJet:
        """Bivariate Wirtinger jet of ``eta(|z|)`` at the points ``z0``."""
        z0 = np.asarray(z0, dtype=complex)
        r0 = np.abs(z0)
        moving = (r0 > self.r_in) & (r0 < self.r_out)
        const = WirtingerJet.constant(self.value(r0).astype(complex))
        if not np.any(moving):
            return const
        safe = np.where(moving, z0, 0.5 * (self.r_in + self.r_out))
        z, zbar = WirtingerJet.variables(safe)
        radius = (z * zbar).sqrt()
        moved = radius.compose(self.radial_jet(np.abs(safe)).taylor())
        return WirtingerJet.where(moving, moved, const)

    def verify(self, n: int = 4001) -> dict:
        """Check the declared bounds and monotonicity on a fine grid.

        Returns
        -------
        dict
            ``max_gradient``, ``max_hessian``, ``monotone``

        Raises
        ------
        ModelError
            If a bound or an endpoint value is violated
        """
        r = np.linspace(self.r_in, self.r_out, n)
        d1 = self.derivative(r)
        d2 = self.second_derivative(r)
        grad = float(np.max(np.abs(d1)))
        hess = float(np.max(np.maximum(np.abs(d2), np.abs(d1) / r)))
        vals = self.value(r)
        monotone = bool(np.all(np.diff(vals) <= 1e-15))
        if grad > self.max_gradient_bound or hess > self.max_hessian_bound:
            raise ModelError(f"cutoff bounds violated: |grad|={grad:.4g}, |hess|={hess:.4g}")
        if vals[0] != 1.0 or vals[-1] != 0.0 or not monotone:
            raise ModelError("cutoff endpoint values or monotonicity violated")
        return {"max_gradient": grad, "max_hessian": hess, "monotone": monotone}
