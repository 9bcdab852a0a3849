"""Normalization and sign conventions shared by every model.

* The metric coefficient is ``g = -(1/2 pi) d dbar log a`` where ``a`` is the
  value of the Hermitian metric on the canonical frame.
* The Kahler form is ``omega = sqrt(-1) g dz ^ dzbar``; the area density with
  respect to Lebesgue measure ``dA`` is ``rho = 2 g``. Every L2 product uses
  ``rho dA``; total volume is 1 for a polarization of degree 1.
* The Bergman metric is ``g_m = (1/2 pi m) d dbar log sum |f_j|^2``.
* Curvature is ``R = -d dbar g + |d g|^2 / g``; Fubini-Study has
  ``R = 1/(pi (1 + |z|^2)^4)`` and Gaussian curvature ``R / g^2 = 4 pi``.
* Real norms of Wirtinger derivatives of a real function ``u`` are
  ``|grad u| = 2 |d u|`` and ``|Hess u| = sqrt(8) (|u_zz|^2 + u_zzbar^2)^(1/2)``.

Functions
---------
metric_jet_from_log_weight
    Jet of ``g`` (order 2) from a jet of ``log a`` (order 4)
curvature_from_metric_jet
    ``R`` from a jet of ``g``
gradient_norm
    ``|grad u|`` from ``d u``
hessian_norm
    ``|Hess u|`` from ``(u_zz, u_zzbar)``
kahler_scale
    Coordinate scale ``kappa`` making the density 1 at a point

Attributes
----------
METRIC_ORDER : int
    Total order to which metric jets are exact
"""

import math

import numpy as np

from src.numerics.jets import ORDER, WirtingerJet

METRIC_ORDER = 2


def metric_jet_from_log_weight(log_weight: WirtingerJet) -> WirtingerJet:
    """Jet of ``g = -(1/2 pi) d dbar F`` valid to total order 2."""
    c = log_weight.coeffs
    out = np.zeros_like(c)
    for a in range(METRIC_ORDER + 1):
        for b in range(METRIC_ORDER + 1 - a):
            if a + b + 2 <= ORDER:
                out[..., a, b] = -(a + 1) * (b + 1) * c[..., a + 1, b + 1] / (2 * math.pi)
    return WirtingerJet(out)


def curvature_from_metric_jet(metric: WirtingerJet) -> np.ndarray:
    """``R = -d dbar g + |d g|^2 / g`` at the jet's expansion point."""
    c = metric.coeffs
    g = c[..., 0, 0].real
    return (-c[..., 1, 1].real + np.abs(c[..., 1, 0]) ** 2 / g).astype(float)


def gradient_norm(d_u) -> np.ndarray:
    """Euclidean gradient norm of a real function from its ``d`` derivative."""
    return 2.0 * np.abs(d_u)


def hessian_norm(d2_u, ddbar_u) -> np.ndarray:
    """Frobenius norm of the real Hessian from ``u_zz`` and ``u_zzbar``."""
    return math.sqrt(8.0) * np.sqrt(np.abs(d2_u) ** 2 + np.real(ddbar_u) ** 2)


def kahler_scale(density_at_point: float) -> float:
    """``kappa`` such that ``zeta = z / kappa`` has unit area density."""
    return 1.0 / math.sqrt(density_at_point)
