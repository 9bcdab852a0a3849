"""Bergman metric and its derivatives from orthonormal jets.

With the basis in triangular gauge at a basepoint, the Bergman kernel
``K = sum_j |f_j|^2`` has a Taylor expansion determined by the first five
basis functions, and

    g_m = (1/2 pi m) d dbar log K.

``metric_at`` and ``gradient_at`` use the closed forms in the jets of
``f_0`` and ``f_1``; ``hessian_at`` and ``bergman_metric_jet`` expand
``log K`` as a Wirtinger series. Radial models also have a direct path:
``K`` is a power series in ``s = |z|^2`` with weights ``1 / G_jj`` and the
derivatives of ``log K`` are cumulants of ``p_j ~ s^j / G_jj``.

Classes
-------
BergmanJet
    ``g_m`` and its derivatives at one point
BergmanField
    The same quantities over a set of points

Functions
---------
kernel_jet
    Wirtinger jet of ``K`` from triangular jets
bergman_metric_jet
    Jet of ``g_m`` to total order 2
metric_at, gradient_at, hessian_at
    ``g_m``, ``d g_m`` and ``(d^2 g_m, d dbar g_m)`` at the basepoints
radial_direct
    Direct path for radial models
metric_field
    ``BergmanField`` on a grid, cross-checked between paths
model_field
    The model metric's values and derivatives in the same layout
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from src.errors import ModelError, PathDisagreement
from src.geometry.conventions import metric_jet_from_log_weight
from src.geometry.metric_models import MetricModel, Symmetry
from src.bergman.section_space import GramMatrix, OrthonormalJets, Orthonormalization, gram, orthonormalize
from src.numerics.jets import ORDER, WirtingerJet
from src.numerics.quadrature import QuadSpec

logger = logging.getLogger(__name__)

CROSS_CHECK_POINTS = 3
CROSS_CHECK_TOL = 1e-8
_DIRECT_MIN_S = 1e-8


@dataclass(frozen=True)
class BergmanJet:
    """Bergman metric data at one point.

    Attributes
    ----------
    m : int
        Tensor power
    point : complex
        Chart point
    value : float
        ``g_m``
    gradient : complex
        ``d g_m / dz``
    d2 : complex
        ``d^2 g_m / dz^2``
    ddbar : float
        ``d^2 g_m / dz dzbar``
    """

    m: int
    point: complex
    value: float
    gradient: complex
    d2: complex
    ddbar: float


@dataclass
class BergmanField:
    """Vectorized ``BergmanJet`` over ``points``."""

    m: int
    points: np.ndarray
    value: np.ndarray
    gradient: np.ndarray
    d2: np.ndarray
    ddbar: np.ndarray

    def __len__(self):
        return len(self.points)

    def __getitem__(self, i) -> BergmanJet:
        return BergmanJet(
            self.m,
            complex(self.points[i]),
            float(self.value[i]),
            complex(self.gradient[i]),
            complex(self.d2[i]),
            float(self.ddbar[i]),
        )

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    @classmethod
    def from_metric_jet(cls, m: int, points, jet: WirtingerJet) -> "BergmanField":
        c = jet.coeffs
        return cls(m, np.asarray(points), c[..., 0, 0].real, c[..., 1, 0], 2.0 * c[..., 2, 0], c[..., 1, 1].real)


def _check_base_point_free(jets: OrthonormalJets):
    if np.any(jets.taylor[:, 0, 0].real <= 0):
        raise ModelError(f"all sections vanish at a basepoint (m = {jets.m})")


def kernel_jet(jets: OrthonormalJets) -> WirtingerJet:
    """Jet of ``sum_j |f_j|^2 / exp(2 log_scale)`` at the basepoints."""
    taylor = jets.taylor
    coeffs = np.einsum("pka,pkc->pac", taylor, np.conj(taylor))
    a = np.arange(ORDER + 1)
    coeffs = np.where((a[:, None] + a[None, :]) <= ORDER, coeffs, 0.0)
    return WirtingerJet(coeffs)


def bergman_metric_jet(jets: OrthonormalJets) -> WirtingerJet:
    """Jet of ``g_m = (1/2 pi m) d dbar log K``, exact to total order 2."""
    _check_base_point_free(jets)
    return metric_jet_from_log_weight(kernel_jet(jets).log()) * (-1.0 / jets.m)


def metric_at(jets: OrthonormalJets) -> np.ndarray:
    """``g_m = |f_1'|^2 / (2 pi m |f_0|^2)``."""
    _check_base_point_free(jets)
    t = jets.taylor
    return (np.abs(t[:, 1, 1]) ** 2 / np.abs(t[:, 0, 0]) ** 2 / (2 * math.pi * jets.m)).real


def gradient_at(jets: OrthonormalJets) -> np.ndarray:
    """``d g_m / dz`` from the jets of ``f_0`` and ``f_1``."""
    _check_base_point_free(jets)
    d = jets.derivatives()
    f0, df0 = d[:, 0, 0], d[:, 0, 1]
    df1, d2f1 = d[:, 1, 1], d[:, 1, 2]
    norm0 = np.abs(f0) ** 2
    value = d2f1 * np.conj(df1) / norm0 - 2.0 * df0 * np.abs(df1) ** 2 / (f0 * norm0)
    return value / (2 * math.pi * jets.m)


def hessian_at(jets: OrthonormalJets) -> tuple[np.ndarray, np.ndarray]:
    """``(d^2 g_m / dz^2, d^2 g_m / dz dzbar)`` at the basepoints."""
    c = bergman_metric_jet(jets).coeffs
    return 2.0 * c[:, 2, 0], c[:, 1, 1].real


def radial_direct(gram_matrix: GramMatrix, points) -> BergmanField:
    """Bergman field of a radial model from the diagonal Gram entries.

    Valid for ``|z|^2 >= 1e-8``; smaller radii must use the jets path.
    """
    points = np.atleast_1d(np.asarray(points, dtype=complex))
    m = gram_matrix.m
    s = np.abs(points) ** 2
    j = np.arange(gram_matrix.size)[None, :]
    log_w = j * np.log(s)[:, None] - gram_matrix.log_diag[None, :]
    p = np.exp(log_w - logsumexp(log_w, axis=1, keepdims=True))
    mean = np.sum(p * j, axis=1, keepdims=True)
    dev = j - mean
    k2 = np.sum(p * dev**2, axis=1)
    k3 = np.sum(p * dev**3, axis=1)
    k4 = np.sum(p * dev**4, axis=1) - 3.0 * k2**2
    scale = 2 * math.pi * m
    value = k2 / (scale * s)
    first = (k3 - k2) / (scale * s**2)
    second = (k4 - 3.0 * k3 + 2.0 * k2) / (scale * s**3)
    zbar = np.conj(points)
    return BergmanField(m, points, value, zbar * first, zbar**2 * second, first + s * second)


def _jets_field(orth: Orthonormalization, points) -> BergmanField:
    jets = orth.jets(points)
    return BergmanField.from_metric_jet(jets.m, points, bergman_metric_jet(jets))


def metric_field(
    model: MetricModel,
    m: int,
    points,
    spec: QuadSpec | None = None,
    seed: int = 0,
    orth: Orthonormalization | None = None,
) -> BergmanField:
    """Bergman metric data of ``model`` at tensor power ``m`` over ``points``.

    Radial models use ``radial_direct`` away from the origin and are
    cross-checked against the recentring path on ``CROSS_CHECK_POINTS``
    seeded random points.

    Raises
    ------
    PathDisagreement
        If the two paths differ by more than ``CROSS_CHECK_TOL`` relative to
        ``g_m``
    """
    points = np.atleast_1d(np.asarray(points, dtype=complex))
    orth = orth or orthonormalize(gram(model, m, spec))
    if model.symmetry is not Symmetry.RADIAL:
        return _jets_field(orth, points)

    direct_ok = np.abs(points) ** 2 >= _DIRECT_MIN_S
    field = _jets_field(orth, points) if not np.all(direct_ok) else None
    if np.any(direct_ok):
        direct = radial_direct(orth.gram, points[direct_ok])
        if field is None:
            field = direct
        else:
            for name in ("value", "gradient", "d2", "ddbar"):
                getattr(field, name)[direct_ok] = getattr(direct, name)

        rng = np.random.default_rng(seed)
        candidates = np.nonzero(direct_ok)[0]
        picks = rng.choice(candidates, size=min(CROSS_CHECK_POINTS, len(candidates)), replace=False)
        check = _jets_field(orth, points[picks])
        scale = np.abs(field.value[picks])
        gap = np.maximum(
            np.abs(check.value - field.value[picks]), np.abs(check.gradient - field.gradient[picks])
        ) / scale
        if np.max(gap) > CROSS_CHECK_TOL:
            raise PathDisagreement(
                f"{model.name} m={m}: direct and recentring paths differ by {np.max(gap):.3e} (relative)"
            )
        logger.debug("%s m=%d: path cross-check gap %.2e", model.name, m, float(np.max(gap)))
    return field


def model_field(model: MetricModel, points) -> BergmanField:
    """The model metric ``g`` in ``BergmanField`` layout (``m = 0``)."""
    points = np.atleast_1d(np.asarray(points, dtype=complex))
    return BergmanField.from_metric_jet(0, points, model.metric_jet(points))
