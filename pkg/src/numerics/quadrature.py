"""Log-domain adaptive quadrature.

Radial integrals of peaked weights such as ``r^{2p+1} a(r)^m`` are evaluated
with an adaptive Gauss-Kronrod (G7/K15) rule whose samples never leave
log-domain until they have been rescaled by the global maximum. Angular
integrals use the equispaced (trapezoid) rule through the FFT, which is
spectrally accurate for smooth periodic integrands.

Classes
-------
QuadSpec : pydantic.BaseModel
    Tolerances and sampling sizes, overridable from the run config
QuadratureResult
    Value, relative error estimate and panel count of one integral

Functions
---------
gk15_rule
    Nodes and Kronrod/Gauss weights on a set of panels
adaptive_log_integral
    Adaptive integration of a log-domain integrand
integrate_radial
    Radial integral on ``[a, b]``, optionally in ``t = log r``
angular_spectrum
    Scaled FFT of equispaced angular samples with an aliasing estimate
angular_modes
    Fourier coefficients ``int f(theta) e^{-ik theta} d theta``
integrate_disc
    Integral over a disc from radial quadrature of the zeroth angular mode
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from pydantic import BaseModel, Field, field_validator
from scipy.optimize import minimize_scalar

from src.errors import AliasingSuspected, NonConvergence
from src.numerics.log_scalar import LogScalar

logger = logging.getLogger(__name__)

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[-2::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[-2::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], [_WG[-1]], _WG[-2::-1]])

# samples this far below the maximum are below double-precision resolution
_LOG_FLOOR = 50.0
# modes with |k| >= TOP_BAND * N count as near-Nyquist in angular_spectrum
TOP_BAND = 0.4


class QuadSpec(BaseModel):
    """Quadrature settings.

    Attributes
    ----------
    rel_tol : float
        Target relative error of every integral
    abs_tol_log : float
        Log of the absolute error that is always accepted
    max_subdivisions : int
        Maximum number of bisection rounds
    angular_nodes : int | None
        Equispaced angular samples (a power of two); ``None`` resolves to
        ``max(256, 8 * bandwidth)``
    """

    rel_tol: float = Field(default=1e-10, gt=0)
    abs_tol_log: float = -1e6
    max_subdivisions: int = Field(default=60, ge=1)
    angular_nodes: int | None = None

    @field_validator("angular_nodes")
    @classmethod
    def _power_of_two(cls, value):
        if value is not None and (value < 4 or value & (value - 1)):
            raise ValueError("angular_nodes must be a power of 2 (>= 4)")
        return value

    def nodes_for(self, bandwidth: int = 0) -> int:
        """Resolve the angular sample count for a given bandwidth."""
        if self.angular_nodes is not None:
            return self.angular_nodes
        target = max(256, 8 * bandwidth)
        return 1 << (target - 1).bit_length()


@dataclass(frozen=True)
class QuadratureResult:
    """Outcome of an adaptive integral.

    Attributes
    ----------
    value : LogScalar
        The integral
    rel_error : float
        Estimated relative error
    n_panels : int
        Panels in the final partition
    """

    value: LogScalar
    rel_error: float
    n_panels: int


def gk15_rule(edges: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gauss-Kronrod nodes and weights on consecutive panels.

    Parameters
    ----------
    edges : np.ndarray
        Increasing panel edges, length ``P + 1``

    Returns
    -------
    nodes, kronrod, gauss : np.ndarray
        Arrays of shape ``(P, 15)``
    """
    edges = np.asarray(edges, dtype=float)
    centre = 0.5 * (edges[1:] + edges[:-1])[:, None]
    half = 0.5 * (edges[1:] - edges[:-1])[:, None]
    return centre + half * NODES, half * KRONROD_WEIGHTS, half * GAUSS_WEIGHTS


def _split_log(result) -> tuple[np.ndarray, np.ndarray | None]:
    if isinstance(result, tuple):
        log_mag, phase = result
        return np.asarray(log_mag, dtype=float), (None if phase is None else np.asarray(phase))
    return np.asarray(result, dtype=float), None


def _scan(log_f, lo: float, hi: float, n: int = 400) -> tuple[np.ndarray, np.ndarray]:
    grid = np.linspace(lo, hi, n + 1)
    mids = 0.5 * (grid[1:] + grid[:-1])
    vals, _ = _split_log(log_f(mids))
    return mids, np.where(np.isnan(vals), -np.inf, vals)


def _initial_edges(log_f, lo: float, hi: float, breakpoints=()) -> np.ndarray | None:
    """Peak-aware initial partition, or ``None`` when the integrand is zero."""
    w_lo, w_hi = lo, hi
    for _ in range(2):
        mids, vals = _scan(log_f, w_lo, w_hi)
        top = np.max(vals)
        if not np.isfinite(top):
            return None
        alive = np.nonzero(vals >= top - _LOG_FLOOR)[0]
        step = mids[1] - mids[0]
        peak = mids[int(np.argmax(vals))]
        w_lo, w_hi = max(w_lo, mids[alive[0]] - step), min(w_hi, mids[alive[-1]] + step)

    def neg(x):
        v, _ = _split_log(log_f(np.array([x])))
        return -v[0] if np.isfinite(v[0]) else np.inf

    res = minimize_scalar(neg, bounds=(max(w_lo, peak - step), min(w_hi, peak + step)), method="bounded")
    if res.success and np.isfinite(res.fun):
        peak = float(res.x)
    h = 1e-4 * max(1.0, step)
    samples, _ = _split_log(log_f(np.array([peak - h, peak, peak + h])))
    curv = (samples[0] - 2 * samples[1] + samples[2]) / h**2
    sigma = 1.0 / math.sqrt(-curv) if np.isfinite(curv) and curv < 0 else step
    sigma = min(sigma, w_hi - w_lo)
    scales = sigma * np.array([0.5, 1, 2, 4, 8, 16, 32, 64, 128])
    marks = [w_lo, w_hi, peak, *(peak + scales), *(peak - scales), *breakpoints]
    marks.extend(np.linspace(w_lo, w_hi, 33))
    edges = np.unique(np.clip(np.asarray(marks, dtype=float), w_lo, w_hi))
    return edges[np.concatenate([[True], np.diff(edges) > 1e-14 * max(1.0, abs(w_hi))])]


def adaptive_log_integral(
    log_f: Callable,
    lo: float,
    hi: float,
    spec: QuadSpec | None = None,
    breakpoints=(),
    raise_on_failure: bool = True,
) -> QuadratureResult:
    """Integrate ``exp(log_f(x)) * phase(x)`` over ``[lo, hi]``.

    Parameters
    ----------
    log_f : Callable
        Maps an array of abscissae to log-magnitudes, or to a
        ``(log_mag, phase)`` tuple for signed/complex integrands
    lo, hi : float
        Finite integration limits
    spec : QuadSpec, optional
        Tolerances
    breakpoints : Iterable[float]
        Extra initial panel edges (kinks, cutoff radii)
    raise_on_failure : bool
        Raise ``NonConvergence`` when the budget is exhausted

    Returns
    -------
    QuadratureResult
        Integral with error estimate

    Raises
    ------
    NonConvergence
        If the error estimate stays above tolerance after
        ``spec.max_subdivisions`` rounds
    """
    spec = spec or QuadSpec()
    edges = _initial_edges(log_f, lo, hi, [b for b in breakpoints if lo < b < hi])
    if edges is None:
        return QuadratureResult(LogScalar.zero(), 0.0, 0)

    for round_no in range(spec.max_subdivisions + 1):
        nodes, wk, wg = gk15_rule(edges)
        log_mag, phase = _split_log(log_f(nodes.ravel()))
        log_mag = np.where(np.isnan(log_mag), -np.inf, log_mag).reshape(nodes.shape)
        shift = np.max(log_mag)
        if not np.isfinite(shift):
            return QuadratureResult(LogScalar.zero(), 0.0, len(edges) - 1)
        vals = np.exp(log_mag - shift)
        if phase is not None:
            vals = vals * phase.reshape(nodes.shape)
        kron = np.sum(wk * vals, axis=1)
        gauss = np.sum(wg * vals, axis=1)
        err = np.abs(kron - gauss)
        ordered = sorted(kron.astype(complex), key=abs)
        total = complex(math.fsum(c.real for c in ordered), math.fsum(c.imag for c in ordered))
        target = max(spec.rel_tol * abs(total), math.exp(min(0.0, spec.abs_tol_log - shift)))
        err_total = float(np.sum(err))
        if err_total <= target:
            break
        if round_no == spec.max_subdivisions:
            value = LogScalar.from_value(total).scale(shift)
            rel = err_total / abs(total) if total != 0 else math.inf
            if raise_on_failure:
                raise NonConvergence(
                    f"quadrature on [{lo:.6g}, {hi:.6g}] stopped at relative error {rel:.3e}",
                    partial=value,
                    error_estimate=rel,
                )
            logger.warning("accepting unconverged integral (rel. error %.3e)", rel)
            return QuadratureResult(value, rel, len(edges) - 1)
        bad = err > target / len(err)
        mids = 0.5 * (edges[:-1][bad] + edges[1:][bad])
        edges = np.sort(np.concatenate([edges, mids]))
        logger.debug("quadrature round %d: %d panels, error %.3e", round_no, len(edges) - 1, err_total)

    value = LogScalar.from_value(total).scale(shift)
    rel = err_total / abs(total) if total != 0 else 0.0
    return QuadratureResult(value, rel, len(edges) - 1)


def integrate_radial(
    log_f: Callable,
    a: float = 0.0,
    b: float = math.inf,
    spec: QuadSpec | None = None,
    log_scale: bool | None = None,
    breakpoints=(),
) -> LogScalar:
    """Integrate a log-domain radial integrand over ``[a, b]``.

    Parameters
    ----------
    log_f : Callable
        ``r -> log f(r)`` or ``r -> (log|f(r)|, phase)``
    a, b : float
        Limits, ``b`` may be ``inf``
    spec : QuadSpec, optional
        Tolerances
    log_scale : bool, optional
        Integrate in ``t = log r``; forced for infinite ``b``, default for
        ``a = 0``
    breakpoints : Iterable[float]
        Radii where the integrand has reduced smoothness

    Returns
    -------
    LogScalar
        The integral

    Raises
    ------
    NonConvergence
        See ``adaptive_log_integral``
    """
    return radial_integral(log_f, a, b, spec, log_scale, breakpoints).value


def radial_integral(log_f, a=0.0, b=math.inf, spec=None, log_scale=None, breakpoints=()) -> QuadratureResult:
    """``integrate_radial`` returning the full ``QuadratureResult``."""
    if a >= b:
        return QuadratureResult(LogScalar.zero(), 0.0, 0)
    if log_scale is None:
        log_scale = math.isinf(b) or a == 0.0
    if math.isinf(b) and not log_scale:
        raise ValueError("infinite radial intervals require log_scale")
    if not log_scale:
        return adaptive_log_integral(log_f, a, b, spec, breakpoints)

    def in_t(t):
        r = np.exp(t)
        log_mag, phase = _split_log(log_f(r))
        return (log_mag + t, phase) if phase is not None else log_mag + t

    t_lo = math.log(a) if a > 0 else -300.0
    t_hi = math.log(b) if math.isfinite(b) else 300.0
    bps = [math.log(x) for x in breakpoints if x > 0]
    return adaptive_log_integral(in_t, t_lo, t_hi, spec, bps)


def angular_spectrum(samples: np.ndarray, axis: int = -1) -> tuple[np.ndarray, np.ndarray]:
    """Scaled FFT of equispaced angular samples.

    Parameters
    ----------
    samples : np.ndarray
        ``f(2 pi j / N)`` along ``axis``
    axis : int
        Sample axis

    Returns
    -------
    modes : np.ndarray
        ``A_k = int f e^{-ik theta} d theta`` at FFT index ``k mod N``
    top_fraction : np.ndarray
        Share of the total amplitude carried by the modes with
        ``|k| >= 0.4 N``, the top fifth of the band below Nyquist
    """
    n = samples.shape[axis]
    modes = (2 * np.pi / n) * np.fft.fft(samples, axis=axis)
    index = np.abs(np.fft.fftfreq(n, d=1.0 / n))
    top = index >= TOP_BAND * n
    amp = np.abs(modes)
    shape = [1] * amp.ndim
    shape[axis] = n
    top = top.reshape(shape)
    total = np.sum(amp, axis=axis)
    top_sum = np.sum(np.where(top, amp, 0.0), axis=axis)
    fraction = np.where(total > 0, top_sum / np.where(total > 0, total, 1.0), 0.0)
    return modes, fraction


def angular_modes(f: Callable, n_modes: int, spec: QuadSpec | None = None) -> list[LogScalar]:
    """Fourier coefficients of a periodic function.

    Parameters
    ----------
    f : Callable
        ``theta -> f(theta)`` (vectorized, real or complex)
    n_modes : int
        Highest mode returned
    spec : QuadSpec, optional
        Supplies the sample count and the aliasing threshold

    Returns
    -------
    list[LogScalar]
        ``int_0^{2 pi} f(theta) e^{-ik theta} d theta`` for ``k = 0..n_modes``

    Raises
    ------
    AliasingSuspected
        If the near-Nyquist band carries more than ``rel_tol`` of the
        amplitude
    """
    spec = spec or QuadSpec()
    n = spec.nodes_for(n_modes)
    while n < 4 * (n_modes + 1):
        n *= 2
    theta = 2 * np.pi * np.arange(n) / n
    modes, fraction = angular_spectrum(np.asarray(f(theta), dtype=complex))
    if fraction > spec.rel_tol:
        raise AliasingSuspected(f"top-band amplitude fraction {float(fraction):.3e} with {n} nodes")
    return [LogScalar.from_value(modes[k]) for k in range(n_modes + 1)]


def integrate_disc(
    log_f: Callable, radius: float, spec: QuadSpec | None = None, breakpoints=()
) -> LogScalar:
    """Integrate over the disc ``|z| < radius`` with respect to area.

    Parameters
    ----------
    log_f : Callable
        ``(r, theta) -> log f`` or ``(log|f|, phase)``, vectorized over
        arrays of shape ``(R, N)``
    radius : float
        Disc radius
    spec : QuadSpec, optional
        Tolerances and angular sample count
    breakpoints : Iterable[float]
        Radii where the integrand has reduced smoothness

    Returns
    -------
    LogScalar
        The integral

    Raises
    ------
    NonConvergence, AliasingSuspected
        Propagated from the radial and angular rules
    """
    spec = spec or QuadSpec()
    n = spec.nodes_for(0)
    theta = 2 * np.pi * np.arange(n) / n

    def radial(r):
        log_mag, phase = _split_log(log_f(r[:, None], theta[None, :]))
        log_mag = np.broadcast_to(log_mag, (len(r), n))
        shift = np.max(log_mag, axis=1, keepdims=True)
        shift = np.where(np.isfinite(shift), shift, 0.0)
        vals = np.exp(log_mag - shift)
        if phase is not None:
            vals = vals * phase
        modes, fraction = angular_spectrum(vals, axis=1)
        if np.any(fraction > spec.rel_tol):
            raise AliasingSuspected(f"angular integrand not resolved by {n} nodes")
        a0 = modes[:, 0]
        # mode 0 below rounding of the samples is an exact cancellation
        noise = 64 * np.finfo(float).eps * np.sum(np.abs(vals), axis=1) * (2 * np.pi / n)
        a0 = np.where(np.abs(a0) > noise, a0, 0.0)
        mag = np.abs(a0)
        with np.errstate(divide="ignore"):
            out = np.where(mag > 0, np.log(np.where(mag > 0, mag, 1.0)) + shift[:, 0] + np.log(r), -np.inf)
        return out, np.where(mag > 0, a0 / np.where(mag > 0, mag, 1.0), 1.0)

    return radial_integral(radial, 0.0, radius, spec, log_scale=False, breakpoints=breakpoints).value
