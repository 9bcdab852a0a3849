"""Gram matrices of monomial sections and their triangular orthonormalization.

The Gram matrix of ``z^0, ..., z^m`` in ``L^2(a^m rho dA)`` is

    G[j, k] = int z^j conj(z)^k a^m rho dA = int r^{j+k+1} A_{k-j}(r) dr

with ``A_d(r) = int a^m rho e^{-i d theta} d theta``. All entries are computed
on one composite Gauss-Kronrod grid in ``t = log r``: the angular spectrum
of ``a^m rho`` is taken once per node by FFT and serves every diagonal of
``G``. Entries are stored rescaled, ``Ghat = D G D`` with
``D = diag(G_jj^{-1/2})``, in banded form.

The orthonormal basis ``f_i = sum_j C[i, j] z^j`` with ``C`` upper
triangular (so ``f_i`` vanishes to order ``i`` at 0) comes from the
Cholesky factor of the index-reversed matrix. Off the origin the basis is
re-gauged by a QR factorization of its jets, which makes it triangular at
the new basepoint.

Classes
-------
GramMatrix
    Scaled banded Gram matrix with diagnostics
Orthonormalization
    Factorized Gram matrix; produces jets at arbitrary basepoints
OrthonormalJets
    Taylor coefficients of the re-gauged basis at a set of basepoints

Functions
---------
gram
    Assemble the Gram matrix of a model at tensor power m
orthonormalize
    Factorize a Gram matrix
jets_at
    Jets of the orthonormal basis at basepoints
export_gram_csv
    Write ``(j, k, log_mag, phase)`` rows
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy.linalg import LinAlgError, cholesky_banded, solve_banded
from scipy.optimize import minimize_scalar
from scipy.special import gammaln

from src.errors import AliasingSuspected, BandwidthExceeded, NonConvergence, NotPositiveDefinite
from src.geometry.metric_models import MetricModel, Symmetry
from src.numerics.jets import ORDER
from src.numerics.log_scalar import LogScalar, logsumexp_weighted
from src.numerics.quadrature import QuadSpec, angular_spectrum, gk15_rule
from src.reports.schema import columns

logger = logging.getLogger(__name__)

BAND_TOL = 1e-14
MAX_ANGULAR_NODES = 4096
_LOG_WINDOW = 40.0
_ROW_CHUNK = 64
_NODE_CHUNK = 1024
_TAIL = 25.0
_REFINEMENTS = 3


@dataclass
class GramMatrix:
    """Scaled banded Gram matrix.

    Attributes
    ----------
    model_name : str
        Model the matrix belongs to
    m : int
        Tensor power
    log_diag : np.ndarray
        ``log G_jj``, shape ``(m + 1,)``
    bands : np.ndarray
        ``bands[d, j] = Ghat[j + d, j]``, shape ``(B + 1, m + 1)``; entries
        past the end of a band are 0
    truncation : float
        Bound on the magnitude of every discarded ``Ghat`` entry
    rel_error : float
        Quadrature error estimate of the diagonal
    angular_nodes : int
        Angular samples used per radial node (0 for radial models)
    """

    model_name: str
    m: int
    log_diag: np.ndarray
    bands: np.ndarray
    truncation: float = 0.0
    rel_error: float = 0.0
    angular_nodes: int = 0

    @property
    def size(self) -> int:
        return self.m + 1

    @property
    def bandwidth(self) -> int:
        return self.bands.shape[0] - 1

    def scaled_dense(self) -> np.ndarray:
        """``Ghat`` as a dense Hermitian matrix."""
        n = self.size
        out = np.zeros((n, n), dtype=complex)
        for d in range(self.bandwidth + 1):
            idx = np.arange(n - d)
            out[idx + d, idx] = self.bands[d, : n - d]
            out[idx, idx + d] = np.conj(self.bands[d, : n - d])
        return out

    def log_entry(self, j: int, k: int) -> LogScalar:
        """``G[j, k]`` in log form (zero outside the band)."""
        d = abs(j - k)
        if d > self.bandwidth:
            return LogScalar.zero()
        lower = self.bands[d, min(j, k)]
        value = lower if j >= k else np.conj(lower)
        return LogScalar.from_value(complex(value)).scale(0.5 * (self.log_diag[j] + self.log_diag[k]))


@dataclass
class _NodeData:
    t: np.ndarray
    kronrod: np.ndarray
    gauss: np.ndarray
    base: np.ndarray
    amps: np.ndarray
    truncation: float
    angular_nodes: int


def _row_log_integrand(model: MetricModel, m: int, j: int, t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    r = np.exp(t)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        vals = (2 * j + 2) * t + m * model.radial_log_weight(r) + model.radial_log_density(r)
    return np.where(np.isnan(vals), -np.inf, vals)


def _row_peak(model: MetricModel, m: int, j: int, t_cap: float) -> float:
    hi = min(300.0, t_cap)
    grid = np.linspace(-350.0, hi, 7001)
    vals = _row_log_integrand(model, m, j, grid)
    i = int(np.argmax(vals))
    res = minimize_scalar(
        lambda x: -float(_row_log_integrand(model, m, j, np.array([x]))[0]),
        bounds=(grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]),
        method="bounded",
    )
    return float(res.x) if res.success else float(grid[i])


def _t_range(model: MetricModel, m: int) -> tuple[float, float]:
    t_cap = math.log(model.chart_radius) if math.isfinite(model.chart_radius) else math.inf
    half = 0.5 * math.log(m + 1)
    lo = _row_peak(model, m, 0, t_cap) - half - _TAIL
    hi = min(_row_peak(model, m, m, t_cap) + half + _TAIL, t_cap)
    return lo, hi


def _grid(model: MetricModel, lo: float, hi: float, h: float):
    edges = np.arange(lo, hi, h)
    marks = [math.log(b) for b in model.breakpoints if b > 0 and lo < math.log(b) < hi]
    edges = np.unique(np.concatenate([edges, [hi], marks]))
    edges = edges[np.concatenate([[True], np.diff(edges) > 1e-12])]
    nodes, wk, wg = gk15_rule(edges)
    return nodes.ravel(), wk.ravel(), wg.ravel()


def _angular_block(model: MetricModel, m: int, r: np.ndarray, n_theta: int, spec: QuadSpec):
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    keep = n_theta // 2 + 1
    base = np.empty(len(r))
    modes = np.empty((len(r), keep), dtype=complex)
    for start in range(0, len(r), _NODE_CHUNK):
        rr = r[start : start + _NODE_CHUNK, None]
        samples = m * model.polar_log_weight(rr, theta[None, :]) + model.polar_log_density(rr, theta[None, :])
        samples = np.broadcast_to(samples, (len(rr), n_theta))
        shift = np.max(samples, axis=1)
        spectrum, fraction = angular_spectrum(np.exp(samples - shift[:, None]), axis=1)
        if np.any(fraction > spec.rel_tol):
            raise AliasingSuspected(f"angular spectrum of a^m rho not resolved by {n_theta} nodes")
        base[start : start + len(rr)] = shift
        modes[start : start + len(rr)] = spectrum[:, :keep]
    return base, modes


def _node_data(model: MetricModel, m: int, grid, n_theta: int, spec: QuadSpec) -> _NodeData:
    t, wk, wg = grid
    r = np.exp(t)
    with np.errstate(over="ignore", divide="ignore"):
        base = m * model.radial_log_weight(r) + model.radial_log_density(r)
    if model.symmetry is Symmetry.RADIAL:
        return _NodeData(t, wk, wg, base, np.full((len(t), 1), 2 * np.pi, dtype=complex), 0.0, 0)

    inside = r < model.angular_support
    ang_base, modes = _angular_block(model, m, r[inside], n_theta, spec)
    ratio = np.max(np.abs(modes) / np.abs(modes[:, :1]), axis=0) if len(modes) else np.zeros(1)
    live = np.nonzero(ratio > BAND_TOL)[0]
    needed = int(live[-1]) if len(live) else 0
    if needed > n_theta // 4:
        raise BandwidthExceeded(f"angular modes up to {needed} exceed {BAND_TOL:g} with {n_theta} nodes")
    band = min(needed, m)
    truncation = float(np.max(ratio[band + 1 :])) if band + 1 < len(ratio) else 0.0
    logger.debug("%s m=%d: measured bandwidth %d (truncation %.2e)", model.name, m, band, truncation)

    amps = np.zeros((len(t), band + 1), dtype=complex)
    amps[~inside, 0] = 2 * np.pi
    amps[inside] = modes[:, : band + 1]
    base = base.copy()
    base[inside] = ang_base
    return _NodeData(t, wk, wg, base, amps, truncation, n_theta)


def _band_entries(data: _NodeData, rows: np.ndarray, d: int, weights: np.ndarray, window: slice):
    t = data.t[window]
    amp = data.amps[window, d]
    mag = np.abs(amp)
    with np.errstate(divide="ignore"):
        log_amp = np.where(mag > 0, np.log(np.where(mag > 0, mag, 1.0)), -np.inf)
    phase = np.where(mag > 0, amp / np.where(mag > 0, mag, 1.0), 1.0)
    exponent = (2 * rows[:, None] + d + 2) * t[None, :] + (data.base[window] + log_amp)[None, :]
    return logsumexp_weighted(exponent, weights[window][None, :], phase[None, :], axis=1)


def _window(data: _NodeData, first_row: int, last_row: int) -> slice:
    with np.errstate(divide="ignore"):
        envelope = data.base + np.log(np.abs(data.amps[:, 0]))
    keep = np.zeros(len(data.t), dtype=bool)
    for j in (first_row, last_row):
        vals = (2 * j + 2) * data.t + envelope
        keep |= vals >= np.max(vals) - _LOG_WINDOW
    idx = np.nonzero(keep)[0]
    return slice(int(idx[0]), int(idx[-1]) + 1)


def _diagonal(data: _NodeData, m: int) -> tuple[np.ndarray, float]:
    log_diag = np.empty(m + 1)
    worst = 0.0
    for j0 in range(0, m + 1, _ROW_CHUNK):
        rows = np.arange(j0, min(j0 + _ROW_CHUNK, m + 1))
        window = _window(data, rows[0], rows[-1])
        log_k, _ = _band_entries(data, rows, 0, data.kronrod, window)
        log_g, _ = _band_entries(data, rows, 0, data.gauss, window)
        log_diag[rows] = log_k
        worst = max(worst, float(np.max(np.abs(np.expm1(log_g - log_k)))))
    return log_diag, worst


def gram(model: MetricModel, m: int, spec: QuadSpec | None = None) -> GramMatrix:
    """Assemble the scaled Gram matrix of ``z^0, ..., z^m``.

    Parameters
    ----------
    model : MetricModel
        Model supplying ``a`` and ``rho``
    m : int
        Tensor power
    spec : QuadSpec, optional
        Tolerances and initial angular sample count

    Returns
    -------
    GramMatrix

    Raises
    ------
    ConfigError
        If ``m`` exceeds the model's degree cap
    BandwidthExceeded, AliasingSuspected
        If the angular spectrum stays unresolved at ``MAX_ANGULAR_NODES``
    NonConvergence
        If the diagonal misses ``spec.rel_tol`` after the grid refinements
    """
    model.check_degree(m)
    spec = spec or QuadSpec()
    n_theta = spec.nodes_for(model.bandwidth or 0)
    lo, hi = _t_range(model, m)
    h = 0.5 / math.sqrt(m + 1)
    for level in range(_REFINEMENTS + 1):
        grid = _grid(model, lo, hi, h)
        while True:
            try:
                data = _node_data(model, m, grid, n_theta, spec)
                break
            except (AliasingSuspected, BandwidthExceeded) as e:
                if n_theta >= MAX_ANGULAR_NODES:
                    raise
                n_theta *= 2
                logger.warning("%s m=%d: %s; retrying with %d angular nodes", model.name, m, e.detail, n_theta)
        log_diag, rel = _diagonal(data, m)
        logger.debug("%s m=%d: %d nodes, diagonal error %.2e", model.name, m, len(data.t), rel)
        if rel <= spec.rel_tol:
            break
        if level == _REFINEMENTS:
            raise NonConvergence(f"Gram diagonal for {model.name} m={m} at relative error {rel:.3e}", error_estimate=rel)
        h *= 0.5

    band = data.amps.shape[1] - 1
    bands = np.zeros((band + 1, m + 1), dtype=complex)
    bands[0] = 1.0
    for d in range(1, band + 1):
        for j0 in range(0, m + 1 - d, _ROW_CHUNK):
            rows = np.arange(j0, min(j0 + _ROW_CHUNK, m + 1 - d))
            window = _window(data, rows[0], rows[-1] + d)
            log_mag, phase = _band_entries(data, rows, d, data.kronrod, window)
            scale = log_mag - 0.5 * (log_diag[rows] + log_diag[rows + d])
            # stored below the diagonal: Ghat[j + d, j] = conj(Ghat[j, j + d])
            bands[d, rows] = np.conj(np.exp(scale) * phase)
    logger.info("Gram %s m=%d: bandwidth %d, diagonal error %.2e", model.name, m, band, rel)
    return GramMatrix(model.name, m, log_diag, bands, data.truncation, rel, data.angular_nodes)


@dataclass
class OrthonormalJets:
    """Jets of the orthonormal basis, triangular at each basepoint.

    ``f_k(b + e) = exp(log_scale) * sum_a taylor[k, a] e^a``; only
    ``k <= 4`` are stored since higher ``f_k`` vanish to order 5.

    Attributes
    ----------
    m : int
        Tensor power
    points : np.ndarray
        Basepoints, shape ``(P,)``
    taylor : np.ndarray
        Upper-triangular Taylor coefficients, shape ``(P, 5, 5)``, with real
        positive diagonal
    log_scale : np.ndarray
        Common log factor per basepoint, shape ``(P,)``
    """

    m: int
    points: np.ndarray
    taylor: np.ndarray
    log_scale: np.ndarray

    def derivatives(self) -> np.ndarray:
        """``f_k^{(a)}(b) / exp(log_scale)``, shape ``(P, 5, 5)``."""
        fact = np.array([math.factorial(a) for a in range(ORDER + 1)], dtype=float)
        return self.taylor * fact[None, None, :]

    def log_kernel(self) -> np.ndarray:
        """``log sum_j |f_j(b)|^2`` at the basepoints."""
        return 2.0 * (np.log(self.taylor[:, 0, 0].real) + self.log_scale)


class Orthonormalization:
    """Cholesky factorization of the index-reversed scaled Gram matrix.

    Attributes
    ----------
    gram : GramMatrix
        The factorized matrix
    upper : np.ndarray
        Upper factor ``U`` of ``J Ghat J = U^H U`` in LAPACK upper band form
    """

    def __init__(self, gram_matrix: GramMatrix, upper: np.ndarray):
        self.gram = gram_matrix
        self.upper = upper
        band = upper.shape[0] - 1
        n = upper.shape[1]
        lower = np.zeros_like(upper)
        for d in range(band + 1):
            lower[d, : n - d] = np.conj(upper[band - d, d:])
        self._lower = lower

    def coefficients(self) -> np.ndarray:
        """Dense upper-triangular ``Chat`` with ``f_i = sum_j Chat[i, j] d_j z^j``.

        ``Chat Ghat Chat^H = I``; intended for small ``m``.
        """
        n = self.gram.size
        band = self.upper.shape[0] - 1
        eye = np.eye(n, dtype=complex)
        # Chat^H = J U^{-1} J, so Chat = J U^{-H} J
        inv_uh = solve_banded((band, 0), self._lower, eye)
        return inv_uh[::-1, ::-1]

    def jets(self, points) -> OrthonormalJets:
        """Triangular jets of the orthonormal basis at ``points``.

        Parameters
        ----------
        points : array_like
            Basepoints in the chart

        Returns
        -------
        OrthonormalJets
        """
        points = np.atleast_1d(np.asarray(points, dtype=complex))
        n = self.gram.size
        band = self.upper.shape[0] - 1
        cols = ORDER + 1
        j = np.arange(n)[:, None]
        a = np.arange(cols)[None, :]
        valid = j >= a
        log_binom = np.where(
            valid, gammaln(j + 1.0) - gammaln(a + 1.0) - gammaln(np.maximum(j - a, 0) + 1.0), -np.inf
        )
        log_d = -0.5 * self.gram.log_diag[:, None]
        power = np.where(valid, j - a, 0)

        mod = np.abs(points)[:, None, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            log_mod = np.where(power[None] > 0, power[None] * np.log(mod), 0.0)
        log_mod = np.where((power[None] > 0) & (mod == 0), -np.inf, log_mod)
        log_rhs = log_d[None] + log_binom[None] + log_mod
        phase = np.exp(1j * power[None] * np.angle(points)[:, None, None])
        shift = np.max(log_rhs, axis=1)
        shift = np.where(np.isfinite(shift), shift, 0.0)
        rhs = np.exp(log_rhs - shift[:, None, :]) * phase

        stacked = np.transpose(rhs[:, ::-1, :], (1, 0, 2)).reshape(n, -1)
        solved = solve_banded((band, 0), self._lower, stacked)
        values = np.transpose(solved[::-1].reshape(n, len(points), cols), (1, 0, 2))

        r_fac = np.linalg.qr(values, mode="r")
        taylor = np.zeros((len(points), cols, cols), dtype=complex)
        rows = min(n, cols)
        taylor[:, :rows, :] = r_fac[:, :rows, :]
        diag = np.diagonal(taylor, axis1=1, axis2=2)
        unit = np.where(np.abs(diag) > 0, np.conj(diag) / np.where(np.abs(diag) > 0, np.abs(diag), 1.0), 1.0)
        taylor = taylor * unit[:, :, None]
        taylor = taylor * np.exp(shift - shift[:, :1])[:, None, :]
        return OrthonormalJets(self.gram.m, points, taylor, shift[:, 0])


def orthonormalize(gram_matrix: GramMatrix) -> Orthonormalization:
    """Factorize ``J Ghat J = U^H U``.

    Raises
    ------
    NotPositiveDefinite
        If the factorization fails; the smallest eigenvalue of ``Ghat`` is
        reported when the matrix is small enough to form densely
    """
    n = gram_matrix.size
    band = gram_matrix.bandwidth
    upper_form = np.zeros((band + 1, n), dtype=complex)
    for d in range(band + 1):
        upper_form[band - d, d:] = gram_matrix.bands[d, : n - d][::-1]
    try:
        upper = cholesky_banded(upper_form, lower=False)
    except LinAlgError as e:
        pivot = float(np.min(np.linalg.eigvalsh(gram_matrix.scaled_dense()))) if n <= 1024 else math.nan
        raise NotPositiveDefinite(
            f"Gram matrix of {gram_matrix.model_name} m={gram_matrix.m} is not positive definite", pivot
        ) from e
    return Orthonormalization(gram_matrix, upper)


def jets_at(model: MetricModel, m: int, points, spec: QuadSpec | None = None) -> OrthonormalJets:
    """Triangular jets of the L2-orthonormal basis of ``H^0(L^m)`` at ``points``."""
    return orthonormalize(gram(model, m, spec)).jets(points)


def export_gram_csv(gram_matrix: GramMatrix, path) -> None:
    """Write the stored entries ``k >= j`` as ``(j, k, log_mag, phase)`` rows."""
    rows = []
    n = gram_matrix.size
    for d in range(gram_matrix.bandwidth + 1):
        for j in range(n - d):
            entry = gram_matrix.log_entry(j, j + d)
            rows.append((j, j + d, entry.log_mag, float(np.angle(entry.phase))))
    frame = pd.DataFrame(rows, columns=list(columns("gram")))
    frame.to_csv(path, index=False, float_format="%.17g")
