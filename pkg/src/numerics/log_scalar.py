"""Log-domain scalars.

Integrands such as ``e^{-pi m |z|^2} |z|^{2p}`` underflow double precision
long before ``m`` reaches the degrees this lab works at. A ``LogScalar``
stores ``log|x|`` and ``x/|x|`` separately so that products, quotients and
sums stay representable for log-magnitudes anywhere in ``[-1e6, 1e6]``.

Classes
-------
LogScalar
    Real or complex number held as (log-magnitude, unit phase)

Functions
---------
log_sum
    Permutation-independent sum of many LogScalars
logsumexp_weighted
    Vectorized weighted sum of log-domain samples, used by the quadrature
"""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LogScalar:
    """A number ``phase * exp(log_mag)``.

    Attributes
    ----------
    log_mag : float
        Natural log of the magnitude; ``-inf`` encodes zero
    phase : complex
        Unit-modulus phase (``+1``/``-1`` for real values)
    """

    log_mag: float
    phase: complex = 1.0 + 0.0j

    @classmethod
    def zero(cls) -> "LogScalar":
        return cls(-math.inf, 1.0 + 0.0j)

    @classmethod
    def from_value(cls, value: complex) -> "LogScalar":
        """Wrap a native number."""
        mag = abs(value)
        if mag == 0.0:
            return cls.zero()
        return cls(math.log(mag), complex(value) / mag)

    @classmethod
    def from_log(cls, log_mag: float, phase: complex = 1.0) -> "LogScalar":
        return cls(float(log_mag), complex(phase))

    @property
    def is_zero(self) -> bool:
        return self.log_mag == -math.inf

    def value(self) -> complex:
        """Native value; may overflow to inf or underflow to 0."""
        if self.is_zero:
            return 0.0j
        return self.phase * math.exp(self.log_mag) if self.log_mag < 709.0 else self.phase * math.inf

    def real(self) -> float:
        return self.value().real

    def scale(self, log_factor: float) -> "LogScalar":
        """Multiply by ``exp(log_factor)``; exact in log-domain."""
        return LogScalar(self.log_mag + log_factor, self.phase)

    def conjugate(self) -> "LogScalar":
        return LogScalar(self.log_mag, self.phase.conjugate())

    def __mul__(self, other: "LogScalar") -> "LogScalar":
        if self.is_zero or other.is_zero:
            return LogScalar.zero()
        return LogScalar(self.log_mag + other.log_mag, self.phase * other.phase)

    def __truediv__(self, other: "LogScalar") -> "LogScalar":
        if other.is_zero:
            raise ZeroDivisionError("LogScalar division by zero")
        if self.is_zero:
            return LogScalar.zero()
        return LogScalar(self.log_mag - other.log_mag, self.phase / other.phase)

    def __add__(self, other: "LogScalar") -> "LogScalar":
        return log_sum([self, other])

    def __neg__(self) -> "LogScalar":
        return LogScalar(self.log_mag, -self.phase)

    def __sub__(self, other: "LogScalar") -> "LogScalar":
        return log_sum([self, -other])

    def ratio_to(self, other: "LogScalar") -> complex:
        """``self / other`` as a native number (safe when both are huge or tiny)."""
        return (self / other).value()


def log_sum(terms) -> LogScalar:
    """Sum LogScalars without overflow, independent of term order.

    Terms are rescaled by the largest magnitude, sorted by size and summed
    with ``math.fsum`` (exactly rounded), so any permutation gives the same
    total.

    Parameters
    ----------
    terms : Iterable[LogScalar]
        Terms to add

    Returns
    -------
    LogScalar
        The sum
    """
    terms = [t for t in terms if not t.is_zero]
    if not terms:
        return LogScalar.zero()
    shift = max(t.log_mag for t in terms)
    scaled = sorted(
        (t.phase * math.exp(t.log_mag - shift) for t in terms), key=abs
    )
    total = complex(math.fsum(c.real for c in scaled), math.fsum(c.imag for c in scaled))
    if total == 0:
        return LogScalar.zero()
    return LogScalar(shift + math.log(abs(total)), total / abs(total))


def logsumexp_weighted(
    log_values: np.ndarray, weights: np.ndarray, phases: np.ndarray | None = None, axis: int = -1
) -> tuple[np.ndarray, np.ndarray]:
    """Compute ``sum(w * phase * exp(log_values))`` along ``axis`` in log-domain.

    Parameters
    ----------
    log_values : np.ndarray
        Log-magnitudes of the samples (``-inf`` allowed)
    weights : np.ndarray
        Non-negative quadrature weights, broadcastable to ``log_values``
    phases : np.ndarray, optional
        Unit phases of the samples; real positive when omitted
    axis : int
        Reduction axis

    Returns
    -------
    log_mag : np.ndarray
        Log-magnitude of the sums
    phase : np.ndarray
        Unit phase of the sums
    """
    log_values = np.asarray(log_values, dtype=float)
    shift = np.max(log_values, axis=axis, keepdims=True)
    shift = np.where(np.isfinite(shift), shift, 0.0)
    scaled = weights * np.exp(log_values - shift)
    if phases is not None:
        scaled = scaled * phases
    total = np.sum(scaled, axis=axis)
    shift = np.squeeze(shift, axis=axis)
    mag = np.abs(total)
    with np.errstate(divide="ignore"):
        log_mag = np.where(mag > 0, shift + np.log(np.where(mag > 0, mag, 1.0)), -np.inf)
    phase = np.where(mag > 0, total / np.where(mag > 0, mag, 1.0), 1.0)
    return log_mag, phase
