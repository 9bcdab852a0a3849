"""Truncated bivariate Taylor jets in Wirtinger variables.

A ``WirtingerJet`` at a point ``z0`` stores the coefficients ``c[a, b]`` of
``F(z0 + e) = sum c[a, b] e^a conj(e)^b`` for ``a + b <= 4``, so that
``d^a dbar^b F(z0) = a! b! c[a, b]``. Arithmetic and composition with
elementary functions act on the coefficients exactly (up to rounding), which
gives analytic derivatives of every model potential to fourth order without
symbolic algebra. All operations are vectorized over leading array axes.

A jet in the single holomorphic variable (only ``c[a, 0]`` populated) is an
ordinary univariate Taylor jet; the cutoff profile uses that specialisation.
"""

import math

import numpy as np

ORDER = 4
_TERMS = [(a, b) for a in range(ORDER + 1) for b in range(ORDER + 1 - a)]
_PRODUCT = [
    (a, b, c, d) for (a, b) in _TERMS for (c, d) in _TERMS if a + b + c + d <= ORDER
]


class WirtingerJet:
    """Truncated Taylor expansion in ``(e, conj(e))`` up to total degree 4.

    Attributes
    ----------
    coeffs : np.ndarray
        Complex array of shape ``(..., 5, 5)``
    """

    __array_priority__ = 100

    def __init__(self, coeffs: np.ndarray):
        self.coeffs = np.asarray(coeffs, dtype=complex)

    # construction -----------------------------------------------------------------

    @classmethod
    def constant(cls, value, shape: tuple = ()) -> "WirtingerJet":
        value = np.broadcast_to(np.asarray(value, dtype=complex), shape) if shape else np.asarray(value, dtype=complex)
        coeffs = np.zeros(value.shape + (ORDER + 1, ORDER + 1), dtype=complex)
        coeffs[..., 0, 0] = value
        return cls(coeffs)

    @classmethod
    def variables(cls, z0) -> tuple["WirtingerJet", "WirtingerJet"]:
        """Jets of ``z`` and ``conj(z)`` at the points ``z0``."""
        z0 = np.asarray(z0, dtype=complex)
        z = cls.constant(z0)
        zbar = cls.constant(np.conj(z0))
        z.coeffs[..., 1, 0] = 1.0
        zbar.coeffs[..., 0, 1] = 1.0
        return z, zbar

    @classmethod
    def real_variable(cls, r0) -> "WirtingerJet":
        """Univariate Taylor jet of the identity at real points ``r0``."""
        z, _ = cls.variables(np.asarray(r0, dtype=float))
        return z

    # inspection -------------------------------------------------------------------

    @property
    def shape(self) -> tuple:
        return self.coeffs.shape[:-2]

    @property
    def value(self) -> np.ndarray:
        return self.coeffs[..., 0, 0]

    def derivative(self, a: int, b: int = 0) -> np.ndarray:
        """``d^a dbar^b`` of the jet's function at the expansion point."""
        return math.factorial(a) * math.factorial(b) * self.coeffs[..., a, b]

    # arithmetic -------------------------------------------------------------------

    def _coerce(self, other) -> "WirtingerJet":
        if isinstance(other, WirtingerJet):
            return other
        return WirtingerJet.constant(other)

    def __add__(self, other):
        if isinstance(other, WirtingerJet):
            return WirtingerJet(self.coeffs + other.coeffs)
        out = self.coeffs.copy()
        out[..., 0, 0] = out[..., 0, 0] + other
        return WirtingerJet(out)

    __radd__ = __add__

    def __neg__(self):
        return WirtingerJet(-self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, WirtingerJet):
            other = np.asarray(other)
            return WirtingerJet(self.coeffs * other[..., None, None])
        x, y = self.coeffs, other.coeffs
        shape = np.broadcast_shapes(x.shape[:-2], y.shape[:-2])
        out = np.zeros(shape + (ORDER + 1, ORDER + 1), dtype=complex)
        for a, b, c, d in _PRODUCT:
            out[..., a + c, b + d] += x[..., a, b] * y[..., c, d]
        return WirtingerJet(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, WirtingerJet):
            return self * other.reciprocal()
        return WirtingerJet(self.coeffs / np.asarray(other)[..., None, None])

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, exponent):
        if isinstance(exponent, int) and exponent >= 0:
            result = WirtingerJet.constant(np.ones(self.shape))
            for _ in range(exponent):
                result = result * self
            return result
        return self.power(exponent)

    # composition ------------------------------------------------------------------

    def compose(self, taylor: list) -> "WirtingerJet":
        """Compose a scalar function with this jet.

        Parameters
        ----------
        taylor : list of array_like
            ``[f(c), f'(c), f''(c)/2!, f'''(c)/3!, f''''(c)/4!]`` evaluated at
            the jet's constant term ``c``

        Returns
        -------
        WirtingerJet
            Jet of ``f`` composed with this jet
        """
        nil = self.coeffs.copy()
        nil[..., 0, 0] = 0.0
        nil = WirtingerJet(nil)
        result = WirtingerJet.constant(np.asarray(taylor[ORDER], dtype=complex) * np.ones(self.shape))
        for n in range(ORDER - 1, -1, -1):
            result = result * nil + np.asarray(taylor[n], dtype=complex)
        return result

    def exp(self) -> "WirtingerJet":
        e = np.exp(self.value)
        return self.compose([e, e, e / 2, e / 6, e / 24])

    def log(self) -> "WirtingerJet":
        c = self.value
        return self.compose([np.log(c), 1 / c, -1 / (2 * c**2), 1 / (3 * c**3), -1 / (4 * c**4)])

    def power(self, p: float) -> "WirtingerJet":
        c = self.value
        taylor, coef = [], 1.0
        for n in range(ORDER + 1):
            taylor.append(coef * c ** (p - n))
            coef *= (p - n) / (n + 1)
        return self.compose(taylor)

    def sqrt(self) -> "WirtingerJet":
        return self.power(0.5)

    def reciprocal(self) -> "WirtingerJet":
        return self.power(-1.0)

    def sin(self) -> "WirtingerJet":
        s, c = np.sin(self.value), np.cos(self.value)
        return self.compose([s, c, -s / 2, -c / 6, s / 24])

    def cos(self) -> "WirtingerJet":
        s, c = np.sin(self.value), np.cos(self.value)
        return self.compose([c, -s, -c / 2, s / 6, c / 24])

    def integrate(self, value0) -> "WirtingerJet":
        """Antiderivative of a univariate jet with constant term ``value0``."""
        out = np.zeros_like(self.coeffs)
        for a in range(ORDER):
            out[..., a + 1, 0] = self.coeffs[..., a, 0] / (a + 1)
        out[..., 0, 0] = value0
        return WirtingerJet(out)

    def taylor(self) -> list:
        """Univariate Taylor coefficients ``[c[0,0], ..., c[4,0]]``."""
        return [self.coeffs[..., n, 0] for n in range(ORDER + 1)]

    @staticmethod
    def where(mask, a: "WirtingerJet", b: "WirtingerJet") -> "WirtingerJet":
        mask = np.asarray(mask)[..., None, None]
        return WirtingerJet(np.where(mask, a.coeffs, b.coeffs))
