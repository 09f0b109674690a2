"""Univariate orthonormal polynomial families.

Three families are supported, each orthonormal with respect to a probability
measure on the standardized variable ``z``:

* Hermite, standard normal weight ``exp(-z**2/2)/sqrt(2*pi)``
* Legendre, uniform weight ``1/2`` on ``[-1, 1]``
* generalized Laguerre with shape ``alpha``, Gamma(alpha, 1) weight
  ``z**(alpha-1) * exp(-z) / Gamma(alpha)`` on ``[0, inf)``

Values are obtained from the classical three-term recurrences and divided by
the square root of the classical norms.  Derivatives are expressed in the same
orthonormal basis through a constant lower-triangular matrix (see
:func:`derivative_matrix`), which is what makes DGSM a pure post-processing of
PCE coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lgamma

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import DomainError

HERMITE = "hermite"
LEGENDRE = "legendre"
LAGUERRE = "laguerre"

_KINDS = (HERMITE, LEGENDRE, LAGUERRE)


@dataclass(frozen=True)
class PolynomialFamily:
    """A univariate orthonormal family; ``shape`` is the Gamma shape for Laguerre."""

    kind: str
    shape: float | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown polynomial family {self.kind!r}")
        if self.kind == LAGUERRE:
            if self.shape is None or not np.isfinite(self.shape) or self.shape <= 0:
                raise ValueError("Laguerre family needs a shape alpha > 0")
        elif self.shape is not None:
            raise ValueError(f"{self.kind} family takes no shape parameter")

    @classmethod
    def hermite(cls) -> PolynomialFamily:
        return cls(HERMITE)

    @classmethod
    def legendre(cls) -> PolynomialFamily:
        return cls(LEGENDRE)

    @classmethod
    def laguerre(cls, alpha: float) -> PolynomialFamily:
        return cls(LAGUERRE, float(alpha))

    def __str__(self):
        if self.kind == LAGUERRE:
            return f"laguerre(alpha={self.shape:g})"
        return self.kind


@dataclass(frozen=True)
class DerivativeMatrix:
    """Coordinates of orthonormal-polynomial derivatives in the same basis.

    ``entries[n - 1, k]`` is the coefficient of the degree-``k`` polynomial in
    the derivative of the degree-``n`` polynomial, for ``n = 1..max_degree``
    and ``k = 0..n-1``.  Entries with ``k >= n`` are zero.
    """

    family: PolynomialFamily
    max_degree: int
    entries: np.ndarray

    def row(self, degree: int) -> np.ndarray:
        """Coefficients of the derivative of ``degree`` on degrees ``0..degree-1``."""
        if not 1 <= degree <= self.max_degree:
            raise ValueError(f"degree {degree} outside 1..{self.max_degree}")
        return self.entries[degree - 1, :degree]


def log_norms(family: PolynomialFamily, max_degree: int) -> np.ndarray:
    """Log of the squared norms of the classical polynomials, degrees 0..max_degree."""
    n = np.arange(max_degree + 1)
    if family.kind == HERMITE:
        return np.array([lgamma(k + 1) for k in n])
    if family.kind == LEGENDRE:
        return -np.log(2 * n + 1.0)
    a = family.shape
    return np.array([lgamma(k + a) - lgamma(k + 1) - lgamma(a) for k in n])


def _check_domain(family: PolynomialFamily, z: np.ndarray) -> None:
    if not np.all(np.isfinite(z)):
        raise DomainError("polynomial argument must be finite")
    if family.kind == LAGUERRE and np.any(z < 0):
        raise DomainError("Laguerre polynomials are defined for z >= 0")


def eval_orthonormal_all(family: PolynomialFamily, max_degree: int, z) -> np.ndarray:
    """Orthonormal polynomials of degrees ``0..max_degree`` at ``z``.

    ``z`` may be a scalar or an array; the result has shape
    ``np.shape(z) + (max_degree + 1,)``.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    z = np.asarray(z, dtype=float)
    _check_domain(family, z)
    out = np.empty(z.shape + (max_degree + 1,))
    out[..., 0] = 1.0
    if max_degree >= 1:
        if family.kind == HERMITE:
            out[..., 1] = z
            for n in range(1, max_degree):
                out[..., n + 1] = z * out[..., n] - n * out[..., n - 1]
        elif family.kind == LEGENDRE:
            out[..., 1] = z
            for n in range(1, max_degree):
                out[..., n + 1] = ((2 * n + 1) * z * out[..., n] - n * out[..., n - 1]) / (n + 1)
        else:
            a = family.shape
            out[..., 1] = a - z
            for n in range(1, max_degree):
                out[..., n + 1] = (
                    (2 * n + a - z) * out[..., n] - (n + a - 1) * out[..., n - 1]
                ) / (n + 1)
    out *= np.exp(-0.5 * log_norms(family, max_degree))
    return out


def derivative_matrix(family: PolynomialFamily, max_degree: int) -> DerivativeMatrix:
    """Matrix expressing derivatives of degrees ``1..n`` on degrees ``0..n-1``.

    Hermite is diagonal with ``sqrt(n)``.  Legendre follows from
    ``Le'_{n+1} = (2n+1) Le_n + Le'_{n-1}``, which leaves only entries of
    opposite parity to the row degree.  Laguerre follows from
    ``L'_n = -sum_{k<n} L_k`` and the orthonormalisation constants
    ``c_m = sqrt(m! Gamma(alpha) / Gamma(m + alpha))``, giving ``-c_n / c_k``.
    """
    if max_degree < 1:
        raise ValueError("derivative matrix needs max_degree >= 1")
    n = max_degree
    c = np.zeros((n, n))
    if family.kind == HERMITE:
        c[np.arange(n), np.arange(n)] = np.sqrt(np.arange(1, n + 1))
    elif family.kind == LEGENDRE:
        for deg in range(1, n + 1):
            for k in range(deg - 1, -1, -2):
                c[deg - 1, k] = np.sqrt((2 * deg + 1) * (2 * k + 1))
    else:
        log_c = -0.5 * log_norms(family, n)
        for deg in range(1, n + 1):
            c[deg - 1, :deg] = -np.exp(log_c[deg] - log_c[:deg])
    c.setflags(write=False)
    return DerivativeMatrix(family, n, c)


def eval_derivative(family: PolynomialFamily, degree: int, z):
    """First derivative of the degree-``degree`` orthonormal polynomial at ``z``."""
    if degree < 0:
        raise ValueError("degree must be >= 0")
    z = np.asarray(z, dtype=float)
    if degree == 0:
        _check_domain(family, z)
        return np.zeros(z.shape)[()]
    vals = eval_orthonormal_all(family, degree - 1, z)
    return (vals @ derivative_matrix(family, degree).row(degree))[()]


def gauss_quadrature(family: PolynomialFamily, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss nodes and probability weights (summing to one) for the family's measure.

    Golub-Welsch on the Jacobi matrix of the monic recurrence.
    """
    if order < 1:
        raise ValueError("quadrature order must be >= 1")
    k = np.arange(1, order, dtype=float)
    if family.kind == HERMITE:
        diag = np.zeros(order)
        offdiag = np.sqrt(k)
    elif family.kind == LEGENDRE:
        diag = np.zeros(order)
        offdiag = k / np.sqrt(4 * k * k - 1)
    else:
        a = family.shape
        diag = 2 * np.arange(order) + a
        offdiag = np.sqrt(k * (k + a - 1))
    nodes, vecs = eigh_tridiagonal(diag, offdiag)
    weights = vecs[0] ** 2
    if family.kind == LAGUERRE:
        nodes = np.maximum(nodes, 0.0)
    return nodes, weights / weights.sum()


def gram_matrix(family: PolynomialFamily, max_degree: int, quad_order: int) -> np.ndarray:
    """Quadrature estimate of ``E[Psi_j Psi_k]`` for ``j, k <= max_degree``."""
    if quad_order < max_degree + 1:
        raise ValueError(
            f"quad_order={quad_order} cannot integrate degree {2 * max_degree} exactly"
        )
    nodes, weights = gauss_quadrature(family, quad_order)
    vals = eval_orthonormal_all(family, max_degree, nodes)
    return vals.T @ (weights[:, None] * vals)
