"""Independent input marginals, isoprobabilistic transforms and sampling designs.

Every marginal maps affinely onto a standardized variable matched to a
polynomial family:

=========  =====================  ==================  ===================
marginal   standardized z         family              dx/dz
=========  =====================  ==================  ===================
Uniform    U[-1, 1]               Legendre            (b - a) / 2
Gaussian   N(0, 1)                Hermite             sigma
Gamma      Gamma(alpha, 1)        Laguerre(alpha)     1 / beta
=========  =====================  ==================  ===================
"""

from __future__ import annotations

from dataclasses import dataclass
from math import pi, sqrt

import numpy as np
from scipy import special
from scipy.optimize import minimize_scalar

from .errors import DomainError
from .polyfamilies import PolynomialFamily

LHS = "lhs"
IID = "iid"


@dataclass(frozen=True)
class Uniform:
    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b) and self.a < self.b):
            raise ValueError(f"Uniform needs finite a < b, got a={self.a}, b={self.b}")

    @property
    def family(self) -> PolynomialFamily:
        return PolynomialFamily.legendre()

    @property
    def scale(self) -> float:
        return (self.b - self.a) / 2

    @property
    def std(self) -> float:
        return (self.b - self.a) / sqrt(12)

    def in_support(self, x):
        return (x >= self.a) & (x <= self.b)

    def to_standard(self, x):
        return (x - (self.a + self.b) / 2) / self.scale

    def from_standard(self, z):
        return (self.a + self.b) / 2 + self.scale * z

    def standard_ppf(self, u):
        return 2 * u - 1

    def cdf(self, x):
        return np.clip((x - self.a) / (self.b - self.a), 0.0, 1.0)

    def pdf(self, x):
        return np.where(self.in_support(x), 1 / (self.b - self.a), 0.0)

    def to_dict(self) -> dict:
        return {"kind": "uniform", "a": self.a, "b": self.b}


@dataclass(frozen=True)
class Gaussian:
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.mu) and np.isfinite(self.sigma) and self.sigma > 0):
            raise ValueError(f"Gaussian needs finite mu and sigma > 0, got {self}")

    @property
    def family(self) -> PolynomialFamily:
        return PolynomialFamily.hermite()

    @property
    def scale(self) -> float:
        return self.sigma

    @property
    def std(self) -> float:
        return self.sigma

    def in_support(self, x):
        return np.isfinite(x)

    def to_standard(self, x):
        return (x - self.mu) / self.sigma

    def from_standard(self, z):
        return self.mu + self.sigma * z

    def standard_ppf(self, u):
        return special.ndtri(u)

    def cdf(self, x):
        return special.ndtr(self.to_standard(x))

    def pdf(self, x):
        z = self.to_standard(x)
        return np.exp(-0.5 * z * z) / (self.sigma * sqrt(2 * pi))

    def to_dict(self) -> dict:
        return {"kind": "gaussian", "mu": self.mu, "sigma": self.sigma}


@dataclass(frozen=True)
class Gamma:
    """Gamma distribution with shape ``alpha`` and rate ``beta``."""

    alpha: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.alpha) and np.isfinite(self.beta)):
            raise ValueError(f"Gamma parameters must be finite, got {self}")
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError(f"Gamma needs alpha > 0 and beta > 0, got {self}")

    @property
    def family(self) -> PolynomialFamily:
        return PolynomialFamily.laguerre(self.alpha)

    @property
    def scale(self) -> float:
        return 1 / self.beta

    @property
    def std(self) -> float:
        return sqrt(self.alpha) / self.beta

    def in_support(self, x):
        return np.isfinite(x) & (x >= 0)

    def to_standard(self, x):
        return self.beta * x

    def from_standard(self, z):
        return z / self.beta

    def standard_ppf(self, u):
        return special.gammaincinv(self.alpha, u)

    def cdf(self, x):
        return special.gammainc(self.alpha, self.beta * np.maximum(x, 0.0))

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        z = self.beta * x
        with np.errstate(divide="ignore", invalid="ignore"):
            logp = (
                self.alpha * np.log(self.beta)
                + (self.alpha - 1) * np.log(x)
                - z
                - special.gammaln(self.alpha)
            )
        return np.where(x > 0, np.exp(logp), 0.0)

    def to_dict(self) -> dict:
        return {"kind": "gamma", "alpha": self.alpha, "beta": self.beta}


Marginal = Uniform | Gaussian | Gamma


def marginal_from_dict(d: dict) -> Marginal:
    """Build a marginal from e.g. ``{"kind": "uniform", "a": 0, "b": 1}``."""
    kind = str(d.get("kind", "")).lower()
    params = {k: float(v) for k, v in d.items() if k != "kind"}
    try:
        if kind == "uniform":
            return Uniform(**params)
        if kind in ("gaussian", "normal"):
            return Gaussian(**params)
        if kind == "gamma":
            return Gamma(**params)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {kind} marginal: {params}") from exc
    raise ValueError(f"unknown marginal kind {d.get('kind')!r}")


@dataclass(frozen=True)
class InputModel:
    """Mutually independent marginals; the joint density is their product."""

    marginals: tuple

    def __post_init__(self):
        object.__setattr__(self, "marginals", tuple(self.marginals))
        if len(self.marginals) < 1:
            raise ValueError("an input model needs at least one marginal")

    @property
    def dim(self) -> int:
        return len(self.marginals)

    @property
    def families(self) -> tuple[PolynomialFamily, ...]:
        return tuple(m.family for m in self.marginals)

    @property
    def scales(self) -> np.ndarray:
        """Jacobians ``dx_i/dz_i`` of the standardizing maps."""
        return np.array([m.scale for m in self.marginals])

    def to_standard(self, x) -> np.ndarray:
        return to_standard(self, x)

    def from_standard(self, z) -> np.ndarray:
        return from_standard(self, z)

    def to_dicts(self) -> list[dict]:
        return [m.to_dict() for m in self.marginals]

    @classmethod
    def from_dicts(cls, items) -> InputModel:
        return cls(tuple(marginal_from_dict(d) for d in items))

    @classmethod
    def iid(cls, marginal: Marginal, dim: int) -> InputModel:
        return cls((marginal,) * dim)


def _columns(model: InputModel, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != model.dim:
        raise ValueError(f"expected last axis of length {model.dim}, got shape {x.shape}")
    return x


def to_standard(model: InputModel, x) -> np.ndarray:
    """Map original-space points (``(..., M)``) to standardized space."""
    x = _columns(model, x)
    z = np.empty_like(x)
    for i, m in enumerate(model.marginals):
        xi = x[..., i]
        if not np.all(m.in_support(xi)):
            raise DomainError(f"component {i} outside the support of {m}")
        z[..., i] = m.to_standard(xi)
    return z


def from_standard(model: InputModel, z) -> np.ndarray:
    """Inverse of :func:`to_standard`."""
    z = _columns(model, z)
    x = np.empty_like(z)
    for i, m in enumerate(model.marginals):
        zi = z[..., i]
        xi = m.from_standard(zi)
        if not np.all(m.in_support(xi)):
            raise DomainError(f"component {i} outside the standardized domain of {m}")
        x[..., i] = xi
    return x


@dataclass(frozen=True)
class Design:
    """Experimental design stored in standardized space."""

    points: np.ndarray
    seed: int
    scheme: str

    @property
    def size(self) -> int:
        return self.points.shape[0]

    def physical(self, model: InputModel) -> np.ndarray:
        return from_standard(model, self.points)


def column_rng(seed: int, column: int, stream: int = 0) -> np.random.Generator:
    """PCG64 generator for one design column.

    Streams are keyed on ``(seed, stream, column)`` through ``SeedSequence``,
    so each column and each independent design draws from its own substream.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, stream, column])))


def sample(model: InputModel, n: int, scheme: str = LHS, seed: int = 0, stream: int = 0) -> Design:
    """Draw ``n`` points in standardized space.

    With ``scheme="lhs"`` each column has exactly one point in each of the
    ``n`` equiprobable strata of its marginal.  ``stream`` selects an
    independent substream for the same seed (e.g. the A and B matrices of a
    Sobol' estimator).
    """
    if n < 1:
        raise ValueError("sample size must be >= 1")
    scheme = scheme.lower()
    if scheme not in (LHS, IID):
        raise ValueError(f"unknown sampling scheme {scheme!r}")
    tiny = np.finfo(float).tiny
    points = np.empty((n, model.dim))
    for j, m in enumerate(model.marginals):
        rng = column_rng(seed, j, stream)
        if scheme == LHS:
            perm = rng.permutation(n)
            u = (perm + rng.random(n)) / n
        else:
            u = rng.random(n)
        u = np.clip(u, tiny, np.nextafter(1.0, 0.0))
        points[:, j] = m.standard_ppf(u)
    return Design(points, seed, scheme)


def cheeger_constant(marginal: Marginal) -> float:
    """``sup_x min(F(x), 1 - F(x)) / f(x)`` for the marginal.

    Closed forms for Uniform and Gaussian.  For Gamma the ratio is maximised by
    golden-section search around the median when ``alpha >= 1``; for
    ``alpha < 1`` the hazard rate decreases to ``beta`` so the supremum is the
    tail limit ``1 / beta``.
    """
    if isinstance(marginal, Uniform):
        return (marginal.b - marginal.a) / 2
    if isinstance(marginal, Gaussian):
        return marginal.sigma * sqrt(2 * pi) / 2
    if not isinstance(marginal, Gamma):
        raise TypeError(f"unsupported marginal {marginal!r}")

    a = marginal.alpha
    if a <= 1:
        return 1 / marginal.beta

    def neg_ratio(z):
        log_f = (a - 1) * np.log(z) - z - special.gammaln(a)
        low = special.gammainc(a, z)
        return -min(low, 1 - low) / np.exp(log_f)

    median = special.gammaincinv(a, 0.5)
    res = minimize_scalar(
        neg_ratio, bracket=(0.5 * median, median, 2 * median), method="golden", tol=1e-10
    )
    return -res.fun / marginal.beta


def dgsm_prefactor(marginal: Marginal) -> float:
    """Multiplier ``kappa`` such that ``S_dgsm = kappa * nu / D``.

    ``(b - a)**2 / pi**2`` for Uniform, ``sigma**2`` for Gaussian and the
    general ``4 C**2`` with the Cheeger constant otherwise.
    """
    if isinstance(marginal, Uniform):
        return (marginal.b - marginal.a) ** 2 / pi**2
    if isinstance(marginal, Gaussian):
        return marginal.sigma**2
    return 4 * cheeger_constant(marginal) ** 2
