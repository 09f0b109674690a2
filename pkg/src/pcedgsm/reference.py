"""Surrogate-free reference estimators.

Model functions are vectorised callables mapping an ``(N, M)`` array of
original-space points to ``N`` outputs.  Wrap one in :class:`CountingModel`
to audit the evaluation budget of an estimator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateModelError
from .inputmodel import IID, Gamma, InputModel, Uniform, dgsm_prefactor, sample


class CountingModel:
    """Callable wrapper that counts evaluated points."""

    def __init__(self, func, dim: int | None = None):
        self.func = func
        self.dim = dim if dim is not None else getattr(func, "dim", None)
        self.calls = 0

    def __call__(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        self.calls += x.shape[0]
        return self.func(x)


def _evaluate(f, x: np.ndarray) -> np.ndarray:
    y = np.asarray(f(x), dtype=float).reshape(-1)
    if y.shape[0] != x.shape[0]:
        raise ValueError(f"model returned {y.shape[0]} values for {x.shape[0]} points")
    return y


@dataclass(frozen=True)
class SobolMCResult:
    s_first: np.ndarray
    s_total: np.ndarray
    mean: float
    variance: float
    evaluations: int


def sobol_mc(f, model: InputModel, n: int, seed: int = 0) -> SobolMCResult:
    """Crude Monte Carlo first-order and total Sobol' indices.

    Two independent samples ``A`` and ``B`` are drawn; ``C_i`` is ``A`` with
    its ``i``-th column taken from ``B``.  ``C_i`` shares only ``x_i`` with
    ``B`` and everything but ``x_i`` with ``A``, so::

        D_i + M0^2 = mean(f(B) f(C_i))
        D_i^T      = mean((f(A) - f(C_i))^2) / 2

    for a total of ``N (M + 2)`` model evaluations.
    """
    if n < 2:
        raise ValueError("need at least two Monte Carlo samples")
    xa = sample(model, n, IID, seed, stream=0).physical(model)
    xb = sample(model, n, IID, seed, stream=1).physical(model)
    ya = _evaluate(f, xa)
    yb = _evaluate(f, xb)
    m0 = ya.mean()
    d = np.mean(ya**2) - m0**2
    if not d > 0:
        raise DegenerateModelError(f"estimated output variance {d!r} is not positive")
    first = np.empty(model.dim)
    total = np.empty(model.dim)
    for i in range(model.dim):
        xc = xa.copy()
        xc[:, i] = xb[:, i]
        yc = _evaluate(f, xc)
        first[i] = (np.mean(yb * yc) - m0**2) / d
        total[i] = 0.5 * np.mean((ya - yc) ** 2) / d
    return SobolMCResult(first, total, float(m0), float(d), n * (model.dim + 2))


@dataclass(frozen=True)
class MorrisResult:
    mu: np.ndarray
    mu_star: np.ndarray
    sigma: np.ndarray
    trajectories: int
    evaluations: int


def morris_step(marginal, delta: float) -> float:
    """Elementary-effect step in original units: a fraction of the range or of the std."""
    if isinstance(marginal, Uniform):
        return delta * (marginal.b - marginal.a)
    return delta * marginal.std


def morris_screening(f, model: InputModel, n: int, delta: float = 0.1, seed: int = 0) -> MorrisResult:
    """One-at-a-time elementary effects from ``n`` random base points.

    Steps leaving a bounded support are reflected (``x - step``), so every
    perturbed point stays admissible.  ``sigma`` uses the ``n - 1`` divisor.
    """
    if n < 2:
        raise ValueError("Morris screening needs at least two base points")
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    x = sample(model, n, IID, seed).physical(model)
    y = _evaluate(f, x)
    m = model.dim
    mu, mu_star, sigma = np.empty(m), np.empty(m), np.empty(m)
    for i, marg in enumerate(model.marginals):
        step = morris_step(marg, delta)
        xr = x.copy()
        up = x[:, i] + step
        if isinstance(marg, Uniform):
            up = np.where(up > marg.b, x[:, i] - step, up)
        xr[:, i] = up
        ee = (_evaluate(f, xr) - y) / (xr[:, i] - x[:, i])
        mu[i] = ee.mean()
        mu_star[i] = np.abs(ee).mean()
        sigma[i] = ee.std(ddof=1)
    return MorrisResult(mu, mu_star, sigma, n, n * (m + 1))


@dataclass(frozen=True)
class DGSMEstimate:
    nu: np.ndarray
    nu_se: np.ndarray
    dgsm: np.ndarray | None = None
    dgsm_se: np.ndarray | None = None
    variance: float | None = None
    evaluations: int = 0


def _fd_squares(f, model: InputModel, x: np.ndarray, h: float) -> np.ndarray:
    """Squared central differences, one column per variable."""
    g = np.empty_like(x)
    for i, marg in enumerate(model.marginals):
        step = h * marg.scale
        xi = x[:, i]
        if isinstance(marg, Uniform):
            xi = np.clip(xi, marg.a + step, marg.b - step)
        elif isinstance(marg, Gamma):
            xi = np.maximum(xi, step)
        plus = x.copy()
        minus = x.copy()
        plus[:, i] = xi + step
        minus[:, i] = xi - step
        g[:, i] = ((_evaluate(f, plus) - _evaluate(f, minus)) / (2 * step)) ** 2
    return g


def nu_mc(f, model: InputModel, n: int, h: float = 1e-4, seed: int = 0) -> DGSMEstimate:
    """Monte Carlo mean-squared derivative with central differences.

    The step for variable ``i`` is ``h`` times the marginal's standardizing
    scale; points closer than one step to a finite bound are moved inward.
    """
    if n < 2:
        raise ValueError("need at least two Monte Carlo samples")
    if not h > 0:
        raise ValueError("finite-difference step must be positive")
    x = sample(model, n, IID, seed).physical(model)
    g = _fd_squares(f, model, x, h)
    return DGSMEstimate(
        g.mean(axis=0), g.std(axis=0, ddof=1) / np.sqrt(n), evaluations=2 * n * model.dim
    )


def dgsm_mc(f, model: InputModel, n: int, h: float = 1e-4, seed: int = 0) -> DGSMEstimate:
    """``prefactor * nu / D`` with ``nu`` and ``D`` estimated on one sample.

    Standard errors of the ratio come from the delta method.
    """
    if n < 2:
        raise ValueError("need at least two Monte Carlo samples")
    if not h > 0:
        raise ValueError("finite-difference step must be positive")
    x = sample(model, n, IID, seed).physical(model)
    y = _evaluate(f, x)
    g = _fd_squares(f, model, x, h)
    ybar = y.mean()
    dev2 = (y - ybar) ** 2
    var = dev2.mean()
    if not var > 0:
        raise DegenerateModelError(f"estimated output variance {var!r} is not positive")
    kappa = np.array([dgsm_prefactor(m) for m in model.marginals])
    gbar = g.mean(axis=0)
    ratio = kappa * gbar / var
    influence = kappa * ((g - gbar) / var - gbar * (dev2[:, None] - var) / var**2)
    return DGSMEstimate(
        nu=gbar,
        nu_se=g.std(axis=0, ddof=1) / np.sqrt(n),
        dgsm=ratio,
        dgsm_se=influence.std(axis=0, ddof=1) / np.sqrt(n),
        variance=float(var),
        evaluations=n * (2 * model.dim + 1),
    )
