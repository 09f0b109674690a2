"""Sensitivity measures read directly off PCE coefficients.

Variables are indexed from 0.  With an orthonormal basis the moments and
Sobol' indices are sums of squared coefficients.  For DGSM the partial
derivative of the expansion is re-expanded in the same basis with the
univariate derivative matrices, so the mean-squared derivative is again a sum
of squares.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from .errors import UndefinedIndicesError
from .inputmodel import dgsm_prefactor
from .pce import PCEModel
from .polyfamilies import HERMITE, derivative_matrix

TWO_ROUTE_TOL = 1e-12


def pce_mean(pce: PCEModel) -> float:
    return float(pce.coefficients[pce.basis.zero_position])


def _nonconstant(pce: PCEModel) -> np.ndarray:
    return pce.basis.indices.sum(axis=1) > 0


def pce_variance(pce: PCEModel) -> float:
    """Sum of squared non-constant coefficients."""
    return float(np.sum(pce.coefficients[_nonconstant(pce)] ** 2))


def _variance_or_raise(pce: PCEModel) -> float:
    d = pce_variance(pce)
    if d <= 0:
        raise UndefinedIndicesError("Sobol' indices are undefined for a constant model")
    return d


def _check_var(pce: PCEModel, i: int) -> None:
    if not 0 <= i < pce.dim:
        raise IndexError(f"variable {i} outside 0..{pce.dim - 1}")


def sobol_group(pce: PCEModel, u) -> float:
    """Sobol' index of the group ``u``: terms whose non-zero exponents are exactly ``u``."""
    u = sorted(set(int(k) for k in u))
    if not u:
        raise ValueError("group must be non-empty")
    for k in u:
        _check_var(pce, k)
    d = _variance_or_raise(pce)
    mask = np.zeros(pce.dim, dtype=bool)
    mask[u] = True
    nz = pce.basis.indices != 0
    sel = np.all(nz == mask, axis=1)
    return float(np.sum(pce.coefficients[sel] ** 2) / d)


def sobol_first(pce: PCEModel, i: int) -> float:
    return sobol_group(pce, [i])


def sobol_total(pce: PCEModel, i: int) -> float:
    _check_var(pce, i)
    d = _variance_or_raise(pce)
    sel = pce.basis.indices[:, i] > 0
    return float(np.sum(pce.coefficients[sel] ** 2) / d)


@dataclass(frozen=True)
class DerivativeExpansion:
    """``d/dz_i`` of a PCE as ``sum_beta b_beta Psi_beta`` in standardized space."""

    variable: int
    indices: np.ndarray
    coefficients: np.ndarray

    def __len__(self):
        return self.coefficients.shape[0]

    def as_dict(self) -> dict[tuple, float]:
        return {tuple(int(v) for v in row): float(c) for row, c in zip(self.indices, self.coefficients)}


def derivative_expansion(pce: PCEModel, i: int) -> DerivativeExpansion:
    _check_var(pce, i)
    idx = pce.basis.indices
    active = np.flatnonzero((idx[:, i] > 0) & (pce.coefficients != 0))
    if active.size == 0:
        return DerivativeExpansion(i, np.zeros((0, pce.dim), dtype=np.int64), np.zeros(0))
    cmat = derivative_matrix(pce.families[i], int(idx[active, i].max()))
    acc: dict[tuple, float] = {}
    for pos in active:
        alpha = list(int(v) for v in idx[pos])
        a = pce.coefficients[pos]
        row = cmat.row(alpha[i])
        for k in range(alpha[i]):
            if row[k] == 0.0:
                continue
            alpha[i] = k
            beta = tuple(alpha)
            acc[beta] = acc.get(beta, 0.0) + a * row[k]
        alpha[i] = int(idx[pos, i])
    betas = np.array(list(acc), dtype=np.int64).reshape(-1, pce.dim)
    return DerivativeExpansion(i, betas, np.array(list(acc.values())))


def nu(pce: PCEModel, i: int) -> float:
    """Mean-squared partial derivative ``E[(dM/dx_i)^2]`` in original units."""
    b = derivative_expansion(pce, i).coefficients
    scale = pce.input.scales[i]
    return float(np.sum(b**2) / scale**2)


def dgsm(pce: PCEModel, i: int) -> float:
    """Upper bound on the total Sobol' index of variable ``i``.

    For Hermite dimensions the result is cross-checked against the closed
    form ``sum alpha_i a_alpha^2 / D``.
    """
    d = _variance_or_raise(pce)
    value = dgsm_prefactor(pce.input.marginals[i]) * nu(pce, i) / d
    if pce.families[i].kind == HERMITE:
        closed = hermite_dgsm(pce, i)
        if abs(closed - value) > TWO_ROUTE_TOL * max(1.0, abs(closed)):
            raise RuntimeError(
                f"Hermite DGSM routes disagree for variable {i}: {value!r} vs {closed!r}"
            )
    return float(value)


def hermite_dgsm(pce: PCEModel, i: int) -> float:
    """Closed-form Hermite DGSM ``sum_{alpha_i > 0} alpha_i a_alpha^2 / D``."""
    d = _variance_or_raise(pce)
    ai = pce.basis.indices[:, i]
    return float(np.sum(ai * pce.coefficients**2) / d)


@dataclass(frozen=True)
class VariableSensitivity:
    name: str
    s_first: float
    s_total: float
    nu: float
    s_dgsm: float


@dataclass(frozen=True)
class SensitivityReport:
    mean: float
    variance: float
    variables: tuple[VariableSensitivity, ...]

    CSV_COLUMNS = ("variable", "S_first", "S_total", "nu", "S_dgsm")

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "variance": self.variance,
            "variables": [
                {"name": v.name, "S_first": v.s_first, "S_total": v.s_total,
                 "nu": v.nu, "S_dgsm": v.s_dgsm}
                for v in self.variables
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.CSV_COLUMNS)
        for v in self.variables:
            w.writerow([v.name, repr(v.s_first), repr(v.s_total), repr(v.nu), repr(v.s_dgsm)])
        return buf.getvalue()


def sensitivity_report(pce: PCEModel, names=None) -> SensitivityReport:
    names = list(names) if names is not None else [f"X{i + 1}" for i in range(pce.dim)]
    if len(names) != pce.dim:
        raise ValueError("one name per variable required")
    rows = tuple(
        VariableSensitivity(names[i], sobol_first(pce, i), sobol_total(pce, i), nu(pce, i), dgsm(pce, i))
        for i in range(pce.dim)
    )
    return SensitivityReport(pce_mean(pce), pce_variance(pce), rows)
