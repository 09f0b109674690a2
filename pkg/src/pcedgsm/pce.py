"""Truncated polynomial chaos expansions: multi-index sets, basis evaluation, fitting.

All regression happens in standardized space, where the tensor-product basis
is orthonormal.  Two fitting routes are provided: ordinary least squares on a
fixed basis, and hybrid least-angle regression (LAR selection followed by an
OLS re-fit on the active set that minimises the leave-one-out error).
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from math import comb

import numpy as np
from scipy.linalg import qr, solve_triangular

from .errors import CapacityError, IllConditionedError, UnderdeterminedError
from .inputmodel import Design, InputModel, to_standard
from .polyfamilies import PolynomialFamily, eval_orthonormal_all

FORMAT_VERSION = 1
MAX_CARDINALITY = 10**7
MAX_CONDITION = 1e12


@dataclass(frozen=True)
class TruncationSet:
    """Ordered, duplicate-free set of multi-indices containing the zero index.

    ``indices`` is a ``(P, M)`` integer array; row ``k`` is the exponent
    tuple of the ``k``-th basis polynomial.
    """

    dim: int
    degree: int
    indices: np.ndarray
    _lookup: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        idx = np.array(self.indices, dtype=np.int64, copy=True).reshape(-1, self.dim)
        if idx.size and idx.min() < 0:
            raise ValueError("multi-index exponents must be non-negative")
        if idx.shape[0] == 0 or np.any(idx.sum(axis=1) > self.degree):
            raise ValueError(f"all multi-indices must have total degree <= {self.degree}")
        lookup = {tuple(int(v) for v in row): k for k, row in enumerate(idx)}
        if len(lookup) != idx.shape[0]:
            raise ValueError("duplicate multi-indices in truncation set")
        if (0,) * self.dim not in lookup:
            raise ValueError("truncation set must contain the zero multi-index")
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "_lookup", lookup)

    def __len__(self):
        return self.indices.shape[0]

    def __iter__(self):
        return iter(self._lookup)

    def __contains__(self, alpha):
        return tuple(alpha) in self._lookup

    def position(self, alpha) -> int:
        return self._lookup[tuple(alpha)]

    @property
    def zero_position(self) -> int:
        return self._lookup[(0,) * self.dim]

    def subset(self, positions) -> TruncationSet:
        """The indices at ``positions``, kept in this set's order."""
        positions = np.sort(np.asarray(positions, dtype=int))
        return TruncationSet(self.dim, self.degree, self.indices[positions])


def _compositions(total: int, parts: int):
    # descending lexicographic order: (2,0), (1,1), (0,2)
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def total_degree_set(dim: int, degree: int) -> TruncationSet:
    """All multi-indices with ``|alpha| <= degree`` in graded lexicographic order."""
    if dim < 1 or degree < 0:
        raise ValueError("need dim >= 1 and degree >= 0")
    size = comb(dim + degree, degree)
    if size > MAX_CARDINALITY:
        raise CapacityError(
            f"total-degree set with M={dim}, p={degree} has {size} terms (limit {MAX_CARDINALITY})"
        )
    rows = [c for d in range(degree + 1) for c in _compositions(d, dim)]
    return TruncationSet(dim, degree, np.array(rows, dtype=np.int64))


def eval_basis(basis: TruncationSet, families, z) -> np.ndarray:
    """Multivariate orthonormal polynomials ``Psi_alpha(z)``.

    ``z`` has shape ``(M,)`` or ``(N, M)``; the result has shape ``(P,)`` or
    ``(N, P)``.
    """
    z = np.asarray(z, dtype=float)
    if z.shape[-1] != basis.dim or len(families) != basis.dim:
        raise ValueError("dimension mismatch between basis, families and points")
    out = np.ones(z.shape[:-1] + (len(basis),))
    for d, fam in enumerate(families):
        degs = basis.indices[:, d]
        top = int(degs.max())
        if top == 0:
            continue
        vals = eval_orthonormal_all(fam, top, z[..., d])
        out *= vals[..., degs]
    return out


@dataclass(frozen=True)
class PCEModel:
    """A fitted expansion ``sum_alpha a_alpha Psi_alpha(T^-1(x))``."""

    input: InputModel
    basis: TruncationSet
    coefficients: np.ndarray
    residual: float | None = None
    loo: float | None = None
    warning: str | None = None

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=float, copy=True).ravel()
        if c.shape[0] != len(self.basis):
            raise ValueError(f"{c.shape[0]} coefficients for a basis of {len(self.basis)} terms")
        if self.basis.dim != self.input.dim:
            raise ValueError("basis dimension does not match the input model")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @property
    def families(self) -> tuple[PolynomialFamily, ...]:
        return self.input.families

    @property
    def dim(self) -> int:
        return self.basis.dim

    def __call__(self, x) -> np.ndarray:
        return eval_model(self, x)

    def eval_standard(self, z) -> np.ndarray:
        return eval_basis(self.basis, self.families, z) @ self.coefficients

    def to_dict(self) -> dict:
        return {
            "version": FORMAT_VERSION,
            "marginals": self.input.to_dicts(),
            "degree": self.basis.degree,
            "indices": self.basis.indices.tolist(),
            "coefficients": [float(c) for c in self.coefficients],
            "residual": self.residual,
            "loo": self.loo,
        }

    def to_json(self) -> str:
        # float repr is the shortest string that round-trips the double exactly
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_dict(cls, d: dict) -> PCEModel:
        if d.get("version") != FORMAT_VERSION:
            raise ValueError(f"unsupported PCE format version {d.get('version')!r}")
        model = InputModel.from_dicts(d["marginals"])
        basis = TruncationSet(model.dim, int(d["degree"]), np.array(d["indices"], dtype=np.int64))
        return cls(model, basis, np.array(d["coefficients"], dtype=float),
                   d.get("residual"), d.get("loo"))

    @classmethod
    def from_json(cls, text: str) -> PCEModel:
        return cls.from_dict(json.loads(text))


def eval_model(pce: PCEModel, x) -> np.ndarray:
    """Evaluate the expansion at original-space points ``x``."""
    return pce.eval_standard(to_standard(pce.input, x))


def _check_inputs(design: Design, y, model: InputModel) -> np.ndarray:
    y = np.asarray(y, dtype=float).ravel()
    if design.points.shape[0] != y.shape[0]:
        raise ValueError(f"design has {design.points.shape[0]} rows but y has {y.shape[0]} values")
    if design.points.shape[1] != model.dim:
        raise ValueError("design dimension does not match the input model")
    if not np.all(np.isfinite(y)):
        raise ValueError("responses must be finite")
    return y


def _relative_loo(y: np.ndarray, resid: np.ndarray, hat_diag: np.ndarray) -> float:
    denom = 1.0 - hat_diag
    if np.any(denom <= 1e-12):
        return np.inf
    var = y.var()
    err = np.mean((resid / denom) ** 2)
    return float(err / var) if var > 0 else float(err)


def _relative_residual(y: np.ndarray, resid: np.ndarray) -> float:
    ny = np.linalg.norm(y)
    return float(np.linalg.norm(resid) / ny) if ny > 0 else float(np.linalg.norm(resid))


def fit_least_squares(design: Design, y, basis: TruncationSet, model: InputModel) -> PCEModel:
    """Ordinary least-squares coefficients via a QR factorisation."""
    y = _check_inputs(design, y, model)
    n, p = y.shape[0], len(basis)
    if n < p:
        raise UnderdeterminedError(f"{n} samples cannot determine {p} coefficients")
    psi = eval_basis(basis, model.families, design.points)
    q, r = qr(psi, mode="economic")
    cond = np.linalg.cond(r)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise IllConditionedError(
            f"regression matrix condition number {cond:.3g} exceeds {MAX_CONDITION:.0e} "
            f"(N={n}, P={p}); reduce the degree or enlarge the design"
        )
    coef = solve_triangular(r, q.T @ y)
    resid = y - psi @ coef
    loo = _relative_loo(y, resid, np.einsum("ij,ij->i", q, q))
    return PCEModel(model, basis, coef, _relative_residual(y, resid), loo)


def lar_order(psi: np.ndarray, y: np.ndarray, max_steps: int) -> list[int]:
    """Column entry order along the least-angle path (columns assumed non-constant)."""
    from sklearn.linear_model import lars_path

    x = psi - psi.mean(axis=0)
    norms = np.linalg.norm(x, axis=0)
    keep = np.flatnonzero(norms > 1e-12 * max(1.0, norms.max(initial=0.0)))
    if keep.size == 0 or max_steps < 1:
        return []
    xn = x[:, keep] / norms[keep]
    yc = y - y.mean()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        _, active, _ = lars_path(xn, yc, method="lar", max_iter=max_steps)
    return [int(keep[k]) for k in active]


def fit_lar(design: Design, y, candidate_basis: TruncationSet, model: InputModel) -> PCEModel:
    """Hybrid LAR: least-angle selection, then OLS on the LOO-optimal active set.

    The constant term is always active.  Candidate models along the path are
    ``{0} + first k entered terms``; their leave-one-out errors are computed
    in closed form from the hat-matrix diagonal of an incrementally
    orthogonalised design.
    """
    y = _check_inputs(design, y, model)
    n = y.shape[0]
    if n < 2:
        raise ValueError("LAR needs at least two samples")
    zero = candidate_basis.zero_position

    if np.ptp(y) == 0:
        coef = np.zeros(1)
        coef[0] = y[0]
        basis = candidate_basis.subset([zero])
        return PCEModel(model, basis, coef, 0.0, 0.0, warning="constant response")

    psi = eval_basis(candidate_basis, model.families, design.points)
    others = np.array([k for k in range(len(candidate_basis)) if k != zero], dtype=int)
    order = [int(others[k]) for k in lar_order(psi[:, others], y, min(n - 2, others.size))]

    # nested OLS fits along the path via modified Gram-Schmidt
    q_cols = [np.full(n, 1 / np.sqrt(n))]
    resid = y - q_cols[0] * (q_cols[0] @ y)
    hat = q_cols[0] ** 2
    best_k, best_loo = 0, _relative_loo(y, resid, hat)
    for k, col in enumerate(order, start=1):
        v = psi[:, col].copy()
        norm0 = np.linalg.norm(v)
        for _ in range(2):
            for q in q_cols:
                v -= q * (q @ v)
        nv = np.linalg.norm(v)
        if nv <= 1e-10 * max(norm0, 1.0):
            order = order[: k - 1]
            break
        v /= nv
        q_cols.append(v)
        resid = resid - v * (v @ resid)
        hat = hat + v * v
        loo = _relative_loo(y, resid, hat)
        if loo < best_loo:
            best_k, best_loo = k, loo

    active = sorted([zero] + order[:best_k])
    sub = psi[:, active]
    coef, *_ = np.linalg.lstsq(sub, y, rcond=None)
    final_resid = y - sub @ coef
    return PCEModel(
        model,
        candidate_basis.subset(active),
        coef,
        _relative_residual(y, final_resid),
        best_loo,
    )
