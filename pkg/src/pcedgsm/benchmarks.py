"""Benchmark models: the 20-dimensional Morris function, Oakley & O'Hagan, linear."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import DomainError, ParseError
from .inputmodel import Gaussian, InputModel, Uniform

MORRIS_DIM = 20
OO_DIM = 15


def _morris_coefficients():
    idx = np.arange(1, MORRIS_DIM + 1)
    first = np.where(idx <= 10, 20.0, (-1.0) ** idx)
    second = np.zeros((MORRIS_DIM, MORRIS_DIM))
    for i, j in combinations(range(MORRIS_DIM), 2):
        second[i, j] = -15.0 if j < 6 else (-1.0) ** (i + j + 2)
    third = [t for t in combinations(range(MORRIS_DIM), 3) if t[2] < 5]
    return first, second, np.array(third)


_MORRIS_FIRST, _MORRIS_SECOND, _MORRIS_THIRD = _morris_coefficients()
_MORRIS_RATIONAL = np.array([2, 4, 6])  # x3, x5, x7


def morris_omega(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    w = 2 * (x - 0.5)
    xr = x[..., _MORRIS_RATIONAL]
    w[..., _MORRIS_RATIONAL] = 2 * (1.2 * xr / (xr + 1) - 0.5)
    return w


def morris_function(x) -> np.ndarray:
    """Morris test function on ``[0, 1]^20``; ``x`` is ``(20,)`` or ``(N, 20)``.

    First-order weights are 20 for the first ten inputs, second-order -15
    among the first six, third-order -10 among the first five, one fourth-
    order term 5 on the first four; other first/second-order weights are
    ``(-1)^i`` / ``(-1)^(i+j)`` with 1-based indices.
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != MORRIS_DIM:
        raise ValueError(f"Morris function takes {MORRIS_DIM} inputs, got shape {x.shape}")
    if np.any((x < 0) | (x > 1)) or not np.all(np.isfinite(x)):
        raise DomainError("Morris function inputs must lie in [0, 1]")
    w = morris_omega(x)
    y = w @ _MORRIS_FIRST
    y = y + np.einsum("...i,ij,...j->...", w, _MORRIS_SECOND, w)
    t = _MORRIS_THIRD
    y = y - 10.0 * np.sum(w[..., t[:, 0]] * w[..., t[:, 1]] * w[..., t[:, 2]], axis=-1)
    y = y + 5.0 * w[..., 0] * w[..., 1] * w[..., 2] * w[..., 3]
    return y


@dataclass(frozen=True)
class OakleyOHaganData:
    a1: np.ndarray
    a2: np.ndarray
    a3: np.ndarray
    M: np.ndarray

    def __post_init__(self):
        for name in ("a1", "a2", "a3"):
            v = np.asarray(getattr(self, name), dtype=float)
            if v.shape != (OO_DIM,):
                raise ParseError(f"{name} must have {OO_DIM} entries, got shape {v.shape}")
            object.__setattr__(self, name, v)
        m = np.asarray(self.M, dtype=float)
        if m.shape != (OO_DIM, OO_DIM):
            raise ParseError(f"M must be {OO_DIM}x{OO_DIM}, got shape {m.shape}")
        object.__setattr__(self, "M", m)
        arrays = (self.a1, self.a2, self.a3, self.M)
        if not all(np.all(np.isfinite(a)) for a in arrays):
            raise ParseError("Oakley-O'Hagan data must be finite")

    def to_csv(self) -> str:
        rows = [self.a1, self.a2, self.a3, *self.M]
        return "".join(",".join(repr(float(v)) for v in r) + "\n" for r in rows)


def load_oo_data(path) -> OakleyOHaganData:
    """Read the 18x15 CSV: rows 1-3 are a1, a2, a3; rows 4-18 are M, row-major."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if any(cell.strip() for cell in r)]
    if len(rows) != 3 + OO_DIM:
        raise ParseError(f"{path}: expected {3 + OO_DIM} rows, found {len(rows)}")
    values = np.empty((len(rows), OO_DIM))
    for r, row in enumerate(rows, start=1):
        if len(row) != OO_DIM:
            raise ParseError(f"{path}: row {r} has {len(row)} columns, expected {OO_DIM}")
        for c, cell in enumerate(row, start=1):
            try:
                values[r - 1, c - 1] = float(cell)
            except ValueError:
                raise ParseError(f"{path}: row {r}, column {c}: not a number: {cell!r}") from None
    return OakleyOHaganData(values[0], values[1], values[2], values[3:])


def oakley_ohagan(x, data: OakleyOHaganData) -> np.ndarray:
    """``a1.x + a2.cos(x) + a3.sin(x) + x' M x`` for ``(15,)`` or ``(N, 15)`` inputs."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != OO_DIM:
        raise ValueError(f"Oakley-O'Hagan function takes {OO_DIM} inputs, got shape {x.shape}")
    return (
        x @ data.a1
        + np.cos(x) @ data.a2
        + np.sin(x) @ data.a3
        + np.einsum("...i,ij,...j->...", x, data.M, x)
    )


@dataclass(frozen=True)
class Benchmark:
    name: str
    func: Callable
    input: InputModel

    @property
    def dim(self) -> int:
        return self.input.dim

    @property
    def names(self) -> list[str]:
        return [f"X{i + 1}" for i in range(self.dim)]

    def __call__(self, x):
        return self.func(x)


DEFAULT_LINEAR = (1.0, 2.0, 3.0, 4.0, 5.0)


def linear_benchmark(coefficients=DEFAULT_LINEAR) -> Benchmark:
    """``y = sum c_i x_i`` with standard normal inputs; ``S_i^T = c_i^2 / sum c^2``."""
    c = np.asarray(coefficients, dtype=float)
    return Benchmark("linear", lambda x: np.asarray(x, dtype=float) @ c,
                     InputModel.iid(Gaussian(0.0, 1.0), c.size))


def morris_benchmark() -> Benchmark:
    return Benchmark("morris", morris_function, InputModel.iid(Uniform(0.0, 1.0), MORRIS_DIM))


def oakley_benchmark(data: OakleyOHaganData) -> Benchmark:
    return Benchmark("oakley", lambda x: oakley_ohagan(x, data),
                     InputModel.iid(Gaussian(0.0, 1.0), OO_DIM))
