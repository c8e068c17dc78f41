"""Finite metric spaces and the Lipschitz seminorm on functions over them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    AsymmetryError,
    DiagonalError,
    LengthMismatch,
    NonPositiveError,
    NonSquare,
    ShapeError,
    TriangleError,
)

# Slack absorbing decimal rounding in the input distances.
METRIC_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """A validated metric on the points ``0..n-1``.

    Build instances through :func:`validate_metric`; the distance matrix is
    canonicalized so that distances equal within ``METRIC_TOL`` are stored as
    the same float, which makes level membership an exact comparison.
    """

    d: np.ndarray

    @property
    def n(self) -> int:
        return self.d.shape[0]

    def __repr__(self) -> str:
        return f"FiniteMetricSpace(n={self.n})"

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d.tolist()}


def _canonicalize(d: np.ndarray, tol: float) -> np.ndarray:
    flat = np.sort(d.ravel())
    reps = [flat[0]]
    for v in flat[1:]:
        if v - reps[-1] > tol:
            reps.append(v)
    reps = np.asarray(reps)
    idx = np.searchsorted(reps, d, side="right") - 1
    return reps[idx]


def validate_metric(raw, tol: float = METRIC_TOL) -> FiniteMetricSpace:
    """Check the metric axioms on a square matrix and return the space.

    Axioms are checked in the order diagonal, symmetry, positivity,
    triangle inequality; the first failure raises with 1-based points.
    ``TriangleError(i, j, k)`` means ``d(i,k) > d(i,j) + d(j,k)``.
    """
    d = np.asarray(raw, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise NonSquare(f"distance matrix must be square, got shape {d.shape}")
    n = d.shape[0]
    if n == 0:
        raise ShapeError("metric space needs at least one point")
    if not np.all(np.isfinite(d)):
        raise ShapeError("distance matrix has non-finite entries")

    for i in range(n):
        if abs(d[i, i]) > tol:
            raise DiagonalError(i + 1, detail=f"d({i + 1},{i + 1}) = {d[i, i]}")
    for i in range(n):
        for j in range(i + 1, n):
            if abs(d[i, j] - d[j, i]) > tol:
                raise AsymmetryError(i + 1, j + 1)
    for i in range(n):
        for j in range(n):
            if i != j and d[i, j] <= tol:
                raise NonPositiveError(i + 1, j + 1)

    # d[i, k] - d[i, j] - d[j, k] over all (i, j, k)
    excess = d[:, None, :] - d[:, :, None] - d[None, :, :]
    bad = np.argwhere(excess > tol)
    if bad.size:
        i, j, k = (int(t) for t in bad[0])
        raise TriangleError(
            i + 1, j + 1, k + 1,
            detail=f"d({i + 1},{k + 1}) = {d[i, k]} > {d[i, j]} + {d[j, k]}",
        )

    d = (d + d.T) / 2
    np.fill_diagonal(d, 0.0)
    d = _canonicalize(d, tol)
    np.fill_diagonal(d, 0.0)
    d.setflags(write=False)
    return FiniteMetricSpace(d)


def distance_levels(space: FiniteMetricSpace) -> tuple[float, ...]:
    """Sorted distinct distances, starting with 0."""
    return tuple(float(v) for v in np.unique(space.d))


def _check_point(space: FiniteMetricSpace, i: int) -> None:
    if not 0 <= i < space.n:
        raise IndexError(f"point {i + 1} outside 1..{space.n}")


def sphere(space: FiniteMetricSpace, i: int, level: int) -> frozenset[int]:
    """Points at the ``level``-th smallest distance from ``i``."""
    _check_point(space, i)
    levels = distance_levels(space)
    if not 0 <= level < len(levels):
        raise IndexError(f"level {level} outside 0..{len(levels) - 1}")
    return frozenset(int(j) for j in np.flatnonzero(space.d[i] == levels[level]))


def distance_function(space: FiniteMetricSpace, j: int) -> np.ndarray:
    """The function ``x -> d(x, j)`` as a complex vector."""
    _check_point(space, j)
    return space.d[:, j].astype(complex)


def lipnorm(space: FiniteMetricSpace, f: Sequence[complex] | np.ndarray) -> float:
    """Lipschitz constant of ``f`` with respect to ``d`` (0 when n == 1)."""
    f = np.asarray(f, dtype=complex)
    if f.shape != (space.n,):
        raise LengthMismatch(f"function has shape {f.shape}, expected ({space.n},)")
    if space.n < 2:
        return 0.0
    iu = np.triu_indices(space.n, 1)
    diff = np.abs(f[:, None] - f[None, :])[iu]
    return float(np.max(diff / space.d[iu]))
