"""Magic biunitary grids over matrix representations.

A coaction of a quantum permutation group on ``n`` points is described by an
``n x n`` grid ``a[i, j]`` of projections whose rows and columns sum to the
identity. Here the grid entries are concrete ``dim x dim`` matrices, stored as
a complex array of shape ``(n, n, dim, dim)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    ColSum,
    InternalDisagreement,
    LengthMismatch,
    NotBijection,
    NotProjection,
    PointCountMismatch,
    RowSum,
    ShapeError,
)
from .matrix_core import DEFAULT_TOL, adjoint, as_matrix, decode_matrix, encode_matrix, max_abs
from .metric_space import FiniteMetricSpace


@dataclass(frozen=True, eq=False)
class MagicUnitary:
    entries: np.ndarray

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def dim(self) -> int:
        return self.entries.shape[2]

    def __getitem__(self, ij: tuple[int, int]) -> np.ndarray:
        return self.entries[ij]

    def __repr__(self) -> str:
        return f"MagicUnitary(n={self.n}, dim={self.dim})"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "dim": self.dim,
            "entries": [[encode_matrix(self.entries[i, j]) for j in range(self.n)] for i in range(self.n)],
        }


def validate_magic(grid, tol: float = DEFAULT_TOL) -> MagicUnitary:
    """Check projection entries and row/column sums; return the grid.

    Errors name 1-based indices of the first failure, checking projections in
    row-major order, then row sums, then column sums.
    """
    try:
        a = np.asarray(grid, dtype=complex)
    except ValueError as exc:
        raise ShapeError(f"ragged grid: {exc}") from None
    if a.ndim == 2:
        a = a[:, :, None, None]
    if a.ndim != 4 or a.shape[0] != a.shape[1] or a.shape[2] != a.shape[3] or a.shape[0] == 0:
        raise ShapeError(f"expected an n x n grid of square matrices, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ShapeError("grid has non-finite entries")
    n, dim = a.shape[0], a.shape[2]

    herm = np.max(np.abs(a - adjoint(a)), axis=(2, 3))
    idem = np.max(np.abs(a - a @ a), axis=(2, 3))
    bad = np.argwhere((herm > tol) | (idem > tol))
    if bad.size:
        i, j = (int(t) for t in bad[0])
        raise NotProjection(i + 1, j + 1)
    eye = np.eye(dim)
    for i in range(n):
        if max_abs(a[i].sum(axis=0) - eye) > tol:
            raise RowSum(i + 1)
    for j in range(n):
        if max_abs(a[:, j].sum(axis=0) - eye) > tol:
            raise ColSum(j + 1)
    a = a.copy()
    a.setflags(write=False)
    return MagicUnitary(a)


def from_permutation(sigma: Sequence[int]) -> MagicUnitary:
    """Classical grid with ``a[i, j] = 1`` iff ``sigma[i] == j`` (0-based images)."""
    sigma = [int(s) for s in sigma]
    n = len(sigma)
    if sorted(sigma) != list(range(n)):
        raise NotBijection(f"{sigma} is not a permutation of 0..{n - 1}")
    a = np.zeros((n, n, 1, 1), dtype=complex)
    a[np.arange(n), sigma, 0, 0] = 1
    return validate_magic(a)


def two_block_quantum(p, q, tol: float = DEFAULT_TOL) -> MagicUnitary:
    """Four-point grid built from two projections ``p`` and ``q``.

    Rows are ``[p, 1-p, 0, 0]``, ``[1-p, p, 0, 0]``, ``[0, 0, q, 1-q]``,
    ``[0, 0, 1-q, q]``; noncommuting ``p, q`` make it genuinely quantum.
    """
    p, q = as_matrix(p), as_matrix(q)
    if p.shape != q.shape or p.shape[0] != p.shape[1]:
        raise ShapeError(f"p and q must be square of equal size, got {p.shape}, {q.shape}")
    for name, m in (("p", p), ("q", q)):
        if max_abs(m - adjoint(m)) > tol or max_abs(m - m @ m) > tol:
            raise NotProjection(1 if name == "p" else 3, 1 if name == "p" else 3,
                                detail=f"{name} is not a projection")
    one = np.eye(p.shape[0])
    zero = np.zeros_like(p)
    grid = [
        [p, one - p, zero, zero],
        [one - p, p, zero, zero],
        [zero, zero, q, one - q],
        [zero, zero, one - q, q],
    ]
    return validate_magic(np.array(grid), tol)


def star_product(a: MagicUnitary, c: MagicUnitary) -> MagicUnitary:
    """Grid of the composed coaction: ``x[i, j] = sum_k a[i, k] (x) c[k, j]``."""
    if a.n != c.n:
        raise PointCountMismatch(f"{a.n} points vs {c.n} points")
    x = np.einsum("ikab,kjcd->ijacbd", a.entries, c.entries)
    x = x.reshape(a.n, a.n, a.dim * c.dim, a.dim * c.dim)
    # slack grows with the tensor size
    return validate_magic(x, tol=DEFAULT_TOL * max(1, a.n))


def antipode_grid(a: MagicUnitary) -> MagicUnitary:
    """Transpose of the grid (entry ``(i, j)`` becomes ``a[j, i]``)."""
    t = np.swapaxes(a.entries, 0, 1).copy()
    t.setflags(write=False)
    return MagicUnitary(t)


@dataclass(frozen=True)
class CommutationReport:
    commutes: bool
    residual: float
    violations: tuple[tuple[int, int, int, int], ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "commutes": self.commutes,
            "residual": self.residual,
            "violations": [[i + 1, j + 1, k + 1, l + 1] for i, j, k, l in self.violations],
        }


def commutator_residual(a: MagicUnitary, space: FiniteMetricSpace) -> float:
    """Max-entry norm of ``a d - d a`` with ``d`` acting by scalar blocks."""
    d = space.d
    ad = np.einsum("ixab,xj->ijab", a.entries, d)
    da = np.einsum("ix,xjab->ijab", d, a.entries)
    return max_abs(ad - da)


def product_violations(a: MagicUnitary, space: FiniteMetricSpace, tol: float = DEFAULT_TOL):
    """Quadruples ``(i, j, k, l)`` with ``d(i,k) != d(j,l)`` and ``a_ij a_kl != 0``.

    Lexicographically sorted, 0-based.
    """
    n, d, e = a.n, space.d, a.entries
    # mismatch[i, j, k, l] = d(i,k) != d(j,l)
    mismatch = d[:, None, :, None] != d[None, :, None, :]
    found = []
    for i in range(n):
        for j in range(n):
            if not mismatch[i, j].any() or max_abs(e[i, j]) <= tol:
                continue
            prods = np.max(np.abs(np.einsum("ab,klbc->klac", e[i, j], e)), axis=(2, 3))
            for k, l in np.argwhere(mismatch[i, j] & (prods > tol)):
                found.append((i, j, int(k), int(l)))
    return tuple(found)


def check_commutation(a: MagicUnitary, space: FiniteMetricSpace, tol: float = DEFAULT_TOL) -> CommutationReport:
    """Decide ``a d == d a`` by two independent routes and cross-check them.

    The matrix residual route and the vanishing-products route are
    equivalent for magic unitaries; a disagreement raises
    :class:`InternalDisagreement`.
    """
    if a.n != space.n:
        raise PointCountMismatch(f"grid has {a.n} points, metric has {space.n}")
    residual = commutator_residual(a, space)
    violations = product_violations(a, space, tol)
    by_residual = residual <= a.n ** 2 * tol
    by_products = not violations
    if by_residual != by_products:
        raise InternalDisagreement(
            f"residual {residual:.3e} says commutes={by_residual}, "
            f"{len(violations)} violating products say commutes={by_products}"
        )
    return CommutationReport(by_products, residual, violations)


def functional_preservation_check(a: MagicUnitary, weights, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``sum_i w_i a_ij == w_j 1`` for every column ``j``."""
    w = np.asarray(weights, dtype=float)
    if w.shape != (a.n,):
        raise LengthMismatch(f"weights have shape {w.shape}, expected ({a.n},)")
    lhs = np.einsum("i,ijab->jab", w, a.entries)
    rhs = w[:, None, None] * np.eye(a.dim)
    return max_abs(lhs - rhs) <= tol


def decode_magic(data: dict, tol: float = DEFAULT_TOL) -> MagicUnitary:
    n, dim = data["n"], data["dim"]
    rows = data["entries"]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ShapeError(f"entries must be an {n} x {n} grid")
    grid = np.zeros((n, n, dim, dim), dtype=complex)
    for i, row in enumerate(rows):
        for j, m in enumerate(row):
            m = decode_matrix(m)
            if m.shape != (dim, dim):
                raise ShapeError(f"entry ({i + 1},{j + 1}) has shape {m.shape}, expected ({dim},{dim})")
            grid[i, j] = m
    return validate_magic(grid, tol)
