"""Constrained couplings via max-flow, and Hall-condition certificates.

Given marginals ``alpha``, ``beta`` (each summing to 1) and an allowed
relation ``allowed[i, j]``, a coupling ``lam`` with row sums ``alpha``, column
sums ``beta`` and support inside ``allowed`` exists iff every subset ``Z`` of
rows satisfies ``alpha(Z) <= beta(N(Z))``. :func:`solve_transport` decides
this with a max-flow on the bipartite network ``s -> l_i -> r_j -> t`` and
:func:`hall_check` by enumerating subsets.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import InputError, PointCountMismatch, ShapeError
from .magic_unitary import MagicUnitary
from .matrix_core import DEFAULT_TOL, State, expectations
from .metric_space import FiniteMetricSpace

# Residual capacities at or below this are treated as saturated.
_RESIDUAL_EPS = 1e-13
HALL_EXHAUSTIVE_MAX_N = 20


@dataclass(frozen=True, eq=False)
class CouplingProblem:
    alpha: np.ndarray
    beta: np.ndarray
    allowed: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        alpha = np.asarray(self.alpha, dtype=float)
        beta = np.asarray(self.beta, dtype=float)
        allowed = np.asarray(self.allowed, dtype=bool)
        n = alpha.shape[0] if alpha.ndim == 1 else -1
        if alpha.ndim != 1 or beta.shape != (n,) or allowed.shape != (n, n):
            raise ShapeError(
                f"alpha {alpha.shape}, beta {beta.shape}, allowed {allowed.shape} are inconsistent"
            )
        tol = self.tol * max(n, 1)
        for name, v in (("alpha", alpha), ("beta", beta)):
            if not np.all(np.isfinite(v)) or v.min(initial=0.0) < -self.tol:
                raise InputError(f"{name} must be finite and nonnegative")
            if abs(v.sum() - 1) > tol:
                raise InputError(f"{name} sums to {v.sum():.12g}, expected 1")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "allowed", allowed)

    @property
    def n(self) -> int:
        return self.alpha.shape[0]

    def neighbourhood(self, rows) -> list[int]:
        rows = list(rows)
        if not rows:
            return []
        return [int(j) for j in np.flatnonzero(self.allowed[rows].any(axis=0))]

    def deficit(self, rows) -> float:
        """``alpha(Z) - beta(N(Z))``."""
        rows = list(rows)
        return float(self.alpha[rows].sum() - self.beta[self.neighbourhood(rows)].sum())


@dataclass(frozen=True, eq=False)
class TransportPlan:
    lam: np.ndarray

    def check(self, problem: CouplingProblem) -> None:
        """Raise ``AssertionError`` unless marginals and support hold within ``n * tol``."""
        tol = problem.n * problem.tol
        assert np.all(self.lam >= -problem.tol), "negative mass"
        assert np.max(np.abs(self.lam.sum(axis=1) - problem.alpha)) <= tol, "row marginals"
        assert np.max(np.abs(self.lam.sum(axis=0) - problem.beta)) <= tol, "column marginals"
        assert np.all(self.lam[~problem.allowed] <= problem.tol), "mass outside support"

    def to_json(self) -> dict:
        return {"plan": self.lam.tolist()}


@dataclass(frozen=True)
class CutCertificate:
    """Rows ``Z`` (0-based) whose mass exceeds that of their neighbourhood."""

    rows: tuple[int, ...]
    deficit: float

    def verify(self, problem: CouplingProblem) -> bool:
        return problem.deficit(self.rows) > 0 and abs(problem.deficit(self.rows) - self.deficit) <= 1e-12

    def to_json(self) -> dict:
        return {"Z": [i + 1 for i in self.rows], "deficit": self.deficit}


def hall_check(problem: CouplingProblem) -> CutCertificate | None:
    """Return ``None`` if the Hall inequalities hold, else a violating subset.

    For ``n <= 20`` every subset is enumerated and the certificate is the
    maximum-deficit subset, ties broken by size and then lexicographically.
    Larger problems fall back to the min cut of :func:`solve_transport`.
    """
    n = problem.n
    slack = n * problem.tol
    if n > HALL_EXHAUSTIVE_MAX_N:
        result = solve_transport(problem)
        return result if isinstance(result, CutCertificate) else None

    # Subset sums over bitmasks, built by doubling: bit i <-> row i.
    alpha_sum = np.zeros(1)
    beta_sum = np.zeros(1)
    nbr = np.zeros(1, dtype=np.int64)
    nbr_masks = (problem.allowed.astype(np.int64) << np.arange(n)).sum(axis=1)
    for i in range(n):
        alpha_sum = np.concatenate([alpha_sum, alpha_sum + problem.alpha[i]])
        beta_sum = np.concatenate([beta_sum, beta_sum + problem.beta[i]])
        nbr = np.concatenate([nbr, nbr | nbr_masks[i]])
    deficits = alpha_sum - beta_sum[nbr]
    best = deficits.max()
    if best <= slack:
        return None
    candidates = np.flatnonzero(deficits >= best - 1e-12)
    subsets = [tuple(i for i in range(n) if (m >> i) & 1) for m in candidates]
    rows = min(subsets, key=lambda z: (len(z), z))
    return CutCertificate(rows, problem.deficit(rows))


class _Network:
    """Residual graph with deterministic adjacency order."""

    def __init__(self, size: int):
        self.cap = np.zeros((size, size))
        self.flow = np.zeros((size, size))
        self.adj: list[list[int]] = [[] for _ in range(size)]

    def add_edge(self, u: int, v: int, capacity: float) -> None:
        self.cap[u, v] += capacity
        if v not in self.adj[u]:
            self.adj[u].append(v)
        if u not in self.adj[v]:
            self.adj[v].append(u)

    def residual(self, u: int, v: int) -> float:
        return self.cap[u, v] - self.flow[u, v]

    def _bfs(self, s: int) -> list[int | None]:
        parent: list[int | None] = [None] * len(self.adj)
        parent[s] = s
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in self.adj[u]:
                if parent[v] is None and self.residual(u, v) > _RESIDUAL_EPS:
                    parent[v] = u
                    queue.append(v)
        return parent

    def max_flow(self, s: int, t: int) -> float:
        """Shortest augmenting paths (Edmonds-Karp)."""
        value = 0.0
        while True:
            parent = self._bfs(s)
            if parent[t] is None:
                return value
            path = []
            v = t
            while v != s:
                path.append((parent[v], v))
                v = parent[v]
            push = min(self.residual(u, v) for u, v in path)
            for u, v in path:
                self.flow[u, v] += push
                self.flow[v, u] -= push
            value += push

    def reachable(self, s: int) -> set[int]:
        return {v for v, p in enumerate(self._bfs(s)) if p is not None}


def solve_transport(problem: CouplingProblem) -> TransportPlan | CutCertificate:
    """Max-flow on the network ``s -> l_i (alpha_i) -> r_j (1) -> t (beta_j)``.

    A flow of value at least ``1 - n * tol`` is read off as the plan
    ``lam[i, j] = flow(l_i, r_j)``; otherwise the rows on the source side of
    the final residual graph form the returned certificate.
    """
    n = problem.n
    s, t = 0, 2 * n + 1
    net = _Network(2 * n + 2)
    for i in range(n):
        net.add_edge(s, 1 + i, max(problem.alpha[i], 0.0))
    for i in range(n):
        for j in range(n):
            if problem.allowed[i, j]:
                net.add_edge(1 + i, 1 + n + j, 1.0)
    for j in range(n):
        net.add_edge(1 + n + j, t, max(problem.beta[j], 0.0))

    value = net.max_flow(s, t)
    if value >= 1 - n * problem.tol:
        lam = np.clip(net.flow[1:n + 1, n + 1:2 * n + 1], 0.0, None)
        return TransportPlan(lam)
    source_side = net.reachable(s)
    rows = tuple(i for i in range(n) if 1 + i in source_side)
    return CutCertificate(rows, problem.deficit(rows))


def coupling_problem_for_pair(
    a: MagicUnitary, space: FiniteMetricSpace, state: State, x: int, y: int,
    tol: float = DEFAULT_TOL,
) -> CouplingProblem:
    """Marginals ``state(a[x, i])``, ``state(a[y, j])``; support ``d(i,j) == d(x,y)``."""
    if a.n != space.n:
        raise PointCountMismatch(f"grid has {a.n} points, metric has {space.n}")
    alpha = expectations(state, a.entries[x]).real
    beta = expectations(state, a.entries[y]).real
    allowed = space.d == space.d[x, y]
    return CouplingProblem(np.clip(alpha, 0, None), np.clip(beta, 0, None), allowed, tol)


def coupling_for_pair(
    a: MagicUnitary, space: FiniteMetricSpace, state: State, x: int, y: int,
    tol: float = DEFAULT_TOL,
) -> TransportPlan | CutCertificate:
    return solve_transport(coupling_problem_for_pair(a, space, state, x, y, tol))
