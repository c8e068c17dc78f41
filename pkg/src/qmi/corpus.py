"""Named small metric spaces and seeded generators of test instances."""

from __future__ import annotations

import itertools

import numpy as np

from .magic_unitary import MagicUnitary, from_permutation, star_product, two_block_quantum
from .matrix_core import random_projection
from .metric_space import FiniteMetricSpace, validate_metric


def graph_metric(n: int, edges) -> np.ndarray:
    """Shortest-path metric of a connected graph on ``0..n-1``."""
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0)
    for u, v in edges:
        d[u, v] = d[v, u] = 1
    for k in range(n):
        d = np.minimum(d, d[:, k, None] + d[None, k, :])
    return d


def line_metric(positions) -> np.ndarray:
    x = np.asarray(positions, dtype=float)
    return np.abs(x[:, None] - x[None, :])


def cycle(n: int) -> np.ndarray:
    return graph_metric(n, [(i, (i + 1) % n) for i in range(n)])


def _raw_metrics() -> dict[str, np.ndarray]:
    return {
        "two_point": np.array([[0, 1], [1, 0]]),
        "path3": np.array([[0, 1, 2], [1, 0, 1], [2, 1, 0]]),
        "equilateral3": 1 - np.eye(3),
        "scalene3": np.array([[0, 2, 4], [2, 0, 3], [4, 3, 0]]),
        "two_cluster": np.array([[0, 1, 2, 2], [1, 0, 2, 2], [2, 2, 0, 1], [2, 2, 1, 0]]),
        "skewed_cluster": np.array([[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]),
        "path4": line_metric([0, 1, 2, 3]),
        "square4": cycle(4),
        "cycle5": cycle(5),
        "star5": graph_metric(5, [(0, k) for k in range(1, 5)]),
        "line5": line_metric([0, 1, 3, 7, 8]),
        "hexagon6": cycle(6),
        "k33": graph_metric(6, [(i, j) for i in range(3) for j in range(3, 6)]),
        "line6": line_metric([0, 1, 2, 4, 7, 11]),
    }


METRICS: dict[str, FiniteMetricSpace] = {name: validate_metric(d) for name, d in _raw_metrics().items()}


def metric(name: str) -> FiniteMetricSpace:
    return METRICS[name]


def metrics_up_to(n: int) -> dict[str, FiniteMetricSpace]:
    return {name: m for name, m in METRICS.items() if m.n <= n}


HALF = 0.5 * np.ones((2, 2))
E11 = np.diag([1.0, 0.0])


def skewed_two_block() -> MagicUnitary:
    """The noncommuting two-block grid used as the standard quantum counterexample."""
    return two_block_quantum(HALF, E11)


def generated_instances(seed: int = 0, random_blocks: int = 60, products: int = 50):
    """``(label, grid, space)`` triples.

    All permutations on the corpus metrics with at most four points, two-block
    grids with random projections of dimension up to 4 on every four-point
    metric, and star products of random pairs of the four-point grids.
    """
    rng = np.random.default_rng(seed)
    out = []
    for name, space in metrics_up_to(4).items():
        for sigma in itertools.permutations(range(space.n)):
            out.append((f"{name}:perm{sigma}", from_permutation(sigma), space))

    four = [name for name, m in METRICS.items() if m.n == 4]
    pool: dict[str, list[MagicUnitary]] = {name: [] for name in four}
    for r in range(random_blocks):
        name = four[r % len(four)]
        dim = int(rng.integers(1, 5))
        p = random_projection(dim, rng)
        # every third instance reuses p, which makes it commute on skewed metrics
        q = p if r % 3 == 0 else random_projection(dim, rng)
        a = two_block_quantum(p, q)
        pool[name].append(a)
        out.append((f"{name}:two_block{r}", a, METRICS[name]))

    for name in four:
        pool[name] += [from_permutation(s) for s in itertools.permutations(range(4))]
    for r in range(products):
        name = four[r % len(four)]
        i, j = rng.integers(0, len(pool[name]), size=2)
        a, c = pool[name][i], pool[name][j]
        if a.dim * c.dim > 16:
            c = from_permutation(range(4))
        out.append((f"{name}:star{r}", star_product(a, c), METRICS[name]))
    return out
