"""Classical isometry groups of finite metric spaces.

Permutations are tuples of 0-based images, ``sigma[i] = sigma(i)``; groups
are stored extensionally as sorted element tuples (identity first), which is
fine for the intended ``n <= 10``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import NotBijection, ShapeError
from .metric_space import FiniteMetricSpace

Perm = tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(n))


def compose(tau: Perm, sigma: Perm) -> Perm:
    """``tau o sigma``: apply ``sigma`` first."""
    return tuple(tau[s] for s in sigma)


def inverse(sigma: Perm) -> Perm:
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma):
        inv[s] = i
    return tuple(inv)


def _as_perm(sigma: Sequence[int]) -> Perm:
    sigma = tuple(int(s) for s in sigma)
    if sorted(sigma) != list(range(len(sigma))):
        raise NotBijection(f"{sigma} is not a permutation")
    return sigma


def is_isometry(sigma: Perm, space: FiniteMetricSpace) -> bool:
    d = space.d
    return bool((d[list(sigma)][:, list(sigma)] == d).all())


@dataclass(frozen=True)
class PermutationGroup:
    n: int
    elements: tuple[Perm, ...]

    @classmethod
    def from_elements(cls, n: int, elements: Iterable[Perm]) -> PermutationGroup:
        return cls(n, tuple(sorted(set(elements))))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, sigma) -> bool:
        return tuple(sigma) in set(self.elements)

    def is_group(self) -> bool:
        elems = set(self.elements)
        if identity(self.n) not in elems:
            return False
        return all(inverse(s) in elems for s in elems) and all(
            compose(t, s) in elems for s in elems for t in elems
        )

    def to_json(self) -> dict:
        return {"n": self.n, "order": self.order,
                "elements": [[s + 1 for s in sigma] for sigma in self.elements]}


def isometry_group(space: FiniteMetricSpace) -> PermutationGroup:
    """All distance-preserving permutations, by backtracking.

    A point may only be sent to a point with the same sorted distance
    profile, and every new assignment must preserve distances to the points
    already placed.
    """
    n, d = space.n, space.d
    profile = [tuple(sorted(d[i])) for i in range(n)]
    options = [[j for j in range(n) if profile[j] == profile[i]] for i in range(n)]
    found: list[Perm] = []
    image: list[int] = []
    used = [False] * n

    def extend(i: int) -> None:
        if i == n:
            found.append(tuple(image))
            return
        for j in options[i]:
            if used[j] or any(d[image[k], j] != d[k, i] for k in range(i)):
                continue
            used[j] = True
            image.append(j)
            extend(i + 1)
            image.pop()
            used[j] = False

    extend(0)
    group = PermutationGroup.from_elements(n, found)
    assert group.is_group()
    return group


def generated_group(gens: Sequence[Sequence[int]], n: int | None = None) -> PermutationGroup:
    """Closure of ``gens`` under composition (``n`` is required when ``gens`` is empty)."""
    perms = [_as_perm(g) for g in gens]
    sizes = {len(p) for p in perms}
    if n is not None:
        sizes.add(n)
    if len(sizes) > 1:
        raise ShapeError(f"generators act on different point counts: {sorted(sizes)}")
    if not sizes:
        raise ShapeError("need n when there are no generators")
    n = sizes.pop()
    seen = {identity(n)}
    frontier = [identity(n)]
    while frontier:
        nxt = []
        for g in frontier:
            for s in perms:
                h = compose(s, g)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return PermutationGroup.from_elements(n, seen)


def largest_isometric_subgroup(gens: Sequence[Sequence[int]], space: FiniteMetricSpace) -> PermutationGroup:
    """Elements of the generated group that preserve ``d``."""
    full = generated_group(gens, space.n)
    if full.n != space.n:
        raise ShapeError(f"generators act on {full.n} points, metric has {space.n}")
    sub = PermutationGroup.from_elements(space.n, (s for s in full.elements if is_isometry(s, space)))
    assert sub.is_group()
    return sub
