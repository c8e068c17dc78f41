"""The 1-isometry inequality for a grid acting on a finite metric space.

For a state ``w`` the grid pushes a function ``f`` forward to
``g(j) = sum_i f(i) w(a[j, i])``; the action is 1-isometric when
``L(g) <= L(f)`` for every state and every ``f``. Commutation with ``d`` is
the exact criterion. This module corroborates it in both directions: transport
plans certify the inequality pair by pair, and witness states refute it.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import CommutationRequired, Inconsistent, LengthMismatch, PointCountMismatch
from .magic_unitary import CommutationReport, MagicUnitary, check_commutation
from .matrix_core import (
    DEFAULT_TOL,
    State,
    conjugate_state,
    expectations,
    random_pure_state,
)
from .metric_space import FiniteMetricSpace, distance_function, distance_levels, lipnorm
from .transport import CutCertificate, TransportPlan, coupling_for_pair

DEFAULT_SAMPLES = 200
DEFAULT_RANDOM_STATES = 50
CHAIN_TOL = 1e-10


def _check_sizes(a: MagicUnitary, space: FiniteMetricSpace, state: State | None = None) -> None:
    if a.n != space.n:
        raise PointCountMismatch(f"grid has {a.n} points, metric has {space.n}")
    if state is not None and state.dim != a.dim:
        raise PointCountMismatch(f"state dim {state.dim} vs grid dim {a.dim}")


def transition_matrix(a: MagicUnitary, state: State) -> np.ndarray:
    """``W[j, i] = state(a[j, i])``: a doubly stochastic matrix."""
    return expectations(state, a.entries).real


def pushforward(a: MagicUnitary, state: State, f) -> np.ndarray:
    f = np.asarray(f, dtype=complex)
    if f.shape != (a.n,):
        raise LengthMismatch(f"function has shape {f.shape}, expected ({a.n},)")
    return transition_matrix(a, state) @ f


def lipdefect(a: MagicUnitary, space: FiniteMetricSpace, state: State, f) -> float:
    """``L(pushforward) - L(f)``; positive values refute 1-isometry."""
    _check_sizes(a, space, state)
    return lipnorm(space, pushforward(a, state, f)) - lipnorm(space, f)


@dataclass(frozen=True, eq=False)
class PairCertificate:
    """Evaluated chain ``|g(x)-g(y)| <= sum lam_ij |f(i)-f(j)| <= L(f) d(x,y)``.

    ``gap`` is ``g(x) - g(y)`` and ``transported`` is
    ``sum lam_ij (f(i) - f(j))``; the two agree when the plan has the right
    marginals.
    """

    x: int
    y: int
    plan: TransportPlan
    gap: complex
    transported: complex
    lhs: float
    middle: float
    bound: float

    def holds(self, tol: float = CHAIN_TOL) -> bool:
        return (
            abs(self.gap - self.transported) <= tol
            and self.lhs <= self.middle + tol
            and self.middle <= self.bound + tol
        )

    def to_json(self) -> dict:
        return {
            "pair": [self.x + 1, self.y + 1],
            "plan": self.plan.lam.tolist(),
            "lhs": self.lhs,
            "middle": self.middle,
            "bound": self.bound,
        }


def certify_pair(
    a: MagicUnitary, space: FiniteMetricSpace, state: State, f, x: int, y: int,
    tol: float = DEFAULT_TOL, report: CommutationReport | None = None,
) -> PairCertificate:
    _check_sizes(a, space, state)
    if report is None:
        report = check_commutation(a, space, tol)
    if not report.commutes:
        raise CommutationRequired("pair certificates need a grid commuting with d")
    f = np.asarray(f, dtype=complex)
    result = coupling_for_pair(a, space, state, x, y, tol)
    if isinstance(result, CutCertificate):
        raise Inconsistent(f"commuting grid produced an infeasible coupling for pair ({x + 1},{y + 1})")
    lam = result.lam
    g = pushforward(a, state, f)
    diff = f[:, None] - f[None, :]
    return PairCertificate(
        x=x,
        y=y,
        plan=result,
        gap=complex(g[x] - g[y]),
        transported=complex(np.sum(lam * diff)),
        lhs=float(abs(g[x] - g[y])),
        middle=float(np.sum(lam * np.abs(diff))),
        bound=lipnorm(space, f) * float(space.d[x, y]),
    )


@dataclass(frozen=True, eq=False)
class Witness:
    state: State
    f: np.ndarray
    defect: float
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "omega": self.state.to_json(),
            "f": [[float(v.real), float(v.imag)] for v in self.f],
            "defect": self.defect,
            "provenance": self.provenance,
        }


def candidate_functions(space: FiniteMetricSpace, include_spheres: bool = True):
    """Distance functions ``D_m``, then sphere indicators by ``(m, level)``."""
    out = [(np.asarray(distance_function(space, m)), {"kind": "distance", "point": m + 1})
           for m in range(space.n)]
    if include_spheres:
        levels = distance_levels(space)
        seen: set[bytes] = set()
        for m in range(space.n):
            for gamma, level in enumerate(levels):
                ind = (space.d[m] == level).astype(complex)
                key = ind.tobytes()
                if not ind.any() or key in seen:
                    continue
                seen.add(key)
                out.append((ind, {"kind": "sphere", "point": m + 1, "level": gamma}))
    return out


def _witness_state(a: MagicUnitary, quad, tol: float) -> State | None:
    i, j, k, l = quad
    p = a.entries[i, j]
    b = p @ a.entries[k, l] @ p
    vals, vecs = np.linalg.eigh((b + b.conj().T) / 2)
    if vals[-1] <= tol:
        return None
    return conjugate_state(State.pure(vecs[:, -1]), p, tol)


def witness_search(
    a: MagicUnitary, space: FiniteMetricSpace, tol: float = DEFAULT_TOL, *,
    n_random: int = DEFAULT_RANDOM_STATES, seed: int = 0, include_spheres: bool = True,
    report: CommutationReport | None = None,
) -> Witness | None:
    """Look for a state and a function whose pushforward has a larger Lipschitz constant.

    States come first from each violating quadruple ``(i, j, k, l)``: the top
    eigenvector of ``a_ij a_kl a_ij`` conjugated by ``a_ij``; then from
    ``n_random`` seeded random pure states. ``None`` means no candidate
    violated the inequality, which does not prove isometry.
    """
    _check_sizes(a, space)
    if report is None:
        report = check_commutation(a, space, tol)
    functions = candidate_functions(space, include_spheres)
    tried: set[bytes] = set()

    def scan(state: State, provenance: dict) -> Witness | None:
        key = np.round(state.rho, 10).tobytes()
        if key in tried:
            return None
        tried.add(key)
        w = transition_matrix(a, state)
        for f, fdesc in functions:
            defect = lipnorm(space, w @ f) - lipnorm(space, f)
            if defect > tol:
                # re-derive through the public path before trusting it
                defect = lipdefect(a, space, state, f)
                if defect > tol:
                    return Witness(state, f, defect, {**provenance, "function": fdesc})
        return None

    for quad in report.violations:
        state = _witness_state(a, quad, tol)
        if state is None:
            continue
        found = scan(state, {"route": "quadruple", "quadruple": [q + 1 for q in quad]})
        if found:
            return found
    rng = np.random.default_rng(seed)
    for r in range(n_random):
        found = scan(random_pure_state(a.dim, rng), {"route": "random", "seed": seed, "draw": r})
        if found:
            return found
    return None


def sample_pairs(n: int, dim: int, samples: int, seed: int, space: FiniteMetricSpace):
    """Deterministic (state, f) draws: distance functions alternate with random ``f``."""
    rng = np.random.default_rng(seed)
    out = []
    for s in range(samples):
        state = random_pure_state(dim, rng)
        if s % 2 == 0:
            f = distance_function(space, (s // 2) % n)
        else:
            f = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        out.append((state, np.asarray(f)))
    return out


@dataclass(frozen=True, eq=False)
class Verdict:
    isometric: bool
    report: CommutationReport
    max_defect: float | None = None
    samples: int = 0
    certificates: tuple[PairCertificate, ...] = ()
    witness: Witness | None = None

    @property
    def label(self) -> str:
        return "isometric" if self.isometric else "not_isometric"

    def to_json(self) -> dict:
        out = {
            "verdict": self.label,
            "commutation": self.report.to_json(),
        }
        if self.isometric:
            out["corroboration"] = {"samples": self.samples, "max_defect": self.max_defect}
            out["certificates"] = [c.to_json() for c in self.certificates]
        else:
            out["witness"] = self.witness.to_json() if self.witness else None
            if self.witness is None:
                out["witness_status"] = "no witness found among enumerated candidates"
        return out


def decide_isometric(
    a: MagicUnitary, space: FiniteMetricSpace, tol: float = DEFAULT_TOL, *,
    samples: int = DEFAULT_SAMPLES, seed: int = 0, n_random: int = DEFAULT_RANDOM_STATES,
    jobs: int = 1,
) -> Verdict:
    """Commutation verdict plus corroboration.

    Commuting grids get ``samples`` random defect checks and transport
    certificates for every pair ``x < y`` under the first sampled state and
    function; a positive defect or an infeasible coupling raises
    :class:`Inconsistent`. Non-commuting grids get a :func:`witness_search`.
    """
    _check_sizes(a, space)
    report = check_commutation(a, space, tol)
    if not report.commutes:
        witness = witness_search(a, space, tol, n_random=n_random, seed=seed, report=report)
        return Verdict(False, report, witness=witness)

    draws = sample_pairs(a.n, a.dim, samples, seed, space)

    def defect(draw):
        return lipdefect(a, space, draw[0], draw[1])

    if jobs > 1 and draws:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            defects = list(pool.map(defect, draws))
    else:
        defects = [defect(d) for d in draws]
    max_defect = max(defects, default=0.0)
    if max_defect > tol:
        raise Inconsistent(f"commuting grid has sampled defect {max_defect:.3e}")

    certificates = []
    if draws:
        state, f = draws[0]
        for x in range(a.n):
            for y in range(x + 1, a.n):
                cert = certify_pair(a, space, state, f, x, y, tol, report)
                if not cert.holds():
                    raise Inconsistent(f"certificate chain fails for pair ({x + 1},{y + 1})")
                certificates.append(cert)
    return Verdict(True, report, max_defect, len(draws), tuple(certificates))

