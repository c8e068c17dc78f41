"""Complex matrices, projections and density-matrix states."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch, InvalidState, NonSquare, NullConjugator

DEFAULT_TOL = 1e-9
STATE_TOL = 1e-10


def as_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    return m


def _require_square(m: np.ndarray) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {m.shape}")


def max_abs(m) -> float:
    """Max-entry norm; 0 for empty input."""
    m = np.asarray(m)
    return float(np.max(np.abs(m))) if m.size else 0.0


def adjoint(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def is_projection(m, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``m`` is self-adjoint and idempotent to within ``tol``."""
    m = as_matrix(m)
    _require_square(m)
    return max_abs(m - adjoint(m)) <= tol and max_abs(m - m @ m) <= tol


def is_unitary(m, tol: float = DEFAULT_TOL) -> bool:
    m = as_matrix(m)
    _require_square(m)
    eye = np.eye(m.shape[0])
    return max_abs(m @ adjoint(m) - eye) <= tol and max_abs(adjoint(m) @ m - eye) <= tol


@dataclass(frozen=True, eq=False)
class State:
    """A state on ``M_dim`` given by its density matrix; ``state(a) = tr(rho a)``."""

    rho: np.ndarray

    def __post_init__(self):
        rho = as_matrix(self.rho)
        _require_square(rho)
        if max_abs(rho - adjoint(rho)) > STATE_TOL:
            raise InvalidState("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1) > STATE_TOL:
            raise InvalidState(f"density matrix has trace {np.trace(rho).real:.6g}")
        if np.linalg.eigvalsh((rho + adjoint(rho)) / 2).min() < -STATE_TOL:
            raise InvalidState("density matrix has a negative eigenvalue")
        rho = rho.copy()
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    @classmethod
    def pure(cls, vector) -> State:
        v = np.asarray(vector, dtype=complex).ravel()
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))

    @classmethod
    def maximally_mixed(cls, dim: int) -> State:
        return cls(np.eye(dim) / dim)

    def __call__(self, a) -> complex:
        return state_expect(self, a)

    def mix(self, other: State, t: float) -> State:
        return State(t * self.rho + (1 - t) * other.rho)

    def to_json(self) -> dict:
        return {"dim": self.dim, "rho": encode_matrix(self.rho)}


def state_expect(state: State, a) -> complex:
    """``tr(rho a)``."""
    a = as_matrix(a)
    if a.shape != state.rho.shape:
        raise DimMismatch(f"operator shape {a.shape} vs state dim {state.dim}")
    return complex(np.sum(state.rho * a.T))


def expectations(state: State, blocks: np.ndarray) -> np.ndarray:
    """Evaluate the state on every trailing ``dim x dim`` block of an array."""
    if blocks.shape[-2:] != state.rho.shape:
        raise DimMismatch(f"blocks of shape {blocks.shape[-2:]} vs state dim {state.dim}")
    return np.einsum("ab,...ba->...", state.rho, blocks)


def conjugate_state(state: State, a, tol: float = DEFAULT_TOL) -> State:
    """The state ``x -> state(a* x a) / state(a* a)``."""
    a = as_matrix(a)
    if a.shape != state.rho.shape:
        raise DimMismatch(f"operator shape {a.shape} vs state dim {state.dim}")
    weight = state_expect(state, adjoint(a) @ a).real
    if weight <= tol:
        raise NullConjugator(f"state(a* a) = {weight:.3e} <= {tol:.1e}")
    rho = a @ state.rho @ adjoint(a)
    rho = (rho + adjoint(rho)) / 2
    return State(rho / np.trace(rho).real)


def random_pure_state(dim: int, rng: np.random.Generator) -> State:
    """Normalized complex standard-normal vector."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return State.pure(v)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def random_projection(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    if rank is None:
        rank = int(rng.integers(0, dim + 1))
    u = random_unitary(dim, rng)[:, :rank]
    p = u @ adjoint(u)
    return (p + adjoint(p)) / 2


# JSON encoding: complex numbers as [re, im]

def encode_matrix(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_complex(value) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    re, im = value
    return complex(re, im)


def decode_matrix(data) -> np.ndarray:
    rows = [[decode_complex(v) for v in row] for row in data]
    return np.array(rows, dtype=complex).reshape(len(rows), -1) if rows else np.zeros((0, 0), complex)


def decode_state(data: dict) -> State:
    rho = decode_matrix(data["rho"])
    if rho.shape != (data["dim"], data["dim"]):
        raise DimMismatch(f"rho has shape {rho.shape}, declared dim {data['dim']}")
    return State(rho)
