"""The quantum space ``M2(C) + C + C`` and its quantum symmetries.

Elements of ``B = M2 + C + C`` are triples ``(m, e, f)``. A representation of
the symmetry algebra is given by four matrices ``x, y, z, p`` subject to

* ``x^2 = -yz`` and ``2xx* + yy* + zz* = 1``,
* ``p`` a projection,
* ``x, y, z`` and their adjoints pairwise commuting.

The coaction sends ``e12`` to ``(e11 - e22) (x) x + e12 (x) z + e21 (x) y``
and ``(0,1,0)`` to ``(0,1,0) (x) p + (0,0,1) (x) (1-p)``; it is extended to
all of ``B`` as a unital *-homomorphism. An element of ``B (x) M_dim`` is
stored as a 2x2 grid of ``dim x dim`` blocks plus the two blocks sitting on
the scalar summands.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import CommutativityViolation, DimMismatch, NotProjection, NotUnitary, RelationViolation, ShapeError
from .matrix_core import (
    DEFAULT_TOL,
    State,
    adjoint,
    as_matrix,
    decode_matrix,
    encode_matrix,
    expectations,
    is_projection,
    is_unitary,
    max_abs,
    random_projection,
    random_pure_state,
    random_unitary,
)

BASIS_NAMES = ("e11", "e12", "e21", "e22", "(0,1,0)", "(0,0,1)")
# b = e12 is the element the coaction makes sensitive to x
WITNESS_PRIORITY = ("e12", "e11", "(0,1,0)", "e21", "e22", "(0,0,1)")


@dataclass(frozen=True, eq=False)
class TripleElement:
    m: np.ndarray
    e: complex = 0j
    f: complex = 0j

    def __post_init__(self):
        m = np.asarray(self.m, dtype=complex)
        if m.shape != (2, 2):
            raise ShapeError(f"matrix part must be 2x2, got {m.shape}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "e", complex(self.e))
        object.__setattr__(self, "f", complex(self.f))

    @classmethod
    def from_coords(cls, c) -> TripleElement:
        """From ``(a, b, c, d, e, f)`` with ``m = [[a, b], [c, d]]``."""
        c = np.asarray(c, dtype=complex)
        return cls(c[:4].reshape(2, 2), c[4], c[5])

    @classmethod
    def unit(cls) -> TripleElement:
        return cls(np.eye(2), 1, 1)

    @classmethod
    def basis(cls, name: str) -> TripleElement:
        return cls.from_coords(np.eye(6)[BASIS_NAMES.index(name)])

    def coords(self) -> np.ndarray:
        return np.concatenate([self.m.ravel(), [self.e, self.f]])

    def adjoint(self) -> TripleElement:
        return TripleElement(self.m.conj().T, np.conj(self.e), np.conj(self.f))

    def __add__(self, other: TripleElement) -> TripleElement:
        return TripleElement.from_coords(self.coords() + other.coords())

    def __mul__(self, s: complex) -> TripleElement:
        return TripleElement.from_coords(self.coords() * s)

    __rmul__ = __mul__

    def __matmul__(self, other: TripleElement) -> TripleElement:
        return TripleElement(self.m @ other.m, self.e * other.e, self.f * other.f)

    def to_json(self) -> dict:
        return {"m": encode_matrix(self.m), "e": [self.e.real, self.e.imag], "f": [self.f.real, self.f.imag]}


@dataclass(frozen=True, eq=False)
class TensorElement:
    """An element of ``B (x) M_dim``."""

    blocks: np.ndarray  # (2, 2, dim, dim)
    e: np.ndarray
    f: np.ndarray

    @property
    def dim(self) -> int:
        return self.e.shape[0]

    @classmethod
    def unit(cls, dim: int) -> TensorElement:
        eye = np.eye(dim, dtype=complex)
        blocks = np.zeros((2, 2, dim, dim), dtype=complex)
        blocks[0, 0] = blocks[1, 1] = eye
        return cls(blocks, eye, eye.copy())

    def __add__(self, other: TensorElement) -> TensorElement:
        return TensorElement(self.blocks + other.blocks, self.e + other.e, self.f + other.f)

    def __sub__(self, other: TensorElement) -> TensorElement:
        return TensorElement(self.blocks - other.blocks, self.e - other.e, self.f - other.f)

    def __mul__(self, s: complex) -> TensorElement:
        return TensorElement(self.blocks * s, self.e * s, self.f * s)

    __rmul__ = __mul__

    def __matmul__(self, other: TensorElement) -> TensorElement:
        blocks = np.einsum("rkab,kcbd->rcad", self.blocks, other.blocks)
        return TensorElement(blocks, self.e @ other.e, self.f @ other.f)

    def adjoint(self) -> TensorElement:
        return TensorElement(adjoint(np.swapaxes(self.blocks, 0, 1)), adjoint(self.e), adjoint(self.f))

    def distance(self, other: TensorElement) -> float:
        return max(max_abs(self.blocks - other.blocks), max_abs(self.e - other.e), max_abs(self.f - other.f))

    def to_json(self) -> dict:
        return {
            "blocks": [[encode_matrix(self.blocks[r, c]) for c in range(2)] for r in range(2)],
            "e": encode_matrix(self.e),
            "f": encode_matrix(self.f),
        }


@dataclass(frozen=True, eq=False)
class ARep:
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    p: np.ndarray

    @property
    def dim(self) -> int:
        return self.x.shape[0]

    def generators(self) -> dict[str, np.ndarray]:
        return {"x": self.x, "y": self.y, "z": self.z, "p": self.p}

    def to_json(self) -> dict:
        return {"dim": self.dim, **{k: encode_matrix(v) for k, v in self.generators().items()}}


def relation_residuals(x, y, z, p) -> dict[str, float]:
    eye = np.eye(x.shape[0])
    return {
        "x^2=-yz": max_abs(x @ x + y @ z),
        "2xx*+yy*+zz*=1": max_abs(2 * x @ adjoint(x) + y @ adjoint(y) + z @ adjoint(z) - eye),
        "p*=p=p^2": max(max_abs(p - adjoint(p)), max_abs(p - p @ p)),
    }


def make_arep(x, y, z, p, tol: float = DEFAULT_TOL) -> ARep:
    """Validate generator matrices against the defining relations."""
    mats = [as_matrix(v).copy() for v in (x, y, z, p)]
    shape = mats[0].shape
    if len(shape) != 2 or shape[0] != shape[1] or any(m.shape != shape for m in mats):
        raise ShapeError(f"generators must be square of equal size, got {[m.shape for m in mats]}")
    x, y, z, p = mats
    for name, res in relation_residuals(x, y, z, p).items():
        if res > tol:
            raise RelationViolation(name, res)
    named = {"x": x, "y": y, "z": z, "x*": adjoint(x), "y*": adjoint(y), "z*": adjoint(z)}
    for (na, a), (nb, b) in itertools.combinations(named.items(), 2):
        res = max_abs(a @ b - b @ a)
        if res > tol:
            raise CommutativityViolation((na, nb), res)
    for m in mats:
        m.setflags(write=False)
    return ARep(x, y, z, p)


def quotient_rep(u, proj, tol: float = DEFAULT_TOL) -> ARep:
    """Representation with ``x = y = 0``, ``z = u`` unitary and ``p = proj``."""
    u, proj = as_matrix(u), as_matrix(proj)
    if u.shape != proj.shape:
        raise ShapeError(f"u {u.shape} and p {proj.shape} differ in size")
    if not is_unitary(u, tol):
        raise NotUnitary("z must be unitary")
    if not is_projection(proj, tol):
        raise NotProjection(1, 1, detail="p is not a projection")
    zero = np.zeros_like(u)
    return make_arep(zero, zero.copy(), u, proj, tol)


def scalar_rep(x, y, z, p, tol: float = DEFAULT_TOL) -> ARep:
    return make_arep(*(np.array([[v]], dtype=complex) for v in (x, y, z, p)), tol=tol)


def trivial_rep() -> ARep:
    return scalar_rep(0, 0, 1, 1)


def _e12_image(rep: ARep) -> TensorElement:
    zero = np.zeros_like(rep.x)
    blocks = np.array([[rep.x, rep.z], [rep.y, -rep.x]])
    return TensorElement(blocks, zero, zero.copy())


def e11_image_closed_form(rep: ARep) -> TensorElement:
    """``e11 (x) (xx*+zz*) + e22 (x) (xx*+yy*) + e12 (x) (xy*-zx*) + e21 (x) (yx*-xz*)``."""
    x, y, z = rep.x, rep.y, rep.z
    xs, ys, zs = adjoint(x), adjoint(y), adjoint(z)
    blocks = np.array([[x @ xs + z @ zs, x @ ys - z @ xs], [y @ xs - x @ zs, x @ xs + y @ ys]])
    zero = np.zeros_like(x)
    return TensorElement(blocks, zero, zero.copy())


def coaction_basis(rep: ARep) -> dict[str, TensorElement]:
    """Images of the six basis elements of ``B``."""
    dim = rep.dim
    eye = np.eye(dim, dtype=complex)
    zblocks = np.zeros((2, 2, dim, dim), dtype=complex)
    a12 = _e12_image(rep)
    a21 = a12.adjoint()
    a11 = a12 @ a21
    a22 = a21 @ a12
    if __debug__:
        closed = e11_image_closed_form(rep)
        assert a11.distance(closed) <= 1e-9, "closed form for the image of e11 disagrees"
    a010 = TensorElement(zblocks, rep.p.copy(), eye - rep.p)
    a001 = TensorElement.unit(dim) - a11 - a22 - a010
    return {"e11": a11, "e12": a12, "e21": a21, "e22": a22, "(0,1,0)": a010, "(0,0,1)": a001}


def coaction_apply(rep: ARep, b: TripleElement, basis: dict[str, TensorElement] | None = None) -> TensorElement:
    if basis is None:
        basis = coaction_basis(rep)
    dim = rep.dim
    out = TensorElement(np.zeros((2, 2, dim, dim), complex), np.zeros((dim, dim), complex),
                        np.zeros((dim, dim), complex))
    for coef, name in zip(b.coords(), BASIS_NAMES):
        if coef != 0:
            out = out + basis[name] * coef
    return out


def lipnorm6(b: TripleElement) -> float:
    """``|a-d| + |b| + |c| + |a-e| + |a-f|`` for ``b = ([[a, b], [c, d]], e, f)``."""
    (a, bb), (c, d) = b.m
    return float(abs(a - d) + abs(bb) + abs(c) + abs(a - b.e) + abs(a - b.f))


def evaluate(state: State, t: TensorElement) -> TripleElement:
    """Apply a state to the ``M_dim`` leg."""
    if state.dim != t.dim:
        raise DimMismatch(f"state dim {state.dim} vs representation dim {t.dim}")
    return TripleElement(expectations(state, t.blocks), expectations(state, t.e), expectations(state, t.f))


def pushforward6(rep: ARep, state: State, b: TripleElement) -> TripleElement:
    if state.dim != rep.dim:
        raise DimMismatch(f"state dim {state.dim} vs representation dim {rep.dim}")
    return evaluate(state, coaction_apply(rep, b))


def defect6(rep: ARep, state: State, b: TripleElement) -> float:
    return lipnorm6(pushforward6(rep, state, b)) - lipnorm6(b)


@dataclass(frozen=True, eq=False)
class AdmissibilityReport:
    """``admissible`` is the criterion ``x = y = 0``; the rest is numerical evidence."""

    admissible: bool
    max_defect: float
    evaluations: int
    witness_b: TripleElement | None = None
    witness_state: State | None = None
    witness_defect: float | None = None
    witness_label: str | None = None

    def to_json(self) -> dict:
        out = {"admissible": self.admissible, "max_defect": self.max_defect, "evaluations": self.evaluations}
        if self.witness_b is not None:
            out["witness"] = {
                "b": self.witness_label,
                "element": self.witness_b.to_json(),
                "omega": self.witness_state.to_json(),
                "defect": self.witness_defect,
            }
        elif not self.admissible:
            out["witness"] = None
        return out


def _random_triple(rng: np.random.Generator) -> TripleElement:
    return TripleElement.from_coords(rng.standard_normal(6) + 1j * rng.standard_normal(6))


def _targeted_states(rep: ARep) -> list[State]:
    out = []
    for g in (rep.x, rep.y):
        h = g @ adjoint(g)
        vals, vecs = np.linalg.eigh((h + adjoint(h)) / 2)
        if vals[-1] > 0:
            out.append(State.pure(vecs[:, -1]))
    return out


def admissibility_check(rep: ARep, samples: int = 200, seed: int = 0, tol: float = DEFAULT_TOL) -> AdmissibilityReport:
    """Numerical corroboration of the ``x = y = 0`` admissibility criterion.

    Admissible representations are swept over ``samples`` seeded pure states,
    each paired with the six basis elements and one random element; the
    largest defect is reported. For the others a witness ``(b, state)`` with
    defect above ``tol`` is searched: basis elements in priority order
    against targeted and random states, then random elements.
    """
    basis = coaction_basis(rep)
    images = {name: basis[name] for name in BASIS_NAMES}
    rng = np.random.default_rng(seed)
    admissible = max_abs(rep.x) <= tol and max_abs(rep.y) <= tol
    evaluations = 0
    max_defect = -np.inf

    def score(state: State, b: TripleElement) -> float:
        nonlocal evaluations, max_defect
        evaluations += 1
        val = lipnorm6(evaluate(state, coaction_apply(rep, b, images))) - lipnorm6(b)
        max_defect = max(max_defect, val)
        return val

    if admissible:
        for _ in range(samples):
            state = random_pure_state(rep.dim, rng)
            for name in BASIS_NAMES:
                score(state, TripleElement.basis(name))
            score(state, _random_triple(rng))
        return AdmissibilityReport(True, float(max_defect), evaluations)

    states = _targeted_states(rep) + [random_pure_state(rep.dim, rng) for _ in range(samples)]
    for name in WITNESS_PRIORITY:
        b = TripleElement.basis(name)
        for state in states:
            val = score(state, b)
            if val > tol:
                return AdmissibilityReport(False, float(max_defect), evaluations, b, state, val, name)
    for r in range(samples):
        b = _random_triple(rng)
        state = states[r % len(states)]
        val = score(state, b)
        if val > tol:
            return AdmissibilityReport(False, float(max_defect), evaluations, b, state, val, "random")
    return AdmissibilityReport(False, float(max_defect), evaluations)


def comult_lift(r1: ARep, r2: ARep, tol: float = DEFAULT_TOL) -> ARep:
    """Representation ``(r1 (x) r2) o Delta`` on the tensor product space."""
    k = np.kron
    x1, y1, z1, p1 = r1.x, r1.y, r1.z, r1.p
    x2, y2, z2, p2 = r2.x, r2.y, r2.z, r2.p
    x1s, y1s, z1s = adjoint(x1), adjoint(y1), adjoint(z1)
    one1, one2 = np.eye(r1.dim), np.eye(r2.dim)
    x = k(z1 @ z1s - y1 @ y1s, x2) + k(x1, z2) + k(x1s, y2)
    y = k(y1 @ x1s - x1 @ z1s, 2 * x2) + k(y1, z2) + k(z1s, y2)
    z = k(x1 @ y1s - z1 @ x1s, 2 * x2) + k(z1, z2) + k(y1s, y2)
    p = k(p1, p2) + k(one1 - p1, one2 - p2)
    return make_arep(x, y, z, p, tol)


def trace_preservation_check(rep: ARep, tol: float = DEFAULT_TOL) -> bool:
    """Is ``psi(m, e, f) = tr(m) + e + f`` preserved on every basis element?"""
    eye = np.eye(rep.dim)
    for name, img in coaction_basis(rep).items():
        b = TripleElement.basis(name)
        psi_b = np.trace(b.m) + b.e + b.f
        lhs = img.blocks[0, 0] + img.blocks[1, 1] + img.e + img.f
        if max_abs(lhs - psi_b * eye) > tol:
            return False
    return True


def random_arep(dim: int, rng: np.random.Generator) -> ARep:
    """Random representation: a direct sum of characters in a random basis, any projection.

    Characters are parametrized by unit vectors ``(u, w)`` in ``C^2`` via
    ``x = uw``, ``y = -u^2``, ``z = w^2``, which satisfy both relations.
    """
    uw = rng.standard_normal((dim, 2)) + 1j * rng.standard_normal((dim, 2))
    uw /= np.linalg.norm(uw, axis=1, keepdims=True)
    u, w = uw[:, 0], uw[:, 1]
    v = random_unitary(dim, rng)
    conj = lambda diag: v @ np.diag(diag) @ adjoint(v)  # noqa: E731
    return make_arep(conj(u * w), conj(-u ** 2), conj(w ** 2), random_projection(dim, rng))


def random_quotient_rep(dim: int, rng: np.random.Generator) -> ARep:
    return quotient_rep(random_unitary(dim, rng), random_projection(dim, rng))


def decode_arep(data: dict, tol: float = DEFAULT_TOL) -> ARep:
    mats = [decode_matrix(data[k]) for k in ("x", "y", "z", "p")]
    if mats[0].shape != (data["dim"], data["dim"]):
        raise DimMismatch(f"generators have shape {mats[0].shape}, declared dim {data['dim']}")
    return make_arep(*mats, tol=tol)
