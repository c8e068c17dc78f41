from __future__ import annotations

import numpy as np
import pytest

from qmi.errors import DimMismatch, InvalidState, NonSquare, NullConjugator
from qmi.matrix_core import (
    State,
    conjugate_state,
    decode_state,
    is_projection,
    random_projection,
    random_pure_state,
    random_unitary,
    state_expect,
)


def test_is_projection_examples():
    assert is_projection(np.eye(3))
    assert not is_projection([[0, 1], [0, 0]])
    v = np.array([0.6, 0.8])
    assert is_projection(np.outer(v, v))
    with pytest.raises(NonSquare):
        is_projection(np.zeros((2, 3)))


def test_state_expect_examples():
    rng = np.random.default_rng(0)
    assert state_expect(random_pure_state(3, rng), np.eye(3)) == pytest.approx(1)
    assert state_expect(State.maximally_mixed(2), np.diag([1, 0])) == pytest.approx(0.5)
    assert state_expect(State.pure([1, 0]), np.diag([1, 0])) == pytest.approx(1)
    with pytest.raises(DimMismatch):
        state_expect(State.maximally_mixed(2), np.eye(3))


@pytest.mark.parametrize(
    "rho",
    [np.diag([0.5, 0.6]), np.array([[0.5, 0.1], [0.2, 0.5]]), np.diag([1.5, -0.5])],
)
def test_invalid_states(rho):
    with pytest.raises(InvalidState):
        State(rho)


def test_conjugate_state_examples():
    rng = np.random.default_rng(1)
    mixed = State.maximally_mixed(3)
    u = random_unitary(3, rng)
    assert np.allclose(conjugate_state(mixed, u).rho, mixed.rho)

    p = np.diag([1.0, 1.0, 0.0])
    pure = State.pure([0.6, 0.8j, 0])
    assert np.allclose(conjugate_state(pure, p).rho, pure.rho)

    with pytest.raises(NullConjugator):
        conjugate_state(mixed, np.zeros((3, 3)))


def test_conjugate_state_matches_formula():
    rng = np.random.default_rng(2)
    for _ in range(20):
        omega = random_pure_state(3, rng)
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        x = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        conj = conjugate_state(omega, a)
        expected = omega(a.conj().T @ x @ a) / omega(a.conj().T @ a)
        assert conj(x) == pytest.approx(expected)


def test_projection_properties():
    rng = np.random.default_rng(3)
    for dim in range(1, 6):
        p = random_projection(dim, rng)
        one = np.eye(dim)
        assert is_projection(p) and is_projection(one - p)
        assert np.max(np.abs(p @ (one - p))) <= 1e-12
        omega = random_pure_state(dim, rng)
        value = omega(p)
        assert abs(value.imag) <= 1e-12 and -1e-12 <= value.real <= 1 + 1e-12


def test_random_unitary_and_mix():
    rng = np.random.default_rng(4)
    u = random_unitary(4, rng)
    assert np.allclose(u @ u.conj().T, np.eye(4))
    a, b = random_pure_state(4, rng), random_pure_state(4, rng)
    m = a.mix(b, 0.3)
    assert np.allclose(m.rho, 0.3 * a.rho + 0.7 * b.rho)


def test_state_json_round_trip():
    s = random_pure_state(3, np.random.default_rng(5))
    assert np.allclose(decode_state(s.to_json()).rho, s.rho)
    with pytest.raises(DimMismatch):
        decode_state({"dim": 2, "rho": [[1]]})
