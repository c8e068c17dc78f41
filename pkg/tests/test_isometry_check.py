from __future__ import annotations

import itertools

import numpy as np
import pytest

from qmi import corpus
from qmi.errors import CommutationRequired, LengthMismatch, PointCountMismatch
from qmi.isometry_check import (
    certify_pair,
    decide_isometric,
    lipdefect,
    pushforward,
    witness_search,
)
from qmi.magic_unitary import from_permutation, two_block_quantum
from qmi.matrix_core import State, random_pure_state
from qmi.metric_space import distance_function, lipnorm

TRIVIAL = State([[1.0]])


def skewed():
    return corpus.skewed_two_block(), corpus.metric("skewed_cluster")


def test_permutation_pushforward_is_composition():
    rng = np.random.default_rng(0)
    f = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    for sigma in itertools.permutations(range(4)):
        g = pushforward(from_permutation(sigma), TRIVIAL, f)
        assert np.allclose(g, f[list(sigma)])


def test_constants_are_fixed():
    a, _ = skewed()
    state = random_pure_state(2, np.random.default_rng(1))
    assert np.allclose(pushforward(a, state, np.full(4, 2 - 1j)), 2 - 1j)


def test_skewed_pushforward_and_defect():
    a, space = skewed()
    omega = State.pure([1, 1])
    f = distance_function(space, 0)
    assert np.allclose(f, [0, 1, 2, 3])
    assert np.allclose(pushforward(a, omega, f), [0, 1, 2.5, 2.5])
    assert lipdefect(a, space, omega, f) == pytest.approx(0.25, abs=1e-12)


def test_path_swap_defect():
    space = corpus.metric("path3")
    a = from_permutation([0, 2, 1])
    f = distance_function(space, 2)
    assert np.allclose(pushforward(a, TRIVIAL, f), [2, 0, 1])
    assert lipdefect(a, space, TRIVIAL, f) == pytest.approx(1)


def test_isometries_have_no_defect():
    space = corpus.metric("square4")
    rng = np.random.default_rng(2)
    for sigma in [(1, 2, 3, 0), (3, 2, 1, 0), (2, 3, 0, 1)]:
        a = from_permutation(sigma)
        for j in range(4):
            assert lipdefect(a, space, TRIVIAL, distance_function(space, j)) == pytest.approx(0, abs=1e-12)
        f = rng.standard_normal(4)
        assert lipdefect(a, space, TRIVIAL, f) <= 1e-12


def test_size_errors():
    a, space = skewed()
    with pytest.raises(LengthMismatch):
        pushforward(a, State.pure([1, 0]), [1, 2, 3])
    with pytest.raises(PointCountMismatch):
        lipdefect(a, corpus.metric("path3"), State.pure([1, 0]), [1, 2, 3])
    with pytest.raises(PointCountMismatch):
        lipdefect(a, space, TRIVIAL, [1, 2, 3, 4])


def test_pushforward_linear_and_affine():
    a, space = skewed()
    rng = np.random.default_rng(3)
    w1, w2 = random_pure_state(2, rng), random_pure_state(2, rng)
    f, g = rng.standard_normal(4), rng.standard_normal(4) * 1j
    assert np.allclose(pushforward(a, w1, 2 * f + g), 2 * pushforward(a, w1, f) + pushforward(a, w1, g))
    t = 0.3
    mixed = w1.mix(w2, t)
    assert np.allclose(pushforward(a, mixed, f), t * pushforward(a, w1, f) + (1 - t) * pushforward(a, w2, f))
    lhs = lipnorm(space, pushforward(a, mixed, f))
    rhs = t * lipnorm(space, pushforward(a, w1, f)) + (1 - t) * lipnorm(space, pushforward(a, w2, f))
    assert lhs <= rhs + 1e-12


def test_certify_pair_examples():
    a = two_block_quantum(corpus.HALF, corpus.E11)
    space = corpus.metric("two_cluster")
    mixed = State.maximally_mixed(2)
    f = distance_function(space, 0)
    cert = certify_pair(a, space, mixed, f, 0, 2)
    assert cert.holds()
    assert cert.plan.lam.sum() == pytest.approx(1)
    assert cert.bound == pytest.approx(2 * lipnorm(space, f))

    same = certify_pair(a, space, mixed, f, 1, 1)
    assert same.lhs == 0 and same.bound == 0 and same.holds()

    perm_space = corpus.metric("square4")
    perm = from_permutation([1, 2, 3, 0])
    f = distance_function(perm_space, 0)
    for x, y in itertools.combinations(range(4), 2):
        c = certify_pair(perm, perm_space, TRIVIAL, f, x, y)
        assert c.holds() and c.lhs == pytest.approx(c.middle)


def test_certify_requires_commutation():
    a, space = skewed()
    with pytest.raises(CommutationRequired):
        certify_pair(a, space, State.pure([1, 0]), np.zeros(4), 0, 1)


def test_witness_examples():
    space = corpus.metric("path3")
    assert witness_search(from_permutation([2, 1, 0]), space) is None

    w = witness_search(from_permutation([0, 2, 1]), space)
    assert w.defect == pytest.approx(1)
    # the third distance function is an equally valid witness
    assert lipdefect(from_permutation([0, 2, 1]), space, TRIVIAL, distance_function(space, 2)) == pytest.approx(1)

    a, sk = skewed()
    w = witness_search(a, sk)
    assert w.defect == pytest.approx(0.25, abs=1e-9)
    assert w.provenance["quadruple"] == [1, 1, 3, 4]
    assert np.allclose(w.state.rho, 0.5 * np.ones((2, 2)))
    assert lipdefect(a, sk, w.state, w.f) == pytest.approx(w.defect, abs=1e-10)


def test_witness_is_deterministic():
    a, space = skewed()
    w1 = witness_search(a, space, seed=4)
    w2 = witness_search(a, space, seed=4)
    assert w1.to_json() == w2.to_json()


def test_decide_examples():
    for name in ("path3", "two_cluster", "hexagon6"):
        space = corpus.metric(name)
        v = decide_isometric(from_permutation(range(space.n)), space, samples=40)
        assert v.isometric and v.max_defect <= 1e-9
    a = two_block_quantum(corpus.HALF, corpus.E11)
    v = decide_isometric(a, corpus.metric("two_cluster"), samples=50)
    assert v.isometric and len(v.certificates) == 6
    assert all(c.holds() for c in v.certificates)
    v = decide_isometric(a, corpus.metric("skewed_cluster"))
    assert not v.isometric and v.witness.defect == pytest.approx(0.25)
    assert v.to_json()["verdict"] == "not_isometric"


def test_decide_parallel_matches_serial():
    a = two_block_quantum(corpus.HALF, corpus.E11)
    space = corpus.metric("two_cluster")
    serial = decide_isometric(a, space, samples=60, jobs=1)
    parallel = decide_isometric(a, space, samples=60, jobs=4)
    assert serial.to_json() == parallel.to_json()
