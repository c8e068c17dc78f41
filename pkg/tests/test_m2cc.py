from __future__ import annotations

import numpy as np
import pytest

from qmi import m2cc
from qmi.errors import CommutativityViolation, NotProjection, NotUnitary, RelationViolation, ShapeError
from qmi.m2cc import BASIS_NAMES, TripleElement
from qmi.matrix_core import State, random_projection, random_pure_state, random_unitary

TRIVIAL = State([[1.0]])
DEMO = (0.3, 0.9, -0.1, 1.0)


def test_make_arep_examples():
    assert m2cc.scalar_rep(*DEMO).dim == 1
    assert m2cc.scalar_rep(0, 0, 1, 0).dim == 1
    with pytest.raises(RelationViolation) as info:
        m2cc.scalar_rep(1, 1, 1, 1)
    assert info.value.relation == "x^2=-yz"


def test_make_arep_errors():
    with pytest.raises(RelationViolation):
        m2cc.scalar_rep(0, 0, 0.5, 1)
    with pytest.raises(RelationViolation):
        m2cc.scalar_rep(0, 0, 1, 0.5)
    with pytest.raises(ShapeError):
        m2cc.make_arep(np.zeros((2, 2)), np.zeros((2, 2)), np.eye(3), np.eye(2))
    # x = y = 0 with a diagonal unitary z is a valid quotient point
    m2cc.make_arep(np.zeros((2, 2)), np.zeros((2, 2)), np.diag([1, 1j]), np.eye(2))
    # x from one character basis and z from another: the relations or commutativity break
    rng = np.random.default_rng(0)
    a, b = m2cc.random_arep(2, rng), m2cc.random_arep(2, rng)
    with pytest.raises((RelationViolation, CommutativityViolation)):
        m2cc.make_arep(a.x, a.y, b.z, a.p)


def test_make_arep_does_not_freeze_inputs():
    x = np.zeros((1, 1))
    m2cc.make_arep(x, np.zeros((1, 1)), np.ones((1, 1)), np.ones((1, 1)))
    x[0, 0] = 1.0


def test_quotient_rep_examples():
    assert m2cc.quotient_rep([[0, 1], [1, 0]], np.diag([1, 0])).dim == 2
    for theta in (0.0, 1.0, 2.5):
        for p in (0.0, 1.0):
            rep = m2cc.quotient_rep([[np.exp(1j * theta)]], [[p]])
            assert np.allclose(rep.x, 0) and np.allclose(rep.y, 0)
    with pytest.raises(NotUnitary):
        m2cc.quotient_rep([[2.0]], [[1.0]])
    with pytest.raises(NotProjection):
        m2cc.quotient_rep(np.eye(2), [[0.5, 0], [0, 1]])


def test_coaction_examples():
    identity_rep = m2cc.scalar_rep(0, 0, 1, 1)
    rng = np.random.default_rng(1)
    for _ in range(5):
        b = TripleElement.from_coords(rng.standard_normal(6) + 1j * rng.standard_normal(6))
        assert np.allclose(m2cc.pushforward6(identity_rep, TRIVIAL, b).coords(), b.coords())

    img = m2cc.coaction_apply(m2cc.scalar_rep(*DEMO), TripleElement.basis("e12"))
    assert np.allclose(img.blocks[..., 0, 0], [[0.3, -0.1], [0.9, -0.3]])

    rep = m2cc.random_arep(3, rng)
    e11 = m2cc.coaction_apply(rep, TripleElement.basis("e11"))
    assert e11.distance(e11 @ e11) <= 1e-9
    assert e11.distance(m2cc.e11_image_closed_form(rep)) <= 1e-9


def test_coaction_is_unital_star_homomorphism():
    rng = np.random.default_rng(2)
    for dim in (1, 2, 3):
        rep = m2cc.random_arep(dim, rng)
        assert m2cc.coaction_apply(rep, TripleElement.unit()).distance(m2cc.TensorElement.unit(dim)) <= 1e-9
        for _ in range(5):
            b1 = TripleElement.from_coords(rng.standard_normal(6) + 1j * rng.standard_normal(6))
            b2 = TripleElement.from_coords(rng.standard_normal(6) + 1j * rng.standard_normal(6))
            a1, a2 = m2cc.coaction_apply(rep, b1), m2cc.coaction_apply(rep, b2)
            assert m2cc.coaction_apply(rep, b1 @ b2).distance(a1 @ a2) <= 1e-9
            assert m2cc.coaction_apply(rep, b1.adjoint()).distance(a1.adjoint()) <= 1e-9


def test_lipnorm6():
    assert m2cc.lipnorm6(TripleElement.unit()) == 0
    assert m2cc.lipnorm6(3j * TripleElement.unit()) == 0
    assert m2cc.lipnorm6(TripleElement.basis("e12")) == 1
    assert m2cc.lipnorm6(TripleElement([[0.3, -0.1], [0.9, -0.3]])) == pytest.approx(2.2)
    rng = np.random.default_rng(3)
    for _ in range(20):
        b = TripleElement.from_coords(rng.standard_normal(6))
        c = TripleElement.from_coords(rng.standard_normal(6))
        assert m2cc.lipnorm6(b + c) <= m2cc.lipnorm6(b) + m2cc.lipnorm6(c) + 1e-12
        assert m2cc.lipnorm6(-2.5 * b) == pytest.approx(2.5 * m2cc.lipnorm6(b))
        # vanishes only on multiples of the unit
        assert m2cc.lipnorm6(b) > 0


def test_pushforward6_examples():
    rng = np.random.default_rng(4)
    rep = m2cc.quotient_rep(random_unitary(2, rng), random_projection(2, rng, rank=1))
    omega = random_pure_state(2, rng)
    b = TripleElement.basis("(0,1,0)")
    out = m2cc.pushforward6(rep, omega, b)
    w = omega(rep.p).real
    assert np.allclose(out.coords(), [0, 0, 0, 0, w, 1 - w])
    assert m2cc.lipnorm6(out) == pytest.approx(1)

    demo = m2cc.scalar_rep(*DEMO)
    push = m2cc.pushforward6(demo, TRIVIAL, TripleElement.basis("e12"))
    assert np.allclose(push.m, [[0.3, -0.1], [0.9, -0.3]])
    assert m2cc.lipnorm6(push) == pytest.approx(2.2)
    assert m2cc.defect6(demo, TRIVIAL, TripleElement.basis("e12")) == pytest.approx(1.2, abs=1e-9)


def test_admissibility_examples():
    rng = np.random.default_rng(5)
    rep = m2cc.quotient_rep(random_unitary(2, rng), random_projection(2, rng, rank=1))
    report = m2cc.admissibility_check(rep, samples=100)
    assert report.admissible and report.max_defect <= 1e-9

    report = m2cc.admissibility_check(m2cc.scalar_rep(*DEMO))
    assert not report.admissible
    assert report.witness_label == "e12" and report.witness_defect == pytest.approx(1.2)

    rot = m2cc.scalar_rep(0, 0, np.exp(0.7j), 1)
    assert m2cc.admissibility_check(rot, samples=100).max_defect <= 1e-9


def test_non_admissible_reps_get_witnesses():
    rng = np.random.default_rng(6)
    for dim in (1, 2, 3):
        for _ in range(4):
            rep = m2cc.random_arep(dim, rng)
            report = m2cc.admissibility_check(rep, samples=50, seed=1)
            assert not report.admissible
            assert report.witness_b is not None
            assert m2cc.defect6(rep, report.witness_state, report.witness_b) > 1e-9


def test_comult_lift_examples():
    rng = np.random.default_rng(7)
    u1, u2 = random_unitary(2, rng), random_unitary(2, rng)
    p1, p2 = random_projection(2, rng, rank=1), random_projection(2, rng, rank=1)
    lift = m2cc.comult_lift(m2cc.quotient_rep(u1, p1), m2cc.quotient_rep(u2, p2))
    assert np.allclose(lift.x, 0) and np.allclose(lift.y, 0)
    assert np.allclose(lift.z, np.kron(u1, u2))
    one = np.eye(2)
    assert np.allclose(lift.p, np.kron(p1, p2) + np.kron(one - p1, one - p2))

    r1 = m2cc.random_arep(2, rng)
    lifted = m2cc.comult_lift(r1, m2cc.trivial_rep())
    for g in "xyzp":
        assert np.allclose(getattr(lifted, g), getattr(r1, g))


def test_coassociativity():
    rng = np.random.default_rng(8)
    for _ in range(5):
        r = [m2cc.random_quotient_rep(2, rng) if k % 2 else m2cc.random_arep(2, rng) for k in range(3)]
        left = m2cc.comult_lift(m2cc.comult_lift(r[0], r[1]), r[2])
        right = m2cc.comult_lift(r[0], m2cc.comult_lift(r[1], r[2]))
        for g in "xyzp":
            assert np.allclose(getattr(left, g), getattr(right, g), atol=1e-9)


def _coefficients(t: m2cc.TensorElement):
    return [("e11", t.blocks[0, 0]), ("e12", t.blocks[0, 1]), ("e21", t.blocks[1, 0]),
            ("e22", t.blocks[1, 1]), ("(0,1,0)", t.e), ("(0,0,1)", t.f)]


def test_lift_is_compatible_with_coaction():
    """Coaction of the lift = r2's coaction with each B-coordinate expanded through r1."""
    rng = np.random.default_rng(9)
    r1, r2 = m2cc.random_arep(2, rng), m2cc.random_arep(3, rng)
    lift = m2cc.coaction_basis(m2cc.comult_lift(r1, r2))
    inner, outer = m2cc.coaction_basis(r1), m2cc.coaction_basis(r2)
    for name in BASIS_NAMES:
        blocks, e, f = 0, 0, 0
        for k, w in _coefficients(outer[name]):
            img = inner[k]
            blocks = blocks + np.stack([[np.kron(img.blocks[r, s], w) for s in range(2)] for r in range(2)])
            e = e + np.kron(img.e, w)
            f = f + np.kron(img.f, w)
        assert m2cc.TensorElement(blocks, e, f).distance(lift[name]) <= 1e-9


def test_trace_preservation():
    rng = np.random.default_rng(10)
    for dim in (1, 2, 3):
        assert m2cc.trace_preservation_check(m2cc.random_arep(dim, rng))
        assert m2cc.trace_preservation_check(m2cc.random_quotient_rep(dim, rng))
    assert m2cc.trace_preservation_check(m2cc.scalar_rep(*DEMO))


def test_decode_arep():
    rep = m2cc.scalar_rep(*DEMO)
    back = m2cc.decode_arep(rep.to_json())
    assert np.allclose(back.x, rep.x) and np.allclose(back.p, rep.p)
