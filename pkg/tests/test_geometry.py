from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lagflow.geometry import (
    DegenerateFrameError,
    Immersion,
    NonLagrangianError,
    angle_laplacian,
    lagrangian_angle,
    laplace_beltrami_of_position,
    mean_curvature,
    normal_projection,
    symplectic_pairing,
    tangent_frame,
)
from lagflow.integer_family import IntegerSlice, LambdaSpec


def flat(n: int, unitary=None) -> Immersion:
    mat = np.eye(n, dtype=complex) if unitary is None else unitary
    return Immersion(n, lambda u: np.asarray(u, dtype=complex) @ mat.T)


def circle() -> Immersion:
    return Immersion(1, lambda u: np.exp(1j * np.asarray(u)))


def cubic_graph() -> Immersion:
    """Graph of the gradient of ``(u1^3 + u2^3) / 6``: Lagrangian, angle ``atan u1 + atan u2``."""
    return Immersion(2, lambda u: np.asarray(u) + 0.5j * np.asarray(u) ** 2)


def random_unitary(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def test_flat_frame_is_identity():
    frame = tangent_frame(flat(2), [0.3, -0.7])
    np.testing.assert_allclose(frame.columns, np.eye(2), atol=1e-12)
    assert frame.gram_det == pytest.approx(1.0, abs=1e-12)


def test_flat_chart_is_stationary_lagrangian():
    imm = flat(3)
    u = np.array([0.2, 0.5, -1.0])
    frame = tangent_frame(imm, u)
    assert np.max(np.abs(symplectic_pairing(frame))) == 0.0
    assert lagrangian_angle(frame) == pytest.approx(0.0, abs=1e-12)
    assert np.linalg.norm(laplace_beltrami_of_position(imm, u)) < 1e-8
    assert np.linalg.norm(mean_curvature(imm, u)) < 1e-10


def test_complex_line_is_not_lagrangian():
    imm = Immersion(2, lambda u: np.stack([u[..., 0] + 1j * u[..., 1], 0 * u[..., 0]], axis=-1))
    frame = tangent_frame(imm, [0.1, 0.2])
    pairing = symplectic_pairing(frame)
    assert pairing[0, 1] == pytest.approx(1.0, abs=1e-10)
    assert pairing[1, 0] == pytest.approx(-1.0, abs=1e-10)
    with pytest.raises(NonLagrangianError):
        lagrangian_angle(frame)


@pytest.mark.parametrize("u", [0.0, 0.4, 2.5])
def test_circle_laplacian_is_minus_position(u):
    imm = circle()
    f = imm(np.array([u]))
    np.testing.assert_allclose(laplace_beltrami_of_position(imm, [u]), -f, atol=1e-8)
    np.testing.assert_allclose(mean_curvature(imm, [u]), -f, atol=1e-8)
    np.testing.assert_allclose(normal_projection(imm, [u]), f, atol=1e-12)
    assert lagrangian_angle(tangent_frame(imm, [u])) == pytest.approx(math.fmod(u + math.pi / 2, 2 * math.pi), abs=1e-10)


def test_gradient_graph_against_analytic_curvature():
    imm = cubic_graph()
    u = np.array([0.5, 0.3])
    g = 1.0 + u**2
    expected_h = 1j * (1.0 + 1j * u) / g**2
    np.testing.assert_allclose(mean_curvature(imm, u), expected_h, atol=1e-8)
    np.testing.assert_allclose(laplace_beltrami_of_position(imm, u), expected_h, atol=1e-8)
    expected_lap = float(np.sum(-3.0 * u / g**3))
    lap = angle_laplacian(imm, u)
    assert lap == pytest.approx(expected_lap, rel=1e-6)
    assert abs(lap) > 1e-2


def test_angle_of_integer_family_at_fixed_s():
    slc = IntegerSlice.at_time(LambdaSpec((1, 1, -1)), -0.5)
    imm, u = slc.chart_at(np.array([1.0, 0.0, 0.0]), 0.3)
    assert lagrangian_angle(tangent_frame(imm, u)) == pytest.approx(0.3 + math.pi / 2, abs=1e-10)


def test_special_lagrangian_angle_is_constant_and_harmonic():
    slc = IntegerSlice.at_level(LambdaSpec((1, -1)), 1.0)
    x = np.array([math.cosh(0.7), math.sinh(0.7)])
    for s in (0.0, 0.9, 2.0):
        imm, u = slc.chart_at(x, s)
        assert lagrangian_angle(tangent_frame(imm, u)) == pytest.approx(math.pi / 2, abs=1e-12)
        assert np.linalg.norm(mean_curvature(imm, u)) < 1e-8
        assert abs(angle_laplacian(imm, u)) < 1e-6


def test_finite_difference_frame_matches_analytic_jacobian():
    slc = IntegerSlice.at_time(LambdaSpec((2, 3, -5)), -0.3)
    analytic = slc.immersion()
    numeric = Immersion(analytic.dim, analytic.eval, None, None, analytic.orientation)
    u = np.array([0.6, 1.1, 0.4])
    a = tangent_frame(analytic, u).columns
    b = tangent_frame(numeric, u).columns
    assert np.max(np.abs(a - b)) < 1e-7


def test_cone_vertex_is_degenerate():
    slc = IntegerSlice.at_time(LambdaSpec((1, 1, -1)), 0.0)
    imm = slc.immersion()
    with pytest.raises(DegenerateFrameError):
        tangent_frame(imm, [0.0, 0.4, 0.2])


@settings(max_examples=30, deadline=None)
@given(n=st.integers(2, 4), seed=st.integers(0, 10**6))
def test_rotated_plane_angle_is_phase_of_determinant(n, seed):
    mat = random_unitary(n, seed)
    frame = tangent_frame(flat(n, mat), np.zeros(n))
    assert np.max(np.abs(symplectic_pairing(frame))) < 1e-12
    expected = np.mod(np.angle(np.linalg.det(mat)), 2 * np.pi)
    diff = (lagrangian_angle(frame) - expected + np.pi) % (2 * np.pi) - np.pi
    assert abs(diff) < 1e-10


@settings(max_examples=25, deadline=None)
@given(u1=st.floats(-1.5, 1.5), u2=st.floats(-1.5, 1.5))
def test_gradient_graph_mean_curvature_equals_laplace_beltrami(u1, u2):
    imm = cubic_graph()
    u = np.array([u1, u2])
    h = mean_curvature(imm, u)
    lb = laplace_beltrami_of_position(imm, u)
    assert np.linalg.norm(h - lb) <= 1e-6 * max(1.0, np.linalg.norm(lb))
    assert np.max(np.abs(symplectic_pairing(tangent_frame(imm, u)))) < 1e-12
