"""Differential geometry of immersed submanifolds of complex n-space.

An :class:`Immersion` is a chart ``u -> F(u)`` with values in C^N.  Every
function here works pointwise from that chart: tangent frames, the induced
metric, the symplectic pairing, the Lagrangian angle, and the quantities
obtained by differentiating them (mean curvature, Laplacians, normal
projections).  Derivatives come from an analytic Jacobian when the chart
supplies one and from fourth-order central differences otherwise.

Charts are vectorised: ``eval`` maps an array of shape ``(..., n)`` to
``(..., N)`` and ``jacobian`` maps it to ``(..., N, n)``.  The finite
difference stencils below are evaluated as a single batch.

Conventions: the real inner product on C^N is ``Re <a, b>``, the symplectic
form is ``omega(a, b) = Im <a, b>`` and ``J`` is multiplication by ``i``.
The Lagrangian angle is ``arg det Z`` for the complex matrix ``Z`` of frame
columns, multiplied by the chart orientation sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

DEFAULT_STEP = 1e-3
DEGENERATE_GRAM = 1e-14
LAGRANGIAN_TOL = 1e-6

# fourth-order central difference: offsets and first-derivative weights (/12h)
_OFFSETS = np.array([-2.0, -1.0, 1.0, 2.0])
_D1 = np.array([1.0, -8.0, 8.0, -1.0]) / 12.0
# second derivative on offsets (-2, -1, 0, 1, 2), weights (/12h^2)
_D2_OFFSETS = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
_D2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0


class GeometryError(ValueError):
    """Base class for failures of the pointwise geometry routines."""


class DegenerateFrameError(GeometryError):
    pass


class NonLagrangianError(GeometryError):
    pass


class AngleUnwrapError(GeometryError):
    pass


@dataclass(frozen=True)
class Immersion:
    """A parametrised submanifold ``u -> F(u)`` of C^N.

    ``orientation`` is either a constant sign or a callable returning the
    sign at ``u``; it must be locally constant.  ``angle`` optionally gives
    a closed-form Lagrangian angle, used only for cross-checks.
    """

    dim: int
    eval: Callable[[np.ndarray], np.ndarray]
    jacobian: Callable[[np.ndarray], np.ndarray] | None = None
    angle: Callable[[np.ndarray], np.ndarray] | None = None
    orientation: int | Callable[[np.ndarray], np.ndarray] = 1

    def __call__(self, u):
        return self.eval(np.asarray(u, dtype=float))

    def orientation_at(self, u: np.ndarray) -> np.ndarray:
        if callable(self.orientation):
            return np.asarray(self.orientation(u), dtype=float)
        return np.full(np.shape(u)[:-1], float(self.orientation))


@dataclass(frozen=True)
class TangentFrame:
    """Frame columns ``T_a = dF/du_a`` stored as an ``(N, n)`` complex array."""

    columns: np.ndarray
    orientation: float = 1.0

    @property
    def metric(self) -> np.ndarray:
        return gram(self.columns)

    @property
    def gram_det(self) -> float:
        return float(np.linalg.det(self.metric))


def real_inner(a, b):
    """Real inner product of C^N viewed as R^{2N}, over the last axis."""
    return np.real(np.sum(np.conj(a) * b, axis=-1))


def gram(columns: np.ndarray) -> np.ndarray:
    """Induced metric ``g_ab = Re <T_a, T_b>`` for frames of shape (..., N, n)."""
    z = np.asarray(columns)
    return np.real(np.einsum("...ia,...ib->...ab", np.conj(z), z))


def _steps(u: np.ndarray, h: float | None) -> np.ndarray:
    h = DEFAULT_STEP if h is None else h
    return h * np.maximum(1.0, np.abs(u))


def _fd_jacobian(f, u: np.ndarray, h: np.ndarray) -> np.ndarray:
    n = u.shape[-1]
    pts = np.repeat(u[None, None, :], 4, axis=0).repeat(n, axis=1)
    for a in range(n):
        pts[:, a, a] += _OFFSETS * h[a]
    vals = f(pts)  # (4, n, N)
    d = np.einsum("k,kan->na", _D1, vals)
    return d / h[None, :]


def _jacobian_at(imm: Immersion, u: np.ndarray, h: np.ndarray) -> np.ndarray:
    if imm.jacobian is not None:
        return np.asarray(imm.jacobian(u))
    return _fd_jacobian(imm.eval, u, h)


def _batched_jacobian(imm: Immersion, pts: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Jacobian at every point of ``pts`` (shape (..., n))."""
    if imm.jacobian is not None:
        return np.asarray(imm.jacobian(pts))
    n = pts.shape[-1]
    flat = pts.reshape(-1, n)
    out = np.stack([_fd_jacobian(imm.eval, p, h) for p in flat])
    return out.reshape(pts.shape[:-1] + out.shape[-2:])


def tangent_frame(imm: Immersion, u, h: float | None = None) -> TangentFrame:
    """Tangent frame at ``u``; analytic when the chart has a Jacobian."""
    u = np.asarray(u, dtype=float)
    cols = _jacobian_at(imm, u, _steps(u, h))
    frame = TangentFrame(cols, float(imm.orientation_at(u)))
    det = frame.gram_det
    if not det > DEGENERATE_GRAM:
        raise DegenerateFrameError(f"Gram determinant {det:.3e} at u={u}")
    return frame


def symplectic_pairing(frame: TangentFrame) -> np.ndarray:
    """Matrix ``omega(T_a, T_b)``; identically zero on a Lagrangian frame."""
    z = frame.columns
    return np.imag(np.conj(z).T @ z)


def _angles_of(columns: np.ndarray, orientation) -> np.ndarray:
    det = np.linalg.det(columns) * orientation
    return np.mod(np.angle(det), 2 * np.pi)


def lagrangian_angle(frame: TangentFrame, tol: float = LAGRANGIAN_TOL) -> float:
    """Lagrangian angle in [0, 2*pi).

    On a Lagrangian frame ``|det Z| = sqrt(det g)``, so the phase of
    ``det Z`` is the phase of the holomorphic volume form restricted to the
    oriented tangent plane.
    """
    z = frame.columns
    if z.shape[0] != z.shape[1]:
        raise GeometryError("Lagrangian angle needs an n-dimensional chart in C^n")
    m = np.max(np.abs(symplectic_pairing(frame)))
    if m > tol:
        raise NonLagrangianError(f"max |omega(T_a, T_b)| = {m:.3e}")
    return float(_angles_of(z, frame.orientation))


def _unwrap_to(theta: np.ndarray, ref: float) -> np.ndarray:
    d = np.mod(theta - ref + np.pi, 2 * np.pi) - np.pi
    if np.any(np.abs(d) > np.pi / 2):
        raise AngleUnwrapError("Lagrangian angle jumps by more than pi/2 across one step")
    return ref + d


class _Stencil:
    """All points needed for first and second derivatives at ``u``."""

    def __init__(self, u: np.ndarray, h: np.ndarray):
        n = u.shape[-1]
        self.u, self.h, self.n = u, h, n
        pts = [u]
        self.axis = {}
        for a in range(n):
            for o in _OFFSETS:
                p = u.copy()
                p[a] += o * h[a]
                self.axis[(a, o)] = len(pts)
                pts.append(p)
        self.mixed = {}
        for a in range(n):
            for b in range(a + 1, n):
                for oa in _OFFSETS:
                    for ob in _OFFSETS:
                        p = u.copy()
                        p[a] += oa * h[a]
                        p[b] += ob * h[b]
                        self.mixed[(a, b, oa, ob)] = len(pts)
                        pts.append(p)
        self.points = np.array(pts)

    def first(self, vals: np.ndarray) -> np.ndarray:
        """Gradient array of shape (n, ...) from values at the stencil."""
        out = []
        for a in range(self.n):
            acc = sum(c * vals[self.axis[(a, o)]] for c, o in zip(_D1, _OFFSETS))
            out.append(acc / self.h[a])
        return np.array(out)

    def second(self, vals: np.ndarray) -> np.ndarray:
        """Hessian array of shape (n, n, ...) from values at the stencil."""
        n = self.n
        shape = (n, n) + vals.shape[1:]
        hess = np.zeros(shape, dtype=vals.dtype)
        for a in range(n):
            acc = _D2[2] * vals[0]
            for c, o in zip(_D2, _D2_OFFSETS):
                if o != 0:
                    acc = acc + c * vals[self.axis[(a, o)]]
            hess[a, a] = acc / self.h[a] ** 2
        for a in range(n):
            for b in range(a + 1, n):
                acc = 0
                for ca, oa in zip(_D1, _OFFSETS):
                    for cb, ob in zip(_D1, _OFFSETS):
                        acc = acc + ca * cb * vals[self.mixed[(a, b, oa, ob)]]
                hess[a, b] = hess[b, a] = acc / (self.h[a] * self.h[b])
        return hess


def _angle_derivatives(imm: Immersion, u: np.ndarray, h: float | None, hessian: bool):
    hs = _steps(u, h)
    if hessian:
        st = _Stencil(u, hs)
        pts = st.points
    else:
        st = None
        pts = np.concatenate(
            [u[None], *[u + np.outer(_OFFSETS * hs[a], np.eye(len(u))[a]) for a in range(len(u))]]
        )
    cols = _batched_jacobian(imm, pts, hs)
    grams = gram(cols)
    if not np.linalg.det(grams[0]) > DEGENERATE_GRAM:
        raise DegenerateFrameError(f"Gram determinant {np.linalg.det(grams[0]):.3e} at u={u}")
    theta = _angles_of(cols, imm.orientation_at(pts))
    theta = _unwrap_to(theta, theta[0])
    if st is not None:
        return cols[0], st.first(theta), st.second(theta), st, cols
    n = len(u)
    d = np.array([np.dot(_D1, theta[1 + 4 * a : 5 + 4 * a]) / hs[a] for a in range(n)])
    return cols[0], d, None, None, cols


def angle_gradient(imm: Immersion, u, h: float | None = None) -> np.ndarray:
    """Gradient of the Lagrangian angle as an ambient vector ``g^{ab} d_b theta T_a``."""
    u = np.asarray(u, dtype=float)
    cols, dtheta, _, _, _ = _angle_derivatives(imm, u, h, hessian=False)
    g = gram(cols)
    return cols @ np.linalg.solve(g, dtheta)


def mean_curvature(imm: Immersion, u, h: float | None = None) -> np.ndarray:
    """Mean curvature vector ``J grad theta`` of a Lagrangian immersion."""
    return 1j * angle_gradient(imm, u, h)


def _second_derivatives(imm: Immersion, u: np.ndarray, h: float | None) -> tuple[np.ndarray, np.ndarray]:
    """Frame at ``u`` and ``d_a d_b F`` as an array of shape (n, n, N)."""
    hs = _steps(u, h)
    n = len(u)
    if imm.jacobian is not None:
        pts = np.concatenate([u[None]] + [u + np.outer(_OFFSETS * hs[a], np.eye(n)[a]) for a in range(n)])
        cols = np.asarray(imm.jacobian(pts))
        d2 = np.empty((n, n, cols.shape[1]), dtype=complex)
        for a in range(n):
            blk = cols[1 + 4 * a : 5 + 4 * a]  # (4, N, n)
            d2[a] = (np.einsum("k,knb->bn", _D1, blk)) / hs[a]
        d2 = 0.5 * (d2 + d2.transpose(1, 0, 2))
        return cols[0], d2
    st = _Stencil(u, hs)
    vals = imm.eval(st.points)
    return _fd_jacobian(imm.eval, u, hs), st.second(vals)


def laplace_beltrami_of_position(imm: Immersion, u, h: float | None = None) -> np.ndarray:
    """``Delta_L F = g^{ab} (d_a d_b F - Gamma^c_ab d_c F)``.

    The Christoffel term removes exactly the tangential part of ``d_a d_b F``,
    so this is the trace of the second fundamental form.
    """
    u = np.asarray(u, dtype=float)
    cols, d2 = _second_derivatives(imm, u, h)
    g = gram(cols)
    if not np.linalg.det(g) > DEGENERATE_GRAM:
        raise DegenerateFrameError(f"Gram determinant {np.linalg.det(g):.3e} at u={u}")
    ginv = np.linalg.inv(g)
    trace = np.einsum("ab,abn->n", ginv, d2)
    coef = np.linalg.solve(g, real_inner(cols.T, trace))
    return trace - cols @ coef


def normal_projection(imm: Immersion, u, h: float | None = None) -> np.ndarray:
    """Normal part ``F - g^{ab} <F, T_a> T_b`` of the position vector."""
    u = np.asarray(u, dtype=float)
    frame = tangent_frame(imm, u, h)
    f = imm(u)
    cols = frame.columns
    coef = np.linalg.solve(frame.metric, real_inner(cols.T, f))
    return f - cols @ coef


def angle_laplacian(imm: Immersion, u, h: float | None = None) -> float:
    """Laplace-Beltrami operator applied to the Lagrangian angle."""
    u = np.asarray(u, dtype=float)
    cols, dtheta, hess, st, _ = _angle_derivatives(imm, u, h, hessian=True)
    _, d2f = _second_derivatives(imm, u, h)
    g = gram(cols)
    ginv = np.linalg.inv(g)
    # Gamma^c_ab d_c theta = g^{cd} <d_a d_b F, T_d> d_c theta
    proj = real_inner(d2f[:, :, None, :], cols.T[None, None, :, :])  # (n, n, n)
    gamma_dtheta = np.einsum("abd,dc,c->ab", proj, ginv, dtheta)
    return float(np.einsum("ab,ab->", ginv, hess - gamma_dtheta))
