"""Charts on the real quadric ``sum_j lambda_j x_j^2 = C`` and on product immersions.

With ``lambda_1..lambda_k > 0 > lambda_{k+1}..lambda_n`` the quadric splits
into two unit ellipsoids

    E+ = {sum_{j<=k} |lambda_j| x_j^2 = 1} in R^k,
    E- = {sum_{j>k} |lambda_j| x_j^2 = 1} in R^(n-k),

and every point is ``x = a(r) p + b(r) q`` with ``p in E+``, ``q in E-`` and

    a(r) = sqrt(r^2 + max(C, 0)),   b(r) = sqrt(r^2 + max(-C, 0)).

For ``C > 0`` this is the shrinker-side picture (the plus factor never
collapses), for ``C < 0`` the expander side, and for ``C = 0`` the cone
``r (p + q)``.  Ellipsoids are charted by hyperspherical angles with the
coordinates divided by ``sqrt|lambda_j|``.  A one-point-dimensional factor
(S^0) carries no angle; its sign is fixed per chart branch.

Chart parameters are ordered ``(r, angles+, angles-, s)``; the trailing
``s`` belongs to the curve ``w(s)`` of a product immersion
``F = (x_1 w_1(s), ..., x_n w_n(s))``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from .geometry import Immersion


def sphere_point(phi: np.ndarray, m: int) -> np.ndarray:
    """Hyperspherical embedding of S^(m-1); ``phi`` has shape (..., m-1)."""
    phi = np.asarray(phi, dtype=float)
    out = np.ones(phi.shape[:-1] + (m,))
    for i in range(m - 1):
        out[..., i] *= np.cos(phi[..., i])
        out[..., i + 1 :] *= np.sin(phi[..., i])[..., None]
    return out


def sphere_jacobian(phi: np.ndarray, m: int) -> np.ndarray:
    """Derivative of :func:`sphere_point`, shape (..., m, m-1)."""
    phi = np.asarray(phi, dtype=float)
    jac = np.empty(phi.shape[:-1] + (m, m - 1))
    for a in range(m - 1):
        dp = np.ones(phi.shape[:-1] + (m,))
        for i in range(m - 1):
            c, s = np.cos(phi[..., i]), np.sin(phi[..., i])
            if i == a:
                dp[..., i] *= -s
                dp[..., i + 1 :] *= c[..., None]
            else:
                dp[..., i] *= c
                dp[..., i + 1 :] *= s[..., None]
        dp[..., :a] = 0.0
        jac[..., :, a] = dp
    return jac


def sphere_angles(omega: np.ndarray) -> np.ndarray:
    """Inverse of :func:`sphere_point` for a unit vector ``omega`` (1-D)."""
    omega = np.asarray(omega, dtype=float)
    m = len(omega)
    phi = np.zeros(m - 1)
    for i in range(m - 1):
        tail = np.linalg.norm(omega[i:])
        if i == m - 2:
            phi[i] = np.arctan2(omega[i + 1], omega[i]) % (2 * np.pi)
        else:
            phi[i] = np.arccos(np.clip(omega[i] / tail, -1.0, 1.0)) if tail > 0 else 0.0
    return phi


@dataclass(frozen=True)
class Ellipsoid:
    """Unit-level ellipsoid ``sum_j w_j x_j^2 = 1`` with ``w_j = |lambda_j|``."""

    weights: tuple[float, ...]

    @property
    def m(self) -> int:
        return len(self.weights)

    @property
    def n_angles(self) -> int:
        return self.m - 1

    @cached_property
    def _scale(self) -> np.ndarray:
        return 1.0 / np.sqrt(np.asarray(self.weights, dtype=float))

    def point(self, phi: np.ndarray, sign: float = 1.0) -> np.ndarray:
        if self.m == 1:
            return np.full(np.shape(phi)[:-1] + (1,), sign * self._scale[0])
        return sphere_point(phi, self.m) * self._scale

    def jacobian(self, phi: np.ndarray) -> np.ndarray:
        return sphere_jacobian(phi, self.m) * self._scale[:, None]

    def area_element(self, phi: np.ndarray) -> np.ndarray:
        """Euclidean volume element of the ellipsoid in angle coordinates."""
        if self.m == 1:
            return np.ones(np.shape(phi)[:-1])
        jac = self.jacobian(phi)
        return np.sqrt(np.linalg.det(np.einsum("...ia,...ib->...ab", jac, jac)))

    def normal_sq(self, p: np.ndarray) -> np.ndarray:
        """``|p_perp|^2``: squared normal component of the position ``p``.

        The unit normal at ``p`` is ``W p / |W p|`` and ``<p, W p> = 1``.
        """
        w = np.asarray(self.weights, dtype=float)
        return 1.0 / np.sum((w * p) ** 2, axis=-1)

    def angles_of(self, p: np.ndarray) -> tuple[np.ndarray, float]:
        """Chart angles and S^0 sign of a point of the ellipsoid."""
        omega = np.asarray(p, dtype=float) / self._scale
        if self.m == 1:
            return np.zeros(0), float(np.sign(omega[0]) or 1.0)
        return sphere_angles(omega / np.linalg.norm(omega)), 1.0

    def angle_box(self) -> list[tuple[float, float]]:
        """Parameter ranges: polar angles on [0, pi], the last one on [0, 2 pi)."""
        if self.m == 1:
            return []
        return [(0.0, np.pi)] * (self.m - 2) + [(0.0, 2 * np.pi)]


@dataclass(frozen=True)
class SigmaPoint:
    """Coordinates ``(r, p, q)`` of a quadric point, plus the curve parameter ``s``."""

    r: float
    omega_plus: np.ndarray
    omega_minus: np.ndarray
    s: float = 0.0


@dataclass(frozen=True)
class Quadric:
    """The hypersurface ``sum_j lambda_j x_j^2 = level`` of R^n."""

    lambdas: tuple[float, ...]
    level: float

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float)
        if np.any(lam == 0):
            raise ValueError("lambda entries must be nonzero")
        k = int(np.sum(lam > 0))
        if not np.all(lam[:k] > 0):
            raise ValueError("positive lambdas must be listed first")
        if not 1 <= k < len(lam):
            raise ValueError("quadric charts need both positive and negative lambdas")

    @cached_property
    def lam(self) -> np.ndarray:
        return np.asarray(self.lambdas, dtype=float)

    @property
    def n(self) -> int:
        return len(self.lambdas)

    @cached_property
    def k(self) -> int:
        return int(np.sum(self.lam > 0))

    @cached_property
    def plus(self) -> Ellipsoid:
        return Ellipsoid(tuple(np.abs(self.lam[: self.k])))

    @cached_property
    def minus(self) -> Ellipsoid:
        return Ellipsoid(tuple(np.abs(self.lam[self.k :])))

    @property
    def c_plus(self) -> float:
        return max(self.level, 0.0)

    @property
    def c_minus(self) -> float:
        return max(-self.level, 0.0)

    def branches(self) -> list[tuple[float, float]]:
        """Sign choices for the S^0 factors; ``(1, 1)`` when there are none."""
        sp = (1.0, -1.0) if self.plus.m == 1 else (1.0,)
        sm = (1.0, -1.0) if self.minus.m == 1 else (1.0,)
        return list(itertools.product(sp, sm))

    def radii(self, r):
        r = np.asarray(r, dtype=float)
        return np.sqrt(r**2 + self.c_plus), np.sqrt(r**2 + self.c_minus)

    def point(self, r, phi_plus, phi_minus, branch=(1.0, 1.0)) -> np.ndarray:
        """``x = a(r) p + b(r) q``, broadcast over leading axes."""
        a, b = self.radii(r)
        p = self.plus.point(phi_plus, branch[0])
        q = self.minus.point(phi_minus, branch[1])
        return np.concatenate([a[..., None] * p, b[..., None] * q], axis=-1)

    def parametrize(self, sp: SigmaPoint) -> np.ndarray:
        """Point of R^n for explicit ellipsoid points ``p``, ``q``."""
        a, b = self.radii(sp.r)
        return np.concatenate([a * np.asarray(sp.omega_plus), b * np.asarray(sp.omega_minus)])

    def residual(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.sum(self.lam * x**2, axis=-1) - self.level

    def volume_form(self, r, p, q) -> np.ndarray:
        """Density of the quadric's volume per ``dr dS+ dS-``.

        ``a^(k-1) b^(n-k-1) (a'^2 |p_perp|^2 + b'^2 |q_perp|^2)^(1/2)`` with
        ``a' = r/a`` and ``b' = r/b``.  For ``C > 0`` this reads
        ``r^(n-k-1) (r^2+C)^((k-1)/2) (r^2/(r^2+C) |X1_perp|^2 + |X2_perp|^2)^(1/2)``,
        and symmetrically for ``C < 0``.
        """
        r = np.asarray(r, dtype=float)
        a, b = self.radii(r)
        k, n = self.k, self.n
        with np.errstate(divide="ignore", invalid="ignore"):
            da = np.where(a > 0, r / a, 1.0)
            db = np.where(b > 0, r / b, 1.0)
        bracket = da**2 * self.plus.normal_sq(p) + db**2 * self.minus.normal_sq(q)
        return np.abs(a) ** (k - 1) * np.abs(b) ** (n - k - 1) * np.sqrt(bracket)

    def tangent_orientation(self, r, phi_plus, phi_minus, branch) -> np.ndarray:
        """Sign of ``det[dx/du_1, ..., dx/du_(n-1), Lambda x]`` over R^n."""
        jac = self.point_jacobian(r, phi_plus, phi_minus, branch)
        x = self.point(r, phi_plus, phi_minus, branch)
        mat = np.concatenate([jac, (self.lam * x)[..., None]], axis=-1)
        return np.sign(np.linalg.det(mat))

    def point_jacobian(self, r, phi_plus, phi_minus, branch=(1.0, 1.0)) -> np.ndarray:
        """``dx/d(r, angles+, angles-)``, shape (..., n, n-1)."""
        r = np.asarray(r, dtype=float)
        a, b = self.radii(r)
        with np.errstate(divide="ignore", invalid="ignore"):
            da = np.where(a > 0, r / a, 1.0)
            db = np.where(b > 0, r / b, 1.0)
        p = self.plus.point(phi_plus, branch[0])
        q = self.minus.point(phi_minus, branch[1])
        k, n = self.k, self.n
        jac = np.zeros(r.shape + (n, n - 1))
        jac[..., :k, 0] = da[..., None] * p
        jac[..., k:, 0] = db[..., None] * q
        mp, mm = self.plus.n_angles, self.minus.n_angles
        if mp:
            jac[..., :k, 1 : 1 + mp] = a[..., None, None] * self.plus.jacobian(phi_plus)
        if mm:
            jac[..., k:, 1 + mp :] = b[..., None, None] * self.minus.jacobian(phi_minus)
        return jac

    def split(self, u: np.ndarray):
        """Split chart parameters ``(r, angles+, angles-, ...)``."""
        mp, mm = self.plus.n_angles, self.minus.n_angles
        return u[..., 0], u[..., 1 : 1 + mp], u[..., 1 + mp : 1 + mp + mm]

    def locate(self, x) -> tuple[np.ndarray, tuple[float, float]]:
        """Chart parameters ``(r, angles+, angles-)`` and branch of a quadric point."""
        x = np.asarray(x, dtype=float)
        lam, k = self.lam, self.k
        rp = np.sqrt(np.sum(np.abs(lam[:k]) * x[:k] ** 2))
        rm = np.sqrt(np.sum(np.abs(lam[k:]) * x[k:] ** 2))
        r = rm if self.level > 0 else rp
        a, b = self.radii(r)
        p = x[:k] / a if a > 0 else _first_axis(self.plus)
        q = x[k:] / b if b > 0 else _first_axis(self.minus)
        ang_p, sp = self.plus.angles_of(p)
        ang_m, sm = self.minus.angles_of(q)
        return np.concatenate([[r], ang_p, ang_m]), (sp, sm)


def _first_axis(e: Ellipsoid) -> np.ndarray:
    v = np.zeros(e.m)
    v[0] = 1.0 / np.sqrt(e.weights[0])
    return v


@dataclass(frozen=True)
class ProductChart:
    """Chart of ``F(x, s) = (x_j w_j(s))`` over one branch of a quadric.

    ``curve`` returns ``w(s)`` with shape ``s.shape + (n,)`` and ``velocity``
    returns ``w'(s)``.  The orientation sign makes ``[dx/du, Lambda x]``
    positively oriented, which fixes the Lagrangian angle convention.
    """

    quadric: Quadric
    curve: Callable[[np.ndarray], np.ndarray]
    velocity: Callable[[np.ndarray], np.ndarray]
    branch: tuple[float, float] = (1.0, 1.0)
    angle: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=False)

    def x(self, u: np.ndarray) -> np.ndarray:
        r, pp, pm = self.quadric.split(u)
        return self.quadric.point(r, pp, pm, self.branch)

    def eval(self, u):
        u = np.asarray(u, dtype=float)
        return self.x(u) * self.curve(u[..., -1])

    def jacobian(self, u):
        u = np.asarray(u, dtype=float)
        r, pp, pm = self.quadric.split(u)
        dx = self.quadric.point_jacobian(r, pp, pm, self.branch)
        x = self.quadric.point(r, pp, pm, self.branch)
        w = self.curve(u[..., -1])
        dw = self.velocity(u[..., -1])
        return np.concatenate([dx * w[..., :, None], (x * dw)[..., None]], axis=-1)

    def orientation(self, u):
        u = np.asarray(u, dtype=float)
        r, pp, pm = self.quadric.split(u)
        sgn = self.quadric.tangent_orientation(r, pp, pm, self.branch)
        return np.where(sgn == 0, 1.0, sgn)

    def immersion(self) -> Immersion:
        return Immersion(
            dim=self.quadric.n,
            eval=self.eval,
            jacobian=self.jacobian,
            angle=self.angle,
            orientation=self.orientation,
        )

    def locate(self, x, s: float) -> np.ndarray:
        """Chart parameters of the point ``F(x, s)``; ``x`` must be on this branch."""
        u, br = self.quadric.locate(x)
        if br != tuple(self.branch):
            raise ValueError(f"point lies on branch {br}, chart is {self.branch}")
        return np.concatenate([u, [s]])


def product_chart_at(quadric: Quadric, x, s: float, curve, velocity, angle=None) -> tuple[ProductChart, np.ndarray]:
    """Chart on the branch containing ``x`` together with the parameters of ``(x, s)``."""
    u, br = quadric.locate(x)
    chart = ProductChart(quadric, curve, velocity, br, angle)
    return chart, np.concatenate([u, [s]])
