"""Tensor quadrature of the mass and first variation of a slice ``V_t``.

A slice is swept by ``F(x, s) = (x_j w_j(s))`` with ``x`` on the quadric
``sum lambda_j x_j^2 = C`` written as ``x = a(r) p + b(r) q`` (see
:mod:`lagflow.quadric`).  The measure ``d||V_t||`` is

    radon(x, s) * volume_form(r, p, q) * dr dS+ dS- ds,

so every functional reduces to an integral over ``(r, p, q, s)``.  The
factors are discretised as follows:

* ``s``: trapezoid rule over one period (spectrally accurate, periodic);
* ellipsoids: Gauss-Legendre in polar angles, trapezoid in the azimuth;
  a one-point factor S^0 contributes its two points with unit weight;
* ``r``: Gauss-Legendre in ``u`` with ``r = delta sinh(u asinh(r_max / delta))``
  and ``delta = sqrt|C|``, which resolves the neck of width ``sqrt|C|``
  near the cone vertex for every ``t``.

The upper limit ``r_max`` is computed per ``(p, q, s)``: exactly for a test
function centred at the origin, otherwise from a ball enclosing its support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Protocol

import numpy as np

from .quadric import Ellipsoid

NECK_FLOOR = 1e-3


class Slice(Protocol):
    """What the quadrature needs from a family slice."""

    t: float
    C: float
    period: float

    @property
    def quadric(self): ...

    def curve(self, s): ...

    def evaluate(self, x, s, w=None): ...


@dataclass(frozen=True)
class TestFunction:
    """Cubic bump ``A max(0, 1 - |z - c|^2 / R^2)^3`` on C^n."""

    __test__ = False  # not a pytest class despite the name

    center: tuple[complex, ...]
    radius: float
    amplitude: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(complex(c) for c in self.center))
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    @classmethod
    def at_origin(cls, n: int, radius: float = 1.0, amplitude: float = 1.0) -> "TestFunction":
        return cls((0j,) * n, radius, amplitude)

    @property
    def c(self) -> np.ndarray:
        return np.asarray(self.center, dtype=complex)

    @property
    def centered(self) -> bool:
        return not np.any(self.c)

    def support_ball(self) -> tuple[np.ndarray, float]:
        return self.c, self.radius

    def _rho(self, z):
        d = np.asarray(z) - self.c
        return d, np.sum(np.abs(d) ** 2, axis=-1) / self.radius**2

    def value(self, z) -> np.ndarray:
        _, rho = self._rho(z)
        return self.amplitude * np.maximum(0.0, 1.0 - rho) ** 3

    def gradient(self, z) -> np.ndarray:
        """Real gradient on R^{2n}, packed as a complex vector ``d/dx + i d/dy``."""
        d, rho = self._rho(z)
        coef = -6.0 * self.amplitude * np.maximum(0.0, 1.0 - rho) ** 2 / self.radius**2
        return coef[..., None] * d


@dataclass(frozen=True)
class BumpSum:
    """Finite linear combination of test functions."""

    terms: tuple[tuple[float, TestFunction], ...]

    @property
    def centered(self) -> bool:
        return False

    def support_ball(self) -> tuple[np.ndarray, float]:
        centers = [f.c for _, f in self.terms]
        mid = np.mean(centers, axis=0)
        rad = max(np.linalg.norm(f.c - mid) + f.radius for _, f in self.terms)
        return mid, float(rad)

    def value(self, z):
        return sum(a * f.value(z) for a, f in self.terms)

    def gradient(self, z):
        return sum(a * f.gradient(z) for a, f in self.terms)


def directional(grad: np.ndarray, v: np.ndarray) -> np.ndarray:
    """``D phi . v`` for a packed gradient and a vector of C^n."""
    return np.real(np.sum(np.conj(grad) * v, axis=-1))


@dataclass(frozen=True)
class GridSpec:
    """Node counts per direction."""

    n_r: int = 48
    n_polar: int = 24
    n_azimuth: int = 48
    n_s: int = 96

    def scaled(self, factor: float) -> "GridSpec":
        return GridSpec(*(max(2, int(round(v * factor))) for v in (self.n_r, self.n_polar, self.n_azimuth, self.n_s)))

    def as_dict(self) -> dict:
        return {"n_r": self.n_r, "n_polar": self.n_polar, "n_azimuth": self.n_azimuth, "n_s": self.n_s}

    def label(self) -> str:
        return f"r{self.n_r}xp{self.n_polar}xa{self.n_azimuth}xs{self.n_s}"


def _gauss(n: int, lo: float, hi: float):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (hi - lo) * x + 0.5 * (hi + lo), 0.5 * (hi - lo) * w


def ellipsoid_nodes(ell: Ellipsoid, grid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    """Points of the ellipsoid and weights for ``integral f dS``."""
    if ell.m == 1:
        v = 1.0 / math.sqrt(ell.weights[0])
        return np.array([[v], [-v]]), np.ones(2)
    axes, weights = [], []
    for lo, hi in ell.angle_box():
        if hi - lo > np.pi:
            n = grid.n_azimuth
            axes.append(np.arange(n) * (hi - lo) / n)
            weights.append(np.full(n, (hi - lo) / n))
        else:
            x, w = _gauss(grid.n_polar, lo, hi)
            axes.append(x)
            weights.append(w)
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(axes))
    wt = np.ones(len(mesh))
    for i, w in enumerate(np.meshgrid(*weights, indexing="ij")):
        wt = wt * w.reshape(-1)
    return ell.point(mesh), wt * ell.area_element(mesh)


@dataclass(frozen=True)
class FunctionalReport:
    """Quadrature of the Brakke functionals on one slice."""

    t: float
    mass: float
    phi_h2: float
    dphi_h: float
    grid: GridSpec
    error_estimate: float
    nodes: int
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def variation(self) -> float:
        """``-int phi |H|^2 + int D phi . H``."""
        return -self.phi_h2 + self.dphi_h


@dataclass(frozen=True)
class _Sums:
    mass: float
    phi_h2: float
    dphi_h: float
    nodes: int


def _r_limits(quadric, phi, p, q, moduli_sq):
    """Largest ``r`` at which ``F`` can meet the support of ``phi``.

    ``|F|^2 = a^2 sum_P m_j p_j^2 + b^2 sum_N m_j q_j^2`` with ``m_j = |w_j|^2``.
    """
    k = quadric.k
    A = np.sum(moduli_sq[:k] * p**2, axis=-1)[:, None]
    B = np.sum(moduli_sq[k:] * q**2, axis=-1)[None, :]
    center, radius = phi.support_ball()
    if phi.centered:
        r2 = (radius**2 - quadric.c_plus * A - quadric.c_minus * B) / (A + B)
        return np.sqrt(np.maximum(r2, 0.0))
    reach = float(np.linalg.norm(center)) + radius
    return reach / np.sqrt(A + B)


def _integrate(slc: Slice, phi, grid: GridSpec) -> _Sums:
    quadric = slc.quadric
    p_pts, p_wt = ellipsoid_nodes(quadric.plus, grid)
    q_pts, q_wt = ellipsoid_nodes(quadric.minus, grid)
    n_s = grid.n_s
    s_nodes = np.arange(n_s) * (slc.period / n_s)
    s_wt = slc.period / n_s
    u, u_wt = _gauss(grid.n_r, 0.0, 1.0)
    delta = max(math.sqrt(abs(slc.C)), NECK_FLOOR * phi.support_ball()[1])
    pq_wt = p_wt[:, None] * q_wt[None, :]

    per_s = np.zeros((n_s, 3))
    for i, s in enumerate(s_nodes):
        w = slc.curve(np.asarray(s))
        r_max = _r_limits(quadric, phi, p_pts, q_pts, np.abs(w) ** 2)
        live = r_max > 0
        if not np.any(live):
            continue
        rm = np.where(live, r_max, 1.0)
        stretch = np.arcsinh(rm / delta)
        r = delta * np.sinh(u * stretch[..., None])  # (Mp, Mm, n_r)
        dr = delta * np.cosh(u * stretch[..., None]) * stretch[..., None] * u_wt
        a, b = quadric.radii(r)
        p = p_pts[:, None, None, :]
        q = q_pts[None, :, None, :]
        x = np.concatenate([a[..., None] * np.broadcast_to(p, r.shape + p.shape[-1:]),
                            b[..., None] * np.broadcast_to(q, r.shape + q.shape[-1:])], axis=-1)
        pos, h, radon = slc.evaluate(x, np.asarray(s), w=w)
        vol = quadric.volume_form(r, p, q)
        weight = np.where(live[..., None], dr * vol * radon * pq_wt[..., None], 0.0)
        val = phi.value(pos)
        per_s[i, 0] = np.sum(weight * val)
        per_s[i, 1] = np.sum(weight * val * np.sum(np.abs(h) ** 2, axis=-1))
        per_s[i, 2] = np.sum(weight * directional(phi.gradient(pos), h))
    totals = s_wt * np.sum(per_s, axis=0)
    nodes = len(p_pts) * len(q_pts) * grid.n_r * n_s
    return _Sums(float(totals[0]), float(totals[1]), float(totals[2]), nodes)


def functionals(slc: Slice, phi, grid: GridSpec = GridSpec(), estimate_error: bool = True) -> FunctionalReport:
    """Mass, ``int phi |H|^2`` and ``int D phi . H`` on one slice.

    ``error_estimate`` is the larger change of mass or variation against the
    same rule at half resolution; it bounds the error of the coarse rule and
    is therefore conservative for the reported values.
    """
    fine = _integrate(slc, phi, grid)
    err = float("nan")
    if estimate_error:
        coarse = _integrate(slc, phi, grid.scaled(0.5))
        err = max(
            abs(fine.mass - coarse.mass),
            abs((fine.dphi_h - fine.phi_h2) - (coarse.dphi_h - coarse.phi_h2)),
        )
    return FunctionalReport(slc.t, fine.mass, fine.phi_h2, fine.dphi_h, grid, err, fine.nodes)


def mass(slc: Slice, phi, grid: GridSpec = GridSpec()) -> float:
    return _integrate(slc, phi, grid).mass


def first_variation(slc: Slice, phi, grid: GridSpec = GridSpec()) -> float:
    sums = _integrate(slc, phi, grid)
    return -sums.phi_h2 + sums.dphi_h


def with_grid(report: FunctionalReport, grid: GridSpec) -> FunctionalReport:
    return replace(report, grid=grid)
