"""Lagrangian self-similar solutions built from a closed curve ``w(s)`` in (C*)^n.

The state ``(w_1, ..., w_n, theta)`` evolves by

    w_j' = lambda_j e^{i theta} conj(prod_{m != j} w_m),
    theta' = alpha Im(e^{-i theta} w_1 ... w_n).

Along any solution ``|w_j|^2 / lambda_j - |w_1|^2 / lambda_1`` is constant.
When the solution is periodic with period ``T`` the sets

    V_t = {(x_1 w_1(s), ..., x_n w_n(s)) : sum lambda_j x_j^2 = 2t, 0 <= s < T}

are Lagrangian with angle ``theta(s)`` and satisfy ``alpha F_perp = 2t H``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq, least_squares

from .geometry import Immersion
from .integer_family import OffSliceError
from .quadric import ProductChart, Quadric

MIN_MODULUS = 1e-9
DEFAULT_TOL = 1e-10
ORBIT_TOL = 1e-12
ON_SLICE_TOL = 1e-10


class IntegrationError(RuntimeError):
    pass


class ModulusCollapseError(IntegrationError):
    pass


class PeriodicOrbitError(RuntimeError):
    pass


@dataclass(frozen=True)
class OdeParams:
    """Weights with the positive entries first, and the angle coupling ``alpha``."""

    lambdas: tuple[float, ...]
    alpha: float = 1.0
    require_unit_bound: bool = False

    def __post_init__(self):
        lam = tuple(float(v) for v in self.lambdas)
        object.__setattr__(self, "lambdas", lam)
        if len(lam) < 2:
            raise ValueError("the system needs n >= 2")
        if any(v == 0 for v in lam):
            raise ValueError("lambda entries must be nonzero")
        k = sum(v > 0 for v in lam)
        if not all(v > 0 for v in lam[:k]):
            raise ValueError("positive lambdas must be listed first")
        if self.require_unit_bound and any(abs(v) < 1 for v in lam):
            raise ValueError("density bounds assume |lambda_j| >= 1")

    @property
    def n(self) -> int:
        return len(self.lambdas)

    @property
    def k(self) -> int:
        return sum(v > 0 for v in self.lambdas)

    @cached_property
    def lam(self) -> np.ndarray:
        return np.asarray(self.lambdas)


@dataclass(frozen=True)
class OdeState:
    w: tuple[complex, ...]
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(complex(v) for v in self.w))
        object.__setattr__(self, "theta", float(self.theta))

    @property
    def w_array(self) -> np.ndarray:
        return np.asarray(self.w, dtype=complex)

    def to_vector(self) -> np.ndarray:
        w = self.w_array
        return np.concatenate([w.real, w.imag, [self.theta]])

    @classmethod
    def from_vector(cls, y) -> "OdeState":
        y = np.asarray(y, dtype=float)
        n = (len(y) - 1) // 2
        return cls(tuple(y[:n] + 1j * y[n : 2 * n]), float(y[2 * n]))

    @classmethod
    def turning_point(cls, radii) -> "OdeState":
        """Real positive ``w`` with ``theta = -pi/2``, where ``e^{-i theta} prod w`` is imaginary."""
        return cls(tuple(complex(r) for r in radii), -math.pi / 2)


def _derivative(lam: np.ndarray, alpha: float, w: np.ndarray, theta: np.ndarray):
    """Vectorised right-hand side over leading axes of ``w`` (shape (..., n))."""
    prod = np.prod(w, axis=-1)
    phase = np.exp(1j * np.asarray(theta))
    dw = lam * phase[..., None] * np.conj(prod[..., None] / w)
    dtheta = alpha * np.imag(np.conj(phase) * prod)
    return dw, dtheta


def rhs(params: OdeParams, state: OdeState) -> OdeState:
    """Time derivative of ``state``, returned in state form."""
    dw, dth = _derivative(params.lam, params.alpha, state.w_array, state.theta)
    return OdeState(tuple(dw), float(dth))


def _vector_field(params: OdeParams):
    lam, alpha, n = params.lam, params.alpha, params.n

    def f(_s, y):
        w = y[:n] + 1j * y[n : 2 * n]
        dw, dth = _derivative(lam, alpha, w, y[2 * n])
        return np.concatenate([dw.real, dw.imag, [dth]])

    return f


def conserved(params: OdeParams, w) -> np.ndarray:
    """``Q_j = |w_j|^2 / lambda_j - |w_1|^2 / lambda_1`` along the last axis."""
    m = np.abs(np.asarray(w)) ** 2 / params.lam
    return m - m[..., :1]


@dataclass(frozen=True)
class Trajectory:
    """Integrated solution: output samples plus invariant monitoring."""

    params: OdeParams
    s: np.ndarray
    y: np.ndarray  # (len(s), 2n+1)
    q_drift: float
    min_modulus: float
    nfev: int
    dense: object = field(repr=False, compare=False, default=None)

    @property
    def w(self) -> np.ndarray:
        n = self.params.n
        return self.y[:, :n] + 1j * self.y[:, n : 2 * n]

    @property
    def theta(self) -> np.ndarray:
        return self.y[:, -1]

    def state(self, i: int = -1) -> OdeState:
        return OdeState.from_vector(self.y[i])

    @property
    def q_drift_rate(self) -> float:
        span = float(abs(self.s[-1] - self.s[0])) if len(self.s) > 1 else 0.0
        return self.q_drift / max(span, 1.0)


def integrate(
    params: OdeParams,
    initial: OdeState,
    s_end: float,
    tol: float = DEFAULT_TOL,
    s_eval=None,
    min_modulus: float = MIN_MODULUS,
) -> Trajectory:
    """Integrate from ``s = 0`` with the Dormand-Prince 5(4) pair.

    ``tol`` bounds the local error (used as both relative and absolute
    tolerance).  Output is at ``s_eval`` when given, otherwise at the
    accepted steps.  Raises :class:`ModulusCollapseError` if some ``|w_j|``
    falls below ``min_modulus``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    y0 = initial.to_vector()
    if np.min(np.abs(initial.w_array)) < min_modulus:
        raise ModulusCollapseError("initial state has a vanishing component")
    if s_end == 0:
        return Trajectory(params, np.zeros(1), y0[None, :], 0.0, float(np.min(np.abs(initial.w_array))), 0)
    n = params.n

    def collapse(_s, y):
        return np.min(y[:n] ** 2 + y[n : 2 * n] ** 2) - min_modulus**2

    collapse.terminal = True
    sol = solve_ivp(
        _vector_field(params),
        (0.0, float(s_end)),
        y0,
        method="RK45",
        rtol=tol,
        atol=tol,
        t_eval=None if s_eval is None else np.asarray(s_eval, dtype=float),
        events=collapse,
        dense_output=True,
    )
    if sol.status == 1:
        raise ModulusCollapseError(f"|w_j| < {min_modulus} at s = {sol.t_events[0][0]:.6g}")
    if sol.status != 0:
        raise IntegrationError(sol.message)
    # invariants are monitored on every accepted step, independent of s_eval
    ys = sol.sol(np.concatenate([[0.0], sol.sol.ts])) if s_eval is not None else sol.y
    ws = ys[:n] + 1j * ys[n : 2 * n]
    q = conserved(params, ws.T)
    drift = float(np.max(np.abs(q - q[0]))) if len(q) else 0.0
    return Trajectory(
        params=params,
        s=sol.t,
        y=sol.y.T.copy(),
        q_drift=drift,
        min_modulus=float(np.min(np.abs(ws))),
        nfev=int(sol.nfev),
        dense=sol.sol,
    )


def _state_distance(a: np.ndarray, b: np.ndarray, n: int) -> float:
    """Euclidean distance of two state vectors with ``theta`` compared on the circle."""
    dw = a[: 2 * n] - b[: 2 * n]
    dth = (a[2 * n] - b[2 * n] + math.pi) % (2 * math.pi) - math.pi
    return float(math.sqrt(np.dot(dw, dw) + dth * dth))


@dataclass(frozen=True)
class FourierSeries:
    """Trigonometric interpolant of ``T``-periodic samples on an odd equispaced grid."""

    period: float
    coeffs: np.ndarray  # (N, m) complex, numpy FFT ordering, already divided by N

    @classmethod
    def fit(cls, period: float, samples: np.ndarray) -> "FourierSeries":
        samples = np.asarray(samples)
        if samples.shape[0] % 2 == 0:
            raise ValueError("use an odd number of samples")
        return cls(period, np.fft.fft(samples, axis=0) / samples.shape[0])

    @cached_property
    def _freq(self) -> np.ndarray:
        n = self.coeffs.shape[0]
        return 2 * math.pi * np.fft.fftfreq(n, d=1.0 / n) / self.period

    def __call__(self, s, derivative: int = 0) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        basis = np.exp(1j * s[..., None] * self._freq)
        c = self.coeffs * (1j * self._freq[:, None]) ** derivative
        return basis @ c

    @property
    def tail(self) -> float:
        """Largest coefficient among the top tenth of frequencies (resolution check)."""
        n = self.coeffs.shape[0]
        k = np.abs(np.fft.fftfreq(n, d=1.0 / n))
        return float(np.max(np.abs(self.coeffs[k >= 0.45 * n])))


@dataclass(frozen=True)
class PeriodicOrbit:
    """Closed solution with its period, closure data and a smooth interpolant."""

    params: OdeParams
    initial: OdeState
    period: float
    samples_s: np.ndarray
    samples: np.ndarray  # (N, 2n+1) states on [0, T)
    closure_residual: float
    q_drift: float
    winding: int  # theta(T) - theta(0) = 2 pi winding

    @cached_property
    def _w_series(self) -> FourierSeries:
        n = self.params.n
        return FourierSeries.fit(self.period, self.samples[:, :n] + 1j * self.samples[:, n : 2 * n])

    @cached_property
    def _theta_series(self) -> FourierSeries:
        s = self.samples_s
        periodic = self.samples[:, -1] - self._theta_slope * s
        return FourierSeries.fit(self.period, periodic[:, None].astype(complex))

    @property
    def _theta_slope(self) -> float:
        return 2 * math.pi * self.winding / self.period

    def w(self, s) -> np.ndarray:
        return self._w_series(s)

    def theta(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        return np.real(self._theta_series(s)[..., 0]) + self._theta_slope * s

    def state(self, s: float) -> OdeState:
        return OdeState(tuple(self.w(s)), float(self.theta(s)))

    def velocity(self, s) -> np.ndarray:
        """``w'(s)`` from the vector field at the interpolated state."""
        dw, _ = _derivative(self.params.lam, self.params.alpha, self.w(s), self.theta(s))
        return dw

    @property
    def r_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.params.n
        r = np.abs(self.samples[:, :n] + 1j * self.samples[:, n : 2 * n])
        return r.min(axis=0), r.max(axis=0)

    @property
    def interpolation_error(self) -> float:
        return max(self._w_series.tail, self._theta_series.tail)

    def periodicity_defect(self, fn, n_points: int = 257) -> float:
        """``max |fn(s + T) - fn(s)|`` over a grid, for a function of ``s``."""
        s = np.linspace(0.0, self.period, n_points, endpoint=False)
        return float(np.max(np.abs(np.asarray(fn(s + self.period)) - np.asarray(fn(s)))))


def _minimal_period(params, y0, dense, period, tol, max_divisor=8) -> float:
    """Smallest ``period / d`` (``d <= max_divisor``) that is still a return."""
    n = params.n
    best = period
    for d in range(2, max_divisor + 1):
        cand = period / d
        if _state_distance(dense(cand), y0, n) <= 10 * tol:
            best = cand
    return best


def _refine_return(params, y0, dense, guess, width):
    """Stationary point of the return distance near ``guess``."""
    n = params.n
    f = _vector_field(params)

    def g(s):
        y = dense(s)
        d = y - y0
        d[2 * n] = (d[2 * n] + math.pi) % (2 * math.pi) - math.pi
        return float(np.dot(d, f(s, y)))

    lo, hi = guess - width, guess + width
    if g(lo) * g(hi) > 0:
        return guess
    return brentq(g, lo, hi, xtol=1e-14, rtol=1e-15)


def _first_return(params, y0, dense, s_max, threshold, grid_step):
    n = params.n
    s = np.arange(grid_step, s_max, grid_step)
    ys = dense(s).T
    dw = ys[:, : 2 * n] - y0[: 2 * n]
    dth = (ys[:, 2 * n] - y0[2 * n] + math.pi) % (2 * math.pi) - math.pi
    dist = np.sqrt(np.sum(dw**2, axis=1) + dth**2)
    # skip the initial departure: wait until the trajectory has left the seed
    left = np.argmax(dist > 4 * threshold)
    if dist[left] <= 4 * threshold:
        return None
    for i in range(max(left, 1), len(s) - 1):
        if dist[i] <= dist[i - 1] and dist[i] <= dist[i + 1] and dist[i] < threshold:
            return float(s[i])
    return None


def find_periodic(
    params: OdeParams,
    seed: OdeState,
    tol: float = 1e-9,
    s_max: float = 100.0,
    period_hint: float | None = None,
    trust_radius: float = 1e-3,
    n_samples: int = 1025,
    threshold: float = 1e-2,
) -> PeriodicOrbit:
    """Locate the periodic orbit through (or near) ``seed``.

    The first return of the full state (``theta`` on the circle) is found on a
    grid, ``T`` is refined by root finding on the derivative of the return
    distance, and if the residual still exceeds ``tol`` the seed and period
    are corrected by Gauss-Newton shooting, with the seed confined to
    ``trust_radius`` of its original value.  Returns with the minimal period.
    """
    n = params.n
    y_seed = seed.to_vector()
    s_top = min(s_max, 1.5 * period_hint) if period_hint else s_max
    traj = integrate(params, seed, s_top, tol=ORBIT_TOL)
    if period_hint is not None:
        guess = float(period_hint)
        width = 0.02 * period_hint
    else:
        step = 1e-2
        guess = _first_return(params, y_seed, traj.dense, s_top, threshold, step)
        if guess is None:
            raise PeriodicOrbitError(f"no return within s <= {s_top}")
        width = 2 * step
    period = _refine_return(params, y_seed, traj.dense, guess, width)
    residual = _state_distance(traj.dense(period), y_seed, n)

    if residual > tol:
        y_seed, period = _shoot(params, y_seed, period, trust_radius)
        traj = integrate(params, OdeState.from_vector(y_seed), 1.05 * period, tol=ORBIT_TOL)
        residual = _state_distance(traj.dense(period), y_seed, n)
        if residual > tol:
            raise PeriodicOrbitError(f"shooting did not converge: residual {residual:.3e}")

    period = _minimal_period(params, y_seed, traj.dense, period, tol)
    residual = _state_distance(traj.dense(period), y_seed, n)
    return _build_orbit(params, OdeState.from_vector(y_seed), period, residual, traj, n_samples)


def _shoot(params, y0, period, trust_radius):
    n = params.n
    f = _vector_field(params)

    def residual(z):
        y, T = z[:-1], z[-1]
        sol = solve_ivp(f, (0.0, T), y, method="RK45", rtol=ORBIT_TOL, atol=ORBIT_TOL)
        d = sol.y[:, -1] - y
        d[2 * n] = (d[2 * n] + math.pi) % (2 * math.pi) - math.pi
        return d

    z0 = np.concatenate([y0, [period]])
    lo = z0 - trust_radius
    hi = z0 + trust_radius
    lo[-1], hi[-1] = 0.9 * period, 1.1 * period
    sol = least_squares(residual, z0, bounds=(lo, hi), xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=50)
    return sol.x[:-1], float(sol.x[-1])


def _build_orbit(params, initial, period, residual, traj, n_samples) -> PeriodicOrbit:
    s = np.linspace(0.0, period, n_samples, endpoint=False)
    y = traj.dense(s).T
    winding = int(round((traj.dense(period)[-1] - y[0, -1]) / (2 * math.pi)))
    return PeriodicOrbit(
        params=params,
        initial=initial,
        period=float(period),
        samples_s=s,
        samples=y,
        closure_residual=float(residual),
        q_drift=traj.q_drift,
        winding=winding,
    )


def orbit_from_seed(seed: "SeedRecord", tol: float = 1e-9) -> PeriodicOrbit:
    return find_periodic(seed.params, seed.state, tol=tol, period_hint=seed.period_hint)


def reduced_return(params: OdeParams, radii, s_max: float = 60.0, tol: float = 1e-11):
    """Return time and phase advances from a turning point.

    Starting at real positive ``w`` with ``theta = -pi/2``, the moduli and
    ``e^{-i theta} prod w`` return after a time ``T_y``; the phases
    ``arg w_j`` advance by ``2 pi * advance[j]``.  The full state is periodic
    with period ``m T_y`` when ``m * advance`` is integral.
    """
    radii = np.asarray(radii, dtype=float)
    n = params.n
    y0 = OdeState.turning_point(radii).to_vector()
    f = _vector_field(params)
    prod = float(np.prod(radii))
    # a = Re(e^{-i theta} prod w) starts at 0 with slope |P|^2 (sum lambda_j / r_j^2 + alpha)
    slope = prod**2 * (np.sum(params.lam / radii**2) + params.alpha)

    def crossing(_s, y):
        w = y[:n] + 1j * y[n : 2 * n]
        return float(np.real(np.exp(-1j * y[2 * n]) * np.prod(w)))

    crossing.direction = 1 if slope > 0 else -1
    sol = solve_ivp(f, (0.0, s_max), y0, method="DOP853", rtol=tol, atol=tol, events=crossing, dense_output=True)
    times = [s for s in sol.t_events[0] if s > 1e-6]
    if not times:
        return math.inf, np.full(n, np.nan)
    t_y = float(times[0])
    s = np.linspace(0.0, t_y, 801)
    y = sol.sol(s)
    phases = np.unwrap(np.angle(y[:n] + 1j * y[n : 2 * n]), axis=1)
    return t_y, (phases[:, -1] - phases[:, 0]) / (2 * math.pi)


@dataclass(frozen=True)
class SeedRecord:
    name: str
    params: OdeParams
    state: OdeState
    period_hint: float

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def k(self) -> int:
        return self.params.k

    def to_dict(self) -> dict:
        w = self.state.w_array
        return {
            "name": self.name,
            "n": self.n,
            "k": self.k,
            "lambdas": list(self.params.lambdas),
            "alpha": self.params.alpha,
            "w_re": [float(v) for v in w.real],
            "w_im": [float(v) for v in w.imag],
            "theta": self.state.theta,
            "period_hint": self.period_hint,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SeedRecord":
        params = OdeParams(tuple(d["lambdas"]), float(d.get("alpha", 1.0)))
        if params.n != d["n"] or params.k != d["k"]:
            raise ValueError(f"seed {d.get('name')}: n/k do not match lambdas")
        w = np.asarray(d["w_re"], dtype=float) + 1j * np.asarray(d["w_im"], dtype=float)
        return cls(d.get("name", ""), params, OdeState(tuple(w), d["theta"]), float(d["period_hint"]))


def default_seed_path():
    return resources.files("lagflow") / "data" / "periodic_seeds.json"


def load_seeds(path: str | Path | None = None) -> list[SeedRecord]:
    src = default_seed_path() if path is None else Path(path)
    data = json.loads(src.read_text())
    return [SeedRecord.from_dict(d) for d in data["seeds"]]


def find_seed(n: int, k: int, path=None, lambdas=None) -> SeedRecord:
    for rec in load_seeds(path):
        if rec.n == n and rec.k == k and (lambdas is None or tuple(map(float, lambdas)) == rec.params.lambdas):
            return rec
    raise KeyError(f"no shipped seed with n={n}, k={k}")


@dataclass(frozen=True)
class OdeSlice:
    """``V_t`` over ``sum lambda_j x_j^2 = 2t`` swept by a periodic orbit."""

    orbit: PeriodicOrbit
    t: float

    @property
    def C(self) -> float:
        return 2.0 * self.t

    @property
    def params(self) -> OdeParams:
        return self.orbit.params

    @property
    def alpha(self) -> float:
        return self.orbit.params.alpha

    @property
    def period(self) -> float:
        return self.orbit.period

    @property
    def kind(self) -> str:
        c = self.C * np.sign(self.alpha)
        return "shrinker" if c < 0 else "expander" if c > 0 else "cone"

    @cached_property
    def quadric(self) -> Quadric:
        return Quadric(self.params.lambdas, self.C)

    def curve(self, s):
        return self.orbit.w(s)

    def velocity(self, s):
        return self.orbit.velocity(s)

    def moduli_sq(self, s) -> np.ndarray:
        return np.abs(self.orbit.w(s)) ** 2

    def closed_angle(self, s):
        return np.mod(self.orbit.theta(s), 2 * np.pi)

    def check_on_slice(self, x) -> None:
        x = np.asarray(x, dtype=float)
        lam = self.params.lam
        res = np.sum(lam * x**2) - self.C
        scale = max(1.0, abs(self.C), float(np.sum(np.abs(lam) * x**2)))
        if abs(res) > ON_SLICE_TOL * scale:
            raise OffSliceError(f"sum lambda x^2 - 2t = {res:.3e}")

    def _angle_of_u(self, u):
        return self.closed_angle(np.asarray(u)[..., -1])

    def chart(self, branch=(1.0, 1.0)) -> ProductChart:
        return ProductChart(self.quadric, self.curve, self.velocity, tuple(branch), self._angle_of_u)

    def immersion(self, branch=(1.0, 1.0)) -> Immersion:
        return self.chart(branch).immersion()

    def chart_at(self, x, s: float) -> tuple[Immersion, np.ndarray]:
        self.check_on_slice(x)
        u, br = self.quadric.locate(x)
        return self.immersion(br), np.concatenate([u, [s]])

    def evaluate(self, x: np.ndarray, s: np.ndarray, w=None):
        """Position, mean curvature and Radon density at quadrature nodes.

        With ``u = e^{-i theta} prod w = a + ib`` and
        ``Q = sum(lambda^2 x^2 / r^2)``:
        ``H = i alpha b (x w') / (|prod w|^2 Q)`` and the area density per
        ``dS ds`` is ``prod(r^2) Q / sqrt(sum lambda^2 x^2)``.
        """
        lam, alpha = self.params.lam, self.alpha
        s = np.asarray(s, dtype=float)
        w = self.orbit.w(s) if w is None else w
        theta = self.orbit.theta(s)
        dw, _ = _derivative(lam, alpha, w, theta)
        prod = np.prod(w, axis=-1)
        b = np.imag(np.exp(-1j * theta) * prod)
        r2 = np.abs(w) ** 2
        q = np.sum(lam**2 * x**2 / r2, axis=-1)
        p2 = np.abs(prod) ** 2
        pos = x * w
        h = 1j * (alpha * b / (p2 * q))[..., None] * x * dw
        radon = np.prod(r2, axis=-1) * q / np.sqrt(np.sum(lam**2 * x**2, axis=-1))
        return pos, h, radon


def immerse_ode(slc: OdeSlice, x, s: float) -> np.ndarray:
    """``(x_1 w_1(s), ..., x_n w_n(s))`` for on-slice ``x``."""
    slc.check_on_slice(x)
    return np.asarray(x, dtype=float) * slc.orbit.w(s)


def density_closed_form_ode(slc: OdeSlice, x, s: float) -> tuple[float, float, float]:
    """``(|F|^2, |H|^2, Radon factor)`` at an on-slice point ``x != 0``.

    ``|H|^2 = alpha^2 sin^2(phi - theta) / sum(lambda^2 x^2 / r^2)`` with
    ``phi = sum arg w_j``.
    """
    x = np.asarray(x, dtype=float)
    if not np.any(x):
        raise ValueError("the cone vertex x = 0 is singular")
    slc.check_on_slice(x)
    lam = slc.params.lam
    w = slc.orbit.w(s)
    r2 = np.abs(w) ** 2
    q = float(np.sum(lam**2 * x**2 / r2))
    phi = float(np.sum(np.angle(w)))
    theta = float(slc.orbit.theta(s))
    h2 = slc.alpha**2 * math.sin(phi - theta) ** 2 / q
    radon = float(np.prod(r2)) * q / math.sqrt(float(np.sum(lam**2 * x**2)))
    return float(np.sum(r2 * x**2)), h2, radon
