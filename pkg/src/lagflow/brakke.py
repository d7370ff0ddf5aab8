"""Brakke-flow checks for the self-similar families.

For a family of slices that is smooth away from ``t = 0`` the flow is a
Brakke flow without mass loss through the singular time exactly when the
first variation ``-int phi |H|^2 + int D phi . H`` is continuous at
``t = 0`` from both sides.  :func:`limit_check` extrapolates the first
variation along ``t_m = +-t0 2^-m`` and compares the one-sided limits with
the value on the cone.  :func:`smooth_flow_check` confirms
``d/dt ||V_t||(phi) = first variation`` at ``t != 0``, and
:func:`log_divergence_probe` exhibits the logarithmic blow-up of
``int phi |H|^2`` for surfaces (n = 2) when ``phi(0) != 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.stats import linregress

from .geometry import Immersion, tangent_frame
from .quadrature import FunctionalReport, GridSpec, functionals

LIMIT_TOL = 0.02
FLOW_TOL = 0.01
FD_REL_STEP = 0.01

SliceFactory = Callable[[float], object]


def gram_density(imm: Immersion, u) -> float:
    """``sqrt(det g)``: area density of the immersion in chart coordinates."""
    return math.sqrt(tangent_frame(imm, u).gram_det)


def dyadic_times(t0: float, count: int, sign: int) -> list[float]:
    """``sign * |t0| * 2^-m`` for ``m = 0 .. count-1``."""
    return [sign * abs(t0) * 2.0**-m for m in range(count)]


@dataclass(frozen=True)
class Extrapolation:
    limit: float | None
    order: float | None
    monotone: bool
    note: str = ""


def richardson(values: Sequence[float], ratio: float = 2.0, noise: float = 1e-12) -> Extrapolation:
    """Limit of a sequence sampled at ``t0 / ratio^m``.

    The convergence order ``p`` is estimated from the last three values and
    the last two are combined as ``(2^p V_M - V_{M-1}) / (2^p - 1)``.  A tail
    whose successive differences change sign or grow gives no limit, unless
    the differences are already below ``noise`` relative to the values.
    """
    v = np.asarray(values, dtype=float)
    if len(v) < 3:
        raise ValueError("need at least three values")
    d = np.diff(v)
    scale = max(1.0, float(np.max(np.abs(v))))
    if np.all(np.abs(d[-2:]) <= noise * scale):
        return Extrapolation(float(v[-1]), None, True, "converged to noise level")
    if d[-1] * d[-2] <= 0 or abs(d[-1]) >= abs(d[-2]):
        return Extrapolation(None, None, False, "non-monotone tail")
    rho = d[-1] / d[-2]
    p = -math.log(rho, ratio)
    gain = ratio**p
    return Extrapolation(float((gain * v[-1] - v[-2]) / (gain - 1.0)), float(p), True)


@dataclass(frozen=True)
class SideResult:
    sign: int
    reports: tuple[FunctionalReport, ...]
    extrapolation: Extrapolation
    relative_gap: float | None

    @property
    def times(self) -> list[float]:
        return [r.t for r in self.reports]

    @property
    def passed(self) -> bool:
        return self.relative_gap is not None and self.relative_gap <= LIMIT_TOL


@dataclass(frozen=True)
class LimitVerdict:
    """Outcome of comparing one-sided limits with the cone value."""

    cone: FunctionalReport
    sides: tuple[SideResult, ...]
    tolerance: float = LIMIT_TOL

    @property
    def status(self) -> str:
        if any(s.extrapolation.limit is None for s in self.sides):
            return "INCONCLUSIVE"
        if all(s.relative_gap <= self.tolerance for s in self.sides):
            return "PASS"
        return "FAIL"

    @property
    def passed(self) -> bool:
        return self.status == "PASS"

    def lines(self) -> list[str]:
        out = [f"cone variation: {self.cone.variation:.10g}"]
        for s in self.sides:
            side = "t->0-" if s.sign < 0 else "t->0+"
            ex = s.extrapolation
            if ex.limit is None:
                out.append(f"{side}: no limit ({ex.note})")
            else:
                order = "n/a" if ex.order is None else f"{ex.order:.3f}"
                out.append(f"{side}: limit {ex.limit:.10g}, order {order}, relative gap {s.relative_gap:.3e}")
        out.append(f"verdict: {self.status}")
        return out


def limit_check(
    make_slice: SliceFactory,
    phi,
    t0: float = 1e-2,
    count: int = 8,
    grid: GridSpec = GridSpec(),
    sides: Sequence[int] = (-1, 1),
    tolerance: float = LIMIT_TOL,
    estimate_error: bool = True,
) -> LimitVerdict:
    """Compare the extrapolated first variation as ``t -> 0`` with the cone."""
    cone = functionals(make_slice(0.0), phi, grid, estimate_error)
    scale = max(abs(cone.variation), 1e-300)
    results = []
    for sign in sides:
        reports = tuple(functionals(make_slice(t), phi, grid, estimate_error) for t in dyadic_times(t0, count, sign))
        ex = richardson([r.variation for r in reports])
        gap = None if ex.limit is None else abs(ex.limit - cone.variation) / scale
        if ex.limit is not None and cone.variation == 0:
            gap = abs(ex.limit)
        results.append(SideResult(sign, reports, ex, gap))
    return LimitVerdict(cone, tuple(results), tolerance)


@dataclass(frozen=True)
class FlowIdentity:
    t: float
    mass_rate: float
    variation: float

    @property
    def relative_error(self) -> float:
        return abs(self.mass_rate - self.variation) / max(abs(self.variation), 1e-300)

    @property
    def passed(self) -> bool:
        return self.relative_error <= FLOW_TOL


def smooth_flow_check(make_slice: SliceFactory, phi, t: float, grid: GridSpec = GridSpec(), rel_step: float = FD_REL_STEP) -> FlowIdentity:
    """Fourth-order difference of ``t -> ||V_t||(phi)`` against the first variation."""
    if t == 0:
        raise ValueError("the identity is for smooth slices, t != 0")
    h = rel_step * abs(t)
    m = [functionals(make_slice(t + k * h), phi, grid, estimate_error=False).mass for k in (-2, -1, 1, 2)]
    rate = (m[0] - 8 * m[1] + 8 * m[2] - m[3]) / (12 * h)
    var = functionals(make_slice(t), phi, grid, estimate_error=False).variation
    return FlowIdentity(t, rate, var)


@dataclass(frozen=True)
class LogProbe:
    """Fit of ``int phi |H|^2`` against ``log(1/sqrt(-t))``."""

    times: tuple[float, ...]
    phi_h2: tuple[float, ...]
    dphi_h: tuple[float, ...]
    slope: float
    intercept: float
    correlation: float
    fitted_offset: float
    offset_correlation: float
    dphi_h_differences: tuple[float, ...] = field(default=())
    reports: tuple[FunctionalReport, ...] = field(default=(), repr=False)

    @property
    def divergent(self) -> bool:
        return self.slope > 0 and self.correlation > 0.99

    @property
    def dphi_h_settles(self) -> bool:
        d = np.abs(self.dphi_h_differences)
        return bool(len(d) >= 2 and np.all(np.diff(d) < 0))

    def lines(self) -> list[str]:
        verdict = "log-divergent, slope>0" if self.divergent else "no log divergence detected"
        return [
            f"int phi|H|^2 ~ {self.slope:.6g} * log(1/sqrt(-t)) + {self.intercept:.6g}, correlation {self.correlation:.6f}",
            f"fitted offset a = {self.fitted_offset:.6g} for log((a+sqrt(-t))/sqrt(-t)), correlation {self.offset_correlation:.6f}",
            "int Dphi.H successive differences: " + ", ".join(f"{v:.3e}" for v in self.dphi_h_differences),
            verdict,
        ]


def log_divergence_probe(
    make_slice: SliceFactory,
    phi,
    t0: float = 1e-2,
    count: int = 6,
    grid: GridSpec = GridSpec(),
    estimate_error: bool = False,
) -> LogProbe:
    """Evaluate on ``t = -t0 2^-m`` and fit the growth of ``int phi |H|^2``."""
    times = dyadic_times(t0, count, -1)
    reports = [functionals(make_slice(t), phi, grid, estimate_error) for t in times]
    y = np.array([r.phi_h2 for r in reports])
    root = np.sqrt(-np.asarray(times))
    fit = linregress(np.log(1.0 / root), y)

    def neg_corr(log_a):
        return -linregress(np.log((math.exp(log_a) + root) / root), y).rvalue

    best = minimize_scalar(neg_corr, bounds=(-8.0, 3.0), method="bounded")
    dphi = tuple(r.dphi_h for r in reports)
    return LogProbe(
        times=tuple(times),
        phi_h2=tuple(y.tolist()),
        dphi_h=dphi,
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        correlation=float(fit.rvalue),
        fitted_offset=float(math.exp(best.x)),
        offset_correlation=float(-best.fun),
        dphi_h_differences=tuple(np.diff(dphi).tolist()),
        reports=tuple(reports),
    )
