"""Pointwise invariant suites for both families.

Each suite samples random chart points, evaluates the finite-difference
geometry of :mod:`lagflow.geometry` and compares it with the closed forms.
Results are :class:`Check` records holding the worst measured value and
its threshold.  ``inject_bug`` flips the sign of the closed-form mean
curvature, a negative control that must make the suite fail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import (
    angle_laplacian,
    lagrangian_angle,
    laplace_beltrami_of_position,
    mean_curvature,
    normal_projection,
    real_inner,
    symplectic_pairing,
    tangent_frame,
)
from .integer_family import IntegerSlice, density_closed_form
from .ode_family import OdeSlice, PeriodicOrbit, density_closed_form_ode, integrate


@dataclass(frozen=True)
class Thresholds:
    symplectic: float = 1e-9
    angle: float = 1e-8
    angle_ode: float = 1e-5
    harmonic: float = 1e-5
    curvature: float = 1e-4
    self_similar: float = 1e-5
    density: float = 1e-5
    orthogonal: float = 1e-10
    metric: float = 1e-9
    q_drift: float = 1e-8
    closure: float = 1e-6
    periodic: float = 1e-6
    flat_curvature: float = 1e-8


@dataclass(frozen=True)
class Check:
    name: str
    measured: float
    threshold: float
    samples: int

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.measured) and self.measured <= self.threshold)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} {self.name}: max {self.measured:.3e} (threshold {self.threshold:.1e}, n={self.samples})"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "measured": self.measured,
            "threshold": self.threshold,
            "samples": self.samples,
            "passed": self.passed,
        }


class _Worst:
    def __init__(self):
        self.values: dict[str, float] = {}
        self.counts: dict[str, int] = {}

    def add(self, name: str, value: float):
        self.values[name] = max(self.values.get(name, 0.0), float(value)) if np.isfinite(value) else math.inf
        self.counts[name] = self.counts.get(name, 0) + 1

    def checks(self, limits: dict[str, float]) -> list[Check]:
        return [Check(k, self.values[k], limits[k], self.counts[k]) for k in self.values]


def _random_chart_point(quadric, rng, r_span: float):
    """Random ``(r, angles+, angles-)`` and branch, away from chart poles."""
    r = rng.uniform(0.05, 1.0) * r_span
    def angles(ell):
        box = ell.angle_box()
        return np.array([rng.uniform(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo)) for lo, hi in box])
    branches = quadric.branches()
    br = branches[rng.integers(len(branches))]
    return r, angles(quadric.plus), angles(quadric.minus), br


def _wrap(d):
    return abs((d + math.pi) % (2 * math.pi) - math.pi)


def _rel(a, b, scale=None):
    scale = np.linalg.norm(b) if scale is None else scale
    return float(np.linalg.norm(a - b) / max(scale, 1e-300))


def _common(w: _Worst, imm, u, h_closed, density):
    """Checks shared by both families at one chart point."""
    frame = tangent_frame(imm, u)
    w.add("symplectic residual", np.max(np.abs(symplectic_pairing(frame))))
    H = mean_curvature(imm, u)
    lb = laplace_beltrami_of_position(imm, u)
    if np.linalg.norm(h_closed) == 0.0:
        # constant angle: H vanishes and relative comparisons are meaningless
        w.add("|H| where the angle is constant", max(np.linalg.norm(H), np.linalg.norm(lb)))
    else:
        w.add("mean curvature vs Laplace-Beltrami of F", _rel(H, lb, max(np.linalg.norm(lb), 1e-12)))
        w.add("mean curvature vs closed form", _rel(h_closed, H, max(np.linalg.norm(H), 1e-12)))
    fperp = normal_projection(imm, u)
    w.add("normal projection orthogonality", np.max(np.abs(real_inner(frame.columns.T, fperp))))
    gram = math.sqrt(frame.gram_det)
    w.add("Gram density vs closed form", abs(gram / density - 1.0))
    return frame, H, fperp


def _h2_check(w, H, h2):
    hh = float(np.vdot(H, H).real)
    if h2 == 0.0:
        return
    w.add("|H|^2 vs closed form", abs(h2 - hh) / max(hh, 1e-12))


def verify_integer(
    slc: IntegerSlice,
    samples: int = 1000,
    seed: int = 0,
    thresholds: Thresholds = Thresholds(),
    inject_bug: bool = False,
    r_span: float | None = None,
) -> list[Check]:
    """Invariant suite for one slice of the integer family."""
    rng = np.random.default_rng(seed)
    q = slc.quadric
    span = r_span if r_span is not None else 1.5 * max(1.0, math.sqrt(abs(slc.C)))
    w = _Worst()
    total = slc.spec.total
    for _ in range(samples):
        r, pp, pm, br = _random_chart_point(q, rng, span)
        s = rng.uniform(0.0, np.pi)
        x = q.point(np.asarray(r), pp, pm, br)
        imm = slc.immersion(br)
        u = np.concatenate([[r], pp, pm, [s]])
        _, h_closed, radon = slc.evaluate(x, np.asarray(s))
        if inject_bug:
            h_closed = -h_closed
        p = q.plus.point(pp, br[0])
        qq = q.minus.point(pm, br[1])
        vol = q.volume_form(r, p, qq) * q.plus.area_element(pp) * q.minus.area_element(pm)
        frame, H, fperp = _common(w, imm, u, h_closed, radon * vol)
        w.add("angle vs (sum lambda) s + pi/2", _wrap(lagrangian_angle(frame) - slc.closed_angle(s)))
        w.add("|Laplacian of angle|", abs(angle_laplacian(imm, u)))
        _h2_check(w, H, density_closed_form(slc, x)[1])
        if total != 0:
            # F_perp = -(C / sum lambda) H = 2t H, tested on the closed-form H
            ratio = -slc.C / total
            w.add("self-similarity F_perp - 2tH", _rel(fperp, ratio * h_closed, np.linalg.norm(fperp) + np.linalg.norm(h_closed)))
        g0 = tangent_frame(imm, np.concatenate([u[:-1], [0.0]])).metric
        w.add("metric independent of s", np.max(np.abs(frame.metric - g0)))
    limits = {
        "symplectic residual": thresholds.symplectic,
        "mean curvature vs Laplace-Beltrami of F": thresholds.curvature,
        "mean curvature vs closed form": thresholds.curvature,
        "|H| where the angle is constant": thresholds.flat_curvature,
        "normal projection orthogonality": thresholds.orthogonal,
        "Gram density vs closed form": thresholds.density,
        "angle vs (sum lambda) s + pi/2": thresholds.angle,
        "|Laplacian of angle|": thresholds.harmonic,
        "|H|^2 vs closed form": thresholds.curvature,
        "self-similarity F_perp - 2tH": thresholds.self_similar,
        "metric independent of s": thresholds.metric,
    }
    return w.checks(limits)


def verify_ode(
    orbit: PeriodicOrbit,
    t: float,
    samples: int = 200,
    seed: int = 0,
    thresholds: Thresholds = Thresholds(),
    inject_bug: bool = False,
) -> list[Check]:
    """Invariant suite for one slice of the ODE family plus orbit integrity."""
    rng = np.random.default_rng(seed)
    slc = OdeSlice(orbit, t)
    q = slc.quadric
    span = 1.5 * max(1.0, math.sqrt(abs(slc.C)))
    w = _Worst()
    for _ in range(samples):
        r, pp, pm, br = _random_chart_point(q, rng, span)
        s = rng.uniform(0.0, orbit.period)
        x = q.point(np.asarray(r), pp, pm, br)
        imm = slc.immersion(br)
        u = np.concatenate([[r], pp, pm, [s]])
        _, h_closed, radon = slc.evaluate(x, np.asarray(s))
        if inject_bug:
            h_closed = -h_closed
        p = q.plus.point(pp, br[0])
        qq = q.minus.point(pm, br[1])
        vol = q.volume_form(r, p, qq) * q.plus.area_element(pp) * q.minus.area_element(pm)
        frame, H, fperp = _common(w, imm, u, h_closed, radon * vol)
        w.add("angle vs theta(s)", _wrap(lagrangian_angle(frame) - slc.closed_angle(s)))
        _h2_check(w, H, density_closed_form_ode(slc, x, s)[1])
        lhs = slc.alpha * fperp
        rhs_ = slc.C * h_closed
        w.add("self-similarity alpha F_perp - C H", _rel(lhs, rhs_, np.linalg.norm(lhs) + np.linalg.norm(rhs_)))

    traj = integrate(orbit.params, orbit.initial, 10.0, tol=1e-10)
    w.add("Q drift per unit s (tol 1e-10)", traj.q_drift_rate)
    w.add("closure residual", orbit.closure_residual)
    lo, hi = orbit.r_bounds
    w.add("1 / min r_j", 1.0 / float(np.min(lo)))
    x_probe = np.ones(orbit.params.n)
    w.add("periodicity of densities", orbit.periodicity_defect(lambda s: _densities_along_s(orbit, x_probe, s)))
    limits = {
        "symplectic residual": thresholds.symplectic,
        "mean curvature vs Laplace-Beltrami of F": thresholds.curvature,
        "mean curvature vs closed form": thresholds.curvature,
        "|H| where the angle is constant": thresholds.flat_curvature,
        "normal projection orthogonality": thresholds.orthogonal,
        "Gram density vs closed form": thresholds.density,
        "angle vs theta(s)": thresholds.angle_ode,
        "|H|^2 vs closed form": thresholds.curvature,
        "self-similarity alpha F_perp - C H": thresholds.self_similar,
        "Q drift per unit s (tol 1e-10)": thresholds.q_drift,
        "closure residual": thresholds.closure,
        "1 / min r_j": 1e9,
        "periodicity of densities": thresholds.periodic,
    }
    return w.checks(limits)


def _densities_along_s(orbit: PeriodicOrbit, x, s):
    """Closed-form area factor and ``|H|^2`` along ``s`` at fixed ``x`` (periodicity probe)."""
    lam = orbit.params.lam
    wv = orbit.w(s)
    r2 = np.abs(wv) ** 2
    qv = np.sum(lam**2 * x**2 / r2, axis=-1)
    radon = np.prod(r2, axis=-1) * qv / math.sqrt(float(np.sum(lam**2 * x**2)))
    phase = np.sum(np.angle(wv), axis=-1) - orbit.theta(s)
    return np.stack([radon, np.sin(phase) ** 2 / qv], axis=-1)


def all_passed(checks) -> bool:
    return all(c.passed for c in checks)
