"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The lines are also collected into the terminal summary (see ``conftest.py``).
"""

from __future__ import annotations

import json
import math
import subprocess
import sys
import time
from pathlib import Path

import numpy as np

from lagflow.brakke import limit_check, log_divergence_probe, smooth_flow_check
from lagflow.cli import main
from lagflow.config import RunConfig
from lagflow.geometry import Immersion, mean_curvature, normal_projection, tangent_frame
from lagflow.integer_family import IntegerSlice, LambdaSpec
from lagflow.ode_family import OdeSlice, find_periodic, integrate, load_seeds
from lagflow.quadrature import GridSpec, TestFunction
from lagflow.verify import verify_integer

FIXTURES = Path(__file__).parent / "fixtures"


def _random_node(quadric, rng, span):
    r = rng.uniform(0.05, 1.0) * span
    pp = np.array([rng.uniform(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo)) for lo, hi in quadric.plus.angle_box()])
    pm = np.array([rng.uniform(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo)) for lo, hi in quadric.minus.angle_box()])
    branches = quadric.branches()
    return r, pp, pm, branches[rng.integers(len(branches))]


def _numeric(imm: Immersion) -> Immersion:
    """Same chart with the Jacobian taken by finite differences."""
    return Immersion(imm.dim, imm.eval, None, None, imm.orientation)


def _integer_slice(lambdas, t):
    spec = LambdaSpec(lambdas)
    return IntegerSlice.at_time(spec, t) if spec.total else IntegerSlice.at_level(spec, -2.0 * t if t else 1.0)


# 1 -------------------------------------------------------------------------


def test_criterion_1_lagrangian_and_stationary_angle(report):
    start = time.perf_counter()
    worst = {"symplectic residual": 0.0, "angle vs (sum lambda) s + pi/2": 0.0, "|Laplacian of angle|": 0.0}
    limits = {"symplectic residual": 1e-9, "angle vs (sum lambda) s + pi/2": 1e-8, "|Laplacian of angle|": 1e-5}
    counts = {}
    for lambdas in [(1, 1, -1), (2, 3, -5), (1, -1)]:
        for t in (-0.5, 0.5):
            checks = verify_integer(_integer_slice(lambdas, t), samples=500, seed=11)
            for c in checks:
                if c.name in worst:
                    worst[c.name] = max(worst[c.name], c.measured)
                    counts[lambdas] = counts.get(lambdas, 0) + (c.samples if c.name == "symplectic residual" else 0)
    elapsed = time.perf_counter() - start
    ok = all(worst[k] <= limits[k] for k in worst) and elapsed <= 30 and all(v >= 1000 for v in counts.values())
    report(1, ok, ", ".join(f"{k} {v:.2e}" for k, v in worst.items()) + f", {elapsed:.1f}s")
    assert ok


# 2 -------------------------------------------------------------------------


def test_criterion_2_self_similarity(orbits, report):
    start = time.perf_counter()
    rng = np.random.default_rng(2)
    worst_int = 0.0
    for lambdas, t in [((1, 1, -1), -0.5), ((1, 1, -1), 0.3), ((2, 3, -4), -0.2), ((3, -1, -1), 0.4), ((1, 2, -1, -3), -0.3)]:
        slc = IntegerSlice.at_time(LambdaSpec(lambdas), t)
        ratio = slc.C / slc.spec.total
        span = 1.5 * max(1.0, math.sqrt(abs(slc.C)))
        for _ in range(100):
            r, pp, pm, br = _random_node(slc.quadric, rng, span)
            u = np.concatenate([[r], pp, pm, [rng.uniform(0, math.pi)]])
            imm = slc.immersion(br)
            fperp, h = normal_projection(imm, u), mean_curvature(imm, u)
            worst_int = max(worst_int, np.linalg.norm(fperp + ratio * h) / (np.linalg.norm(fperp) + np.linalg.norm(h)))
    worst_ode = 0.0
    for name, t in [("n3k2", -0.4), ("n3k2", 0.3), ("n3k1", -0.25), ("n3k1", 0.2), ("n2k1", -0.3), ("n2k1", 0.5)]:
        slc = OdeSlice(orbits[name], t)
        span = 1.5 * max(1.0, math.sqrt(abs(slc.C)))
        for _ in range(80):
            r, pp, pm, br = _random_node(slc.quadric, rng, span)
            u = np.concatenate([[r], pp, pm, [rng.uniform(0, slc.period)]])
            imm = slc.immersion(br)
            lhs = slc.alpha * normal_projection(imm, u)
            rhs = slc.C * mean_curvature(imm, u)
            worst_ode = max(worst_ode, np.linalg.norm(lhs - rhs) / (np.linalg.norm(lhs) + np.linalg.norm(rhs)))
    elapsed = time.perf_counter() - start
    ok = worst_int <= 1e-5 and worst_ode <= 1e-5 and elapsed <= 60
    report(2, ok, f"integer {worst_int:.2e}, ode {worst_ode:.2e} (relative), {elapsed:.1f}s")
    assert ok


# 3 -------------------------------------------------------------------------


def _gram_vs_closed(slc, rng, nodes, period):
    q = slc.quadric
    span = 1.5 * max(1.0, math.sqrt(abs(slc.C)))
    worst = 0.0
    for _ in range(nodes):
        r, pp, pm, br = _random_node(q, rng, span)
        s = rng.uniform(0, period)
        u = np.concatenate([[r], pp, pm, [s]])
        gram = math.sqrt(tangent_frame(_numeric(slc.immersion(br)), u).gram_det)
        x = q.point(np.asarray(r), pp, pm, br)
        _, _, radon = slc.evaluate(x, np.asarray(s))
        vol = q.volume_form(r, q.plus.point(pp, br[0]), q.minus.point(pm, br[1]))
        closed = float(radon) * float(vol) * float(q.plus.area_element(pp)) * float(q.minus.area_element(pm))
        worst = max(worst, abs(gram / closed - 1.0))
    return worst


def test_criterion_3_density_oracle(orbits, report):
    start = time.perf_counter()
    rng = np.random.default_rng(3)
    # k = n-1, k = 1 and a generic n = 4 shape; both signs of t
    int_cases = [((1, 1, -1), -0.5), ((1, 1, -1), 0.5), ((3, -1, -1), -0.3), ((3, -1, -1), 0.3), ((1, 2, -1, -3), -0.2), ((1, 2, -1, -3), 0.2)]
    worst_int = max(_gram_vs_closed(IntegerSlice.at_time(LambdaSpec(l), t), rng, 167, math.pi) for l, t in int_cases)
    ode_cases = [("n3k2", -0.3), ("n3k2", 0.3), ("n3k1", -0.3), ("n3k1", 0.3), ("n2k1", -0.3), ("n2k1", 0.3)]
    worst_ode = max(_gram_vs_closed(OdeSlice(orbits[n], t), rng, 167, orbits[n].period) for n, t in ode_cases)
    elapsed = time.perf_counter() - start
    ok = worst_int <= 1e-5 and worst_ode <= 1e-5 and elapsed <= 60
    report(3, ok, f"integer {worst_int:.2e}, ode {worst_ode:.2e} over {6 * 167} nodes each, {elapsed:.1f}s")
    assert ok


# 4, 5 ----------------------------------------------------------------------


def _brakke_run(make_slice, phi):
    verdict = limit_check(make_slice, phi, t0=1e-2, count=8, grid=GridSpec())
    flows = [smooth_flow_check(make_slice, phi, t, GridSpec()) for side in verdict.sides for t in side.times]
    worst_flow = max(f.relative_error for f in flows)
    gaps = [s.relative_gap for s in verdict.sides]
    return verdict, gaps, worst_flow


def test_criterion_4_integer_no_mass_loss(report):
    start = time.perf_counter()
    spec = LambdaSpec((1, 1, -1))
    verdict, gaps, flow = _brakke_run(lambda t: IntegerSlice.at_time(spec, t), TestFunction.at_origin(3, 1.0))
    elapsed = time.perf_counter() - start
    ok = verdict.status == "PASS" and max(gaps) <= 0.02 and flow <= 0.01 and elapsed <= 600
    report(4, ok, f"cone {verdict.cone.variation:.8g}, gaps {gaps[0]:.2e}/{gaps[1]:.2e}, flow {flow:.2e}, {elapsed:.1f}s")
    assert ok


def test_criterion_5_ode_no_mass_loss(seeds, report):
    start = time.perf_counter()
    rec = seeds["n3k2"]
    orbit = find_periodic(rec.params, rec.state, period_hint=rec.period_hint)
    verdict, gaps, flow = _brakke_run(lambda t: OdeSlice(orbit, t), TestFunction.at_origin(3, 1.0))
    elapsed = time.perf_counter() - start
    ok = verdict.status == "PASS" and max(gaps) <= 0.02 and flow <= 0.01 and elapsed <= 900
    report(5, ok, f"seed n3k2, cone {verdict.cone.variation:.8g}, gaps {gaps[0]:.2e}/{gaps[1]:.2e}, flow {flow:.2e}, {elapsed:.1f}s")
    assert ok


# 6 -------------------------------------------------------------------------


def test_criterion_6_surface_dichotomy(seeds, report):
    start = time.perf_counter()
    rec = seeds["n2k1"]
    orbit = find_periodic(rec.params, rec.state, period_hint=rec.period_hint)

    def make(t):
        return OdeSlice(orbit, t)

    bump = TestFunction.at_origin(2, 1.0)
    probe = log_divergence_probe(make, bump, t0=1e-2, count=6)
    diffs = np.abs(probe.dphi_h_differences)
    settles = bool(np.all(np.diff(diffs) < 0) and diffs[-1] < 0.25 * diffs[0])
    vanishing = TestFunction((0.8, 0.0), 0.8)
    assert vanishing.value(np.zeros(2, dtype=complex)) == 0.0
    verdict = limit_check(make, vanishing, t0=1e-2, count=8)
    elapsed = time.perf_counter() - start
    ok = probe.slope > 0 and probe.correlation > 0.99 and settles and verdict.status == "PASS" and elapsed <= 300
    gaps = "/".join(f"{s.relative_gap:.2e}" for s in verdict.sides)
    report(6, ok, f"slope {probe.slope:.4g}, correlation {probe.correlation:.6f}, Dphi.H steps {diffs[0]:.2e}->{diffs[-1]:.2e}; phi(0)=0 gaps {gaps}, {elapsed:.1f}s")
    assert ok


# 7 -------------------------------------------------------------------------


def test_criterion_7_ode_integrity(report):
    start = time.perf_counter()
    lines, ok = [], True
    for rec in load_seeds():
        traj = integrate(rec.params, rec.state, 10.0, tol=1e-10)
        orbit = find_periodic(rec.params, rec.state, period_hint=rec.period_hint)
        lo, hi = orbit.r_bounds
        good = traj.q_drift_rate < 1e-8 and orbit.closure_residual < 1e-6 and bool(np.all(lo > 0)) and bool(np.all(np.isfinite(hi)))
        ok &= good
        lines.append(f"{rec.name} drift {traj.q_drift_rate:.1e} closure {orbit.closure_residual:.1e} min r {lo.min():.3f}")
    elapsed = time.perf_counter() - start
    ok &= elapsed <= 120
    report(7, ok, "; ".join(lines) + f", {elapsed:.1f}s")
    assert ok


# 8 -------------------------------------------------------------------------


def test_criterion_8_classification_table(capsys, report):
    cases = json.loads((FIXTURES / "classification.json").read_text())["cases"]
    kinds = {"orientable": False, "non-orientable": False, "connected": False, "2 components": False, "embedded": False, "not embedded": False}
    mismatches = []
    for case in cases:
        code = main(["classify", "--lambdas", case["lambdas"], "--csign", case["csign"]])
        out = capsys.readouterr().out.strip().splitlines()
        if code != 0 or out[-1] != case["expected"]:
            mismatches.append((case, out))
        for part in case["expected"].split(", ")[1:]:
            kinds[part] = True
    ok = len(cases) >= 8 and not mismatches and all(kinds.values())
    report(8, ok, f"{len(cases)} vectors reproduced, {len(mismatches)} mismatches")
    assert ok, mismatches


# 9 -------------------------------------------------------------------------


def test_criterion_9_deterministic_csv(tmp_path, report):
    cfg = RunConfig(lambdas=(1, 1, -1), count=4, n_r=16, n_polar=8, n_azimuth=16, n_s=24, check_flow=False)
    path = tmp_path / "run.json"
    cfg.save(path)
    outputs = []
    for i in range(2):
        out = tmp_path / f"run{i}"
        subprocess.run(
            [sys.executable, "-m", "lagflow.cli", "brakke", "--config", str(path), "--out-dir", str(out)],
            check=False,
            capture_output=True,
        )
        outputs.append((out / "brakke.csv").read_bytes())
    ok = outputs[0] == outputs[1] and len(outputs[0]) > 0
    report(9, ok, f"two runs, {len(outputs[0])} bytes each, identical={outputs[0] == outputs[1]}")
    assert ok
