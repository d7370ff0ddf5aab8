from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lagflow.geometry import lagrangian_angle, mean_curvature, tangent_frame
from lagflow.integer_family import OffSliceError
from lagflow.ode_family import (
    ModulusCollapseError,
    OdeParams,
    OdeSlice,
    OdeState,
    PeriodicOrbitError,
    SeedRecord,
    conserved,
    density_closed_form_ode,
    find_periodic,
    find_seed,
    immerse_ode,
    integrate,
    load_seeds,
    rhs,
)

finite = st.floats(-2.0, 2.0, allow_nan=False)
modulus = st.floats(0.2, 2.0)


def test_params_validation():
    with pytest.raises(ValueError):
        OdeParams((1.0,))
    with pytest.raises(ValueError):
        OdeParams((1.0, 0.0))
    with pytest.raises(ValueError):
        OdeParams((-1.0, 1.0))
    with pytest.raises(ValueError):
        OdeParams((0.5, -1.0), require_unit_bound=True)
    assert OdeParams((2.0, -1.0, -1.0)).k == 1


def test_rhs_example():
    d = rhs(OdeParams((1.0, -1.0)), OdeState((1, 1), 0.0))
    np.testing.assert_allclose(d.w_array, [1.0, -1.0], atol=1e-15)
    assert d.theta == pytest.approx(0.0, abs=1e-15)


def test_state_vector_round_trip():
    st0 = OdeState((1 + 2j, -0.5j, 3.0), 0.7)
    assert OdeState.from_vector(st0.to_vector()) == st0


@settings(max_examples=50, deadline=None)
@given(r=st.lists(modulus, min_size=3, max_size=3), ph=st.lists(finite, min_size=3, max_size=3), sign=st.sampled_from([0.0, math.pi]))
def test_real_phase_product_freezes_angle(r, ph, sign):
    w = np.asarray(r) * np.exp(1j * np.asarray(ph))
    theta = float(np.sum(ph)) + sign
    d = rhs(OdeParams((1.0, 1.0, -1.0), alpha=1.3), OdeState(tuple(w), theta))
    assert abs(d.theta) < 1e-12


@settings(max_examples=50, deadline=None)
@given(r=st.lists(modulus, min_size=3, max_size=3), ph=st.lists(finite, min_size=3, max_size=3), theta=finite)
def test_moduli_rates_over_lambda_agree(r, ph, theta):
    params = OdeParams((2.0, -1.0, -3.0))
    w = np.asarray(r) * np.exp(1j * np.asarray(ph))
    dw = rhs(params, OdeState(tuple(w), theta)).w_array
    rates = 2 * np.real(np.conj(w) * dw) / params.lam
    assert np.max(np.abs(rates - rates[0])) <= 1e-15 * max(1.0, np.max(np.abs(rates))) * 8


def test_zero_time_integration_returns_initial():
    st0 = OdeState((1.0, 1.2), -0.5)
    traj = integrate(OdeParams((1.0, -1.0)), st0, 0.0)
    assert traj.state() == st0
    assert traj.q_drift == 0.0


@pytest.mark.parametrize("name", ["n2k1", "n3k2", "n3k1"])
def test_conserved_quantities_drift(seeds, name):
    rec = seeds[name]
    traj = integrate(rec.params, rec.state, 10.0, tol=1e-10)
    assert traj.q_drift_rate < 1e-8
    q = conserved(rec.params, traj.w)
    assert np.max(np.abs(q - q[0])) < 1e-8


def test_tolerance_self_convergence(seeds):
    rec = seeds["n3k2"]
    coarse = integrate(rec.params, rec.state, 10.0, tol=1e-6).y[-1]
    fine = integrate(rec.params, rec.state, 10.0, tol=1e-12).y[-1]
    assert np.max(np.abs(coarse - fine)) < 1e-5


def test_modulus_collapse_is_reported(seeds):
    rec = seeds["n2k1"]
    with pytest.raises(ModulusCollapseError):
        integrate(rec.params, rec.state, rec.period_hint, min_modulus=0.5)
    with pytest.raises(ModulusCollapseError):
        integrate(rec.params, OdeState((1.0, 0.0), 0.0), 1.0)


@pytest.mark.parametrize("name", ["n2k1", "n3k2", "n3k1"])
def test_shipped_orbits_close(orbits, name):
    orbit = orbits[name]
    assert orbit.closure_residual < 1e-6
    lo, hi = orbit.r_bounds
    assert np.all(lo > 0) and np.all(np.isfinite(hi))
    ref = integrate(orbit.params, orbit.initial, orbit.period, tol=1e-12, s_eval=[0.3 * orbit.period, orbit.period])
    np.testing.assert_allclose(orbit.w(0.3 * orbit.period), ref.w[0], atol=1e-8)
    np.testing.assert_allclose(ref.w[1], orbit.initial.w_array, atol=1e-6)


def test_minimal_period_from_doubled_hint(seeds, orbits):
    rec = seeds["n3k2"]
    orbit = find_periodic(rec.params, rec.state, period_hint=2 * rec.period_hint)
    assert orbit.period == pytest.approx(orbits["n3k2"].period, rel=1e-8)


def test_period_found_without_hint(seeds, orbits):
    rec = seeds["n3k2"]
    orbit = find_periodic(rec.params, rec.state, s_max=15.0)
    assert orbit.period == pytest.approx(orbits["n3k2"].period, rel=1e-8)


def test_no_return_raises():
    with pytest.raises(PeriodicOrbitError):
        find_periodic(OdeParams((1.0, 1.0, -1.0)), OdeState.turning_point((1.0, 1.3, 0.9)), s_max=2.0)


def test_seed_file_round_trip(tmp_path, seeds):
    docs = [rec.to_dict() for rec in seeds.values()]
    path = tmp_path / "seeds.json"
    path.write_text(json.dumps({"schema": 1, "seeds": docs}))
    again = {rec.name: rec for rec in load_seeds(path)}
    assert again == seeds
    assert find_seed(3, 2).name == "n3k2"
    with pytest.raises(KeyError):
        find_seed(5, 1)
    bad = dict(docs[0], n=7)
    with pytest.raises(ValueError):
        SeedRecord.from_dict(bad)


def test_immerse_ode_on_axis(orbits):
    slc = OdeSlice(orbits["n3k2"], 0.5)
    f = immerse_ode(slc, [1.0, 0.0, 0.0], 0.0)
    np.testing.assert_allclose(f, [orbits["n3k2"].w(0.0)[0], 0, 0], atol=1e-15)
    with pytest.raises(OffSliceError):
        immerse_ode(slc, [2.0, 0.0, 0.0], 0.0)


@dataclass(frozen=True)
class _FrozenPhase:
    """Stand-in orbit with ``theta = sum arg w`` at every ``s``."""

    params: OdeParams

    def w(self, s):
        s = np.asarray(s, dtype=float)
        return np.exp(1j * np.array([0.3, -0.1, 0.5]) * (1 + s[..., None]))

    def theta(self, s):
        return np.sum(np.angle(self.w(s)), axis=-1)


def test_curvature_vanishes_where_phases_align():
    slc = OdeSlice(_FrozenPhase(OdeParams((1.0, 1.0, -1.0))), 0.5)
    assert density_closed_form_ode(slc, [1.0, 0.0, 0.0], 0.4)[1] == pytest.approx(0.0, abs=1e-30)


@pytest.mark.parametrize("name, t", [("n3k2", -0.4), ("n3k1", 0.3), ("n2k1", -0.2)])
def test_closed_forms_against_finite_differences(orbits, name, t):
    slc = OdeSlice(orbits[name], t)
    q = slc.quadric
    rng = np.random.default_rng(3)
    for _ in range(10):
        r = rng.uniform(0.1, 1.5)
        pp = np.array([rng.uniform(lo + 0.1, hi - 0.1) for lo, hi in q.plus.angle_box()])
        pm = np.array([rng.uniform(lo + 0.1, hi - 0.1) for lo, hi in q.minus.angle_box()])
        br = q.branches()[rng.integers(len(q.branches()))]
        s = rng.uniform(0, slc.period)
        x = q.point(np.asarray(r), pp, pm, br)
        imm = slc.immersion(br)
        u = np.concatenate([[r], pp, pm, [s]])
        frame = tangent_frame(imm, u)
        _, h2, radon = density_closed_form_ode(slc, x, s)
        vol = q.volume_form(r, q.plus.point(pp, br[0]), q.minus.point(pm, br[1])) * q.plus.area_element(pp) * q.minus.area_element(pm)
        assert math.sqrt(frame.gram_det) == pytest.approx(radon * vol, rel=1e-5)
        h = mean_curvature(imm, u)
        assert float(np.vdot(h, h).real) == pytest.approx(h2, rel=1e-4)
        d = (lagrangian_angle(frame) - slc.closed_angle(s) + math.pi) % (2 * math.pi) - math.pi
        assert abs(d) < 1e-8
