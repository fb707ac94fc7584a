"""Independent reference integrators: homogeneous ODE and explicit PDE."""

import dataclasses

import numpy as np
import pytest

import wnvfronts as w


def test_equilibrium_is_stationary(baseline_raw, baseline_dp):
    traj = w.homogeneous_ode(baseline_raw, baseline_dp,
                             baseline_dp.U_star, baseline_dp.V_star,
                             50.0, 0.01)
    assert abs(traj.u[-1] - baseline_dp.U_star) < 1e-10
    assert abs(traj.v[-1] - baseline_dp.V_star) < 1e-10


def test_supercritical_data_approaches_equilibrium(baseline_raw, baseline_dp):
    traj = w.homogeneous_ode(baseline_raw, baseline_dp, 0.1, 2.0, 300.0, 0.01)
    assert traj.u[-1] == pytest.approx(baseline_dp.U_star, abs=1e-8)
    assert traj.v[-1] == pytest.approx(baseline_dp.V_star, abs=1e-8)
    # trajectory stays inside the invariant box
    assert traj.u.min() >= 0.0 and traj.u.max() <= baseline_raw.N1
    assert traj.v.min() >= 0.0 and traj.v.max() <= baseline_raw.N2


def test_subcritical_data_dies_out(baseline_raw):
    # beta small enough that the bulk product drops below gamma*d
    weak = dataclasses.replace(baseline_raw, beta=0.05)
    dp = w.derive_params(weak)
    assert dp.R_bulk < 1.0
    traj = w.homogeneous_ode(weak, dp, 0.1, 2.0, 100.0, 0.01)
    assert traj.u[-1] < 1e-6 and traj.v[-1] < 1e-6


def test_rk4_fourth_order_in_dt(baseline_raw, baseline_dp):
    ref = w.homogeneous_ode(baseline_raw, baseline_dp, 0.1, 2.0, 10.0, 0.0005)
    errs = []
    for dt in (0.2, 0.1):
        t = w.homogeneous_ode(baseline_raw, baseline_dp, 0.1, 2.0, 10.0, dt)
        errs.append(max(abs(t.u[-1] - ref.u[-1]), abs(t.v[-1] - ref.v[-1])))
    ratio = errs[0] / errs[1]
    assert 12.0 <= ratio <= 24.0


def test_ode_input_validation(baseline_raw, baseline_dp):
    with pytest.raises(ValueError):
        w.homogeneous_ode(baseline_raw, baseline_dp, 0.1, 2.0, 10.0, 0.0)
    with pytest.raises(ValueError):
        w.homogeneous_ode(baseline_raw, baseline_dp, 0.1, 2.0, -1.0, 0.01)


def test_explicit_reference_needs_fine_grid(baseline_raw, baseline_dp,
                                            seed_profile):
    controls = w.SimControls(n_y=401, dt=None, T_max=1.0)
    with pytest.raises(ValueError):
        w.reference_explicit_pde(baseline_raw, baseline_dp, seed_profile,
                                 controls)


def test_explicit_reference_zero_data_frozen(baseline_raw, baseline_dp):
    zeros = np.zeros(804)
    prof = w.InitialProfile(kind="custom", U_samples=zeros, V_samples=zeros)
    controls = w.SimControls(n_y=802, dt=None, T_max=0.5, snapshot_every=0.5)
    traj = w.reference_explicit_pde(baseline_raw, baseline_dp, prof, controls)
    assert max(traj.supU) == 0.0 and max(traj.supZ) == 0.0
    assert traj.g[-1] == -15.0 and traj.h[-1] == 15.0


def test_explicit_reference_symmetric_without_advection(baseline_raw,
                                                        seed_profile):
    raw = dataclasses.replace(baseline_raw, mu=0.0)
    dp = w.derive_params(raw)
    controls = w.SimControls(n_y=802, dt=None, T_max=0.5, snapshot_every=0.5)
    traj = w.reference_explicit_pde(raw, dp, seed_profile, controls)
    assert abs(traj.g[-1] + traj.h[-1]) < 1e-10
    snap = traj.snapshots[-1]
    assert np.max(np.abs(snap.W - snap.W[::-1])) < 1e-10


def test_cross_solver_front_agreement(baseline_raw, baseline_dp,
                                      seed_profile):
    # the two discretizations share nothing but the equations
    controls = w.SimControls(n_y=802, dt=None, T_max=1.0, snapshot_every=1.0)
    explicit = w.reference_explicit_pde(baseline_raw, baseline_dp,
                                        seed_profile, controls)
    implicit = w.simulate(baseline_raw, baseline_dp, seed_profile, controls)
    assert explicit.h[-1] == pytest.approx(implicit.h[-1], rel=1e-3)
    assert explicit.g[-1] == pytest.approx(implicit.g[-1], rel=1e-3)
    assert explicit.supU[-1] == pytest.approx(implicit.supU[-1], rel=1e-2)
