"""Shared parameter sets and session-scoped reference trajectories."""

import pytest

import wnvfronts as w


@pytest.fixture(scope="session")
def baseline_raw():
    """Bird-advection case study: strong advection variant (mu = 3)."""
    return w.RawParams(D1=6.0, D2=1.0, mu=3.0, alpha1=0.88, alpha2=0.16,
                       beta=0.3, gamma=0.6, d=0.3, N1=1.0, N2=20.0,
                       nu=2.0, h0=15.0)


@pytest.fixture(scope="session")
def baseline_dp(baseline_raw):
    return w.derive_params(baseline_raw)


@pytest.fixture(scope="session")
def asym_raw():
    """Fast-transmission case study used for speed asymmetry (mu = 2)."""
    return w.RawParams(D1=6.0, D2=1.0, mu=2.0, alpha1=0.88, alpha2=0.16,
                       beta=0.5, gamma=0.6, d=0.029, N1=1.0, N2=20.0,
                       nu=4.0, h0=15.0)


@pytest.fixture(scope="session")
def asym_dp(asym_raw):
    return w.derive_params(asym_raw)


@pytest.fixture(scope="session")
def seed_profile():
    return w.InitialProfile(kind="cosine", amplitude_U=0.1, amplitude_V=2.0)


@pytest.fixture(scope="session")
def traj_strong_advection(baseline_raw, baseline_dp, seed_profile):
    """mu = 3 run to T = 200; decays through the window but keeps moving."""
    controls = w.SimControls(n_y=401, dt=None, T_max=200.0, snapshot_every=40.0)
    return w.simulate(baseline_raw, baseline_dp, seed_profile, controls)


@pytest.fixture(scope="session")
def traj_spreading(baseline_raw, baseline_dp, seed_profile):
    """mu = 0 run to T = 500; locks onto the endemic equilibrium."""
    import dataclasses
    raw = dataclasses.replace(baseline_raw, mu=0.0)
    dp = w.derive_params(raw)
    controls = w.SimControls(n_y=401, dt=None, T_max=500.0, snapshot_every=100.0)
    return raw, dp, w.simulate(raw, dp, seed_profile, controls)


@pytest.fixture(scope="session")
def traj_asym(asym_raw, asym_dp, seed_profile):
    """mu = 2 fast-transmission run to T = 150; strongly skewed fronts."""
    controls = w.SimControls(n_y=1601, dt=None, T_max=150.0, snapshot_every=30.0)
    return w.simulate(asym_raw, asym_dp, seed_profile, controls)
