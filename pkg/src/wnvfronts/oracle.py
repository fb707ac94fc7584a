"""Independent reference computations used by tests and monitors.

Two oracles: the spatially homogeneous ODE system

    u' = a1 (N1 - u) v - gamma u,      v' = a2 (N2 - v) u - d v

integrated by classical fixed-step RK4, and a fully explicit first-order
rerun of the free-boundary solver on a finer grid.  The explicit
reference deliberately uses a different time discretization than the
main semi-implicit scheme so agreement is evidence of correctness rather
than shared bias.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import DerivedParams, RawParams, risk_index
from .stefan import (FieldState, InitialProfile, SimControls, SolverError,
                     Trajectory, boundary_flux, build_initial_state,
                     metric_terms, reaction_dt_cap, _admit, _midpoint)


@dataclass(frozen=True)
class OdeTrajectory:
    times: np.ndarray
    u: np.ndarray
    v: np.ndarray


def homogeneous_ode(raw: RawParams, dp: DerivedParams,
                    u0: float, v0: float, T: float, dt: float) -> OdeTrajectory:
    """Classical RK4 on the homogeneous system from (u0, v0) to time T."""
    if not 0.0 <= u0 <= raw.N1:
        raise ValueError(f"u0 must lie in [0, N1], got {u0}")
    if not 0.0 <= v0 <= raw.N2:
        raise ValueError(f"v0 must lie in [0, N2], got {v0}")
    if dt <= 0.0 or T < 0.0:
        raise ValueError("T must be nonnegative and dt positive")

    def rhs(u, v):
        return (dp.a1 * (raw.N1 - u) * v - raw.gamma * u,
                dp.a2 * (raw.N2 - v) * u - raw.d * v)

    n = max(1, round(T / dt)) if T > 0 else 0
    dt = T / n if n else dt
    us = np.empty(n + 1)
    vs = np.empty(n + 1)
    us[0], vs[0] = u0, v0
    u, v = u0, v0
    for k in range(n):
        k1u, k1v = rhs(u, v)
        k2u, k2v = rhs(u + 0.5 * dt * k1u, v + 0.5 * dt * k1v)
        k3u, k3v = rhs(u + 0.5 * dt * k2u, v + 0.5 * dt * k2v)
        k4u, k4v = rhs(u + dt * k3u, v + dt * k3v)
        u = u + dt * (k1u + 2.0 * k2u + 2.0 * k3u + k4u) / 6.0
        v = v + dt * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0
        if not (math.isfinite(u) and math.isfinite(v)):
            raise SolverError(f"RK4 produced non-finite values at step {k + 1}; reduce dt")
        us[k + 1], vs[k + 1] = u, v
    return OdeTrajectory(times=np.linspace(0.0, T, n + 1), u=us, v=vs)


def reference_explicit_pde(raw: RawParams, dp: DerivedParams,
                           profile: InitialProfile,
                           controls: SimControls) -> Trajectory:
    """Fully explicit first-order rerun of the free-boundary problem.

    The step size obeys the explicit-diffusion bound
    dt <= 0.4 dy^2 / (max(D1, D2) A), rechecked every step, beside the
    advective and reaction bounds.  Requires at least twice the main
    solver's default resolution; intended for short-horizon cross-checks.
    """
    if controls.n_y < 802:
        raise ValueError(
            f"explicit reference needs n_y >= 802 (2x the default), got {controls.n_y}")
    state = build_initial_state(raw, profile, controls.n_y)
    n = controls.n_y
    dy = 2.0 / (n + 1)
    y_int = np.linspace(-1.0, 1.0, n + 2)[1:-1]
    cap = reaction_dt_cap(raw, dp)
    D_max = max(raw.D1, raw.D2)

    times, gs, hs, gps, hps = [], [], [], [], []
    sups_U, sups_Z, mids_U, mids_Z = [], [], [], []
    risks_sqrt, risks_inner = [], []
    snapshots = [state]
    snap_every = controls.snapshot_every
    if snap_every is None:
        snap_every = controls.T_max / 50.0

    def record(st, gp, hp):
        r = risk_index(dp, raw, st.g, st.h, raw.mu)
        times.append(st.t)
        gs.append(st.g)
        hs.append(st.h)
        gps.append(gp)
        hps.append(hp)
        sups_U.append(float(st.W.max()))
        sups_Z.append(float(st.Z.max()))
        mids_U.append(_midpoint(st.W))
        mids_Z.append(_midpoint(st.Z))
        risks_sqrt.append(r.value)
        risks_inner.append(r.inner)

    gp, hp = boundary_flux(state, raw.nu)
    record(state, gp, hp)
    next_snap = snap_every
    eps_T = 1e-12 * max(controls.T_max, 1.0)
    steps = 0
    while state.t < controls.T_max - eps_T and steps < controls.max_steps:
        gp, hp = boundary_flux(state, raw.nu)
        A, B = metric_terms(state.g, state.h, gp, hp, y_int)
        sqrtA = math.sqrt(A)
        B_max = float(np.abs(B).max())
        speed = abs(raw.mu) * sqrtA + B_max
        dt = min(0.4 * dy ** 2 / (D_max * A), cap)
        if speed > 0.0:
            dt = min(dt, 0.5 * dy / speed)
        dt = min(dt, controls.T_max - state.t)

        W, Z = state.W, state.Z
        Wi, Zi = W[1:-1], Z[1:-1]
        Wyy = (W[2:] - 2.0 * Wi + W[:-2]) / dy ** 2
        Zyy = (Z[2:] - 2.0 * Zi + Z[:-2]) / dy ** 2
        Wy = (W[2:] - W[:-2]) / (2.0 * dy)
        Zy = (Z[2:] - Z[:-2]) / (2.0 * dy)
        W1 = Wi + dt * (raw.D1 * A * Wyy - (raw.mu * sqrtA + B) * Wy
                        + dp.a1 * (raw.N1 - Wi) * Zi - raw.gamma * Wi)
        Z1 = Zi + dt * (raw.D2 * A * Zyy - B * Zy
                        + dp.a2 * (raw.N2 - Zi) * Wi - raw.d * Zi)
        W1 = _admit(W1, raw.N1, "W", state.t + dt)
        Z1 = _admit(Z1, raw.N2, "Z", state.t + dt)
        W_full = np.zeros(n + 2)
        Z_full = np.zeros(n + 2)
        W_full[1:-1] = W1
        Z_full[1:-1] = Z1
        g1 = state.g + dt * gp
        h1 = state.h + dt * hp
        if not g1 < h1:
            raise SolverError(f"explicit reference interval collapsed at t = {state.t + dt:.6g}")
        state = FieldState(t=state.t + dt, g=g1, h=h1, W=W_full, Z=Z_full, n_y=n)
        gp2, hp2 = boundary_flux(state, raw.nu)
        record(state, gp2, hp2)
        steps += 1
        if state.t + eps_T >= next_snap:
            snapshots.append(state)
            next_snap += snap_every
    if snapshots[-1] is not state:
        snapshots.append(state)
    return Trajectory(times=np.array(times), g=np.array(gs), h=np.array(hs),
                      gprime=np.array(gps), hprime=np.array(hps),
                      supU=np.array(sups_U), supZ=np.array(sups_Z),
                      midU=np.array(mids_U), midZ=np.array(mids_Z),
                      risk_sqrt=np.array(risks_sqrt),
                      risk_inner=np.array(risks_inner),
                      snapshots=snapshots)
