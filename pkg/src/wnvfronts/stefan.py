"""Semi-implicit front-fixed integrator for the free-boundary system.

The moving habitat (g(t), h(t)) is mapped onto the fixed interval
y in [-1, 1] by

    y = (2x - (h + g)) / (h - g),      sqrt(A) = 2 / (h - g),
    B(y, t) = -( y (h' - g') + (h' + g') ) / (h - g),

under which W(y,t) = U(x,t) satisfies

    W_t = D1 A W_yy - (mu sqrt(A) + B) W_y + a1 (N1 - W) Z - gamma W

and Z(y,t) = V(x,t) satisfies the same with D2, no mu term, and the
mosquito reaction a2 (N2 - Z) W - d Z.  The fronts obey the Stefan
conditions g' = -nu U_x(g,t), h' = -nu U_x(h,t), with U_x at the ends
evaluated as sqrt(A) W_y through a second-order one-sided stencil.

Time stepping is semi-implicit: diffusion implicit (tridiagonal solve
with A at the new interval), advection and reaction explicit, fronts by
explicit Euler.  An automatic step size tracks the advective bound,
which tightens as the fronts accelerate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .model import DerivedParams, RawParams, risk_index


class StabilityError(RuntimeError):
    """The step produced values outside the admissible band; reduce dt."""


class SolverError(RuntimeError):
    """Hard failure (non-finite values or collapsed interval)."""


@dataclass
class FieldState:
    """Transformed solution on the full y-grid (endpoints included, = 0)."""

    t: float
    g: float
    h: float
    W: np.ndarray   # length n_y + 2, W[0] = W[-1] = 0
    Z: np.ndarray
    n_y: int

    def y_grid(self) -> np.ndarray:
        return np.linspace(-1.0, 1.0, self.n_y + 2)

    def x_grid(self) -> np.ndarray:
        y = self.y_grid()
        return ((self.h - self.g) * y + (self.h + self.g)) / 2.0


@dataclass(frozen=True)
class InitialProfile:
    """Initial data: cosine bumps or caller-supplied samples.

    Cosine: U0(x) = amplitude_U * cos(pi x / (2 h0)) and likewise for V0,
    positive inside and vanishing at +-h0.  Custom samples live on the
    full y-grid (n_y + 2 points), must vanish at the ends, and may be
    zero inside (the degenerate zero state is admissible).
    """

    kind: str = "cosine"
    amplitude_U: float = 0.0
    amplitude_V: float = 0.0
    U_samples: np.ndarray | None = None
    V_samples: np.ndarray | None = None


@dataclass(frozen=True)
class SimControls:
    n_y: int = 401
    dt: float | None = None           # None: automatic, recomputed per step
    T_max: float = 200.0
    snapshot_every: float | None = None   # None: T_max / 50
    safety: float = 0.5
    max_steps: int = 10_000_000
    stop_sup_tol: float | None = None     # early stop once sups stay below this


@dataclass
class Trajectory:
    times: np.ndarray
    g: np.ndarray
    h: np.ndarray
    gprime: np.ndarray
    hprime: np.ndarray
    supU: np.ndarray
    supZ: np.ndarray
    midU: np.ndarray
    midZ: np.ndarray
    risk_sqrt: np.ndarray
    risk_inner: np.ndarray
    snapshots: list[FieldState] = field(default_factory=list)


def metric_terms(g: float, h: float, gprime: float, hprime: float, y):
    """Front-fixing metric: A = 4/(h-g)^2 and B = -(y(h'-g') + (h'+g'))/(h-g)."""
    if not h > g:
        raise ValueError(f"metric requires g < h, got ({g}, {h})")
    width = h - g
    A = 4.0 / width ** 2
    B = -(np.asarray(y) * (hprime - gprime) + (hprime + gprime)) / width
    return A, B


def boundary_flux(state: FieldState, nu: float) -> tuple[float, float]:
    """Stefan front velocities (g', h') from one-sided boundary derivatives.

    W vanishes at the ends, so the 3-point stencils reduce to
    W_y(-1) = (4 W_1 - W_2)/(2 dy) and W_y(+1) = (W_{n-1} - 4 W_n)/(2 dy);
    exact on quadratics.
    """
    if state.n_y < 8:
        raise ValueError(f"boundary flux needs n_y >= 8, got {state.n_y}")
    dy = 2.0 / (state.n_y + 1)
    sqrtA = 2.0 / (state.h - state.g)
    W = state.W
    wy_left = (4.0 * W[1] - W[2]) / (2.0 * dy)
    wy_right = (W[-3] - 4.0 * W[-2]) / (2.0 * dy)
    return -nu * sqrtA * wy_left, -nu * sqrtA * wy_right


def build_initial_state(raw: RawParams, profile: InitialProfile, n_y: int) -> FieldState:
    if n_y < 8:
        raise ValueError(f"n_y must be at least 8, got {n_y}")
    y = np.linspace(-1.0, 1.0, n_y + 2)
    if profile.kind == "cosine":
        if not 0.0 < profile.amplitude_U <= raw.N1:
            raise ValueError(
                f"amplitude_U must lie in (0, N1], got {profile.amplitude_U}")
        if not 0.0 < profile.amplitude_V <= raw.N2:
            raise ValueError(
                f"amplitude_V must lie in (0, N2], got {profile.amplitude_V}")
        W = profile.amplitude_U * np.cos(np.pi * y / 2.0)
        Z = profile.amplitude_V * np.cos(np.pi * y / 2.0)
        W[0] = W[-1] = 0.0
        Z[0] = Z[-1] = 0.0
    elif profile.kind == "custom":
        W = np.asarray(profile.U_samples, dtype=float).copy()
        Z = np.asarray(profile.V_samples, dtype=float).copy()
        for name, arr, cap in (("U_samples", W, raw.N1), ("V_samples", Z, raw.N2)):
            if arr.shape != y.shape:
                raise ValueError(f"{name} must have {n_y + 2} samples, got {arr.shape}")
            if arr[0] != 0.0 or arr[-1] != 0.0:
                raise ValueError(f"{name} must vanish at the interval ends")
            if arr.min() < 0.0 or arr.max() > cap:
                raise ValueError(f"{name} must lie in [0, {cap}]")
    else:
        raise ValueError(f"unknown profile kind {profile.kind!r}")
    return FieldState(t=0.0, g=-raw.h0, h=raw.h0, W=W, Z=Z, n_y=n_y)


def _implicit_diffusion(rhs: np.ndarray, DA: float, dt: float, dy: float) -> np.ndarray:
    """Solve (I - dt DA d2/dy2) w = rhs with Dirichlet zeros at the ends."""
    n = rhs.size
    r = DA * dt / dy ** 2
    ab = np.empty((3, n))
    ab[0, :] = -r
    ab[1, :] = 1.0 + 2.0 * r
    ab[2, :] = -r
    return solve_banded((1, 1), ab, rhs)


def _admit(values: np.ndarray, cap: float, label: str, t: float) -> np.ndarray:
    """Clamp roundoff negatives, reject true instability or non-finite values."""
    if not np.all(np.isfinite(values)):
        raise SolverError(f"non-finite {label} values at t = {t:.6g}")
    clamp_tol = 1e-12 * cap
    overshoot_tol = 1e-8 * cap
    lo = values.min()
    hi = values.max()
    if lo < -clamp_tol or hi > cap + overshoot_tol:
        raise StabilityError(
            f"{label} left [{-clamp_tol:.3e}, {cap + overshoot_tol:.6g}] at "
            f"t = {t:.6g} (min {lo:.3e}, max {hi:.6g}); reduce dt")
    return np.where(values < 0.0, 0.0, values)


def step(state: FieldState, raw: RawParams, dp: DerivedParams, dt: float) -> FieldState:
    """Advance one time step of size dt."""
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    gp, hp = boundary_flux(state, raw.nu)
    g1 = state.g + dt * gp
    h1 = state.h + dt * hp
    if not g1 < h1:
        raise SolverError(f"interval collapsed at t = {state.t + dt:.6g}")
    n = state.n_y
    dy = 2.0 / (n + 1)
    y_int = np.linspace(-1.0, 1.0, n + 2)[1:-1]
    A, B = metric_terms(g1, h1, gp, hp, y_int)
    sqrtA = math.sqrt(A)

    W, Z = state.W, state.Z
    Wi, Zi = W[1:-1], Z[1:-1]
    Wy = (W[2:] - W[:-2]) / (2.0 * dy)
    Zy = (Z[2:] - Z[:-2]) / (2.0 * dy)
    react_W = dp.a1 * (raw.N1 - Wi) * Zi - raw.gamma * Wi
    react_Z = dp.a2 * (raw.N2 - Zi) * Wi - raw.d * Zi
    rhs_W = Wi + dt * (-(raw.mu * sqrtA + B) * Wy + react_W)
    rhs_Z = Zi + dt * (-B * Zy + react_Z)

    t1 = state.t + dt
    W1 = _admit(_implicit_diffusion(rhs_W, raw.D1 * A, dt, dy), raw.N1, "W", t1)
    Z1 = _admit(_implicit_diffusion(rhs_Z, raw.D2 * A, dt, dy), raw.N2, "Z", t1)

    W_full = np.zeros(n + 2)
    Z_full = np.zeros(n + 2)
    W_full[1:-1] = W1
    Z_full[1:-1] = Z1
    return FieldState(t=t1, g=g1, h=h1, W=W_full, Z=Z_full, n_y=n)


def reaction_dt_cap(raw: RawParams, dp: DerivedParams) -> float:
    """Explicit-reaction step bound: a tenth of the fastest reaction time.

    A fifth is stable, but the first explicit reaction steps then overshoot
    the homogeneous comparison solution by more than the monitor tolerance
    before diffusion damps the flat center of the initial profile.
    """
    rate = max(raw.gamma + dp.a1 * raw.N2, raw.d + dp.a2 * raw.N1)
    return 0.1 / rate


def auto_dt(state: FieldState, raw: RawParams, dp: DerivedParams,
            gp: float, hp: float, safety: float = 0.5) -> float:
    """Advective bound safety*dy/(|mu| sqrtA + |B|_max), capped by reaction."""
    dy = 2.0 / (state.n_y + 1)
    width = state.h - state.g
    sqrtA = 2.0 / width
    B_max = (abs(hp - gp) + abs(hp + gp)) / width
    speed = abs(raw.mu) * sqrtA + B_max
    cap = reaction_dt_cap(raw, dp)
    if speed == 0.0:
        return cap
    return min(safety * dy / speed, cap)


def _midpoint(values: np.ndarray) -> float:
    n = values.size
    if n % 2 == 1:
        return float(values[n // 2])
    return float(0.5 * (values[n // 2 - 1] + values[n // 2]))


def simulate(raw: RawParams, dp: DerivedParams, profile: InitialProfile,
             controls: SimControls) -> Trajectory:
    """Integrate to T_max (or an early-stop criterion), recording every step."""
    state = build_initial_state(raw, profile, controls.n_y)
    snap_every = controls.snapshot_every
    if snap_every is None:
        snap_every = controls.T_max / 50.0

    times, gs, hs, gps, hps = [], [], [], [], []
    sups_U, sups_Z, mids_U, mids_Z = [], [], [], []
    risks_sqrt, risks_inner = [], []
    snapshots: list[FieldState] = []

    def record(st: FieldState) -> None:
        gp, hp = boundary_flux(st, raw.nu)
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

    record(state)
    snapshots.append(state)
    next_snap = snap_every
    below_since = None
    n_steps = 0
    eps_T = 1e-12 * max(controls.T_max, 1.0)
    while state.t < controls.T_max - eps_T and n_steps < controls.max_steps:
        if controls.dt is not None:
            dt = controls.dt
        else:
            gp, hp = boundary_flux(state, raw.nu)
            dt = auto_dt(state, raw, dp, gp, hp, controls.safety)
        dt = min(dt, controls.T_max - state.t)
        try:
            state = step(state, raw, dp, dt)
        except (StabilityError, SolverError) as exc:
            raise type(exc)(f"{exc} (failing time {state.t + dt:.6g})") from exc
        record(state)
        n_steps += 1
        if state.t + eps_T >= next_snap:
            snapshots.append(state)
            next_snap += snap_every
        if controls.stop_sup_tol is not None:
            if max(sups_U[-1], sups_Z[-1]) < controls.stop_sup_tol:
                if below_since is None:
                    below_since = state.t
                elif state.t - below_since >= 0.1 * controls.T_max:
                    break
            else:
                below_since = None
    if snapshots[-1] is not state:
        snapshots.append(state)
    return Trajectory(times=np.array(times), g=np.array(gs), h=np.array(hs),
                      gprime=np.array(gps), hprime=np.array(hps),
                      supU=np.array(sups_U), supZ=np.array(sups_Z),
                      midU=np.array(mids_U), midZ=np.array(mids_Z),
                      risk_sqrt=np.array(risks_sqrt),
                      risk_inner=np.array(risks_inner),
                      snapshots=snapshots)
