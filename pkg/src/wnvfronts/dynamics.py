"""Outcome classification, spreading-speed estimates, and runtime monitors.

The vanishing/spreading dichotomy is decided from finite-horizon proxies:
sustained decay of the sup-norms with a stalled interval marks Vanishing,
capture of the interior midpoint by the endemic equilibrium with both
fronts still moving marks Spreading, and anything else is honestly
Undetermined (horizon too short).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .model import DerivedParams, RawParams
from .stefan import Trajectory

VANISHING = "Vanishing"
SPREADING = "Spreading"
UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class Thresholds:
    """Finite-horizon decision constants (fractions, not absolute values)."""

    decay_factor: float = 1e-3        # of max(N1, N2): sup-norm decay level
    stall_growth: float = 1e-3        # relative h-g growth over the window
    window_fraction: float = 0.10     # confirmation window share of the horizon
    capture_rel: float = 0.02         # midpoint capture radius around (U*, V*)
    motion_factor: float = 0.01       # of the Stefan speed scale nu U* sqrt(gamma/D1)
    velocity_decay_factor: float = 1e-4   # soft check: tail |g'|,|h'| vs run peak


@dataclass(frozen=True)
class Outcome:
    verdict: str
    evidence: dict
    t_decided: float | None


@dataclass(frozen=True)
class SpeedEstimate:
    left_speed: float
    right_speed: float
    window: tuple[float, float]
    fit_residual: float


@dataclass(frozen=True)
class MonitorReport:
    max_excess_U: float
    max_excess_Z: float
    bounds_ok: bool
    passed: bool
    tol_U: float
    tol_Z: float


@dataclass(frozen=True)
class SandwichReport:
    left_ok: bool
    right_ok: bool
    left_margin: float
    right_margin: float
    c_nu: float
    tol: float
    passed: bool


def speed_scale(raw: RawParams, dp: DerivedParams) -> float:
    """Stefan flux scale nu U* sqrt(gamma/D1): nu times the endemic profile slope."""
    return raw.nu * dp.U_star * math.sqrt(raw.gamma / raw.D1)


def _window_mask(times: np.ndarray, fraction: float) -> np.ndarray:
    span = times[-1] - times[0]
    return times >= times[-1] - fraction * span


def _sustained_from(flags: np.ndarray, times: np.ndarray) -> float | None:
    """Earliest time from which the flag holds through the end, else None."""
    if not flags[-1]:
        return None
    idx = np.where(~flags)[0]
    first = 0 if idx.size == 0 else int(idx[-1]) + 1
    return float(times[first])


def classify(traj: Trajectory, raw: RawParams, dp: DerivedParams,
             thresholds: Thresholds | None = None) -> Outcome:
    """Apply the dichotomy tests to a finished trajectory."""
    th = thresholds or Thresholds()
    times = traj.times
    if times.size == 0:
        raise ValueError("trajectory is empty")
    window = _window_mask(times, th.window_fraction)
    w_times = times[window]
    length = traj.h - traj.g
    decay_abs = th.decay_factor * max(raw.N1, raw.N2)

    peak_speed = float(np.maximum(np.abs(traj.gprime), np.abs(traj.hprime)).max())
    tail_speed = float(np.maximum(np.abs(traj.gprime[window]),
                                  np.abs(traj.hprime[window])).max())
    velocity_decay_ok = tail_speed <= th.velocity_decay_factor * peak_speed

    evidence = {
        "final_supU": float(traj.supU[-1]),
        "final_supZ": float(traj.supZ[-1]),
        "final_length": float(length[-1]),
        "final_risk_sqrt": float(traj.risk_sqrt[-1]),
        "final_risk_inner": float(traj.risk_inner[-1]),
        "window": (float(w_times[0]), float(w_times[-1])),
        "velocity_decay_ok": velocity_decay_ok,
    }

    if traj.supU.max() == 0.0 and traj.supZ.max() == 0.0:
        evidence["tail_left_speed"] = 0.0
        evidence["tail_right_speed"] = 0.0
        return Outcome(VANISHING, evidence, t_decided=float(times[0]))

    dt_w = w_times[-1] - w_times[0]
    if dt_w > 0.0:
        tail_left = float((traj.g[window][0] - traj.g[-1]) / dt_w)
        tail_right = float((traj.h[-1] - traj.h[window][0]) / dt_w)
    else:
        tail_left = tail_right = 0.0
    evidence["tail_left_speed"] = tail_left
    evidence["tail_right_speed"] = tail_right

    decayed = (traj.supU[window].max() < decay_abs
               and traj.supZ[window].max() < decay_abs)
    growth = (length[-1] - length[window][0]) / length[window][0]
    stalled = growth < th.stall_growth
    if decayed and stalled:
        below = (traj.supU < decay_abs) & (traj.supZ < decay_abs)
        return Outcome(VANISHING, evidence, t_decided=_sustained_from(below, times))

    if dp.U_star > 0.0 and dp.V_star > 0.0:
        captured = (abs(traj.midU[-1] - dp.U_star) <= th.capture_rel * dp.U_star
                    and abs(traj.midZ[-1] - dp.V_star) <= th.capture_rel * dp.V_star)
        scale = speed_scale(raw, dp)
        moving = (scale > 0.0
                  and tail_left >= th.motion_factor * scale
                  and tail_right >= th.motion_factor * scale)
        if captured and moving:
            inside = ((np.abs(traj.midU - dp.U_star) <= th.capture_rel * dp.U_star)
                      & (np.abs(traj.midZ - dp.V_star) <= th.capture_rel * dp.V_star))
            return Outcome(SPREADING, evidence,
                           t_decided=_sustained_from(inside, times))

    return Outcome(UNDETERMINED, evidence, t_decided=None)


def spreading_speeds(traj: Trajectory, window_fraction: float = 0.30) -> SpeedEstimate:
    """Tail-window linear fits of h(t) and -g(t); slopes are the speeds."""
    times = traj.times
    if times.size < 4:
        raise ValueError("trajectory too short for a speed fit")
    mask = _window_mask(times, window_fraction)
    t = times[mask]
    if t[-1] <= t[0]:
        raise ValueError("speed-fit window has zero duration")
    right_slope, right_icpt = np.polyfit(t, traj.h[mask], 1)
    left_slope, left_icpt = np.polyfit(t, -traj.g[mask], 1)
    res_right = float(np.abs(traj.h[mask] - (right_slope * t + right_icpt)).max())
    res_left = float(np.abs(-traj.g[mask] - (left_slope * t + left_icpt)).max())
    residual = max(res_left, res_right)
    left_speed = max(0.0, float(left_slope))
    right_speed = max(0.0, float(right_slope))
    slope_scale = max(abs(left_speed), abs(right_speed))
    if slope_scale > 0.0 and residual > 0.05 * slope_scale:
        warnings.warn(
            "speed fit residual exceeds 5% of the slope; the asymptotic "
            "regime is likely not reached on this horizon", stacklevel=2)
    return SpeedEstimate(left_speed=left_speed, right_speed=right_speed,
                         window=(float(t[0]), float(t[-1])),
                         fit_residual=residual)


def comparison_monitor(traj: Trajectory, oracle_traj, raw: RawParams) -> MonitorReport:
    """Check sup-norms against the homogeneous upper solution and the caps.

    The homogeneous system started from the suprema of the initial data
    dominates the PDE solution, so max_y W(t) - u(t) (and the mosquito
    analogue) must stay below tolerance; caps 0 <= W <= N1, 0 <= Z <= N2
    are verified on the recorded series and snapshots.
    """
    u_at = np.interp(traj.times, oracle_traj.times, oracle_traj.u)
    v_at = np.interp(traj.times, oracle_traj.times, oracle_traj.v)
    max_excess_U = float((traj.supU - u_at).max())
    max_excess_Z = float((traj.supZ - v_at).max())
    tol_U = 1e-4 * raw.N1
    tol_Z = 1e-4 * raw.N2
    slack_U = 1e-8 * raw.N1
    slack_Z = 1e-8 * raw.N2
    bounds_ok = (traj.supU.min() >= 0.0 and traj.supZ.min() >= 0.0
                 and traj.supU.max() <= raw.N1 + slack_U
                 and traj.supZ.max() <= raw.N2 + slack_Z)
    for snap in traj.snapshots:
        if (snap.W.min() < 0.0 or snap.W.max() > raw.N1 + slack_U
                or snap.Z.min() < 0.0 or snap.Z.max() > raw.N2 + slack_Z):
            bounds_ok = False
            break
    passed = bounds_ok and max_excess_U <= tol_U and max_excess_Z <= tol_Z
    return MonitorReport(max_excess_U=max_excess_U, max_excess_Z=max_excess_Z,
                         bounds_ok=bounds_ok, passed=passed,
                         tol_U=tol_U, tol_Z=tol_Z)


def speed_sandwich_check(speeds: SpeedEstimate, c_nu: float,
                         tol: float = 0.05) -> SandwichReport:
    """Verify left_speed <= c_nu <= right_speed with finite-horizon slack."""
    left_margin = c_nu * (1.0 + tol) - speeds.left_speed
    right_margin = speeds.right_speed * (1.0 + tol) - c_nu
    left_ok = left_margin >= 0.0
    right_ok = right_margin >= 0.0
    return SandwichReport(left_ok=left_ok, right_ok=right_ok,
                          left_margin=left_margin, right_margin=right_margin,
                          c_nu=c_nu, tol=tol, passed=left_ok and right_ok)
