"""Run orchestration: simulations, sweeps, threshold reports, file outputs.

All delimited outputs format floats with repr(), which round-trips
doubles exactly; two runs of the same config therefore produce
byte-identical CSV files.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from ..dynamics import (SPREADING, Outcome, SandwichReport, SpeedEstimate,
                        classify, speed_sandwich_check, spreading_speeds)
from ..eigen import NoInfectionLoopError, r0_numeric
from ..model import (check_hypothesis_H, derive_params, risk_index,
                     select_mu_star)
from ..stefan import Trajectory, simulate
from ..wavespeed import c_nu
from . import figures
from .config import ConfigError, ExperimentConfig

TRAJECTORY_HEADER = "t,g,h,gprime,hprime,supU,supV,riskF_sqrt,riskF_inner"
SNAPSHOT_HEADER = "y,x,U,V"
SWEEP_HEADER = "value,verdict,left_speed,right_speed,riskF0_sqrt,riskF0_inner"
SWEEP_PARAMS = ("mu", "nu", "beta", "d", "gamma", "h0")


def _fmt(x) -> str:
    return repr(float(x))


@dataclass(frozen=True)
class RunSummary:
    out_dir: Path
    verdict: str | None
    outcome: Outcome | None
    speeds: SpeedEstimate | None
    sandwich: SandwichReport | None
    c_nu_value: float | None
    risk0_sqrt: float
    risk0_inner: float
    wall_clock: float
    manifest: tuple[str, ...]


@dataclass(frozen=True)
class SweepRow:
    value: float
    verdict: str
    left_speed: float | None
    right_speed: float | None
    risk_sqrt: float | None
    risk_inner: float | None
    error: str | None


@dataclass(frozen=True)
class ThresholdReport:
    a1: float
    a2: float
    R_bulk: float
    mu_star_definition: float
    mu_star_alternate: float
    mu_star_selected: float
    convention: str
    endemic: bool
    U_star: float
    V_star: float
    riskF0_sqrt: float
    riskF0_inner: float
    riskF0_sqrt_mu0: float
    riskF0_inner_mu0: float
    hypothesis_high_risk: bool
    hypothesis_small_advection: bool
    eigen_numeric: float | None
    eigen_closed: float | None
    eigen_gap: float | None
    eigen_note: str | None

    def lines(self) -> list[str]:
        out = [
            f"a1 = {_fmt(self.a1)}",
            f"a2 = {_fmt(self.a2)}",
            f"R_bulk = {_fmt(self.R_bulk)}",
            f"mu_star_definition = {_fmt(self.mu_star_definition)}",
            f"mu_star_alternate = {_fmt(self.mu_star_alternate)}",
            f"mu_star_selected = {_fmt(self.mu_star_selected)}",
            f"mu_star_convention = {self.convention}",
        ]
        if self.endemic:
            out += [f"U_star = {_fmt(self.U_star)}",
                    f"V_star = {_fmt(self.V_star)}"]
        else:
            out.append("endemic_equilibrium = none")
        out += [
            f"riskF0_sqrt = {_fmt(self.riskF0_sqrt)}",
            f"riskF0_inner = {_fmt(self.riskF0_inner)}",
            f"riskF0_sqrt_mu0 = {_fmt(self.riskF0_sqrt_mu0)}",
            f"riskF0_inner_mu0 = {_fmt(self.riskF0_inner_mu0)}",
            f"hypothesis_high_risk = {str(self.hypothesis_high_risk).lower()}",
            f"hypothesis_small_advection = "
            f"{str(self.hypothesis_small_advection).lower()}",
        ]
        if self.eigen_note is not None:
            out.append(f"eigen_check = {self.eigen_note}")
        if self.eigen_numeric is not None:
            out += [f"eigen_r0_numeric = {_fmt(self.eigen_numeric)}",
                    f"eigen_r0_closed_form = {_fmt(self.eigen_closed)}",
                    f"eigen_relative_gap = {_fmt(self.eigen_gap)}"]
        return out


@dataclass(frozen=True)
class WavespeedSummary:
    out_dir: Path
    c_nu_value: float
    nu: float
    uprime0: float
    profile_c: float
    converged: bool
    newton_residual: float
    S: float
    n: int
    wall_clock: float
    manifest: tuple[str, ...]


def write_trajectory_csv(traj: Trajectory, path: Path) -> None:
    with path.open("w", newline="\n") as fh:
        fh.write(TRAJECTORY_HEADER + "\n")
        for i in range(traj.times.size):
            fh.write(",".join((
                _fmt(traj.times[i]), _fmt(traj.g[i]), _fmt(traj.h[i]),
                _fmt(traj.gprime[i]), _fmt(traj.hprime[i]),
                _fmt(traj.supU[i]), _fmt(traj.supZ[i]),
                _fmt(traj.risk_sqrt[i]), _fmt(traj.risk_inner[i]))) + "\n")


def write_snapshots(traj: Trajectory, out_dir: Path) -> list[str]:
    names = []
    index_rows = []
    for i, snap in enumerate(traj.snapshots):
        name = f"snapshot_{i:04d}.csv"
        y = snap.y_grid()
        x = snap.x_grid()
        with (out_dir / name).open("w", newline="\n") as fh:
            fh.write(SNAPSHOT_HEADER + "\n")
            for j in range(y.size):
                fh.write(",".join((_fmt(y[j]), _fmt(x[j]),
                                   _fmt(snap.W[j]), _fmt(snap.Z[j]))) + "\n")
        names.append(name)
        index_rows.append((i, name, snap.t))
    with (out_dir / "snapshots_index.csv").open("w", newline="\n") as fh:
        fh.write("index,filename,t\n")
        for i, name, t in index_rows:
            fh.write(f"{i},{name},{_fmt(t)}\n")
    names.append("snapshots_index.csv")
    return names


def run(config: ExperimentConfig, out_dir: str | Path,
        make_figures: bool = True) -> RunSummary:
    """Simulate, classify, fit speeds, and write the full report bundle."""
    t0 = time.perf_counter()
    raw = config.raw
    dp = derive_params(raw)
    risk0 = risk_index(dp, raw, -raw.h0, raw.h0, raw.mu)

    traj = simulate(raw, dp, config.profile, config.controls)

    outcome = classify(traj, raw, dp) if config.run_classify else None
    speeds = None
    sandwich = None
    c_value = None
    if (outcome is not None and outcome.verdict == SPREADING
            and config.run_speeds):
        speeds = spreading_speeds(traj)
        if config.run_sandwich and raw.mu > 0.0:
            c_value, _ = c_nu(raw, dp, raw.nu,
                              config.wavespeed_S, config.wavespeed_n)
            sandwich = speed_sandwich_check(speeds, c_value)

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest: list[str] = []
    write_trajectory_csv(traj, out_dir / "trajectory.csv")
    manifest.append("trajectory.csv")
    manifest += write_snapshots(traj, out_dir)
    if make_figures:
        manifest += figures.save_run_figures(traj, raw, dp, out_dir)

    wall = time.perf_counter() - t0
    lines = ["# run summary"]
    lines += [f"{k} = {v}" for k, v in config.echo_items()]
    lines += [
        f"a1 = {_fmt(dp.a1)}",
        f"a2 = {_fmt(dp.a2)}",
        f"R_bulk = {_fmt(dp.R_bulk)}",
        f"mu_star_definition = {_fmt(dp.mu_star_def)}",
        f"mu_star_alternate = {_fmt(dp.mu_star_alt)}",
        f"mu_star_selected = {_fmt(select_mu_star(dp, config.mu_star_convention))}",
        f"U_star = {_fmt(dp.U_star)}",
        f"V_star = {_fmt(dp.V_star)}",
        f"riskF0_sqrt = {_fmt(risk0.value)}",
        f"riskF0_inner = {_fmt(risk0.inner)}",
        f"t_final = {_fmt(traj.times[-1])}",
        f"steps = {traj.times.size - 1}",
    ]
    if outcome is not None:
        lines.append(f"verdict = {outcome.verdict}")
        lines.append("t_decided = " + ("none" if outcome.t_decided is None
                                       else _fmt(outcome.t_decided)))
        for key in sorted(outcome.evidence):
            lines.append(f"evidence.{key} = {outcome.evidence[key]}")
    if speeds is not None:
        lines += [
            f"left_speed = {_fmt(speeds.left_speed)}",
            f"right_speed = {_fmt(speeds.right_speed)}",
            f"speed_window = {_fmt(speeds.window[0])} {_fmt(speeds.window[1])}",
            f"speed_fit_residual = {_fmt(speeds.fit_residual)}",
        ]
    if sandwich is not None:
        lines += [
            f"sandwich_c_nu = {_fmt(sandwich.c_nu)}",
            f"sandwich_left_ok = {str(sandwich.left_ok).lower()}",
            f"sandwich_right_ok = {str(sandwich.right_ok).lower()}",
            f"sandwich_left_margin = {_fmt(sandwich.left_margin)}",
            f"sandwich_right_margin = {_fmt(sandwich.right_margin)}",
            f"sandwich_passed = {str(sandwich.passed).lower()}",
        ]
    lines.append(f"wall_clock_seconds = {wall:.3f}")
    manifest.append("summary.txt")
    lines += [f"output = {name}" for name in manifest]
    with (out_dir / "summary.txt").open("w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")

    return RunSummary(out_dir=out_dir,
                      verdict=None if outcome is None else outcome.verdict,
                      outcome=outcome, speeds=speeds, sandwich=sandwich,
                      c_nu_value=c_value,
                      risk0_sqrt=risk0.value, risk0_inner=risk0.inner,
                      wall_clock=wall, manifest=tuple(manifest))


def _sweep_worker(payload) -> SweepRow:
    config, param, value = payload
    try:
        raw = replace(config.raw, **{param: value})
        raw.validate()
        dp = derive_params(raw)
        risk0 = risk_index(dp, raw, -raw.h0, raw.h0, raw.mu)
        traj = simulate(raw, dp, config.profile, config.controls)
        outcome = classify(traj, raw, dp)
        left = right = None
        if outcome.verdict == SPREADING:
            sp = spreading_speeds(traj)
            left, right = sp.left_speed, sp.right_speed
        return SweepRow(value=value, verdict=outcome.verdict,
                        left_speed=left, right_speed=right,
                        risk_sqrt=risk0.value, risk_inner=risk0.inner,
                        error=None)
    except Exception as exc:  # one bad value must not abort the sweep
        return SweepRow(value=value, verdict="FAILED", left_speed=None,
                        right_speed=None, risk_sqrt=None, risk_inner=None,
                        error=f"{type(exc).__name__}: {exc}")


def sweep(config: ExperimentConfig, param: str, values,
          jobs: int | None = 1) -> list[SweepRow]:
    """One simulation per value; row order always matches input order."""
    if param not in SWEEP_PARAMS:
        raise ConfigError(f"sweep parameter must be one of "
                          f"{', '.join(SWEEP_PARAMS)}, got {param!r}")
    values = [float(v) for v in values]
    bad = [v for v in values if not math.isfinite(v)]
    if bad:
        raise ConfigError(f"sweep values must be finite, got {bad}")
    payloads = [(config, param, v) for v in values]
    if not payloads:
        return []
    if jobs is None or jobs <= 1:
        return [_sweep_worker(p) for p in payloads]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_sweep_worker, payloads))


def write_sweep_csv(rows, path: Path) -> None:
    def cell(x):
        return "" if x is None else _fmt(x)

    with path.open("w", newline="\n") as fh:
        fh.write(SWEEP_HEADER + "\n")
        for r in rows:
            fh.write(",".join((_fmt(r.value), r.verdict, cell(r.left_speed),
                               cell(r.right_speed), cell(r.risk_sqrt),
                               cell(r.risk_inner))) + "\n")


def thresholds(config: ExperimentConfig, eigen_n: int = 201) -> ThresholdReport:
    """Derived thresholds and the closed-form vs numeric cross-check; no runs."""
    raw = config.raw
    dp = derive_params(raw)
    r_cfg = risk_index(dp, raw, -raw.h0, raw.h0, raw.mu)
    r_mu0 = risk_index(dp, raw, -raw.h0, raw.h0, 0.0)
    high_risk, small_adv = check_hypothesis_H(
        dp, raw, mu_star_convention=config.mu_star_convention)

    eigen_numeric = eigen_closed = eigen_gap = None
    eigen_note = None
    if config.run_eigen_check:
        try:
            res = r0_numeric(raw, dp, -raw.h0, raw.h0, raw.mu, eigen_n)
            eigen_numeric = res.value
            eigen_closed = r_cfg.value
            eigen_gap = (abs(eigen_numeric - eigen_closed) / eigen_closed
                         if eigen_closed > 0.0 else abs(eigen_numeric))
        except NoInfectionLoopError:
            eigen_note = ("skipped: no infection loop "
                          "(a1 N1 a2 N2 = 0, risk index is identically zero)")
    else:
        eigen_note = "disabled by config"

    return ThresholdReport(
        a1=dp.a1, a2=dp.a2, R_bulk=dp.R_bulk,
        mu_star_definition=dp.mu_star_def,
        mu_star_alternate=dp.mu_star_alt,
        mu_star_selected=select_mu_star(dp, config.mu_star_convention),
        convention=config.mu_star_convention,
        endemic=dp.U_star > 0.0, U_star=dp.U_star, V_star=dp.V_star,
        riskF0_sqrt=r_cfg.value, riskF0_inner=r_cfg.inner,
        riskF0_sqrt_mu0=r_mu0.value, riskF0_inner_mu0=r_mu0.inner,
        hypothesis_high_risk=high_risk, hypothesis_small_advection=small_adv,
        eigen_numeric=eigen_numeric, eigen_closed=eigen_closed,
        eigen_gap=eigen_gap, eigen_note=eigen_note)


def wavespeed_report(config: ExperimentConfig, out_dir: str | Path,
                     make_figures: bool = True) -> WavespeedSummary:
    """Free-boundary speed c_nu with its profile, written as CSV + summary."""
    t0 = time.perf_counter()
    raw = config.raw
    dp = derive_params(raw)
    c_value, prof = c_nu(raw, dp, raw.nu, config.wavespeed_S, config.wavespeed_n)

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = ["wave_profile.csv"]
    with (out_dir / "wave_profile.csv").open("w", newline="\n") as fh:
        fh.write("s,u,v\n")
        for i in range(prof.s_grid.size):
            fh.write(",".join((_fmt(prof.s_grid[i]), _fmt(prof.u[i]),
                               _fmt(prof.v[i]))) + "\n")
    if make_figures:
        manifest += figures.save_wave_figure(prof, out_dir)

    wall = time.perf_counter() - t0
    lines = [
        "# wavespeed summary",
        f"nu = {_fmt(raw.nu)}",
        f"c_nu = {_fmt(c_value)}",
        f"profile_c = {_fmt(prof.c)}",
        f"uprime0 = {_fmt(prof.uprime0)}",
        f"speed_equation_residual = {_fmt(raw.nu * prof.uprime0 - prof.c)}",
        f"profile_converged = {str(prof.converged).lower()}",
        f"newton_residual = {_fmt(prof.newton_residual)}",
        f"S = {_fmt(prof.s_grid[-1])}",
        f"n = {prof.s_grid.size}",
        f"wall_clock_seconds = {wall:.3f}",
    ]
    manifest.append("wavespeed_summary.txt")
    lines += [f"output = {name}" for name in manifest]
    with (out_dir / "wavespeed_summary.txt").open("w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")

    return WavespeedSummary(out_dir=out_dir, c_nu_value=c_value, nu=raw.nu,
                            uprime0=prof.uprime0, profile_c=prof.c,
                            converged=prof.converged,
                            newton_residual=prof.newton_residual,
                            S=float(prof.s_grid[-1]), n=prof.s_grid.size,
                            wall_clock=wall, manifest=tuple(manifest))
