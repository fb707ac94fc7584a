"""Figure rendering for run reports.

matplotlib is imported lazily so report paths that skip figures (and the
fast thresholds report) never pay the import cost.
"""

from __future__ import annotations

from pathlib import Path


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def _save(fig, path: Path, names: list[str]) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    names.append(path.name)


def save_run_figures(traj, raw, dp, out_dir: Path) -> list[str]:
    plt = _pyplot()
    names: list[str] = []
    t = traj.times

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(t, traj.g, label="g(t)")
    ax.plot(t, traj.h, label="h(t)")
    ax.set_xlabel("t")
    ax.set_ylabel("front position")
    ax.grid(alpha=0.3)
    ax.legend()
    _save(fig, out_dir / "fronts.png", names)
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(t, traj.supU, label="sup U")
    ax.plot(t, traj.supZ, label="sup V")
    if traj.supU.max() > 0.0 and traj.supZ.max() > 0.0:
        ax.set_yscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel("sup norm")
    ax.grid(alpha=0.3)
    ax.legend()
    _save(fig, out_dir / "sup_norms.png", names)
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(t, traj.risk_sqrt, label="risk index (sqrt)")
    ax.plot(t, traj.risk_inner, label="risk index (inner ratio)")
    ax.axhline(1.0, color="k", lw=0.8, ls="--")
    ax.set_xlabel("t")
    ax.set_ylabel("risk index at (g(t), h(t))")
    ax.grid(alpha=0.3)
    ax.legend()
    _save(fig, out_dir / "risk_index.png", names)
    plt.close(fig)

    snap = traj.snapshots[-1]
    x = snap.x_grid()
    fig, (ax_u, ax_v) = plt.subplots(2, 1, figsize=(6.0, 5.0), sharex=True)
    ax_u.plot(x, snap.W, color="tab:blue")
    ax_u.set_ylabel("U(x)")
    ax_u.grid(alpha=0.3)
    ax_u.set_title(f"final profile at t = {snap.t:.4g}")
    ax_v.plot(x, snap.Z, color="tab:orange")
    ax_v.set_ylabel("V(x)")
    ax_v.set_xlabel("x")
    ax_v.grid(alpha=0.3)
    _save(fig, out_dir / "final_profile.png", names)
    plt.close(fig)
    return names


def save_sweep_figure(rows, param: str, out_dir: Path) -> list[str]:
    pts = [(r.value, r.left_speed, r.right_speed) for r in rows
           if r.left_speed is not None and r.right_speed is not None]
    if not pts:
        return []
    plt = _pyplot()
    names: list[str] = []
    vals = [p[0] for p in pts]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(vals, [p[1] for p in pts], "o-", label="left speed")
    ax.plot(vals, [p[2] for p in pts], "s-", label="right speed")
    ax.set_xlabel(param)
    ax.set_ylabel("front speed")
    ax.grid(alpha=0.3)
    ax.legend()
    _save(fig, out_dir / "sweep_speeds.png", names)
    plt.close(fig)
    return names


def save_wave_figure(profile, out_dir: Path) -> list[str]:
    plt = _pyplot()
    names: list[str] = []
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(profile.s_grid, profile.u, color="tab:blue", label="u (birds)")
    ax.set_xlabel("s (distance behind the front)")
    ax.set_ylabel("u", color="tab:blue")
    ax2 = ax.twinx()
    ax2.plot(profile.s_grid, profile.v, color="tab:orange", label="v (mosquitoes)")
    ax2.set_ylabel("v", color="tab:orange")
    ax.set_title(f"profile at c = {profile.c:.6g}"
                 + ("" if profile.converged else " (not converged)"))
    ax.grid(alpha=0.3)
    _save(fig, out_dir / "wave_profile.png", names)
    plt.close(fig)
    return names
