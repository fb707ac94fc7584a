"""Command-line interface.

Verbs: run, sweep, thresholds, wavespeed.  Exit codes: 0 success,
2 config/usage error, 3 solver failure, 4 sweep finished with failed rows.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..eigen import EigenConvergenceError
from ..stefan import SolverError, StabilityError
from ..wavespeed import NewtonDivergenceError, NoBracketError, PreconditionError
from . import figures, runner
from .config import BUNDLED_CONFIGS, ConfigError, load_config

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_PARTIAL = 4

_SOLVER_ERRORS = (SolverError, StabilityError, EigenConvergenceError,
                  NewtonDivergenceError, NoBracketError, PreconditionError)


def _add_config_arg(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", required=True,
                     help="config file path or bundled name "
                          f"({', '.join(BUNDLED_CONFIGS)})")


def _add_output_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--out-dir", default=None,
                     help="output directory (default: config out_dir or "
                          "<config name>_out)")
    sub.add_argument("--no-figures", action="store_true",
                     help="skip PNG figure rendering")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="wnvfronts",
        description="Two-species epidemic front simulator with free boundaries")
    sub = p.add_subparsers(dest="verb", required=True)

    run_p = sub.add_parser("run", help="simulate one config and write reports")
    _add_config_arg(run_p)
    _add_output_args(run_p)

    sweep_p = sub.add_parser("sweep", help="one run per parameter value")
    _add_config_arg(sweep_p)
    _add_output_args(sweep_p)
    sweep_p.add_argument("--param", required=True, choices=runner.SWEEP_PARAMS)
    sweep_p.add_argument("--values", required=True,
                         help="comma- or space-separated numbers")
    sweep_p.add_argument("--jobs", type=int, default=1,
                         help="parallel workers (default 1: serial)")

    thr_p = sub.add_parser("thresholds",
                           help="print derived thresholds without simulating")
    _add_config_arg(thr_p)

    ws_p = sub.add_parser("wavespeed",
                          help="free-boundary front speed c_nu and its profile")
    _add_config_arg(ws_p)
    _add_output_args(ws_p)
    return p


def _default_out_dir(args, config) -> Path:
    if args.out_dir is not None:
        return Path(args.out_dir)
    if config.out_dir is not None:
        return Path(config.out_dir)
    return Path(f"{Path(args.config).stem}_out")


def _parse_values(text: str) -> list[float]:
    tokens = text.replace(",", " ").split()
    try:
        return [float(tok) for tok in tokens]
    except ValueError as exc:
        raise ConfigError(f"--values must be numbers: {exc}") from exc


def _cmd_run(args) -> int:
    config = load_config(args.config)
    out_dir = _default_out_dir(args, config)
    summary = runner.run(config, out_dir, make_figures=not args.no_figures)
    print(f"verdict = {summary.verdict}")
    print(f"riskF0_sqrt = {summary.risk0_sqrt!r}")
    print(f"riskF0_inner = {summary.risk0_inner!r}")
    if summary.speeds is not None:
        print(f"left_speed = {summary.speeds.left_speed!r}")
        print(f"right_speed = {summary.speeds.right_speed!r}")
    if summary.sandwich is not None:
        print(f"sandwich_passed = {str(summary.sandwich.passed).lower()}")
    print(f"outputs: {summary.out_dir}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    config = load_config(args.config)
    values = _parse_values(args.values)
    rows = runner.sweep(config, args.param, values, jobs=args.jobs)
    out_dir = _default_out_dir(args, config)
    out_dir.mkdir(parents=True, exist_ok=True)
    runner.write_sweep_csv(rows, out_dir / "sweep.csv")
    if not args.no_figures:
        figures.save_sweep_figure(rows, args.param, out_dir)
    failed = [r for r in rows if r.verdict == "FAILED"]
    for r in failed:
        print(f"value {r.value!r} FAILED: {r.error}", file=sys.stderr)
    print(f"{len(rows)} rows ({len(failed)} failed) -> {out_dir / 'sweep.csv'}")
    return EXIT_PARTIAL if failed else EXIT_OK


def _cmd_thresholds(args) -> int:
    config = load_config(args.config)
    report = runner.thresholds(config)
    for line in report.lines():
        print(line)
    return EXIT_OK


def _cmd_wavespeed(args) -> int:
    config = load_config(args.config)
    out_dir = _default_out_dir(args, config)
    ws = runner.wavespeed_report(config, out_dir,
                                 make_figures=not args.no_figures)
    print(f"c_nu = {ws.c_nu_value!r}")
    print(f"uprime0 = {ws.uprime0!r}")
    print(f"profile_converged = {str(ws.converged).lower()}")
    print(f"outputs: {ws.out_dir}")
    return EXIT_OK


_COMMANDS = {
    "run": _cmd_run,
    "sweep": _cmd_sweep,
    "thresholds": _cmd_thresholds,
    "wavespeed": _cmd_wavespeed,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.verb](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _SOLVER_ERRORS as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
