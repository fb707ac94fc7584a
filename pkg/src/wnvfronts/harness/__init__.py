"""CLI front end: config parsing, run orchestration, reports."""

from .cli import main
from .config import (BUNDLED_CONFIGS, ConfigError, ExperimentConfig,
                     load_config, parse_config, resolve_config_path)
from .runner import (RunSummary, SweepRow, ThresholdReport, WavespeedSummary,
                     run, sweep, thresholds, wavespeed_report)

__all__ = [
    "BUNDLED_CONFIGS", "ConfigError", "ExperimentConfig", "RunSummary",
    "SweepRow", "ThresholdReport", "WavespeedSummary", "load_config", "main",
    "parse_config", "resolve_config_path", "run", "sweep", "thresholds",
    "wavespeed_report",
]
