"""Experiment configuration: line-oriented `key = value` files.

Blank lines and `#` comments are ignored; unknown or duplicate keys are
hard errors so a config never silently drifts from the code reading it.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..model import MU_STAR_CONVENTIONS, RawParams, ValidationError
from ..stefan import InitialProfile, SimControls

BUNDLED_CONFIGS = ("baseline_vanishing", "baseline_spreading", "advection_asymmetry")

_RAW_FLOAT_KEYS = ("D1", "D2", "mu", "alpha1", "alpha2", "beta",
                   "gamma", "d", "N1", "N2", "nu", "h0")
_REQUIRED = frozenset(("D1", "D2", "mu", "alpha1", "alpha2", "beta", "gamma",
                       "d", "nu", "h0", "amplitude_U", "amplitude_V", "T_max"))
_BOOL_KEYS = ("run_classify", "run_speeds", "run_sandwich", "run_eigen_check")
_ALL_KEYS = frozenset(_RAW_FLOAT_KEYS) | _REQUIRED | frozenset(_BOOL_KEYS) | {
    "N1", "N2", "amplitude_U", "amplitude_V", "profile_kind",
    "n_y", "dt", "T_max", "snapshot_every",
    "mu_star_convention", "out_dir", "wavespeed_S", "wavespeed_n",
}

_TRUE = frozenset(("true", "yes", "on", "1"))
_FALSE = frozenset(("false", "no", "off", "0"))


class ConfigError(ValueError):
    """Configuration file is missing, malformed, or inconsistent."""


@dataclass(frozen=True)
class ExperimentConfig:
    raw: RawParams
    profile: InitialProfile
    controls: SimControls
    run_classify: bool
    run_speeds: bool
    run_sandwich: bool
    run_eigen_check: bool
    mu_star_convention: str
    out_dir: str | None
    wavespeed_S: float | None
    wavespeed_n: int
    source: str

    def echo_items(self) -> tuple[tuple[str, str], ...]:
        """Canonical (key, value) pairs of every effective setting."""
        raw = self.raw
        items = [(k, repr(getattr(raw, k))) for k in _RAW_FLOAT_KEYS]
        items += [
            ("profile_kind", self.profile.kind),
            ("amplitude_U", repr(self.profile.amplitude_U)),
            ("amplitude_V", repr(self.profile.amplitude_V)),
            ("n_y", str(self.controls.n_y)),
            ("dt", "auto" if self.controls.dt is None else repr(self.controls.dt)),
            ("T_max", repr(self.controls.T_max)),
            ("snapshot_every", repr(self.controls.snapshot_every)),
            ("run_classify", str(self.run_classify).lower()),
            ("run_speeds", str(self.run_speeds).lower()),
            ("run_sandwich", str(self.run_sandwich).lower()),
            ("run_eigen_check", str(self.run_eigen_check).lower()),
            ("mu_star_convention", self.mu_star_convention),
            ("wavespeed_S", "auto" if self.wavespeed_S is None
             else repr(self.wavespeed_S)),
            ("wavespeed_n", str(self.wavespeed_n)),
        ]
        if self.out_dir is not None:
            items.append(("out_dir", self.out_dir))
        return tuple(items)


def resolve_config_path(name_or_path: str) -> Path:
    """Accept a filesystem path or the bare name of a bundled config."""
    p = Path(name_or_path)
    if p.is_file():
        return p
    stem = name_or_path.removesuffix(".cfg")
    if stem in BUNDLED_CONFIGS:
        ref = resources.files("wnvfronts.configs") / f"{stem}.cfg"
        with resources.as_file(ref) as real:
            return Path(real)
    raise ConfigError(
        f"config {name_or_path!r} is neither an existing file nor one of the "
        f"bundled configs {', '.join(BUNDLED_CONFIGS)}")


def _parse_lines(text: str, source: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected `key = value`, "
                              f"got {rawline.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _ALL_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"{source}:{lineno}: empty value for {key!r}")
        values[key] = value
    if not values:
        raise ConfigError(f"{source}: config file defines no keys")
    return values


def _as_float(values: dict[str, str], key: str, source: str) -> float:
    try:
        return float(values[key])
    except ValueError:
        raise ConfigError(
            f"{source}: key {key!r} must be a number, got {values[key]!r}") from None


def _as_int(values: dict[str, str], key: str, source: str) -> int:
    try:
        return int(values[key])
    except ValueError:
        raise ConfigError(
            f"{source}: key {key!r} must be an integer, got {values[key]!r}") from None


def _as_bool(values: dict[str, str], key: str, source: str) -> bool:
    token = values[key].lower()
    if token in _TRUE:
        return True
    if token in _FALSE:
        return False
    raise ConfigError(f"{source}: key {key!r} must be a boolean, got {values[key]!r}")


def parse_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    source = str(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {source}: {exc}") from exc
    values = _parse_lines(text, source)

    missing = sorted(_REQUIRED - values.keys())
    if missing:
        raise ConfigError(f"{source}: missing required keys: {', '.join(missing)}")

    kwargs = {k: _as_float(values, k, source) for k in _RAW_FLOAT_KEYS
              if k in values}
    kwargs.setdefault("N1", 1.0)
    kwargs.setdefault("N2", 20.0)
    raw = RawParams(**kwargs)
    try:
        raw.validate()
    except ValidationError as exc:
        raise ConfigError(f"{source}: {exc}") from exc

    kind = values.get("profile_kind", "cosine")
    if kind != "cosine":
        raise ConfigError(f"{source}: only profile_kind = cosine is supported in "
                          f"config files, got {kind!r}")
    amp_U = _as_float(values, "amplitude_U", source)
    amp_V = _as_float(values, "amplitude_V", source)
    if not 0.0 < amp_U <= raw.N1:
        raise ConfigError(f"{source}: amplitude_U must lie in (0, N1], got {amp_U}")
    if not 0.0 < amp_V <= raw.N2:
        raise ConfigError(f"{source}: amplitude_V must lie in (0, N2], got {amp_V}")
    profile = InitialProfile(kind="cosine", amplitude_U=amp_U, amplitude_V=amp_V)

    T_max = _as_float(values, "T_max", source)
    if not T_max > 0.0:
        raise ConfigError(f"{source}: T_max must be > 0, got {T_max}")
    n_y = _as_int(values, "n_y", source) if "n_y" in values else 401
    if n_y < 8:
        raise ConfigError(f"{source}: n_y must be at least 8, got {n_y}")

    dt = None
    if values.get("dt", "auto").lower() != "auto":
        dt = _as_float(values, "dt", source)
        if not dt > 0.0:
            raise ConfigError(f"{source}: dt must be > 0 or auto, got {dt}")

    if values.get("snapshot_every", "auto").lower() == "auto":
        snapshot_every = T_max / 50.0
    else:
        snapshot_every = _as_float(values, "snapshot_every", source)
        if not snapshot_every > 0.0:
            raise ConfigError(f"{source}: snapshot_every must be > 0 or auto, "
                              f"got {snapshot_every}")

    convention = values.get("mu_star_convention", "definition")
    if convention not in MU_STAR_CONVENTIONS:
        raise ConfigError(f"{source}: mu_star_convention must be one of "
                          f"{', '.join(MU_STAR_CONVENTIONS)}, got {convention!r}")

    wavespeed_S = None
    if values.get("wavespeed_S", "auto").lower() != "auto":
        wavespeed_S = _as_float(values, "wavespeed_S", source)
        if not wavespeed_S > 0.0:
            raise ConfigError(f"{source}: wavespeed_S must be > 0 or auto, "
                              f"got {wavespeed_S}")
    wavespeed_n = _as_int(values, "wavespeed_n", source) if "wavespeed_n" in values \
        else 2001
    if wavespeed_n < 201:
        raise ConfigError(f"{source}: wavespeed_n must be at least 201, "
                          f"got {wavespeed_n}")

    controls = SimControls(n_y=n_y, dt=dt, T_max=T_max,
                           snapshot_every=snapshot_every)
    return ExperimentConfig(
        raw=raw, profile=profile, controls=controls,
        run_classify=_as_bool(values, "run_classify", source)
        if "run_classify" in values else True,
        run_speeds=_as_bool(values, "run_speeds", source)
        if "run_speeds" in values else True,
        run_sandwich=_as_bool(values, "run_sandwich", source)
        if "run_sandwich" in values else True,
        run_eigen_check=_as_bool(values, "run_eigen_check", source)
        if "run_eigen_check" in values else True,
        mu_star_convention=convention,
        out_dir=values.get("out_dir"),
        wavespeed_S=wavespeed_S,
        wavespeed_n=wavespeed_n,
        source=source,
    )


def load_config(name_or_path: str) -> ExperimentConfig:
    return parse_config(resolve_config_path(name_or_path))
