"""Flat sectioned key = value run configuration (INI syntax, no interpolation)."""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field as dc_field

from .errors import ConfigError
from .presets import PRESET_NAMES
from .profiles import ProfileFamily
from .solver import SolverConfig

__all__ = ["RunConfig", "load_config", "parse_family"]


@dataclass
class RunConfig:
    preset: str = "two_phase_linear"
    experiments: tuple = ()
    eps_list: tuple = ()
    eps: float = 1e-2
    n: int | None = None
    delta: float = 1.0
    family: ProfileFamily = ProfileFamily.COMPACT_RAMP
    band_factor: float | None = None
    solver: SolverConfig = dc_field(default_factory=SolverConfig)
    out_dir: str = "out"


def parse_family(text: str) -> ProfileFamily:
    key = text.strip().lower()
    if key in ("tanh", "smooth", "smooth_tanh"):
        return ProfileFamily.SMOOTH_TANH
    if key in ("ramp", "compact", "compact_ramp"):
        return ProfileFamily.COMPACT_RAMP
    raise ConfigError(f"unknown profile family {text!r} (expected tanh|ramp)")


def _get(parser, section, key, cast, default):
    if not parser.has_option(section, key):
        return default
    raw = parser.get(section, key)
    try:
        return cast(raw)
    except (ValueError, ConfigError) as exc:
        raise ConfigError(f"[{section}] {key} = {raw!r}: {exc}") from None


def _eps_list(raw: str) -> tuple:
    vals = tuple(float(v) for v in raw.replace(";", ",").split(",") if v.strip())
    if not vals:
        raise ValueError("empty eps list")
    return vals


def load_config(path) -> RunConfig:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        read = parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    if not read:
        raise ConfigError(f"config file not found: {path}")

    cfg = RunConfig()
    cfg.preset = _get(parser, "run", "preset", str, cfg.preset).strip()
    if cfg.preset not in PRESET_NAMES:
        raise ConfigError(
            f"[run] preset = {cfg.preset!r}: unknown preset "
            f"(available: {', '.join(PRESET_NAMES)})"
        )
    exps = _get(parser, "run", "experiments", str, "")
    cfg.experiments = tuple(e.strip() for e in exps.split(",") if e.strip())
    cfg.eps_list = _get(parser, "run", "eps", _eps_list, cfg.eps_list)
    if cfg.eps_list:
        cfg.eps = cfg.eps_list[0]

    cfg.n = _get(parser, "grid", "n", int, cfg.n)
    if cfg.n is not None and cfg.n < 3:
        raise ConfigError(f"[grid] n = {cfg.n}: need at least 3 cells")

    cfg.delta = _get(parser, "recovery", "delta", float, cfg.delta)
    if cfg.delta < 1.0:
        raise ConfigError(f"[recovery] delta = {cfg.delta}: must be >= 1")
    cfg.family = _get(parser, "recovery", "family", parse_family, cfg.family)
    cfg.band_factor = _get(parser, "recovery", "band_factor", float, cfg.band_factor)

    method = _get(parser, "solver", "method", str, "gauss_seidel").strip()
    tol = _get(parser, "solver", "tol", float, 1e-8)
    max_iter = _get(parser, "solver", "max_iter", int, 100_000)
    init = _get(parser, "solver", "init", str, "harmonic").strip()
    try:
        cfg.solver = SolverConfig(
            method=method, tol_residual=tol, max_iter=max_iter, init=init
        )
    except Exception as exc:
        raise ConfigError(f"[solver] invalid configuration: {exc}") from None

    cfg.out_dir = _get(parser, "output", "dir", str, cfg.out_dir).strip()
    return cfg
