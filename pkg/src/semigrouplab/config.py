"""Experiment configuration: a flat sectioned text format.

The file format is INI-style sections with ``key = value`` lines.  Parsing
and serialization round-trip exactly: every field is rendered with repr-
stable formatting and read back into the same value.
"""
from __future__ import annotations

import configparser
import io
import math
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Tuple

import numpy as np

from .errors import ConfigError

HEAT_C2 = 1.0 / (4.0 * math.pi**2)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a scenario run needs, grouped as in the config file."""

    # [scenario]
    name: str = "heat-default"
    # [grid]
    dimension: int = 1
    half_width: float = 8.0
    points: int = 256
    # [family]  (kind: poly | fractional)
    family_kind: str = "poly"
    coeffs: Tuple[complex, ...] = (0.0 + 0j, 0.0 + 0j, complex(HEAT_C2))
    fractional_m: float = 2.0
    fractional_c_rate: str = "constant"  # constant | one-plus-inverse
    # [comparison]  (second family: none | drift | shift:<complex> | scale:<real>)
    comparison: str = "drift"
    # [mollifier]
    mollifier: str = "bump"
    # [data]  (kind: delta | delta_prime | gaussian | file)
    data_kind: str = "delta"
    data_width: float = 1.0
    data_path: str = ""
    # [forcing]  (kind: none | gaussian_pulse)
    forcing_kind: str = "none"
    forcing_amplitude: float = 1.0
    # [sequence]
    n_list: Tuple[int, ...] = (4, 8, 16, 32)
    # [time]
    t_end: float = 1.0
    dt: float = 1.0 / 128.0
    t_max: float = 5.0
    # [lambda]
    lambda_samples: Tuple[complex, ...] = (2.0 + 0j, 10.0 + 0j, 1000.0 + 0j)
    # [growth]
    omega: float = 1.0
    b: float = 1.0
    # [perturbation]
    perturb_b: complex = 0.5j
    perturb_c_rate: str = "inverse"  # inverse | inverse-sqrt | zero
    # [tolerances]
    tol_laplace: float = 1e-8
    tol_pseudoresolvent: float = 1e-12
    tol_functional_equation: float = 1e-8
    tol_bromwich: float = 1e-4
    tol_perturbation_oracle: float = 1e-10
    tol_pairing: float = 1e-3
    # [output]
    output_dir: str = "out"


_LAYOUT = {
    "scenario": ("name",),
    "grid": ("dimension", "half_width", "points"),
    "family": ("family_kind", "coeffs", "fractional_m", "fractional_c_rate"),
    "comparison": ("comparison",),
    "mollifier": ("mollifier",),
    "data": ("data_kind", "data_width", "data_path"),
    "forcing": ("forcing_kind", "forcing_amplitude"),
    "sequence": ("n_list",),
    "time": ("t_end", "dt", "t_max"),
    "lambda": ("lambda_samples",),
    "growth": ("omega", "b"),
    "perturbation": ("perturb_b", "perturb_c_rate"),
    "tolerances": ("tol_laplace", "tol_pseudoresolvent", "tol_functional_equation",
                   "tol_bromwich", "tol_perturbation_oracle", "tol_pairing"),
    "output": ("output_dir",),
}

_FIELD_TYPES = {f.name: f.type for f in fields(ExperimentConfig)}


def _render(value) -> str:
    if isinstance(value, tuple):
        return ", ".join(_render(v) for v in value)
    if isinstance(value, complex):
        return repr(value).strip("()")
    if isinstance(value, float):
        return repr(value)
    return str(value)


def serialize_config(cfg: ExperimentConfig) -> str:
    out = io.StringIO()
    for section, keys in _LAYOUT.items():
        out.write(f"[{section}]\n")
        for key in keys:
            out.write(f"{key} = {_render(getattr(cfg, key))}\n")
        out.write("\n")
    return out.getvalue()


def _parse_value(name: str, raw: str):
    kind = _FIELD_TYPES[name]
    raw = raw.strip()
    if name == "n_list":
        return tuple(int(v) for v in raw.split(",") if v.strip())
    if name in ("coeffs", "lambda_samples"):
        return tuple(complex(v.strip()) for v in raw.split(",") if v.strip())
    if kind in ("int", int):
        return int(raw)
    if kind in ("float", float):
        return float(raw)
    if kind in ("complex", complex):
        return complex(raw)
    return raw


def parse_config(text: str) -> ExperimentConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from exc
    values = {}
    for section, keys in _LAYOUT.items():
        if not parser.has_section(section):
            continue
        for key, raw in parser.items(section):
            if key not in keys:
                raise ConfigError(f"unknown key '{key}' in section [{section}]")
            try:
                values[key] = _parse_value(key, raw)
            except ValueError as exc:
                raise ConfigError(
                    f"bad value for {section}.{key}: {raw!r} ({exc})") from exc
    for section in parser.sections():
        if section not in _LAYOUT:
            raise ConfigError(f"unknown section [{section}]")
    cfg = ExperimentConfig(**values)
    validate_config(cfg)
    return cfg


def load_config(path) -> ExperimentConfig:
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"config file not found: {p}")
    return parse_config(p.read_text())


def validate_config(cfg: ExperimentConfig) -> None:
    if cfg.dimension not in (1, 2):
        raise ConfigError(f"grid dimension must be 1 or 2, got {cfg.dimension}")
    if cfg.points < 2 or (cfg.points & (cfg.points - 1)):
        raise ConfigError(f"grid points must be a power of two, got {cfg.points}")
    if cfg.family_kind not in ("poly", "fractional"):
        raise ConfigError(f"unknown family kind '{cfg.family_kind}'")
    if cfg.family_kind == "poly" and len(cfg.coeffs) > 3:
        raise ConfigError("polynomial families support degree <= 2")
    if not (cfg.comparison in ("none", "drift")
            or cfg.comparison.startswith(("shift:", "scale:"))):
        raise ConfigError(f"unknown comparison '{cfg.comparison}'")
    if cfg.data_kind not in ("delta", "delta_prime", "gaussian", "file", "zero"):
        raise ConfigError(f"unknown data kind '{cfg.data_kind}'")
    if cfg.forcing_kind not in ("none", "gaussian_pulse"):
        raise ConfigError(f"unknown forcing kind '{cfg.forcing_kind}'")
    if cfg.perturb_c_rate not in ("inverse", "inverse-sqrt", "zero"):
        raise ConfigError(f"unknown C-sequence rate '{cfg.perturb_c_rate}'")
    if len(cfg.n_list) < 1 or sorted(cfg.n_list) != list(cfg.n_list):
        raise ConfigError("n_list must be a nonempty increasing list")
    if cfg.dt <= 0 or cfg.t_end <= 0:
        raise ConfigError("time grid needs positive dt and t_end")
    steps = cfg.t_end / cfg.dt
    if abs(steps - round(steps)) > 1e-9:
        raise ConfigError("t_end must be an integer multiple of dt")


def default_config(scenario: str = "verify") -> ExperimentConfig:
    """Built-in scenarios used when no config file is given."""
    if scenario in ("verify", "growth"):
        return ExperimentConfig()
    if scenario == "solve":
        return ExperimentConfig(name="heat-delta", points=2048, t_end=1.0,
                                dt=1.0 / 128.0, n_list=(4, 8, 16, 32))
    if scenario == "associate":
        return ExperimentConfig(name="coefficient-drift", half_width=4.0, points=128,
                                n_list=(4, 8, 16, 32, 64), comparison="drift",
                                data_kind="gaussian", data_width=1.8)
    if scenario == "perturb":
        return ExperimentConfig(name="perturbation", half_width=4.0, points=128,
                                n_list=(4, 8, 16, 32, 64))
    raise ConfigError(f"no default scenario named '{scenario}'")


def time_grid(cfg: ExperimentConfig) -> np.ndarray:
    return np.arange(0.0, cfg.t_end + 0.5 * cfg.dt, cfg.dt)
