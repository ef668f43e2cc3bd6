"""Flat ``key = value`` run configuration for the command-line tool.

Example (the bundled ``fig1`` recipe)::

    mode = swap-prob
    omega_GHz = 1.0
    a_over_omega = 3
    c_over_omega = 1
    t_start = 0
    t_end = 5
    samples = 501

Parameter blocks, exactly one of which must be present:

* dimensionless: ``a_over_omega``, ``c_over_omega``
* angular:       ``a_GHz``, ``c_GHz`` (rad/ns)
* units:         ``J_eV`` and either ``Bminus_mT`` (g-weighted) or
                 ``B1_mT, B2_mT, g1, g2``

``omega_GHz`` (default 1) is always read.  Pulse angles for ``synthesize``
use dotted keys ``theta.family``, ``theta.v0`` ...
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import units
from .errors import ConfigError
from .sech import SechPulseParams

MODES = ("synthesize", "evolve", "swap-prob", "sweep", "validate")
BLOCKS = {
    "dimensionless": ("a_over_omega", "c_over_omega"),
    "angular": ("a_GHz", "c_GHz"),
    "units": ("J_eV", "Bminus_mT", "B1_mT", "B2_mT", "g1", "g2"),
}
# sweep variable -> config key, per parameter block
SWEEP_KEYS = {
    "omega": {"dimensionless": "omega_GHz", "angular": "omega_GHz", "units": "omega_GHz"},
    "J": {"dimensionless": "a_over_omega", "angular": "a_GHz", "units": "J_eV"},
    "c": {"dimensionless": "c_over_omega", "angular": "c_GHz", "units": "Bminus_mT"},
    "t": {"dimensionless": "t_ns", "angular": "t_ns", "units": "t_ns"},
}


def parse_text(text: str, source: str = "<config>") -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"{source}:{lineno}: empty key")
        values[key] = value
    return values


def builtin_names():
    return sorted(p.name[:-4] for p in resources.files("spinprop.configs").iterdir() if p.name.endswith(".cfg"))


def load(path) -> dict:
    """Read a config file; bare names like ``fig1`` resolve to bundled recipes."""
    p = Path(path)
    if p.exists():
        return parse_text(p.read_text(), str(p))
    name = str(path).removesuffix(".cfg")
    if name in builtin_names():
        return parse_text(resources.files("spinprop.configs").joinpath(name + ".cfg").read_text(), name)
    raise ConfigError(f"config file {path!r} not found (built-in recipes: {', '.join(builtin_names())})")


def apply_overrides(values: dict, overrides) -> dict:
    out = dict(values)
    for item in overrides or ():
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, value = (part.strip() for part in item.split("=", 1))
        out[key] = value
    return out


def get_float(values: dict, key: str, default=None) -> float:
    if key not in values:
        if default is None:
            raise ConfigError(f"missing required key {key!r}")
        return float(default)
    try:
        x = float(values[key])
    except ValueError:
        raise ConfigError(f"key {key!r}: {values[key]!r} is not a number") from None
    if not math.isfinite(x):
        raise ConfigError(f"key {key!r} must be finite")
    return x


def get_int(values: dict, key: str, default=None) -> int:
    x = get_float(values, key, default)
    if x != int(x):
        raise ConfigError(f"key {key!r} must be an integer, got {values[key]!r}")
    return int(x)


def parameter_block(values: dict) -> str:
    present = [name for name, keys in BLOCKS.items() if any(k in values for k in keys)]
    if len(present) != 1:
        found = ", ".join(present) or "none"
        raise ConfigError(f"exactly one parameter block (dimensionless, angular, units) must be given; found: {found}")
    return present[0]


def sech_params(values: dict) -> SechPulseParams:
    """``(a, c, omega)`` in rad/ns from whichever parameter block is present."""
    omega = get_float(values, "omega_GHz", 1.0)
    if omega <= 0:
        raise ConfigError("omega_GHz must be positive")
    block = parameter_block(values)
    if block == "dimensionless":
        a = get_float(values, "a_over_omega") * omega
        c = get_float(values, "c_over_omega") * omega
    elif block == "angular":
        a, c = get_float(values, "a_GHz"), get_float(values, "c_GHz")
    else:
        a = units.energy_ev_to_angular(get_float(values, "J_eV"))
        c = units.zeeman_to_angular(bminus_tesla(values))
    try:
        return SechPulseParams(a, c, omega)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def bminus_tesla(values: dict) -> float:
    if "Bminus_mT" in values:
        return get_float(values, "Bminus_mT") * 1e-3
    g1, g2 = get_float(values, "g1"), get_float(values, "g2")
    return (g1 * get_float(values, "B1_mT") - g2 * get_float(values, "B2_mT")) * 1e-3


@dataclass
class TimeGrid:
    t_start: float
    t_end: float
    samples: int

    def points(self):
        return np.linspace(self.t_start, self.t_end, self.samples)


def time_grid(values: dict) -> TimeGrid:
    grid = TimeGrid(get_float(values, "t_start"), get_float(values, "t_end"), get_int(values, "samples"))
    if grid.samples < 2:
        raise ConfigError("samples must be >= 2")
    if not grid.t_end > grid.t_start:
        raise ConfigError("t_end must be greater than t_start")
    return grid


@dataclass
class RunConfig:
    mode: str
    values: dict = field(default_factory=dict)
    out: str | None = None
    tolerance: float = 1e-10

    @classmethod
    def from_values(cls, values: dict, mode=None, out=None, tolerance=None):
        mode = mode or values.get("mode")
        if mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {mode!r}")
        tol = tolerance if tolerance is not None else get_float(values, "tolerance", 1e-10)
        if not 1e-13 <= tol <= 1e-3:
            raise ConfigError(f"tolerance must lie in [1e-13, 1e-3], got {tol}")
        return cls(mode, dict(values), out or values.get("out"), tol)
