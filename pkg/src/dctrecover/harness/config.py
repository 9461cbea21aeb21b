"""Flat key=value config files mirroring RecoveryConfig.

Example:

    # smoothing scales as p:q:weight triples
    scales = 2:1:0.015,8:4:0.015
    gamma = 0.5
    inner_max_iters = 200

Unknown keys are rejected so typos do not silently fall back to defaults.
Command-line flags override file values.
"""

import dataclasses

from ..errors import ConfigError
from ..regularizers import ScaleSpec
from ..solver import RecoveryConfig

_FLOAT_KEYS = ("gamma", "alpha", "delta", "inner_tol", "outer_eps", "nuclear_weight")
_INT_KEYS = ("rank_r", "inner_max_iters", "outer_max_iters", "seed")


def parse_scales(text):
    """"p:q:weight,p:q:weight,..." -> list of ScaleSpec; empty string -> []."""
    text = text.strip()
    if not text:
        return []
    scales = []
    for part in text.split(","):
        fields = part.strip().split(":")
        if len(fields) != 3:
            raise ConfigError(f"scale entry must be p:q:weight, got {part.strip()!r}")
        try:
            scales.append(ScaleSpec(int(fields[0]), int(fields[1]), float(fields[2])))
        except ValueError:
            raise ConfigError(f"cannot parse scale entry {part.strip()!r}") from None
    return scales


def _cast(key, raw):
    try:
        if key == "scales":
            return parse_scales(raw)
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
    except ConfigError:
        raise
    except ValueError:
        raise ConfigError(f"cannot parse value {raw!r} for key {key!r}") from None
    raise ConfigError(f"unknown config key {key!r}")


def parse_config_text(text, source="<config>"):
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, raw = line.partition("=")
        if not sep:
            raise ConfigError(f"{source}:{lineno}: expected key=value, got {line!r}")
        values[key.strip()] = _cast(key.strip(), raw.strip())
    return values


def load_config(path=None, overrides=None):
    """RecoveryConfig from an optional file plus explicit overrides (flags win)."""
    values = {}
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            values = parse_config_text(fh.read(), source=str(path))
    if overrides:
        for key, val in overrides.items():
            if val is None:
                continue
            if key == "scales" and isinstance(val, str):
                val = parse_scales(val)
            values[key] = val
    cfg = RecoveryConfig()
    for key, val in values.items():
        if key not in {f.name for f in dataclasses.fields(RecoveryConfig)}:
            raise ConfigError(f"unknown config key {key!r}")
        cfg = dataclasses.replace(cfg, **{key: val})
    return cfg
