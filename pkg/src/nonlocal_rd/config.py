"""Run configuration: presets, config files and ``key=value`` overrides."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Mapping

import numpy as np
import yaml

from .errors import ConfigError
from .grid import Grid1D, sample_initial
from .model import ConstantDiffusion, DiffusionSpec, ReactionSpec
from .stepper import FieldPair, SchemeConfig


@dataclass(frozen=True)
class RunConfig:
    preset: str | None = None
    J: int = 10_000
    K: int = 10_000
    T: float = 0.2
    # diffusion
    epsilon: float = 1e-6
    m0: float = 1.0
    literal_form: bool = False
    m: float | None = None
    constant_a: float | None = None
    # reaction
    r: float = 1.0
    kappa: float = 10.0
    alpha: float = 0.0
    M1: float | None = None
    # initial data u0 = delta sin(pi x), v0 = -u0
    delta: float = 1.95
    output_dir: str = "output"
    snapshot_every: int | None = None
    verify: bool = False

    def __post_init__(self):
        _validate(self)

    def grid(self) -> Grid1D:
        return Grid1D(self.J)

    def diffusion(self):
        if self.constant_a is not None:
            return ConstantDiffusion(self.constant_a)
        return DiffusionSpec(self.epsilon, self.m0, self.literal_form, self.m)

    def reaction(self) -> ReactionSpec:
        return ReactionSpec(self.r, self.kappa, self.alpha, self.M1)

    def scheme(self, J: int | None = None, K: int | None = None) -> SchemeConfig:
        grid = self.grid() if J is None else Grid1D(J)
        return SchemeConfig(self.T, self.K if K is None else K, grid,
                            self.diffusion(), self.reaction())

    def initial_state(self, grid: Grid1D | None = None) -> FieldPair:
        grid = self.grid() if grid is None else grid
        u0 = sample_initial(grid, lambda x: self.delta * np.sin(np.pi * x))
        return FieldPair(u0, -u0, 0.0)

    @property
    def snapshot_cadence(self) -> int:
        if self.snapshot_every is not None:
            return self.snapshot_every
        return max(1, self.K // 10)


PRESETS: dict[str, dict[str, Any]] = {
    "extinction": dict(J=10_000, K=10_000, T=0.2, epsilon=1e-6, m0=1.0,
                       r=1.0, kappa=10.0, delta=1.95),
    "persistence": dict(J=10_000, K=10_000, T=0.2, epsilon=1e-6, m0=0.1,
                        r=1.0, kappa=10.0, delta=1.95),
}

_FIELDS = {f.name: f for f in fields(RunConfig)}
_INT_FIELDS = {"J", "K", "snapshot_every"}
_BOOL_FIELDS = {"literal_form", "verify"}
_STR_FIELDS = {"preset", "output_dir"}
_OPTIONAL = {"preset", "m", "constant_a", "M1", "snapshot_every"}


def _validate(cfg: RunConfig) -> None:
    def need(cond, name, msg):
        if not cond:
            raise ConfigError(msg, field=name)

    if cfg.preset is not None:
        need(cfg.preset in PRESETS, "preset",
             f"unknown preset {cfg.preset!r}; choose from {sorted(PRESETS)}")
    need(cfg.J >= 2, "J", f"must be >= 2, got {cfg.J}")
    need(cfg.K >= 0, "K", f"must be >= 0, got {cfg.K}")
    for name in ("T", "epsilon", "kappa"):
        val = getattr(cfg, name)
        need(val > 0 and math.isfinite(val), name, f"must be positive, got {val!r}")
    for name in ("m0", "r", "alpha"):
        val = getattr(cfg, name)
        need(val >= 0 and math.isfinite(val), name, f"must be nonnegative, got {val!r}")
    need(math.isfinite(cfg.delta), "delta", f"must be finite, got {cfg.delta!r}")
    for name in ("m", "constant_a"):
        val = getattr(cfg, name)
        if val is not None:
            need(val > 0 and math.isfinite(val), name, f"must be positive, got {val!r}")
    if cfg.m is None and cfg.constant_a is None:
        need(cfg.m0 > 0, "m", "m0 is 0, so a positive lower bound m must be given")
    if cfg.M1 is not None:
        need(cfg.M1 >= 0, "M1", f"must be nonnegative, got {cfg.M1!r}")
    if cfg.snapshot_every is not None:
        need(cfg.snapshot_every >= 1, "snapshot_every",
             f"must be >= 1, got {cfg.snapshot_every}")


def _coerce(name: str, value: Any) -> Any:
    if name not in _FIELDS:
        raise ConfigError(f"unknown key; valid keys are {sorted(_FIELDS)}", field=name)
    if value is None or (isinstance(value, str) and value.lower() in ("null", "none", "")):
        if name in _OPTIONAL:
            return None
        raise ConfigError("may not be empty", field=name)
    try:
        if name in _BOOL_FIELDS:
            if isinstance(value, bool):
                return value
            lowered = str(value).strip().lower()
            if lowered in ("true", "yes", "1", "on"):
                return True
            if lowered in ("false", "no", "0", "off"):
                return False
            raise ValueError(value)
        if name in _STR_FIELDS:
            return str(value)
        if name in _INT_FIELDS:
            if isinstance(value, bool):
                raise ValueError(value)
            as_float = float(value)
            if as_float != int(as_float):
                raise ValueError(value)
            return int(as_float)
        if isinstance(value, bool):
            raise ValueError(value)
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"cannot interpret {value!r}", field=name) from None


def parse_config_text(text: str) -> dict[str, Any]:
    """Parse a flat ``key: value`` YAML document, keeping line numbers in errors."""
    try:
        loader = yaml.SafeLoader(text)
        try:
            node = loader.get_single_node()
        finally:
            loader.dispose()
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ConfigError(str(exc), line=None if mark is None else mark.line + 1) from None
    if node is None:
        return {}
    if not isinstance(node, yaml.MappingNode):
        raise ConfigError("config must be a flat mapping of key: value",
                          line=node.start_mark.line + 1)
    out: dict[str, Any] = {}
    for key_node, value_node in node.value:
        line = key_node.start_mark.line + 1
        if not isinstance(value_node, yaml.ScalarNode):
            raise ConfigError("nested values are not allowed", field=key_node.value, line=line)
        key = key_node.value
        if key in out:
            raise ConfigError("duplicate key", field=key, line=line)
        try:
            out[key] = _coerce(key, value_node.value)
        except ConfigError as exc:
            raise ConfigError(exc.reason, field=exc.field, line=line) from None
    return out


def parse_overrides(pairs: list[str]) -> dict[str, Any]:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"override {pair!r} is not key=value")
        key, value = pair.split("=", 1)
        key = key.strip()
        out[key] = _coerce(key, value.strip())
    return out


def resolve_config(file: str | None = None, flags: Mapping[str, Any] | None = None,
                   preset: str | None = None) -> RunConfig:
    """Merge defaults < preset < config file < flags into a validated RunConfig.

    ``file`` is the config text (not a path). The preset may be named by the
    ``preset`` argument, the file, or the flags; the highest-precedence
    source wins.
    """
    from_file = parse_config_text(file) if file else {}
    flags = {k: _coerce(k, v) for k, v in (flags or {}).items()}
    chosen = flags.get("preset", from_file.get("preset", preset))
    merged: dict[str, Any] = {}
    if chosen is not None:
        if chosen not in PRESETS:
            raise ConfigError(f"unknown preset {chosen!r}; choose from {sorted(PRESETS)}",
                              field="preset")
        merged.update(PRESETS[chosen])
        merged["preset"] = chosen
    merged.update(from_file)
    merged.update(flags)
    return RunConfig(**merged)


def load_config(path: str | Path | None, overrides: list[str] = (), **flags) -> RunConfig:
    """Resolve a RunConfig from a config file path, ``key=value`` overrides and flags.

    Keyword flags that are None are ignored; the rest rank with the overrides.
    """
    text = Path(path).read_text() if path else None
    merged = parse_overrides(list(overrides))
    merged.update({k: v for k, v in flags.items() if v is not None})
    return resolve_config(text, merged)


def replace(cfg: RunConfig, **changes) -> RunConfig:
    return dataclasses.replace(cfg, **changes)
