"""Run configuration: a flat key = value text format and its dataclass form.

The file format is deliberately small: one `key = value` per line, `#`
starts a comment, blank lines are ignored, and unknown or duplicate keys
are rejected with the key name and line number.  `echo_config` renders a
canonical, byte-reproducible form whose parse equals the original parse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from typing import Callable

from .errors import ConfigError
from .grid import DomainVariant

# time-step presets matching the two reference mesh profiles
MESH_A_TAU = 1.25e-2
MESH_B_TAU = 1.66e-2

H_RULES = ("local", "representative")


@dataclass(frozen=True)
class SimConfig:
    re: float = 5000.0
    tau: float = MESH_A_TAU
    a: float = 0.125
    variant: DomainVariant = DomainVariant.OFFSET
    swirl: bool = True
    eps1: float = 1.0
    eps2: float = 1.0
    eps3: float = 1.0
    eps4: float = 1.0
    eps5: float = 1.0
    eps6: float = 1.0
    beta1: float = 1.0
    beta2: float = 1.0
    beta3: float = 1.0
    beta4: float = 1.0
    beta5: float = 1.0
    beta6: float = 1.0
    delta0: float = 1.0
    lin_tol: float = 1e-8
    lin_maxit: int = 10
    h_rule: str = "local"
    nr: int = 64
    nz: int = 160
    grading: float = 0.96
    t_end: float = 2.0
    record_every: int = 1
    r_core: float = 0.1
    jump_threshold: float = 0.25
    xi_floor: float = 1e-8
    snapshot_times: tuple[float, ...] = (0.4, 1.4)
    out_dir: str = ""

    def __post_init__(self):
        validate(self)

    def replace(self, **changes) -> "SimConfig":
        return replace(self, **changes)


def validate(cfg: SimConfig) -> None:
    def positive(key: str):
        if not getattr(cfg, key) > 0:
            raise ConfigError(f"{key} must be positive, got {getattr(cfg, key)}", key=key)

    for key in ("re", "tau", "a", "delta0", "jump_threshold",
                "eps1", "eps2", "eps3", "eps4", "eps5", "eps6"):
        positive(key)
    if cfg.t_end < 0:
        raise ConfigError(f"t_end must be non-negative, got {cfg.t_end}", key="t_end")
    if not (0 < cfg.lin_tol < 1):
        raise ConfigError(f"lin_tol must lie in (0, 1), got {cfg.lin_tol}", key="lin_tol")
    if cfg.lin_maxit < 1:
        raise ConfigError(f"lin_maxit must be at least 1, got {cfg.lin_maxit}", key="lin_maxit")
    if cfg.h_rule not in H_RULES:
        raise ConfigError(f"h_rule must be one of {H_RULES}, got {cfg.h_rule!r}", key="h_rule")
    if cfg.nr < 2:
        raise ConfigError(f"nr must be at least 2, got {cfg.nr}", key="nr")
    if cfg.nz < 2:
        raise ConfigError(f"nz must be at least 2, got {cfg.nz}", key="nz")
    if not (0 < cfg.grading <= 1):
        raise ConfigError(f"grading must lie in (0, 1], got {cfg.grading}", key="grading")
    if cfg.record_every < 1:
        raise ConfigError(f"record_every must be at least 1, got {cfg.record_every}",
                          key="record_every")
    if not (0 < cfg.r_core <= 1):
        raise ConfigError(f"r_core must lie in (0, 1], got {cfg.r_core}", key="r_core")
    if cfg.xi_floor < 0:
        raise ConfigError(f"xi_floor must be non-negative, got {cfg.xi_floor}", key="xi_floor")
    if any(t < 0 for t in cfg.snapshot_times):
        raise ConfigError("snapshot_times must be non-negative", key="snapshot_times")


def step_count(config: SimConfig) -> int:
    """Number of tau-sized steps a run takes: largest k with k*tau <= t_end."""
    return int(math.floor(config.t_end / config.tau + 1e-9))


def snapshot_schedule(config: SimConfig) -> dict[int, float]:
    """Map step index -> requested snapshot time for times that land on a step.

    A requested time lands on the nearest step when it lies within half a
    step of it; times outside the run or colliding on one step are dropped
    (first request wins).
    """
    n_steps = step_count(config)
    schedule: dict[int, float] = {}
    for ts in config.snapshot_times:
        k = int(round(ts / config.tau))
        if 0 <= k <= n_steps and abs(k * config.tau - ts) <= 0.5 * config.tau + 1e-12:
            schedule.setdefault(k, ts)
    return schedule


# ---------------------------------------------------------------------------
# per-key parsing and formatting

def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t == "true":
        return True
    if t == "false":
        return False
    raise ValueError(f"expected true or false, got {text!r}")


def _parse_variant(text: str) -> DomainVariant:
    try:
        return DomainVariant(text.strip().lower())
    except ValueError:
        raise ValueError(f"expected offset or centered, got {text!r}") from None


def _parse_h_rule(text: str) -> str:
    t = text.strip().lower()
    if t not in H_RULES:
        raise ValueError(f"expected one of {H_RULES}, got {text!r}")
    return t


def _parse_int(text: str) -> int:
    return int(text.strip())


def _parse_float(text: str) -> float:
    v = float(text.strip())
    if v != v:
        raise ValueError("nan is not a valid value")
    return v


def _parse_times(text: str) -> tuple[float, ...]:
    t = text.strip()
    if not t:
        return ()
    return tuple(_parse_float(part) for part in t.split(","))


def _fmt_float(v: float) -> str:
    return repr(float(v))


def _fmt_times(v: tuple[float, ...]) -> str:
    return ",".join(_fmt_float(t) for t in v)


_PARSERS: dict[str, Callable[[str], object]] = {}
_FORMATTERS: dict[str, Callable[[object], str]] = {}
for f in fields(SimConfig):
    if f.name == "variant":
        _PARSERS[f.name] = _parse_variant
        _FORMATTERS[f.name] = lambda v: v.value
    elif f.name == "swirl":
        _PARSERS[f.name] = _parse_bool
        _FORMATTERS[f.name] = lambda v: "true" if v else "false"
    elif f.name == "h_rule":
        _PARSERS[f.name] = _parse_h_rule
        _FORMATTERS[f.name] = str
    elif f.name == "snapshot_times":
        _PARSERS[f.name] = _parse_times
        _FORMATTERS[f.name] = _fmt_times
    elif f.name == "out_dir":
        _PARSERS[f.name] = lambda s: s.strip()
        _FORMATTERS[f.name] = str
    elif f.type == "int":
        _PARSERS[f.name] = _parse_int
        _FORMATTERS[f.name] = str
    else:
        _PARSERS[f.name] = _parse_float
        _FORMATTERS[f.name] = _fmt_float

KEY_ORDER = tuple(f.name for f in fields(SimConfig))


def parse_config(text: str) -> SimConfig:
    """Parse flat `key = value` text into a SimConfig.

    Unknown keys, duplicate keys, and malformed values raise ConfigError
    naming the key and the line.  Empty text yields all defaults.
    """
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}", line=lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _PARSERS:
            raise ConfigError(f"unknown key {key!r} on line {lineno}", key=key, line=lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r} on line {lineno}", key=key, line=lineno)
        try:
            values[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r} on line {lineno}: {exc}",
                              key=key, line=lineno) from None
    return SimConfig(**values)


def echo_config(config: SimConfig) -> str:
    """Canonical text form; parse(echo(parse(t))) == parse(t), byte-stable."""
    lines = ["# effective configuration (canonical echo)"]
    for key in KEY_ORDER:
        lines.append(f"{key} = {_FORMATTERS[key](getattr(config, key))}")
    return "\n".join(lines) + "\n"


def apply_overrides(config: SimConfig, pairs: list[str]) -> SimConfig:
    """Apply `key=value` override strings (CLI --set) onto a config."""
    changes: dict[str, object] = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError(f"override {pair!r} is not of the form key=value")
        if key not in _PARSERS:
            raise ConfigError(f"unknown key {key!r} in override", key=key)
        try:
            changes[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r} in override: {exc}", key=key) from None
    return config.replace(**changes)
