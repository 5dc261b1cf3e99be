"""Run configuration: resource caps and numeric tolerance.

Settings resolve in three layers: built-in defaults, then the key=value
file named by the RELP_CONFIG environment variable, then explicit
overrides (CLI flags).  The file format is one ``key = value`` per line,
with ``#`` comments.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace


class ResourceCapError(RuntimeError):
    """An enumeration or solve exceeded a configured cap (CLI exit code 2)."""


@dataclass(frozen=True)
class RunConfig:
    closure_max_members: int = 100_000
    factor_pool_cap: int = 20
    oracle_max_strings: int = 8
    oracle_max_len: int = 8
    solver_max_pivots: int = 1_000_000
    # pivots without objective progress before Dantzig pricing hands over
    # to Bland's rule (pivot_rule="auto")
    stall_threshold: int = 200
    pivot_rule: str = "auto"  # auto | bland | dantzig
    tolerance: float = 1e-9


DEFAULT_CONFIG = RunConfig()

ENV_VAR = "RELP_CONFIG"


def _coerce(name: str, kind: type, raw: str):
    try:
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
        return raw
    except ValueError as exc:
        raise ValueError(f"bad value for config key {name}: {raw!r}") from exc


def parse_config_text(text: str, base: RunConfig = DEFAULT_CONFIG) -> RunConfig:
    known = {f.name: f.type for f in fields(RunConfig)}
    types = {"int": int, "float": float, "str": str}
    updates = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key = value, got {line!r}")
        key, _, raw = line.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in known:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        updates[key] = _coerce(key, types.get(known[key], str), raw)
    return replace(base, **updates)


def load_config(path: str | None = None, **overrides) -> RunConfig:
    """Defaults, then the RELP_CONFIG file (or explicit path), then overrides."""
    cfg = DEFAULT_CONFIG
    path = path if path is not None else os.environ.get(ENV_VAR)
    if path:
        with open(path, encoding="utf-8") as fh:
            cfg = parse_config_text(fh.read(), cfg)
    clean = {k: v for k, v in overrides.items() if v is not None}
    if clean:
        cfg = replace(cfg, **clean)
    return cfg
