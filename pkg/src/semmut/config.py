"""Flat key/value configuration for the CLI.

The file format is a TOML-like subset: one ``key = value`` pair per line,
``#`` comments, optional double quotes around strings. CLI flags override
file values; the SEMMUT_CC environment variable overrides the compiler
command regardless of either.
"""

from __future__ import annotations

from dataclasses import dataclass, fields


class ConfigError(ValueError):
    pass


@dataclass
class Config:
    max_sites_per_op: int = 4
    compiler_cmd: str = "cc -std=c11 -O0"
    seed: int = 42
    tie_rule: str = "ties0"
    encoding: str = "labels"

    def validate(self) -> "Config":
        if self.max_sites_per_op < 1:
            raise ConfigError("max_sites_per_op must be >= 1")
        if self.tie_rule not in ("ties0", "ties1"):
            raise ConfigError(f"tie_rule {self.tie_rule!r} not in {{ties0, ties1}}")
        if self.encoding not in ("labels", "probability"):
            raise ConfigError(f"encoding {self.encoding!r} not in {{labels, probability}}")
        return self


def _parse_value(raw: str):
    raw = raw.strip()
    if raw.startswith('"') and raw.endswith('"') and len(raw) >= 2:
        return raw[1:-1]
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        pass
    return raw


def load_config(path: str) -> Config:
    known = {f.name: f.type for f in fields(Config)}
    values: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ConfigError(f"{path}:{line_no}: expected key = value")
            key, raw = stripped.split("=", 1)
            key = key.strip()
            if key not in known:
                raise ConfigError(f"{path}:{line_no}: unknown key {key!r}")
            values[key] = _parse_value(raw)
    try:
        return Config(**values).validate()
    except TypeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
