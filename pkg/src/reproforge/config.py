"""Run configuration: built-in defaults, then a config file, then command-line flags."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .app_model import load_yaml
from .errors import ConfigError
from .matcher import Hyperparams

ENV_VAR = "REPROFORGE_CONFIG"
CONFIG_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class RunConfig:
    mode: str = "extract"
    report_path: Path | None = None
    app_model_path: Path | None = None
    embeddings_path: Path | None = None
    connectives_path: Path | None = None
    actions_path: Path | None = None
    specials_path: Path | None = None
    crash_message: str | None = None
    output_path: Path | None = None
    input_mode: str = "text"
    policy: str = "rl"
    trace_path: Path | None = None
    corpus_dir: Path | None = None
    seeds: tuple = (0, 1, 2)
    hyper: Hyperparams = field(default_factory=Hyperparams)

    REQUIRED = {
        "extract": ("report_path",),
        "reproduce": ("report_path", "app_model_path"),
        "replay": ("trace_path", "app_model_path"),
        "bench": (),
    }

    def validate(self) -> "RunConfig":
        if self.mode not in self.REQUIRED:
            raise ConfigError(f"unknown mode {self.mode!r}")
        for name in self.REQUIRED[self.mode]:
            if getattr(self, name) is None:
                raise ConfigError(f"{self.mode} needs --{name.replace('_path', '').replace('_', '-')}")
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name.endswith(("_path", "_dir")) and f.name != "output_path" and value is not None:
                if not Path(value).exists():
                    raise ConfigError(f"{f.name.replace('_', ' ')} {str(value)!r} does not exist")
        if self.input_mode not in ("text", "trees"):
            raise ConfigError("input mode must be 'text' or 'trees'")
        if self.policy not in ("rl", "greedy"):
            raise ConfigError("policy must be 'rl' or 'greedy'")
        return self


_PATH_KEYS = {
    "report": "report_path", "app_model": "app_model_path", "embeddings": "embeddings_path",
    "connectives": "connectives_path", "actions": "actions_path", "specials": "specials_path",
    "out": "output_path", "corpus": "corpus_dir",
}
_PLAIN_KEYS = {"crash_message", "input_mode", "policy", "seeds"}


def read_config_file(path) -> dict:
    """Flatten a config document into RunConfig field overrides plus a 'hyper' dict."""
    path = Path(path)
    try:
        doc = load_yaml(path.read_text(encoding="utf-8")) or {}
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: config must be a mapping")
    if doc.get("schema_version") != CONFIG_SCHEMA_VERSION:
        raise ConfigError(f"{path}: schema_version must be {CONFIG_SCHEMA_VERSION}")
    out = {"hyper": dict(doc.get("hyperparams") or {})}
    for key, value in doc.items():
        if key in ("schema_version", "hyperparams"):
            continue
        if key in _PATH_KEYS:
            # relative paths in a config file are relative to the file
            out[_PATH_KEYS[key]] = (path.parent / value).resolve() if value is not None else None
        elif key in _PLAIN_KEYS:
            out[key] = tuple(value) if key == "seeds" else value
        else:
            raise ConfigError(f"{path}: unknown config key {key!r}")
    return out


def build_config(mode: str, flags: dict, config_path=None) -> RunConfig:
    """Merge defaults < config file (explicit or $REPROFORGE_CONFIG) < non-None flags."""
    config_path = config_path or os.environ.get(ENV_VAR) or None
    layered = read_config_file(config_path) if config_path else {"hyper": {}}
    flag_hyper = {k: v for k, v in (flags.pop("hyper", None) or {}).items() if v is not None}
    hyper = {**layered.pop("hyper"), **flag_hyper}
    merged = {**layered, **{k: v for k, v in flags.items() if v is not None}}
    try:
        hp = Hyperparams.from_dict(hyper)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    cfg = replace(RunConfig(mode=mode), hyper=hp, **{
        k: (Path(v) if k.endswith(("_path", "_dir")) and v is not None else v) for k, v in merged.items()
    })
    return cfg.validate()
