"""Default parameter set and trial-configuration file loading.

All calibration defaults (thermal coefficients, fatigue law, noise levels,
controller settings, sweep grids) live in the packaged ``defaults.toml``.
A user config file overrides any subset of keys; nesting follows the same
table layout.
"""

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from importlib import resources


class ConfigError(ValueError):
    """Malformed or inconsistent configuration input."""


def load_defaults() -> dict:
    data = resources.files("smaforce").joinpath("defaults.toml").read_bytes()
    return tomllib.loads(data.decode())


def _deep_merge(base: dict, override: dict) -> dict:
    out = dict(base)
    for key, val in override.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _deep_merge(out[key], val)
        else:
            out[key] = val
    return out


def load_config(path: str | None = None) -> dict:
    """Packaged defaults, with an optional user TOML file merged on top."""
    cfg = load_defaults()
    if path is not None:
        try:
            with open(path, "rb") as fh:
                user = tomllib.load(fh)
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {path}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"invalid config file {path}: {exc}") from exc
        cfg = _deep_merge(cfg, user)
    return cfg
