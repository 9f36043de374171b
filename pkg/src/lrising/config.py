"""Flat JSON experiment configs.

Each command owns a key table (name, type, default); parsing rejects unknown
keys, fills defaults, and runs the command's cross-key checks.  Errors always
name the offending key so a config can be repaired without reading source.
Filled configs serialize back to flat JSON and round-trip through parse.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable


class ConfigError(ValueError):
    """Invalid configuration; maps to exit code 2."""


_REQUIRED = object()


@dataclass(frozen=True)
class _Key:
    kind: str
    default: Any = _REQUIRED
    check: Callable[[Any], str | None] | None = None


def _is_int(v: Any) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _is_float(v: Any) -> bool:
    return _is_int(v) or (isinstance(v, float))


def _coerce(name: str, key: _Key, value: Any) -> Any:
    kind = key.kind
    if value is None:
        if kind.endswith("?"):
            return None
        raise ConfigError(f"key '{name}' must not be null")
    base = kind.rstrip("?")
    if base == "float":
        if not _is_float(value):
            raise ConfigError(f"key '{name}' must be a number, got {value!r}")
        return float(value)
    if base == "int":
        if not _is_int(value):
            raise ConfigError(f"key '{name}' must be an integer, got {value!r}")
        return int(value)
    if base == "u64":
        if not _is_int(value) or not 0 <= value < 2**64:
            raise ConfigError(
                f"key '{name}' must be an unsigned 64-bit integer, got {value!r}"
            )
        return int(value)
    if base == "bool":
        if not isinstance(value, bool):
            raise ConfigError(f"key '{name}' must be true or false, got {value!r}")
        return value
    if base == "str":
        if not isinstance(value, str):
            raise ConfigError(f"key '{name}' must be a string, got {value!r}")
        return value
    if base == "int_list":
        if (
            not isinstance(value, list)
            or not value
            or not all(_is_int(v) for v in value)
        ):
            raise ConfigError(
                f"key '{name}' must be a nonempty list of integers, got {value!r}"
            )
        return [int(v) for v in value]
    if base == "float_list":
        if (
            not isinstance(value, list)
            or not value
            or not all(_is_float(v) for v in value)
        ):
            raise ConfigError(
                f"key '{name}' must be a nonempty list of numbers, got {value!r}"
            )
        return [float(v) for v in value]
    raise AssertionError(f"unknown kind {kind}")


def _positive(name: str):
    def check(v):
        return None if v > 0 else f"key '{name}' must be positive, got {v}"

    return check


def _increasing_positive(name: str):
    def check(v):
        if any(x < 1 for x in v) or sorted(set(v)) != list(v):
            return f"key '{name}' must be strictly increasing positives, got {v}"
        return None

    return check


def _alpha_range(name: str):
    def check(v):
        vals = v if isinstance(v, list) else [v]
        for a in vals:
            if not 0.0 <= a < 1.0:
                return f"key '{name}' must lie in [0, 1), got {a}"
        return None

    return check


_COMMON = {
    "seed": _Key("u64", 0),
    "output_dir": _Key("str", "."),
}

_SCHEMAS: dict[str, dict[str, _Key]] = {
    "toy-scan": {
        **_COMMON,
        "alpha": _Key("float", check=_alpha_range("alpha")),
        "N_grid": _Key("int_list", check=_increasing_positive("N_grid")),
        "samples": _Key("int", check=_positive("samples")),
        "K": _Key("float", 1.0, check=_positive("K")),
        "beta": _Key("float", 1.0, check=_positive("beta")),
        "J": _Key("float", 1.0),
        "Y": _Key("int?", None),
        "slope_tol": _Key("float", 0.05, check=_positive("slope_tol")),
    },
    "wllt-check": {
        **_COMMON,
        "alpha_grid": _Key("float_list", [0.6, 0.75, 0.9]),
        "N_grid": _Key(
            "int_list", [16, 64, 256], check=_increasing_positive("N_grid")
        ),
        "slack": _Key("float", 1.05, check=_positive("slack")),
        "tol": _Key("float", 1e-8, check=_positive("tol")),
        "J": _Key("float", 1.0),
    },
    "contours-verify": {
        **_COMMON,
        "N_max": _Key("int", 5),
    },
    "peierls": {
        **_COMMON,
        "alpha_grid": _Key("float_list", [0.1, 0.3]),
        "M_max": _Key("int", 8, check=_positive("M_max")),
        "N": _Key("int", 12, check=_positive("N")),
        "c": _Key("float?", None),
        "stability_tol": _Key("float", 0.05, check=_positive("stability_tol")),
        "J": _Key("float", 1.0),
    },
    "rho-scan": {
        **_COMMON,
        "alpha": _Key("float", 0.75, check=_alpha_range("alpha")),
        "epsilon": _Key("float", 0.1, check=_positive("epsilon")),
        "a": _Key("float", 0.5, check=_positive("a")),
        "beta_grid": _Key("float_list", [2.0, 4.0, 8.0, 16.0]),
        "N": _Key("int", 4096, check=_positive("N")),
        "n": _Key("int", 2, check=_positive("n")),
        "M_max": _Key("int", 6, check=_positive("M_max")),
        "variant": _Key("str", "printed"),
        "final_max": _Key("float", 1e-6, check=_positive("final_max")),
        "J": _Key("float", 1.0),
    },
    "gibbs-exact": {
        **_COMMON,
        "alpha": _Key("float", check=_alpha_range("alpha")),
        "N": _Key("int", 5, check=_positive("N")),
        "beta": _Key("float", 1.0, check=_positive("beta")),
        "samples": _Key("int", 20, check=_positive("samples")),
        "window": _Key("int_list", [0]),
        "beta_high": _Key("float", 50.0, check=_positive("beta_high")),
        "decompo_tol": _Key("float", 1e-10, check=_positive("decompo_tol")),
        "highbeta_tol": _Key("float", 1e-3, check=_positive("highbeta_tol")),
        "J": _Key("float", 1.0),
    },
    "gibbs-mc": {
        **_COMMON,
        "alpha": _Key("float", check=_alpha_range("alpha")),
        "N": _Key("int", 4, check=_positive("N")),
        "beta": _Key("float", 1.0, check=_positive("beta")),
        "sweeps": _Key("int", check=_positive("sweeps")),
        "burn_in": _Key("int"),
        "cases": _Key("int", 20, check=_positive("cases")),
        "window": _Key("int_list", [0]),
        "z_tol": _Key("float", 3.0, check=_positive("z_tol")),
        "J": _Key("float", 1.0),
    },
    "metastate": {
        **_COMMON,
        "alpha": _Key("float", check=_alpha_range("alpha")),
        "beta": _Key("float", check=_positive("beta")),
        "mode": _Key("str", "toy"),
        "tau": _Key("float", 0.2),
        "volumes": _Key("int_list?", None),
        "epsilon": _Key("float?", None),
        "a": _Key("float?", None),
        "k_max": _Key("int?", None),
        "eta_samples": _Key("int", check=_positive("eta_samples")),
        "window": _Key("int_list", [0]),
        "pure_mass_min": _Key("float?", None),
        "pure_freq_min": _Key("float?", None),
        "mean_lambda_tol": _Key("float?", None),
        "interior_bins_positive": _Key("bool", False),
        "J": _Key("float", 1.0),
    },
    "null-recurrence": {
        **_COMMON,
        "alpha": _Key("float", check=_alpha_range("alpha")),
        "beta": _Key("float", check=_positive("beta")),
        "N_max": _Key("int", check=_positive("N_max")),
        "tau": _Key("float", 0.2),
        "window": _Key("int_list", [0]),
        "mixed_max": _Key("float?", None),
        "pure_band": _Key("float_list?", None),
        "figures": _Key("bool", True),
        "J": _Key("float", 1.0),
    },
    "dichotomy": {
        **_COMMON,
        "alpha_grid": _Key("float_list", check=_alpha_range("alpha_grid")),
        "beta": _Key("float", check=_positive("beta")),
        "N": _Key("int", 4096, check=_positive("N")),
        "eta_samples": _Key("int", 10_000, check=_positive("eta_samples")),
        "tau": _Key("float", 0.2),
        "var_grid": _Key(
            "int_list",
            [2**13, 2**14, 2**15, 2**16],
            check=_increasing_positive("var_grid"),
        ),
        "var_tol": _Key("float", 0.05, check=_positive("var_tol")),
        "mean_lambda_tol": _Key("float", 3.0, check=_positive("mean_lambda_tol")),
        "figures": _Key("bool", True),
        "J": _Key("float", 1.0),
    },
}

COMMANDS = tuple(sorted(_SCHEMAS))


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    params: dict[str, Any]

    def hash(self) -> str:
        body = {k: v for k, v in self.params.items() if k != "output_dir"}
        payload = json.dumps(
            {"command": self.command, "params": body}, sort_keys=True
        )
        return hashlib.sha256(payload.encode()).hexdigest()


def _cross_checks(command: str, p: dict[str, Any]) -> None:
    if command == "toy-scan":
        if p["samples"] < 10**4:
            raise ConfigError(
                f"key 'samples' must be at least 1e4 for stable estimates, "
                f"got {p['samples']}"
            )
        if p["Y"] is None:
            p["Y"] = 16 * max(p["N_grid"])
        elif p["Y"] <= max(p["N_grid"]):
            raise ConfigError("key 'Y' must exceed every N in N_grid")
    elif command == "wllt-check":
        for a in p["alpha_grid"]:
            if not 0.5 < a < 1.0:
                raise ConfigError(
                    f"key 'alpha_grid' needs 1/2 < alpha < 1, got {a}"
                )
    elif command == "contours-verify":
        if not 1 <= p["N_max"] <= 8:
            raise ConfigError(
                f"key 'N_max' must lie in [1, 8] (exhaustive sweep), "
                f"got {p['N_max']}"
            )
    elif command == "rho-scan":
        if sorted(p["beta_grid"]) != p["beta_grid"]:
            raise ConfigError("key 'beta_grid' must be increasing")
    elif command == "gibbs-exact":
        if p["N"] > 11:
            raise ConfigError(f"key 'N' exceeds the exact-engine cap 11: {p['N']}")
        if p["beta_high"] <= 20.0:
            raise ConfigError(
                f"key 'beta_high' must exceed the ladder rung 20: {p['beta_high']}"
            )
    elif command == "gibbs-mc":
        if p["burn_in"] < 0:
            raise ConfigError(f"key 'burn_in' must be >= 0, got {p['burn_in']}")
        if p["sweeps"] <= p["burn_in"]:
            raise ConfigError(
                f"key 'sweeps' ({p['sweeps']}) must exceed key 'burn_in' "
                f"({p['burn_in']})"
            )
    elif command == "metastate":
        if p["mode"] not in ("toy", "exact"):
            raise ConfigError(f"key 'mode' must be 'toy' or 'exact', got {p['mode']!r}")
        if not 0.0 < p["tau"] < 1.0:
            raise ConfigError(f"key 'tau' must lie in (0, 1), got {p['tau']}")
        sched_keys = [k for k in ("epsilon", "a", "k_max") if p[k] is not None]
        if p["volumes"] is not None:
            if sched_keys:
                raise ConfigError(
                    "key 'volumes' excludes the schedule keys "
                    "'epsilon', 'a', 'k_max'"
                )
        elif len(sched_keys) != 3:
            raise ConfigError(
                "pass either key 'volumes' or all of 'epsilon', 'a', 'k_max'"
            )
    elif command == "null-recurrence":
        if not 0.0 < p["tau"] < 1.0:
            raise ConfigError(f"key 'tau' must lie in (0, 1), got {p['tau']}")
        band = p["pure_band"]
        if band is not None and (len(band) != 2 or not band[0] < band[1]):
            raise ConfigError(
                f"key 'pure_band' must be [lo, hi] with lo < hi, got {band}"
            )
    elif command == "dichotomy":
        for a in p["alpha_grid"]:
            if 0.45 <= a <= 0.55:
                raise ConfigError(
                    f"key 'alpha_grid' contains alpha={a} inside the excluded "
                    f"threshold band [0.45, 0.55]"
                )
        if not 0.0 < p["tau"] < 1.0:
            raise ConfigError(f"key 'tau' must lie in (0, 1), got {p['tau']}")


def parse_params(command: str, raw: dict[str, Any]) -> ExperimentConfig:
    """Validate a flat key-value map against the command's schema."""
    if command not in _SCHEMAS:
        raise ConfigError(
            f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}"
        )
    if not isinstance(raw, dict):
        raise ConfigError("config must be a flat JSON object")
    schema = _SCHEMAS[command]
    for name in raw:
        if name not in schema:
            raise ConfigError(f"unknown key '{name}' for command {command!r}")
    params: dict[str, Any] = {}
    for name, key in schema.items():
        if name in raw:
            value = _coerce(name, key, raw[name])
        elif key.default is _REQUIRED:
            raise ConfigError(f"missing required key '{name}' for {command!r}")
        else:
            value = key.default if not isinstance(key.default, list) else list(key.default)
        if value is not None and key.check is not None:
            msg = key.check(value)
            if msg is not None:
                raise ConfigError(msg)
        params[name] = value
    _cross_checks(command, params)
    return ExperimentConfig(command=command, params=params)


def parse_config(
    command: str,
    path: str | Path,
    *,
    seed: int | None = None,
    out: str | None = None,
) -> ExperimentConfig:
    """Load a JSON config file, apply CLI overrides, and validate."""
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    try:
        raw = json.loads(p.read_text())
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file is not valid JSON: {e}") from e
    if not isinstance(raw, dict):
        raise ConfigError("config must be a flat JSON object")
    if seed is not None:
        raw["seed"] = seed
    if out is not None:
        raw["output_dir"] = out
    return parse_params(command, raw)


def serialize_config(cfg: ExperimentConfig) -> str:
    """Flat JSON text of the filled params; parse_params inverts it."""
    return json.dumps(cfg.params, sort_keys=True, indent=2)
