"""
qembed.config
AUTHOR: carter-vin

Config layer for solver tolerances, limits and optimizer settings.

Precedence: defaults → JSON file → env vars
"""

from __future__ import annotations

import copy
import hashlib
import json
import os
from pathlib import Path
from typing import Any


_DEFAULTS: dict[str, Any] = {
    "operators": {
        "drop_tol": 1e-12,
    },
    "casci": {
        "max_determinants": 4_000_000,
        "dense_limit": 400,
        "occupation_band_low": 0.8,
        "occupation_band_high": 1.2,
    },
    "statevector": {
        "max_qubits": 24,
    },
    "vqe": {
        "optimizer": "quasi_newton",
        "tol": 1e-8,
        "max_iter": 500,
        "seed": 7,
        "trotter_steps": 1,
        "shots": 0,
    },
    "spsa": {
        "a": 0.5,
        "c": 0.01,
        "A": 10.0,
        "alpha": 0.602,
        "gamma": 0.101,
        "max_iter": 500,
    },
    "forging": {
        "n_bitstrings": 4,
    },
    "properties": {
        "warn_deviation": 1e-3,
        "gate_deviation": 1e-2,
    },
    "selection": {
        "eta": 1e-3,
        "n_occ_select": 5,
        "top_m": 5,
    },
    "workflow": {
        "threads": 1,
        "hartree_to_ev": 27.211386245988,
        "profile_name": "default",
    },
}

# env var → (section, key, cast)
_ENV_OVERRIDES: dict[str, tuple[str, str, type]] = {
    "QEMBED_THREADS": ("workflow", "threads", int),
    "QEMBED_PROFILE": ("workflow", "profile_name", str),
    "QEMBED_MAX_QUBITS": ("statevector", "max_qubits", int),
    "QEMBED_DROP_TOL": ("operators", "drop_tol", float),
    "QEMBED_VQE_OPTIMIZER": ("vqe", "optimizer", str),
    "QEMBED_VQE_MAX_ITER": ("vqe", "max_iter", int),
    "QEMBED_SEED": ("vqe", "seed", int),
    "QEMBED_SPSA_MAX_ITER": ("spsa", "max_iter", int),
    "QEMBED_ETA": ("selection", "eta", float),
}


def default_config() -> dict[str, Any]:
    """Fresh deep copy of the built-in defaults."""
    return copy.deepcopy(_DEFAULTS)


def normalize_config(cfg: dict[str, Any]) -> dict[str, Any]:
    """
    Return a canonical config dict with all required keys populated.

    Merges cfg over defaults; unknown sections and keys in cfg are ignored.
    """
    result = default_config()
    for section, defaults in result.items():
        override = cfg.get(section)
        if not isinstance(override, dict):
            continue
        for key, value in override.items():
            if key in defaults:
                defaults[key] = value
    return result


def compute_config_hash(cfg: dict[str, Any]) -> str:
    """
    Compute a stable 16-hex-char SHA-256 prefix of the normalized config.

    Stable across key orderings.
    """
    normalized = normalize_config(cfg)
    serialized = json.dumps(normalized, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(serialized.encode()).hexdigest()[:16]


def load_config(config_path: str | None = None) -> dict[str, Any]:
    """
    Load config with precedence: defaults → JSON file → env vars.

    Invalid or missing file → silently falls back to defaults.
    Invalid env var values → silently ignored.
    """
    cfg: dict[str, Any] = {}

    if config_path:
        try:
            payload = json.loads(Path(config_path).read_text(encoding="utf-8"))
            if isinstance(payload, dict):
                cfg = payload
        except Exception:
            pass  # fall back to defaults

    normalized = normalize_config(cfg)

    for env_var, (section, key, cast) in _ENV_OVERRIDES.items():
        value = os.getenv(env_var)
        if value is not None:
            try:
                normalized[section][key] = cast(value)
            except (ValueError, TypeError):
                pass

    return normalized


def config_sources(config_path: str | None = None) -> dict[str, dict[str, str]]:
    """
    Report where each resolved value came from: "default", "file" or "env".
    """
    file_cfg: dict[str, Any] = {}
    if config_path:
        try:
            payload = json.loads(Path(config_path).read_text(encoding="utf-8"))
            if isinstance(payload, dict):
                file_cfg = payload
        except Exception:
            pass

    sources: dict[str, dict[str, str]] = {}
    for section, defaults in _DEFAULTS.items():
        sources[section] = {}
        file_section = file_cfg.get(section) if isinstance(file_cfg.get(section), dict) else {}
        for key in defaults:
            sources[section][key] = "file" if key in file_section else "default"

    for env_var, (section, key, cast) in _ENV_OVERRIDES.items():
        value = os.getenv(env_var)
        if value is None:
            continue
        try:
            cast(value)
        except (ValueError, TypeError):
            continue
        sources[section][key] = "env"
    return sources
