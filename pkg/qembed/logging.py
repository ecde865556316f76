"""
qembed.logging
AUTHOR: carter-vin

Structured JSON event logging for run tracing

Contract:
- One JSON object per line to stdout
- Event names come from EVENT_TYPES; anything else is a bug
- numpy scalars/arrays and complex numbers are converted before dumping
- UTC timestamps only
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

import numpy as np

from qembed import __version__

MESSAGE_LIMIT = 200

EVENT_TYPES = frozenset(
    {
        # run lifecycle
        "run_start",
        "run_shutdown",
        "report_emitted",
        "curve_point",
        "selection_emitted",
        # per task
        "task_solved",
        "task_failed",
        "task_restored",
        "optimizer_finished",
        # numerical warnings
        "occupation_ambiguous",
        "property_deviation",
        "density_integral_mismatch",
        "hermiticity_residual",
        "schmidt_phase_complex",
    }
)


def _clip(message: str) -> str:
    extra = len(message) - MESSAGE_LIMIT
    if extra <= 0:
        return message
    return f"{message[:MESSAGE_LIMIT]}...[truncated {extra} chars]"


def _jsonable(value: Any) -> Any:
    # complex -> [re, im]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, Path):
        return str(value)
    return value


def utc_now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


def emit_event(event_type: str, *, toolkit_version: str = __version__, **fields: Any) -> None:
    """
    Print one event line.

    event_type, utc_now and toolkit_version are always present; keys are
    sorted and separators compact. A string `message` is clipped.
    """
    if event_type not in EVENT_TYPES:
        raise ValueError(f"invalid event_type: {event_type}")

    record = {k: _jsonable(v) for k, v in fields.items()}
    if isinstance(record.get("message"), str):
        record["message"] = _clip(record["message"])
    record.update(event_type=event_type, utc_now=utc_now_iso(), toolkit_version=toolkit_version)

    print(json.dumps(record, sort_keys=True, separators=(",", ":"), ensure_ascii=False))
