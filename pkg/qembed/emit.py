"""
qembed.emit

AUTHOR: carter-vin

OUTPUT:
- report / selection JSON files
- CSV tables for plotting
- JSON Lines traces (append-only)

Design goals:
- Create parent directories if missing
- JSON and CSV land atomically (temp file + rename)
- JSONL appends flush per line
- Raise on IO errors; the caller decides what to do
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, Sequence


def dumps_json(payload: Any) -> str:
    """Deterministic compact JSON."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def write_json(path: str | Path, payload: Any) -> None:
    """Write one JSON document (payload dict or a pre-serialized string) plus a newline."""
    text = payload if isinstance(payload, str) else dumps_json(payload)
    _atomic_write_text(Path(path), text + "\n")


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(header))
    for row in rows:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    _atomic_write_text(Path(path), buf.getvalue())


def append_jsonl(path: str | Path, payload: Any) -> None:
    """
    Append a single JSON object as one line.

    Contract:
    - payload dicts are serialized deterministically
    - exactly one trailing newline per call
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    line = payload if isinstance(payload, str) else dumps_json(payload)
    with path.open(mode="a", encoding="utf-8", newline="\n") as f:
        f.write(line)
        f.write("\n")
        f.flush()
