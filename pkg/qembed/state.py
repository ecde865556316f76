"""
qembed.state
AUTHOR: carter-vin

Per-task checkpoints under <out>/state/<run hash>/

Current responsibilities:
- One JSON file per completed (geometry, k-point, seed[, budget]) task
- Commit semantics: a checkpoint is written ONLY after the task succeeded
- A changed run config or solver config changes the hash, so stale results
  are never picked up

Checkpoint file:
- <out>/state/<hash>/<geometry>__<kpoint>__s<seed>[__b<budget>].json
  {
    "key": "...",
    "result": {"energy": ..., "properties": {...}, "details": {...}}
  }
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from qembed.emit import dumps_json, write_json

STATE_DIRNAME = "state"

_UNSAFE = re.compile(r"[^A-Za-z0-9._-]")


@dataclass(frozen=True, order=True)
class TaskKey:
    geometry: str
    kpoint: str
    seed: int
    budget: int | None = None

    @property
    def name(self) -> str:
        parts = [self.geometry, _UNSAFE.sub("_", self.kpoint), f"s{self.seed}"]
        if self.budget is not None:
            parts.append(f"b{self.budget}")
        return "__".join(parts)

    def to_dict(self) -> dict[str, Any]:
        return {
            "budget": self.budget,
            "geometry": self.geometry,
            "kpoint": self.kpoint,
            "seed": self.seed,
        }


def run_hash(run: dict[str, Any], config: dict[str, Any], inputs: list[str | Path]) -> str:
    """
    16-hex-char SHA-256 prefix over the run description, the normalized solver
    config and the bytes of every input file (missing files hash as "missing").
    """
    digests = {}
    for path in sorted(str(p) for p in inputs):
        try:
            digests[path] = hashlib.sha256(Path(path).read_bytes()).hexdigest()
        except OSError:
            digests[path] = "missing"
    payload = dumps_json({"run": run, "config": config, "inputs": digests})
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def checkpoint_dir(out_dir: Path, hash_: str) -> Path:
    return Path(out_dir) / STATE_DIRNAME / hash_


def _checkpoint_path(state_dir: Path, key: TaskKey) -> Path:
    return state_dir / f"{key.name}.json"


def load_checkpoint(key: TaskKey, *, state_dir: Path) -> dict[str, Any] | None:
    """
    Load a task result from disk

    Returns:
    - the stored result dict if the file exists, parses and belongs to key
    - None if missing or unreadable
    """
    path = _checkpoint_path(state_dir, key)
    try:
        if not path.exists():
            return None
        payload = json.loads(path.read_text(encoding="utf-8"))
        if not isinstance(payload, dict) or payload.get("key") != key.to_dict():
            return None
        result = payload.get("result")
        if not isinstance(result, dict) or "energy" not in result:
            return None
        return result
    except Exception:
        # a corrupt checkpoint means "solve again"
        return None


def save_checkpoint(key: TaskKey, result: dict[str, Any], *, state_dir: Path) -> None:
    """
    Persist a task result

    Failure semantics:
    - Raises on IO errors (caller decides whether to downgrade)
    """
    write_json(_checkpoint_path(state_dir, key), {"key": key.to_dict(), "result": result})
