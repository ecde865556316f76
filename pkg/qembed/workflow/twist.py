"""
qembed.workflow.twist
AUTHOR: carter-vin

Twist averaging and reaction energies.

Uniform k-weights: <E> = (1/N_k) Σ_k E(k).
"""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Iterable

from qembed.config import _DEFAULTS

HARTREE_TO_EV: float = _DEFAULTS["workflow"]["hartree_to_ev"]


def twist_average(values: Iterable[float]) -> float:
    """Arithmetic mean of per-k values; raises ValueError on an empty or non-finite input."""
    vals = [float(v) for v in values]
    if not vals:
        raise ValueError("twist_average needs at least one k-point value")
    if not all(math.isfinite(v) for v in vals):
        raise ValueError("twist_average inputs must be finite")
    return math.fsum(vals) / len(vals)


def delta_e(
    e_product: float, e_reactant: float, *, hartree_to_ev: float = HARTREE_TO_EV
) -> tuple[float, float]:
    """(E_product - E_reactant) in Hartree and eV."""
    if not (math.isfinite(e_product) and math.isfinite(e_reactant)):
        raise ValueError("delta_e inputs must be finite")
    ha = float(e_product) - float(e_reactant)
    return ha, ha * hartree_to_ev


def read_energy_table(path: str | Path) -> dict[str, float]:
    """
    Read a `kpoint,energy` CSV (header required) into an ordered {label: energy} map.

    Duplicate labels and unparsable energies raise ValueError with the row number.
    """
    path = Path(path)
    out: dict[str, float] = {}
    with path.open("r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or not {"kpoint", "energy"} <= set(reader.fieldnames):
            raise ValueError(f"{path}: expected a `kpoint,energy` header")
        for row_no, row in enumerate(reader, start=2):
            label = (row.get("kpoint") or "").strip()
            if not label:
                raise ValueError(f"{path}: row {row_no}: empty kpoint label")
            if label in out:
                raise ValueError(f"{path}: row {row_no}: duplicate kpoint {label!r}")
            try:
                out[label] = float(row["energy"])
            except (TypeError, ValueError):
                raise ValueError(
                    f"{path}: row {row_no}: invalid energy {row.get('energy')!r}"
                ) from None
    if not out:
        raise ValueError(f"{path}: no energies found")
    return out
