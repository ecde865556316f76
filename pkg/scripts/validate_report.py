#!/usr/bin/env python3
"""
scripts/validate_report.py

Minimal reaction-report validator: stdlib only, no external dependencies.

Validates one or more report JSON files against the v1 report contract:
- Required top-level keys present: delta_e, energies, failures, meta, partial, properties
- meta.schema_version == "1"
- energies has exactly reactant and product, each with a per_k map of numbers
- twist_average equals the mean of per_k (1e-12 relative) or is null when per_k is empty
- delta_e equals product - reactant (and ev = hartree * meta.hartree_to_ev)
- partial is true exactly when failures is non-empty

Usage:
    python scripts/validate_report.py out/report.json [more.json ...]
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import NamedTuple

REQUIRED_KEYS = frozenset({"delta_e", "energies", "failures", "meta", "partial", "properties"})
REQUIRED_SCHEMA_VERSION = "1"
GEOMETRIES = ("product", "reactant")
REL_TOL = 1e-12


class ValidationError(NamedTuple):
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


def _close(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=REL_TOL, abs_tol=REL_TOL)


def validate_report(report: dict, path: str) -> list[ValidationError]:
    """
    Validate a single parsed report dict against the v1 contract.

    Returns a list of ValidationError (empty means valid).
    """
    errors: list[ValidationError] = []

    missing = REQUIRED_KEYS - set(report.keys())
    if missing:
        errors.append(ValidationError(path, f"missing required keys: {sorted(missing)}"))
        return errors  # nested checks unsafe without the keys

    meta = report.get("meta") or {}
    if meta.get("schema_version") != REQUIRED_SCHEMA_VERSION:
        errors.append(ValidationError(
            path,
            f"meta.schema_version must be {REQUIRED_SCHEMA_VERSION!r}, "
            f"got {meta.get('schema_version')!r}",
        ))
    if not isinstance(meta.get("toolkit_version"), str) or not meta.get("toolkit_version"):
        errors.append(ValidationError(path, "meta.toolkit_version must be a non-empty string"))
    to_ev = meta.get("hartree_to_ev")
    if not isinstance(to_ev, (int, float)) or to_ev <= 0:
        errors.append(ValidationError(path, "meta.hartree_to_ev must be a positive number"))
        to_ev = None

    energies = report.get("energies")
    averages: dict[str, float | None] = {}
    if not isinstance(energies, dict) or sorted(energies) != list(GEOMETRIES):
        errors.append(ValidationError(path, "energies must hold exactly reactant and product"))
    else:
        for geometry in GEOMETRIES:
            block = energies[geometry]
            per_k = block.get("per_k") if isinstance(block, dict) else None
            if not isinstance(per_k, dict) or not all(
                isinstance(v, (int, float)) for v in per_k.values()
            ):
                errors.append(
                    ValidationError(path, f"energies.{geometry}.per_k must map to numbers")
                )
                continue
            avg = block.get("twist_average")
            if per_k:
                expected = math.fsum(per_k.values()) / len(per_k)
                if not isinstance(avg, (int, float)) or not _close(avg, expected):
                    errors.append(ValidationError(
                        path, f"energies.{geometry}.twist_average is not the mean of per_k"
                    ))
            elif avg is not None:
                errors.append(ValidationError(
                    path, f"energies.{geometry}.twist_average must be null without energies"
                ))
            averages[geometry] = avg if isinstance(avg, (int, float)) else None

    de = report.get("delta_e")
    reactant, product = averages.get("reactant"), averages.get("product")
    if reactant is not None and product is not None:
        if not isinstance(de, dict):
            errors.append(ValidationError(path, "delta_e is missing"))
        else:
            if not _close(de.get("hartree", math.nan), product - reactant):
                errors.append(ValidationError(path, "delta_e.hartree != product - reactant"))
            ev_expected = de.get("hartree", 0) * to_ev if to_ev is not None else None
            if ev_expected is not None and not _close(de.get("ev", math.nan), ev_expected):
                errors.append(ValidationError(path, "delta_e.ev != hartree * hartree_to_ev"))
    elif de is not None:
        errors.append(ValidationError(path, "delta_e must be null when a geometry has no energies"))

    failures = report.get("failures")
    if not isinstance(failures, list):
        errors.append(ValidationError(path, "failures must be an array"))
    elif report.get("partial") is not bool(failures):
        errors.append(ValidationError(path, "partial must be true exactly when failures exist"))

    return errors


def validate_files(paths: list[str]) -> tuple[int, int, list[ValidationError]]:
    """
    Returns (valid_count, invalid_count, all_errors).
    Raises FileNotFoundError when a file is missing.
    """
    all_errors: list[ValidationError] = []
    valid_count = 0
    invalid_count = 0
    for name in paths:
        path = Path(name)
        if not path.exists():
            raise FileNotFoundError(f"report not found: {name}")
        try:
            report = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError:
            all_errors.append(ValidationError(name, "invalid JSON"))
            invalid_count += 1
            continue
        if not isinstance(report, dict):
            all_errors.append(ValidationError(name, "expected JSON object"))
            invalid_count += 1
            continue
        errors = validate_report(report, name)
        if errors:
            all_errors.extend(errors)
            invalid_count += 1
        else:
            valid_count += 1
    return valid_count, invalid_count, all_errors


def main() -> int:
    parser = argparse.ArgumentParser(description="Validate qembed reaction report files.")
    parser.add_argument("reports", nargs="+", help="Report JSON files")
    args = parser.parse_args()

    try:
        valid_count, invalid_count, errors = validate_files(args.reports)
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1

    if errors:
        for err in errors:
            print(str(err), file=sys.stderr)
        print(
            f"\nvalidation failed: {invalid_count} invalid, {valid_count} valid",
            file=sys.stderr,
        )
        return 1

    print(f"ok: {valid_count} reports valid")
    return 0


if __name__ == "__main__":
    sys.exit(main())
