"""
qembed.model
AUTHOR: carter-vin

Reaction report schema + deterministic serialization.

Design goals:
- Versioned, stable report envelope ("schema_version" = "1")
- Explicit structure (no accidental serialization via __dict__)
- No timestamps in the report: identical config and seeds give identical bytes
- Stored aggregates are recomputable from the stored per-k energies
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

from qembed.workflow.twist import delta_e as _delta_e
from qembed.workflow.twist import twist_average

SCHEMA_VERSION = "1"
GEOMETRIES = ("reactant", "product")


@dataclass(frozen=True)
class Meta:
    """
    Metadata for versioning & traceability
    - method / mapping: solver that produced the energies
    - hartree_to_ev: conversion used for delta_e.ev
    - config_profile / config_hash: normalized solver config identity
    """

    schema_version: str
    toolkit_version: str
    method: str
    mapping: str
    hartree_to_ev: float
    config_profile: str = "default"
    config_hash: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "config_hash": self.config_hash,
            "config_profile": self.config_profile,
            "hartree_to_ev": self.hartree_to_ev,
            "mapping": self.mapping,
            "method": self.method,
            "schema_version": self.schema_version,
            "toolkit_version": self.toolkit_version,
        }


@dataclass(frozen=True)
class GeometryEnergies:
    """
    Per-k energies (Hartree) of one geometry; twist_average is None when every k failed.
    """

    label: str
    per_k: dict[str, float]
    twist_average: float | None

    def to_dict(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "per_k": dict(self.per_k),
            "twist_average": self.twist_average,
        }


@dataclass(frozen=True)
class DeltaE:
    hartree: float
    ev: float

    def to_dict(self) -> dict[str, float]:
        return {"ev": self.ev, "hartree": self.hartree}


@dataclass(frozen=True)
class Failure:
    geometry: str
    kpoint: str
    error_type: str
    message: str

    def to_dict(self) -> dict[str, str]:
        return {
            "error_type": self.error_type,
            "geometry": self.geometry,
            "kpoint": self.kpoint,
            "message": self.message,
        }


@dataclass(frozen=True)
class ReactionReport:
    meta: Meta
    energies: dict[str, GeometryEnergies]
    delta_e: DeltaE | None
    properties: dict[str, dict[str, dict[str, float]]] = field(default_factory=dict)
    failures: list[Failure] = field(default_factory=list)
    partial: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {
            "meta": self.meta.to_dict(),
            "energies": {g: e.to_dict() for g, e in self.energies.items()},
            "delta_e": self.delta_e.to_dict() if self.delta_e else None,
            "properties": {g: dict(p) for g, p in self.properties.items()},
            "failures": [
                f.to_dict() for f in sorted(self.failures, key=lambda f: (f.geometry, f.kpoint))
            ],
            "partial": self.partial,
        }


def report_to_json(report: ReactionReport) -> str:
    """
    Serialize a ReactionReport

    Rules:
    - sort_keys=True ensures stable key order
    - compact separators avoid formatting drift
    """
    return json.dumps(
        report.to_dict(),
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=False,
    )


def validate_report(report: ReactionReport) -> None:
    """
    Validate report structure + content

    Raises ValueError on invalid
    """
    if report.meta.schema_version != SCHEMA_VERSION:
        raise ValueError(f"meta.schema_version must be: '{SCHEMA_VERSION}'")
    if not report.meta.toolkit_version:
        raise ValueError("meta.toolkit_version must be non-empty")
    if not report.meta.method:
        raise ValueError("meta.method must be non-empty")
    if not (report.meta.hartree_to_ev > 0):
        raise ValueError("meta.hartree_to_ev must be > 0")

    if set(report.energies) != set(GEOMETRIES):
        raise ValueError(f"energies must have exactly the geometries {list(GEOMETRIES)}")
    for geometry, block in report.energies.items():
        if not all(math.isfinite(v) for v in block.per_k.values()):
            raise ValueError(f"energies.{geometry}.per_k holds a non-finite value")
        expected = twist_average(block.per_k.values()) if block.per_k else None
        if block.twist_average != expected:
            raise ValueError(
                f"energies.{geometry}.twist_average does not equal the mean of its per-k energies"
            )

    reactant = report.energies["reactant"].twist_average
    product = report.energies["product"].twist_average
    if reactant is None or product is None:
        if report.delta_e is not None:
            raise ValueError("delta_e must be null when a geometry has no energies")
    else:
        if report.delta_e is None:
            raise ValueError("delta_e is missing")
        ha, ev = _delta_e(product, reactant, hartree_to_ev=report.meta.hartree_to_ev)
        if report.delta_e.hartree != ha or report.delta_e.ev != ev:
            raise ValueError("delta_e does not equal product minus reactant")

    if report.partial != bool(report.failures):
        raise ValueError("partial must be true exactly when failures are recorded")
    for f in report.failures:
        if f.geometry not in GEOMETRIES:
            raise ValueError(f"failure geometry must be one of {list(GEOMETRIES)}")


def build_reaction_report(
    per_k: dict[str, dict[str, float]],
    *,
    meta: Meta,
    labels: dict[str, str] | None = None,
    properties: dict[str, dict[str, dict[str, float]]] | None = None,
    failures: list[Failure] | None = None,
) -> ReactionReport:
    """
    Assemble a ReactionReport from per-geometry {kpoint: energy} maps.
    """
    labels = labels or {}
    failures = list(failures or [])
    energies: dict[str, GeometryEnergies] = {}
    for geometry in GEOMETRIES:
        values = dict(per_k.get(geometry, {}))
        avg = twist_average(values.values()) if values else None
        energies[geometry] = GeometryEnergies(labels.get(geometry, geometry), values, avg)

    reactant = energies["reactant"].twist_average
    product = energies["product"].twist_average
    de = None
    if reactant is not None and product is not None:
        de = DeltaE(*_delta_e(product, reactant, hartree_to_ev=meta.hartree_to_ev))

    report = ReactionReport(
        meta=meta,
        energies=energies,
        delta_e=de,
        properties=properties or {},
        failures=failures,
        partial=bool(failures),
    )
    # never serialize invalid objects
    validate_report(report)
    return report
