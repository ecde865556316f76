"""
qembed.workflow.curve
AUTHOR: carter-vin

ΔE against active-space budget: one reaction run per budget through the DD or
DD+NO pipeline, written as CSV for plotting.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Sequence

from qembed.emit import write_csv
from qembed.logging import emit_event
from qembed.workflow.runconfig import DD_NO, PIPELINES, RunConfig, SelectionSettings
from qembed.workflow.runner import resolve_solver_config, run_reaction

CURVE_HEADER = (
    "budget",
    "pipeline",
    "e_reactant",
    "e_product",
    "delta_e_ha",
    "delta_e_ev",
    "partial",
)


@dataclass(frozen=True)
class CurvePoint:
    budget: int
    pipeline: str
    e_reactant: float | None
    e_product: float | None
    delta_e_ha: float | None
    delta_e_ev: float | None
    partial: bool

    def row(self) -> list[Any]:
        return [
            self.budget,
            self.pipeline,
            "" if self.e_reactant is None else self.e_reactant,
            "" if self.e_product is None else self.e_product,
            "" if self.delta_e_ha is None else self.delta_e_ha,
            "" if self.delta_e_ev is None else self.delta_e_ev,
            int(self.partial),
        ]


def convergence_curve(
    run: RunConfig,
    budgets: Sequence[int] | None = None,
    *,
    pipeline: str | None = None,
    config: dict[str, Any] | None = None,
    threads: int | None = None,
    resume: bool = True,
    csv_path: str | Path | None = None,
) -> list[CurvePoint]:
    """
    Raises ValueError unless budgets are non-empty, ascending and even.

    The pipeline defaults to the run's selection settings, else DD+NO.
    """
    budgets = list(run.budgets if budgets is None else budgets)
    if not budgets:
        raise ValueError("at least one budget is required")
    if budgets != sorted(budgets) or any(b < 2 or b % 2 for b in budgets):
        raise ValueError("budgets must be ascending even numbers >= 2")

    selection = run.selection or SelectionSettings(pipeline=DD_NO)
    if pipeline is not None:
        if pipeline not in PIPELINES:
            raise ValueError(f"pipeline must be one of {list(PIPELINES)}")
        selection = replace(selection, pipeline=pipeline)
    staged = replace(run, selection=selection)
    cfg = resolve_solver_config(run, config)

    points: list[CurvePoint] = []
    for budget in budgets:
        report = run_reaction(
            staged, config=cfg, threads=threads, budget=budget, resume=resume, write=True
        )
        point = CurvePoint(
            budget=budget,
            pipeline=selection.pipeline,
            e_reactant=report.energies["reactant"].twist_average,
            e_product=report.energies["product"].twist_average,
            delta_e_ha=report.delta_e.hartree if report.delta_e else None,
            delta_e_ev=report.delta_e.ev if report.delta_e else None,
            partial=report.partial,
        )
        emit_event(
            "curve_point",
            budget=budget,
            pipeline=selection.pipeline,
            delta_e_ha=point.delta_e_ha,
            partial=point.partial,
        )
        points.append(point)

    if csv_path is None:
        csv_path = run.out_dir / f"curve_{selection.pipeline}.csv"
    write_curve_csv(points, csv_path)
    return points


def write_curve_csv(points: Sequence[CurvePoint], path: str | Path) -> None:
    write_csv(path, CURVE_HEADER, (p.row() for p in points))
