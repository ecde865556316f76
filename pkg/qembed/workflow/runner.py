"""
qembed.workflow.runner
AUTHOR: carter-vin

Reaction runs: (geometry x k-point x seed) tasks on a thread pool, checkpointed,
reduced single-threaded into a ReactionReport.

Per-task errors never abort a run; they are recorded and the report is partial.
With several seeds the lowest energy per (geometry, k) is kept.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Sequence

from qembed import __version__
from qembed.config import compute_config_hash, load_config, normalize_config
from qembed.emit import append_jsonl, write_json
from qembed.logging import emit_event
from qembed.model import (
    GEOMETRIES,
    Failure,
    Meta,
    ReactionReport,
    SCHEMA_VERSION,
    build_reaction_report,
    report_to_json,
)
from qembed.state import TaskKey, checkpoint_dir, load_checkpoint, run_hash, save_checkpoint
from qembed.workflow.runconfig import RunConfig
from qembed.workflow.solve import TaskResult, solve_task

REPORT_FILENAME = "report.json"
TRACE_FILENAME = "trace.jsonl"


# Input, numerical and resource failures of a single task. Anything else is a
# bug in qembed and propagates.
TASK_ERRORS: tuple[type[BaseException], ...] = (
    ValueError,
    RuntimeError,
    ArithmeticError,
    OSError,
)


@dataclass(frozen=True)
class TaskOutcome:
    """
    What became of one (geometry, k, seed[, budget]) task.

    Exactly one of result / failure is set. restored marks results read back
    from a checkpoint instead of solved in this run.
    """

    key: TaskKey
    result: TaskResult | None = None
    failure: Failure | None = None
    restored: bool = False

    def __post_init__(self) -> None:
        if (self.result is None) == (self.failure is None):
            raise ValueError(f"{self.key.name}: outcome needs exactly one of result or failure")

    @property
    def ok(self) -> bool:
        return self.result is not None

    def trace_record(self, run_hash_: str) -> dict[str, Any]:
        record: dict[str, Any] = {**self.key.to_dict(), "ok": self.ok, "run_hash": run_hash_}
        if self.result is not None:
            record["energy"] = self.result.energy
            record["restored"] = self.restored
        elif self.failure is not None:
            record["error_type"] = self.failure.error_type
            record["message"] = self.failure.message
        return record


def attempt_task(key: TaskKey, solve: Callable[[], TaskResult]) -> TaskOutcome:
    """Run one solve; a TASK_ERRORS exception becomes a Failure for that (geometry, k)."""
    try:
        result = solve()
    except TASK_ERRORS as e:
        failure = Failure(key.geometry, key.kpoint, type(e).__name__, str(e))
        return TaskOutcome(key, failure=failure)
    return TaskOutcome(key, result=result)


def resolve_threads(config: dict[str, Any], threads: int | None = None) -> int:
    """Explicit argument, else workflow.threads (which QEMBED_THREADS overrides)."""
    value = threads if threads is not None else config["workflow"]["threads"]
    try:
        return max(1, int(value))
    except (TypeError, ValueError):
        return 1


def resolve_solver_config(run: RunConfig, config: dict[str, Any] | None) -> dict[str, Any]:
    if config is not None:
        return normalize_config(config)
    return load_config(str(run.solver_config) if run.solver_config else None)


def _inputs(run: RunConfig) -> list[Path]:
    paths = [*run.reactant.kpoints.values(), *run.product.kpoints.values()]
    if run.selection is not None:
        paths.extend(run.selection.ranking.values())
    return paths


def _solver_options(run: RunConfig) -> dict[str, Any]:
    return {
        "mapping": run.mapping,
        "pool_size": run.pool_size,
        "optimizer": run.optimizer,
        "shots": run.shots,
        "n_bitstrings": run.n_bitstrings,
        "hop_layout": run.hop_layout,
    }


# -----------------------------
# Task execution
# -----------------------------
def execute_tasks(
    run: RunConfig,
    config: dict[str, Any],
    *,
    budget: int | None = None,
    threads: int = 1,
    state_dir: Path | None = None,
) -> list[TaskOutcome]:
    """
    Solve every (geometry, k, seed) task, restoring checkpointed ones.

    Outcomes come back in task-key order whatever the thread scheduling.
    """
    keys = sorted(
        (TaskKey(g, k, s, budget) for g in GEOMETRIES for k in run.kpoints for s in run.seeds),
        key=lambda t: (GEOMETRIES.index(t.geometry), run.kpoints.index(t.kpoint), t.seed),
    )
    restored: dict[TaskKey, TaskOutcome] = {}
    for key in keys:
        stored = load_checkpoint(key, state_dir=state_dir) if state_dir else None
        if stored is not None:
            restored[key] = TaskOutcome(key, result=TaskResult.from_dict(stored), restored=True)
            emit_event("task_restored", **key.to_dict(), energy=restored[key].result.energy)
    pending = [key for key in keys if key not in restored]

    options = _solver_options(run)

    def _one(key: TaskKey) -> TaskOutcome:
        geometry = run.geometry(key.geometry)
        ranking = run.selection.ranking.get(key.geometry) if run.selection else None
        outcome = attempt_task(
            key,
            lambda: solve_task(
                geometry.kpoints[key.kpoint],
                kpoint=key.kpoint,
                method=run.method,
                config=config,
                seed=key.seed,
                n_alpha=run.n_alpha,
                n_beta=run.n_beta,
                selection=run.selection,
                budget=key.budget,
                ranking_path=ranking,
                **options,
            ),
        )
        if outcome.result is not None:
            if state_dir is not None:
                save_checkpoint(key, outcome.result.to_dict(), state_dir=state_dir)
            emit_event("task_solved", **key.to_dict(), energy=outcome.result.energy)
        elif outcome.failure is not None:
            emit_event(
                "task_failed",
                **key.to_dict(),
                error_type=outcome.failure.error_type,
                message=outcome.failure.message,
            )
        return outcome

    if threads > 1 and len(pending) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            solved = dict(zip(pending, pool.map(_one, pending)))
    else:
        solved = {key: _one(key) for key in pending}
    return [restored.get(key) or solved[key] for key in keys]


def append_trace(path: Path, outcomes: Sequence[TaskOutcome], *, run_hash_: str) -> None:
    """One line per task in key order; appended, so restarts keep the earlier lines."""
    for outcome in sorted(outcomes, key=lambda o: o.key):
        append_jsonl(path, outcome.trace_record(run_hash_))


def reduce_outcomes(
    run: RunConfig, outcomes: Sequence[TaskOutcome], *, meta: Meta
) -> ReactionReport:
    """Best seed per (geometry, k); a (geometry, k) fails only when every seed failed."""
    per_k: dict[str, dict[str, float]] = {g: {} for g in GEOMETRIES}
    properties: dict[str, dict[str, dict[str, float]]] = {}
    failures: list[Failure] = []
    by_seed = sorted(outcomes, key=lambda o: o.key.seed)
    for geometry in GEOMETRIES:
        for kpoint in run.kpoints:
            group = [o for o in by_seed if (o.key.geometry, o.key.kpoint) == (geometry, kpoint)]
            solved = [(o.result, o.key.seed) for o in group if o.result is not None]
            if not solved:
                # every seed failed: report the lowest seed's error
                failures.extend(o.failure for o in group[:1] if o.failure is not None)
                continue
            best, _ = min(solved, key=lambda item: (item[0].energy, item[1]))
            per_k[geometry][kpoint] = float(best.energy)
            if best.properties is not None:
                properties.setdefault(geometry, {})[kpoint] = dict(best.properties)
    return build_reaction_report(
        per_k,
        meta=meta,
        labels={"reactant": run.reactant.label, "product": run.product.label},
        properties=properties,
        failures=failures,
    )


def report_meta(run: RunConfig, config: dict[str, Any]) -> Meta:
    return Meta(
        schema_version=SCHEMA_VERSION,
        toolkit_version=__version__,
        method=run.method_label,
        mapping=run.mapping,
        hartree_to_ev=float(config["workflow"]["hartree_to_ev"]),
        config_profile=str(config["workflow"]["profile_name"]),
        config_hash=compute_config_hash(config),
    )


# -----------------------------
# Entry point
# -----------------------------
def run_reaction(
    run: RunConfig,
    *,
    config: dict[str, Any] | None = None,
    threads: int | None = None,
    budget: int | None = None,
    resume: bool = True,
    write: bool = True,
) -> ReactionReport:
    """
    Solve both geometries at every k-point and assemble the ΔE report.

    Writes <out>/report.json when write is true. Identical run, config and
    inputs give a byte-identical report.
    """
    cfg = resolve_solver_config(run, config)
    n_threads = resolve_threads(cfg, threads)
    hash_ = run_hash(run.to_dict(), cfg, _inputs(run))
    state_dir = checkpoint_dir(run.out_dir, hash_) if resume else None

    emit_event(
        "run_start",
        method=run.method_label,
        mapping=run.mapping,
        n_k=run.n_k,
        seeds=list(run.seeds),
        budget=budget,
        threads=n_threads,
        run_hash=hash_,
        out_dir=str(run.out_dir),
    )
    report: ReactionReport | None = None
    try:
        outcomes = execute_tasks(
            run, cfg, budget=budget, threads=n_threads, state_dir=state_dir
        )
        report = reduce_outcomes(run, outcomes, meta=report_meta(run, cfg))
        if write:
            append_trace(run.out_dir / TRACE_FILENAME, outcomes, run_hash_=hash_)
            name = REPORT_FILENAME if budget is None else f"report_b{budget}.json"
            path = run.out_dir / name
            write_json(path, report_to_json(report))
            emit_event("report_emitted", path=str(path), partial=report.partial)
        return report
    finally:
        emit_event(
            "run_shutdown",
            run_hash=hash_,
            partial=report.partial if report is not None else True,
            failures=len(report.failures) if report is not None else None,
        )
