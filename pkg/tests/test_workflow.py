"""
Contract tests for qembed.workflow (run files, task execution, reports, curves).

Rules:
- A failing (geometry, k) task never aborts the run; the report is partial
- Finished tasks are checkpointed and restored on resume
- Identical run, config and inputs give a byte-identical report.json
- trace.jsonl is append-only, one line per task and run
- With several seeds the lowest energy per (geometry, k) is kept
- The convergence curve writes one report and one CSV row per budget
"""

from __future__ import annotations

import csv
import json
from dataclasses import replace
from pathlib import Path

import pytest

from conftest import embedded_toy, h2_hamiltonian, write_fcidump
from qembed.config import default_config
from qembed.exact.casci import casci_ground_state
from qembed.model import Failure
from qembed.state import TaskKey
from qembed.workflow import runner
from qembed.workflow.curve import convergence_curve
from qembed.workflow.runconfig import DD_NO, VQE_QCC, load_run_config, parse_run_config
from qembed.workflow.runner import (
    TRACE_FILENAME,
    TaskOutcome,
    attempt_task,
    reduce_outcomes,
    report_meta,
    run_reaction,
)
from qembed.workflow.solve import TaskResult, default_ranking, electron_counts, solve_task

SHIFT = 0.1


def _h2_run(tmp_path: Path, *, kpoints=("G",), method: str = "casci", **extra) -> Path:
    H = h2_hamiltonian()
    reactant, product = {}, {}
    for k in kpoints:
        write_fcidump(H, tmp_path / "r" / f"{k}.fcidump")
        write_fcidump(replace(H, e0=H.e0 + SHIFT), tmp_path / "p" / f"{k}.fcidump")
        reactant[k] = f"r/{k}.fcidump"
        product[k] = f"p/{k}.fcidump"
    payload = {
        "reactant": {"label": "H2", "kpoints": reactant},
        "product": {"label": "H2 shifted", "kpoints": product},
        "method": method,
        "out": "out",
        **extra,
    }
    path = tmp_path / "run.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


# ---------------------------------------------------------------------------
# Run files
# ---------------------------------------------------------------------------

def test_run_file_resolves_paths_against_its_directory(tmp_path: Path) -> None:
    run = load_run_config(_h2_run(tmp_path, kpoints=("G", "k1")))
    assert run.kpoints == ["G", "k1"]
    assert run.reactant.kpoints["k1"] == tmp_path / "r" / "k1.fcidump"
    assert run.out_dir == tmp_path / "out"
    assert run.seeds == (7,)


def test_qcc_method_carries_pool_size() -> None:
    payload = {
        "reactant": {"kpoints": {"G": "a"}},
        "product": {"kpoints": {"G": "b"}},
        "method": "vqe_qcc(4)",
        "seeds": 3,
    }
    run = parse_run_config(payload)
    assert (run.method, run.pool_size) == (VQE_QCC, 4)
    assert run.method_label == "vqe_qcc(4)"
    assert run.seeds == (3,)
    assert run.to_dict()["method"] == "vqe_qcc(4)"


@pytest.mark.parametrize(
    "patch, match",
    [
        ({"method": "ccsd"}, "method must be one of"),
        ({"method": "vqe_qcc"}, "pool size"),
        ({"product": {"kpoints": {"k1": "b"}}}, "same k-points"),
        ({"n_alpha": 1}, "together"),
        ({"budgets": [4, 2]}, "ascending even"),
        ({"budgets": [3]}, "ascending even"),
        ({"optimizer": "adam"}, "optimizer"),
        ({"mapping": "bk"}, "unknown mapping"),
        ({"selection": {"pipeline": "random"}}, "pipeline"),
        ({"reactant": {"kpoints": {}}}, "non-empty"),
    ],
)
def test_run_file_errors(patch: dict, match: str) -> None:
    payload = {"reactant": {"kpoints": {"G": "a"}}, "product": {"kpoints": {"G": "b"}}}
    payload.update(patch)
    with pytest.raises(ValueError, match=match):
        parse_run_config(payload)


def test_invalid_json_run_file(tmp_path: Path) -> None:
    path = tmp_path / "run.json"
    path.write_text("{", encoding="utf-8")
    with pytest.raises(ValueError, match="invalid JSON"):
        load_run_config(path)


# ---------------------------------------------------------------------------
# Single tasks
# ---------------------------------------------------------------------------

def test_electron_counts_from_header() -> None:
    assert electron_counts(h2_hamiltonian()) == (1, 1)
    assert electron_counts(h2_hamiltonian(), 2, 0) == (2, 0)
    with pytest.raises(ValueError, match="different parity"):
        electron_counts(replace(h2_hamiltonian(), ms2=1))
    with pytest.raises(ValueError, match="electron counts unknown"):
        electron_counts(replace(h2_hamiltonian(), n_electrons=None))


def test_default_ranking_is_energetic() -> None:
    ranking = default_ranking(6, 3)
    assert ranking.ids("occupied") == [2, 1, 0]
    assert ranking.ids("virtual") == [3, 4, 5]


@pytest.mark.parametrize("method", ["casci", "vqe_quccsd", "ef"])
def test_solve_task_methods_agree_on_h2(tmp_path: Path, method: str) -> None:
    path = write_fcidump(h2_hamiltonian(), tmp_path / "G.fcidump")
    config = default_config()
    config["forging"]["n_bitstrings"] = 2
    result = solve_task(
        path, kpoint="G", method=method, config=config, seed=1, optimizer="quasi_newton"
    )
    exact = casci_ground_state(h2_hamiltonian(), 1, 1).energy
    assert result.energy == pytest.approx(exact, abs=1e-6)
    assert result.details["method"] == method
    assert TaskResult.from_dict(json.loads(json.dumps(result.to_dict()))) == result


def test_qcc_task_needs_jordan_wigner(tmp_path: Path) -> None:
    path = write_fcidump(h2_hamiltonian(), tmp_path / "G.fcidump")
    with pytest.raises(ValueError, match="jordan_wigner"):
        solve_task(
            path,
            kpoint="G",
            method=VQE_QCC,
            config=default_config(),
            seed=1,
            mapping="parity",
            pool_size=1,
        )


# ---------------------------------------------------------------------------
# Reaction runs
# ---------------------------------------------------------------------------

def test_reaction_delta_e_and_outputs(tmp_path: Path) -> None:
    run = load_run_config(_h2_run(tmp_path, kpoints=("G", "k1")))
    report = run_reaction(run, config=default_config())
    assert not report.partial
    assert report.delta_e.hartree == pytest.approx(SHIFT, abs=1e-10)
    assert report.energies["reactant"].label == "H2"
    assert report.properties["reactant"]["G"]["N"] == pytest.approx(2.0)
    stored = json.loads((tmp_path / "out" / "report.json").read_text(encoding="utf-8"))
    assert stored["delta_e"]["hartree"] == report.delta_e.hartree
    trace = (tmp_path / "out" / TRACE_FILENAME).read_text(encoding="utf-8").splitlines()
    assert len(trace) == 4
    assert all(json.loads(line)["ok"] for line in trace)


def test_identical_geometries_give_zero_delta_e(tmp_path: Path) -> None:
    write_fcidump(h2_hamiltonian(), tmp_path / "G.fcidump")
    payload = {
        "reactant": {"kpoints": {"G": "G.fcidump"}},
        "product": {"kpoints": {"G": "G.fcidump"}},
    }
    run = parse_run_config(payload, base_dir=tmp_path)
    report = run_reaction(run, config=default_config(), resume=False, write=False)
    assert report.delta_e.hartree == 0.0
    assert not (tmp_path / "out").exists()


def test_broken_kpoint_gives_partial_report(tmp_path: Path) -> None:
    run_path = _h2_run(tmp_path, kpoints=("G", "k1"))
    (tmp_path / "p" / "k1.fcidump").write_text("not an integral file\n", encoding="utf-8")
    report = run_reaction(load_run_config(run_path), config=default_config())
    assert report.partial
    [failure] = report.failures
    assert (failure.geometry, failure.kpoint) == ("product", "k1")
    assert failure.error_type == "FcidumpError"
    assert "missing &FCI header" in failure.message
    assert list(report.energies["product"].per_k) == ["G"]
    assert report.delta_e is not None


def test_rerun_restores_checkpoints_and_keeps_bytes(tmp_path: Path, monkeypatch) -> None:
    run = load_run_config(_h2_run(tmp_path))
    run_reaction(run, config=default_config())
    first = (tmp_path / "out" / "report.json").read_bytes()

    def _no_solve(*args, **kwargs):
        raise AssertionError("checkpointed task solved again")

    monkeypatch.setattr(runner, "solve_task", _no_solve)
    report = run_reaction(run, config=default_config())
    assert not report.partial
    assert (tmp_path / "out" / "report.json").read_bytes() == first
    trace = (tmp_path / "out" / TRACE_FILENAME).read_text(encoding="utf-8").splitlines()
    assert len(trace) == 4
    assert [json.loads(line)["restored"] for line in trace] == [False, False, True, True]


def test_changed_config_does_not_reuse_checkpoints(tmp_path: Path, monkeypatch) -> None:
    run = load_run_config(_h2_run(tmp_path))
    run_reaction(run, config=default_config())
    config = default_config()
    config["vqe"]["max_iter"] = 123
    calls: list[str] = []
    real = runner.solve_task

    def _counting(*args, **kwargs):
        calls.append(kwargs["kpoint"])
        return real(*args, **kwargs)

    monkeypatch.setattr(runner, "solve_task", _counting)
    run_reaction(run, config=config)
    assert len(calls) == 2


def test_threads_do_not_change_the_report(tmp_path: Path) -> None:
    run = load_run_config(_h2_run(tmp_path, kpoints=("G", "k1", "k2")))
    serial = run_reaction(run, config=default_config(), threads=1, resume=False, write=False)
    pooled = run_reaction(run, config=default_config(), threads=3, resume=False, write=False)
    assert serial.to_dict() == pooled.to_dict()


def test_lowest_seed_energy_is_kept(tmp_path: Path) -> None:
    run = parse_run_config(
        {
            "reactant": {"kpoints": {"G": "a"}},
            "product": {"kpoints": {"G": "b"}},
            "seeds": [1, 2],
        }
    )
    diverged = Failure("product", "G", "ValueError", "diverged")
    outcomes = [
        TaskOutcome(TaskKey("reactant", "G", 1), result=TaskResult(-1.0)),
        TaskOutcome(TaskKey("reactant", "G", 2), result=TaskResult(-1.2)),
        TaskOutcome(TaskKey("product", "G", 1), failure=diverged),
        TaskOutcome(TaskKey("product", "G", 2), result=TaskResult(-0.5)),
    ]
    report = reduce_outcomes(run, outcomes, meta=report_meta(run, default_config()))
    assert report.energies["reactant"].per_k == {"G": -1.2}
    assert report.energies["product"].per_k == {"G": -0.5}
    assert not report.partial


def test_attempt_task_records_solver_errors_as_failures() -> None:
    key = TaskKey("product", "k1", 7)

    def _diverge() -> TaskResult:
        raise RuntimeError("eigensolver did not converge")

    outcome = attempt_task(key, _diverge)
    assert not outcome.ok
    expected = Failure("product", "k1", "RuntimeError", "eigensolver did not converge")
    assert outcome.failure == expected
    record = outcome.trace_record("abc")
    assert (record["ok"], record["error_type"], record["seed"]) == (False, "RuntimeError", 7)

    solved = attempt_task(key, lambda: TaskResult(-1.5))
    assert solved.ok and solved.result == TaskResult(-1.5)
    assert solved.trace_record("abc")["restored"] is False


def test_attempt_task_lets_programming_errors_through() -> None:
    def _bug() -> TaskResult:
        raise KeyError("energy")

    with pytest.raises(KeyError):
        attempt_task(TaskKey("reactant", "G", 1), _bug)


def test_outcome_needs_exactly_one_of_result_or_failure() -> None:
    key = TaskKey("reactant", "G", 1)
    with pytest.raises(ValueError, match="exactly one"):
        TaskOutcome(key)
    with pytest.raises(ValueError, match="exactly one"):
        TaskOutcome(
            key, result=TaskResult(-1.0), failure=Failure("reactant", "G", "ValueError", "x")
        )


# ---------------------------------------------------------------------------
# Convergence curve
# ---------------------------------------------------------------------------

def _toy_run(tmp_path: Path) -> Path:
    H = embedded_toy()
    write_fcidump(H, tmp_path / "r" / "G.fcidump")
    write_fcidump(replace(H, e0=H.e0 + 0.05), tmp_path / "p" / "G.fcidump")
    payload = {
        "reactant": {"kpoints": {"G": "r/G.fcidump"}},
        "product": {"kpoints": {"G": "p/G.fcidump"}},
        "selection": {"pipeline": DD_NO, "n_occ_select": 3},
        "budgets": [2, 4],
    }
    path = tmp_path / "run.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


def test_convergence_curve(tmp_path: Path) -> None:
    run = load_run_config(_toy_run(tmp_path))
    points = convergence_curve(run, config=default_config())
    assert [p.budget for p in points] == [2, 4]
    assert all(p.delta_e_ha == pytest.approx(0.05, abs=1e-9) for p in points)
    assert points[1].e_reactant <= points[0].e_reactant + 1e-10
    for budget in (2, 4):
        assert (tmp_path / "out" / f"report_b{budget}.json").exists()
    with (tmp_path / "out" / "curve_dd_no.csv").open(newline="", encoding="utf-8") as f:
        rows = list(csv.DictReader(f))
    assert [r["budget"] for r in rows] == ["2", "4"]
    assert rows[0]["pipeline"] == DD_NO
    assert rows[0]["partial"] == "0"


def test_curve_with_dd_pipeline(tmp_path: Path) -> None:
    run = load_run_config(_toy_run(tmp_path))
    points = convergence_curve(run, [2], pipeline="dd", config=default_config())
    assert points[0].pipeline == "dd"
    assert (tmp_path / "out" / "curve_dd.csv").exists()


def test_curve_budget_checks(tmp_path: Path) -> None:
    run = load_run_config(_toy_run(tmp_path))
    with pytest.raises(ValueError, match="ascending even"):
        convergence_curve(run, [4, 2], config=default_config())
    with pytest.raises(ValueError, match="pipeline"):
        convergence_curve(run, [2], pipeline="full", config=default_config())
