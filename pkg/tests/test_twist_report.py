"""
Contract tests for twist averaging, the reaction report and its validator.

Rules:
- The twist average is the uniform mean of the per-k energies
- ΔE = E_product - E_reactant, eV = Hartree * hartree_to_ev
- Stored aggregates must be recomputable from the stored per-k energies
- partial is true exactly when failures are recorded
- Serialization is deterministic (sorted keys, compact separators)
"""

from __future__ import annotations

import importlib.util
import json
import math
from dataclasses import replace
from pathlib import Path

import pytest

from conftest import FIXTURES
from qembed.model import (
    SCHEMA_VERSION,
    Failure,
    Meta,
    build_reaction_report,
    report_to_json,
    validate_report,
)
from qembed.render import RENDERER_NAMES, get_renderer
from qembed.state import TaskKey, load_checkpoint, run_hash, save_checkpoint
from qembed.workflow.twist import HARTREE_TO_EV, delta_e, read_energy_table, twist_average


def _load_validate_module():
    spec = importlib.util.spec_from_file_location(
        "validate_report",
        Path(__file__).parent.parent / "scripts" / "validate_report.py",
    )
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


_mod = _load_validate_module()

META = Meta(
    schema_version=SCHEMA_VERSION,
    toolkit_version="0.1.0",
    method="casci",
    mapping="jordan_wigner",
    hartree_to_ev=HARTREE_TO_EV,
)


def _fixture_report():
    reactant = read_energy_table(FIXTURES / "reactant_2orb_casci.csv")
    product = read_energy_table(FIXTURES / "product_2orb_casci.csv")
    return build_reaction_report({"reactant": reactant, "product": product}, meta=META)


# ---------------------------------------------------------------------------
# Twist averaging and ΔE
# ---------------------------------------------------------------------------

def test_fixture_tables_have_sixteen_kpoints() -> None:
    reactant = read_energy_table(FIXTURES / "reactant_2orb_casci.csv")
    assert len(reactant) == 16
    assert list(reactant)[:2] == ["G", "k1"]
    assert reactant["G"] == -3981.02732


def test_twist_average_is_uniform_mean() -> None:
    values = read_energy_table(FIXTURES / "product_2orb_casci.csv").values()
    assert twist_average(values) == math.fsum(values) / 16
    assert twist_average([-1.0]) == -1.0


def test_twist_average_rejects_empty_and_non_finite() -> None:
    with pytest.raises(ValueError, match="at least one"):
        twist_average([])
    with pytest.raises(ValueError, match="finite"):
        twist_average([1.0, float("nan")])


def test_gamma_only_delta_e() -> None:
    ha, ev = delta_e(-3981.12598, -3981.02732)
    assert ha == pytest.approx(-0.09866, abs=1e-9)
    assert ev == pytest.approx(-0.09866 * HARTREE_TO_EV, abs=1e-8)


def test_identical_geometries_give_zero_delta_e() -> None:
    assert delta_e(-1.5, -1.5) == (0.0, 0.0)


def test_energy_table_errors(tmp_path: Path) -> None:
    dup = tmp_path / "dup.csv"
    dup.write_text("kpoint,energy\nG,-1.0\nG,-2.0\n", encoding="utf-8")
    with pytest.raises(ValueError, match="row 3: duplicate kpoint"):
        read_energy_table(dup)
    bad = tmp_path / "bad.csv"
    bad.write_text("kpoint,energy\nG,abc\n", encoding="utf-8")
    with pytest.raises(ValueError, match="row 2: invalid energy"):
        read_energy_table(bad)
    header = tmp_path / "header.csv"
    header.write_text("k,e\nG,-1.0\n", encoding="utf-8")
    with pytest.raises(ValueError, match="header"):
        read_energy_table(header)


# ---------------------------------------------------------------------------
# Report model
# ---------------------------------------------------------------------------

def test_report_aggregates_are_recomputable() -> None:
    report = _fixture_report()
    payload = report.to_dict()
    assert set(payload) == {"delta_e", "energies", "failures", "meta", "partial", "properties"}
    reactant = payload["energies"]["reactant"]
    product = payload["energies"]["product"]
    assert reactant["twist_average"] == math.fsum(reactant["per_k"].values()) / 16
    assert payload["delta_e"]["hartree"] == product["twist_average"] - reactant["twist_average"]
    assert payload["delta_e"]["ev"] == payload["delta_e"]["hartree"] * HARTREE_TO_EV
    assert payload["partial"] is False


def test_report_json_is_deterministic() -> None:
    first, second = report_to_json(_fixture_report()), report_to_json(_fixture_report())
    assert first == second
    assert ": " not in first
    assert json.loads(first)["meta"]["schema_version"] == "1"


def test_failures_make_report_partial() -> None:
    report = build_reaction_report(
        {"reactant": {"G": -1.0, "k1": -1.2}, "product": {"G": -0.9}},
        meta=META,
        failures=[Failure("product", "k1", "FcidumpError", "line 1: missing &FCI header")],
    )
    assert report.partial
    assert report.energies["product"].twist_average == -0.9
    assert report.delta_e is not None
    assert report.to_dict()["failures"][0]["kpoint"] == "k1"


def test_delta_e_is_null_without_energies() -> None:
    report = build_reaction_report(
        {"reactant": {"G": -1.0}, "product": {}},
        meta=META,
        failures=[Failure("product", "G", "ValueError", "boom")],
    )
    assert report.delta_e is None
    assert report.energies["product"].twist_average is None


def test_validate_report_rejects_tampered_aggregates() -> None:
    report = _fixture_report()
    tampered = replace(
        report,
        energies={
            **report.energies,
            "reactant": replace(report.energies["reactant"], twist_average=-3981.0),
        },
    )
    with pytest.raises(ValueError, match="twist_average"):
        validate_report(tampered)
    with pytest.raises(ValueError, match="partial"):
        validate_report(replace(report, partial=True))
    with pytest.raises(ValueError, match="schema_version"):
        validate_report(replace(report, meta=replace(META, schema_version="2")))


# ---------------------------------------------------------------------------
# Renderers
# ---------------------------------------------------------------------------

def test_renderers() -> None:
    report = _fixture_report()
    assert RENDERER_NAMES == ("json", "table", "text")
    assert get_renderer("json").render(report, meta={}) == report_to_json(report)
    text = get_renderer("text").render(report, meta={})
    assert "delta_e hartree=" in text
    assert "partial=false" in text
    table = get_renderer("table").render(report, meta={}).splitlines()
    assert table[0].split() == ["K-POINT", "REACTANT", "PRODUCT", "DIFF"]
    assert len(table) == 1 + 16 + 1
    assert table[-1].startswith("AVERAGE")
    with pytest.raises(ValueError, match="unknown renderer"):
        get_renderer("yaml")


# ---------------------------------------------------------------------------
# Checkpoints
# ---------------------------------------------------------------------------

def test_checkpoint_round_trip_and_key_check(tmp_path: Path) -> None:
    key = TaskKey("reactant", "k/1", 7, 4)
    assert key.name == "reactant__k_1__s7__b4"
    result = {"energy": -1.1, "properties": None, "details": {"method": "casci"}}
    save_checkpoint(key, result, state_dir=tmp_path)
    assert load_checkpoint(key, state_dir=tmp_path) == result
    assert load_checkpoint(replace(key, seed=8), state_dir=tmp_path) is None


def test_corrupt_checkpoint_means_solve_again(tmp_path: Path) -> None:
    key = TaskKey("product", "G", 1)
    (tmp_path / f"{key.name}.json").write_text("{not json", encoding="utf-8")
    assert load_checkpoint(key, state_dir=tmp_path) is None


def test_run_hash_covers_input_bytes(tmp_path: Path) -> None:
    ham = tmp_path / "G.fcidump"
    ham.write_text("a", encoding="utf-8")
    first = run_hash({"method": "casci"}, {"vqe": {}}, [ham])
    assert first == run_hash({"method": "casci"}, {"vqe": {}}, [ham])
    assert len(first) == 16
    ham.write_text("b", encoding="utf-8")
    assert run_hash({"method": "casci"}, {"vqe": {}}, [ham]) != first
    assert run_hash({"method": "ef"}, {"vqe": {}}, [ham]) != first


# ---------------------------------------------------------------------------
# scripts/validate_report.py
# ---------------------------------------------------------------------------

def test_script_accepts_emitted_report() -> None:
    payload = json.loads(report_to_json(_fixture_report()))
    assert _mod.validate_report(payload, "report.json") == []


def test_script_flags_inconsistent_report() -> None:
    payload = json.loads(report_to_json(_fixture_report()))
    payload["delta_e"]["hartree"] += 1e-3
    payload["partial"] = True
    messages = [e.message for e in _mod.validate_report(payload, "report.json")]
    assert "delta_e.hartree != product - reactant" in messages
    assert any("partial" in m for m in messages)


def test_script_missing_keys_and_files(tmp_path: Path) -> None:
    errors = _mod.validate_report({"meta": {}}, "x.json")
    assert len(errors) == 1 and "missing required keys" in errors[0].message
    with pytest.raises(FileNotFoundError):
        _mod.validate_files([str(tmp_path / "nope.json")])
    bad = tmp_path / "bad.json"
    bad.write_text("[]", encoding="utf-8")
    assert _mod.validate_files([str(bad)])[1] == 1
