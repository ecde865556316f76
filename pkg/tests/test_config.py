"""
Contract tests for qembed.config solver configuration.

Rules:
- Precedence: defaults < JSON file < env vars
- compute_config_hash is stable across key orderings
- Report meta carries config_profile and config_hash
- `qembed config` reports the source of every value
"""

from __future__ import annotations

import json
from pathlib import Path

from typer.testing import CliRunner

from conftest import h2_hamiltonian, write_fcidump
from qembed.config import compute_config_hash, config_sources, load_config, normalize_config
from qembed.main import app
from qembed.workflow.runconfig import parse_run_config
from qembed.workflow.runner import run_reaction


# ---------------------------------------------------------------------------
# normalize_config
# ---------------------------------------------------------------------------

def test_normalize_config_fills_defaults() -> None:
    """Empty input yields full default config."""
    cfg = normalize_config({})
    assert cfg["casci"]["max_determinants"] == 4_000_000
    assert cfg["statevector"]["max_qubits"] == 24
    assert cfg["vqe"]["optimizer"] == "quasi_newton"
    assert cfg["spsa"]["alpha"] == 0.602
    assert cfg["workflow"]["hartree_to_ev"] == 27.211386245988
    assert cfg["workflow"]["profile_name"] == "default"


def test_normalize_config_merges_partial_overrides() -> None:
    """Partial section override leaves other keys at defaults; unknown keys are dropped."""
    cfg = normalize_config({"vqe": {"max_iter": 50, "bogus": 1}, "nope": {"x": 1}})
    assert cfg["vqe"]["max_iter"] == 50
    assert cfg["vqe"]["tol"] == 1e-8  # default preserved
    assert "bogus" not in cfg["vqe"]
    assert "nope" not in cfg


# ---------------------------------------------------------------------------
# compute_config_hash
# ---------------------------------------------------------------------------

def test_config_hash_stable_across_key_orderings() -> None:
    cfg_a = {"vqe": {"tol": 1e-6, "max_iter": 10}}
    cfg_b = {"vqe": {"max_iter": 10, "tol": 1e-6}}
    assert compute_config_hash(cfg_a) == compute_config_hash(cfg_b)


def test_config_hash_changes_when_values_change() -> None:
    cfg_default = load_config()
    cfg_custom = load_config()
    cfg_custom["spsa"]["a"] = 0.01
    assert compute_config_hash(cfg_default) != compute_config_hash(cfg_custom)


def test_config_hash_is_16_hex_chars() -> None:
    h = compute_config_hash(load_config())
    assert len(h) == 16
    assert all(c in "0123456789abcdef" for c in h)


# ---------------------------------------------------------------------------
# load_config: precedence
# ---------------------------------------------------------------------------

def test_load_config_file_overrides_defaults(tmp_path: Path) -> None:
    config_file = tmp_path / "config.json"
    config_file.write_text(json.dumps({"selection": {"eta": 0.05}}))
    cfg = load_config(str(config_file))
    assert cfg["selection"]["eta"] == 0.05
    assert cfg["selection"]["top_m"] == 5


def test_load_config_env_overrides_file(tmp_path: Path, monkeypatch) -> None:
    config_file = tmp_path / "config.json"
    config_file.write_text(json.dumps({"selection": {"eta": 0.05}}))
    monkeypatch.setenv("QEMBED_ETA", "0.2")
    assert load_config(str(config_file))["selection"]["eta"] == 0.2


def test_invalid_env_value_is_ignored(monkeypatch) -> None:
    monkeypatch.setenv("QEMBED_THREADS", "many")
    assert load_config()["workflow"]["threads"] == 1


def test_load_config_invalid_or_missing_file_falls_back(tmp_path: Path) -> None:
    bad = tmp_path / "bad.json"
    bad.write_text("not json {{")
    assert load_config(str(bad)) == load_config()
    assert load_config("/nonexistent/path/config.json") == load_config()


def test_config_sources(tmp_path: Path, monkeypatch) -> None:
    config_file = tmp_path / "config.json"
    config_file.write_text(json.dumps({"vqe": {"tol": 1e-6}}))
    monkeypatch.setenv("QEMBED_SEED", "11")
    sources = config_sources(str(config_file))
    assert sources["vqe"]["tol"] == "file"
    assert sources["vqe"]["seed"] == "env"
    assert sources["vqe"]["max_iter"] == "default"


# ---------------------------------------------------------------------------
# Report meta and CLI
# ---------------------------------------------------------------------------

def test_report_meta_includes_config_identity(tmp_path: Path, monkeypatch) -> None:
    write_fcidump(h2_hamiltonian(), tmp_path / "G.fcidump")
    run = parse_run_config(
        {"reactant": {"kpoints": {"G": "G.fcidump"}}, "product": {"kpoints": {"G": "G.fcidump"}}},
        base_dir=tmp_path,
    )
    default_meta = run_reaction(run, resume=False, write=False).meta
    monkeypatch.setenv("QEMBED_PROFILE", "tight")
    monkeypatch.setenv("QEMBED_DROP_TOL", "1e-14")
    custom_meta = run_reaction(run, resume=False, write=False).meta
    assert default_meta.config_profile == "default"
    assert custom_meta.config_profile == "tight"
    assert len(default_meta.config_hash) == 16
    assert default_meta.config_hash != custom_meta.config_hash


def test_config_command_reports_sources(monkeypatch) -> None:
    monkeypatch.setenv("QEMBED_MAX_QUBITS", "12")
    result = CliRunner().invoke(app, ["config", "--format", "json"])
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload["values"]["statevector.max_qubits"] == {
        "value": 12,
        "source": "env: QEMBED_MAX_QUBITS",
    }
    assert payload["values"]["vqe.tol"]["source"] == "default"
    assert len(payload["config_hash"]) == 16
