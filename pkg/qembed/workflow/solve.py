"""
qembed.workflow.solve
AUTHOR: carter-vin

One (geometry, k-point, seed[, budget]) task: optional active-space selection,
then the configured solver. Returns plain data so results can be checkpointed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from qembed.exact.casci import casci_ground_state, dominant_configurations, expectation_suite
from qembed.forging import ef_bitstrings_from_ci, ef_optimize, resolve_hop_layout
from qembed.hamiltonian.core import ActiveSpaceHamiltonian, freeze_and_project
from qembed.hamiltonian.fcidump import load_hamiltonian
from qembed.hamiltonian.qubit import to_qubit_hamiltonian
from qembed.operators.mapping import JORDAN_WIGNER, reference_bitstring, resolve_mapping
from qembed.selection.active_space import (
    build_dd_active_space,
    build_no_active_space,
    select_occupied,
)
from qembed.selection.overlap import OverlapRanking, ranking_from_scores, read_ranking_csv
from qembed.vqe.ansatz import QuccsdSpec, build_qcc_ansatz, build_qcc_pool, build_quccsd
from qembed.vqe.optimizers import SPSA
from qembed.vqe.solver import vqe_minimize, vqe_property_report
from qembed.workflow.runconfig import CASCI, DD, EF, VQE_QCC, VQE_QUCCSD, SelectionSettings


@dataclass(frozen=True)
class TaskResult:
    energy: float
    properties: dict[str, float] | None = None
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "energy": self.energy,
            "properties": dict(self.properties) if self.properties is not None else None,
            "details": dict(self.details),
        }

    @staticmethod
    def from_dict(payload: dict[str, Any]) -> "TaskResult":
        props = payload.get("properties")
        return TaskResult(
            energy=float(payload["energy"]),
            properties={str(k): float(v) for k, v in props.items()} if props else None,
            details=dict(payload.get("details") or {}),
        )


def electron_counts(
    H: ActiveSpaceHamiltonian, n_alpha: int | None = None, n_beta: int | None = None
) -> tuple[int, int]:
    """Explicit counts win; otherwise NELEC/MS2 from the integral header."""
    if n_alpha is not None and n_beta is not None:
        return int(n_alpha), int(n_beta)
    if H.n_electrons is None:
        raise ValueError("electron counts unknown: pass n_alpha/n_beta or set NELEC in the file")
    ms2 = H.ms2 or 0
    if (H.n_electrons + ms2) % 2:
        raise ValueError(f"NELEC={H.n_electrons} and MS2={ms2} have different parity")
    return (H.n_electrons + ms2) // 2, (H.n_electrons - ms2) // 2


# -----------------------------
# Active space
# -----------------------------
def default_ranking(n: int, n_occ: int) -> OverlapRanking:
    """Energetic order: occupied from the top of the block down, virtuals from the bottom up."""
    scores = {i: float(i + 1) for i in range(n_occ)}
    scores.update({a: float(n - a) for a in range(n_occ, n)})
    return ranking_from_scores(scores, list(range(n_occ)), None)


def select_active_space(
    H: ActiveSpaceHamiltonian,
    settings: SelectionSettings,
    *,
    budget: int,
    ranking: OverlapRanking | None = None,
    config: dict[str, Any],
) -> tuple[ActiveSpaceHamiltonian, int, int, dict[str, Any]]:
    """Projected Hamiltonian, active electron counts and the selection record."""
    n_occ = settings.n_occ
    if n_occ is None:
        n_alpha, n_beta = electron_counts(H)
        if n_alpha != n_beta:
            raise ValueError("active-space selection needs a closed-shell window")
        n_occ = n_alpha
    if ranking is None:
        ranking = default_ranking(H.n, n_occ)
    n_occ_select = settings.n_occ_select or config["selection"]["n_occ_select"]

    if settings.pipeline == DD:
        dd = build_dd_active_space(ranking, n_occ_select, H, budget, n_occ=n_occ)
        Hp = freeze_and_project(H, dd.space)
        return Hp, dd.space.n_alpha_active, dd.space.n_beta_active, dd.to_dict()

    selected = select_occupied(ranking, n_occ_select)
    no = build_no_active_space(
        H,
        selected,
        budget,
        n_occ=n_occ,
        max_determinants=config["casci"]["max_determinants"],
    )
    Hp = freeze_and_project(no.hamiltonian, no.space)
    return Hp, no.space.n_alpha_active, no.space.n_beta_active, no.to_dict()


# -----------------------------
# Solvers
# -----------------------------
def solve_hamiltonian(
    H: ActiveSpaceHamiltonian,
    method: str,
    *,
    n_alpha: int,
    n_beta: int,
    config: dict[str, Any],
    mapping: str = JORDAN_WIGNER,
    pool_size: int | None = None,
    optimizer: str | None = None,
    seed: int | None = None,
    shots: int | None = None,
    n_bitstrings: int | None = None,
    hop_layout: str = "chain",
) -> TaskResult:
    """
    Ground-state energy of H with one of casci / vqe_quccsd / vqe_qcc / ef.

    vqe_qcc and ef build their inputs from the CASCI ground state and need the
    Jordan-Wigner mapping; ef also needs n_alpha == n_beta.
    """
    max_det = config["casci"]["max_determinants"]
    props_cfg = config["properties"]

    if method == CASCI:
        psi = casci_ground_state(H, n_alpha, n_beta, max_determinants=max_det)
        return TaskResult(psi.energy, expectation_suite(psi).to_dict(), {"method": CASCI})

    resolved = resolve_mapping(mapping, n_alpha=n_alpha, n_beta=n_beta)
    if method in (VQE_QCC, EF) and resolved.kind != JORDAN_WIGNER:
        raise ValueError(f"{method} requires the jordan_wigner mapping, got {resolved.kind}")
    Hq = to_qubit_hamiltonian(H, resolved, tol=config["operators"]["drop_tol"])

    if method == VQE_QUCCSD:
        spec = QuccsdSpec(
            H.n,
            n_alpha,
            n_beta,
            complex_amplitudes=not H.gamma_point,
            trotter_steps=config["vqe"]["trotter_steps"],
            mapping=resolved.kind,
        )
        circuit = build_quccsd(spec)
        details: dict[str, Any] = {"method": VQE_QUCCSD, "n_params": circuit.n_params}
    elif method == VQE_QCC:
        if pool_size is None:
            raise ValueError("vqe_qcc needs a pool size")
        psi = casci_ground_state(H, n_alpha, n_beta, max_determinants=max_det)
        hf = reference_bitstring(H.n, n_alpha, n_beta, resolved)
        pool = build_qcc_pool(
            dominant_configurations(psi, psi.amplitudes.size), hf, gamma_point=H.gamma_point
        )
        m = min(pool_size, len(pool))
        circuit = build_qcc_ansatz(pool, m, hf)
        details = {"method": VQE_QCC, "pool_size": len(pool), "m": m}
    elif method == EF:
        if n_alpha != n_beta:
            raise ValueError("ef requires n_alpha == n_beta")
        psi = casci_ground_state(H, n_alpha, n_beta, max_determinants=max_det)
        k = n_bitstrings or config["forging"]["n_bitstrings"]
        bitstrings = ef_bitstrings_from_ci(psi, k)
        layout = resolve_hop_layout(hop_layout, H.n)
        ef = ef_optimize(
            Hq, bitstrings, layout, seed=seed, optimizer=optimizer or SPSA, config=config
        )
        return TaskResult(
            ef.energy,
            None,
            {
                "method": EF,
                "bitstrings": list(ef.bitstrings),
                "converged": bool(ef.converged),
                "iterations": ef.iterations,
            },
        )
    else:
        raise ValueError(f"unknown method: {method}")

    result = vqe_minimize(
        Hq, circuit, optimizer=optimizer, seed=seed, shots=shots, config=config
    )
    check = vqe_property_report(
        result,
        circuit,
        n_orb=H.n,
        n_alpha=n_alpha,
        n_beta=n_beta,
        mapping=resolved,
        warn_deviation=props_cfg["warn_deviation"],
        gate_deviation=props_cfg["gate_deviation"],
    )
    details.update(
        {
            "converged": bool(result.converged),
            "iterations": result.iterations,
            "max_property_deviation": float(check.max_deviation),
            "within_gate": bool(check.within_gate),
        }
    )
    return TaskResult(result.energy, check.properties.to_dict(), details)


def solve_task(
    ham_path: str | Path,
    *,
    kpoint: str,
    method: str,
    config: dict[str, Any],
    seed: int,
    n_alpha: int | None = None,
    n_beta: int | None = None,
    selection: SelectionSettings | None = None,
    budget: int | None = None,
    ranking_path: str | Path | None = None,
    **solver_options: Any,
) -> TaskResult:
    """Load, optionally select an active space, solve."""
    H = load_hamiltonian(ham_path, kpoint_label=kpoint)
    record = None
    if selection is not None:
        budget = budget or selection.budget
        if budget is None:
            raise ValueError("active-space selection needs a budget")
        ranking = read_ranking_csv(ranking_path) if ranking_path else None
        H, n_alpha, n_beta, record = select_active_space(
            H, selection, budget=budget, ranking=ranking, config=config
        )
    else:
        n_alpha, n_beta = electron_counts(H, n_alpha, n_beta)
    result = solve_hamiltonian(
        H, method, n_alpha=n_alpha, n_beta=n_beta, config=config, seed=seed, **solver_options
    )
    if record is not None:
        result.details["selection"] = record
    return result
