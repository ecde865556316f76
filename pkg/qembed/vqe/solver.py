"""
qembed.vqe.solver
AUTHOR: carter-vin

Variational minimization of <ψ(θ)|H|ψ(θ)> and the symmetry report at the optimum.

The reported energy is always the exact expectation at the returned parameters;
sampling (shots > 0) only feeds the optimizer.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Any, Sequence

import numpy as np

from qembed.config import _DEFAULTS, normalize_config
from qembed.exact.casci import Properties
from qembed.hamiltonian.qubit import qubit_observable
from qembed.logging import emit_event
from qembed.operators.mapping import Mapping, resolve_mapping
from qembed.operators.pauli import PauliSum
from qembed.sim.circuit import Circuit
from qembed.sim.statevector import expectation_value, sampled_expectation
from qembed.vqe.ansatz import QccPool, build_qcc_ansatz
from qembed.vqe.optimizers import QUASI_NEWTON, SPSA, SpsaSettings, minimize


@dataclass(frozen=True, eq=False)
class VqeResult:
    energy: float
    parameters: np.ndarray
    iterations: int
    evaluations: int
    converged: bool
    optimizer: str
    trace: list[float] = field(default_factory=list)
    properties: Properties | None = None
    message: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "energy": self.energy,
            "parameters": [float(x) for x in self.parameters],
            "iterations": self.iterations,
            "evaluations": self.evaluations,
            "converged": self.converged,
            "optimizer": self.optimizer,
            "trace": [float(x) for x in self.trace],
            "properties": self.properties.to_dict() if self.properties else None,
            "message": self.message,
        }


def vqe_minimize(
    H: PauliSum,
    circuit: Circuit,
    *,
    optimizer: str | None = None,
    init: Sequence[float] | None = None,
    tol: float | None = None,
    max_iter: int | None = None,
    seed: int | None = None,
    shots: int | None = None,
    gradient: str = "adjoint",
    config: dict[str, Any] | None = None,
) -> VqeResult:
    """
    Minimize the circuit energy; unset options come from the `vqe` / `spsa` config sections.

    Raises ValueError when H is not Hermitian or sizes disagree.
    """
    cfg = normalize_config(config or {})
    vqe_cfg = cfg["vqe"]
    optimizer = optimizer or vqe_cfg["optimizer"]
    tol = vqe_cfg["tol"] if tol is None else tol
    # SPSA without an explicit cap runs spsa.max_iter iterations
    if max_iter is None and optimizer != SPSA:
        max_iter = vqe_cfg["max_iter"]
    seed = vqe_cfg["seed"] if seed is None else seed
    shots = vqe_cfg["shots"] if shots is None else shots

    if H.n != circuit.n:
        raise ValueError(f"Hamiltonian has {H.n} qubits, circuit has {circuit.n}")
    if not H.is_hermitian(tol=1e-10):
        raise ValueError("vqe_minimize requires a Hermitian Hamiltonian")
    x0 = np.zeros(circuit.n_params) if init is None else np.asarray(init, dtype=float)
    if x0.shape != (circuit.n_params,):
        raise ValueError(f"init has {x0.size} values, circuit has {circuit.n_params} parameters")

    def exact(x: np.ndarray) -> float:
        return expectation_value(circuit.run(x), H)

    if shots and shots > 0:
        counter = itertools.count()

        def objective(x: np.ndarray) -> float:
            estimate, _ = sampled_expectation(circuit.run(x), H, shots, seed + next(counter))
            return estimate
    else:
        objective = exact

    def jac(x: np.ndarray) -> np.ndarray:
        return circuit.gradient(H, x, method=gradient)

    outcome = minimize(
        objective,
        x0,
        method=optimizer,
        jac=jac if optimizer == QUASI_NEWTON else None,
        tol=tol,
        max_iter=max_iter,
        seed=seed,
        spsa=SpsaSettings.from_config(cfg) if optimizer == SPSA else None,
    )
    energy = exact(outcome.x)
    emit_event(
        "optimizer_finished",
        optimizer=optimizer,
        energy=energy,
        iterations=outcome.iterations,
        evaluations=outcome.evaluations,
        converged=outcome.converged,
        n_params=circuit.n_params,
    )
    return VqeResult(
        energy=energy,
        parameters=outcome.x,
        iterations=outcome.iterations,
        evaluations=outcome.evaluations,
        converged=outcome.converged,
        optimizer=optimizer,
        trace=list(outcome.trace),
        message=outcome.message,
    )


# -----------------------------
# Symmetry report
# -----------------------------
@dataclass(frozen=True)
class PropertyCheck:
    properties: Properties
    targets: Properties
    max_deviation: float
    within_gate: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "properties": self.properties.to_dict(),
            "targets": self.targets.to_dict(),
            "max_deviation": self.max_deviation,
            "within_gate": self.within_gate,
        }


def target_properties(n_alpha: int, n_beta: int) -> Properties:
    """High-spin targets: S = |Sz|."""
    sz = 0.5 * (n_alpha - n_beta)
    s = abs(sz)
    return Properties(n=float(n_alpha + n_beta), sz=sz, s2=s * (s + 1.0))


def vqe_property_report(
    result: VqeResult,
    circuit: Circuit,
    *,
    n_orb: int,
    n_alpha: int,
    n_beta: int,
    mapping: str | Mapping = "jordan_wigner",
    warn_deviation: float = _DEFAULTS["properties"]["warn_deviation"],
    gate_deviation: float = _DEFAULTS["properties"]["gate_deviation"],
) -> PropertyCheck:
    """<N>, <Sz>, <S^2> at the optimum; deviations above warn_deviation become events."""
    resolved = resolve_mapping(mapping, n_alpha=n_alpha, n_beta=n_beta)
    psi = circuit.run(result.parameters)
    values = {
        kind: expectation_value(
            psi, qubit_observable(kind, n_orb, resolved, n_alpha=n_alpha, n_beta=n_beta)
        )
        for kind in ("N", "Sz", "S2")
    }
    props = Properties(n=values["N"], sz=values["Sz"], s2=values["S2"])
    targets = target_properties(n_alpha, n_beta)
    deviations = {
        "N": abs(props.n - targets.n),
        "Sz": abs(props.sz - targets.sz),
        "S2": abs(props.s2 - targets.s2),
    }
    for name, dev in sorted(deviations.items()):
        if dev > warn_deviation:
            emit_event(
                "property_deviation",
                observable=name,
                deviation=dev,
                gate=gate_deviation,
                message=f"{name} deviates from its target by {dev:.3e}",
            )
    worst = max(deviations.values())
    return PropertyCheck(props, targets, worst, worst <= gate_deviation)


def with_properties(result: VqeResult, check: PropertyCheck) -> VqeResult:
    return replace(result, properties=check.properties)


# -----------------------------
# QCC scan
# -----------------------------
def qcc_energy_scan(
    H: PauliSum,
    pool: QccPool,
    hf: str,
    m_values: Sequence[int],
    **options: Any,
) -> list[tuple[int, VqeResult]]:
    """
    Optimize QCC for each m in ascending order, warm-starting from the previous
    optimum padded with zeros, so energies are non-increasing in m.
    """
    m_values = list(m_values)
    if m_values != sorted(m_values):
        raise ValueError("m_values must be ascending")
    options.pop("init", None)
    out: list[tuple[int, VqeResult]] = []
    previous = np.zeros(0)
    for m in m_values:
        circuit = build_qcc_ansatz(pool, m, hf)
        init = np.concatenate([previous[:m], np.zeros(max(m - previous.size, 0))])
        result = vqe_minimize(H, circuit, init=init, **options)
        # the warm start itself is a candidate
        start_energy = circuit.energy(H, init)
        if start_energy < result.energy:
            result = replace(result, energy=start_energy, parameters=init)
        out.append((m, result))
        previous = np.asarray(result.parameters, dtype=float)
    return out
