"""
qembed.forging
AUTHOR: carter-vin

Entanglement forging with U = V.

A 2N-qubit state (block spin ordering, alpha qubits [0, N), beta [N, 2N)) is
    |ψ> = Σ_x λ_x U|x>_A ⊗ U|x>_B
for k distinct half-system bitstrings x. With H = Σ w P_a ⊗ P_b,
    E = λ† M λ,  M[y, x] = Σ w <Uy|P_a|Ux> <Uy|P_b|Ux>
so λ is the lowest eigenvector of M and only the hop angles of U are optimized.

Problem file:
    2 2
    10
    01
    HOPS 0 1
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from qembed.config import normalize_config
from qembed.exact.casci import (
    CIWavefunction,
    SchmidtSpectrum,
    dominant_configurations,
    schmidt_decompose,
)
from qembed.logging import emit_event
from qembed.operators.pauli import PauliString, PauliSum
from qembed.sim.circuit import chain_layout, hop_circuit
from qembed.sim.statevector import prepare_reference
from qembed.vqe.optimizers import SPSA, SpsaSettings, minimize

HERMITICITY_TOL = 1e-10
PHASE_TOL = 1e-10

Term = tuple[complex, PauliString, PauliString]


# -----------------------------
# Ansatz
# -----------------------------
@dataclass(frozen=True)
class EfAnsatz:
    """
    Bitstrings and the shared hop layout of U (= V).

    unitary: optional dense N-qubit matrix replacing the hop circuit.
    """

    n_half: int
    bitstrings: tuple[str, ...]
    hop_layout: tuple[tuple[int, int], ...] = ()
    unitary: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "bitstrings", tuple(self.bitstrings))
        object.__setattr__(self, "hop_layout", tuple(tuple(p) for p in self.hop_layout))
        if not self.bitstrings:
            raise ValueError("at least one bitstring is required")
        if len(set(self.bitstrings)) != len(self.bitstrings):
            raise ValueError("bitstrings must be distinct")
        for bits in self.bitstrings:
            if len(bits) != self.n_half or any(b not in "01" for b in bits):
                raise ValueError(f"bitstring {bits!r} is not a {self.n_half}-qubit bitstring")
        for a, b in self.hop_layout:
            if not (0 <= a < self.n_half and 0 <= b < self.n_half) or a == b:
                raise ValueError(f"hop pair ({a}, {b}) invalid for {self.n_half} qubits")
        if self.unitary is not None:
            dim = 1 << self.n_half
            if np.shape(self.unitary) != (dim, dim):
                raise ValueError(f"unitary must be {dim}x{dim}")

    @property
    def k(self) -> int:
        return len(self.bitstrings)

    @property
    def n_angles(self) -> int:
        return 0 if self.unitary is not None else len(self.hop_layout)

    def states(self, angles: Sequence[float] = ()) -> list[np.ndarray]:
        """U|x> for every bitstring, as dense N-qubit amplitude vectors."""
        if self.unitary is not None:
            U = np.asarray(self.unitary, dtype=complex)
            return [U @ prepare_reference(bits).amplitudes for bits in self.bitstrings]
        out = []
        for bits in self.bitstrings:
            circuit = hop_circuit(self.n_half, self.hop_layout, bits)
            out.append(circuit.run(np.asarray(angles, dtype=float)).amplitudes)
        return out


def split_hamiltonian(H: PauliSum) -> list[Term]:
    """H on 2N qubits → [(w, P_a on A, P_b on B)]."""
    if H.n % 2:
        raise ValueError(f"forging needs an even qubit count, got {H.n}")
    n_half = H.n // 2
    terms = []
    for string in sorted(H.terms, key=lambda s: s.label):
        left, right = string.split(n_half)
        terms.append((H.terms[string], left, right))
    return terms


def _transition_matrix(P: PauliString, states: list[np.ndarray]) -> np.ndarray:
    """A[y, x] = <U y|P|U x>."""
    S = np.column_stack(states)
    return S.conj().T @ np.column_stack([P.apply(s) for s in states])


def ef_effective_matrix(
    H: PauliSum, ansatz: EfAnsatz, angles: Sequence[float] = ()
) -> np.ndarray:
    """Hermitized k x k matrix; the raw anti-Hermitian residual is logged when nonzero."""
    if H.n != 2 * ansatz.n_half:
        raise ValueError(f"Hamiltonian has {H.n} qubits, ansatz covers {2 * ansatz.n_half}")
    states = ansatz.states(angles)
    cache: dict[PauliString, np.ndarray] = {}

    def block(P: PauliString) -> np.ndarray:
        if P not in cache:
            cache[P] = _transition_matrix(P, states)
        return cache[P]

    M = np.zeros((ansatz.k, ansatz.k), dtype=complex)
    for w, Pa, Pb in split_hamiltonian(H):
        M += w * block(Pa) * block(Pb)
    residual = float(np.max(np.abs(M - M.conj().T))) / 2.0
    if residual > HERMITICITY_TOL:
        emit_event(
            "hermiticity_residual",
            residual=residual,
            k=ansatz.k,
            message="effective forging matrix was not Hermitian before symmetrization",
        )
    return 0.5 * (M + M.conj().T)


def solve_schmidt_coefficients(M: np.ndarray) -> tuple[np.ndarray, float]:
    """
    Lowest eigenpair of M. λ is scaled so its largest component is real and
    positive; it stays real when M is real.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("M must be square")
    if np.max(np.abs(M - M.conj().T), initial=0.0) > 1e-8:
        raise ValueError("M must be Hermitian")
    if np.max(np.abs(M.imag), initial=0.0) < 1e-14:
        vals, vecs = np.linalg.eigh(M.real)
        lam = vecs[:, 0]
    else:
        vals, vecs = np.linalg.eigh(M)
        lam = vecs[:, 0]
    pivot = int(np.argmax(np.abs(lam)))
    lam = lam * (abs(lam[pivot]) / lam[pivot])
    if np.iscomplexobj(lam):
        if np.max(np.abs(lam.imag)) > PHASE_TOL:
            emit_event(
                "schmidt_phase_complex",
                max_imag=float(np.max(np.abs(lam.imag))),
                message="Schmidt coefficients carry relative complex phases",
            )
        else:
            lam = lam.real
    return lam, float(vals[0])


def ef_energy(
    H: PauliSum, ansatz: EfAnsatz, angles: Sequence[float] = ()
) -> tuple[float, np.ndarray, np.ndarray]:
    """(energy, λ, M) at the given angles."""
    M = ef_effective_matrix(H, ansatz, angles)
    lam, energy = solve_schmidt_coefficients(M)
    return energy, lam, M


# -----------------------------
# Optimization
# -----------------------------
@dataclass(frozen=True, eq=False)
class EfResult:
    energy: float
    angles: np.ndarray
    schmidt_coeffs: np.ndarray
    matrix: np.ndarray
    bitstrings: tuple[str, ...]
    hop_layout: tuple[tuple[int, int], ...]
    iterations: int
    evaluations: int
    converged: bool
    optimizer: str
    trace: list[float] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        lam = np.asarray(self.schmidt_coeffs)
        return {
            "energy": self.energy,
            "angles": [float(x) for x in self.angles],
            "schmidt_coeffs": [float(x) for x in lam.real],
            "schmidt_coeffs_imag": [float(x) for x in np.imag(lam)],
            "bitstrings": list(self.bitstrings),
            "hop_layout": [list(p) for p in self.hop_layout],
            "iterations": self.iterations,
            "evaluations": self.evaluations,
            "converged": self.converged,
            "optimizer": self.optimizer,
            "trace": [float(x) for x in self.trace],
        }


def ef_optimize(
    H: PauliSum,
    bitstrings: Sequence[str],
    hop_layout: Sequence[tuple[int, int]],
    *,
    spsa: SpsaSettings | None = None,
    seed: int | None = None,
    init: Sequence[float] | None = None,
    optimizer: str = SPSA,
    tol: float | None = None,
    config: dict[str, Any] | None = None,
) -> EfResult:
    """
    Optimize the hop angles with λ solved exactly at every evaluation.

    Angles start at zero unless `init` is given; the best point seen is returned.
    """
    cfg = normalize_config(config or {})
    if not bitstrings:
        raise ValueError("at least one bitstring is required")
    ansatz = EfAnsatz(len(bitstrings[0]), tuple(bitstrings), tuple(hop_layout))
    settings = spsa or SpsaSettings.from_config(cfg)
    seed = cfg["vqe"]["seed"] if seed is None else seed
    tol = cfg["vqe"]["tol"] if tol is None else tol
    x0 = np.zeros(ansatz.n_angles) if init is None else np.asarray(init, dtype=float)
    if x0.shape != (ansatz.n_angles,):
        raise ValueError(f"init has {x0.size} values, layout has {ansatz.n_angles} hop gates")

    def objective(x: np.ndarray) -> float:
        return ef_energy(H, ansatz, x)[0]

    outcome = minimize(
        objective,
        x0,
        method=optimizer,
        tol=tol,
        max_iter=settings.max_iter,
        seed=seed,
        spsa=settings,
    )
    energy, lam, M = ef_energy(H, ansatz, outcome.x)
    emit_event(
        "optimizer_finished",
        optimizer=optimizer,
        energy=energy,
        iterations=outcome.iterations,
        evaluations=outcome.evaluations,
        converged=outcome.converged,
        n_params=ansatz.n_angles,
        k=ansatz.k,
    )
    return EfResult(
        energy=energy,
        angles=outcome.x,
        schmidt_coeffs=lam,
        matrix=M,
        bitstrings=ansatz.bitstrings,
        hop_layout=ansatz.hop_layout,
        iterations=outcome.iterations,
        evaluations=outcome.evaluations,
        converged=outcome.converged,
        optimizer=optimizer,
        trace=list(outcome.trace),
    )


# -----------------------------
# Diagnostics and inputs
# -----------------------------
@dataclass(frozen=True, eq=False)
class SchmidtGapReport:
    spectrum: SchmidtSpectrum
    fidelities: dict[int, float]

    def to_dict(self) -> dict[str, Any]:
        return {
            "singular_values": [float(s) for s in self.spectrum.singular_values],
            "fidelities": {str(k): v for k, v in sorted(self.fidelities.items())},
        }


def schmidt_gap_report(psi: CIWavefunction, ks: Sequence[int] = (1, 2, 4)) -> SchmidtGapReport:
    """Spectrum plus rank-k truncation fidelity Σ_{x<k} σ_x² for each k."""
    spectrum = schmidt_decompose(psi)
    weights = np.cumsum(spectrum.singular_values**2)
    fidelities = {}
    for k in ks:
        if k < 1:
            raise ValueError("k must be >= 1")
        fidelities[int(k)] = float(weights[min(k, len(weights)) - 1])
    return SchmidtGapReport(spectrum, fidelities)


def ef_bitstrings_from_ci(psi: CIWavefunction, k: int) -> list[str]:
    """Top-k distinct alpha strings by determinant weight; the Hartree-Fock string comes first."""
    if k < 1:
        raise ValueError("k must be >= 1")
    hf = "1" * psi.n_alpha + "0" * (psi.n_orb - psi.n_alpha)
    out = [hf]
    total = psi.amplitudes.size
    for alpha, _, _ in dominant_configurations(psi, total):
        if len(out) >= k:
            break
        if alpha not in out:
            out.append(alpha)
    return out


def resolve_hop_layout(spec: str, n_half: int) -> list[tuple[int, int]]:
    """`chain`, `none`, or a flat list of qubit indices taken pairwise ("0 1 1 2")."""
    text = spec.strip().lower()
    if text == "chain":
        return chain_layout(n_half)
    if text in ("", "none"):
        return []
    values = [int(v) for v in text.replace(",", " ").split()]
    if len(values) % 2:
        raise ValueError(f"hop layout needs an even number of qubit indices: {spec!r}")
    return [(values[i], values[i + 1]) for i in range(0, len(values), 2)]


@dataclass(frozen=True)
class EfProblem:
    n_half: int
    bitstrings: tuple[str, ...]
    hop_layout: tuple[tuple[int, int], ...]

    def ansatz(self) -> EfAnsatz:
        return EfAnsatz(self.n_half, self.bitstrings, self.hop_layout)


def parse_ef_problem(text: str) -> EfProblem:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty forging problem")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError(f"line 1 must be `N k`, got {lines[0]!r}")
    n_half, k = int(head[0]), int(head[1])
    if len(lines) < 1 + k:
        raise ValueError(f"expected {k} bitstring lines")
    bitstrings = tuple(lines[1 : 1 + k])
    layout: list[tuple[int, int]] = []
    for line in lines[1 + k :]:
        fields = line.split()
        if fields[0].upper() != "HOPS":
            raise ValueError(f"unrecognized line: {line!r}")
        layout.extend(resolve_hop_layout(" ".join(fields[1:]), n_half))
    problem = EfProblem(n_half, bitstrings, tuple(layout))
    problem.ansatz()
    return problem


def load_ef_problem(path: str | Path) -> EfProblem:
    return parse_ef_problem(Path(path).read_text(encoding="utf-8"))


def format_ef_problem(problem: EfProblem) -> str:
    hops = " ".join(f"{a} {b}" for a, b in problem.hop_layout)
    lines = [
        f"{problem.n_half} {len(problem.bitstrings)}",
        *problem.bitstrings,
        f"HOPS {hops}".rstrip(),
    ]
    return "\n".join(lines) + "\n"


def save_ef_problem(problem: EfProblem, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_ef_problem(problem), encoding="utf-8")
