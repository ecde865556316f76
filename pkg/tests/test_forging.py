"""
Contract tests for qembed.forging.

Rules:
- With U built from the eigenvectors of the (symmetric) CI matrix, the forged
  energy equals CASCI exactly
- Without hops, the forged energy is CI restricted to the (x, x) determinants
- λ is the lowest eigenvector of the Hermitized effective matrix, real when M is real
- The optimizer only moves hop angles and returns the best energy seen
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from conftest import h2_hamiltonian, random_hamiltonian
from qembed.exact.casci import casci_ground_state, restricted_ci_energy
from qembed.exact.strings import mask_to_bits
from qembed.forging import (
    EfAnsatz,
    EfProblem,
    ef_bitstrings_from_ci,
    ef_effective_matrix,
    ef_energy,
    ef_optimize,
    load_ef_problem,
    parse_ef_problem,
    resolve_hop_layout,
    save_ef_problem,
    schmidt_gap_report,
    solve_schmidt_coefficients,
    split_hamiltonian,
)
from qembed.hamiltonian.qubit import to_qubit_hamiltonian
from qembed.operators.pauli import PauliSum
from qembed.vqe.optimizers import QUASI_NEWTON, SpsaSettings


# ---------------------------------------------------------------------------
# Energies
# ---------------------------------------------------------------------------

def test_h2_forging_matches_casci() -> None:
    H = h2_hamiltonian()
    result = ef_optimize(
        to_qubit_hamiltonian(H), ["10", "01"], [(0, 1)], optimizer=QUASI_NEWTON
    )
    assert result.energy == pytest.approx(casci_ground_state(H, 1, 1).energy, abs=1e-6)
    assert result.schmidt_coeffs.shape == (2,)
    assert np.linalg.norm(result.schmidt_coeffs) == pytest.approx(1.0)


def test_eigenvector_unitary_reproduces_casci() -> None:
    H = random_hamiltonian(3, seed=17, real=True)
    psi = casci_ground_state(H, 1, 1)
    C = psi.amplitudes.real
    np.testing.assert_allclose(C, C.T, atol=1e-10)
    _, O = np.linalg.eigh(C)

    masks = [int(m) for m in psi.alpha.strings]
    U = np.eye(8)
    for j, mj in enumerate(masks):
        column = np.zeros(8)
        for i, mi in enumerate(masks):
            column[mi] = O[i, j]
        U[:, mj] = column

    ansatz = EfAnsatz(3, tuple(mask_to_bits(m, 3) for m in masks), unitary=U)
    assert ansatz.n_angles == 0
    energy, lam, M = ef_energy(to_qubit_hamiltonian(H), ansatz)
    assert energy == pytest.approx(psi.energy, abs=1e-6)
    assert M.shape == (3, 3)
    assert np.isrealobj(lam)


def test_no_hops_is_restricted_ci() -> None:
    H = random_hamiltonian(3, seed=18, real=True)
    masks = [0b001, 0b010, 0b100]
    ansatz = EfAnsatz(3, tuple(mask_to_bits(m, 3) for m in masks))
    energy, _, _ = ef_energy(to_qubit_hamiltonian(H), ansatz)
    expected = restricted_ci_energy(H, 1, 1, [(m, m) for m in masks])
    assert energy == pytest.approx(expected, abs=1e-10)


def test_spsa_optimization_is_seeded_and_never_worse_than_start() -> None:
    H = random_hamiltonian(3, seed=19, real=True)
    Hq = to_qubit_hamiltonian(H)
    bits = ["100", "010"]
    layout = [(0, 1), (1, 2)]
    start, _, _ = ef_energy(Hq, EfAnsatz(3, tuple(bits), tuple(layout)), [0.0, 0.0])
    settings = SpsaSettings(max_iter=30)
    first = ef_optimize(Hq, bits, layout, spsa=settings, seed=5)
    second = ef_optimize(Hq, bits, layout, spsa=settings, seed=5)
    assert first.energy <= start + 1e-12
    assert first.energy == second.energy
    np.testing.assert_array_equal(first.angles, second.angles)
    assert first.to_dict()["hop_layout"] == [[0, 1], [1, 2]]


def test_init_length_checked() -> None:
    Hq = to_qubit_hamiltonian(h2_hamiltonian())
    with pytest.raises(ValueError, match="hop gates"):
        ef_optimize(Hq, ["10", "01"], [(0, 1)], init=[0.1, 0.2])


# ---------------------------------------------------------------------------
# Effective matrix and λ
# ---------------------------------------------------------------------------

def test_split_requires_even_qubit_count() -> None:
    with pytest.raises(ValueError, match="even qubit count"):
        split_hamiltonian(PauliSum.identity(3))


def test_split_cuts_each_string_at_the_half() -> None:
    H = PauliSum.from_list([("XYZI", 0.5), ("IIZZ", -1.0)])
    parts = {(a.label, b.label): w for w, a, b in split_hamiltonian(H)}
    assert parts == {("XY", "ZI"): 0.5, ("II", "ZZ"): -1.0}


def test_effective_matrix_is_hermitian_and_size_checked() -> None:
    H = random_hamiltonian(2, seed=3, real=False)
    Hq = to_qubit_hamiltonian(H)
    ansatz = EfAnsatz(2, ("10", "01"), ((0, 1),))
    M = ef_effective_matrix(Hq, ansatz, [0.4])
    np.testing.assert_allclose(M, M.conj().T, atol=1e-14)
    with pytest.raises(ValueError, match="ansatz covers"):
        ef_effective_matrix(Hq, EfAnsatz(3, ("100",)))


def test_schmidt_coefficients_real_for_real_matrix() -> None:
    M = np.array([[1.0, 0.2], [0.2, -0.5]])
    lam, energy = solve_schmidt_coefficients(M)
    assert energy == pytest.approx(np.linalg.eigvalsh(M)[0])
    assert np.isrealobj(lam)
    assert lam[np.argmax(np.abs(lam))] > 0
    np.testing.assert_allclose(M @ lam, energy * lam, atol=1e-12)


def test_schmidt_coefficients_may_be_complex() -> None:
    M = np.array([[0.0, 0.5j], [-0.5j, 0.0]])
    lam, energy = solve_schmidt_coefficients(M)
    assert energy == pytest.approx(-0.5)
    assert np.iscomplexobj(lam)
    np.testing.assert_allclose(M @ lam, energy * lam, atol=1e-12)


def test_schmidt_coefficients_reject_non_hermitian() -> None:
    with pytest.raises(ValueError, match="Hermitian"):
        solve_schmidt_coefficients(np.array([[0.0, 1.0], [0.0, 0.0]]))


# ---------------------------------------------------------------------------
# Ansatz validation and inputs
# ---------------------------------------------------------------------------

def test_ansatz_validation() -> None:
    with pytest.raises(ValueError, match="distinct"):
        EfAnsatz(2, ("10", "10"))
    with pytest.raises(ValueError, match="2-qubit bitstring"):
        EfAnsatz(2, ("101",))
    with pytest.raises(ValueError, match="hop pair"):
        EfAnsatz(2, ("10",), ((0, 2),))


def test_resolve_hop_layout() -> None:
    assert resolve_hop_layout("chain", 3) == [(0, 1), (1, 2)]
    assert resolve_hop_layout("none", 3) == []
    assert resolve_hop_layout("0 2, 1 2", 3) == [(0, 2), (1, 2)]
    with pytest.raises(ValueError, match="even number"):
        resolve_hop_layout("0 1 2", 3)


def test_problem_file_round_trip(tmp_path: Path) -> None:
    problem = parse_ef_problem("# forged H2\n2 2\n10\n01\nHOPS 0 1\n")
    assert problem == EfProblem(2, ("10", "01"), ((0, 1),))
    save_ef_problem(problem, tmp_path / "ef.txt")
    assert load_ef_problem(tmp_path / "ef.txt") == problem


def test_problem_file_errors() -> None:
    with pytest.raises(ValueError, match="empty"):
        parse_ef_problem("\n# nothing\n")
    with pytest.raises(ValueError, match="expected 3 bitstring lines"):
        parse_ef_problem("2 3\n10\n01\n")
    with pytest.raises(ValueError, match="unrecognized line"):
        parse_ef_problem("2 1\n10\nLAYERS 2\n")


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------

def test_schmidt_gap_fidelities_are_monotone() -> None:
    psi = casci_ground_state(random_hamiltonian(4, seed=20, real=True), 2, 2)
    report = schmidt_gap_report(psi, (1, 2, 4, 100))
    f = report.fidelities
    assert f[1] <= f[2] <= f[4] <= f[100]
    assert f[4] >= 0.99
    assert f[100] == pytest.approx(1.0, abs=1e-10)
    assert list(report.to_dict()["fidelities"]) == ["1", "2", "4", "100"]


def test_bitstrings_from_ci_start_with_reference() -> None:
    psi = casci_ground_state(random_hamiltonian(4, seed=22, real=True), 2, 2)
    bits = ef_bitstrings_from_ci(psi, 3)
    assert bits[0] == "1100"
    assert len(bits) == len(set(bits)) == 3
    assert all(b.count("1") == 2 for b in bits)
