"""
Contract tests for qembed.sim.statevector and qembed.sim.circuit.

Rules:
- exp(iθP) matches the dense matrix exponential
- The hop gate has the documented 4x4 form; FixedHop, Hop and apply_hop agree
- Gates never mutate their input state
- Shift-rule, adjoint and finite-difference gradients agree
- Sampled expectations are seeded, unbiased, and exact for diagonal observables
- The qubit cap raises DimensionLimitError
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest
import scipy.linalg

from qembed.errors import DimensionLimitError
from qembed.operators.pauli import PauliString, PauliSum
from qembed.sim.circuit import (
    Circuit,
    FixedHop,
    Hop,
    PauliExp,
    PrepareBitstring,
    chain_layout,
    hop_circuit,
)
from qembed.sim.statevector import (
    Statevector,
    apply_hop,
    apply_pauli_exp,
    expectation,
    expectation_value,
    prepare_reference,
    qubitwise_groups,
    sampled_expectation,
    transition_element,
)


def _random_state(n: int, seed: int) -> Statevector:
    rng = np.random.default_rng(seed)
    amps = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    return Statevector(amps / np.linalg.norm(amps), n)


def _random_observable(n: int, seed: int, n_terms: int = 8) -> PauliSum:
    rng = np.random.default_rng(seed)
    labels = ["".join(rng.choice(list("IXYZ"), size=n)) for _ in range(n_terms)]
    return PauliSum.from_list([(lab, float(rng.normal())) for lab in labels])


def _finite_difference(circuit: Circuit, H: PauliSum, x: np.ndarray, step: float = 1e-5):
    grad = np.zeros_like(x)
    for k in range(len(x)):
        e = np.zeros_like(x)
        e[k] = step
        grad[k] = (circuit.energy(H, x + e) - circuit.energy(H, x - e)) / (2 * step)
    return grad


# ---------------------------------------------------------------------------
# States and gates
# ---------------------------------------------------------------------------

def test_reference_state_puts_qubit_zero_leftmost() -> None:
    psi = prepare_reference("100")
    assert psi.amplitudes[1] == 1.0
    assert prepare_reference("001").amplitudes[4] == 1.0


def test_invalid_bitstring_rejected() -> None:
    with pytest.raises(ValueError, match="invalid bitstring"):
        prepare_reference("10a")


def test_qubit_cap_raises() -> None:
    with pytest.raises(DimensionLimitError, match="exceeds statevector limit"):
        prepare_reference("0" * 5, max_qubits=4)


@pytest.mark.parametrize("label", ["X", "YZ", "XIY", "ZZX"])
def test_pauli_exp_matches_expm(label: str) -> None:
    P = PauliString.from_label(label)
    psi = _random_state(P.n, 1)
    theta = 0.37
    expected = scipy.linalg.expm(1j * theta * P.to_matrix().toarray()) @ psi.amplitudes
    np.testing.assert_allclose(apply_pauli_exp(psi, P, theta).amplitudes, expected, atol=1e-12)


def test_gates_do_not_mutate_input() -> None:
    psi = _random_state(2, 2)
    before = psi.amplitudes.copy()
    apply_hop(psi, (0, 1), 0.4)
    apply_pauli_exp(psi, PauliString.from_label("XY"), 0.2)
    np.testing.assert_array_equal(psi.amplitudes, before)
    assert psi.amplitudes.flags.writeable is False


def test_hop_gate_matrix() -> None:
    phi = 0.61
    c, s = np.cos(phi), np.sin(phi)
    expected = np.array(
        [[1, 0, 0, 0], [0, c, -s, 0], [0, s, c, 0], [0, 0, 0, -1]], dtype=complex
    )
    columns = [apply_hop(Statevector(np.eye(4)[k], 2), (0, 1), phi).amplitudes for k in range(4)]
    np.testing.assert_allclose(np.array(columns).T, expected, atol=1e-14)


def test_decomposed_hop_matches_direct_hop() -> None:
    psi = _random_state(3, 3)
    phi = -1.1
    circuit = Circuit(3, (FixedHop(phi, 2, 0),))
    direct = apply_hop(psi, (2, 0), phi)
    np.testing.assert_allclose(circuit.run(initial=psi).amplitudes, direct.amplitudes, atol=1e-12)
    param = Circuit(3, (Hop(0, 2, 0),)).run([phi], initial=psi)
    np.testing.assert_allclose(param.amplitudes, direct.amplitudes, atol=1e-12)


def test_hop_conserves_excitation_number() -> None:
    out = apply_hop(prepare_reference("1000"), (0, 1), 0.3)
    weights = out.probabilities()
    assert weights[0b0001] + weights[0b0010] == pytest.approx(1.0)


def test_hop_rejects_repeated_qubit() -> None:
    with pytest.raises(ValueError, match="two distinct qubits"):
        apply_hop(prepare_reference("10"), (1, 1), 0.3)


# ---------------------------------------------------------------------------
# Expectations
# ---------------------------------------------------------------------------

def test_expectation_and_transition_element() -> None:
    psi, phi = _random_state(3, 4), _random_state(3, 5)
    O = _random_observable(3, 6)
    dense = O.to_dense()
    assert expectation(psi, O) == pytest.approx(np.vdot(psi.amplitudes, dense @ psi.amplitudes))
    assert transition_element(phi, psi, O) == pytest.approx(
        np.vdot(phi.amplitudes, dense @ psi.amplitudes)
    )
    assert isinstance(expectation_value(psi, O), float)


def test_qubitwise_groups_cover_and_commute() -> None:
    O = _random_observable(4, 7, n_terms=12)
    groups = qubitwise_groups(O)
    flat = [s for g in groups for s in g]
    assert sorted(s.label for s in flat) == sorted(
        s.label for s in O.terms if not s.is_identity()
    )
    for group in groups:
        assert all(a.qubitwise_commutes(b) for a in group for b in group)


def test_sampling_is_exact_for_diagonal_observable_on_basis_state() -> None:
    O = PauliSum.from_list([("ZI", 0.5), ("IZ", -0.25), ("ZZ", 1.0), ("II", 0.1)])
    estimate, stderr = sampled_expectation(prepare_reference("10"), O, 100, seed=1)
    assert estimate == pytest.approx(-0.5 - 0.25 - 1.0 + 0.1)
    assert stderr == pytest.approx(0.0, abs=1e-6)


def test_sampling_is_seeded_and_unbiased() -> None:
    psi = _random_state(3, 8)
    O = _random_observable(3, 9)
    first = sampled_expectation(psi, O, 20000, seed=42)
    assert sampled_expectation(psi, O, 20000, seed=42) == first
    estimate, stderr = first
    assert stderr > 0
    assert abs(estimate - expectation_value(psi, O)) < 6 * stderr


def test_sampling_rejects_non_hermitian_and_zero_shots() -> None:
    psi = _random_state(1, 0)
    with pytest.raises(ValueError, match="Hermitian"):
        sampled_expectation(psi, PauliSum.from_list([("X", 1j)]), 10, seed=0)
    with pytest.raises(ValueError, match="shots"):
        sampled_expectation(psi, PauliSum.from_list([("X", 1.0)]), 0, seed=0)


# ---------------------------------------------------------------------------
# Circuits
# ---------------------------------------------------------------------------

def test_parameter_indices_must_be_dense() -> None:
    with pytest.raises(ValueError, match="not dense"):
        Circuit(2, (Hop(1, 0, 1),))


def test_parameter_count_checked_on_run() -> None:
    with pytest.raises(ValueError, match="expected 1 parameters"):
        hop_circuit(2, [(0, 1)], "10").run([0.1, 0.2])


def test_text_form_round_trip(tmp_path: Path) -> None:
    circuit = Circuit(
        4,
        (
            PrepareBitstring("1100"),
            PauliExp(PauliString.from_label("YXII"), 0),
            PauliExp(PauliString.from_label("XXXY"), 1, -0.5),
            Hop(2, 1, 2),
            FixedHop(0.25, 2, 3),
        ),
    )
    circuit.save(tmp_path / "c.txt")
    loaded = Circuit.load(tmp_path / "c.txt")
    assert loaded == circuit
    assert loaded.n_params == 3


def test_text_form_error_has_line_number() -> None:
    with pytest.raises(ValueError, match="line 2"):
        Circuit.from_text("PREP 10\nROT 0 1\n")


def test_chain_layout() -> None:
    assert chain_layout(4) == [(0, 1), (1, 2), (2, 3)]
    assert chain_layout(1) == []


@pytest.mark.parametrize("seed", range(5))
def test_gradients_agree(seed: int) -> None:
    rng = np.random.default_rng(seed)
    circuit = Circuit(
        3,
        (
            PrepareBitstring("110"),
            PauliExp(PauliString.from_label("YXZ"), 0, 0.5),
            Hop(1, 0, 2),
            PauliExp(PauliString.from_label("XXY"), 2),
            Hop(1, 1, 2),
            PauliExp(PauliString.from_label("ZYX"), 0, -1.5),
        ),
    )
    H = _random_observable(3, 100 + seed, n_terms=10)
    x = rng.uniform(-np.pi, np.pi, circuit.n_params)
    adjoint = circuit.gradient(H, x, method="adjoint")
    shift = circuit.gradient(H, x, method="shift")
    np.testing.assert_allclose(adjoint, shift, atol=1e-10)
    np.testing.assert_allclose(adjoint, _finite_difference(circuit, H, x), atol=1e-6)


def test_unknown_gradient_method() -> None:
    circuit = hop_circuit(2, [(0, 1)], "10")
    with pytest.raises(ValueError, match="unknown gradient method"):
        circuit.gradient(PauliSum.identity(2), [0.0], method="spsa")  # type: ignore[arg-type]
