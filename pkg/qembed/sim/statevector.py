"""
qembed.sim.statevector
AUTHOR: carter-vin

Dense statevector execution.

Qubit q is bit q of the amplitude index. Every gate returns a new
Statevector; inputs are never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from qembed.config import _DEFAULTS
from qembed.errors import DimensionLimitError
from qembed.operators.pauli import PauliString, PauliSum, bit_parity

MAX_QUBITS: int = _DEFAULTS["statevector"]["max_qubits"]
HERMITIAN_TOL = 1e-10

_HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)
# maps the Y eigenbasis onto Z: H S†
_Y_TO_Z = _HADAMARD @ np.diag([1.0, -1.0j])


@dataclass(frozen=True, eq=False)
class Statevector:
    amplitudes: np.ndarray
    n: int

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} amplitudes for {self.n} qubits")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @staticmethod
    def from_bitstring(bits: str, *, max_qubits: int = MAX_QUBITS) -> "Statevector":
        return prepare_reference(bits, max_qubits=max_qubits)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def inner(self, other: "Statevector") -> complex:
        """<self|other>."""
        _check_sizes(self.n, other.n)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def evolve(self, amplitudes: np.ndarray) -> "Statevector":
        return Statevector(amplitudes, self.n)


def _check_sizes(a: int, b: int) -> None:
    if a != b:
        raise ValueError(f"qubit count mismatch: {a} vs {b}")


def _check_qubits(n: int, max_qubits: int) -> None:
    if n > max_qubits:
        raise DimensionLimitError(f"{n} qubits exceeds statevector limit {max_qubits}")


def prepare_reference(bits: str, *, max_qubits: int = MAX_QUBITS) -> Statevector:
    """Computational-basis state |b>, qubit 0 leftmost in `bits`."""
    bits = bits.strip()
    if any(b not in "01" for b in bits):
        raise ValueError(f"invalid bitstring: {bits!r}")
    n = len(bits)
    _check_qubits(n, max_qubits)
    amps = np.zeros(1 << n, dtype=complex)
    amps[sum(1 << q for q, b in enumerate(bits) if b == "1")] = 1.0
    return Statevector(amps, n)


def zero_state(n: int, *, max_qubits: int = MAX_QUBITS) -> Statevector:
    return prepare_reference("0" * n, max_qubits=max_qubits)


def apply_pauli_exp(psi: Statevector, P: PauliString, theta: float) -> Statevector:
    """exp(i θ P)|psi> = cos θ |psi> + i sin θ P|psi>."""
    _check_sizes(psi.n, P.n)
    amps = psi.amplitudes
    return psi.evolve(np.cos(theta) * amps + 1j * np.sin(theta) * P.apply(amps))


def _pair_indices(n: int, a: int, b: int) -> tuple[np.ndarray, ...]:
    if a == b:
        raise ValueError("hop pair needs two distinct qubits")
    if not (0 <= a < n and 0 <= b < n):
        raise ValueError(f"qubits ({a}, {b}) out of range for {n} qubits")
    idx = np.arange(1 << n)
    rest = idx[((idx >> a) & 1 == 0) & ((idx >> b) & 1 == 0)]
    return rest, rest | (1 << a), rest | (1 << b), rest | (1 << a) | (1 << b)


def apply_hop(psi: Statevector, pair: Sequence[int], phi: float) -> Statevector:
    """
    Hop gate on (a, b); a is the low bit of the two-qubit index.

    On |00>, |a=1 b=0>, |a=0 b=1>, |11>:
        [[1, 0, 0, 0], [0, cos, -sin, 0], [0, sin, cos, 0], [0, 0, 0, -1]]
    """
    a, b = pair
    i00, i10, i01, i11 = _pair_indices(psi.n, a, b)
    amps = psi.amplitudes
    out = amps.copy()
    c, s = np.cos(phi), np.sin(phi)
    out[i10] = c * amps[i10] - s * amps[i01]
    out[i01] = s * amps[i10] + c * amps[i01]
    out[i11] = -amps[i11]
    return psi.evolve(out)


def apply_cz(psi: Statevector, pair: Sequence[int]) -> Statevector:
    a, b = pair
    _, _, _, i11 = _pair_indices(psi.n, a, b)
    out = psi.amplitudes.copy()
    out[i11] = -out[i11]
    return psi.evolve(out)


def apply_single_qubit(psi: Statevector, qubit: int, U: np.ndarray) -> Statevector:
    n = psi.n
    tensor = psi.amplitudes.reshape((2,) * n)
    axis = n - 1 - qubit
    moved = np.moveaxis(tensor, axis, 0)
    rotated = np.tensordot(U, moved, axes=([1], [0]))
    return psi.evolve(np.moveaxis(rotated, 0, axis).reshape(-1))


# -----------------------------
# Expectations
# -----------------------------
def expectation(psi: Statevector, O: PauliSum) -> complex:
    """Exact <psi|O|psi>."""
    _check_sizes(psi.n, O.n)
    return complex(np.vdot(psi.amplitudes, O.apply(psi.amplitudes)))


def expectation_value(psi: Statevector, O: PauliSum) -> float:
    """Real part of <psi|O|psi>; raises when O is Hermitian but the result is not real."""
    value = expectation(psi, O)
    if abs(value.imag) > HERMITIAN_TOL and O.is_hermitian(tol=HERMITIAN_TOL):
        raise ValueError(f"expectation of a Hermitian operator has imaginary part {value.imag:.3e}")
    return value.real


def transition_element(bra: Statevector, ket: Statevector, O: PauliSum) -> complex:
    """Exact <bra|O|ket>."""
    _check_sizes(bra.n, ket.n)
    _check_sizes(bra.n, O.n)
    return complex(np.vdot(bra.amplitudes, O.apply(ket.amplitudes)))


def qubitwise_groups(O: PauliSum) -> list[list[PauliString]]:
    """Greedy qubit-wise commuting groups of the non-identity strings, label order."""
    groups: list[list[PauliString]] = []
    for string in sorted(O.terms, key=lambda s: s.label):
        if string.is_identity():
            continue
        for group in groups:
            if all(string.qubitwise_commutes(other) for other in group):
                group.append(string)
                break
        else:
            groups.append([string])
    return groups


def _measurement_basis(group: list[PauliString], n: int) -> dict[int, str]:
    basis: dict[int, str] = {}
    for string in group:
        for q in range(n):
            op = string.op_at(q)
            if op != "I":
                basis[q] = op
    return basis


def sampled_expectation(
    psi: Statevector, O: PauliSum, shots: int, seed: int | None
) -> tuple[float, float]:
    """
    Shot-sampled estimate of a Hermitian O and its standard error.

    Each qubit-wise commuting group is measured with `shots` multinomial draws
    after rotating into its shared basis. The identity term is exact.
    """
    _check_sizes(psi.n, O.n)
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if not O.is_hermitian(tol=HERMITIAN_TOL):
        raise ValueError("sampled_expectation requires a Hermitian operator")

    rng = np.random.default_rng(seed)
    estimate = O.constant().real
    variance = 0.0
    outcomes = np.arange(1 << psi.n)

    for group in qubitwise_groups(O):
        rotated = psi
        for q, op in sorted(_measurement_basis(group, psi.n).items()):
            if op == "X":
                rotated = apply_single_qubit(rotated, q, _HADAMARD)
            elif op == "Y":
                rotated = apply_single_qubit(rotated, q, _Y_TO_Z)
        probs = np.clip(rotated.probabilities(), 0.0, None)
        probs = probs / probs.sum()
        counts = rng.multinomial(shots, probs)

        per_outcome = np.zeros(len(outcomes))
        for string in group:
            parity = bit_parity(outcomes & string.support)
            per_outcome += O.terms[string].real * (1.0 - 2.0 * parity)

        mean = float(np.dot(counts, per_outcome) / shots)
        second = float(np.dot(counts, per_outcome**2) / shots)
        estimate += mean
        if shots > 1:
            variance += max(second - mean**2, 0.0) * shots / (shots - 1) / shots
    return float(estimate), float(np.sqrt(variance))
