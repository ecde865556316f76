"""
qembed.sim.circuit
AUTHOR: carter-vin

Parameterized circuits, execution, and analytic gradients.

Gates:
- PrepareBitstring(bits)
- PauliExp(pauli, param, coeff): exp(i coeff θ[param] P)
- Hop(param, a, b) / FixedHop(phi, a, b)

Hop gates are differentiated through
    hop(φ) = CZ · exp(-i φ/2 X_a Y_b) · exp(i φ/2 Y_a X_b)
(the two exponentials commute).

Text form, one gate per line:
    PREP 1100
    PEXP 0 YIXI [coeff]
    HOP 1 0 1
    FHOP 0.25 2 3
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal, Sequence, Union

import numpy as np

from qembed.operators.pauli import PauliString, PauliSum
from qembed.sim.statevector import (
    MAX_QUBITS,
    Statevector,
    apply_cz,
    apply_pauli_exp,
    expectation,
    prepare_reference,
    zero_state,
)


@dataclass(frozen=True)
class PrepareBitstring:
    bits: str


@dataclass(frozen=True)
class PauliExp:
    pauli: PauliString
    param: int
    coeff: float = 1.0


@dataclass(frozen=True)
class Hop:
    param: int
    a: int
    b: int


@dataclass(frozen=True)
class FixedHop:
    phi: float
    a: int
    b: int


Gate = Union[PrepareBitstring, PauliExp, Hop, FixedHop]


# elementary ops after expansion: ("prep", bits) | ("pexp", P, angle, param, coeff) | ("cz", a, b)
_Op = tuple


@dataclass(frozen=True)
class Circuit:
    """
    Ordered gate list on n qubits.

    Parameter indices must be dense in [0, n_params).
    """

    n: int
    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        seen: set[int] = set()
        for gate in self.gates:
            if isinstance(gate, PrepareBitstring):
                if len(gate.bits) != self.n:
                    raise ValueError(f"PREP bitstring {gate.bits} does not have {self.n} qubits")
            elif isinstance(gate, PauliExp):
                if gate.pauli.n != self.n:
                    raise ValueError(f"Pauli {gate.pauli.label} does not have {self.n} qubits")
                seen.add(gate.param)
            elif isinstance(gate, (Hop, FixedHop)):
                for q in (gate.a, gate.b):
                    if not 0 <= q < self.n:
                        raise ValueError(f"qubit {q} out of range for {self.n} qubits")
                if gate.a == gate.b:
                    raise ValueError("hop pair needs two distinct qubits")
                if isinstance(gate, Hop):
                    seen.add(gate.param)
            else:
                raise TypeError(f"unsupported gate: {gate!r}")
        if seen and seen != set(range(max(seen) + 1)):
            raise ValueError(f"parameter indices are not dense: {sorted(seen)}")
        if any(i < 0 for i in seen):
            raise ValueError("parameter indices must be >= 0")
        object.__setattr__(self, "_n_params", max(seen) + 1 if seen else 0)

    @property
    def n_params(self) -> int:
        return self._n_params  # type: ignore[attr-defined]

    def extended(self, gates: Sequence[Gate]) -> "Circuit":
        return Circuit(self.n, self.gates + tuple(gates))

    # -----------------------------
    # Execution
    # -----------------------------
    def expand(self, params: Sequence[float]) -> list[_Op]:
        params = np.asarray(params, dtype=float)
        if params.shape != (self.n_params,):
            raise ValueError(f"expected {self.n_params} parameters, got {params.shape}")
        ops: list[_Op] = []
        for gate in self.gates:
            if isinstance(gate, PrepareBitstring):
                ops.append(("prep", gate.bits))
            elif isinstance(gate, PauliExp):
                angle = gate.coeff * params[gate.param]
                ops.append(("pexp", gate.pauli, angle, gate.param, gate.coeff))
            else:
                phi = params[gate.param] if isinstance(gate, Hop) else gate.phi
                param = gate.param if isinstance(gate, Hop) else None
                ops.extend(_hop_ops(self.n, gate.a, gate.b, phi, param))
        return ops

    def run(
        self,
        params: Sequence[float] = (),
        initial: Statevector | None = None,
        *,
        max_qubits: int = MAX_QUBITS,
    ) -> Statevector:
        psi = initial if initial is not None else zero_state(self.n, max_qubits=max_qubits)
        for op in self.expand(params):
            psi = _apply(psi, op, max_qubits)
        return psi

    def energy(
        self, H: PauliSum, params: Sequence[float], initial: Statevector | None = None
    ) -> float:
        return expectation(self.run(params, initial), H).real

    def gradient(
        self,
        H: PauliSum,
        params: Sequence[float],
        *,
        method: Literal["adjoint", "shift"] = "adjoint",
        initial: Statevector | None = None,
    ) -> np.ndarray:
        """
        dE/dθ via the two-term shift rule for exp(iαP): dE/dα = E(α+π/4) - E(α-π/4).

        "shift" evaluates the shifted circuits literally; "adjoint" gets the
        same derivatives from one forward and one backward sweep.
        """
        if method == "shift":
            return self._shift_gradient(H, params, initial)
        if method == "adjoint":
            return self._adjoint_gradient(H, params, initial)
        raise ValueError(f"unknown gradient method: {method}")

    def _shift_gradient(
        self, H: PauliSum, params: Sequence[float], initial: Statevector | None
    ) -> np.ndarray:
        ops = self.expand(params)
        start = initial if initial is not None else zero_state(self.n)
        grad = np.zeros(self.n_params)
        for k, op in enumerate(ops):
            if op[0] != "pexp" or op[3] is None:
                continue
            _, P, angle, param, coeff = op
            values = []
            for shift in (np.pi / 4, -np.pi / 4):
                shifted = list(ops)
                shifted[k] = ("pexp", P, angle + shift, param, coeff)
                psi = start
                for o in shifted:
                    psi = _apply(psi, o, MAX_QUBITS)
                values.append(expectation(psi, H).real)
            grad[param] += coeff * (values[0] - values[1])
        return grad

    def _adjoint_gradient(
        self, H: PauliSum, params: Sequence[float], initial: Statevector | None
    ) -> np.ndarray:
        ops = self.expand(params)
        psi = initial if initial is not None else zero_state(self.n)
        for op in ops:
            psi = _apply(psi, op, MAX_QUBITS)
        chi = psi.amplitudes
        lam = H.apply(chi)
        grad = np.zeros(self.n_params)
        for op in reversed(ops):
            if op[0] == "prep":
                break
            if op[0] == "pexp":
                _, P, angle, param, coeff = op
                if param is not None:
                    # d/dα <χ|H|χ> with χ = exp(iαP)χ_prev → -2 Im <λ|P χ>
                    grad[param] += coeff * (-2.0 * np.vdot(lam, P.apply(chi)).imag)
                chi = _undo_pauli_exp(chi, P, angle)
                lam = _undo_pauli_exp(lam, P, angle)
            else:
                _, a, b = op
                chi = apply_cz(Statevector(chi, self.n), (a, b)).amplitudes
                lam = apply_cz(Statevector(lam, self.n), (a, b)).amplitudes
        return grad

    # -----------------------------
    # Text form
    # -----------------------------
    def to_text(self) -> str:
        lines = [f"# n_qubits={self.n}"]
        for gate in self.gates:
            if isinstance(gate, PrepareBitstring):
                lines.append(f"PREP {gate.bits}")
            elif isinstance(gate, PauliExp):
                suffix = "" if gate.coeff == 1.0 else f" {gate.coeff!r}"
                lines.append(f"PEXP {gate.param} {gate.pauli.label}{suffix}")
            elif isinstance(gate, Hop):
                lines.append(f"HOP {gate.param} {gate.a} {gate.b}")
            else:
                lines.append(f"FHOP {gate.phi!r} {gate.a} {gate.b}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str, n: int | None = None) -> "Circuit":
        gates: list[Gate] = []
        width = n
        max_qubit = -1
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if line.startswith("#"):
                if line.replace(" ", "").startswith("#n_qubits=") and width is None:
                    width = int(line.split("=", 1)[1])
                continue
            if not line:
                continue
            fields = line.split()
            kind = fields[0].upper()
            try:
                if kind == "PREP" and len(fields) == 2:
                    gates.append(PrepareBitstring(fields[1]))
                    width = width if width is not None else len(fields[1])
                elif kind == "PEXP" and len(fields) in (3, 4):
                    coeff = float(fields[3]) if len(fields) == 4 else 1.0
                    pauli = PauliString.from_label(fields[2])
                    gates.append(PauliExp(pauli, int(fields[1]), coeff))
                    width = width if width is not None else pauli.n
                elif kind == "HOP" and len(fields) == 4:
                    gate = Hop(int(fields[1]), int(fields[2]), int(fields[3]))
                    gates.append(gate)
                    max_qubit = max(max_qubit, gate.a, gate.b)
                elif kind == "FHOP" and len(fields) == 4:
                    gate = FixedHop(float(fields[1]), int(fields[2]), int(fields[3]))
                    gates.append(gate)
                    max_qubit = max(max_qubit, gate.a, gate.b)
                else:
                    raise ValueError(f"unrecognized gate line: {line!r}")
            except ValueError as e:
                raise ValueError(f"line {lineno}: {e}") from None
        if width is None:
            width = max_qubit + 1
        return Circuit(width, tuple(gates))

    def save(self, path: str | Path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_text(), encoding="utf-8")

    @staticmethod
    def load(path: str | Path) -> "Circuit":
        return Circuit.from_text(Path(path).read_text(encoding="utf-8"))


def _hop_ops(n: int, a: int, b: int, phi: float, param: int | None) -> list[_Op]:
    ya_xb = PauliString((1 << a) | (1 << b), 1 << a, n)
    xa_yb = PauliString((1 << a) | (1 << b), 1 << b, n)
    return [
        ("pexp", ya_xb, 0.5 * phi, param, 0.5),
        ("pexp", xa_yb, -0.5 * phi, param, -0.5),
        ("cz", a, b),
    ]


def _apply(psi: Statevector, op: _Op, max_qubits: int) -> Statevector:
    kind = op[0]
    if kind == "prep":
        return prepare_reference(op[1], max_qubits=max_qubits)
    if kind == "pexp":
        return apply_pauli_exp(psi, op[1], op[2])
    return apply_cz(psi, (op[1], op[2]))


def _undo_pauli_exp(vec: np.ndarray, P: PauliString, angle: float) -> np.ndarray:
    return np.cos(angle) * vec - 1j * np.sin(angle) * P.apply(vec)


def hop_circuit(n: int, layout: Sequence[tuple[int, int]], bits: str | None = None) -> Circuit:
    """One parameterized hop per listed pair, in listed order."""
    gates: list[Gate] = []
    if bits is not None:
        gates.append(PrepareBitstring(bits))
    gates.extend(Hop(k, a, b) for k, (a, b) in enumerate(layout))
    return Circuit(n, tuple(gates))


def chain_layout(n: int) -> list[tuple[int, int]]:
    """Nearest-neighbour pairs (0,1), (1,2), ..., (n-2, n-1)."""
    return [(q, q + 1) for q in range(n - 1)]


__all__ = [
    "Circuit",
    "FixedHop",
    "Hop",
    "PauliExp",
    "PrepareBitstring",
    "chain_layout",
    "hop_circuit",
]
