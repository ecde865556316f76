"""
qembed.vqe.ansatz
AUTHOR: carter-vin

qUCCSD and QCC circuit builders.

qUCCSD:
- excitations: singles alpha then beta (occ → virt), then doubles αα (i<j, a<b),
  ββ, αβ
- per excitation: θ^R with generator T - T†, then (complex mode) θ^I with
  generator i(T + T†)
- each generator maps to i Σ c_j P_j (real c_j, mutually commuting strings);
  one PEXP per string with coefficient c_j / trotter_steps, the whole sweep
  repeated trotter_steps times

QCC (Jordan-Wigner bitstrings, qubit 0 leftmost):
- real-amplitude string: Y at the lowest flipped qubit, X on the rest of the mask
- imaginary-amplitude string: X on the whole mask
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

from qembed.operators.fermion import DOWN, UP, FermionSum, excitation
from qembed.operators.mapping import (
    JORDAN_WIGNER,
    map_to_qubits,
    reference_bitstring,
    resolve_mapping,
)
from qembed.operators.pauli import PauliString
from qembed.sim.circuit import Circuit, Gate, PauliExp, PrepareBitstring

GENERATOR_TOL = 1e-12


@dataclass(frozen=True)
class QuccsdSpec:
    n_orb: int
    n_alpha: int
    n_beta: int
    complex_amplitudes: bool = False
    trotter_steps: int = 1
    mapping: str = JORDAN_WIGNER

    def __post_init__(self) -> None:
        if self.n_orb < 1:
            raise ValueError("n_orb must be >= 1")
        if not (0 <= self.n_alpha <= self.n_orb and 0 <= self.n_beta <= self.n_orb):
            raise ValueError(
                f"electron counts ({self.n_alpha}, {self.n_beta}) do not fit {self.n_orb} orbitals"
            )
        if self.trotter_steps < 1:
            raise ValueError("trotter_steps must be >= 1")


@dataclass(frozen=True)
class Excitation:
    """creators / annihilators as (orbital, spin) pairs; label is for traces."""

    creators: tuple[tuple[int, int], ...]
    annihilators: tuple[tuple[int, int], ...]

    @property
    def label(self) -> str:
        spin = "ab"
        cre = ",".join(f"{p}{spin[s]}" for p, s in self.creators)
        ann = ",".join(f"{p}{spin[s]}" for p, s in self.annihilators)
        return f"{cre}<-{ann}"


def enumerate_excitations(n_orb: int, n_alpha: int, n_beta: int) -> list[Excitation]:
    occ = {UP: range(n_alpha), DOWN: range(n_beta)}
    virt = {UP: range(n_alpha, n_orb), DOWN: range(n_beta, n_orb)}
    out: list[Excitation] = []
    for s in (UP, DOWN):
        for i in occ[s]:
            for a in virt[s]:
                out.append(Excitation(((a, s),), ((i, s),)))
    for s in (UP, DOWN):
        for i in occ[s]:
            for j in occ[s]:
                if j <= i:
                    continue
                for a in virt[s]:
                    for b in virt[s]:
                        if b <= a:
                            continue
                        out.append(Excitation(((a, s), (b, s)), ((j, s), (i, s))))
    for i in occ[UP]:
        for j in occ[DOWN]:
            for a in virt[UP]:
                for b in virt[DOWN]:
                    out.append(Excitation(((a, UP), (b, DOWN)), ((j, DOWN), (i, UP))))
    return out


def _generators(ex: Excitation, n_orb: int, complex_amplitudes: bool) -> list[FermionSum]:
    T = excitation(n_orb, ex.creators, ex.annihilators)
    gens = [T - T.adjoint()]
    if complex_amplitudes:
        gens.append((T + T.adjoint()) * 1j)
    return gens


def _generator_strings(
    G: FermionSum, spec: QuccsdSpec
) -> list[tuple[PauliString, float]]:
    mapping = resolve_mapping(spec.mapping, n_alpha=spec.n_alpha, n_beta=spec.n_beta)
    image = map_to_qubits(G, 2 * spec.n_orb, mapping, tol=GENERATOR_TOL)
    out: list[tuple[PauliString, float]] = []
    for string in sorted(image.terms, key=lambda s: s.label):
        coeff = image.terms[string]
        if abs(coeff.real) > GENERATOR_TOL:
            raise ValueError(f"generator image of {string.label} is not anti-Hermitian")
        out.append((string, coeff.imag))
    return out


def quccsd_parameter_labels(spec: QuccsdSpec) -> list[str]:
    labels: list[str] = []
    for ex in enumerate_excitations(spec.n_orb, spec.n_alpha, spec.n_beta):
        labels.append(f"R:{ex.label}")
        if spec.complex_amplitudes:
            labels.append(f"I:{ex.label}")
    return labels


def build_quccsd(spec: QuccsdSpec) -> Circuit:
    """Reference preparation followed by trotter_steps sweeps over the excitation generators."""
    mapping = resolve_mapping(spec.mapping, n_alpha=spec.n_alpha, n_beta=spec.n_beta)
    bits = reference_bitstring(spec.n_orb, spec.n_alpha, spec.n_beta, mapping)
    n_qubits = mapping.n_qubits(2 * spec.n_orb)

    sweep: list[Gate] = []
    param = 0
    for ex in enumerate_excitations(spec.n_orb, spec.n_alpha, spec.n_beta):
        for G in _generators(ex, spec.n_orb, spec.complex_amplitudes):
            for string, c in _generator_strings(G, spec):
                sweep.append(PauliExp(string, param, c / spec.trotter_steps))
            param += 1

    gates: list[Gate] = [PrepareBitstring(bits)]
    for _ in range(spec.trotter_steps):
        gates.extend(sweep)
    return Circuit(n_qubits, tuple(gates))


# -----------------------------
# QCC
# -----------------------------
@dataclass(frozen=True)
class QccPool:
    """
    Ordered, duplicate-free Pauli strings with the configuration each came from.

    provenance[k] = {"config": bits, "kind": "real" | "imag", "amplitude": |c|}
    """

    strings: tuple[PauliString, ...]
    provenance: tuple[dict[str, Any], ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if len(set(self.strings)) != len(self.strings):
            raise ValueError("QCC pool contains duplicate strings")
        if self.provenance and len(self.provenance) != len(self.strings):
            raise ValueError("provenance length does not match pool size")

    def __len__(self) -> int:
        return len(self.strings)

    def to_dict(self) -> dict[str, Any]:
        return {
            "strings": [s.label for s in self.strings],
            "provenance": list(self.provenance),
        }


def qcc_strings(config: str, hf: str) -> tuple[PauliString, PauliString]:
    """(real-amplitude string, imaginary-amplitude string) for one configuration."""
    if len(config) != len(hf):
        raise ValueError(f"configuration {config} and reference {hf} differ in length")
    flipped = [q for q, (a, b) in enumerate(zip(config, hf)) if a != b]
    if not flipped:
        raise ValueError("configuration equals the reference")
    n = len(hf)
    mask = sum(1 << q for q in flipped)
    lowest = 1 << flipped[0]
    return PauliString(mask, lowest, n), PauliString(mask, 0, n)


def build_qcc_pool(
    configs: Sequence[tuple[str, str, complex]],
    hf: str,
    *,
    gamma_point: bool = False,
) -> QccPool:
    """
    Pool from dominant configurations (alpha_bits, beta_bits, amplitude).

    The Jordan-Wigner bitstring of a configuration is alpha_bits + beta_bits.
    """
    ranked = sorted(
        enumerate(configs), key=lambda item: (-round(abs(item[1][2]), 12), item[0])
    )
    strings: list[PauliString] = []
    provenance: list[dict[str, Any]] = []
    seen: set[PauliString] = set()
    for _, (alpha, beta, amp) in ranked:
        bits = alpha + beta
        if len(bits) != len(hf):
            raise ValueError(f"configuration {bits} does not match reference width {len(hf)}")
        if bits == hf:
            continue
        real, imag = qcc_strings(bits, hf)
        pairs = [(real, "real")] if gamma_point else [(real, "real"), (imag, "imag")]
        for string, kind in pairs:
            if string in seen:
                continue
            seen.add(string)
            strings.append(string)
            provenance.append({"config": bits, "kind": kind, "amplitude": float(abs(amp))})
    return QccPool(tuple(strings), tuple(provenance))


def build_qcc_ansatz(pool: QccPool, m: int, hf: str) -> Circuit:
    """PREP hf, then pool strings 0..m-1 as parameters 0..m-1 (P_1 innermost)."""
    if not 0 <= m <= len(pool):
        raise ValueError(f"m={m} outside [0, {len(pool)}]")
    gates: list[Gate] = [PrepareBitstring(hf)]
    gates.extend(PauliExp(pool.strings[k], k) for k in range(m))
    return Circuit(len(hf), tuple(gates))
