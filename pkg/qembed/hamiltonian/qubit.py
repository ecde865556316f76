"""
qembed.hamiltonian.qubit
AUTHOR: carter-vin

Second-quantized Hamiltonian and observables, and their qubit images.
"""

from __future__ import annotations

from typing import Literal

import numpy as np

from qembed.hamiltonian.core import ActiveSpaceHamiltonian
from qembed.operators.fermion import DOWN, UP, FermionSum, ann, cre
from qembed.operators.mapping import Mapping, map_to_qubits, resolve_mapping
from qembed.operators.pauli import DEFAULT_DROP_TOL, PauliSum

ObservableKind = Literal["N", "Sz", "S2"]

_SPINS = (UP, DOWN)


def fermion_hamiltonian(
    H: ActiveSpaceHamiltonian, *, tol: float = DEFAULT_DROP_TOL
) -> FermionSum:
    """Spin-summed one- and two-body terms, constant as the empty product."""
    n = H.n
    terms: list = []
    if H.e0 != 0.0:
        terms.append((H.e0, ()))
    for p, r in np.ndindex(n, n):
        value = H.h[p, r]
        if abs(value) < tol:
            continue
        for s in _SPINS:
            terms.append((value, (cre(p, s), ann(r, s))))
    for p, r, q, s in np.ndindex(n, n, n, n):
        value = H.eri[p, r, q, s]
        if abs(value) < tol:
            continue
        for sigma in _SPINS:
            for tau in _SPINS:
                if sigma == tau and (p == q or r == s):
                    continue
                terms.append(
                    (0.5 * value, (cre(p, sigma), cre(q, tau), ann(s, tau), ann(r, sigma)))
                )
    return FermionSum(n, tuple(terms))


def to_qubit_hamiltonian(
    H: ActiveSpaceHamiltonian,
    mapping: str | Mapping = "jordan_wigner",
    *,
    n_alpha: int | None = None,
    n_beta: int | None = None,
    tol: float = DEFAULT_DROP_TOL,
) -> PauliSum:
    """
    Map H to qubits; the constant e0 sits on the identity string.

    Γ-point Hamiltonians yield real coefficients (imaginary dust removed).
    """
    resolved = resolve_mapping(mapping, n_alpha=n_alpha, n_beta=n_beta)
    f = fermion_hamiltonian(H, tol=tol)
    n_qubits = resolved.n_qubits(2 * H.n)
    if not f.terms:
        return PauliSum.identity(n_qubits, H.e0).simplify(tol)
    mapped = map_to_qubits(f, 2 * H.n, resolved, tol=tol)
    if not mapped.is_hermitian(tol=1e-10):
        worst = max(abs(c.imag) for c in mapped.terms.values())
        raise ValueError(f"mapped Hamiltonian is not Hermitian (max imaginary part {worst:.3e})")
    return mapped.real().simplify(tol)


def observable(kind: ObservableKind, n_orb: int) -> FermionSum:
    """N, Sz or S^2 in second quantization (S^2 = S-S+ + Sz(Sz+1), normal ordered)."""
    if n_orb < 1:
        raise ValueError("n_orb must be >= 1")
    number_terms = [
        (1.0, (cre(p, s), ann(p, s))) for s in _SPINS for p in range(n_orb)
    ]
    sz_terms = [
        (0.5 if s == UP else -0.5, (cre(p, s), ann(p, s))) for s in _SPINS for p in range(n_orb)
    ]
    if kind == "N":
        return FermionSum(n_orb, tuple(number_terms))
    sz = FermionSum(n_orb, tuple(sz_terms))
    if kind == "Sz":
        return sz
    if kind == "S2":
        s_plus = FermionSum(n_orb, tuple((1.0, (cre(p, UP), ann(p, DOWN))) for p in range(n_orb)))
        s_minus = s_plus.adjoint()
        return (s_minus * s_plus + sz * sz + sz).normal_ordered(tol=1e-14)
    raise ValueError(f"unknown observable: {kind}")


def qubit_observable(
    kind: ObservableKind,
    n_orb: int,
    mapping: str | Mapping = "jordan_wigner",
    *,
    n_alpha: int | None = None,
    n_beta: int | None = None,
) -> PauliSum:
    resolved = resolve_mapping(mapping, n_alpha=n_alpha, n_beta=n_beta)
    return map_to_qubits(observable(kind, n_orb), 2 * n_orb, resolved).real().simplify()
