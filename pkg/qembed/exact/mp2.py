"""
qembed.exact.mp2
AUTHOR: carter-vin

Closed-shell MP2 over an active-space Hamiltonian.

Occupied orbitals are the first n_occ; orbital energies are the diagonal of
the Fock matrix built from them (or the file-supplied energies when present).
Amplitudes t[i, j, a, b] = conj((ia|jb)) / (e_i + e_j - e_a - e_b).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from qembed.exact.casci import OneRDM
from qembed.hamiltonian.core import ActiveSpaceHamiltonian

DENOMINATOR_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class MP2PairEnergies:
    """
    - occ_occ[i, j]: pair energies, sum = correlation energy, each <= 0
    - occ_virt[i, a]: the same energy attributed to (occupied, virtual) pairs
    """

    occ_occ: np.ndarray
    occ_virt: np.ndarray
    orbital_energies: np.ndarray
    n_occ: int

    @property
    def correlation_energy(self) -> float:
        return float(self.occ_occ.sum())

    def to_dict(self) -> dict[str, Any]:
        return {
            "correlation_energy": self.correlation_energy,
            "n_occ": self.n_occ,
            "occ_occ": self.occ_occ.tolist(),
            "occ_virt": self.occ_virt.tolist(),
        }


def fock_matrix(H: ActiveSpaceHamiltonian, n_occ: int) -> np.ndarray:
    occ = list(range(n_occ))
    eri = H.eri
    j = np.einsum("pqii->pq", eri[:, :, occ][:, :, :, occ])
    k = np.einsum("piiq->pq", eri[:, occ][:, :, occ])
    return H.h + 2.0 * j - k


def orbital_energies(H: ActiveSpaceHamiltonian, n_occ: int) -> np.ndarray:
    """
    File-supplied energies when present, else the real Fock diagonal.

    The diagonal equals the orbital energies only for canonical orbitals, which
    MP2 assumes. For a non-diagonal Fock matrix no pseudo-canonical
    eigenvalues are computed; the diagonal is returned as is.
    """
    if H.orbital_energies is not None and len(H.orbital_energies) == H.n:
        return np.asarray(H.orbital_energies, dtype=float)
    return np.real(np.diag(fock_matrix(H, n_occ)))


def _amplitudes(
    H: ActiveSpaceHamiltonian, n_occ: int, eps: np.ndarray | None
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = H.n
    if not 0 < n_occ < n:
        raise ValueError(f"n_occ={n_occ} must leave occupied and virtual orbitals in {n}")
    eps = orbital_energies(H, n_occ) if eps is None else np.asarray(eps, dtype=float)
    o = slice(0, n_occ)
    v = slice(n_occ, n)
    ovov = H.eri[o, v, o, v]  # (ia|jb) as [i, a, j, b]
    denom = (
        eps[o, None, None, None]
        + eps[None, None, o, None]
        - eps[None, v, None, None]
        - eps[None, None, None, v]
    )
    if np.any(np.abs(denom) < DENOMINATOR_TOL):
        raise ValueError("vanishing MP2 denominator: occupied and virtual energies are degenerate")
    t = (ovov.conj() / denom).transpose(0, 2, 1, 3)  # [i, j, a, b]
    tau = 2.0 * t - t.transpose(0, 1, 3, 2)
    return ovov.transpose(0, 2, 1, 3), t, tau


def mp2_pair_energies(
    H: ActiveSpaceHamiltonian, n_occ: int, *, eps: np.ndarray | None = None
) -> MP2PairEnergies:
    """
    e_ij = Re sum_ab (ia|jb) (2 t_ijab - t_ijba), and the (i, a) attribution
    e_ia = Re sum_jb of the same summand.
    """
    g, t, tau = _amplitudes(H, n_occ, eps)
    summand = (g * tau).real
    return MP2PairEnergies(
        occ_occ=summand.sum(axis=(2, 3)),
        occ_virt=summand.sum(axis=(1, 3)),
        orbital_energies=orbital_energies(H, n_occ) if eps is None else np.asarray(eps),
        n_occ=n_occ,
    )


def mp2_energy(H: ActiveSpaceHamiltonian, n_occ: int, *, eps: np.ndarray | None = None) -> float:
    """Monolithic correlation energy sum_ijab (ia|jb)[2(ia|jb) - (ib|ja)]* / D."""
    n = H.n
    eps = orbital_energies(H, n_occ) if eps is None else np.asarray(eps, dtype=float)
    total = 0.0
    for i in range(n_occ):
        for j in range(n_occ):
            for a in range(n_occ, n):
                for b in range(n_occ, n):
                    d = eps[i] + eps[j] - eps[a] - eps[b]
                    iajb = H.eri[i, a, j, b]
                    ibja = H.eri[i, b, j, a]
                    total += (iajb * (2.0 * iajb - ibja).conjugate()).real / d
    return float(total)


def mp2_one_rdm(H: ActiveSpaceHamiltonian, n_occ: int, *, eps: np.ndarray | None = None) -> OneRDM:
    """Unrelaxed closed-shell MP2 density (spin-summed), occupied/virtual blocks only."""
    _, t, tau = _amplitudes(H, n_occ, eps)
    n = H.n
    d = np.zeros((n, n), dtype=complex)
    d_oo = 2.0 * np.eye(n_occ) - 2.0 * np.einsum("ikab,jkab->ij", tau.conj(), t)
    d_vv = 2.0 * np.einsum("ijac,ijbc->ab", t, tau.conj())
    d[:n_occ, :n_occ] = 0.5 * (d_oo + d_oo.conj().T)
    d[n_occ:, n_occ:] = 0.5 * (d_vv + d_vv.conj().T)
    return OneRDM(d)
