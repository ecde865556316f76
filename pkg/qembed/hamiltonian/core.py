"""
qembed.hamiltonian.core
AUTHOR: carter-vin

Active-space Hamiltonian container, validation, frozen-core projection and
orbital rotation.

Index convention: eri[p, r, q, s] = (pr|qs) (chemist notation), so

    H = e0 + sum_{pr,σ} h_pr a†_pσ a_rσ
           + 1/2 sum_{prqs,στ} (pr|qs) a†_pσ a†_qτ a_sτ a_rσ
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Sequence

import numpy as np

from qembed.errors import SymmetryError

SYMMETRY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ActiveSpaceHamiltonian:
    """
    One k-point active-space Hamiltonian.

    - e0: constant energy (Hartree)
    - h: (n, n) complex Hermitian one-body matrix
    - eri: (n, n, n, n) complex two-body tensor, eri[p, r, q, s] = (pr|qs)
    - gamma_point: integrals flagged real and 8-fold symmetric
    - n_electrons / ms2: header metadata, None when unknown
    """

    e0: float
    h: np.ndarray
    eri: np.ndarray
    kpoint_label: str = ""
    gamma_point: bool = False
    n_electrons: int | None = None
    ms2: int | None = None
    orbital_energies: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        h = np.asarray(self.h, dtype=complex)
        eri = np.asarray(self.eri, dtype=complex)
        n = h.shape[0] if h.ndim == 2 else -1
        if h.shape != (n, n) or n < 1:
            raise ValueError(f"one-body matrix must be square, got shape {h.shape}")
        if eri.shape != (n, n, n, n):
            raise ValueError(f"two-body tensor must have shape {(n, n, n, n)}, got {eri.shape}")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "eri", eri)
        object.__setattr__(self, "e0", float(self.e0))

    @property
    def n(self) -> int:
        return self.h.shape[0]

    @staticmethod
    def zeros(n: int, e0: float = 0.0, **kwargs: Any) -> "ActiveSpaceHamiltonian":
        return ActiveSpaceHamiltonian(
            e0, np.zeros((n, n), dtype=complex), np.zeros((n,) * 4, dtype=complex), **kwargs
        )

    def symmetry_residuals(self) -> dict[str, float]:
        """Largest violation of each declared symmetry."""
        eri = self.eri
        res = {
            "h_hermitian": float(np.max(np.abs(self.h - self.h.conj().T), initial=0.0)),
            "eri_pair_swap": float(np.max(np.abs(eri - eri.transpose(2, 3, 0, 1)), initial=0.0)),
            "eri_conjugate": float(
                np.max(np.abs(eri - eri.transpose(1, 0, 3, 2).conj()), initial=0.0)
            ),
        }
        if self.gamma_point:
            res["h_real"] = float(np.max(np.abs(self.h.imag), initial=0.0))
            res["eri_real"] = float(np.max(np.abs(eri.imag), initial=0.0))
            res["eri_index_swap"] = float(
                np.max(np.abs(eri - eri.transpose(1, 0, 2, 3)), initial=0.0)
            )
        return res

    def validate(self, tol: float = SYMMETRY_TOL) -> "ActiveSpaceHamiltonian":
        """Raise SymmetryError naming the first violated symmetry; returns self."""
        for name, value in self.symmetry_residuals().items():
            if value > tol:
                raise SymmetryError(f"{name} violated: residual {value:.3e} > {tol:.1e}")
        return self

    def with_label(self, kpoint_label: str) -> "ActiveSpaceHamiltonian":
        return replace(self, kpoint_label=kpoint_label)


@dataclass(frozen=True)
class OrbitalSpace:
    """
    Partition of the orbitals into frozen-occupied, active and frozen-virtual.
    """

    frozen_occ: tuple[int, ...]
    active: tuple[int, ...]
    virtual_frozen: tuple[int, ...]
    n_alpha_active: int
    n_beta_active: int

    def __post_init__(self) -> None:
        for name in ("frozen_occ", "active", "virtual_frozen"):
            object.__setattr__(self, name, tuple(int(i) for i in getattr(self, name)))

    @staticmethod
    def full(n: int, n_alpha: int, n_beta: int) -> "OrbitalSpace":
        return OrbitalSpace((), tuple(range(n)), (), n_alpha, n_beta)

    def validate_for(self, n: int) -> None:
        everything = self.frozen_occ + self.active + self.virtual_frozen
        if sorted(everything) != list(range(n)):
            raise ValueError(f"orbital lists do not partition range({n}): {everything}")
        if not self.active:
            raise ValueError("active space is empty")
        n_act = len(self.active)
        if not (0 <= self.n_alpha_active <= n_act and 0 <= self.n_beta_active <= n_act):
            raise ValueError(
                f"active electrons ({self.n_alpha_active}, {self.n_beta_active}) "
                f"do not fit {n_act} active orbitals"
            )

    def to_dict(self) -> dict[str, Any]:
        return {
            "frozen_occ": list(self.frozen_occ),
            "active": list(self.active),
            "virtual_frozen": list(self.virtual_frozen),
            "n_alpha_active": self.n_alpha_active,
            "n_beta_active": self.n_beta_active,
        }

    @staticmethod
    def from_dict(payload: dict[str, Any]) -> "OrbitalSpace":
        return OrbitalSpace(
            frozen_occ=tuple(payload.get("frozen_occ", ())),
            active=tuple(payload["active"]),
            virtual_frozen=tuple(payload.get("virtual_frozen", ())),
            n_alpha_active=int(payload["n_alpha_active"]),
            n_beta_active=int(payload["n_beta_active"]),
        )


# -----------------------------
# Projection and rotation
# -----------------------------
def freeze_and_project(
    H: ActiveSpaceHamiltonian, space: OrbitalSpace
) -> ActiveSpaceHamiltonian:
    """
    Fold doubly occupied frozen orbitals into e0 and h, restrict to the active set.

    Frozen virtual orbitals are simply dropped.
    """
    space.validate_for(H.n)
    core = list(space.frozen_occ)
    act = list(space.active)
    h, eri = H.h, H.eri

    e0 = H.e0
    h_eff = h[np.ix_(act, act)].copy()
    if core:
        h_cc = h[np.ix_(core, core)]
        coulomb = np.einsum("iijj->", eri[np.ix_(core, core, core, core)])
        exchange = np.einsum("ijji->", eri[np.ix_(core, core, core, core)])
        e0 = H.e0 + float(np.real(2.0 * np.trace(h_cc) + 2.0 * coulomb - exchange))
        j_pq = np.einsum("pqii->pq", eri[np.ix_(act, act, core, core)])
        k_pq = np.einsum("piiq->pq", eri[np.ix_(act, core, core, act)])
        h_eff = h_eff + 2.0 * j_pq - k_pq

    eri_act = eri[np.ix_(act, act, act, act)].copy()
    n_electrons = None
    if H.n_electrons is not None:
        n_electrons = space.n_alpha_active + space.n_beta_active
    return ActiveSpaceHamiltonian(
        e0,
        h_eff,
        eri_act,
        kpoint_label=H.kpoint_label,
        gamma_point=H.gamma_point,
        n_electrons=n_electrons,
        ms2=H.ms2,
    )


def rotate_orbitals(H: ActiveSpaceHamiltonian, U: np.ndarray) -> ActiveSpaceHamiltonian:
    """
    Transform to orbitals phi'_p = sum_a U[a, p] phi_a.

    U may be rectangular (n, m) with orthonormal columns, giving an m-orbital
    Hamiltonian over the rotated subspace. The Γ flag survives when U is real
    valued, whatever its dtype.
    """
    U = np.asarray(U)
    if U.ndim != 2 or U.shape[0] != H.n:
        raise ValueError(f"rotation must have shape ({H.n}, m), got {U.shape}")
    gamma = H.gamma_point and bool(np.allclose(np.imag(U), 0.0, atol=SYMMETRY_TOL))
    if gamma:
        U = np.real(U)
    Uc = U.conj()
    h = Uc.T @ H.h @ U
    eri = np.einsum("ap,br,cq,ds,abcd->prqs", Uc, U, Uc, U, H.eri, optimize=True)
    if gamma:
        h, eri = h.real, eri.real
    return ActiveSpaceHamiltonian(
        H.e0,
        h,
        eri,
        kpoint_label=H.kpoint_label,
        gamma_point=gamma,
        n_electrons=H.n_electrons,
        ms2=H.ms2,
    )


def restrict(H: ActiveSpaceHamiltonian, orbitals: Sequence[int]) -> ActiveSpaceHamiltonian:
    """Plain restriction to a subset of orbitals (no core folding)."""
    idx = list(orbitals)
    return ActiveSpaceHamiltonian(
        H.e0,
        H.h[np.ix_(idx, idx)],
        H.eri[np.ix_(idx, idx, idx, idx)],
        kpoint_label=H.kpoint_label,
        gamma_point=H.gamma_point,
    )


def determinant_energy(
    H: ActiveSpaceHamiltonian, alpha_occ: Sequence[int], beta_occ: Sequence[int]
) -> float:
    """Slater-Condon energy of a single determinant."""
    h, eri = H.h, H.eri
    energy = complex(H.e0)
    for occ in (alpha_occ, beta_occ):
        for i in occ:
            energy += h[i, i]
    for i in alpha_occ:
        for j in beta_occ:
            energy += eri[i, i, j, j]
    for occ in (alpha_occ, beta_occ):
        for a, i in enumerate(occ):
            for j in occ[a + 1 :]:
                energy += eri[i, i, j, j] - eri[i, j, j, i]
    return float(energy.real)
