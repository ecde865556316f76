"""
Shared toy Hamiltonians for the solver tests.

All builders are deterministic (seeded) and small enough for dense oracles.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from qembed.hamiltonian.core import ActiveSpaceHamiltonian
from qembed.hamiltonian.fcidump import save_hamiltonian

FIXTURES = Path(__file__).parent / "fixtures"

# H2 / STO-3G at 0.7414 Å, spatial-orbital integrals in Hartree
H2_E0 = 0.7137539936876182
H2_H = np.array([[-1.2563390730032498, 0.0], [0.0, -0.4718960072811420]])
H2_J11 = 0.6757101548035161
H2_J22 = 0.6986519587350
H2_J12 = 0.6645817302552968
H2_K12 = 0.1809311997842


def symmetrize_eri(X: np.ndarray, *, real: bool) -> np.ndarray:
    """Average X over the symmetry group of (pr|qs) (4-fold complex, 8-fold real)."""
    if real:
        X = X.real
        parts = [
            X,
            X.transpose(1, 0, 2, 3),
            X.transpose(0, 1, 3, 2),
            X.transpose(1, 0, 3, 2),
        ]
        parts += [p.transpose(2, 3, 0, 1) for p in parts]
        return sum(parts) / len(parts)
    parts = [
        X,
        X.transpose(2, 3, 0, 1),
        X.transpose(1, 0, 3, 2).conj(),
        X.transpose(3, 2, 1, 0).conj(),
    ]
    return sum(parts) / 4.0


def random_hamiltonian(
    n: int,
    *,
    seed: int = 0,
    real: bool = True,
    coupling: float = 0.05,
    gap: float = 1.0,
    coulomb: float = 0.3,
    n_electrons: int | None = None,
) -> ActiveSpaceHamiltonian:
    """
    Diagonal orbital ladder, uniform Coulomb repulsion and weak random couplings.

    Weak coupling keeps the ground state close to the closed-shell reference.
    """
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n))
    if not real:
        A = A + 1j * rng.standard_normal((n, n))
    h = np.diag(np.linspace(-1.5, -1.5 + gap * (n - 1), n)).astype(complex)
    h = h + coupling * 0.5 * (A + A.conj().T)
    X = rng.standard_normal((n,) * 4)
    if not real:
        X = X + 1j * rng.standard_normal((n,) * 4)
    eri = coupling * symmetrize_eri(X, real=real).astype(complex)
    for p in range(n):
        for q in range(n):
            eri[p, p, q, q] += coulomb
    if real:
        h = h.real
        eri = eri.real
    return ActiveSpaceHamiltonian(
        0.25,
        h,
        eri,
        kpoint_label="G" if real else "k1",
        gamma_point=real,
        n_electrons=n_electrons,
        ms2=0 if n_electrons is not None else None,
    )


def h2_hamiltonian() -> ActiveSpaceHamiltonian:
    eri = np.zeros((2, 2, 2, 2))
    eri[0, 0, 0, 0] = H2_J11
    eri[1, 1, 1, 1] = H2_J22
    eri[0, 0, 1, 1] = eri[1, 1, 0, 0] = H2_J12
    for idx in [(0, 1, 0, 1), (1, 0, 1, 0), (0, 1, 1, 0), (1, 0, 0, 1)]:
        eri[idx] = H2_K12
    return ActiveSpaceHamiltonian(
        H2_E0, H2_H, eri, kpoint_label="G", gamma_point=True, n_electrons=2, ms2=0
    )


def embedded_toy() -> ActiveSpaceHamiltonian:
    """
    Six orbitals, three doubly occupied. Correlation sits almost entirely in the
    orbital 2 / orbital 3 pair; everything else couples at the 1e-3 level.
    """
    n = 6
    rng = np.random.default_rng(11)
    h = np.diag([-2.0, -1.6, -0.6, 0.4, 1.4, 1.8])
    eri = 1e-3 * symmetrize_eri(rng.standard_normal((n,) * 4), real=True)
    for p in range(n):
        for q in range(n):
            eri[p, p, q, q] += 0.2
    for idx in [(2, 3, 2, 3), (3, 2, 3, 2), (2, 3, 3, 2), (3, 2, 2, 3)]:
        eri[idx] += 0.15
    return ActiveSpaceHamiltonian(
        1.0, h, eri, kpoint_label="G", gamma_point=True, n_electrons=6, ms2=0
    )


def write_fcidump(H: ActiveSpaceHamiltonian, path: Path) -> Path:
    save_hamiltonian(H, path)
    return path


@pytest.fixture
def h2() -> ActiveSpaceHamiltonian:
    return h2_hamiltonian()


@pytest.fixture
def toy6() -> ActiveSpaceHamiltonian:
    return embedded_toy()
