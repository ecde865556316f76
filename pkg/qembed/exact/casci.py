"""
qembed.exact.casci
AUTHOR: carter-vin

CASCI exact diagonalization and wavefunction analysis.

CI vectors are stored as matrices C[ia, ib] over alpha and beta strings.
The matching Jordan-Wigner basis index of a determinant is
alpha_mask + (beta_mask << n_orb), with no extra sign.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from math import comb
from pathlib import Path
from typing import Any, Sequence

import numpy as np
import scipy.linalg
import scipy.sparse.linalg as spla

from qembed.config import _DEFAULTS
from qembed.errors import DimensionLimitError
from qembed.exact.strings import StringSpace, mask_to_bits
from qembed.hamiltonian.core import ActiveSpaceHamiltonian
from qembed.logging import emit_event

MAX_DETERMINANTS: int = _DEFAULTS["casci"]["max_determinants"]
DENSE_LIMIT: int = _DEFAULTS["casci"]["dense_limit"]
OCCUPATION_BAND = (
    _DEFAULTS["casci"]["occupation_band_low"],
    _DEFAULTS["casci"]["occupation_band_high"],
)


# -----------------------------
# DATA CLASSES
# -----------------------------
@dataclass(frozen=True, eq=False)
class CIWavefunction:
    """
    Ground state over determinants of an active space.

    - amplitudes: (n_alpha_strings, n_beta_strings) complex matrix, unit norm
    - energy: includes e0 (Hartree)
    """

    n_orb: int
    n_alpha: int
    n_beta: int
    amplitudes: np.ndarray
    energy: float

    @property
    def alpha(self) -> StringSpace:
        return StringSpace(self.n_orb, self.n_alpha)

    @property
    def beta(self) -> StringSpace:
        return StringSpace(self.n_orb, self.n_beta)

    def determinants(self):
        """Yield (alpha_mask, beta_mask, amplitude)."""
        a_strings = self.alpha.strings
        b_strings = self.beta.strings
        for ia, ib in np.ndindex(self.amplitudes.shape):
            yield int(a_strings[ia]), int(b_strings[ib]), complex(self.amplitudes[ia, ib])

    def to_statevector(self) -> np.ndarray:
        """Dense 2^(2 n_orb) Jordan-Wigner amplitude vector."""
        psi = np.zeros(1 << (2 * self.n_orb), dtype=complex)
        for a, b, c in self.determinants():
            psi[a + (b << self.n_orb)] = c
        return psi

    @staticmethod
    def from_statevector(
        psi: np.ndarray, n_orb: int, n_alpha: int, n_beta: int, energy: float = float("nan")
    ) -> "CIWavefunction":
        alpha = StringSpace(n_orb, n_alpha)
        beta = StringSpace(n_orb, n_beta)
        C = np.empty((alpha.size, beta.size), dtype=complex)
        for ia, a in enumerate(alpha.strings):
            for ib, b in enumerate(beta.strings):
                C[ia, ib] = psi[int(a) + (int(b) << n_orb)]
        return CIWavefunction(n_orb, n_alpha, n_beta, C, energy)


@dataclass(frozen=True, eq=False)
class OneRDM:
    """Spin-summed d[p, q] = sum_σ <a†_pσ a_qσ>."""

    d: np.ndarray
    d_alpha: np.ndarray | None = None
    d_beta: np.ndarray | None = None

    @property
    def n_electrons(self) -> float:
        return float(np.trace(self.d).real)


@dataclass(frozen=True, eq=False)
class NaturalOrbitals:
    """
    Occupations descending; rotation[:, k] is natural orbital k.

    hono / luno index into the descending list; ambiguous flags occupations
    inside the configured band around 1.
    """

    occupations: np.ndarray
    rotation: np.ndarray
    hono: int | None
    luno: int | None
    ambiguous: bool = False


@dataclass(frozen=True, eq=False)
class SchmidtSpectrum:
    """Alpha|beta SVD of a CI matrix: C = left @ diag(singular_values) @ right^H."""

    singular_values: np.ndarray
    left: np.ndarray
    right: np.ndarray
    alpha_strings: np.ndarray
    beta_strings: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.left * self.singular_values) @ self.right.conj().T


@dataclass(frozen=True)
class Properties:
    n: float
    sz: float
    s2: float

    def to_dict(self) -> dict[str, float]:
        return {"N": self.n, "S2": self.s2, "Sz": self.sz}


# -----------------------------
# Hamiltonian action
# -----------------------------
@dataclass(frozen=True, eq=False)
class CIHamiltonian:
    """Matrix-free H on CI matrices of a fixed (n_alpha, n_beta) sector."""

    H: ActiveSpaceHamiltonian
    n_alpha: int
    n_beta: int
    alpha: StringSpace = field(init=False)
    beta: StringSpace = field(init=False)
    h_eff: np.ndarray = field(init=False)
    v2: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        n = self.H.n
        object.__setattr__(self, "alpha", StringSpace(n, self.n_alpha))
        object.__setattr__(self, "beta", StringSpace(n, self.n_beta))
        # E_pr E_qs - δ_qr E_ps folds into h'_ps = h_ps - 1/2 sum_q (pq|qs)
        h_eff = self.H.h - 0.5 * np.einsum("pqqs->ps", self.H.eri)
        object.__setattr__(self, "h_eff", h_eff)
        object.__setattr__(self, "v2", 0.5 * self.H.eri.reshape(n * n, n * n))

    @property
    def shape(self) -> tuple[int, int]:
        return self.alpha.size, self.beta.size

    @property
    def dim(self) -> int:
        return self.alpha.size * self.beta.size

    def apply_e(self, k: int, C: np.ndarray) -> np.ndarray:
        """E_pr C for flattened pair index k = p * n + r."""
        return self.alpha.excitations[k] @ C + (self.beta.excitations[k] @ C.T).T

    def matvec(self, C: np.ndarray) -> np.ndarray:
        n2 = self.H.n ** 2
        D = np.stack([self.apply_e(k, C) for k in range(n2)])
        G = (self.v2 @ D.reshape(n2, -1)).reshape(D.shape)
        h_flat = self.h_eff.reshape(-1)
        sigma = self.H.e0 * C
        for k in range(n2):
            sigma = sigma + self.apply_e(k, G[k]) + h_flat[k] * D[k]
        return sigma

    def dense(self) -> np.ndarray:
        dim = self.dim
        M = np.empty((dim, dim), dtype=complex)
        eye = np.eye(dim, dtype=complex)
        for col in range(dim):
            M[:, col] = self.matvec(eye[:, col].reshape(self.shape)).reshape(-1)
        return M


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    flat = vec.reshape(-1)
    k = int(np.argmax(np.abs(flat)))
    if abs(flat[k]) == 0.0:
        return vec
    return vec * (abs(flat[k]) / flat[k])


def ci_dimension(n_orb: int, n_alpha: int, n_beta: int) -> int:
    return comb(n_orb, n_alpha) * comb(n_orb, n_beta)


def casci_ground_state(
    H: ActiveSpaceHamiltonian,
    n_alpha: int,
    n_beta: int,
    *,
    max_determinants: int = MAX_DETERMINANTS,
    dense_limit: int = DENSE_LIMIT,
) -> CIWavefunction:
    """
    Lowest eigenpair of H in the (n_alpha, n_beta) determinant space.

    Raises DimensionLimitError above max_determinants and SymmetryError for a
    non-Hermitian H. The largest-magnitude amplitude is made real-positive.
    """
    H.validate()
    dim = ci_dimension(H.n, n_alpha, n_beta)
    if dim > max_determinants:
        raise DimensionLimitError(
            f"CI dimension {dim} exceeds limit {max_determinants} "
            f"({H.n} orbitals, {n_alpha}+{n_beta} electrons)"
        )
    op = CIHamiltonian(H, n_alpha, n_beta)

    if dim <= dense_limit:
        M = op.dense()
        M = 0.5 * (M + M.conj().T)
        evals, evecs = scipy.linalg.eigh(M)
        energy, vec = float(evals[0]), evecs[:, 0]
    else:
        linop = spla.LinearOperator(
            (dim, dim),
            matvec=lambda v: op.matvec(v.reshape(op.shape)).reshape(-1),
            dtype=complex,
        )
        rng = np.random.default_rng(0)
        v0 = rng.standard_normal(dim) + 0j
        evals, evecs = spla.eigsh(linop, k=1, which="SA", v0=v0, tol=1e-12)
        energy, vec = float(evals[0]), evecs[:, 0]

    vec = vec / np.linalg.norm(vec)
    C = _fix_phase(vec.reshape(op.shape))
    return CIWavefunction(H.n, n_alpha, n_beta, C, energy)


def ci_energy(H: ActiveSpaceHamiltonian, psi: CIWavefunction) -> float:
    op = CIHamiltonian(H, psi.n_alpha, psi.n_beta)
    return float(np.vdot(psi.amplitudes, op.matvec(psi.amplitudes)).real)


# -----------------------------
# Analysis
# -----------------------------
def one_rdm(psi: CIWavefunction) -> OneRDM:
    """d[p, q] = sum_σ <psi| a†_pσ a_qσ |psi>."""
    n = psi.n_orb
    C = psi.amplitudes
    d_a = np.empty((n, n), dtype=complex)
    d_b = np.empty((n, n), dtype=complex)
    ex_a = psi.alpha.excitations
    ex_b = psi.beta.excitations
    for p in range(n):
        for q in range(n):
            k = p * n + q
            d_a[p, q] = np.vdot(C, ex_a[k] @ C)
            d_b[p, q] = np.vdot(C, (ex_b[k] @ C.T).T)
    return OneRDM(d_a + d_b, d_a, d_b)


def natural_orbitals(
    rdm: OneRDM,
    *,
    band: tuple[float, float] = OCCUPATION_BAND,
    threshold: float = 1.0,
) -> NaturalOrbitals:
    """
    Eigen-decomposition sorted by descending occupation.

    HONO = last occupation >= threshold, LUNO = first occupation < threshold.
    """
    d = 0.5 * (rdm.d + rdm.d.conj().T)
    evals, evecs = np.linalg.eigh(d)
    order = np.argsort(-evals, kind="stable")
    occ = evals[order].real
    rot = evecs[:, order]
    above = np.nonzero(occ >= threshold)[0]
    below = np.nonzero(occ < threshold)[0]
    hono = int(above[-1]) if above.size else None
    luno = int(below[0]) if below.size else None
    ambiguous = bool(np.any((occ >= band[0]) & (occ <= band[1])))
    if ambiguous:
        emit_event(
            "occupation_ambiguous",
            occupations=[round(float(x), 6) for x in occ],
            band=list(band),
            message="natural occupations inside the HONO/LUNO ambiguity band",
        )
    return NaturalOrbitals(occ, rot, hono, luno, ambiguous)


def schmidt_decompose(psi: CIWavefunction) -> SchmidtSpectrum:
    U, s, Vh = np.linalg.svd(psi.amplitudes, full_matrices=False)
    return SchmidtSpectrum(s, U, Vh.conj().T, psi.alpha.strings, psi.beta.strings)


def dominant_configurations(psi: CIWavefunction, k: int) -> list[tuple[str, str, complex]]:
    """Top-k determinants by |amplitude|; ties by lexicographic bitstring order."""
    if k < 1:
        raise ValueError("k must be >= 1")
    rows = [
        (mask_to_bits(a, psi.n_orb), mask_to_bits(b, psi.n_orb), c)
        for a, b, c in psi.determinants()
    ]
    rows.sort(key=lambda r: (-round(abs(r[2]), 12), r[0] + r[1]))
    return rows[:k]


def expectation_suite(psi: CIWavefunction) -> Properties:
    """Exact N, Sz and S^2 = Sz(Sz+1) + n_beta - sum_pq <E^a_qp E^b_pq>."""
    n = psi.n_orb
    C = psi.amplitudes
    norm = float(np.vdot(C, C).real)
    n_a = psi.n_alpha * norm
    n_b = psi.n_beta * norm
    sz = 0.5 * (n_a - n_b)
    ex_a = psi.alpha.excitations
    ex_b = psi.beta.excitations
    cross = 0j
    for p in range(n):
        for q in range(n):
            cross += np.vdot(C, ex_a[q * n + p] @ (ex_b[p * n + q] @ C.T).T)
    s2 = sz * (sz + 1.0) + n_b - float(cross.real)
    return Properties(n=n_a + n_b, sz=sz, s2=s2)


# -----------------------------
# Exports
# -----------------------------
def export_ci_csv(psi: CIWavefunction, path: str | Path) -> None:
    """Rows `alpha_bits,beta_bits,re,im`."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["alpha_bits", "beta_bits", "re", "im"])
        for a, b, c in psi.determinants():
            writer.writerow(
                [mask_to_bits(a, psi.n_orb), mask_to_bits(b, psi.n_orb), repr(c.real), repr(c.imag)]
            )


def export_rdm_csv(rdm: OneRDM, path: str | Path, *, part: str = "real") -> None:
    """Dense matrix, one row per line; part is "real" or "imag"."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = rdm.d.real if part == "real" else rdm.d.imag
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        for row in data:
            writer.writerow([repr(float(x)) for x in row])


def wavefunction_summary(psi: CIWavefunction, k: int = 5) -> dict[str, Any]:
    props = expectation_suite(psi)
    spectrum = schmidt_decompose(psi)
    return {
        "energy": psi.energy,
        "n_orb": psi.n_orb,
        "n_alpha": psi.n_alpha,
        "n_beta": psi.n_beta,
        "properties": props.to_dict(),
        "schmidt_values": [float(s) for s in spectrum.singular_values[:k]],
        "dominant": [
            {"alpha": a, "beta": b, "re": c.real, "im": c.imag}
            for a, b, c in dominant_configurations(psi, k)
        ],
    }


def restricted_ci_energy(
    H: ActiveSpaceHamiltonian,
    n_alpha: int,
    n_beta: int,
    determinants: Sequence[tuple[int, int]],
) -> float:
    """Lowest eigenvalue of H within the span of the listed (alpha_mask, beta_mask) pairs."""
    op = CIHamiltonian(H, n_alpha, n_beta)
    M = op.dense()
    ia = op.alpha.index
    ib = op.beta.index
    cols = [ia[a] * op.beta.size + ib[b] for a, b in determinants]
    sub = M[np.ix_(cols, cols)]
    return float(np.linalg.eigvalsh(0.5 * (sub + sub.conj().T))[0])
