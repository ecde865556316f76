"""
qembed.operators.mapping
AUTHOR: carter-vin

Fermion-to-qubit mappings: jordan_wigner, parity, parity_reduced.

Conventions:
- block spin ordering, spin-orbital j = spin * n_orb + p is qubit j
- qubit value 1 = occupied (JW) / odd prefix parity (parity)
- occupation states are (a†_0)^{n_0} (a†_1)^{n_1} ... |vac>
- parity_reduced drops qubits n_orb-1 (alpha parity) and 2*n_orb-1 (total parity)
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from qembed.operators.fermion import FermionSum, LadderOp
from qembed.operators.pauli import DEFAULT_DROP_TOL, PauliString, PauliSum

JORDAN_WIGNER = "jordan_wigner"
PARITY = "parity"
PARITY_REDUCED = "parity_reduced"

# CLI spellings
_ALIASES = {
    "jw": JORDAN_WIGNER,
    "jordan_wigner": JORDAN_WIGNER,
    "parity": PARITY,
    "parity2": PARITY_REDUCED,
    "parity_reduced": PARITY_REDUCED,
}


@dataclass(frozen=True)
class Mapping:
    """
    Resolved mapping choice.

    n_alpha / n_beta are required for parity_reduced only.
    """

    kind: str
    n_alpha: int | None = None
    n_beta: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in (JORDAN_WIGNER, PARITY, PARITY_REDUCED):
            raise ValueError(f"unknown mapping: {self.kind}")
        if self.kind == PARITY_REDUCED and (self.n_alpha is None or self.n_beta is None):
            raise ValueError("parity_reduced requires n_alpha and n_beta")

    def n_qubits(self, n_modes: int) -> int:
        return n_modes - 2 if self.kind == PARITY_REDUCED else n_modes


def resolve_mapping(
    mapping: str | Mapping, *, n_alpha: int | None = None, n_beta: int | None = None
) -> Mapping:
    if isinstance(mapping, Mapping):
        return mapping
    key = mapping.strip().lower()
    if key not in _ALIASES:
        raise ValueError(f"unknown mapping: {mapping} (expected one of {sorted(_ALIASES)})")
    kind = _ALIASES[key]
    if kind == PARITY_REDUCED:
        return Mapping(kind, n_alpha, n_beta)
    return Mapping(kind)


# -----------------------------
# Single ladder operators
# -----------------------------
@lru_cache(maxsize=None)
def _ladder_image(kind: str, j: int, dagger: bool, n: int) -> PauliSum:
    """Image of a†_j (dagger) or a_j on n qubits, before any qubit reduction."""
    sign = -1.0 if dagger else 1.0
    if kind == JORDAN_WIGNER:
        z_mask = (1 << j) - 1
        x_string = PauliString(1 << j, z_mask, n)
        y_string = PauliString(1 << j, z_mask | (1 << j), n)
        return PauliSum(n, {x_string: 0.5, y_string: sign * 0.5j})

    # parity: a†_j = ½(Z_{j-1} X_j − iY_j) X_{>j}
    upper = ((1 << n) - 1) ^ ((1 << (j + 1)) - 1)
    z_prev = (1 << (j - 1)) if j > 0 else 0
    x_string = PauliString((1 << j) | upper, z_prev, n)
    y_string = PauliString((1 << j) | upper, 1 << j, n)
    return PauliSum(n, {x_string: 0.5, y_string: sign * 0.5j})


def ladder_to_qubits(op: LadderOp, n_orb: int, kind: str) -> PauliSum:
    return _ladder_image(kind, op.index(n_orb), op.dagger, 2 * n_orb)


def map_to_qubits(
    f: FermionSum,
    n_modes: int,
    mapping: str | Mapping,
    *,
    n_alpha: int | None = None,
    n_beta: int | None = None,
    tol: float = DEFAULT_DROP_TOL,
) -> PauliSum:
    """
    Map a FermionSum on n_modes = 2 * n_orb spin-orbitals to a PauliSum.

    Raises ValueError on out-of-range modes, a missing sector for
    parity_reduced, or terms that do not conserve the removed parities.
    """
    resolved = resolve_mapping(mapping, n_alpha=n_alpha, n_beta=n_beta)
    if n_modes != 2 * f.n_orb:
        raise ValueError(f"n_modes={n_modes} does not match 2 * n_orb = {2 * f.n_orb}")

    base_kind = JORDAN_WIGNER if resolved.kind == JORDAN_WIGNER else PARITY
    out: dict[PauliString, complex] = {}
    identity = PauliString.identity(n_modes)
    for coeff, ops in f.terms:
        product = PauliSum(n_modes, {identity: coeff})
        for op in ops:
            product = product * ladder_to_qubits(op, f.n_orb, base_kind)
        for string, c in product.terms.items():
            out[string] = out.get(string, 0j) + c

    mapped = PauliSum(n_modes, out).simplify(tol)
    if resolved.kind == PARITY_REDUCED:
        mapped = _reduce_parity(mapped, f.n_orb, resolved.n_alpha, resolved.n_beta).simplify(tol)
    return mapped


def _reduce_parity(op: PauliSum, n_orb: int, n_alpha: int, n_beta: int) -> PauliSum:
    q_alpha = n_orb - 1
    q_total = 2 * n_orb - 1
    eig = {
        q_alpha: -1.0 if n_alpha % 2 else 1.0,
        q_total: -1.0 if (n_alpha + n_beta) % 2 else 1.0,
    }
    out: dict[PauliString, complex] = {}
    for string, coeff in op.terms.items():
        factor = 1.0
        for q, value in eig.items():
            if (string.x >> q) & 1:
                raise ValueError(
                    f"term {string.label} flips symmetry qubit {q}; operator does not conserve "
                    "per-spin particle parity"
                )
            if (string.z >> q) & 1:
                factor *= value
        reduced = string.remove_qubits((q_alpha, q_total))
        out[reduced] = out.get(reduced, 0j) + factor * coeff
    return PauliSum(op.n - 2, out)


# -----------------------------
# Reference states
# -----------------------------
def occupation_bits(n_orb: int, n_alpha: int, n_beta: int) -> list[int]:
    """Hartree-Fock occupations in block ordering (lowest orbitals filled)."""
    if not (0 <= n_alpha <= n_orb and 0 <= n_beta <= n_orb):
        raise ValueError(f"electron counts ({n_alpha}, {n_beta}) do not fit {n_orb} orbitals")
    return [1 if p < n_alpha else 0 for p in range(n_orb)] + [
        1 if p < n_beta else 0 for p in range(n_orb)
    ]


def encode_occupations(occ: list[int], mapping: str | Mapping, n_orb: int) -> str:
    """Qubit bitstring (qubit 0 leftmost) of an occupation vector under a mapping."""
    kind = resolve_mapping(mapping, n_alpha=0, n_beta=0).kind
    if kind == JORDAN_WIGNER:
        return "".join(str(b) for b in occ)
    parity: list[int] = []
    acc = 0
    for b in occ:
        acc ^= b
        parity.append(acc)
    if kind == PARITY_REDUCED:
        parity = [b for q, b in enumerate(parity) if q not in (n_orb - 1, 2 * n_orb - 1)]
    return "".join(str(b) for b in parity)


def reference_bitstring(n_orb: int, n_alpha: int, n_beta: int, mapping: str | Mapping) -> str:
    return encode_occupations(occupation_bits(n_orb, n_alpha, n_beta), mapping, n_orb)
