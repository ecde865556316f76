"""
qembed.operators.pauli
AUTHOR: carter-vin

Pauli strings and weighted Pauli sums.

Encoding:
- a string is a pair of bit masks (x, z); qubit q is bit q of both masks
- Y on qubit q sets both bits; the stored operator is i^{|x&z|} X^x Z^z
- text labels put qubit 0 leftmost ("XIZ" = X0 Z2)
- basis-state index = sum_q b_q 2^q, so qubit 0 is the least-significant bit
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Mapping

import numpy as np
import scipy.sparse as sp

from qembed.config import _DEFAULTS

DEFAULT_DROP_TOL: float = _DEFAULTS["operators"]["drop_tol"]

_CHAR_TO_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_TO_CHAR = {bits: char for char, bits in _CHAR_TO_BITS.items()}
_PHASES = (1.0 + 0j, 1j, -1.0 + 0j, -1j)


@dataclass(frozen=True, order=True)
class PauliString:
    """
    Tensor product of single-qubit Paulis on n qubits (no phase).
    """

    x: int
    z: int
    n: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("qubit count must be >= 0")
        limit = 1 << self.n
        if not (0 <= self.x < limit and 0 <= self.z < limit):
            raise ValueError(f"masks do not fit in {self.n} qubits")

    @staticmethod
    def from_label(label: str) -> "PauliString":
        x = z = 0
        for q, char in enumerate(label.strip().upper()):
            try:
                bx, bz = _CHAR_TO_BITS[char]
            except KeyError:
                raise ValueError(f"invalid Pauli character {char!r} in {label!r}") from None
            x |= bx << q
            z |= bz << q
        return PauliString(x, z, len(label.strip()))

    @staticmethod
    def identity(n: int) -> "PauliString":
        return PauliString(0, 0, n)

    @staticmethod
    def single(n: int, qubit: int, op: str) -> "PauliString":
        if not 0 <= qubit < n:
            raise ValueError(f"qubit {qubit} out of range for {n} qubits")
        bx, bz = _CHAR_TO_BITS[op]
        return PauliString(bx << qubit, bz << qubit, n)

    @property
    def label(self) -> str:
        return "".join(
            _BITS_TO_CHAR[((self.x >> q) & 1, (self.z >> q) & 1)] for q in range(self.n)
        )

    @property
    def support(self) -> int:
        """Bit mask of qubits carrying a non-identity Pauli."""
        return self.x | self.z

    @property
    def weight(self) -> int:
        return self.support.bit_count()

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def op_at(self, qubit: int) -> str:
        return _BITS_TO_CHAR[((self.x >> qubit) & 1, (self.z >> qubit) & 1)]

    def compose(self, other: "PauliString") -> tuple[complex, "PauliString"]:
        """Product self·other as (phase, string) with phase in {±1, ±i}."""
        if self.n != other.n:
            raise ValueError(f"qubit count mismatch: {self.n} vs {other.n}")
        x3 = self.x ^ other.x
        z3 = self.z ^ other.z
        k = (
            (self.x & self.z).bit_count()
            + (other.x & other.z).bit_count()
            - (x3 & z3).bit_count()
            + 2 * (self.z & other.x).bit_count()
        )
        return _PHASES[k % 4], PauliString(x3, z3, self.n)

    def commutes(self, other: "PauliString") -> bool:
        return ((self.x & other.z).bit_count() + (self.z & other.x).bit_count()) % 2 == 0

    def qubitwise_commutes(self, other: "PauliString") -> bool:
        overlap = self.support & other.support
        differs = (self.x ^ other.x) | (self.z ^ other.z)
        return overlap & differs == 0

    def split(self, n_left: int) -> tuple["PauliString", "PauliString"]:
        """Cut into qubits [0, n_left) and [n_left, n)."""
        if not 0 <= n_left <= self.n:
            raise ValueError(f"cut {n_left} outside [0, {self.n}]")
        mask = (1 << n_left) - 1
        left = PauliString(self.x & mask, self.z & mask, n_left)
        right = PauliString(self.x >> n_left, self.z >> n_left, self.n - n_left)
        return left, right

    def remove_qubits(self, qubits: Iterable[int]) -> "PauliString":
        """Drop the listed qubits, shifting higher qubits down."""
        drop = set(qubits)
        x = z = 0
        pos = 0
        for q in range(self.n):
            if q in drop:
                continue
            x |= ((self.x >> q) & 1) << pos
            z |= ((self.z >> q) & 1) << pos
            pos += 1
        return PauliString(x, z, pos)

    def apply(self, psi: np.ndarray) -> np.ndarray:
        """P|psi> on a dense amplitude vector of length 2^n."""
        perm, signs = _action(self.x, self.z, self.n)
        return (signs * psi)[perm]

    def to_matrix(self) -> sp.csr_matrix:
        perm, signs = _action(self.x, self.z, self.n)
        dim = 1 << self.n
        cols = np.arange(dim)
        return sp.csr_matrix((signs, (perm, cols)), shape=(dim, dim))

    def __str__(self) -> str:
        return self.label


@lru_cache(maxsize=4096)
def _action(x: int, z: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Permutation and phases of P|b> = i^{|x&z|} (-1)^{|b&z|} |b^x>.

    Returned so that (P psi)[j] = (signs * psi)[perm][j].
    """
    idx = np.arange(1 << n, dtype=np.int64)
    perm = idx ^ x
    parity = bit_parity(idx & z)
    signs = _PHASES[(x & z).bit_count() % 4] * (1.0 - 2.0 * parity)
    perm.setflags(write=False)
    signs = np.asarray(signs, dtype=complex)
    signs.setflags(write=False)
    return perm, signs


def bit_parity(values: np.ndarray) -> np.ndarray:
    v = values.astype(np.int64, copy=True)
    for shift in (32, 16, 8, 4, 2, 1):
        v ^= v >> shift
    return v & 1


def multiply(
    a: PauliString, b: PauliString, phase_a: complex = 1.0, phase_b: complex = 1.0
) -> tuple[complex, PauliString]:
    """(phase_a·a)(phase_b·b) → (phase, string)."""
    phase, product = a.compose(b)
    return phase_a * phase_b * phase, product


# -----------------------------
# Sums
# -----------------------------
@dataclass(frozen=True)
class PauliSum:
    """
    Weighted sum of Pauli strings over n qubits.

    Construction merges duplicates; use simplify() to drop small terms.
    """

    n: int
    terms: Mapping[PauliString, complex] = field(default_factory=dict)

    def __post_init__(self) -> None:
        merged: dict[PauliString, complex] = {}
        for string, coeff in self.terms.items():
            if string.n != self.n:
                raise ValueError(f"string {string.label} has {string.n} qubits, sum has {self.n}")
            merged[string] = merged.get(string, 0j) + complex(coeff)
        object.__setattr__(self, "terms", merged)

    @staticmethod
    def from_list(items: Iterable[tuple[str, complex]], n: int | None = None) -> "PauliSum":
        pairs = [(PauliString.from_label(label), coeff) for label, coeff in items]
        if n is None:
            if not pairs:
                raise ValueError("qubit count required for an empty sum")
            n = pairs[0][0].n
        out: dict[PauliString, complex] = {}
        for string, coeff in pairs:
            out[string] = out.get(string, 0j) + complex(coeff)
        return PauliSum(n, out)

    @staticmethod
    def identity(n: int, coeff: complex = 1.0) -> "PauliSum":
        return PauliSum(n, {PauliString.identity(n): complex(coeff)})

    @staticmethod
    def zero(n: int) -> "PauliSum":
        return PauliSum(n, {})

    def __len__(self) -> int:
        return len(self.terms)

    def items(self):
        return self.terms.items()

    def coefficient(self, string: PauliString | str) -> complex:
        if isinstance(string, str):
            string = PauliString.from_label(string)
        return self.terms.get(string, 0j)

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if not isinstance(other, PauliSum):
            return NotImplemented
        if other.n != self.n:
            raise ValueError(f"qubit count mismatch: {self.n} vs {other.n}")
        out = dict(self.terms)
        for string, coeff in other.terms.items():
            out[string] = out.get(string, 0j) + coeff
        return PauliSum(self.n, out)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + other * -1.0

    def __neg__(self) -> "PauliSum":
        return self * -1.0

    def __mul__(self, other):
        if isinstance(other, PauliSum):
            if other.n != self.n:
                raise ValueError(f"qubit count mismatch: {self.n} vs {other.n}")
            out: dict[PauliString, complex] = {}
            for s1, c1 in self.terms.items():
                for s2, c2 in other.terms.items():
                    phase, s3 = s1.compose(s2)
                    out[s3] = out.get(s3, 0j) + phase * c1 * c2
            return PauliSum(self.n, out)
        if isinstance(other, (int, float, complex, np.number)):
            return PauliSum(self.n, {s: c * other for s, c in self.terms.items()})
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self * other
        return NotImplemented

    def adjoint(self) -> "PauliSum":
        return PauliSum(self.n, {s: c.conjugate() for s, c in self.terms.items()})

    def simplify(self, tol: float = DEFAULT_DROP_TOL) -> "PauliSum":
        """Drop terms with |coeff| < tol; duplicates are already merged."""
        if tol < 0:
            raise ValueError("tol must be >= 0")
        return PauliSum(self.n, {s: c for s, c in self.terms.items() if abs(c) >= tol})

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return all(abs(c.imag) <= tol for c in self.terms.values())

    def real(self) -> "PauliSum":
        """Drop imaginary parts (caller asserts Hermiticity)."""
        return PauliSum(self.n, {s: complex(c.real) for s, c in self.terms.items()})

    def constant(self) -> complex:
        return self.terms.get(PauliString.identity(self.n), 0j)

    def remove_qubits(self, qubits: Iterable[int]) -> "PauliSum":
        drop = tuple(qubits)
        out: dict[PauliString, complex] = {}
        for string, coeff in self.terms.items():
            reduced = string.remove_qubits(drop)
            out[reduced] = out.get(reduced, 0j) + coeff
        return PauliSum(self.n - len(drop), out)

    @cached_property
    def matrix(self) -> sp.csr_matrix:
        dim = 1 << self.n
        if not self.terms:
            return sp.csr_matrix((dim, dim), dtype=complex)
        rows, cols, vals = [], [], []
        idx = np.arange(dim)
        for string, coeff in self.terms.items():
            perm, signs = _action(string.x, string.z, self.n)
            rows.append(perm)
            cols.append(idx)
            vals.append(coeff * signs)
        return sp.csr_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(dim, dim),
        )

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def apply(self, psi: np.ndarray) -> np.ndarray:
        return self.matrix @ psi

    def to_text(self) -> str:
        """Debug dump, one `coef * LABEL` line per term in label order."""
        lines = []
        for string in sorted(self.terms, key=lambda s: s.label):
            c = self.terms[string]
            lines.append(f"({c.real:+.12g}{c.imag:+.12g}j) * {string.label}")
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.to_text()
