"""
qembed.exact.strings
AUTHOR: carter-vin

Occupation strings (bit masks) and one-spin excitation operators.

Orbital p is bit p of a string. Determinants are
(alpha creators, ascending) (beta creators, ascending) |vac>, so the two
spin sectors carry independent signs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations

import numpy as np
import scipy.sparse as sp


def make_strings(n_orb: int, n_elec: int) -> np.ndarray:
    """All n_orb-bit masks with n_elec set bits, ascending."""
    if not 0 <= n_elec <= n_orb:
        raise ValueError(f"{n_elec} electrons do not fit {n_orb} orbitals")
    masks = [sum(1 << p for p in occ) for occ in combinations(range(n_orb), n_elec)]
    return np.array(sorted(masks), dtype=np.int64)


def mask_to_bits(mask: int, n_orb: int) -> str:
    """Orbital 0 leftmost."""
    return "".join("1" if (mask >> p) & 1 else "0" for p in range(n_orb))


def bits_to_mask(bits: str) -> int:
    return sum(1 << p for p, b in enumerate(bits) if b == "1")


def occupied(mask: int, n_orb: int) -> list[int]:
    return [p for p in range(n_orb) if (mask >> p) & 1]


def excite(mask: int, p: int, r: int) -> tuple[int, int] | None:
    """a†_p a_r on a string: (sign, new mask) or None when it vanishes."""
    if not (mask >> r) & 1:
        return None
    sign = -1 if (mask & ((1 << r) - 1)).bit_count() % 2 else 1
    mask ^= 1 << r
    if (mask >> p) & 1:
        return None
    if (mask & ((1 << p) - 1)).bit_count() % 2:
        sign = -sign
    return sign, mask | (1 << p)


@dataclass(frozen=True, eq=False)
class StringSpace:
    """Strings of one spin sector with their excitation matrices."""

    n_orb: int
    n_elec: int

    @cached_property
    def strings(self) -> np.ndarray:
        return make_strings(self.n_orb, self.n_elec)

    @cached_property
    def index(self) -> dict[int, int]:
        return {int(s): i for i, s in enumerate(self.strings)}

    @property
    def size(self) -> int:
        return len(self.strings)

    @cached_property
    def excitations(self) -> list[sp.csr_matrix]:
        """E[p * n_orb + r][J, I] = <J| a†_p a_r |I>."""
        return _excitation_matrices(self.n_orb, self.n_elec)


@lru_cache(maxsize=64)
def _excitation_matrices(n_orb: int, n_elec: int) -> list[sp.csr_matrix]:
    strings = make_strings(n_orb, n_elec)
    index = {int(s): i for i, s in enumerate(strings)}
    dim = len(strings)
    mats = []
    for p in range(n_orb):
        for r in range(n_orb):
            rows, cols, vals = [], [], []
            for i, s in enumerate(strings):
                hit = excite(int(s), p, r)
                if hit is None:
                    continue
                sign, new = hit
                rows.append(index[new])
                cols.append(i)
                vals.append(float(sign))
            mats.append(sp.csr_matrix((vals, (rows, cols)), shape=(dim, dim)))
    return mats
