"""
qembed.selection.active_space
AUTHOR: carter-vin

Active-space construction from an overlap ranking.

The input Hamiltonian is closed shell with its first n_occ orbitals doubly
occupied; orbital ids are indices into it.

DD:     top n_occ_select occupied by Õ; virtuals by Σ_i |e_ia| (MP2 pair
        energies over the selected occupied); the budget is split evenly,
        occupied first.
DD+NO:  natural orbitals of the (selected occupied + all virtual) window, grown
        symmetrically from the HONO/LUNO pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from qembed.exact.casci import (
    MAX_DETERMINANTS,
    NaturalOrbitals,
    casci_ground_state,
    ci_dimension,
    natural_orbitals,
    one_rdm,
)
from qembed.exact.mp2 import mp2_one_rdm, mp2_pair_energies
from qembed.hamiltonian.core import (
    ActiveSpaceHamiltonian,
    OrbitalSpace,
    freeze_and_project,
    rotate_orbitals,
)
from qembed.logging import emit_event
from qembed.selection.overlap import OCCUPIED, VIRTUAL, OverlapRanking

PAIR_ENERGY_FLOOR = 1e-14


def _closed_shell_occupied(H: ActiveSpaceHamiltonian, n_occ: int | None) -> int:
    if n_occ is None:
        if H.n_electrons is None or H.n_electrons % 2:
            raise ValueError("n_occ is required unless the Hamiltonian has an even electron count")
        n_occ = H.n_electrons // 2
    if not 0 < n_occ < H.n:
        raise ValueError(f"n_occ={n_occ} must leave occupied and virtual orbitals in {H.n}")
    return n_occ


def _window_space(n: int, n_occ: int, selected_occ: Sequence[int]) -> OrbitalSpace:
    selected = sorted(int(i) for i in selected_occ)
    if not selected:
        raise ValueError("at least one occupied orbital must be selected")
    if any(not 0 <= i < n_occ for i in selected) or len(set(selected)) != len(selected):
        raise ValueError(f"selected occupied orbitals {selected} are not distinct ids < {n_occ}")
    frozen = [i for i in range(n_occ) if i not in selected]
    window = selected + list(range(n_occ, n))
    return OrbitalSpace(tuple(frozen), tuple(window), (), len(selected), len(selected))


def select_occupied(ranking: OverlapRanking, n_occ_select: int) -> list[int]:
    occupied = ranking.ids(OCCUPIED)
    if n_occ_select < 1:
        raise ValueError("n_occ_select must be >= 1")
    return occupied[:n_occ_select]


# -----------------------------
# DD
# -----------------------------
@dataclass(frozen=True, eq=False)
class DdSelection:
    space: OrbitalSpace
    occupied_order: tuple[int, ...]
    virtual_order: tuple[int, ...]
    virtual_scores: dict[int, float]
    fallback: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "method": "dd",
            "space": self.space.to_dict(),
            "occupied_order": list(self.occupied_order),
            "virtual_order": list(self.virtual_order),
            "virtual_scores": {str(k): v for k, v in sorted(self.virtual_scores.items())},
            "fallback": self.fallback,
        }


def virtual_pair_scores(
    H: ActiveSpaceHamiltonian, selected_occ: Sequence[int], n_occ: int
) -> dict[int, float]:
    """Σ_i |e_ia| over the selected occupied set, keyed by original virtual id."""
    space = _window_space(H.n, n_occ, selected_occ)
    Hw = freeze_and_project(H, space)
    pairs = mp2_pair_energies(Hw, space.n_alpha_active)
    scores = np.abs(pairs.occ_virt).sum(axis=0)
    return {a: float(s) for a, s in zip(range(n_occ, H.n), scores)}


def build_dd_active_space(
    ranking: OverlapRanking,
    n_occ_select: int,
    H: ActiveSpaceHamiltonian,
    budget: int,
    *,
    n_occ: int | None = None,
) -> DdSelection:
    """
    Raises ValueError for a budget < 2 or ranking ids outside H.
    """
    n_occ = _closed_shell_occupied(H, n_occ)
    if budget < 2:
        raise ValueError("budget must be >= 2")
    selected = select_occupied(ranking, n_occ_select)
    ranked_virtuals = ranking.ids(VIRTUAL)
    virtuals = list(range(n_occ, H.n))
    if any(i >= n_occ for i in selected) or any(a not in virtuals for a in ranked_virtuals):
        raise ValueError("ranking ids do not match the occupied/virtual split of the Hamiltonian")

    overlap_pos = {a: k for k, a in enumerate(ranked_virtuals)}
    scores = virtual_pair_scores(H, selected, n_occ)
    fallback = max(scores.values(), default=0.0) < PAIR_ENERGY_FLOOR
    if fallback:
        order = sorted(virtuals, key=lambda a: (overlap_pos.get(a, len(virtuals)), a))
    else:
        order = sorted(
            virtuals, key=lambda a: (-scores[a], overlap_pos.get(a, len(virtuals)), a)
        )

    n_o = min(len(selected), (budget + 1) // 2)
    n_v = min(len(order), budget - n_o)
    n_o = min(len(selected), budget - n_v)
    chosen_occ = selected[:n_o]
    chosen_virt = order[:n_v]
    space = OrbitalSpace(
        frozen_occ=tuple(i for i in range(n_occ) if i not in chosen_occ),
        active=tuple(sorted(chosen_occ) + sorted(chosen_virt)),
        virtual_frozen=tuple(a for a in virtuals if a not in chosen_virt),
        n_alpha_active=n_o,
        n_beta_active=n_o,
    )
    space.validate_for(H.n)
    return DdSelection(space, tuple(selected), tuple(order), scores, fallback)


# -----------------------------
# DD+NO
# -----------------------------
@dataclass(frozen=True, eq=False)
class NoSelection:
    """
    space indexes the natural-orbital basis of the window; hamiltonian is the
    window Hamiltonian in that basis (core already folded in).
    """

    space: OrbitalSpace
    rotation: np.ndarray
    hamiltonian: ActiveSpaceHamiltonian
    window: tuple[int, ...]
    occupations: np.ndarray
    rdm_source: str
    frontier: tuple[int, int]
    threshold_frontier: tuple[int | None, int | None]

    def to_dict(self) -> dict[str, Any]:
        return {
            "method": "dd_no",
            "space": self.space.to_dict(),
            "window": list(self.window),
            "occupations": [float(x) for x in self.occupations],
            "rdm_source": self.rdm_source,
            "frontier": list(self.frontier),
            "threshold_frontier": list(self.threshold_frontier),
        }


def no_frontier(nos: NaturalOrbitals, n_sel: int) -> tuple[int, int]:
    """
    HONO/LUNO of the window: the n_sel-th and (n_sel+1)-th natural orbitals.

    The occupation-threshold indices of nos are only checked against this;
    a mismatch emits occupation_ambiguous.
    """
    hono, luno = n_sel - 1, n_sel
    if (nos.hono, nos.luno) != (hono, luno):
        emit_event(
            "occupation_ambiguous",
            hono=hono,
            luno=luno,
            threshold_hono=nos.hono,
            threshold_luno=nos.luno,
            occupations=[round(float(x), 6) for x in nos.occupations],
            message="occupation threshold and electron count disagree on the HONO/LUNO pair",
        )
    return hono, luno


def build_no_active_space(
    H: ActiveSpaceHamiltonian,
    selected_occ: Sequence[int],
    budget: int,
    *,
    n_occ: int | None = None,
    max_determinants: int = MAX_DETERMINANTS,
) -> NoSelection:
    """
    Natural orbitals of the window 1-RDM (CASCI within max_determinants, else MP2);
    active = NOs HONO-j+1 .. LUNO+j-1 for budget 2j, clipped to the window.
    """
    n_occ = _closed_shell_occupied(H, n_occ)
    if budget < 2 or budget % 2:
        raise ValueError("budget must be an even number >= 2")
    window_space = _window_space(H.n, n_occ, selected_occ)
    Hw = freeze_and_project(H, window_space)
    n_sel = window_space.n_alpha_active

    if ci_dimension(Hw.n, n_sel, n_sel) <= max_determinants:
        rdm = one_rdm(casci_ground_state(Hw, n_sel, n_sel, max_determinants=max_determinants))
        source = "casci"
    else:
        rdm = mp2_one_rdm(Hw, n_sel)
        source = "mp2"

    nos = natural_orbitals(rdm)
    hono, luno = no_frontier(nos, n_sel)
    half = budget // 2
    start = max(hono - half + 1, 0)
    stop = min(luno + half, Hw.n)

    rotated = rotate_orbitals(Hw, nos.rotation)
    space = OrbitalSpace(
        frozen_occ=tuple(range(start)),
        active=tuple(range(start, stop)),
        virtual_frozen=tuple(range(stop, Hw.n)),
        n_alpha_active=n_sel - start,
        n_beta_active=n_sel - start,
    )
    space.validate_for(Hw.n)
    return NoSelection(
        space=space,
        rotation=nos.rotation,
        hamiltonian=rotated,
        window=window_space.active,
        occupations=nos.occupations,
        rdm_source=source,
        frontier=(hono, luno),
        threshold_frontier=(nos.hono, nos.luno),
    )


def window_energy(
    H: ActiveSpaceHamiltonian, selected_occ: Sequence[int], *, n_occ: int | None = None
) -> float:
    """CASCI energy of the whole (selected occupied + all virtual) window."""
    n_occ = _closed_shell_occupied(H, n_occ)
    space = _window_space(H.n, n_occ, selected_occ)
    Hw = freeze_and_project(H, space)
    return casci_ground_state(Hw, space.n_alpha_active, space.n_beta_active).energy


def space_energy(H: ActiveSpaceHamiltonian, space: OrbitalSpace) -> float:
    """CASCI energy inside an active space, frozen core folded in."""
    Hp = freeze_and_project(H, space)
    return casci_ground_state(Hp, space.n_alpha_active, space.n_beta_active).energy


__all__ = [
    "DdSelection",
    "NoSelection",
    "build_dd_active_space",
    "build_no_active_space",
    "no_frontier",
    "select_occupied",
    "space_energy",
    "virtual_pair_scores",
    "window_energy",
]
