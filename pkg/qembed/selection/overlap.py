"""
qembed.selection.overlap
AUTHOR: carter-vin

Density-difference overlap ranking of orbitals.

    ρ_dd   = ρ_full - ρ_adsorbate - ρ_slab
    O_i    = sqrt(|ρ_dd| · ρ_i)            (voxelwise)
    Õ_i[η] = Σ O_i [O_i > η] dV

Occupied and virtual orbitals are ranked separately by descending Õ, ties by id.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from qembed.config import _DEFAULTS
from qembed.logging import emit_event
from qembed.selection.cube import DensityGrid, require_matching

DD_INTEGRAL_TOL = 1e-3
OCCUPIED = "occupied"
VIRTUAL = "virtual"


def density_difference(
    full: DensityGrid, adsorbate: DensityGrid, slab: DensityGrid
) -> DensityGrid:
    """Voxelwise full - adsorbate - slab; raises GridMismatchError on mismatched grids."""
    require_matching(full, adsorbate, slab)
    dd = full.with_values(full.values - adsorbate.values - slab.values)
    integral = dd.integral()
    if abs(integral) > DD_INTEGRAL_TOL:
        emit_event(
            "density_integral_mismatch",
            integral=integral,
            expected=0.0,
            message="density difference does not integrate to zero",
        )
    return dd


def overlap_density(rho_dd: DensityGrid, rho_orb: DensityGrid) -> np.ndarray:
    require_matching(rho_dd, rho_orb)
    if np.any(rho_orb.values < 0.0):
        raise ValueError("orbital density must be non-negative")
    return np.sqrt(np.abs(rho_dd.values) * rho_orb.values)


def thresholded_overlap(rho_dd: DensityGrid, rho_orb: DensityGrid, eta: float) -> float:
    if eta < 0:
        raise ValueError("eta must be >= 0")
    O = overlap_density(rho_dd, rho_orb)
    return _thresholded_sum(O, eta, rho_dd.voxel_volume)


def _thresholded_sum(O: np.ndarray, eta: float, dv: float) -> float:
    return float(O[O > eta].sum() * dv)


# -----------------------------
# Ranking
# -----------------------------
@dataclass(frozen=True)
class OrbitalScore:
    orbital_id: int
    orbital_class: str
    score: float
    rank: int


@dataclass(frozen=True)
class OverlapRanking:
    records: tuple[OrbitalScore, ...]
    eta: float | None

    def ranked(self, orbital_class: str) -> list[OrbitalScore]:
        return [r for r in self.records if r.orbital_class == orbital_class]

    def ids(self, orbital_class: str) -> list[int]:
        return [r.orbital_id for r in self.ranked(orbital_class)]

    def score(self, orbital_id: int) -> float:
        for r in self.records:
            if r.orbital_id == orbital_id:
                return r.score
        raise KeyError(orbital_id)

    def to_dict(self) -> dict[str, Any]:
        return {
            "eta": self.eta,
            "records": [
                {
                    "orbital_id": r.orbital_id,
                    "class": r.orbital_class,
                    "score": r.score,
                    "rank": r.rank,
                }
                for r in self.records
            ],
        }


def ranking_from_scores(
    scores: Mapping[int, float], occupied_ids: Sequence[int], eta: float | None
) -> OverlapRanking:
    occupied = set(occupied_ids)
    unknown = occupied - set(scores)
    if unknown:
        raise ValueError(f"occupied ids without an orbital grid: {sorted(unknown)}")
    records: list[OrbitalScore] = []
    for cls in (OCCUPIED, VIRTUAL):
        members = [i for i in scores if (i in occupied) == (cls == OCCUPIED)]
        members.sort(key=lambda i: (-scores[i], i))
        records.extend(
            OrbitalScore(i, cls, float(scores[i]), rank) for rank, i in enumerate(members, start=1)
        )
    return OverlapRanking(tuple(records), eta)


def rank_orbitals(
    rho_dd: DensityGrid,
    orbital_grids: Mapping[int, DensityGrid],
    occupied_ids: Sequence[int],
    eta: float = _DEFAULTS["selection"]["eta"],
) -> OverlapRanking:
    if eta < 0:
        raise ValueError("eta must be >= 0")
    scores = {
        i: thresholded_overlap(rho_dd, grid, eta) for i, grid in sorted(orbital_grids.items())
    }
    return ranking_from_scores(scores, occupied_ids, eta)


def write_ranking_csv(ranking: OverlapRanking, path: str | Path) -> None:
    """Rows `orbital_id,class,score,rank`."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["orbital_id", "class", "score", "rank"])
        for r in ranking.records:
            writer.writerow([r.orbital_id, r.orbital_class, repr(r.score), r.rank])


def read_ranking_csv(path: str | Path, *, eta: float | None = None) -> OverlapRanking:
    """Inverse of write_ranking_csv; ranks are recomputed from the scores."""
    path = Path(path)
    scores: dict[int, float] = {}
    occupied: list[int] = []
    with path.open("r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or not {"orbital_id", "class", "score"} <= set(
            reader.fieldnames
        ):
            raise ValueError(f"{path}: expected an `orbital_id,class,score,rank` header")
        for row_no, row in enumerate(reader, start=2):
            try:
                orbital_id = int(row["orbital_id"])
                score = float(row["score"])
            except (TypeError, ValueError):
                raise ValueError(f"{path}: row {row_no}: malformed id or score") from None
            cls = (row.get("class") or "").strip()
            if cls not in (OCCUPIED, VIRTUAL):
                raise ValueError(f"{path}: row {row_no}: class must be occupied or virtual")
            if orbital_id in scores:
                raise ValueError(f"{path}: row {row_no}: duplicate orbital {orbital_id}")
            scores[orbital_id] = score
            if cls == OCCUPIED:
                occupied.append(orbital_id)
    return ranking_from_scores(scores, occupied, eta)


# -----------------------------
# η stability
# -----------------------------
@dataclass(frozen=True)
class EtaScan:
    etas: tuple[float, ...]
    rankings: tuple[OverlapRanking, ...]
    stable_interval: tuple[float, float]
    recommended_eta: float
    top_m: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "etas": list(self.etas),
            "stable_interval": list(self.stable_interval),
            "recommended_eta": self.recommended_eta,
            "top_m": self.top_m,
            "orderings": [
                {"eta": r.eta, OCCUPIED: r.ids(OCCUPIED), VIRTUAL: r.ids(VIRTUAL)}
                for r in self.rankings
            ],
        }


def _signature(ranking: OverlapRanking, top_m: int) -> tuple:
    return tuple(ranking.ids(OCCUPIED)[:top_m]), tuple(ranking.ids(VIRTUAL)[:top_m])


def _informative(ranking: OverlapRanking, top_m: int) -> bool:
    """False when a non-empty class scores only zeros in its top m; id order is then arbitrary."""
    for cls in (OCCUPIED, VIRTUAL):
        top = ranking.ranked(cls)[:top_m]
        if top and all(r.score == 0.0 for r in top):
            return False
    return True


def eta_stability_scan(
    rho_dd: DensityGrid,
    orbital_grids: Mapping[int, DensityGrid],
    occupied_ids: Sequence[int],
    eta_list: Sequence[float],
    *,
    top_m: int = _DEFAULTS["selection"]["top_m"],
) -> EtaScan:
    """
    Rankings per η and the longest η interval with an unchanged top-m ordering.

    An η at which either class has only zero scores in its top m breaks any run
    and never joins an interval. The recommended η is the midpoint of the
    interval; ties go to the smaller η.
    """
    etas = [float(e) for e in eta_list]
    if not etas:
        raise ValueError("eta_list must not be empty")
    if any(b < a for a, b in zip(etas, etas[1:])) or etas[0] < 0:
        raise ValueError("eta_list must be ascending and non-negative")
    if top_m < 1:
        raise ValueError("top_m must be >= 1")

    dv = rho_dd.voxel_volume
    overlaps = {i: overlap_density(rho_dd, g) for i, g in sorted(orbital_grids.items())}
    rankings = [
        ranking_from_scores(
            {i: _thresholded_sum(O, eta, dv) for i, O in overlaps.items()}, occupied_ids, eta
        )
        for eta in etas
    ]
    usable = [_informative(r, top_m) for r in rankings]
    if not any(usable):
        raise ValueError(f"every overlap score is zero for all η in {etas}; lower the η values")

    runs: list[tuple[int, int]] = []
    start: int | None = None
    for k in range(len(etas) + 1):
        breaks = k == len(etas) or not usable[k]
        if start is not None and (
            breaks or _signature(rankings[k], top_m) != _signature(rankings[start], top_m)
        ):
            runs.append((start, k - 1))
            start = None
        if start is None and not breaks:
            start = k
    # max keeps the first of equally long runs
    lo_i, hi_i = max(runs, key=lambda r: etas[r[1]] - etas[r[0]])
    lo, hi = etas[lo_i], etas[hi_i]
    return EtaScan(tuple(etas), tuple(rankings), (lo, hi), 0.5 * (lo + hi), top_m)
