"""qembed.selection package exports."""

from qembed.selection.active_space import build_dd_active_space, build_no_active_space
from qembed.selection.cube import load_cube, write_cube
from qembed.selection.overlap import density_difference, eta_stability_scan, rank_orbitals

__all__ = [
    "build_dd_active_space",
    "build_no_active_space",
    "density_difference",
    "eta_stability_scan",
    "load_cube",
    "rank_orbitals",
    "write_cube",
]
