"""
qembed.selection.cube
AUTHOR: carter-vin

Gaussian cube volumetric grids.

Format:
- two comment lines
- natoms, origin (natoms < 0 marks an orbital cube with an extra id line after the atoms)
- three axis lines: N and the voxel step; N < 0 means the step is in Ångström
- |natoms| atom lines: Z, charge, x, y, z
- values, z fastest

Grids are held in Bohr; orbital-amplitude cubes are squared on load.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from qembed.errors import CubeFormatError, GridMismatchError
from qembed.logging import emit_event

ANGSTROM_TO_BOHR = 1.0 / 0.529177210903
GRID_TOL = 1e-8
ELECTRON_COUNT_TOL = 0.01


@dataclass(frozen=True, eq=False)
class DensityGrid:
    """
    origin: (3,) Bohr; axes: (3, 3) voxel step vectors (rows); values: (nx, ny, nz).
    """

    origin: np.ndarray
    axes: np.ndarray
    values: np.ndarray
    atoms: np.ndarray = field(default_factory=lambda: np.zeros((0, 5)))
    comment: str = ""

    def __post_init__(self) -> None:
        origin = np.asarray(self.origin, dtype=float).reshape(3)
        axes = np.asarray(self.axes, dtype=float).reshape(3, 3)
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 3 or min(values.shape) < 1:
            raise ValueError(f"grid values must be a non-empty 3-d array, got {values.shape}")
        if abs(np.linalg.det(axes)) <= 0.0:
            raise ValueError("voxel axes are degenerate")
        for name, arr in (("origin", origin), ("axes", axes), ("values", values)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def dims(self) -> tuple[int, int, int]:
        return tuple(int(d) for d in self.values.shape)  # type: ignore[return-value]

    @property
    def voxel_volume(self) -> float:
        return float(abs(np.linalg.det(self.axes)))

    def integral(self) -> float:
        return float(self.values.sum() * self.voxel_volume)

    def with_values(self, values: np.ndarray) -> "DensityGrid":
        return DensityGrid(self.origin, self.axes, values, self.atoms, self.comment)

    def matches(self, other: "DensityGrid", tol: float = GRID_TOL) -> bool:
        return (
            self.dims == other.dims
            and np.allclose(self.origin, other.origin, rtol=0.0, atol=tol)
            and np.allclose(self.axes, other.axes, rtol=0.0, atol=tol)
        )

    def points(self) -> np.ndarray:
        """Cartesian voxel positions, shape (nx, ny, nz, 3)."""
        idx = np.indices(self.dims).transpose(1, 2, 3, 0).astype(float)
        return self.origin + idx @ self.axes


def require_matching(*grids: DensityGrid, tol: float = GRID_TOL) -> None:
    first = grids[0]
    for other in grids[1:]:
        if not first.matches(other, tol):
            raise GridMismatchError(
                f"grid mismatch: dims {first.dims} vs {other.dims} or origin/axes differ "
                f"beyond {tol} Bohr"
            )


# -----------------------------
# Read / write
# -----------------------------
def parse_cube(text: str, *, square: bool | None = None) -> DensityGrid:
    """
    Parse cube text. square=None squares orbital cubes (natoms < 0) only.

    Raises CubeFormatError on a malformed header or a value-count mismatch.
    """
    lines = text.splitlines()
    if len(lines) < 6:
        raise CubeFormatError("cube header is truncated")
    comment = "\n".join(lines[:2])
    try:
        head = lines[2].split()
        natoms = int(head[0])
        origin = np.array([float(v) for v in head[1:4]])
        counts = []
        axes = np.zeros((3, 3))
        for i in range(3):
            fields = lines[3 + i].split()
            counts.append(int(fields[0]))
            axes[i] = [float(v) for v in fields[1:4]]
    except (IndexError, ValueError) as e:
        raise CubeFormatError(f"malformed cube header: {e}") from None
    if any(c == 0 for c in counts):
        raise CubeFormatError("voxel counts must be nonzero")

    angstrom = any(c < 0 for c in counts)
    dims = tuple(abs(c) for c in counts)
    pos = 6
    atoms = []
    for _ in range(abs(natoms)):
        if pos >= len(lines):
            raise CubeFormatError("cube atom block is truncated")
        try:
            atoms.append([float(v) for v in lines[pos].split()[:5]])
        except ValueError as e:
            raise CubeFormatError(f"malformed atom line {pos + 1}: {e}") from None
        pos += 1
    orbital_cube = natoms < 0
    if orbital_cube:
        pos += 1  # orbital id line
    atoms_arr = np.array(atoms, dtype=float).reshape(-1, 5)
    if angstrom:
        axes *= ANGSTROM_TO_BOHR
        origin *= ANGSTROM_TO_BOHR
        atoms_arr[:, 2:] *= ANGSTROM_TO_BOHR

    try:
        flat = np.array(" ".join(lines[pos:]).split(), dtype=float)
    except ValueError as e:
        raise CubeFormatError(f"malformed cube values: {e}") from None
    expected = dims[0] * dims[1] * dims[2]
    if flat.size != expected:
        raise CubeFormatError(f"expected {expected} values, found {flat.size}")
    values = flat.reshape(dims)
    if square is None:
        square = orbital_cube
    if square:
        values = values**2
    return DensityGrid(origin, axes, values, atoms_arr, comment)


def load_cube(path: str | Path, *, square: bool | None = None) -> DensityGrid:
    return parse_cube(Path(path).read_text(encoding="utf-8"), square=square)


def format_cube(grid: DensityGrid) -> str:
    comment = grid.comment.splitlines() if grid.comment else []
    comment = (comment + ["", ""])[:2]
    out = list(comment)
    out.append(f"{len(grid.atoms):5d} " + " ".join(f"{v: .16e}" for v in grid.origin))
    for n, axis in zip(grid.dims, grid.axes):
        out.append(f"{n:5d} " + " ".join(f"{v: .16e}" for v in axis))
    for atom in grid.atoms:
        out.append(f"{int(atom[0]):5d} " + " ".join(f"{v: .16e}" for v in atom[1:]))
    flat = grid.values.reshape(-1)
    for start in range(0, flat.size, 6):
        out.append(" ".join(f"{v: .16e}" for v in flat[start : start + 6]))
    return "\n".join(out) + "\n"


def write_cube(grid: DensityGrid, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_cube(grid), encoding="utf-8")


def validate_electron_count(
    grid: DensityGrid, n_electrons: float, *, tol: float = ELECTRON_COUNT_TOL
) -> float:
    """Relative deviation of the integrated density from n_electrons; event above tol."""
    if n_electrons <= 0:
        raise ValueError("n_electrons must be > 0")
    deviation = abs(grid.integral() - n_electrons) / n_electrons
    if deviation > tol:
        emit_event(
            "density_integral_mismatch",
            integral=grid.integral(),
            expected=n_electrons,
            deviation=deviation,
            message="integrated density does not match the electron count",
        )
    return deviation
