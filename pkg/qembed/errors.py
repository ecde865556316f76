"""
qembed.errors
AUTHOR: carter-vin

Error surfaces shared across modules.

- input/contract problems are ValueError subclasses
- resource caps are RuntimeError subclasses
"""

from __future__ import annotations


class FcidumpError(ValueError):
    """Malformed integral file; `line` is 1-based, None for whole-file problems."""

    def __init__(self, message: str, *, line: int | None = None) -> None:
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class SymmetryError(ValueError):
    """Tensor or operator violates a declared symmetry beyond tolerance."""


class GridMismatchError(ValueError):
    """Volumetric grids do not share origin, axes or dims."""


class CubeFormatError(ValueError):
    """Malformed cube file header or value block."""


class DimensionLimitError(RuntimeError):
    """Problem exceeds a configured size cap (determinants, qubits)."""
