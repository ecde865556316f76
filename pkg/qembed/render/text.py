"""
qembed.render.text
AUTHOR: carter-vin

One line per geometry, then ΔE
"""

from __future__ import annotations

from qembed.model import GEOMETRIES, ReactionReport
from qembed.render.base import Renderer
from qembed.render.utils import format_ev, format_hartree


class TextRenderer(Renderer):
    name = "text"

    def render(self, report: ReactionReport, *, meta: dict) -> str:
        lines = []
        for geometry in GEOMETRIES:
            block = report.energies[geometry]
            lines.append(
                f"{geometry} label={block.label} n_k={len(block.per_k)}"
                f" twist_average={format_hartree(block.twist_average)}"
            )
        de = report.delta_e
        lines.append(
            f"delta_e hartree={format_hartree(de.hartree if de else None)}"
            f" ev={format_ev(de.ev if de else None)}"
            f" method={report.meta.method} partial={str(report.partial).lower()}"
        )
        for f in report.failures:
            lines.append(f"failed {f.geometry}/{f.kpoint}: {f.error_type}: {f.message}")
        return "\n".join(lines)
