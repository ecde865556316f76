"""
qembed.render.table
AUTHOR: carter-vin

Per-k table renderer
"""

from __future__ import annotations

from qembed.model import ReactionReport
from qembed.render.base import Renderer
from qembed.render.utils import format_diff, format_hartree


class TableRenderer(Renderer):
    name = "table"

    def render(self, report: ReactionReport, *, meta: dict) -> str:
        headers = ["K-POINT", "REACTANT", "PRODUCT", "DIFF"]
        reactant = report.energies["reactant"]
        product = report.energies["product"]
        labels = list(meta.get("kpoints") or reactant.per_k or product.per_k)

        rows = [headers]
        for k in labels:
            r = reactant.per_k.get(k)
            p = product.per_k.get(k)
            rows.append([k, format_hartree(r), format_hartree(p), format_diff(r, p)])
        rows.append(
            [
                "AVERAGE",
                format_hartree(reactant.twist_average),
                format_hartree(product.twist_average),
                format_diff(reactant.twist_average, product.twist_average),
            ]
        )

        widths = [max(len(row[i]) for row in rows) for i in range(len(headers))]
        lines: list[str] = []

        for row in rows:
            padded = [row[i].ljust(widths[i]) for i in range(len(headers))]
            lines.append("  ".join(padded).rstrip())

        return "\n".join(lines)
