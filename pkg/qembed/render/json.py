"""
qembed.render.json
AUTHOR: carter-vin

JSON renderer wrapper
"""

from __future__ import annotations

from qembed.model import ReactionReport, report_to_json
from qembed.render.base import Renderer


class JsonRenderer(Renderer):
    name = "json"

    def render(self, report: ReactionReport, *, meta: dict) -> str:
        return report_to_json(report)
