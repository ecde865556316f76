"""
qembed.render.base
AUTHOR: carter-vin

Renderer interface
"""

from __future__ import annotations

from qembed.model import ReactionReport


class Renderer:
    name: str = "base"

    def render(self, report: ReactionReport, *, meta: dict) -> str:
        raise NotImplementedError
