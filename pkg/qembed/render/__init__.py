"""qembed.render registry."""

from __future__ import annotations

from qembed.render.base import Renderer
from qembed.render.json import JsonRenderer
from qembed.render.table import TableRenderer
from qembed.render.text import TextRenderer

_RENDERERS: dict[str, Renderer] = {
    "json": JsonRenderer(),
    "text": TextRenderer(),
    "table": TableRenderer(),
}

RENDERER_NAMES = tuple(sorted(_RENDERERS))


def get_renderer(name: str) -> Renderer:
    if name not in _RENDERERS:
        raise ValueError(f"unknown renderer: {name}")
    return _RENDERERS[name]
