"""
qembed.render.utils
AUTHOR: carter-vin

Formatting helpers for renderers
"""

from __future__ import annotations


def format_hartree(value: float | None) -> str:
    if value is None:
        return "n/a"
    return f"{value:.8f}"


def format_ev(value: float | None) -> str:
    if value is None:
        return "n/a"
    return f"{value:.4f}"


def format_diff(a: float | None, b: float | None) -> str:
    if a is None or b is None:
        return "n/a"
    return f"{b - a:+.8f}"
