"""Radar-chart SVG for scorecards: one pentagon per model over five axes.

Plain string assembly with fixed-precision coordinates keeps the output
byte-deterministic and easy to assert against.
"""

from __future__ import annotations

import math

from .scorecard import DIMENSION_TITLES, DIMENSIONS, ScoreCard

PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b")

WIDTH = 560
HEIGHT = 560
CENTER_X = 280.0
CENTER_Y = 280.0
RADIUS = 180.0
MAX_SCORE = 5.0


def _vertex(axis: int, score: float) -> tuple[float, float]:
    angle = math.pi / 2 - 2.0 * math.pi * axis / len(DIMENSIONS)
    r = RADIUS * score / MAX_SCORE
    return CENTER_X + r * math.cos(angle), CENTER_Y - r * math.sin(angle)


def _points(scores: list[float]) -> str:
    return " ".join(f"{x:.2f},{y:.2f}" for x, y in (_vertex(i, s) for i, s in enumerate(scores)))


def radar_chart_svg(cards: list[ScoreCard]) -> str:
    """SVG with 5 labeled axes, ring guides at 1..5, and one polygon per card."""
    if not cards:
        raise ValueError("radar chart needs at least one scorecard")
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        '<g class="rings">',
    ]
    for ring in range(1, 6):
        parts.append(
            f'<polygon class="ring" points="{_points([float(ring)] * 5)}" '
            'fill="none" stroke="#d0d0d0" stroke-width="1"/>'
        )
    parts.append("</g>")
    parts.append('<g class="axes">')
    for i in range(len(DIMENSIONS)):
        x, y = _vertex(i, MAX_SCORE)
        parts.append(
            f'<line class="axis" x1="{CENTER_X:.2f}" y1="{CENTER_Y:.2f}" '
            f'x2="{x:.2f}" y2="{y:.2f}" stroke="#808080" stroke-width="1"/>'
        )
    parts.append("</g>")
    parts.append('<g class="labels" font-family="sans-serif" font-size="14">')
    for i, dim in enumerate(DIMENSIONS):
        x, y = _vertex(i, MAX_SCORE * 1.17)
        anchor = "middle"
        if x < CENTER_X - 1.0:
            anchor = "end"
        elif x > CENTER_X + 1.0:
            anchor = "start"
        parts.append(
            f'<text class="axis-label" x="{x:.2f}" y="{y:.2f}" '
            f'text-anchor="{anchor}">{DIMENSION_TITLES[dim]}</text>'
        )
    parts.append("</g>")
    for idx, card in enumerate(cards):
        color = PALETTE[idx % len(PALETTE)]
        scores = [card.scores[d].score for d in DIMENSIONS]
        parts.append(
            f'<polygon class="model-polygon" data-model="{card.model_kind}" '
            f'points="{_points(scores)}" fill="{color}" fill-opacity="0.15" '
            f'stroke="{color}" stroke-width="2"/>'
        )
    parts.append('<g class="legend" font-family="sans-serif" font-size="14">')
    for idx, card in enumerate(cards):
        color = PALETTE[idx % len(PALETTE)]
        y = 24 + 20 * idx
        parts.append(f'<rect x="16" y="{y - 12}" width="14" height="14" fill="{color}"/>')
        parts.append(
            f'<text class="legend-label" x="36" y="{y}">'
            f"{card.model_kind} (composite {card.composite_score:.2f})</text>"
        )
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
