"""Correlation-circle rendering as a standalone SVG document."""

from __future__ import annotations

from xml.sax.saxutils import escape

PANEL = 400
RADIUS = 160  # pixels per data unit


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _panel(coords, labels, title: str, offset: float) -> list[str]:
    cx, cy = offset + PANEL / 2, PANEL / 2 + 20
    out = [
        '<g class="panel">',
        f'<text x="{_fmt(cx)}" y="16" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{RADIUS}" fill="none" stroke="black"/>',
        f'<line x1="{_fmt(cx - RADIUS - 10)}" y1="{_fmt(cy)}" x2="{_fmt(cx + RADIUS + 10)}" y2="{_fmt(cy)}" stroke="grey"/>',
        f'<line x1="{_fmt(cx)}" y1="{_fmt(cy - RADIUS - 10)}" x2="{_fmt(cx)}" y2="{_fmt(cy + RADIUS + 10)}" stroke="grey"/>',
        f'<text x="{_fmt(cx + RADIUS + 12)}" y="{_fmt(cy + 4)}" font-size="12">C1</text>',
        f'<text x="{_fmt(cx + 4)}" y="{_fmt(cy - RADIUS - 12)}" font-size="12">C2</text>',
    ]
    for (x, y), label in zip(coords, labels):
        tx, ty = cx + RADIUS * float(x), cy - RADIUS * float(y)
        out.append(
            f'<line class="arrow" x1="{_fmt(cx)}" y1="{_fmt(cy)}" x2="{_fmt(tx)}" y2="{_fmt(ty)}" '
            f'stroke="steelblue" marker-end="url(#head)" data-x="{float(x)!r}" data-y="{float(y)!r}"/>'
        )
        out.append(f'<text x="{_fmt(tx + 4)}" y="{_fmt(ty - 4)}" font-size="11">{escape(label)}</text>')
    out.append("</g>")
    return out


def circle_svg(coords, labels, pearson=None) -> str:
    """One panel for the Riemannian coordinates, plus a Pearson panel on the left if given.

    The unit circle has radius ``RADIUS`` pixels; arrow tips are at
    ``RADIUS * (x, -y)`` from the panel center.
    """
    panels = [("Pearson correlation", pearson)] if pearson is not None else []
    panels.append(("Riemannian correlation", coords))
    width = PANEL * len(panels)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{PANEL + 40}" '
        f'viewBox="0 0 {width} {PANEL + 40}">',
        '<defs><marker id="head" markerWidth="8" markerHeight="8" refX="6" refY="3" orient="auto">'
        '<path d="M0,0 L6,3 L0,6 z" fill="steelblue"/></marker></defs>',
    ]
    for i, (title, c) in enumerate(panels):
        lines.extend(_panel(c, labels, title, i * PANEL))
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
