"""Plain-text SVG charts. Coordinates are written with fixed precision so output is diffable."""
from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 400
MARGIN = 56


def _f(x: float) -> str:
    return f"{x:.2f}"


def _doc(body: list[str], width: int = WIDTH, height: int = HEIGHT) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">')
    return "\n".join([head, f'<rect width="{width}" height="{height}" fill="white"/>', *body, "</svg>", ""])


def bar_chart(labels: Sequence[str], values: Sequence[float], title: str, highlight: Sequence[bool] | None = None) -> str:
    """Vertical bars, one per label; highlighted bars are drawn darker."""
    n = len(labels)
    top = max([float(v) for v in values] + [0.0]) or 1.0
    plot_w, plot_h = WIDTH - 2 * MARGIN, HEIGHT - 2 * MARGIN
    slot = plot_w / max(n, 1)
    base = HEIGHT - MARGIN
    body = [f'<text x="{WIDTH / 2:.0f}" y="{MARGIN / 2:.0f}" text-anchor="middle" font-size="14">{escape(title)}</text>',
            f'<line x1="{MARGIN}" y1="{base}" x2="{WIDTH - MARGIN}" y2="{base}" stroke="black"/>',
            f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{base}" stroke="black"/>',
            f'<text x="{MARGIN - 6}" y="{MARGIN + 4}" text-anchor="end">{_num(top)}</text>',
            f'<text x="{MARGIN - 6}" y="{base + 4}" text-anchor="end">0</text>']
    for i, (label, value) in enumerate(zip(labels, values)):
        h = plot_h * float(value) / top
        x = MARGIN + i * slot + slot * 0.15
        fill = "#335c99" if highlight is not None and highlight[i] else "#8fa8cc"
        body.append(f'<rect x="{_f(x)}" y="{_f(base - h)}" width="{_f(slot * 0.7)}" height="{_f(h)}" fill="{fill}">'
                    f'<title>{escape(label)}: {_num(value)}</title></rect>')
        cx = MARGIN + (i + 0.5) * slot
        body.append(f'<text x="{_f(cx)}" y="{base + 16}" text-anchor="middle">{escape(label)}</text>')
        body.append(f'<text x="{_f(cx)}" y="{_f(base - h - 4)}" text-anchor="middle" font-size="10">{_num(value)}</text>')
    return _doc(body)


def scatter(labels: Sequence[str], points: Sequence[Sequence[float]], title: str,
            reference: Sequence[Sequence[float]] | None = None) -> str:
    """Labeled 2-D points; optional reference points drawn as hollow circles."""
    pts = [tuple(map(float, p)) for p in points]
    ref = [tuple(map(float, p)) for p in reference] if reference is not None else []
    extent = max([abs(c) for p in pts + ref for c in p] + [1e-12]) * 1.15
    size = min(WIDTH, HEIGHT) - 2 * MARGIN
    cx0, cy0 = WIDTH / 2, HEIGHT / 2 + 10

    def to_px(p):
        return cx0 + p[0] / extent * size / 2, cy0 - p[1] / extent * size / 2

    body = [f'<text x="{WIDTH / 2:.0f}" y="{MARGIN / 2:.0f}" text-anchor="middle" font-size="14">{escape(title)}</text>',
            f'<line x1="{_f(cx0 - size / 2)}" y1="{_f(cy0)}" x2="{_f(cx0 + size / 2)}" y2="{_f(cy0)}" stroke="#cccccc"/>',
            f'<line x1="{_f(cx0)}" y1="{_f(cy0 - size / 2)}" x2="{_f(cx0)}" y2="{_f(cy0 + size / 2)}" stroke="#cccccc"/>']
    for p in ref:
        x, y = to_px(p)
        body.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="5" fill="none" stroke="#999999"/>')
    for label, p in zip(labels, pts):
        x, y = to_px(p)
        body.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="4" fill="#335c99"/>')
        body.append(f'<text x="{_f(x + 7)}" y="{_f(y - 6)}">{escape(label)}</text>')
    return _doc(body)


def _num(v: float) -> str:
    v = float(v)
    return str(int(v)) if v.is_integer() else f"{v:.2f}"
