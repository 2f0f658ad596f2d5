"""Plain-text tables, CSV and SVG bar charts for CLI reports."""

from __future__ import annotations

import csv
import io
import json
from typing import Any, Sequence
from xml.sax.saxutils import escape


def num(x: float) -> str:
    return f"{x:.6f}"


def table(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    cells = [[num(c) if isinstance(c, float) else str(c) for c in row] for row in rows]
    widths = [len(h) for h in headers]
    for row in cells:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]
    # first column left-aligned, the rest right-aligned
    def line(row):
        parts = [row[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(row[1:], widths[1:])]
        return "  ".join(parts).rstrip()
    out = [line(list(headers)), "  ".join("-" * w for w in widths)]
    out += [line(r) for r in cells]
    return "\n".join(out) + "\n"


def csv_text(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(headers)
    for row in rows:
        w.writerow([repr(c) if isinstance(c, float) else c for c in row])
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def text_bars(labels: Sequence[str], values: Sequence[float], width: int = 40) -> str:
    top = max(values, default=0) or 1
    lw = max((len(lab) for lab in labels), default=0)
    vals = [str(v) if isinstance(v, int) else num(v) for v in values]
    vw = max((len(v) for v in vals), default=0)
    lines = []
    for lab, v, s in zip(labels, values, vals):
        bar = "#" * round(width * v / top)
        lines.append(f"{lab.ljust(lw)}  {s.rjust(vw)}  {bar}".rstrip())
    return "\n".join(lines) + "\n"


def svg_bar_chart(labels: Sequence[str], values: Sequence[float], title: str) -> str:
    """Vertical bar chart with fixed geometry, so output depends only on the data."""
    bar_w, gap, height, pad_l, pad_b, pad_t = 40, 10, 200, 50, 90, 30
    n = len(values)
    width = pad_l + n * (bar_w + gap) + gap
    top = max(values, default=0) or 1
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height + pad_b + pad_t}" '
        f'viewBox="0 0 {width} {height + pad_b + pad_t}">',
        f'<text x="{pad_l}" y="18" font-family="monospace" font-size="12">{escape(title)}</text>',
        f'<line x1="{pad_l}" y1="{pad_t + height}" x2="{width}" y2="{pad_t + height}" stroke="black"/>',
    ]
    for i, (lab, v) in enumerate(zip(labels, values)):
        h = height * v / top
        x = pad_l + gap + i * (bar_w + gap)
        y = pad_t + height - h
        shown = str(v) if isinstance(v, int) else f"{v:.3f}"
        parts.append(f'<rect x="{x}" y="{y:.3f}" width="{bar_w}" height="{h:.3f}" fill="steelblue"/>')
        parts.append(f'<text x="{x + bar_w / 2:.1f}" y="{y - 3:.3f}" font-family="monospace" '
                     f'font-size="10" text-anchor="middle">{shown}</text>')
        lx, ly = x + bar_w / 2, pad_t + height + 12
        parts.append(f'<text x="{lx:.1f}" y="{ly}" font-family="monospace" font-size="10" '
                     f'text-anchor="end" transform="rotate(-45 {lx:.1f} {ly})">{escape(lab)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
