"""Deterministic CSV/SVG/JSON emission with atomic file replacement."""
from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np


def fmt(x) -> str:
    """Shortest round-trip decimal representation."""
    return repr(float(x))


def csv_text(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, default=_json_default) + "\n"


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def write_atomic(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


def svg_lines(t, series: dict, *, title="", width=720, height=420, markers: dict | None = None) -> str:
    """Minimal SVG line plot: one polyline per series, optional circle markers."""
    t = np.asarray(t, dtype=float)
    pad_l, pad_r, pad_t, pad_b = 70, 120, 30, 40
    all_y = [np.asarray(v, dtype=float) for v in series.values()]
    if markers:
        all_y += [np.asarray(v[1], dtype=float) for v in markers.values()]
    y_max = max(float(np.max(y)) for y in all_y) if all_y else 1.0
    y_max = y_max if y_max > 0 else 1.0
    t_min, t_max = float(t[0]), float(t[-1])
    t_span = t_max - t_min or 1.0

    def X(v):
        return pad_l + (v - t_min) / t_span * (width - pad_l - pad_r)

    def Y(v):
        return height - pad_b - v / y_max * (height - pad_t - pad_b)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" font-size="14">{title}</text>',
        f'<line x1="{pad_l}" y1="{Y(0):.2f}" x2="{width - pad_r}" y2="{Y(0):.2f}" stroke="black"/>',
        f'<line x1="{pad_l}" y1="{pad_t}" x2="{pad_l}" y2="{height - pad_b}" stroke="black"/>',
        f'<text x="{pad_l}" y="{height - 10}" font-size="11">{t_min:g}</text>',
        f'<text x="{width - pad_r}" y="{height - 10}" font-size="11" text-anchor="end">{t_max:g}</text>',
        f'<text x="{pad_l - 5}" y="{pad_t + 4}" font-size="11" text-anchor="end">{y_max:.4g}</text>',
    ]
    for i, (name, y) in enumerate(series.items()):
        color = COLORS[i % len(COLORS)]
        pts = " ".join(f"{X(a):.2f},{Y(b):.2f}" for a, b in zip(t, y))
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = pad_t + 16 * i + 10
        parts.append(f'<text x="{width - pad_r + 10}" y="{ly}" font-size="12" fill="{color}">{name}</text>')
    for i, (name, (mt, my)) in enumerate((markers or {}).items()):
        color = COLORS[i % len(COLORS)]
        for a, b in zip(mt, my):
            parts.append(f'<circle cx="{X(a):.2f}" cy="{Y(b):.2f}" r="3" fill="none" stroke="{color}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
