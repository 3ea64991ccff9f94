"""Self-contained SVG plots: evolution heatmaps, dispersion bands, histograms.

Everything is emitted on a fixed 800x600 canvas with deterministic element
ordering and fixed-precision coordinates, so identical inputs give
byte-identical documents.
"""

from __future__ import annotations

import numpy as np

from .evolution import EvolutionRecord
from .level_stats import SpacingHistogram, poisson_pdf, wigner_pdf
from .spectral import DispersionScan

WIDTH, HEIGHT = 800, 600
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 25, 45, 55
PLOT_W = WIDTH - MARGIN_L - MARGIN_R
PLOT_H = HEIGHT - MARGIN_T - MARGIN_B

_WIGNER_COLOR = "#b03a2e"
_POISSON_COLOR = "#1f618d"


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def _header(title: str, comment: str) -> list[str]:
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
    ]
    if comment:
        parts.append(f"<!-- {comment} -->")
    parts.append(f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>')
    parts.append(
        f'<text x="{WIDTH // 2}" y="28" font-family="monospace" font-size="15" '
        f'text-anchor="middle">{_escape(title)}</text>'
    )
    return parts


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _axes(x_label: str, y_label: str, x_range, y_range) -> list[str]:
    x0, x1 = MARGIN_L, MARGIN_L + PLOT_W
    y0, y1 = MARGIN_T + PLOT_H, MARGIN_T
    parts = [
        f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>',
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>',
        f'<text x="{(x0 + x1) // 2}" y="{HEIGHT - 12}" font-family="monospace" '
        f'font-size="13" text-anchor="middle">{_escape(x_label)}</text>',
        f'<text x="16" y="{(y0 + y1) // 2}" font-family="monospace" font-size="13" '
        f'text-anchor="middle" transform="rotate(-90 16 {(y0 + y1) // 2})">'
        f"{_escape(y_label)}</text>",
    ]
    for value, x in ((x_range[0], x0), (x_range[1], x1)):
        parts.append(
            f'<text x="{x}" y="{y0 + 18}" font-family="monospace" font-size="11" '
            f'text-anchor="middle">{value:.4g}</text>'
        )
    for value, y in ((y_range[0], y0), (y_range[1], y1)):
        parts.append(
            f'<text x="{x0 - 6}" y="{y + 4}" font-family="monospace" font-size="11" '
            f'text-anchor="end">{value:.4g}</text>'
        )
    return parts


def _gray(value: float) -> str:
    # dark = high probability
    level = int(round(255 * (1.0 - min(max(value, 0.0), 1.0))))
    return f"#{level:02x}{level:02x}{level:02x}"


def _heatmap(record: EvolutionRecord, comment: str) -> str:
    frames = record.frames
    steps, n_sites = frames.shape
    top = float(frames.max()) or 1.0
    parts = _header(f"evolution heatmap ({steps - 1} steps)", comment)
    cell_w = PLOT_W / n_sites
    cell_h = PLOT_H / steps
    for t in range(steps):
        y = MARGIN_T + t * cell_h
        for j in range(n_sites):
            x = MARGIN_L + j * cell_w
            parts.append(
                f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(cell_w)}" '
                f'height="{_fmt(cell_h)}" fill="{_gray(frames[t, j] / top)}"/>'
            )
    parts += _axes(
        "site",
        "time step",
        (record.sites[0], record.sites[-1]),
        (steps - 1, 0),
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _bands(scan: DispersionScan, comment: str) -> str:
    ks, bands = scan.k_values, scan.bands
    k_lo, k_hi = float(ks[0]), float(ks[-1])
    k_span = (k_hi - k_lo) or 1.0
    parts = _header(f"dispersion bands ({scan.source})", comment)
    for i, k in enumerate(ks):
        x = MARGIN_L + (float(k) - k_lo) / k_span * PLOT_W
        for phase in bands[i]:
            y = MARGIN_T + (np.pi - float(phase)) / (2 * np.pi) * PLOT_H
            parts.append(
                f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="1.6" fill="#21618c"/>'
            )
    parts += _axes("k", "quasi-energy", (k_lo, k_hi), (-np.pi, np.pi))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _curve(xs, ys, x_hi, y_hi, color) -> str:
    points = []
    for x, y in zip(xs, ys):
        px = MARGIN_L + x / x_hi * PLOT_W
        py = MARGIN_T + PLOT_H * (1.0 - min(y, y_hi) / y_hi)
        points.append(f"{_fmt(px)},{_fmt(py)}")
    return (
        f'<polyline points="{" ".join(points)}" fill="none" stroke="{color}" '
        'stroke-width="1.5"/>'
    )


def _histogram(hist: SpacingHistogram, comment: str) -> str:
    edges, densities = hist.bin_edges, hist.densities
    x_hi = float(edges[-1]) or 1.0
    y_hi = max(float(densities.max()), 1.0) * 1.1
    parts = _header("nearest-neighbour spacing distribution", comment)
    for left, right, d in zip(edges[:-1], edges[1:], densities):
        x = MARGIN_L + left / x_hi * PLOT_W
        w = (right - left) / x_hi * PLOT_W
        h = d / y_hi * PLOT_H
        parts.append(
            f'<rect x="{_fmt(x)}" y="{_fmt(MARGIN_T + PLOT_H - h)}" '
            f'width="{_fmt(w)}" height="{_fmt(h)}" fill="#d5d8dc" stroke="#808b96"/>'
        )
    s = np.linspace(0.0, x_hi, 257)
    parts.append(_curve(s, wigner_pdf(s), x_hi, y_hi, _WIGNER_COLOR))
    parts.append(_curve(s, poisson_pdf(s), x_hi, y_hi, _POISSON_COLOR))
    parts.append(
        f'<text x="{WIDTH - 180}" y="{MARGIN_T + 16}" font-family="monospace" '
        f'font-size="12" fill="{_WIGNER_COLOR}">Wigner surmise</text>'
    )
    parts.append(
        f'<text x="{WIDTH - 180}" y="{MARGIN_T + 32}" font-family="monospace" '
        f'font-size="12" fill="{_POISSON_COLOR}">Poisson</text>'
    )
    parts += _axes("s", "P(s)", (0.0, x_hi), (0.0, y_hi))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_svg(data, plot_kind: str, comment: str = "") -> str:
    """Render ``data`` as a self-contained SVG document.

    ``plot_kind`` selects the layout: "heatmap" takes an EvolutionRecord,
    "bands" a DispersionScan, "histogram" a SpacingHistogram (with the two
    reference curves overlaid).  Empty data is rejected.
    """
    if plot_kind == "heatmap":
        if not isinstance(data, EvolutionRecord) or data.frames.size == 0:
            raise ValueError("heatmap needs a non-empty EvolutionRecord")
        return _heatmap(data, comment)
    if plot_kind == "bands":
        if not isinstance(data, DispersionScan) or data.bands.size == 0:
            raise ValueError("bands needs a non-empty DispersionScan")
        return _bands(data, comment)
    if plot_kind == "histogram":
        if not isinstance(data, SpacingHistogram) or data.densities.size == 0:
            raise ValueError("histogram needs a non-empty SpacingHistogram")
        return _histogram(data, comment)
    raise ValueError(f"unknown plot kind {plot_kind!r}")
