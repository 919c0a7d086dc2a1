"""Hand-rolled SVG emission: field heatmaps and log-log scaling plots.

Every SVG is a pure function of the numbers passed in; formatting is fixed
so identical inputs produce identical bytes.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["heatmap_svg", "loglog_svg"]

# five-stop blue -> green -> yellow colormap
_STOPS = np.array(
    [
        (68, 1, 84),
        (59, 82, 139),
        (33, 145, 140),
        (94, 201, 98),
        (253, 231, 37),
    ],
    dtype=float,
)


def _color(v: float) -> str:
    v = min(max(v, 0.0), 1.0)
    pos = v * (len(_STOPS) - 1)
    k = min(int(pos), len(_STOPS) - 2)
    f = pos - k
    rgb = (1.0 - f) * _STOPS[k] + f * _STOPS[k + 1]
    return f"#{int(rgb[0]):02x}{int(rgb[1]):02x}{int(rgb[2]):02x}"


def heatmap_svg(values: np.ndarray, path, title: str = "", max_cells: int = 256) -> None:
    """Rect-per-cell heatmap of a node array (block-averaged beyond max_cells)."""
    v = np.asarray(values, dtype=float)
    ny, nx = v.shape
    bx = max(1, int(math.ceil(nx / max_cells)))
    by = max(1, int(math.ceil(ny / max_cells)))
    if bx > 1 or by > 1:
        tx = (nx // bx) * bx
        ty = (ny // by) * by
        v = v[:ty, :tx].reshape(ty // by, by, tx // bx, bx).mean(axis=(1, 3))
        ny, nx = v.shape
    lo = float(v.min())
    hi = float(v.max())
    span = hi - lo if hi > lo else 1.0

    cell = max(2, 640 // max(nx, ny))
    width = nx * cell
    height = ny * cell + (24 if title else 0)
    top = 24 if title else 0
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">'
    ]
    if title:
        out.append(
            f'<text x="4" y="16" font-family="monospace" font-size="13">{title}'
            f" [{lo:.6g}, {hi:.6g}]</text>"
        )
    for j in range(ny):
        yy = top + (ny - 1 - j) * cell
        for i in range(nx):
            c = _color((v[j, i] - lo) / span)
            out.append(
                f'<rect x="{i * cell}" y="{yy}" width="{cell}" height="{cell}" '
                f'fill="{c}"/>'
            )
    out.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(out))


def loglog_svg(eps_values, values, path, title: str = "",
               fit: tuple | None = None) -> None:
    """Scatter of (eps, value) in log10 axes with an optional fitted line.

    fit = (slope, intercept) in natural-log coordinates, as produced by the
    slope fitter.
    """
    eps_values = np.asarray(list(eps_values), dtype=float)
    values = np.asarray(list(values), dtype=float)
    keep = values > 0.0
    eps_values = eps_values[keep]
    values = values[keep]
    width, height, margin = 480, 360, 48
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    if eps_values.size == 0:
        out.append(
            '<text x="10" y="20" font-family="monospace" font-size="12">'
            "no positive data</text></svg>"
        )
        with open(path, "w") as fh:
            fh.write("\n".join(out))
        return

    lx = np.log10(eps_values)
    ly = np.log10(values)
    x0, x1 = float(lx.min()), float(lx.max())
    y0, y1 = float(ly.min()), float(ly.max())
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0

    def sx(v):
        return margin + (v - x0) / (x1 - x0) * (width - 2 * margin)

    def sy(v):
        return height - margin - (v - y0) / (y1 - y0) * (height - 2 * margin)

    out.append(
        f'<rect x="{margin}" y="{margin}" width="{width - 2 * margin}" '
        f'height="{height - 2 * margin}" fill="none" stroke="#888"/>'
    )
    if title:
        out.append(
            f'<text x="{margin}" y="20" font-family="monospace" font-size="13">'
            f"{title}</text>"
        )
    out.append(
        f'<text x="{width // 2 - 30}" y="{height - 10}" font-family="monospace" '
        f'font-size="11">log10(eps)</text>'
    )
    if fit is not None:
        slope, intercept = fit
        ln10 = math.log(10.0)
        ly_fit0 = (slope * (x0 * ln10) + intercept) / ln10
        ly_fit1 = (slope * (x1 * ln10) + intercept) / ln10
        out.append(
            f'<line x1="{sx(x0):.2f}" y1="{sy(ly_fit0):.2f}" '
            f'x2="{sx(x1):.2f}" y2="{sy(ly_fit1):.2f}" stroke="#d62728" '
            f'stroke-width="1.5"/>'
        )
        out.append(
            f'<text x="{margin + 4}" y="{margin + 14}" font-family="monospace" '
            f'font-size="11" fill="#d62728">slope={slope:.4f}</text>'
        )
    for x, y in zip(lx, ly):
        out.append(
            f'<circle cx="{sx(float(x)):.2f}" cy="{sy(float(y)):.2f}" r="3.5" '
            f'fill="#1f77b4"/>'
        )
    for v in (x0, x1):
        out.append(
            f'<text x="{sx(v) - 12:.2f}" y="{height - margin + 16}" '
            f'font-family="monospace" font-size="10">{v:.2f}</text>'
        )
    for v in (y0, y1):
        out.append(
            f'<text x="4" y="{sy(v) + 4:.2f}" font-family="monospace" '
            f'font-size="10">{v:.2f}</text>'
        )
    out.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(out))
