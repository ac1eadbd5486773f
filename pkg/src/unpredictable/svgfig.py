"""Minimal standalone SVG 1.1 line plots and phase portraits.

Hand-rolled on purpose: output is deterministic byte for byte (no library
version strings, no timestamps), which the CLI promises for repeated runs.
"""

import numpy as np

_COLORS = ("#1f6fb2", "#d1495b", "#3e8e5a", "#8a5ab2")
_MAX_POINTS = 4000


def _fmt(x):
    return f"{x:.2f}"


def _downsample(arr):
    if arr.shape[0] <= _MAX_POINTS:
        return arr
    stride = int(np.ceil(arr.shape[0] / _MAX_POINTS))
    return arr[::stride]


def _axis_ticks(lo, hi, n=5):
    if hi <= lo:
        hi = lo + 1.0
    raw = np.linspace(lo, hi, n)
    return raw


def _polyline(xs, ys, x_map, y_map, color):
    pts = " ".join(f"{_fmt(x_map(x))},{_fmt(y_map(y))}" for x, y in zip(xs, ys))
    return f'<polyline fill="none" stroke="{color}" stroke-width="1" points="{pts}"/>'


def _frame(width, height, title):
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">\n'
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>\n'
    )
    if title:
        head += (f'<text x="{width / 2:.0f}" y="18" text-anchor="middle" '
                 f'font-family="sans-serif" font-size="13">{title}</text>\n')
    return head


def line_plot(path, t, series, labels=None, title="", width=880, height=360):
    """Plot one or more series against time as an SVG document."""
    t = np.asarray(t, dtype=float)
    series = [np.asarray(s, dtype=float) for s in series]
    labels = labels or [f"x{j + 1}" for j in range(len(series))]
    ml, mr, mt, mb = 56, 14, 30, 34
    pw, ph = width - ml - mr, height - mt - mb

    t_lo, t_hi = (float(t.min()), float(t.max())) if t.size else (0.0, 1.0)
    all_v = np.concatenate(series) if series else np.zeros(1)
    v_lo, v_hi = float(all_v.min()), float(all_v.max())
    if v_hi - v_lo < 1e-12:
        v_lo, v_hi = v_lo - 1.0, v_hi + 1.0
    pad = 0.04 * (v_hi - v_lo)
    v_lo, v_hi = v_lo - pad, v_hi + pad

    def xm(x):
        return ml + (x - t_lo) / max(t_hi - t_lo, 1e-300) * pw

    def ym(y):
        return mt + ph - (y - v_lo) / (v_hi - v_lo) * ph

    parts = [_frame(width, height, title)]
    parts.append(f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" '
                 'fill="none" stroke="#444" stroke-width="1"/>')
    for tx in _axis_ticks(t_lo, t_hi):
        parts.append(f'<line x1="{_fmt(xm(tx))}" y1="{mt + ph}" x2="{_fmt(xm(tx))}" '
                     f'y2="{mt + ph + 4}" stroke="#444"/>')
        parts.append(f'<text x="{_fmt(xm(tx))}" y="{mt + ph + 16}" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="10">{tx:.6g}</text>')
    for tv in _axis_ticks(v_lo, v_hi):
        parts.append(f'<line x1="{ml - 4}" y1="{_fmt(ym(tv))}" x2="{ml}" '
                     f'y2="{_fmt(ym(tv))}" stroke="#444"/>')
        parts.append(f'<text x="{ml - 6}" y="{_fmt(ym(tv) + 3)}" text-anchor="end" '
                     f'font-family="sans-serif" font-size="10">{tv:.6g}</text>')
    keep = _downsample(np.arange(t.shape[0]))
    for j, s in enumerate(series):
        color = _COLORS[j % len(_COLORS)]
        parts.append(_polyline(t[keep], s[keep], xm, ym, color))
        parts.append(f'<text x="{ml + 8 + 70 * j}" y="{mt - 6}" fill="{color}" '
                     f'font-family="sans-serif" font-size="11">{labels[j]}</text>')
    parts.append("</svg>\n")
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(parts))


def phase_plot(path, x, y, title="", width=520, height=520,
               xlabel="x1", ylabel="x2"):
    """2-D phase portrait (x1 vs x2) as an SVG document."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ml, mr, mt, mb = 56, 14, 30, 38
    pw, ph = width - ml - mr, height - mt - mb
    x_lo, x_hi = float(x.min()), float(x.max())
    y_lo, y_hi = float(y.min()), float(y.max())
    if x_hi - x_lo < 1e-12:
        x_lo, x_hi = x_lo - 1.0, x_hi + 1.0
    if y_hi - y_lo < 1e-12:
        y_lo, y_hi = y_lo - 1.0, y_hi + 1.0
    padx, pady = 0.04 * (x_hi - x_lo), 0.04 * (y_hi - y_lo)
    x_lo, x_hi, y_lo, y_hi = x_lo - padx, x_hi + padx, y_lo - pady, y_hi + pady

    def xm(v):
        return ml + (v - x_lo) / (x_hi - x_lo) * pw

    def ym(v):
        return mt + ph - (v - y_lo) / (y_hi - y_lo) * ph

    parts = [_frame(width, height, title)]
    parts.append(f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" '
                 'fill="none" stroke="#444" stroke-width="1"/>')
    for tx in _axis_ticks(x_lo, x_hi):
        parts.append(f'<text x="{_fmt(xm(tx))}" y="{mt + ph + 16}" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="10">{tx:.6g}</text>')
    for tv in _axis_ticks(y_lo, y_hi):
        parts.append(f'<text x="{ml - 6}" y="{_fmt(ym(tv) + 3)}" text-anchor="end" '
                     f'font-family="sans-serif" font-size="10">{tv:.6g}</text>')
    parts.append(f'<text x="{ml + pw / 2:.0f}" y="{height - 8}" text-anchor="middle" '
                 f'font-family="sans-serif" font-size="11">{xlabel}</text>')
    parts.append(f'<text x="14" y="{mt + ph / 2:.0f}" text-anchor="middle" '
                 f'font-family="sans-serif" font-size="11" '
                 f'transform="rotate(-90 14 {mt + ph / 2:.0f})">{ylabel}</text>')
    keep = _downsample(np.arange(x.shape[0]))
    parts.append(_polyline(x[keep], y[keep], xm, ym, _COLORS[0]))
    parts.append("</svg>\n")
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(parts))
