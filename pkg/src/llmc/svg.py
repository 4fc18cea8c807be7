"""Minimal SVG renderer for the two-panel histogram figure.

Pure string assembly from already-binned data: the same numbers as the
histogram CSV, drawn twice (linear and log-log), with the target density
overlaid as a polyline.  No plotting dependency, fully deterministic
output for byte-for-byte reproducible artifacts.
"""

import math

import numpy as np

__all__ = ["render_figure"]

_W, _H = 1000, 440
_PANEL_W, _PANEL_H = 380, 300
_MARGIN_TOP = 70
_BAR_FILL = "#9ec2dd"
_BAR_EDGE = "#5b83a6"
_LINE = "#c0392b"
_AXIS = "#333333"


def _nice_ticks(lo, hi, count=5):
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / count
    mag = 10.0 ** math.floor(math.log10(raw))
    step = 10.0 * mag
    for mult in (1.0, 2.0, 5.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    v = math.ceil(lo / step) * step
    ticks = []
    while v <= hi + 1e-9 * span:
        ticks.append(0.0 if abs(v) < 1e-12 * span else v)
        v += step
    return ticks


def _log_ticks(lo, hi):
    ticks = []
    k = math.ceil(math.log10(lo) - 1e-9)
    while 10.0 ** k <= hi * (1.0 + 1e-9):
        ticks.append(10.0 ** k)
        k += 1
    if len(ticks) >= 2:
        return ticks
    return [lo, math.sqrt(lo * hi), hi]


def _fmt(v):
    return f"{v:.6g}"


class _Panel:
    def __init__(self, px, xlo, xhi, ylo, yhi, logx, logy):
        self.px, self.py = px, _MARGIN_TOP
        self.xlo, self.xhi = xlo, xhi
        self.ylo, self.yhi = ylo, yhi
        self.logx, self.logy = logx, logy

    def sx(self, v):
        if self.logx:
            t = (math.log(v) - math.log(self.xlo)) / (
                math.log(self.xhi) - math.log(self.xlo))
        else:
            t = (v - self.xlo) / (self.xhi - self.xlo)
        return self.px + max(0.0, min(1.0, t)) * _PANEL_W

    def sy(self, v):
        if self.logy:
            v = max(v, self.ylo)
            t = (math.log(v) - math.log(self.ylo)) / (
                math.log(self.yhi) - math.log(self.ylo))
        else:
            t = (v - self.ylo) / (self.yhi - self.ylo)
        return self.py + _PANEL_H - max(0.0, min(1.0, t)) * _PANEL_H

    def frame(self, out, subtitle):
        x0, y0 = self.px, self.py
        out.append(f'<rect x="{x0}" y="{y0}" width="{_PANEL_W}" '
                   f'height="{_PANEL_H}" fill="none" stroke="{_AXIS}"/>')
        out.append(f'<text x="{x0 + _PANEL_W / 2:.1f}" y="{y0 - 12}" '
                   f'text-anchor="middle" font-size="14">{subtitle}</text>')
        xticks = (_log_ticks(self.xlo, self.xhi) if self.logx
                  else _nice_ticks(self.xlo, self.xhi))
        for v in xticks:
            sx = self.sx(v)
            out.append(f'<line x1="{sx:.1f}" y1="{y0 + _PANEL_H}" '
                       f'x2="{sx:.1f}" y2="{y0 + _PANEL_H + 5}" '
                       f'stroke="{_AXIS}"/>')
            out.append(f'<text x="{sx:.1f}" y="{y0 + _PANEL_H + 18}" '
                       f'text-anchor="middle" font-size="11">{_fmt(v)}</text>')
        yticks = (_log_ticks(self.ylo, self.yhi) if self.logy
                  else _nice_ticks(self.ylo, self.yhi))
        for v in yticks:
            sy = self.sy(v)
            out.append(f'<line x1="{x0 - 5}" y1="{sy:.1f}" x2="{x0}" '
                       f'y2="{sy:.1f}" stroke="{_AXIS}"/>')
            out.append(f'<text x="{x0 - 8}" y="{sy + 4:.1f}" '
                       f'text-anchor="end" font-size="11">{_fmt(v)}</text>')

    def bars(self, out, edges, density):
        base = self.sy(self.ylo)
        for le, ri, d in zip(edges[:-1], edges[1:], density):
            if d <= 0.0 or ri <= self.xlo or le >= self.xhi:
                continue
            le, ri = max(le, self.xlo), min(ri, self.xhi)
            x1, x2 = self.sx(le), self.sx(ri)
            yt = self.sy(d)
            out.append(f'<rect x="{x1:.2f}" y="{yt:.2f}" '
                       f'width="{x2 - x1:.2f}" height="{base - yt:.2f}" '
                       f'fill="{_BAR_FILL}" stroke="{_BAR_EDGE}" '
                       f'stroke-width="0.5"/>')

    def curve(self, out, pdf_fn, points=257):
        if self.logx:
            xs = np.geomspace(self.xlo, self.xhi, points)
        else:
            xs = np.linspace(max(self.xlo, 1e-300), self.xhi, points)
        parts = []
        for x in xs:
            y = float(pdf_fn(float(x)))
            if self.logy and y <= 0.0:
                parts.append(None)
                continue
            parts.append((self.sx(float(x)), self.sy(y)))
        chunk = []
        for p in parts + [None]:
            if p is None:
                if len(chunk) >= 2:
                    pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in chunk)
                    out.append(f'<polyline points="{pts}" fill="none" '
                               f'stroke="{_LINE}" stroke-width="1.5"/>')
                chunk = []
            else:
                chunk.append(p)


def render_figure(hist, pdf_fn, title):
    """Two-panel SVG: linear histogram and log-log tail view."""
    edges = np.asarray(hist.edges, dtype=float)
    density = np.asarray(hist.density, dtype=float)
    pos = density[density > 0.0]
    if pos.size == 0:
        raise ValueError("histogram has no occupied bins")

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" '
           f'height="{_H}" viewBox="0 0 {_W} {_H}">',
           f'<rect width="{_W}" height="{_H}" fill="white"/>',
           f'<text x="{_W / 2}" y="30" text-anchor="middle" '
           f'font-size="16">{title}</text>']

    ymax = float(max(pos.max(), 1e-300)) * 1.08
    lin = _Panel(70, float(edges[0]), float(edges[-1]), 0.0, ymax,
                 False, False)
    lin.frame(out, "linear scale")
    lin.bars(out, edges, density)
    lin.curve(out, pdf_fn)

    xlo = float(edges[0]) if edges[0] > 0.0 else float(edges[1]) * 0.5
    ylo = float(pos.min()) * 0.5
    log = _Panel(580, xlo, float(edges[-1]), ylo, ymax, True, True)
    log.frame(out, "log scale")
    log.bars(out, edges, density)
    log.curve(out, pdf_fn)

    out.append(f'<text x="{_W / 2}" y="{_H - 8}" text-anchor="middle" '
               f'font-size="11" fill="{_AXIS}">histogram density with '
               f'target density overlay</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
