"""Minimal deterministic SVG scatter plots.

Coordinates are written with 6 significant digits so reruns produce
identical files.
"""
from __future__ import annotations

import numpy as np

from .dataset import fmt

WIDTH = 480
HEIGHT = 480
PAD = 48


class Canvas:
    def __init__(self, xlim, ylim, title: str = "", xlabel: str = "", ylabel: str = ""):
        self.xlim = (float(xlim[0]), float(xlim[1]))
        self.ylim = (float(ylim[0]), float(ylim[1]))
        if self.xlim[1] <= self.xlim[0]:
            self.xlim = (self.xlim[0] - 0.5, self.xlim[0] + 0.5)
        if self.ylim[1] <= self.ylim[0]:
            self.ylim = (self.ylim[0] - 0.5, self.ylim[0] + 0.5)
        self.items = []
        self.title = title
        self.xlabel = xlabel
        self.ylabel = ylabel

    def _x(self, x):
        lo, hi = self.xlim
        return PAD + (x - lo) / (hi - lo) * (WIDTH - 2 * PAD)

    def _y(self, y):
        lo, hi = self.ylim
        return HEIGHT - PAD - (y - lo) / (hi - lo) * (HEIGHT - 2 * PAD)

    def points(self, pts, radius=2.5, color="#4a4a4a", opacity=0.8):
        for x, y in np.asarray(pts, dtype=float):
            self.items.append(
                f'<circle cx="{fmt(self._x(x))}" cy="{fmt(self._y(y))}" r="{radius}" '
                f'fill="{color}" fill-opacity="{opacity}"/>'
            )

    def path(self, poly, color="#1f6fb4", width=1.5, closed=False):
        poly = np.asarray(poly, dtype=float)
        if poly.shape[0] < 2:
            return
        cmds = [f"M{fmt(self._x(poly[0, 0]))},{fmt(self._y(poly[0, 1]))}"]
        cmds += [f"L{fmt(self._x(x))},{fmt(self._y(y))}" for x, y in poly[1:]]
        if closed:
            cmds.append("Z")
        self.items.append(
            f'<path d="{" ".join(cmds)}" fill="none" stroke="{color}" stroke-width="{width}"/>'
        )

    def circle_marker(self, xy, color="#c0392b", radius=6):
        x, y = xy
        self.items.append(
            f'<circle cx="{fmt(self._x(x))}" cy="{fmt(self._y(y))}" r="{radius}" '
            f'fill="none" stroke="{color}" stroke-width="2"/>'
        )

    def cross_marker(self, xy, color="#27ae60", size=6):
        cx, cy = self._x(xy[0]), self._y(xy[1])
        self.items.append(
            f'<path d="M{fmt(cx - size)},{fmt(cy - size)} L{fmt(cx + size)},{fmt(cy + size)} '
            f'M{fmt(cx - size)},{fmt(cy + size)} L{fmt(cx + size)},{fmt(cy - size)}" '
            f'stroke="{color}" stroke-width="2"/>'
        )

    def render(self) -> str:
        x0, x1 = self._x(self.xlim[0]), self._x(self.xlim[1])
        y0, y1 = self._y(self.ylim[0]), self._y(self.ylim[1])
        head = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}">',
            f'<rect x="{fmt(x0)}" y="{fmt(y1)}" width="{fmt(x1 - x0)}" height="{fmt(y0 - y1)}" '
            'fill="white" stroke="black"/>',
        ]
        labels = [
            f'<text x="{WIDTH // 2}" y="{PAD // 2}" text-anchor="middle" font-size="14">{_esc(self.title)}</text>',
            f'<text x="{WIDTH // 2}" y="{HEIGHT - 12}" text-anchor="middle" font-size="12">{_esc(self.xlabel)}</text>',
            f'<text x="14" y="{HEIGHT // 2}" text-anchor="middle" font-size="12" '
            f'transform="rotate(-90 14 {HEIGHT // 2})">{_esc(self.ylabel)}</text>',
            f'<text x="{fmt(x0)}" y="{fmt(y0 + 14)}" font-size="10">{fmt(self.xlim[0])}</text>',
            f'<text x="{fmt(x1)}" y="{fmt(y0 + 14)}" font-size="10" text-anchor="end">{fmt(self.xlim[1])}</text>',
            f'<text x="{fmt(x0 - 4)}" y="{fmt(y0)}" font-size="10" text-anchor="end">{fmt(self.ylim[0])}</text>',
            f'<text x="{fmt(x0 - 4)}" y="{fmt(y1 + 8)}" font-size="10" text-anchor="end">{fmt(self.ylim[1])}</text>',
        ]
        return "\n".join(head + self.items + labels + ["</svg>"]) + "\n"

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.render())


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def padded_limits(values, margin=0.05):
    v = np.asarray(values, dtype=float)
    lo, hi = float(v.min()), float(v.max())
    ext = hi - lo if hi > lo else 1.0
    return lo - margin * ext, hi + margin * ext
