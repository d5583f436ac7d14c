"""Byte-stable SVG contour maps with geometric overlays."""
from __future__ import annotations

import numpy as np
import contourpy

from .terrain import Bounds

__all__ = ["SvgMap", "contour_levels"]


def _f(v) -> str:
    s = f"{float(v):.4f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def contour_levels(Z, n: int = 12) -> np.ndarray:
    """``n`` evenly spaced interior levels; empty for a flat field."""
    lo, hi = float(np.min(Z)), float(np.max(Z))
    if not hi - lo > 1e-12 * max(1.0, abs(hi)):
        return np.zeros(0)
    return np.linspace(lo, hi, n + 2)[1:-1]


class SvgMap:
    """Map of a rectangle in world coordinates, y pointing up.

    Parameters
    ----------
    bounds : Bounds
    width : int
        Pixel width; height follows the aspect ratio.
    """

    def __init__(self, bounds: Bounds, width: int = 600, title: str = ""):
        self.bounds = bounds
        self.width = int(width)
        self.height = max(1, int(round(width * bounds.height / bounds.width)))
        self.title = title
        self._items = []

    def _xy(self, x, y):
        b = self.bounds
        px = (np.asarray(x, dtype=float) - b.xmin) / b.width * self.width
        py = (b.ymax - np.asarray(y, dtype=float)) / b.height * self.height
        return px, py

    def _len(self, r):
        return float(r) / self.bounds.width * self.width

    def contours(self, X, Y, Z, n_levels: int = 12, stroke="#777"):
        levels = contour_levels(Z, n_levels)
        gen = contourpy.contour_generator(X, Y, Z, name="serial", line_type="Separate")
        for lev in levels:
            for line in gen.lines(lev):
                self.polyline(line, stroke=stroke, width=0.8)
        return self

    def polyline(self, pts, stroke="#000", width=1.0, closed=False):
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        if len(pts) < 2:
            return self
        px, py = self._xy(pts[:, 0], pts[:, 1])
        coords = " ".join(f"{_f(a)},{_f(b)}" for a, b in zip(px, py))
        tag = "polygon" if closed else "polyline"
        self._items.append(f'<{tag} points="{coords}" fill="none" stroke="{stroke}" '
                           f'stroke-width="{_f(width)}"/>')
        return self

    def circle(self, x, y, r, stroke="#c00", fill="none", width=1.2):
        px, py = self._xy(x, y)
        self._items.append(f'<circle cx="{_f(px)}" cy="{_f(py)}" r="{_f(self._len(r))}" '
                           f'fill="{fill}" stroke="{stroke}" stroke-width="{_f(width)}"/>')
        return self

    def ellipse(self, x, y, major, minor, angle, stroke="#06c", width=1.2):
        px, py = self._xy(x, y)
        rx, ry = self._len(major / 2), self._len(minor / 2)
        deg = -np.degrees(angle)
        self._items.append(f'<ellipse cx="{_f(px)}" cy="{_f(py)}" rx="{_f(rx)}" ry="{_f(ry)}" '
                           f'transform="rotate({_f(deg)} {_f(px)} {_f(py)})" fill="none" '
                           f'stroke="{stroke}" stroke-width="{_f(width)}"/>')
        return self

    def point(self, x, y, color="#000", size=2.0):
        px, py = self._xy(x, y)
        self._items.append(f'<circle cx="{_f(px)}" cy="{_f(py)}" r="{_f(size)}" fill="{color}"/>')
        return self

    def cells(self, x, y, h, color="#3a3", opacity=0.5):
        """Filled squares of side ``h`` (world units) centered at each ``(x, y)``."""
        side = self._len(h)
        px, py = self._xy(np.asarray(x) - h / 2, np.asarray(y) + h / 2)
        for a, b in zip(np.ravel(px), np.ravel(py)):
            self._items.append(f'<rect x="{_f(a)}" y="{_f(b)}" width="{_f(side)}" height="{_f(side)}" '
                               f'fill="{color}" fill-opacity="{_f(opacity)}"/>')
        return self

    def render(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}" '
                f'viewBox="0 0 {self.width} {self.height}">')
        body = ['<rect width="100%" height="100%" fill="#fff"/>']
        if self.title:
            esc = self.title.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            body.append(f"<title>{esc}</title>")
        return "\n".join([head, *body, *self._items, "</svg>"]) + "\n"
