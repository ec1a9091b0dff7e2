"""Minimal hand-emitted SVG 1.1 plots.

Only what the commands need: polylines, point markers, arrows, and axis
ticks, on a linear chart-to-pixel mapping.  Series are tagged through element
classes ("classical" red, "generalized" black, "wind" blue) styled by an
embedded stylesheet, so the palette stays consistent across commands.
"""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from pathlib import Path

_STYLE = """
  .classical { stroke: #cc2222; fill: none; stroke-width: 1.2; }
  .generalized { stroke: #000000; fill: none; stroke-width: 1.2; }
  .wind { stroke: #2244cc; fill: #2244cc; stroke-width: 1.0; }
  .contour { stroke: #999999; fill: none; stroke-width: 0.7; }
  .axis { stroke: #444444; fill: none; stroke-width: 0.8; }
  .dotted { stroke-dasharray: 3 3; }
  .marker { fill: #000000; stroke: none; }
  text { font-family: sans-serif; font-size: 10px; fill: #444444; }
"""


class SvgPlot:
    """A single chart with fixed extents in problem coordinates."""

    def __init__(self, xmin: float, xmax: float, ymin: float, ymax: float,
                 width: int = 720, height: int = 480, margin: int = 42):
        self.xmin, self.xmax = xmin, xmax
        self.ymin, self.ymax = ymin, ymax
        self.width, self.height, self.margin = width, height, margin
        self.root = ET.Element("svg", {
            "xmlns": "http://www.w3.org/2000/svg",
            "version": "1.1",
            "width": str(width),
            "height": str(height),
            "viewBox": f"0 0 {width} {height}",
        })
        style = ET.SubElement(self.root, "style")
        style.text = _STYLE
        self._draw_axes()

    def _px(self, x: float, y: float) -> tuple[float, float]:
        sx = (self.width - 2 * self.margin) / (self.xmax - self.xmin)
        sy = (self.height - 2 * self.margin) / (self.ymax - self.ymin)
        return (self.margin + (x - self.xmin) * sx,
                self.height - self.margin - (y - self.ymin) * sy)

    @staticmethod
    def _coord(v: float) -> str:
        return f"{v:.2f}"

    def _draw_axes(self) -> None:
        x0, y0 = self._px(self.xmin, self.ymin)
        x1, y1 = self._px(self.xmax, self.ymax)
        frame = ET.SubElement(self.root, "rect", {
            "x": self._coord(min(x0, x1)), "y": self._coord(min(y0, y1)),
            "width": self._coord(abs(x1 - x0)),
            "height": self._coord(abs(y1 - y0)),
            "class": "axis",
        })
        frame.set("fill", "none")
        for xv in _ticks(self.xmin, self.xmax):
            px, py = self._px(xv, self.ymin)
            ET.SubElement(self.root, "line", {
                "x1": self._coord(px), "y1": self._coord(py),
                "x2": self._coord(px), "y2": self._coord(py + 4),
                "class": "axis"})
            label = ET.SubElement(self.root, "text", {
                "x": self._coord(px), "y": self._coord(py + 15),
                "text-anchor": "middle"})
            label.text = _tick_label(xv)
        for yv in _ticks(self.ymin, self.ymax):
            px, py = self._px(self.xmin, yv)
            ET.SubElement(self.root, "line", {
                "x1": self._coord(px - 4), "y1": self._coord(py),
                "x2": self._coord(px), "y2": self._coord(py),
                "class": "axis"})
            label = ET.SubElement(self.root, "text", {
                "x": self._coord(px - 6), "y": self._coord(py + 3),
                "text-anchor": "end"})
            label.text = _tick_label(yv)

    def polyline(self, points, cls: str) -> None:
        if len(points) < 2:
            return
        coords = " ".join("%s,%s" % (self._coord(px), self._coord(py))
                          for px, py in (self._px(x, y) for x, y in points))
        ET.SubElement(self.root, "polyline", {"points": coords, "class": cls})

    def marker(self, x: float, y: float, r: float = 2.5,
               cls: str = "marker") -> None:
        px, py = self._px(x, y)
        ET.SubElement(self.root, "circle", {
            "cx": self._coord(px), "cy": self._coord(py),
            "r": self._coord(r), "class": cls})

    def arrow(self, x0: float, y0: float, x1: float, y1: float,
              cls: str = "wind") -> None:
        """Line with a small triangular head at (x1, y1)."""
        p0, p1 = self._px(x0, y0), self._px(x1, y1)
        ET.SubElement(self.root, "line", {
            "x1": self._coord(p0[0]), "y1": self._coord(p0[1]),
            "x2": self._coord(p1[0]), "y2": self._coord(p1[1]),
            "class": cls})
        dx, dy = p1[0] - p0[0], p1[1] - p0[1]
        norm = math.hypot(dx, dy)
        if norm < 1e-9:
            return
        ux, uy = dx / norm, dy / norm
        size = min(5.0, 0.4 * norm)
        left = (p1[0] - size * ux + 0.5 * size * uy,
                p1[1] - size * uy - 0.5 * size * ux)
        right = (p1[0] - size * ux - 0.5 * size * uy,
                 p1[1] - size * uy + 0.5 * size * ux)
        pts = " ".join("%s,%s" % (self._coord(a), self._coord(b))
                       for a, b in (p1, left, right))
        ET.SubElement(self.root, "polygon", {"points": pts, "class": cls})

    def write(self, path: str | Path) -> None:
        tree = ET.ElementTree(self.root)
        ET.indent(tree)
        tree.write(path, encoding="unicode", xml_declaration=True)
        with open(path, "a") as fh:
            fh.write("\n")


def _ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    span = hi - lo
    raw = span / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for m in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= m * mag:
            step = m * mag
            break
    first = math.ceil(lo / step) * step
    out = []
    v = first
    while v <= hi + 1e-12 * span:
        out.append(0.0 if abs(v) < 1e-12 * span else v)
        v += step
    return out


def _tick_label(v: float) -> str:
    if v == int(v):
        return str(int(v))
    return f"{v:g}"


def contour_segments(xs, ys, values, level: float):
    """Marching-squares line segments of ``values == level`` on a grid.

    ``values[j][i]`` corresponds to (xs[i], ys[j]).  Returns a list of
    ((x0, y0), (x1, y1)) segments; adequate for plotting, no topology.
    """

    def interp(pa, pb, va, vb):
        t = (level - va) / (vb - va)
        return (pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1]))

    segments = []
    for j in range(len(ys) - 1):
        for i in range(len(xs) - 1):
            corners = [(xs[i], ys[j]), (xs[i + 1], ys[j]),
                       (xs[i + 1], ys[j + 1]), (xs[i], ys[j + 1])]
            vals = [values[j][i], values[j][i + 1],
                    values[j + 1][i + 1], values[j + 1][i]]
            pts = []
            for k in range(4):
                va, vb = vals[k], vals[(k + 1) % 4]
                if (va < level) != (vb < level):
                    pts.append(interp(corners[k], corners[(k + 1) % 4], va, vb))
            if len(pts) == 2:
                segments.append((pts[0], pts[1]))
            elif len(pts) == 4:
                segments.append((pts[0], pts[1]))
                segments.append((pts[2], pts[3]))
    return segments
