#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Figures Module
--------------
Deterministic SVG 1.1 output for the harmonic polygon laboratory.

World coordinates are mapped into a fixed 800x800 viewBox with the y-axis
pointing up; every number is written with six decimals so identical inputs
give byte-identical files.
"""

import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from geometry.geom_core import AxisEllipse, Circle, Line, Polygon
from harmonic.harmonic_family import FamilySpec, brocard_objects, vertices_inversive
from harmonic.isocurves import contour_lines, omega_field, pencil_sample_offsets
from harmonic.transforms import harmonic_dual, harmonic_to_homothetic

logger = logging.getLogger(__name__)

VIEW_SIZE = 800.0
PLOT_KINDS = ("figure1", "polar", "pencil", "field")

PREAMBLE = """\
<?xml version="1.0" encoding="UTF-8" standalone="no"?>
<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" "http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">
<svg width="{size:.6f}" height="{size:.6f}" viewBox="0 0 {size:.6f} {size:.6f}" version="1.1" xmlns="http://www.w3.org/2000/svg">
<rect x="0.000000" y="0.000000" width="{size:.6f}" height="{size:.6f}" style="fill:#ffffff"/>
"""

POSTAMBLE = "</svg>\n"


class SvgFigure:
    """Collects drawing commands in world coordinates inside a fixed square window."""

    def __init__(self, bbox: Tuple[float, float, float, float], title: str = ""):
        xmin, xmax, ymin, ymax = bbox
        span = max(xmax - xmin, ymax - ymin)
        cx, cy = (xmin + xmax) / 2, (ymin + ymax) / 2
        self.bbox = (cx - span / 2, cx + span / 2, cy - span / 2, cy + span / 2)
        self.scale = VIEW_SIZE / span
        self.title = title
        self.commands: List[str] = []

    def _xy(self, p: complex) -> Tuple[float, float]:
        xmin, _, _, ymax = self.bbox
        return (p.real - xmin) * self.scale, (ymax - p.imag) * self.scale

    def _points(self, points: Sequence[complex]) -> str:
        return " ".join("%.6f,%.6f" % self._xy(p) for p in points)

    def circle(self, c: Circle, stroke: str = "#000000", width: float = 1.0, dash: bool = False):
        x, y = self._xy(c.center)
        style = f"fill:none;stroke:{stroke};stroke-width:{width:.6f}" + (";stroke-dasharray:6,4" if dash else "")
        self.commands.append('<circle cx="%.6f" cy="%.6f" r="%.6f" style="%s"/>' % (x, y, c.radius * self.scale, style))

    def ellipse(self, e: AxisEllipse, stroke: str = "#000000", width: float = 1.0):
        x, y = self._xy(e.center)
        self.commands.append(
            '<ellipse cx="%.6f" cy="%.6f" rx="%.6f" ry="%.6f" style="fill:none;stroke:%s;stroke-width:%.6f"/>'
            % (x, y, e.a * self.scale, e.b * self.scale, stroke, width)
        )

    def polygon(self, P: Polygon, stroke: str = "#000000", width: float = 1.0):
        self.commands.append(
            '<polygon points="%s" style="fill:none;stroke:%s;stroke-width:%.6f"/>' % (self._points(P.vertices), stroke, width)
        )

    def segment(self, p: complex, q: complex, stroke: str = "#000000", width: float = 1.0):
        self.commands.append(
            '<line x1="%.6f" y1="%.6f" x2="%.6f" y2="%.6f" style="stroke:%s;stroke-width:%.6f"/>'
            % (*self._xy(p), *self._xy(q), stroke, width)
        )

    def line(self, l: Line, stroke: str = "#000000", width: float = 1.0):
        """Infinite line, cut to the window diagonal on each side of its foot."""
        xmin, xmax, ymin, ymax = self.bbox
        reach = math.hypot(xmax - xmin, ymax - ymin)
        center = l.foot(complex((xmin + xmax) / 2, (ymin + ymax) / 2))
        self.segment(center - reach * l.direction, center + reach * l.direction, stroke, width)

    def point(self, p: complex, fill: str = "#000000", label: Optional[str] = None):
        x, y = self._xy(p)
        self.commands.append('<circle cx="%.6f" cy="%.6f" r="3.000000" style="fill:%s"/>' % (x, y, fill))
        if label:
            self.commands.append(
                '<text x="%.6f" y="%.6f" font-size="14" font-family="monospace">%s</text>' % (x + 5, y - 5, label)
            )

    def cell(self, x0: float, y1: float, w: float, h: float, fill: str):
        x, y = self._xy(complex(x0, y1))
        self.commands.append(
            '<rect x="%.6f" y="%.6f" width="%.6f" height="%.6f" style="fill:%s;stroke:none"/>'
            % (x, y, w * self.scale, h * self.scale, fill)
        )

    def render(self) -> str:
        body = [PREAMBLE.format(size=VIEW_SIZE)]
        if self.title:
            body.append('<title>%s</title>\n' % self.title)
        body.extend(cmd + "\n" for cmd in self.commands)
        body.append(POSTAMBLE)
        return "".join(body)

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(self.render())
        logger.info(f"Wrote figure to {path}")


def _heat(value: float, lo: float, hi: float) -> str:
    s = 0.0 if hi <= lo else min(max((value - lo) / (hi - lo), 0.0), 1.0)
    r = int(round(255 * s))
    b = int(round(255 * (1.0 - s)))
    return "#%02x%02x%02x" % (r, 64, b)


def _bbox_around(points: Sequence[complex], pad: float = 0.15) -> Tuple[float, float, float, float]:
    xs = [p.real for p in points]
    ys = [p.imag for p in points]
    span = max(max(xs) - min(xs), max(ys) - min(ys))
    margin = pad * span
    return min(xs) - margin, max(xs) + margin, min(ys) - margin, max(ys) + margin


def _pencil_members(objects, n_circles: int) -> List[Circle]:
    """Sampled pencil circles around both limiting points."""
    l1, l2 = objects.limiting_points
    offsets, _ = pencil_sample_offsets(objects, n_circles)
    direction = 1.0 if objects.circumcircle.center.real > l1.real else -1.0
    members = []
    for delta in offsets:
        members.append(objects.pencil.member_at(l1 + direction * delta))
        members.append(objects.pencil.member_at(l2 - direction * delta))
    return members


# --- Plot kinds ---

def figure1(spec: FamilySpec, t: float) -> SvgFigure:
    """Polygon, Brocard inellipse, circumcircle, Brocard circle, Brocard points, K and O."""
    spec = spec.to_inversive()
    objects = brocard_objects(spec)
    C = objects.circumcircle
    fig = SvgFigure(_bbox_around([C.center + C.radius * p for p in (1, -1, 1j, -1j)]),
                    f"harmonic N={spec.n} x0={spec.x0:.6f} t={t:.6f}")
    fig.circle(C)
    fig.ellipse(objects.inellipse, stroke="#008000")
    if objects.brocard_circle is not None:
        fig.circle(objects.brocard_circle, stroke="#808080", dash=True)
    fig.polygon(vertices_inversive(spec, t), stroke="#c000c0", width=2.0)
    fig.point(objects.symmedian, label="K")
    fig.point(C.center, label="O")
    for name, p in zip(("W1", "W2"), objects.brocard_points):
        fig.point(p, fill="#d00000", label=name)
    return fig


def polar(spec: FamilySpec, t: float) -> SvgFigure:
    """Harmonic polygon and its homothetic dual about K with the two ellipses."""
    spec = spec.to_inversive()
    objects = brocard_objects(spec)
    pair = harmonic_to_homothetic(spec)
    outer = pair.outer
    extent = [outer.center + outer.a, outer.center - outer.a, outer.center + 1j * outer.b, outer.center - 1j * outer.b]
    C = objects.circumcircle
    extent += [C.center + C.radius, C.center - C.radius]
    fig = SvgFigure(_bbox_around(extent), f"polar N={spec.n} x0={spec.x0:.6f}")
    fig.circle(C)
    fig.ellipse(objects.inellipse, stroke="#008000")
    fig.ellipse(pair.inner, stroke="#8b4513")
    fig.ellipse(outer)
    fig.polygon(vertices_inversive(spec, t), stroke="#c000c0", width=2.0)
    fig.polygon(harmonic_dual(spec, t), stroke="#0000c0", width=2.0)
    fig.point(objects.symmedian, label="K")
    return fig


def pencil(spec: FamilySpec, n_circles: int = 12) -> SvgFigure:
    """Schoute pencil members, limiting points and the Lemoine axis."""
    spec = spec.to_inversive()
    objects = brocard_objects(spec)
    C = objects.circumcircle
    R = C.radius
    fig = SvgFigure((C.center.real - 3 * R, C.center.real + 3 * R, -3 * R, 3 * R), f"pencil N={spec.n} x0={spec.x0:.6f}")
    fig.circle(C, width=2.0)
    if objects.pencil is None:
        return fig
    l1, l2 = objects.limiting_points
    for member in _pencil_members(objects, n_circles):
        fig.circle(member, stroke="#4060a0", width=0.5)
    fig.circle(objects.brocard_circle, stroke="#808080", dash=True)
    fig.line(objects.lemoine_axis, stroke="#c00000")
    fig.point(l1, label="l1")
    fig.point(l2, label="l2")
    return fig


def field(spec: FamilySpec, resolution: int = 64, t: float = 0.3, n_circles: int = 12) -> SvgFigure:
    """Heatmap of w'(Q) with its level-w contour and the pencil overlay."""
    spec = spec.to_inversive()
    objects = brocard_objects(spec)
    omega = omega_field(spec, resolution=resolution, t=t)
    fig = SvgFigure(omega.bbox, f"omega field N={spec.n} x0={spec.x0:.6f}")
    finite = omega.values[np.isfinite(omega.values)]
    lo, hi = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    dx = omega.xs[1] - omega.xs[0]
    dy = omega.ys[1] - omega.ys[0]
    for iy, y in enumerate(omega.ys):
        for ix, x in enumerate(omega.xs):
            value = omega.values[iy, ix]
            fill = "#ffffff" if not np.isfinite(value) else _heat(value, lo, hi)
            fig.cell(x - dx / 2, y + dy / 2, dx, dy, fill)
    for p, q in contour_lines(omega, objects.brocard_angle):
        fig.segment(p, q, stroke="#ffffff", width=1.5)
    fig.circle(objects.circumcircle, stroke="#000000")
    if objects.pencil is not None:
        for member in _pencil_members(objects, n_circles):
            fig.circle(member, stroke="#c0c0c0", width=0.5)
        fig.circle(objects.brocard_circle, stroke="#000000", dash=True)
        fig.line(objects.lemoine_axis, stroke="#000000")
    return fig


def render_plot(kind: str, spec: FamilySpec, t: float, resolution: int = 64, n_circles: int = 12) -> SvgFigure:
    if kind == "figure1":
        return figure1(spec, t)
    if kind == "polar":
        return polar(spec, t)
    if kind == "pencil":
        return pencil(spec, n_circles)
    if kind == "field":
        return field(spec, resolution, t, n_circles)
    raise ValueError(f"unknown plot kind {kind!r}; expected one of {', '.join(PLOT_KINDS)}")
