#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Isocurves Module
----------------
Brocard angle of inversive images of a harmonic polygon, as a function of
the inversion center Q, and the test that its level sets are circles of the
Schoute pencil.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from geometry.geom_core import (
    DEFAULT_TOL,
    Circle,
    GeometryError,
    Line,
    Polygon,
    Tolerances,
    invert_polygon,
)
from harmonic.harmonic_family import (
    BrocardObjects,
    FamilySpec,
    brocard_angle_measured,
    brocard_objects,
    symmedian_residual,
    t_grid,
    vertices_inversive,
)
from harmonic.invariants import ConjectureVerdict

logger = logging.getLogger(__name__)

CIRCUMCIRCLE_BAND = 1e-3
FIELD_MASK_BAND = 1e-3
DEFAULT_PHASE = 0.3
PHASE_COUNT = 8
# Largest change of w' over the phases before it is noted in the report
PHASE_SPREAD_TOL = 1e-9


@dataclass(frozen=True)
class IsocurveRow:
    kind: str
    center: complex
    radius: Optional[float]
    mean: float
    max_dev: float
    points: int
    side: str = ""


@dataclass(frozen=True)
class IsocurveReport:
    n: int
    x0: float
    omega: float
    rows: Tuple[IsocurveRow, ...]
    monotone: bool
    verdict: ConjectureVerdict
    phase_spread: float = 0.0
    notes: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def max_dev(self) -> float:
        return max(row.max_dev for row in self.rows)

    def row(self, kind: str) -> IsocurveRow:
        return next(r for r in self.rows if r.kind == kind)


@dataclass(frozen=True)
class OmegaField:
    """
    Values of w'(Q) on a lattice, indexed [iy, ix].

    Masked nodes (near the circumcircle or where the image degenerates)
    hold NaN.
    """

    xs: np.ndarray
    ys: np.ndarray
    values: np.ndarray
    mask: np.ndarray
    bbox: Tuple[float, float, float, float]

    @property
    def spacing(self) -> float:
        return max(self.xs[1] - self.xs[0], self.ys[1] - self.ys[0])

    def mirror_asymmetry(self) -> float:
        """max |w'(x, y) - w'(x, -y)| over nodes defined in both; the grid must be y-symmetric."""
        if not np.allclose(self.ys, -self.ys[::-1], atol=1e-12 * max(1.0, abs(self.ys).max())):
            raise GeometryError("field grid is not symmetric about the x-axis")
        diff = np.abs(self.values - self.values[::-1, :])
        finite = np.isfinite(diff)
        return float(diff[finite].max()) if finite.any() else 0.0

    def argmax(self) -> complex:
        iy, ix = np.unravel_index(np.nanargmax(self.values), self.values.shape)
        return complex(self.xs[ix], self.ys[iy])


# --- Inversion about Q ---

def inverted_polygon(P: Polygon, Q: complex, radius: float = 1.0) -> Polygon:
    Q = complex(Q)
    gap = min(abs(v - Q) for v in P.vertices)
    if gap <= DEFAULT_TOL.direct * P.scale:
        raise GeometryError(f"inversion center: Q = {Q} coincides with a vertex")
    return invert_polygon(P, Circle(Q, radius))


def fitted_symmedian(P: Polygon) -> complex:
    """
    Least-squares point whose signed side distances are proportional to the sidelengths.

    Solves n_k . K - w_k = lam s_k for (K, lam).
    """
    rows, rhs = [], []
    lengths = [abs(P.vertices[(i + 1) % P.n] - P.vertices[i]) for i in range(P.n)]
    for side, s in zip(P.sidelines(), lengths):
        u, v, w = side.normal_form()
        rows.append((u, v, -s))
        rhs.append(w)
    solution, *_ = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)
    return complex(solution[0], solution[1])


def omega_prime(
    spec: FamilySpec,
    t: float,
    Q: complex,
    radius: float = 1.0,
    check: bool = False,
    objects: Optional[BrocardObjects] = None,
    tol: Tolerances = DEFAULT_TOL,
) -> float:
    """
    Brocard angle of the image of the harmonic snapshot under inversion about Q.

    With check=True the image is also confirmed harmonic: its fitted
    symmedian must pass symmedian_residual below 1e-8.
    """
    objects = objects or brocard_objects(spec)
    C = objects.circumcircle
    if abs(abs(Q - C.center) - C.radius) <= tol.tangency * C.radius:
        raise GeometryError(f"Q on circumcircle: the image of {Q} degenerates to a line")
    image = inverted_polygon(vertices_inversive(spec, t), Q, radius)
    if check:
        residual = symmedian_residual(image, fitted_symmedian(image))
        if residual > 1e-8:
            raise GeometryError(f"not harmonic / wrong ω: image about {Q} has symmedian residual {residual:.3e}")
    return brocard_angle_measured(image)


# --- Conjecture test ---

def pencil_sample_offsets(objects: BrocardObjects, n_circles: int) -> Tuple[List[float], List[str]]:
    """
    Geometric offsets from l1 toward (and past) the circumcenter for pencil members.

    Offsets within the exclusion band of the circumcircle member are dropped.
    """
    O, R = objects.circumcircle.center.real, objects.circumcircle.radius
    l1 = objects.limiting_points[0].real
    span = abs(O - l1)
    raw = np.geomspace(1e-2 * R, span + 4.0 * R, n_circles)
    kept, notes = [], []
    for delta in raw:
        if abs(delta - span) < CIRCUMCIRCLE_BAND * R:
            notes.append(f"pencil member at offset {delta:.6g} is the circumcircle ring, skipped")
            continue
        kept.append(float(delta))
    return kept, notes


def _ring_values(spec, objects, circle: Circle, n_points: int, t: float, tol) -> List[float]:
    phis = 2.0 * np.pi * (np.arange(n_points) + 0.5) / n_points
    return [omega_prime(spec, t, circle.point_at(phi), objects=objects, tol=tol) for phi in phis]


def _row(kind: str, center: complex, radius: Optional[float], values: Sequence[float], side: str = "") -> IsocurveRow:
    mean = math.fsum(values) / len(values)
    return IsocurveRow(
        kind=kind,
        center=center,
        radius=radius,
        mean=mean,
        max_dev=max(abs(v - mean) for v in values),
        points=len(values),
        side=side,
    )


def phase_spread(
    spec: FamilySpec,
    points: Sequence[complex],
    phases: int = PHASE_COUNT,
    objects: Optional[BrocardObjects] = None,
    tol: Tolerances = DEFAULT_TOL,
) -> float:
    """
    Largest change of w'(Q) over the family phases, for each of the given points.

    Args:
        spec: the harmonic family
        points: inversion centers away from the circumcircle
        phases: number of phases spread over one Poncelet period

    Returns:
        max over points of (max - min) of w'(Q) across the phases
    """
    objects = objects or brocard_objects(spec)
    worst = 0.0
    for Q in points:
        values = [omega_prime(spec, float(t), Q, objects=objects, tol=tol) for t in t_grid(spec.n, phases)]
        worst = max(worst, max(values) - min(values))
    return worst


def isocurve_test(
    spec: FamilySpec,
    n_circles: int = 12,
    n_points: int = 64,
    t: float = DEFAULT_PHASE,
    tol: Tolerances = DEFAULT_TOL,
) -> IsocurveReport:
    """
    Evaluate w' around sampled Schoute pencil circles, the Brocard circle and the Lemoine axis.

    Supported when every ring is level within tol.conjecture, the
    Brocard-circle and Lemoine rows equal w, and the ring means are
    monotone on each side of the circumcircle. Independence of w' from the
    phase is reported apart from the verdict, as phase_spread.
    """
    spec = spec.to_inversive()
    if spec.x0 == 0.0:
        raise GeometryError("parameter out of range: the regular family has no Schoute pencil (x0 = 0)")
    objects = brocard_objects(spec)
    omega = objects.brocard_angle
    O, R = objects.circumcircle.center, objects.circumcircle.radius
    l1 = objects.limiting_points[0]
    direction = 1.0 if O.real > l1.real else -1.0

    if n_points < 1:
        raise GeometryError(f"parameter out of range: need at least one point per ring, got {n_points}")
    offsets, notes = pencil_sample_offsets(objects, n_circles)
    if not offsets:
        raise GeometryError(f"parameter out of range: no pencil circles left to sample from n_circles={n_circles}")
    rows, witnesses = [], []
    for delta in offsets:
        member = objects.pencil.member_at(l1 + direction * delta)
        side = "inside" if delta < abs(O - l1) else "outside"
        rows.append(_row("pencil", member.center, member.radius, _ring_values(spec, objects, member, n_points, t, tol), side))
        witnesses.append(member.point_at(0.5))

    rows.append(_row("brocard", objects.brocard_circle.center, objects.brocard_circle.radius,
                     _ring_values(spec, objects, objects.brocard_circle, n_points, t, tol)))
    axis = objects.lemoine_axis
    heights = np.linspace(-10.0 * R, 10.0 * R, n_points)
    lemoine_values = [omega_prime(spec, t, axis.point + h * axis.direction, objects=objects, tol=tol) for h in heights]
    rows.append(_row("lemoine", axis.point, None, lemoine_values))
    witnesses += [objects.brocard_circle.point_at(0.5), axis.point + R * axis.direction]
    spread = phase_spread(spec, witnesses, objects=objects, tol=tol)
    if spread >= PHASE_SPREAD_TOL:
        notes.append(f"w' changes by {spread:.3e} across {PHASE_COUNT} phases")

    inside = [r.mean for r in rows if r.side == "inside"]
    outside = [r.mean for r in rows if r.side == "outside"]
    monotone = all(a > b for a, b in zip(inside, inside[1:])) and all(a < b for a, b in zip(outside, outside[1:]))

    worst = max(r.max_dev for r in rows)
    for kind in ("brocard", "lemoine"):
        worst = max(worst, abs(next(r for r in rows if r.kind == kind).mean - omega))

    if worst > tol.conjecture_violated:
        verdict = ConjectureVerdict.VIOLATED
    elif worst < tol.conjecture and monotone:
        verdict = ConjectureVerdict.SUPPORTED
    else:
        verdict = ConjectureVerdict.INCONCLUSIVE
    for note in notes:
        logger.warning(note)
    logger.info(f"isocurves N={spec.n}, x0={spec.x0}: {verdict.value}, worst deviation {worst:.3e}")
    return IsocurveReport(
        n=spec.n,
        x0=spec.x0,
        omega=omega,
        rows=tuple(rows),
        monotone=monotone,
        verdict=verdict,
        phase_spread=spread,
        notes=tuple(notes),
    )


# --- Field and contours ---

def default_bbox(objects: BrocardObjects) -> Tuple[float, float, float, float]:
    O, R = objects.circumcircle.center.real, objects.circumcircle.radius
    return O - 2.5 * R, O + 2.5 * R, -2.5 * R, 2.5 * R


def omega_field(
    spec: FamilySpec,
    bbox: Optional[Tuple[float, float, float, float]] = None,
    resolution: int = 64,
    t: float = DEFAULT_PHASE,
) -> OmegaField:
    if resolution < 16:
        raise GeometryError(f"parameter out of range: field resolution must be >= 16, got {resolution}")
    spec = spec.to_inversive()
    objects = brocard_objects(spec)
    bbox = bbox or default_bbox(objects)
    xmin, xmax, ymin, ymax = bbox
    xs = np.linspace(xmin, xmax, resolution)
    ys = np.linspace(ymin, ymax, resolution)
    O, R = objects.circumcircle.center, objects.circumcircle.radius

    values = np.full((resolution, resolution), np.nan)
    mask = np.zeros((resolution, resolution), dtype=bool)
    for iy, y in enumerate(ys):
        for ix, x in enumerate(xs):
            Q = complex(x, y)
            if abs(abs(Q - O) - R) < FIELD_MASK_BAND * R:
                mask[iy, ix] = True
                continue
            try:
                values[iy, ix] = omega_prime(spec, t, Q, objects=objects)
            except GeometryError as e:
                logger.debug(f"field node {Q} masked: {e}")
                mask[iy, ix] = True
    if mask.any():
        logger.warning(f"omega field {resolution}x{resolution}: {int(mask.sum())} nodes masked")
    return OmegaField(xs=xs, ys=ys, values=values, mask=mask, bbox=tuple(bbox))


_EDGES = ((0, 1), (1, 2), (2, 3), (3, 0))


def _lerp(p0: complex, p1: complex, v0: float, v1: float) -> complex:
    s = v0 / (v0 - v1)
    return p0 + min(max(s, 0.0), 1.0) * (p1 - p0)


def contour_lines(omega: OmegaField, level: float) -> List[Tuple[complex, complex]]:
    """
    Marching squares over the field at the given level.

    Cells with a masked corner are skipped; saddle cells are resolved by
    the sign of the cell-center average.
    """
    segments = []
    shifted = omega.values - level
    xs, ys = omega.xs, omega.ys
    for iy in range(len(ys) - 1):
        for ix in range(len(xs) - 1):
            corners = (
                complex(xs[ix], ys[iy]),
                complex(xs[ix + 1], ys[iy]),
                complex(xs[ix + 1], ys[iy + 1]),
                complex(xs[ix], ys[iy + 1]),
            )
            vals = (shifted[iy, ix], shifted[iy, ix + 1], shifted[iy + 1, ix + 1], shifted[iy + 1, ix])
            if not all(np.isfinite(vals)):
                continue
            signs = [v > 0 for v in vals]
            crossings = {}
            for edge in _EDGES:
                i, j = edge
                if signs[i] != signs[j]:
                    crossings[edge] = _lerp(corners[i], corners[j], vals[i], vals[j])
            if len(crossings) == 2:
                p, q = crossings.values()
                segments.append((p, q))
            elif len(crossings) == 4:
                center_sign = (sum(vals) / 4.0) > 0
                if signs[0] != center_sign:
                    pairs = (((3, 0), (0, 1)), ((1, 2), (2, 3)))
                else:
                    pairs = (((0, 1), (1, 2)), ((2, 3), (3, 0)))
                for a, b in pairs:
                    segments.append((crossings[a], crossings[b]))
    return segments


def overlay_residual(
    segments: Sequence[Tuple[complex, complex]],
    circles: Sequence[Circle] = (),
    lines: Sequence[Line] = (),
) -> float:
    """Max over segment endpoints of the distance to the nearest given circle or line."""
    if not segments:
        raise GeometryError("no contour segments to compare")
    if not circles and not lines:
        raise GeometryError("nothing to overlay the contours on")
    worst = 0.0
    for segment in segments:
        for p in segment:
            gaps = [abs(abs(p - c.center) - c.radius) for c in circles] + [l.distance(p) for l in lines]
            worst = max(worst, min(gaps))
    return worst
