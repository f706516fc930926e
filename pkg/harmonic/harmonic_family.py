#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Harmonic Family Module
----------------------
Constructs Poncelet families of harmonic polygons and their Brocard geometry.

Three constructions are provided: the Casey chord construction on the unit
circle, the explicit inversive image of a regular polygon, and the
projective (harmonic conjugate) construction from a circle and a symmedian
point. All associated objects are evaluated in closed form in the inversive
frame; oracle constructions (concurrence of rotated sides, tangency of
sides to the inellipse) cross-validate them.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np

from geometry.geom_core import (
    DEFAULT_TOL,
    AxisEllipse,
    Circle,
    CirclePencil,
    GeometryError,
    Line,
    Polygon,
    as_point,
    cross_ratio,
    internal_angles,
    invert_point,
    line_tangency_residual,
    perimeter,
    polar_line,
    polygon_area,
    second_intersection,
    sidelengths,
)

logger = logging.getLogger(__name__)

# Relative gap below which tan w is taken to equal cot alpha (the regular family)
REGULAR_SNAP = 1e-14


class Frame(Enum):
    CASEY = "casey"
    INVERSIVE = "inversive"


@dataclass(frozen=True)
class FamilySpec:
    """
    A harmonic family: N, the frame, and d (Casey) or x0 (inversive).

    Args:
        n: number of vertices, at least 3
        frame: Frame.CASEY or Frame.INVERSIVE
        param: d or x0, with |param| < 1
    """

    n: int
    frame: Frame
    param: float

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 3:
            raise GeometryError(f"parameter out of range: N must be an integer >= 3, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "frame", Frame(self.frame))
        p = float(self.param)
        if not math.isfinite(p) or abs(p) >= 1.0:
            raise GeometryError(f"parameter out of range: |{self.frame.value} parameter| must be < 1, got {p}")
        object.__setattr__(self, "param", p)

    @classmethod
    def inversive(cls, n: int, x0: float) -> "FamilySpec":
        return cls(n, Frame.INVERSIVE, x0)

    @classmethod
    def casey(cls, n: int, d: float) -> "FamilySpec":
        return cls(n, Frame.CASEY, d)

    @property
    def alpha(self) -> float:
        return math.pi / self.n

    @property
    def x0(self) -> float:
        if self.frame is Frame.CASEY:
            return casey_to_inversive(self.param)
        return self.param

    @property
    def d(self) -> float:
        if self.frame is Frame.INVERSIVE:
            return inversive_to_casey(self.param)
        return self.param

    def to_inversive(self) -> "FamilySpec":
        return FamilySpec(self.n, Frame.INVERSIVE, self.x0)


@dataclass(frozen=True)
class PolygonSnapshot:
    """One family member at phase t, with its measurements cached."""

    t: float
    polygon: Polygon
    sidelengths: Tuple[float, ...]
    angles: Tuple[float, ...]
    signed_area: float
    perimeter: float

    @classmethod
    def measure(cls, t: float, polygon: Polygon) -> "PolygonSnapshot":
        return cls(
            t=float(t),
            polygon=polygon,
            sidelengths=tuple(float(s) for s in sidelengths(polygon)),
            angles=tuple(float(a) for a in internal_angles(polygon)),
            signed_area=polygon_area(polygon, signed=True),
            perimeter=perimeter(polygon),
        )

    @property
    def area(self) -> float:
        return abs(self.signed_area)

    @property
    def n(self) -> int:
        return self.polygon.n


@dataclass(frozen=True)
class BrocardObjects:
    """
    Stationary objects of a harmonic family, inversive frame.

    The Brocard circle, limiting point l2, Lemoine axis and Schoute pencil
    are None for the regular family (x0 = 0), where they run off to infinity
    or collapse onto the center.
    """

    x0: float
    n: int
    circumcircle: Circle
    symmedian: complex
    brocard_points: Tuple[complex, complex]
    inellipse: AxisEllipse
    eccentricity: float
    brocard_circle: Optional[Circle]
    limiting_points: Tuple[complex, Optional[complex]]
    lemoine_axis: Optional[Line]
    pencil: Optional[CirclePencil]
    brocard_angle: float
    delta: float


@dataclass(frozen=True)
class ConcurrenceResult:
    first: complex
    second: complex
    residual: float


@dataclass(frozen=True)
class ProjectiveConstruction:
    """Intermediate points of the projective construction, kept for checks."""

    circle: Circle
    symmedian: complex
    k_prime: complex
    tangent_point: complex
    center: complex
    center_prime: complex
    axis: Line
    sigma: Line
    regular: Tuple[complex, ...]
    polygon: Polygon


# --- Frames ---

def casey_to_inversive(d: float) -> float:
    """
    x0 for a Casey parameter d.

    The limiting point's offset from the circumcenter, in circumradius
    units, is the same number in both frames, so x0 = d.
    """
    d = float(d)
    if abs(d) >= 1.0:
        raise GeometryError(f"parameter out of range: |d| must be < 1, got {d}")
    return d


def inversive_to_casey(x0: float) -> float:
    x0 = float(x0)
    if abs(x0) >= 1.0:
        raise GeometryError(f"parameter out of range: |x0| must be < 1, got {x0}")
    return x0


def to_casey_frame(points, x0: float) -> np.ndarray:
    """
    Similarity w -> (O - w) / R from the inversive frame to the Casey frame.

    Maps the inversive circumcircle onto the unit circle and l1 = (x0, 0)
    onto (x0, 0); inversive vertex k at phase t goes to Casey vertex k at t.
    """
    O, R = circumcircle_params(x0)
    return (O - np.asarray(points, dtype=complex)) / R


def regular_phases(n: int, t: float) -> np.ndarray:
    """2 alpha k + t for k = 0..N-1."""
    return 2.0 * np.pi * np.arange(n) / n + t


def t_grid(n: int, samples: int) -> np.ndarray:
    """Uniform phases over one Poncelet period [0, 2 pi / N)."""
    if samples < 1:
        raise GeometryError(f"sample count must be positive, got {samples}")
    return np.arange(samples) * (2.0 * np.pi / n) / samples


# --- Constructions ---

def vertices_casey(spec: FamilySpec, t: float) -> Polygon:
    """w_k = (d conj(z_k) - 1) / (conj(z_k) - d) on the unit circle."""
    d = spec.d
    zbar = np.exp(-1j * regular_phases(spec.n, t))
    w = (d * zbar - 1.0) / (zbar - d)
    return Polygon(tuple(complex(v) for v in w))


def vertices_inversive(spec: FamilySpec, t: float) -> Polygon:
    """Explicit inversive vertices, the image of z_k in the unit circle at (x0, 0)."""
    x0 = spec.x0
    nu = regular_phases(spec.n, t)
    c, s = np.cos(nu), np.sin(nu)
    denom = 1.0 + x0 * x0 - 2.0 * x0 * c
    xs = ((1.0 - 2.0 * x0 * x0) * c + x0 ** 3) / denom
    ys = s / denom
    return Polygon(tuple(complex(x, y) for x, y in zip(xs, ys)))


def vertices_by_inversion(spec: FamilySpec, t: float) -> Polygon:
    """Same polygon as vertices_inversive, by applying invert_point to z_k."""
    mirror = Circle(complex(spec.x0, 0.0), 1.0)
    zs = np.exp(1j * regular_phases(spec.n, t))
    return Polygon(tuple(invert_point(complex(z), mirror) for z in zs))


def projective_construction(C: Circle, K: complex, t: float, n: int) -> ProjectiveConstruction:
    """
    Harmonic polygon from its circumcircle and symmedian point.

    K' is where OK meets the polar of K; T is a tangency point from K'; the
    circle about K' through T cuts OK at S (inside C) and S'; each regular
    vertex R_i projects from S to the second intersection P_i with C.
    """
    K = as_point(K)
    O, R = C.center, C.radius
    offset = K - O
    if abs(offset) <= DEFAULT_TOL.derived * R:
        raise GeometryError("K at the circumcenter: its polar is the line at infinity")
    if abs(offset) >= R:
        raise GeometryError("K must lie strictly inside the circumcircle")
    u = offset / abs(offset)
    axis = Line(O, u)
    k_prime = axis.intersect(polar_line(K, C))
    far = abs(k_prime - O)
    beta = math.acos(R / far)
    tangent_point = O + R * u * complex(math.cos(beta), math.sin(beta))
    rho = abs(tangent_point - k_prime)
    candidates = (k_prime - rho * u, k_prime + rho * u)
    center, center_prime = sorted(candidates, key=lambda p: abs(p - O))
    sigma = Line(center_prime, u * 1j)

    regular = tuple(complex(O + R * u * np.exp(1j * nu)) for nu in regular_phases(n, t))
    vertices = tuple(second_intersection(Line.through(center, r), C, r) for r in regular)
    return ProjectiveConstruction(
        circle=C,
        symmedian=K,
        k_prime=k_prime,
        tangent_point=tangent_point,
        center=center,
        center_prime=center_prime,
        axis=axis,
        sigma=sigma,
        regular=regular,
        polygon=Polygon(vertices),
    )


def vertices_projective(C: Circle, K: complex, t: float, n: int) -> Polygon:
    return projective_construction(C, K, t, n).polygon


def harmonic_conjugate_residual(C: Circle, K: complex, t: float, n: int) -> float:
    """
    max |(P_i, R_i; S, Z_i) + 1| over the vertices of the projective construction.

    Z_i is where S R_i meets the projection axis sigma. Rays parallel to
    sigma are skipped.
    """
    build = projective_construction(C, K, t, n)
    worst = 0.0
    for p, r in zip(build.polygon.vertices, build.regular):
        ray = Line.through(build.center, r)
        try:
            z = ray.intersect(build.sigma)
        except GeometryError:
            logger.debug(f"ray through {r} is parallel to the projection axis, skipped")
            continue
        worst = max(worst, abs(cross_ratio(p, r, build.center, z) + 1.0))
    return worst


# --- Closed forms ---

def circumcircle_params(x0: float) -> Tuple[float, float]:
    """(O, R) with O = x0 (x0^2 - 2) / (x0^2 - 1) and R = 1 / |x0^2 - 1|."""
    return x0 * (x0 * x0 - 2.0) / (x0 * x0 - 1.0), 1.0 / abs(x0 * x0 - 1.0)


def brocard_objects(spec: FamilySpec) -> BrocardObjects:
    """Every stationary object of the family, from its closed form."""
    x0 = spec.x0
    n = spec.n
    alpha = spec.alpha
    x2 = x0 * x0
    cos2a, sin2a = math.cos(2 * alpha), math.sin(2 * alpha)

    O, R = circumcircle_params(x0)
    K = x0 ** 3 / (x2 + 1.0)

    denom = x2 * x2 - 2.0 * x2 * cos2a + 1.0
    omega_x = x0 * (x2 * x2 - x2 + 1.0 - (2.0 * x2 - 1.0) * cos2a) / denom
    omega_y = -x0 * sin2a / denom
    brocard_points = (complex(omega_x, omega_y), complex(omega_x, -omega_y))

    k_prime = (x2 + 1.0) ** 2 - (2.0 * x0 * math.cos(alpha)) ** 2
    semi_x = abs(1.0 - x2) * math.cos(alpha) / k_prime
    semi_y = math.cos(alpha) / math.sqrt(k_prime)
    inellipse = AxisEllipse(omega_x, semi_x, semi_y)
    eccentricity = 2.0 * abs(x0) * math.sin(alpha) / math.sqrt(k_prime)

    omega = math.atan(abs(1.0 - x2) / (1.0 + x2) / math.tan(alpha))

    if x0 == 0.0:
        brocard_circle = None
        l2 = None
        lemoine = None
        pencil = None
    else:
        brocard_circle = Circle(x0 * (x2 * x2 - x2 - 1.0) / (x2 * x2 - 1.0), abs(x0 / (x2 * x2 - 1.0)))
        l2 = complex((x2 - 1.0) / x0, 0.0)
        pencil = CirclePencil(complex(x0, 0.0), l2)
        lemoine = pencil.radical_axis

    return BrocardObjects(
        x0=x0,
        n=n,
        circumcircle=Circle(O, R),
        symmedian=complex(K, 0.0),
        brocard_points=brocard_points,
        inellipse=inellipse,
        eccentricity=eccentricity,
        brocard_circle=brocard_circle,
        limiting_points=(complex(x0, 0.0), l2),
        lemoine_axis=lemoine,
        pencil=pencil,
        brocard_angle=omega,
        delta=abs(K - O),
    )


def lemoine_axis(spec: FamilySpec) -> Line:
    """Vertical line through (2 x0^2 - 1) / (2 x0): the polar of K in the circumcircle."""
    x0 = spec.x0
    if x0 == 0.0:
        raise GeometryError("inversion center: K is the circumcenter and its polar is the line at infinity")
    return Line(complex((2.0 * x0 * x0 - 1.0) / (2.0 * x0), 0.0), 1j)


def brocard_angle_from_offset(n: int, ratio: float) -> float:
    """Casey's relation tan w = sqrt(1 - (delta/R)^2) cot alpha."""
    if not 0.0 <= ratio < 1.0:
        raise GeometryError(f"parameter out of range: delta/R must lie in [0, 1), got {ratio}")
    return math.atan(math.sqrt(1.0 - ratio * ratio) / math.tan(math.pi / n))


def x0_roots_from_offset(ratio: float) -> Tuple[float, float]:
    """Both x0 = (1 -+ sqrt(1 - (delta/R)^2)) / (delta/R); their product is 1."""
    if not 0.0 < ratio <= 1.0:
        raise GeometryError(f"parameter out of range: delta/R must lie in (0, 1], got {ratio}")
    root = math.sqrt(1.0 - ratio * ratio)
    return (1.0 - root) / ratio, (1.0 + root) / ratio


def x0_from_brocard_angle(n: int, omega: float) -> float:
    """
    x0 = sqrt((cot alpha - tan w) / (cot alpha + tan w)), the root inside the unit disc.

    Args:
        n: number of vertices
        omega: Brocard angle in (0, pi/2 - pi/n]

    Returns:
        x0 in [0, 1); exactly 0 when tan w is within REGULAR_SNAP of cot alpha
    """
    cot_a = 1.0 / math.tan(math.pi / n)
    if not 0.0 < omega < math.pi / 2:
        raise GeometryError(f"parameter out of range: Brocard angle must lie in (0, pi/2), got {omega}")
    tan_w = math.tan(omega)
    if tan_w > cot_a * (1.0 + REGULAR_SNAP):
        raise GeometryError(f"parameter out of range: tan w = {tan_w} exceeds cot alpha = {cot_a}")
    if cot_a - tan_w <= REGULAR_SNAP * cot_a:
        return 0.0
    return math.sqrt(max(cot_a - tan_w, 0.0) / (cot_a + tan_w))


# --- Measurements and oracles ---

def snapshot(spec: FamilySpec, t: float) -> PolygonSnapshot:
    """Family member at phase t in the canonical inversive frame."""
    return PolygonSnapshot.measure(t, vertices_inversive(spec, t))


def sweep(spec: FamilySpec, samples: int = 64) -> List[PolygonSnapshot]:
    return [snapshot(spec, t) for t in t_grid(spec.n, samples)]


def _as_polygon(P) -> Polygon:
    return P.polygon if isinstance(P, PolygonSnapshot) else P


def brocard_angle_measured(P) -> float:
    """arccot(sum s^2 / (4 A))."""
    polygon = _as_polygon(P)
    area = polygon_area(polygon)
    if area <= DEFAULT_TOL.direct * polygon.scale ** 2:
        raise GeometryError("degenerate polygon: zero area")
    return math.atan2(4.0 * area, math.fsum(s * s for s in sidelengths(polygon)))


def _least_squares_point(lines: Sequence[Line]) -> Tuple[complex, float]:
    normals = np.array([[l.normal.real, l.normal.imag] for l in lines])
    rhs = np.array([l.normal_form()[2] for l in lines])
    solution, *_ = np.linalg.lstsq(normals, rhs, rcond=None)
    point = complex(solution[0], solution[1])
    rms = math.sqrt(math.fsum(l.distance(point) ** 2 for l in lines) / len(lines))
    return point, rms


def brocard_points_by_concurrence(P, omega: float, tol: float = DEFAULT_TOL.tangency) -> ConcurrenceResult:
    """
    Concurrence points of the sides rotated by w about P_i and by -w about P_{i+1}.

    Rotations are taken toward the interior, so clockwise polygons flip the
    sign. Raises GeometryError when the RMS point-line distance exceeds
    tol times the polygon scale.
    """
    polygon = _as_polygon(P)
    orientation = 1.0 if polygon_area(polygon, signed=True) >= 0 else -1.0
    vs = polygon.vertices
    n = polygon.n
    sides = polygon.sidelines()
    first_lines = [sides[i].rotated(orientation * omega, vs[i]) for i in range(n)]
    second_lines = [sides[i].rotated(-orientation * omega, vs[(i + 1) % n]) for i in range(n)]
    first, res1 = _least_squares_point(first_lines)
    second, res2 = _least_squares_point(second_lines)
    residual = max(res1, res2)
    if residual > tol * polygon.scale:
        raise GeometryError(f"not harmonic / wrong ω: rotated sides miss concurrence by {residual:.3e}")
    return ConcurrenceResult(first, second, residual)


def symmedian_residual(P, K: complex) -> float:
    """Coefficient of variation of dist(K, sideline_k) / s_k."""
    polygon = _as_polygon(P)
    ratios = np.array([side.distance(K) for side in polygon.sidelines()]) / sidelengths(polygon)
    mean = math.fsum(ratios) / len(ratios)
    if mean == 0.0:
        return math.inf
    spread = math.sqrt(math.fsum((r - mean) ** 2 for r in ratios) / len(ratios))
    return spread / mean


def triangle_symmedian(P) -> complex:
    """X6 of a triangle: barycentrics a^2 : b^2 : c^2."""
    polygon = _as_polygon(P)
    if polygon.n != 3:
        raise GeometryError(f"triangle_symmedian needs 3 vertices, got {polygon.n}")
    A, B, C = polygon.vertices
    wa, wb, wc = abs(B - C) ** 2, abs(C - A) ** 2, abs(A - B) ** 2
    return (wa * A + wb * B + wc * C) / (wa + wb + wc)


def closure_residual(spec: FamilySpec, t: float, inellipse: Optional[AxisEllipse] = None) -> float:
    """Max tangency residual of the sides at phase t against the Brocard inellipse."""
    caustic = inellipse or brocard_objects(spec).inellipse
    polygon = vertices_inversive(spec, t)
    return max(line_tangency_residual(side, caustic) for side in polygon.sidelines())


def brocard_point_drift(spec: FamilySpec, samples: int = 64) -> float:
    """Max distance, over a sweep, of the concurrence points from the closed forms."""
    objects = brocard_objects(spec)
    targets = objects.brocard_points
    worst = 0.0
    for snap in sweep(spec, samples):
        found = brocard_points_by_concurrence(snap, objects.brocard_angle)
        for p in (found.first, found.second):
            worst = max(worst, min(abs(p - q) for q in targets))
    return worst


class HarmonicFamily:
    """
    A harmonic family with lazily evaluated Brocard objects.

    Snapshots are produced in the inversive frame whatever frame the spec
    was given in.
    """

    def __init__(self, spec: FamilySpec):
        self.spec = spec.to_inversive()
        self.source = spec

    @cached_property
    def objects(self) -> BrocardObjects:
        objects = brocard_objects(self.spec)
        logger.debug(f"Brocard objects for N={self.spec.n}, x0={self.spec.x0}: w={objects.brocard_angle}")
        return objects

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def alpha(self) -> float:
        return self.spec.alpha

    def snapshot(self, t: float) -> PolygonSnapshot:
        return snapshot(self.spec, t)

    def sweep(self, samples: int = 64) -> List[PolygonSnapshot]:
        return sweep(self.spec, samples)
