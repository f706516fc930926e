#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Plane Geometry Core
-------------------
Plane primitives shared by the harmonic polygon laboratory.

Points are Python complex numbers and double as Euclidean points. Circles,
axis-aligned ellipses, lines, polygons and coaxial circle pencils are frozen
dataclasses; every operation is a pure function of its arguments.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

CPoint = complex


class GeometryError(ValueError):
    """Raised when a construction is asked for outside its domain."""


@dataclass(frozen=True)
class Tolerances:
    """
    Numeric thresholds used across the laboratory.

    All values are relative to the geometric scale of the configuration
    (bounding-box diameter) unless stated otherwise.
    """

    direct: float = 1e-12
    derived: float = 1e-10
    tangency: float = 1e-9
    invariant: float = 1e-8
    varies: float = 1e-4
    zero: float = 1e-9
    scale_floor: float = 1e-12
    closed_form: float = 1e-9
    conjecture: float = 1e-7
    conjecture_violated: float = 1e-4

    def with_invariant(self, value: float) -> "Tolerances":
        """Copy with the invariance threshold replaced (the CLI --tol flag)."""
        if not (value > 0 and math.isfinite(value)):
            raise GeometryError(f"tolerance must be a positive number, got {value}")
        return replace(self, invariant=value, varies=max(self.varies, value))


DEFAULT_TOL = Tolerances()

# Largest |B| or |E| of a unit-norm conic accepted as axis-aligned on the x-axis
AXIS_FIT_TOL = 1e-7


def as_point(p) -> complex:
    """Coerce to a finite complex point."""
    z = complex(p)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise GeometryError(f"non-finite point {z!r}")
    return z


def cross(a: complex, b: complex) -> float:
    """
    z-component of the planar cross product of two vectors.

    Args:
        a: first vector as a complex number
        b: second vector as a complex number

    Returns:
        a.x b.y - a.y b.x, positive when b is counterclockwise from a
    """
    return a.real * b.imag - a.imag * b.real


def dot(a: complex, b: complex) -> float:
    """Euclidean inner product of two vectors given as complex numbers."""
    return a.real * b.real + a.imag * b.imag


def scale_of(points: Sequence[complex]) -> float:
    """Bounding-box diameter, never below 1e-300."""
    xs = [p.real for p in points]
    ys = [p.imag for p in points]
    return max(math.hypot(max(xs) - min(xs), max(ys) - min(ys)), 1e-300)


def cross_ratio(z1: complex, z2: complex, z3: complex, z4: complex) -> complex:
    """(z1, z2; z3, z4) = (z1 - z3)(z2 - z4) / ((z1 - z4)(z2 - z3))."""
    return (z1 - z3) * (z2 - z4) / ((z1 - z4) * (z2 - z3))


# --- Value types ---

@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        r = float(self.radius)
        if not (math.isfinite(r) and r > 0):
            raise GeometryError(f"circle radius must be positive, got {r}")
        object.__setattr__(self, "radius", r)

    def power(self, p: complex) -> float:
        """Power of p: |p - center|^2 - radius^2."""
        return abs(p - self.center) ** 2 - self.radius ** 2

    def residual(self, p: complex) -> float:
        """Relative distance of p from the circle."""
        return abs(abs(p - self.center) - self.radius) / self.radius

    def point_at(self, phi: float) -> complex:
        return self.center + self.radius * complex(math.cos(phi), math.sin(phi))


@dataclass(frozen=True)
class AxisEllipse:
    """Ellipse with axes parallel to the coordinate axes and center (cx, 0)."""

    cx: float
    a: float
    b: float

    def __post_init__(self):
        for name in ("cx", "a", "b"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise GeometryError(f"ellipse {name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.a <= 0 or self.b <= 0:
            raise GeometryError(f"ellipse semiaxes must be positive, got a={self.a}, b={self.b}")

    @classmethod
    def from_circle(cls, c: Circle) -> "AxisEllipse":
        if abs(c.center.imag) > DEFAULT_TOL.direct * max(1.0, c.radius):
            raise GeometryError("circle center must lie on the x-axis")
        return cls(c.center.real, c.radius, c.radius)

    @property
    def center(self) -> complex:
        return complex(self.cx, 0.0)

    @property
    def focal_distance(self) -> float:
        return math.sqrt(abs(self.a ** 2 - self.b ** 2))

    @property
    def foci(self) -> Tuple[complex, complex]:
        """Foci along the major axis; the lower-x (resp. lower-y) one first."""
        c = self.focal_distance
        if self.a >= self.b:
            return complex(self.cx - c, 0.0), complex(self.cx + c, 0.0)
        return complex(self.cx, -c), complex(self.cx, c)

    @property
    def eccentricity(self) -> float:
        return self.focal_distance / max(self.a, self.b)

    def point_at(self, theta: float) -> complex:
        return complex(self.cx + self.a * math.cos(theta), self.b * math.sin(theta))


@dataclass(frozen=True)
class Line:
    """Line through `point` with nonzero `direction` (stored normalized)."""

    point: complex
    direction: complex

    def __post_init__(self):
        object.__setattr__(self, "point", as_point(self.point))
        d = as_point(self.direction)
        if abs(d) == 0.0:
            raise GeometryError("line direction must be nonzero")
        object.__setattr__(self, "direction", d / abs(d))

    @classmethod
    def through(cls, p: complex, q: complex) -> "Line":
        if p == q:
            raise GeometryError("line through two coincident points")
        return cls(p, q - p)

    @property
    def normal(self) -> complex:
        return self.direction * 1j

    def normal_form(self) -> Tuple[float, float, float]:
        """(u, v, w) with u^2 + v^2 = 1 and u x + v y = w on the line."""
        n = self.normal
        return n.real, n.imag, dot(n, self.point)

    def signed_distance(self, p: complex) -> float:
        """
        Distance from the line, signed by the normal (direction rotated by +90 degrees).

        Args:
            p: the point

        Returns:
            positive on the left of the direction of travel
        """
        return dot(self.normal, p - self.point)

    def distance(self, p: complex) -> float:
        return abs(self.signed_distance(p))

    def foot(self, p: complex) -> complex:
        """Foot of the perpendicular from p."""
        return self.point + dot(self.direction, p - self.point) * self.direction

    def intersect(self, other: "Line") -> complex:
        """
        Intersection point with another line.

        Raises:
            GeometryError: if the lines are parallel
        """
        denom = cross(self.direction, other.direction)
        if abs(denom) < 1e-15:
            raise GeometryError("parallel lines do not intersect")
        s = cross(other.point - self.point, other.direction) / denom
        return self.point + s * self.direction

    def rotated(self, angle: float, about: complex) -> "Line":
        """Line through `about` whose direction is this one turned by `angle` radians."""
        return Line(about, self.direction * complex(math.cos(angle), math.sin(angle)))


@dataclass(frozen=True)
class Polygon:
    vertices: Tuple[complex, ...]

    def __post_init__(self):
        vs = tuple(as_point(v) for v in self.vertices)
        if len(vs) < 3:
            raise GeometryError(f"polygon needs at least 3 vertices, got {len(vs)}")
        scale = scale_of(vs)
        arr = np.array(vs)
        gaps = np.abs(arr[:, None] - arr[None, :]) + np.eye(len(vs)) * scale
        if gaps.min() <= DEFAULT_TOL.direct * scale:
            raise GeometryError("polygon vertices must be pairwise distinct")
        object.__setattr__(self, "vertices", vs)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.vertices, dtype=complex)

    @property
    def scale(self) -> float:
        return scale_of(self.vertices)

    def sidelines(self) -> List[Line]:
        vs = self.vertices
        return [Line.through(vs[i], vs[(i + 1) % self.n]) for i in range(self.n)]

    def rotated_index(self, shift: int) -> "Polygon":
        k = shift % self.n
        return Polygon(self.vertices[k:] + self.vertices[:k])


@dataclass(frozen=True)
class CirclePencil:
    """
    Non-intersecting coaxial pencil given by its limiting points.

    Members are the circles with centers c on the axis through l1, l2 and
    r^2 = (c - l1)(c - l2) measured along the axis.
    """

    l1: complex
    l2: complex

    def __post_init__(self):
        object.__setattr__(self, "l1", as_point(self.l1))
        object.__setattr__(self, "l2", as_point(self.l2))
        if abs(self.l1 - self.l2) == 0.0:
            raise GeometryError("pencil limiting points must differ")

    @property
    def midpoint(self) -> complex:
        return (self.l1 + self.l2) / 2

    @property
    def axis(self) -> Line:
        return Line.through(self.l1, self.l2)

    @property
    def radical_axis(self) -> Line:
        return Line(self.midpoint, (self.l2 - self.l1) * 1j)

    def member_at(self, center: complex) -> Circle:
        """Member circle centered at `center` (a point of the axis)."""
        center = as_point(center)
        span = abs(self.l2 - self.l1)
        if self.axis.distance(center) > DEFAULT_TOL.derived * max(1.0, span):
            raise GeometryError("member center must lie on the pencil axis")
        r2 = dot(center - self.l1, center - self.l2)
        if r2 <= 0:
            raise GeometryError("no real member centered between the limiting points")
        return Circle(center, math.sqrt(r2))

    def member_through(self, p: complex) -> Optional[Circle]:
        """Member passing through p; None when p is on the radical axis."""
        u = self.axis.direction
        m = self.midpoint
        h = abs(self.l2 - self.l1) / 2
        denom = 2 * dot(p - m, u)
        if abs(denom) < 1e-15 * max(1.0, abs(p - m)):
            return None
        s = (abs(p - m) ** 2 + h * h) / denom
        return self.member_at(m + s * u)

    def contains(self, c: Circle, tol: float = DEFAULT_TOL.derived) -> bool:
        """Whether c belongs to the pencil: l1 and l2 inverse with respect to c."""
        scale = max(c.radius, abs(self.l2 - self.l1))
        if self.axis.distance(c.center) > tol * scale:
            return False
        return abs(dot(self.l1 - c.center, self.l2 - c.center) - c.radius ** 2) <= tol * scale ** 2


# --- Polygon measurements ---

def regular_polygon(n: int, radius: float = 1.0, center: complex = 0j, phase: float = 0.0) -> Polygon:
    """Counterclockwise regular n-gon, vertex k at angle 2 pi k / n + phase."""
    k = np.arange(n)
    vs = center + radius * np.exp(1j * (2 * np.pi * k / n + phase))
    return Polygon(tuple(complex(v) for v in vs))


def polygon_area(P: Polygon, signed: bool = False) -> float:
    """Shoelace area, positive for counterclockwise vertex order."""
    vs = P.vertices
    n = len(vs)
    area = 0.5 * math.fsum(cross(vs[i], vs[(i + 1) % n]) for i in range(n))
    return area if signed else abs(area)


def sidelengths(P: Polygon) -> np.ndarray:
    """s_k = |P_{k+1} - P_k|, k = 0..N-1."""
    v = P.array
    return np.abs(np.roll(v, -1) - v)


def perimeter(P: Polygon) -> float:
    return math.fsum(sidelengths(P))


def internal_angles(P: Polygon) -> np.ndarray:
    """
    Interior angle at every vertex, in (0, 2 pi).

    Uses atan2 of cross and dot products of the two edge vectors, signed by
    the polygon orientation so clockwise polygons measure the same interior.
    """
    v = P.array
    orientation = 1.0 if polygon_area(P, signed=True) >= 0 else -1.0
    to_prev = np.roll(v, 1) - v
    to_next = np.roll(v, -1) - v
    crs = to_next.real * to_prev.imag - to_next.imag * to_prev.real
    dt = to_next.real * to_prev.real + to_next.imag * to_prev.imag
    return np.mod(np.arctan2(orientation * crs, dt), 2 * np.pi)


def point_on_ellipse_residual(p: complex, e: AxisEllipse) -> float:
    return abs(((p.real - e.cx) / e.a) ** 2 + (p.imag / e.b) ** 2 - 1.0)


def line_tangency_residual(l: Line, e: AxisEllipse) -> float:
    """
    Zero iff l is tangent to e.

    For u x + v y = w with unit normal, tangency means
    a^2 u^2 + b^2 v^2 = (w - u cx)^2; the gap is divided by the left side,
    the squared support distance of e in that direction.
    """
    u, v, w = l.normal_form()
    support2 = e.a ** 2 * u ** 2 + e.b ** 2 * v ** 2
    return abs(support2 - (w - u * e.cx) ** 2) / support2


# --- Inversion and polarity ---

def invert_point(p: complex, c: Circle) -> complex:
    p = as_point(p)
    offset = p - c.center
    if abs(offset) <= DEFAULT_TOL.direct * c.radius:
        raise GeometryError("inversion center: point coincides with the center and maps to infinity")
    return c.center + c.radius ** 2 / offset.conjugate()


def invert_polygon(P: Polygon, c: Circle) -> Polygon:
    return Polygon(tuple(invert_point(v, c) for v in P.vertices))


def polar_line(p: complex, c: Circle) -> Line:
    """Polar of p: perpendicular to p - center through the inverse of p."""
    p = as_point(p)
    if abs(p - c.center) <= DEFAULT_TOL.direct * c.radius:
        raise GeometryError("inversion center: the polar of the center is the line at infinity")
    return Line(invert_point(p, c), (p - c.center) * 1j)


def pole(l: Line, c: Circle) -> complex:
    foot = l.foot(c.center)
    if abs(foot - c.center) <= DEFAULT_TOL.derived * c.radius:
        raise GeometryError("degenerate dual: line passes through the polar circle center")
    return invert_point(foot, c)


def polar_dual_polygon(P: Polygon, c: Circle) -> Polygon:
    """Vertex i of the dual is the pole of sideline (P_i, P_{i+1})."""
    return Polygon(tuple(pole(side, c) for side in P.sidelines()))


def dual_ellipse_about(e: AxisEllipse, x_p: float) -> AxisEllipse:
    """
    Polar reciprocal of e with respect to the unit circle centered at (x_p, 0).

    The point must be inside e; the dual is then again an axis-aligned
    ellipse centered on the x-axis.
    """
    g = e.cx - x_p
    gap = e.a ** 2 - g ** 2
    if gap <= 0:
        raise GeometryError("degenerate dual: polar center is not inside the ellipse")
    return AxisEllipse(x_p - g / gap, e.a / gap, e.a / (e.b * math.sqrt(gap)))


# --- Circles ---

def circle_through(p1: complex, p2: complex, p3: complex) -> Circle:
    p1, p2, p3 = as_point(p1), as_point(p2), as_point(p3)
    b = p2 - p1
    c = p3 - p1
    scale = scale_of([p1, p2, p3])
    d = 2.0 * cross(b, c)
    if abs(d) <= 2.0 * DEFAULT_TOL.direct * scale ** 2:
        raise GeometryError("collinear points have no circumscribed circle")
    bb = abs(b) ** 2
    cc = abs(c) ** 2
    u = complex((c.imag * bb - b.imag * cc) / d, (b.real * cc - c.real * bb) / d)
    return Circle(p1 + u, abs(u))


def second_intersection(l: Line, c: Circle, known: complex, tol: float = DEFAULT_TOL.derived) -> complex:
    """Other intersection of l with c, given one intersection `known`."""
    known = as_point(known)
    if c.residual(known) > tol or l.distance(known) > tol * max(c.radius, 1.0):
        raise GeometryError("inconsistent input: known point is not on both the line and the circle")
    u = l.direction
    s = -2.0 * dot(u, known - c.center)
    return known + s * u


def radical_axis(c1: Circle, c2: Circle) -> Line:
    offset = c2.center - c1.center
    dist = abs(offset)
    if dist == 0.0:
        raise GeometryError("concentric circles have no radical axis")
    u = offset / dist
    s = (dist ** 2 + c1.radius ** 2 - c2.radius ** 2) / (2 * dist)
    return Line(c1.center + s * u, u * 1j)


def pencil_from_circles(c1: Circle, c2: Circle) -> CirclePencil:
    """
    Pencil spanned by two non-intersecting circles.

    l1 is the limiting point inside c1, l2 the one outside.
    """
    offset = c2.center - c1.center
    dist = abs(offset)
    if dist <= DEFAULT_TOL.direct * max(c1.radius, c2.radius):
        raise GeometryError("concentric circles: the pencil has no axis")
    u = offset / dist
    s = (dist ** 2 + c1.radius ** 2 - c2.radius ** 2) / (2 * dist)
    h2 = s * s - c1.radius ** 2
    if h2 <= 0:
        raise GeometryError("elliptic pencil: the circles intersect and the limiting points are imaginary")
    h = math.sqrt(h2)
    first = c1.center + (s - h) * u
    second = c1.center + (s + h) * u
    if c1.power(first) > c1.power(second):
        first, second = second, first
    logger.debug(f"pencil limiting points {first} and {second}")
    return CirclePencil(first, second)


# --- Conic fitting ---

def fit_axis_ellipse(points: Sequence[complex]) -> AxisEllipse:
    """
    Exact conic through five points, read back as an axis-aligned ellipse.

    The conic A x^2 + B xy + C y^2 + D x + E y + F = 0 is the null vector of
    the 5x6 design matrix, normalized to unit length.

    Args:
        points: exactly five points on the ellipse

    Returns:
        the ellipse, centered on the x-axis with axes along x and y

    Raises:
        GeometryError: if the conic is not an ellipse, is imaginary, or has
            nonzero B or E beyond AXIS_FIT_TOL (rotated or off the x-axis)
    """
    pts = np.array([as_point(p) for p in points], dtype=complex)
    if len(pts) != 5:
        raise GeometryError(f"a conic needs exactly 5 points, got {len(pts)}")
    x, y = pts.real, pts.imag
    design = np.column_stack((x * x, x * y, y * y, x, y, np.ones(5)))
    _, _, vt = np.linalg.svd(design)
    A, B, C, D, E, F = vt[-1]
    if abs(B) > AXIS_FIT_TOL or abs(E) > AXIS_FIT_TOL:
        raise GeometryError(f"fitted conic is not axis-aligned on the x-axis: B={B:.3e}, E={E:.3e}")
    if A * C <= 0:
        raise GeometryError("fitted conic is not an ellipse")
    cx = -D / (2 * A)
    cy = -E / (2 * C)
    G = A * cx ** 2 + C * cy ** 2 - F
    if G / A <= 0 or G / C <= 0:
        raise GeometryError("fitted conic is imaginary")
    return AxisEllipse(cx, math.sqrt(G / A), math.sqrt(G / C))


def central_angle_spread(P: Polygon) -> float:
    """
    Max deviation of the central angles of P from 2 pi / N.

    P must be inscribed in a circle; zero for a regular polygon.
    """
    circle = circle_through(*P.vertices[:3])
    v = P.array - circle.center
    steps = np.angle(np.roll(v, -1) / v)
    target = 2 * np.pi / P.n
    return float(np.max(np.abs(np.abs(steps) - target)))
