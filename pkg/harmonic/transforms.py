#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Transforms Module
-----------------
Maps between the regular, harmonic and homothetic Poncelet families.

The harmonic family dualizes, about its symmedian point, into a family
interscribed between two concentric homothetic ellipses; dualizing a
homothetic family about either focus of its inner ellipse gives back a
harmonic family (the two "lateral" families). All polar circles have unit
radius.
"""

import logging
import math
import statistics
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from geometry.geom_core import (
    DEFAULT_TOL,
    AxisEllipse,
    Circle,
    GeometryError,
    Polygon,
    Tolerances,
    dual_ellipse_about,
    fit_axis_ellipse,
    line_tangency_residual,
    point_on_ellipse_residual,
    polar_dual_polygon,
    polygon_area,
    sidelengths,
)
from harmonic.harmonic_family import (
    REGULAR_SNAP,
    FamilySpec,
    PolygonSnapshot,
    brocard_angle_from_offset,
    brocard_angle_measured,
    brocard_objects,
    regular_phases,
    t_grid,
    vertices_inversive,
    x0_from_brocard_angle,
    x0_roots_from_offset,
)
from harmonic.invariants import (
    DEFAULT_SAMPLES,
    ConjectureVerdict,
    InvariantReport,
    conjecture_from_report,
    sweep_statistics,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HomotheticPair:
    """
    Concentric homothetic ellipses E_H (outer) and E_h (inner) closing N-gons.

    Outer semiaxes are the inner ones divided by cos(pi / N).
    """

    n: int
    inner: AxisEllipse

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 3:
            raise GeometryError(f"parameter out of range: N must be an integer >= 3, got {self.n}")

    @classmethod
    def from_semiaxes(cls, n: int, a_h: float, b_h: float, center: float = 0.0) -> "HomotheticPair":
        return cls(n, AxisEllipse(center, a_h, b_h))

    @property
    def alpha(self) -> float:
        return math.pi / self.n

    @property
    def ratio(self) -> float:
        return 1.0 / math.cos(self.alpha)

    @property
    def outer(self) -> AxisEllipse:
        return AxisEllipse(self.inner.cx, self.inner.a * self.ratio, self.inner.b * self.ratio)

    @property
    def center(self) -> complex:
        return self.inner.center

    @property
    def c_h(self) -> float:
        return self.inner.focal_distance

    def normalized(self) -> "HomotheticPair":
        """Same pair with the major axis along x (axes swapped by a quarter turn)."""
        if self.inner.a >= self.inner.b:
            return self
        logger.info(f"swapping axes of the homothetic pair a_h={self.inner.a} < b_h={self.inner.b}")
        return HomotheticPair(self.n, AxisEllipse(self.inner.cx, self.inner.b, self.inner.a))

    def foci(self) -> Tuple[complex, complex]:
        """(f_h1, f_h2) = (center - c_h, center + c_h) of the normalized inner ellipse."""
        pair = self.normalized()
        return complex(pair.inner.cx - pair.c_h, 0.0), complex(pair.inner.cx + pair.c_h, 0.0)


@dataclass(frozen=True)
class HarmonicFromPair:
    circumcircle: Circle
    caustic: AxisEllipse
    symmedian: complex

    @property
    def delta(self) -> float:
        return abs(self.symmedian - self.circumcircle.center)

    def brocard_angle(self, n: int) -> float:
        return brocard_angle_from_offset(n, self.delta / self.circumcircle.radius)


@dataclass(frozen=True)
class LateralAreas:
    t: float
    first: Polygon
    second: Polygon

    @property
    def a1(self) -> float:
        return polygon_area(self.first)

    @property
    def a2(self) -> float:
        return polygon_area(self.second)

    @property
    def inverse_sum(self) -> float:
        return 1.0 / self.a1 + 1.0 / self.a2


@dataclass(frozen=True)
class LoopClosure:
    """The three ways of closing the regular -> harmonic -> homothetic loop for one (N, w)."""

    n: int
    omega: float
    x0_inversive: float
    x0_brocard: float
    stretch: float
    omega_affine: float
    focus_printed: float
    focus_reciprocal: float
    focus_match: str
    max_deviation: float


# --- Harmonic <-> homothetic ---

def harmonic_to_homothetic(spec: FamilySpec) -> HomotheticPair:
    """Pair whose family is the dual of the harmonic family about K (inversive frame)."""
    x0 = spec.x0
    x2 = x0 * x0
    a_h = (x2 + 1.0) ** 2 / abs(1.0 - x2)
    b_h = x2 + 1.0
    x_h = x0 * (3.0 * x2 * x2 + 3.0 * x2 + 2.0) / (x2 * x2 - 1.0)
    return HomotheticPair.from_semiaxes(spec.n, a_h, b_h, x_h)


def homothetic_to_harmonic(pair: HomotheticPair) -> HarmonicFromPair:
    """
    Circumcircle, caustic and symmedian of the dual about the left focus f_h.

    Expressed relative to the pair's own center; a pair with a_h < b_h is
    normalized first.
    """
    pair = pair.normalized()
    a_h, b_h = pair.inner.a, pair.inner.b
    c_h = pair.c_h
    cos_a = math.cos(pair.alpha)
    k2 = a_h * a_h - c_h * c_h * cos_a * cos_a
    shift = pair.inner.cx

    O1 = -c_h * (1.0 + b_h * b_h) / (b_h * b_h)
    R1 = a_h / (b_h * b_h)
    x1 = -c_h * (a_h * a_h + (1.0 - c_h * c_h) * cos_a * cos_a) / k2
    a1 = a_h * cos_a / k2
    b1 = a_h * cos_a / (b_h * math.sqrt(k2))
    return HarmonicFromPair(
        circumcircle=Circle(complex(O1 + shift, 0.0), R1),
        caustic=AxisEllipse(x1 + shift, a1, b1),
        symmedian=complex(shift - c_h, 0.0),
    )


def homothetic_snapshot(pair: HomotheticPair, t: float) -> PolygonSnapshot:
    """Affine image of the regular N-gon: vertices on E_H, sides tangent to E_h."""
    outer = pair.outer
    nu = regular_phases(pair.n, t)
    xs = outer.cx + outer.a * np.cos(nu)
    ys = outer.b * np.sin(nu)
    return PolygonSnapshot.measure(t, Polygon(tuple(complex(x, y) for x, y in zip(xs, ys))))


def harmonic_dual(spec: FamilySpec, t: float) -> Polygon:
    """Polar dual of the harmonic snapshot about the unit circle at K."""
    K = brocard_objects(spec).symmedian
    return polar_dual_polygon(vertices_inversive(spec, t), Circle(K, 1.0))


def fitted_outer_ellipse(spec: FamilySpec, subsets: int = 5) -> AxisEllipse:
    """
    Ellipse through the vertices of the dual family, by exact 5-point fits.

    Each subset takes the dual vertices at two phases half a step apart,
    picks five spread by angle and fits a conic; parameters are medianed.
    """
    fits = []
    for j in range(subsets):
        t = 2.0 * math.pi * j / (spec.n * subsets)
        points = list(harmonic_dual(spec, t).vertices) + list(harmonic_dual(spec, t + math.pi / spec.n).vertices)
        centroid = sum(points) / len(points)
        points.sort(key=lambda p: math.atan2(p.imag - centroid.imag, p.real - centroid.real))
        picks = [points[(i * len(points)) // 5] for i in range(5)]
        fits.append(fit_axis_ellipse(picks))
    return AxisEllipse(
        statistics.median(f.cx for f in fits),
        statistics.median(f.a for f in fits),
        statistics.median(f.b for f in fits),
    )


# --- Lateral families ---

def lateral_areas(pair: HomotheticPair, t: float) -> LateralAreas:
    """Duals of the homothetic snapshot about the two foci of the inner ellipse."""
    pair = pair.normalized()
    polygon = homothetic_snapshot(pair, t).polygon
    f1, f2 = pair.foci()
    return LateralAreas(
        t=float(t),
        first=polar_dual_polygon(polygon, Circle(f1, 1.0)),
        second=polar_dual_polygon(polygon, Circle(f2, 1.0)),
    )


def lateral_area_closed_form(pair: HomotheticPair) -> Optional[float]:
    """1/A1 + 1/A2 for N = 3 and N = 5 in the outer semiaxes (a, b); None otherwise."""
    outer = pair.normalized().outer
    a, b = outer.a, outer.b
    if pair.n == 3:
        return math.sqrt(3.0) / 18.0 * (b / a) * (a * a + 3.0 * b * b)
    if pair.n == 5:
        a2, b2 = a * a, b * b
        lead = b / (40.0 * math.sin(2.0 * math.pi / 5.0) * a)
        num = (a2 * a2 + 10.0 * a2 * b2 + 5.0 * b2 * b2) * (math.sqrt(5.0) * (a2 + 3.0 * b2) + 5.0 * a2 + 7.0 * b2)
        return lead * num / (5.0 * a2 * a2 + 10.0 * a2 * b2 + b2 * b2)
    return None


def harmonic_mean_of_areas(areas: LateralAreas) -> float:
    return 2.0 / areas.inverse_sum


def lateral_invariant_check(
    pair: HomotheticPair,
    samples: int = DEFAULT_SAMPLES,
    tol: Tolerances = DEFAULT_TOL,
) -> InvariantReport:
    """
    Sweep of 1/A1 + 1/A2 for odd N; for even N the sweep is |A1 - A2| / A1.
    """
    ts = t_grid(pair.n, samples)
    sweep = [lateral_areas(pair, t) for t in ts]
    if pair.n % 2 == 0:
        gaps = [abs(s.a1 - s.a2) / s.a1 for s in sweep]
        return sweep_statistics("lateral_area_gap", ts, gaps, tol=tol)
    report = sweep_statistics(
        "lateral_inv_area_sum",
        ts,
        [s.inverse_sum for s in sweep],
        lateral_area_closed_form(pair),
        tol,
    )
    logger.info(f"1/A1 + 1/A2 for N={pair.n}: {report.verdict.value}, relative deviation {report.relative_dev:.3e}")
    return report


def area_sum_conjecture(
    pair: HomotheticPair,
    samples: int = DEFAULT_SAMPLES,
    tol: Tolerances = DEFAULT_TOL,
) -> Tuple[ConjectureVerdict, InvariantReport]:
    if pair.n % 2 == 0:
        raise GeometryError(f"parameter out of range: the area-sum conjecture concerns odd N, got {pair.n}")
    report = lateral_invariant_check(pair, samples, tol)
    return conjecture_from_report(report, tol), report


def _sin2theta_sum(polygon: Polygon) -> float:
    angles = PolygonSnapshot.measure(0.0, polygon).angles
    return math.fsum(math.sin(2.0 * a) for a in angles)


def lateral_corollaries(
    pair: HomotheticPair,
    samples: int = DEFAULT_SAMPLES,
    tol: Tolerances = DEFAULT_TOL,
) -> List[InvariantReport]:
    """
    Sweeps of 1/sum s1^2 + 1/sum s2^2 and of 1/sum sin 2t1 + 1/sum sin 2t2,
    plus the Brocard angle of the first lateral polygon and its gap to the second.
    """
    ts = t_grid(pair.n, samples)
    inv_sides, inv_sin, omega1, omega_gap, identity_gap = [], [], [], [], []
    for t in ts:
        areas = lateral_areas(pair, t)
        s1 = math.fsum(sidelengths(areas.first) ** 2)
        s2 = math.fsum(sidelengths(areas.second) ** 2)
        w1 = brocard_angle_measured(areas.first)
        w2 = brocard_angle_measured(areas.second)
        inv_sides.append(1.0 / s1 + 1.0 / s2)
        inv_sin.append(1.0 / _sin2theta_sum(areas.first) + 1.0 / _sin2theta_sum(areas.second))
        omega1.append(w1)
        omega_gap.append(abs(w1 - w2))
        identity_gap.append(abs(1.0 / s1 + 1.0 / s2 - math.tan(w1) / 4.0 * areas.inverse_sum))
    return [
        sweep_statistics("lateral_inv_sides2_sum", ts, inv_sides, tol=tol),
        sweep_statistics("lateral_inv_sin2theta_sum", ts, inv_sin, tol=tol),
        sweep_statistics("lateral_brocard_angle", ts, omega1, tol=tol),
        sweep_statistics("lateral_brocard_angle_gap", ts, omega_gap, tol=tol),
        sweep_statistics("lateral_identity_gap", ts, identity_gap, tol=tol),
    ]


def homothetic_invariants(
    pair: HomotheticPair,
    samples: int = DEFAULT_SAMPLES,
    tol: Tolerances = DEFAULT_TOL,
) -> List[InvariantReport]:
    """Area, sum s^2, their ratio, sum cot and sum cot^2 over the homothetic family."""
    ts = t_grid(pair.n, samples)
    snaps = [homothetic_snapshot(pair, t) for t in ts]
    cots = [np.cos(np.array(s.angles)) / np.sin(np.array(s.angles)) for s in snaps]
    sq = [math.fsum(np.array(s.sidelengths) ** 2) for s in snaps]
    reports = [
        sweep_statistics("homothetic_area", ts, [s.area for s in snaps], tol=tol),
        sweep_statistics("homothetic_sides2", ts, sq, tol=tol),
        sweep_statistics("homothetic_sides2_over_area", ts, [q / s.area for q, s in zip(sq, snaps)], tol=tol),
        sweep_statistics("homothetic_cot", ts, [math.fsum(c) for c in cots], tol=tol),
        sweep_statistics("homothetic_cot2", ts, [math.fsum(c ** 2) for c in cots], tol=tol),
    ]
    return reports


# --- Closing the loop ---

def focus_param_candidates(a: float, b: float) -> Tuple[float, float]:
    """The printed sqrt((a + b) / (a - b)) and its reciprocal, for a > b > 0."""
    if not a > b > 0:
        raise GeometryError(f"parameter out of range: need a > b > 0, got a={a}, b={b}")
    printed = math.sqrt((a + b) / (a - b))
    return printed, 1.0 / printed


def x0_via_inversion(n: int, omega: float) -> float:
    """
    x0 = sqrt((1 - tan a tan w) / (1 + tan a tan w)).

    Args:
        n: number of vertices
        omega: Brocard angle with tan a tan w <= 1

    Returns:
        x0 in [0, 1); exactly 0 for the regular family
    """
    product = math.tan(math.pi / n) * math.tan(omega)
    if not 0.0 < omega < math.pi / 2 or product > 1.0 + REGULAR_SNAP:
        raise GeometryError(f"parameter out of range: need tan a tan w <= 1, got {product}")
    if 1.0 - product <= REGULAR_SNAP:
        return 0.0
    return math.sqrt((1.0 - product) / (1.0 + product))


def stretch_via_affine(n: int, omega: float) -> float:
    """k = cot a cot w, the x-stretch of the regular family."""
    if not 0.0 < omega < math.pi / 2:
        raise GeometryError(f"parameter out of range: Brocard angle must lie in (0, pi/2), got {omega}")
    return 1.0 / (math.tan(math.pi / n) * math.tan(omega))


def affine_pair(n: int, omega: float) -> HomotheticPair:
    """The regular family (unit circumradius) stretched by k along x."""
    k = stretch_via_affine(n, omega)
    cos_a = math.cos(math.pi / n)
    return HomotheticPair.from_semiaxes(n, k * cos_a, cos_a)


def loop_closure_params(n: int, omega: float, t: float = 0.3) -> LoopClosure:
    """
    Close the loop three ways and compare.

    The inversive relation must equal the closed form for x0 from w; the
    affine stretch, dualized about its inner focus, must reproduce w; the
    focus relation is tried as printed and inverted and the one equal to
    the inversive x0 is named.
    """
    x0_a = x0_via_inversion(n, omega)
    x0_b = x0_from_brocard_angle(n, omega)
    pair = affine_pair(n, omega)
    k = stretch_via_affine(n, omega)

    if abs(k - 1.0) <= REGULAR_SNAP:
        omega_affine = math.pi / 2 - math.pi / n
        printed, reciprocal = math.inf, 0.0
        match = "regular"
        focus_dev = abs(reciprocal - x0_a)
    else:
        dual = lateral_areas(pair, t).first
        omega_affine = brocard_angle_measured(dual)
        norm = pair.normalized().inner
        printed, reciprocal = focus_param_candidates(norm.a, norm.b)
        deviations = {"printed": abs(printed - x0_a), "reciprocal": abs(reciprocal - x0_a)}
        match = min(deviations, key=deviations.get)
        focus_dev = deviations[match]

    max_dev = max(abs(x0_a - x0_b), abs(omega_affine - omega), focus_dev)
    logger.debug(f"loop closure N={n}, w={omega}: x0={x0_a}, k={k}, focus relation matches {match}")
    return LoopClosure(
        n=n,
        omega=omega,
        x0_inversive=x0_a,
        x0_brocard=x0_b,
        stretch=k,
        omega_affine=omega_affine,
        focus_printed=printed,
        focus_reciprocal=reciprocal,
        focus_match=match,
        max_deviation=max_dev,
    )


def round_trip_offsets(spec: FamilySpec) -> Tuple[float, float]:
    """x0 roots recovered from the harmonic family of the homothetic dual of spec."""
    back = homothetic_to_harmonic(harmonic_to_homothetic(spec))
    return x0_roots_from_offset(back.delta / back.circumcircle.radius)


def dual_pair_ellipses(spec: FamilySpec) -> Tuple[AxisEllipse, AxisEllipse]:
    """E_h and E_H computed as polar reciprocals of circumcircle and inellipse about K."""
    objects = brocard_objects(spec)
    K = objects.symmedian.real
    inner = dual_ellipse_about(AxisEllipse.from_circle(objects.circumcircle), K)
    outer = dual_ellipse_about(objects.inellipse, K)
    return inner, outer


def dual_incidence_residuals(spec: FamilySpec, samples: int = 64) -> Tuple[float, float]:
    """
    Max residuals of the duals about K over a sweep: vertices on E_H and sides tangent to E_h.
    """
    pair = harmonic_to_homothetic(spec)
    outer = pair.outer
    on_outer, tangent = 0.0, 0.0
    for t in t_grid(spec.n, samples):
        dual = harmonic_dual(spec, t)
        on_outer = max(on_outer, max(point_on_ellipse_residual(v, outer) for v in dual.vertices))
        tangent = max(tangent, max(line_tangency_residual(side, pair.inner) for side in dual.sidelines()))
    return on_outer, tangent


def pair_dual_residuals(pair: HomotheticPair, samples: int = 64) -> Tuple[float, float]:
    """
    Max residuals of the duals about f_h over a sweep: vertices on the circumcircle
    and sides tangent to the caustic of homothetic_to_harmonic.
    """
    target = homothetic_to_harmonic(pair)
    on_circle, tangent = 0.0, 0.0
    for t in t_grid(pair.n, samples):
        dual = lateral_areas(pair, t).first
        on_circle = max(on_circle, max(target.circumcircle.residual(v) for v in dual.vertices))
        tangent = max(tangent, max(line_tangency_residual(side, target.caustic) for side in dual.sidelines()))
    return on_circle, tangent
