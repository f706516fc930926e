#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Invariants Module
-----------------
Closed-form values and sweep verification of the quantities conserved by
harmonic Poncelet families.

Measurements are taken in the Casey frame (unit circumcircle), where the
closed forms for sidelengths and Apollonius radii are stated; angle-based
quantities are frame independent.
"""

import logging
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from geometry.geom_core import DEFAULT_TOL, GeometryError, Tolerances, circle_through
from harmonic.harmonic_family import (
    FamilySpec,
    PolygonSnapshot,
    brocard_objects,
    t_grid,
    vertices_casey,
)

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 256
TABLE2_N = tuple(range(3, 9))
TABLE2_K = tuple(range(1, 8))


class Verdict(Enum):
    INVARIANT = "Invariant"
    ZERO = "Zero"
    VARIES = "Varies"
    INCONCLUSIVE = "Inconclusive"

    @property
    def is_conserved(self) -> bool:
        return self in (Verdict.INVARIANT, Verdict.ZERO)


class QuantityKind(Enum):
    SUM_INV_SQ_SIDES = "inv_sides2"
    SUM_INV_SQ_APOLLONIUS = "inv_apollonius2"
    SUM_COT_POW = "cotpow"
    ELEM_SYM = "esp"
    SUM_SIN2THETA_OVER_A = "sin2theta_over_area"
    SUM_SIN2THETA_OVER_SUM_SQ = "sin2theta_over_sides2"
    SUM_SINCOS_OVER_A = "sincos_over_area"
    SUM_SQ_SIDES_OVER_A = "sides2_over_area"
    AREA = "area"
    PERIMETER = "perimeter"


INDEXED_KINDS = (QuantityKind.SUM_COT_POW, QuantityKind.ELEM_SYM)


@dataclass(frozen=True)
class QuantityId:
    """
    A measured quantity, optionally indexed by a power or symmetric order k.

    The text form is the kind value, with ":k" appended for indexed kinds
    (e.g. "cotpow:3", "esp:2", "area").
    """

    kind: QuantityKind
    k: Optional[int] = None

    def __post_init__(self):
        if self.kind in INDEXED_KINDS:
            if self.k is None or self.k < 1:
                raise GeometryError(f"parameter out of range: {self.kind.value} needs an index k >= 1")
        elif self.k is not None:
            raise GeometryError(f"{self.kind.value} takes no index")

    @classmethod
    def parse(cls, text: str) -> "QuantityId":
        match = re.fullmatch(r"\s*([a-z0-9_]+)\s*(?::\s*(\d+))?\s*", text or "")
        if not match:
            raise GeometryError(f"unknown quantity {text!r}")
        try:
            kind = QuantityKind(match.group(1))
        except ValueError:
            known = ", ".join(k.value for k in QuantityKind)
            raise GeometryError(f"unknown quantity {text!r}; known: {known}") from None
        k = int(match.group(2)) if match.group(2) else None
        return cls(kind, k)

    @property
    def label(self) -> str:
        return self.kind.value if self.k is None else f"{self.kind.value}:{self.k}"

    def validate(self, n: int) -> None:
        if self.kind is QuantityKind.ELEM_SYM and self.k > n:
            raise GeometryError(f"parameter out of range: e_{self.k} needs k <= N = {n}")

    def __str__(self) -> str:
        return self.label


class ConjectureVerdict(Enum):
    SUPPORTED = "Supported"
    VIOLATED = "Violated"
    INCONCLUSIVE = "Inconclusive"


def conjecture_verdict(deviation: float, tol: Tolerances = DEFAULT_TOL) -> ConjectureVerdict:
    """Supported below tol.conjecture, Violated above tol.conjecture_violated."""
    if deviation < tol.conjecture:
        return ConjectureVerdict.SUPPORTED
    if deviation > tol.conjecture_violated:
        return ConjectureVerdict.VIOLATED
    return ConjectureVerdict.INCONCLUSIVE


@dataclass(frozen=True)
class InvariantReport:
    quantity: Union[QuantityId, str]
    closed_form: Optional[float]
    ts: Tuple[float, ...]
    samples: Tuple[float, ...]
    mean: float
    max_abs_dev: float
    relative_dev: float
    verdict: Verdict
    closed_form_dev: Optional[float] = None
    closed_form_ok: Optional[bool] = None
    notes: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        """Closed form matched when there is one."""
        return self.closed_form_ok is not False


def sweep_statistics(
    quantity: Union[QuantityId, str],
    ts: Sequence[float],
    samples: Sequence[float],
    closed_form: Optional[float] = None,
    tol: Tolerances = DEFAULT_TOL,
) -> InvariantReport:
    """
    Reduce sampled values to mean, deviations and a verdict.

    Zero when every |sample| < tol.zero; otherwise Invariant below
    tol.invariant relative deviation, Varies above tol.varies, Inconclusive
    in between. A closed form is matched per sample within
    tol.closed_form * max(1, |closed_form|).
    """
    values = [float(v) for v in samples]
    if not values:
        raise GeometryError("empty sweep")
    mean = math.fsum(values) / len(values)
    max_abs_dev = max(abs(v - mean) for v in values)
    relative_dev = max_abs_dev / max(abs(mean), tol.scale_floor)

    if max(abs(v) for v in values) < tol.zero:
        verdict = Verdict.ZERO
    elif relative_dev < tol.invariant:
        verdict = Verdict.INVARIANT
    elif relative_dev > tol.varies:
        verdict = Verdict.VARIES
    else:
        verdict = Verdict.INCONCLUSIVE

    cf_dev = None
    cf_ok = None
    if closed_form is not None:
        cf_dev = max(abs(v - closed_form) for v in values) / max(1.0, abs(closed_form))
        cf_ok = cf_dev < tol.closed_form
        if not cf_ok:
            logger.warning(f"{quantity}: closed form {closed_form!r} missed by {cf_dev:.3e}")

    return InvariantReport(
        quantity=quantity,
        closed_form=closed_form,
        ts=tuple(float(t) for t in ts),
        samples=tuple(values),
        mean=mean,
        max_abs_dev=max_abs_dev,
        relative_dev=relative_dev,
        verdict=verdict,
        closed_form_dev=cf_dev,
        closed_form_ok=cf_ok,
    )


def conjecture_from_report(report: InvariantReport, tol: Tolerances = DEFAULT_TOL) -> ConjectureVerdict:
    if report.verdict is Verdict.ZERO:
        return ConjectureVerdict.SUPPORTED
    return conjecture_verdict(report.relative_dev, tol)


# --- Snapshots in the Casey frame ---

def casey_snapshot(spec: FamilySpec, t: float) -> PolygonSnapshot:
    return PolygonSnapshot.measure(t, vertices_casey(FamilySpec.casey(spec.n, spec.d), t))


def _casey_limits(spec: FamilySpec) -> Tuple[complex, Optional[complex]]:
    d = spec.d
    return complex(d, 0.0), (complex(1.0 / d, 0.0) if d != 0.0 else None)


# --- Closed forms ---

def sum_inv_sq_sides(spec: FamilySpec) -> float:
    """N (d^2 cos^2 a + (d^4 + 1) / 4) / ((1 - d^2)^2 sin^2 a) for the unit circumcircle."""
    d, a = spec.d, spec.alpha
    num = d * d * math.cos(a) ** 2 + (d ** 4 + 1.0) / 4.0
    return spec.n * num / ((1.0 - d * d) ** 2 * math.sin(a) ** 2)


def sum_inv_sq_apollonius(spec: FamilySpec) -> float:
    """2N / (1/d - d)^2, zero for the regular family."""
    d = spec.d
    if d == 0.0:
        return 0.0
    return 2.0 * spec.n / (1.0 / d - d) ** 2


def rho(spec: FamilySpec) -> float:
    d2 = spec.d ** 2
    return (1.0 + d2) / (d2 - 1.0)


def _cot(x: float) -> float:
    return math.cos(x) / math.sin(x)


def cot_theta_closed(spec: FamilySpec, t: float, k: int) -> float:
    """cot of the internal angle at Casey vertex k (k = 0..N-1)."""
    d, a = spec.d, spec.alpha
    lead = -2.0 * d * math.cos(2.0 * a * k + t) / ((d * d - 1.0) * math.sin(2.0 * a))
    return lead + rho(spec) * _cot(2.0 * a)


def sum_cot_closed(spec: FamilySpec) -> float:
    return spec.n * rho(spec) * _cot(2.0 * spec.alpha)


def sum_cot_sq_closed(spec: FamilySpec) -> float:
    r = rho(spec)
    c4 = math.cos(4.0 * spec.alpha)
    return spec.n * (r * r * (2.0 + c4) - 1.0) / (1.0 - c4)


def elementary_symmetric(values: Iterable[float], order: int) -> np.ndarray:
    """e_0..e_order of the values by the standard one-pass recurrence."""
    e = np.zeros(order + 1)
    e[0] = 1.0
    for i, x in enumerate(values):
        for j in range(min(i + 1, order), 0, -1):
            e[j] += x * e[j - 1]
    return e


def apollonius_radii(P, l1: complex, l2: Optional[complex]) -> List[float]:
    """
    Radius of the circle through each vertex and both limiting points.

    A vertex collinear with l1 and l2, or an l2 at infinity, gives an
    infinite radius.
    """
    polygon = P.polygon if isinstance(P, PolygonSnapshot) else P
    if l2 is None:
        return [math.inf] * polygon.n
    radii = []
    for v in polygon.vertices:
        try:
            radii.append(circle_through(v, l1, l2).radius)
        except GeometryError:
            logger.debug(f"vertex {v} collinear with the limiting points")
            radii.append(math.inf)
    return radii


# --- Per-snapshot measurements ---

def _cots(snap: PolygonSnapshot) -> np.ndarray:
    angles = np.array(snap.angles)
    return np.cos(angles) / np.sin(angles)


def measure(quantity: QuantityId, snap: PolygonSnapshot, limits: Tuple[complex, Optional[complex]]) -> float:
    kind = quantity.kind
    sides = np.array(snap.sidelengths)
    area = snap.area
    if kind is QuantityKind.SUM_INV_SQ_SIDES:
        return math.fsum(1.0 / sides ** 2)
    if kind is QuantityKind.SUM_INV_SQ_APOLLONIUS:
        return math.fsum(0.0 if math.isinf(r) else 1.0 / r ** 2 for r in apollonius_radii(snap, *limits))
    if kind is QuantityKind.SUM_COT_POW:
        return math.fsum(_cots(snap) ** quantity.k)
    if kind is QuantityKind.ELEM_SYM:
        return float(elementary_symmetric(_cots(snap), quantity.k)[quantity.k])
    if kind is QuantityKind.SUM_SIN2THETA_OVER_A:
        return math.fsum(np.sin(2.0 * np.array(snap.angles))) / area
    if kind is QuantityKind.SUM_SIN2THETA_OVER_SUM_SQ:
        return math.fsum(np.sin(2.0 * np.array(snap.angles))) / math.fsum(sides ** 2)
    if kind is QuantityKind.SUM_SINCOS_OVER_A:
        angles = np.array(snap.angles)
        return math.fsum(np.sin(angles) * np.cos(angles)) / area
    if kind is QuantityKind.SUM_SQ_SIDES_OVER_A:
        return math.fsum(sides ** 2) / area
    if kind is QuantityKind.AREA:
        return area
    if kind is QuantityKind.PERIMETER:
        return snap.perimeter
    raise GeometryError(f"unknown quantity {quantity.label}")


def closed_form_for(quantity: QuantityId, spec: FamilySpec) -> Optional[float]:
    kind = quantity.kind
    if kind is QuantityKind.SUM_INV_SQ_SIDES:
        return sum_inv_sq_sides(spec)
    if kind is QuantityKind.SUM_INV_SQ_APOLLONIUS:
        return sum_inv_sq_apollonius(spec)
    if kind is QuantityKind.SUM_COT_POW and quantity.k == 1:
        return sum_cot_closed(spec)
    if kind is QuantityKind.SUM_COT_POW and quantity.k == 2:
        return sum_cot_sq_closed(spec)
    if kind is QuantityKind.ELEM_SYM and quantity.k == 1:
        return sum_cot_closed(spec)
    if kind is QuantityKind.SUM_SQ_SIDES_OVER_A:
        return 4.0 / math.tan(brocard_objects(spec).brocard_angle)
    return None


def evaluate(
    spec: FamilySpec,
    quantity: QuantityId,
    samples: int = DEFAULT_SAMPLES,
    tol: Tolerances = DEFAULT_TOL,
    refine: bool = True,
) -> InvariantReport:
    """
    Sweep one quantity over a Poncelet period and reduce it to a report.

    An Inconclusive verdict triggers one rerun on a grid four times finer.
    """
    quantity.validate(spec.n)
    limits = _casey_limits(spec)
    ts = t_grid(spec.n, samples)
    values = [measure(quantity, casey_snapshot(spec, t), limits) for t in ts]
    report = sweep_statistics(quantity, ts, values, closed_form_for(quantity, spec), tol)
    if report.verdict is Verdict.INCONCLUSIVE and refine:
        logger.warning(f"{quantity.label}: inconclusive at {samples} samples, refining to {4 * samples}")
        return evaluate(spec, quantity, samples * 4, tol, refine=False)
    logger.debug(f"{quantity.label}: {report.verdict.value} (relative deviation {report.relative_dev:.3e})")
    return report


def evaluate_all(
    spec: FamilySpec,
    quantities: Sequence[QuantityId],
    samples: int = DEFAULT_SAMPLES,
    tol: Tolerances = DEFAULT_TOL,
) -> List[InvariantReport]:
    return [evaluate(spec, q, samples, tol) for q in quantities]


# --- Grouped checks ---

def cot_power_sums(
    spec: FamilySpec,
    kmax: Optional[int] = None,
    samples: int = DEFAULT_SAMPLES,
    tol: Tolerances = DEFAULT_TOL,
) -> List[InvariantReport]:
    """Sum of cot^k of the internal angles for k = 1..kmax (default N + 2)."""
    kmax = spec.n + 2 if kmax is None else kmax
    return evaluate_all(spec, [QuantityId(QuantityKind.SUM_COT_POW, k) for k in range(1, kmax + 1)], samples, tol)


def elementary_symmetric_reports(
    spec: FamilySpec,
    samples: int = DEFAULT_SAMPLES,
    tol: Tolerances = DEFAULT_TOL,
) -> List[InvariantReport]:
    """e_1..e_N of the cotangents of the internal angles."""
    return evaluate_all(spec, [QuantityId(QuantityKind.ELEM_SYM, k) for k in range(1, spec.n + 1)], samples, tol)


def ratio_invariants(
    spec: FamilySpec,
    samples: int = DEFAULT_SAMPLES,
    tol: Tolerances = DEFAULT_TOL,
) -> List[InvariantReport]:
    kinds = (
        QuantityKind.SUM_SQ_SIDES_OVER_A,
        QuantityKind.SUM_SIN2THETA_OVER_A,
        QuantityKind.SUM_SIN2THETA_OVER_SUM_SQ,
    )
    return evaluate_all(spec, [QuantityId(k) for k in kinds], samples, tol)


def harmonic_column(
    spec: FamilySpec,
    samples: int = DEFAULT_SAMPLES,
    tol: Tolerances = DEFAULT_TOL,
) -> List[InvariantReport]:
    """The harmonic-family column of conserved quantities, with area and perimeter as controls."""
    quantities = [
        QuantityId(QuantityKind.SUM_SQ_SIDES_OVER_A),
        QuantityId(QuantityKind.SUM_INV_SQ_SIDES),
        QuantityId(QuantityKind.SUM_INV_SQ_APOLLONIUS),
        QuantityId(QuantityKind.SUM_COT_POW, 1),
        QuantityId(QuantityKind.SUM_COT_POW, 2),
        QuantityId(QuantityKind.SUM_SINCOS_OVER_A),
        QuantityId(QuantityKind.PERIMETER),
        QuantityId(QuantityKind.AREA),
    ]
    return evaluate_all(spec, quantities, samples, tol)


def default_quantities(n: int) -> List[QuantityId]:
    """Every quantity the invariants command reports for an N-gon."""
    quantities = [QuantityId(kind) for kind in QuantityKind if kind not in INDEXED_KINDS]
    quantities += [QuantityId(QuantityKind.SUM_COT_POW, k) for k in range(1, n + 3)]
    quantities += [QuantityId(QuantityKind.ELEM_SYM, k) for k in range(1, n + 1)]
    return quantities


def expected_table2_verdict(n: int, k: int) -> Verdict:
    """Sum of cot^k: zero for odd k when N = 4, conserved for k < N, varying otherwise."""
    if n == 4 and k % 2 == 1:
        return Verdict.ZERO
    if k < n:
        return Verdict.INVARIANT
    return Verdict.VARIES


def table2_matrix(
    d: float,
    ns: Sequence[int] = TABLE2_N,
    ks: Sequence[int] = TABLE2_K,
    samples: int = DEFAULT_SAMPLES,
    tol: Tolerances = DEFAULT_TOL,
) -> Dict[Tuple[int, int], Verdict]:
    matrix = {}
    for n in ns:
        spec = FamilySpec.casey(n, d)
        for k in ks:
            matrix[(n, k)] = evaluate(spec, QuantityId(QuantityKind.SUM_COT_POW, k), samples, tol).verdict
    mismatches = [key for key, v in matrix.items() if v is not expected_table2_verdict(*key)]
    if mismatches:
        logger.warning(f"cot power table differs from the expected pattern at {mismatches}")
    return matrix
