#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Harmonic Polygon Laboratory
---------------------------
Command-line front end: constructions, invariant sweeps, conjecture tests,
family transforms and SVG figures.

Exit codes: 0 success, 2 invalid configuration, 3 a check missed its
tolerance.
"""

import argparse
import logging
import sys
from typing import Any, Dict, Optional, Sequence

import numpy as np

from geometry.geom_core import GeometryError, invert_point, polar_line
from harmonic.harmonic_family import (
    Frame,
    FamilySpec,
    brocard_objects,
    closure_residual,
    snapshot,
    symmedian_residual,
    vertices_casey,
)
from harmonic.invariants import (
    ConjectureVerdict,
    QuantityId,
    QuantityKind,
    conjecture_from_report,
    default_quantities,
    evaluate_all,
)
from harmonic.isocurves import isocurve_test
from harmonic.transforms import (
    HomotheticPair,
    area_sum_conjecture,
    dual_incidence_residuals,
    dual_pair_ellipses,
    harmonic_to_homothetic,
    homothetic_to_harmonic,
    lateral_corollaries,
    loop_closure_params,
    pair_dual_residuals,
)
from lab_config import ConfigError, LabConfig, RunConfig, build_run_config
import figures
import reports

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_TOLERANCE = 3
LOOP_TOLERANCE = 1e-8
SPOT_CHECKS = 16


def family_spec(config: RunConfig) -> FamilySpec:
    if config.x0 is not None:
        return FamilySpec(config.n, Frame.INVERSIVE, config.x0)
    return FamilySpec(config.n, Frame.CASEY, config.casey_d)


def _write(config: RunConfig, doc: Dict[str, Any], sweeps: Optional[list] = None) -> None:
    if config.format == "csv":
        if sweeps:
            text = reports.dump_csv(reports.SWEEP_COLUMNS, reports.sweep_rows(sweeps))
        else:
            text = reports.dump_csv(("schema_version", "key", "value"), reports.flatten(doc))
    else:
        text = reports.dump_json(doc)
    reports.emit(text, config.out)


def _spot_checks(spec: FamilySpec, seed: int) -> Dict[str, float]:
    """Seeded random checks of inversion and polarity in the family circumcircle."""
    rng = np.random.default_rng(seed)
    C = brocard_objects(spec).circumcircle
    involution, reciprocity = 0.0, 0.0
    for _ in range(SPOT_CHECKS):
        p, q = (C.center + C.radius * complex(*rng.uniform(-2.0, 2.0, 2)) for _ in range(2))
        involution = max(involution, abs(invert_point(invert_point(p, C), C) - p) / C.radius)
        gap = polar_line(p, C).distance(q) * abs(p - C.center) - polar_line(q, C).distance(p) * abs(q - C.center)
        reciprocity = max(reciprocity, abs(gap) / C.radius ** 2)
    return {"involution": involution, "reciprocity": reciprocity}


# --- Commands ---

def cmd_construct(config: RunConfig) -> int:
    spec = family_spec(config)
    canonical = spec.to_inversive()
    snap = snapshot(canonical, config.t)
    objects = brocard_objects(canonical)
    payload = reports.construct_payload(spec, snap, objects)
    if spec.frame is Frame.CASEY:
        payload["casey_vertices"] = reports.to_jsonable(vertices_casey(spec, config.t))
    payload["checks"] = {
        "symmedian_residual": symmedian_residual(snap, objects.symmedian),
        "closure_residual": closure_residual(canonical, config.t),
        **_spot_checks(canonical, config.seed),
    }
    _write(config, reports.document("construct", payload))
    logger.info(f"Constructed N={spec.n} {spec.frame.value} family at t={config.t}")
    return EXIT_OK


def cmd_invariants(config: RunConfig) -> int:
    spec = family_spec(config)
    if config.quantities:
        quantities = [QuantityId.parse(q) for q in config.quantities]
    else:
        quantities = default_quantities(spec.n)
    results = evaluate_all(spec, quantities, config.samples, config.tol)
    doc = reports.document("invariants", {
        "family": reports.family_dict(spec),
        "reports": [reports.report_dict(r) for r in results],
    }, config.tol)
    _write(config, doc, results)

    failed = [str(r.quantity) for r in results if not r.passed]
    if failed:
        logger.error(f"Closed forms missed tolerance for: {', '.join(failed)}")
        return EXIT_TOLERANCE
    logger.info(f"Checked {len(results)} quantities for N={spec.n}")
    return EXIT_OK


def cmd_conjectures(config: RunConfig) -> int:
    if config.action == "area-sum":
        pair = HomotheticPair.from_semiaxes(config.n, config.a_h, config.b_h)
        verdict, report = area_sum_conjecture(pair, config.samples, config.tol)
        corollaries = lateral_corollaries(pair, config.samples, config.tol)
        sweeps = [report] + corollaries
        payload = {
            "pair": {"n": pair.n, "a_h": config.a_h, "b_h": config.b_h},
            "verdict": verdict.value,
            "report": reports.report_dict(report),
            "corollaries": [reports.report_dict(r) for r in corollaries],
        }
        failed = report.closed_form_ok is False
    elif config.action == "sin2theta":
        spec = family_spec(config)
        sweeps = evaluate_all(spec, [QuantityId(QuantityKind.SUM_SIN2THETA_OVER_A),
                                     QuantityId(QuantityKind.SUM_SIN2THETA_OVER_SUM_SQ)], config.samples, config.tol)
        verdicts = [conjecture_from_report(r, config.tol) for r in sweeps]
        verdict = max(verdicts, key=[ConjectureVerdict.SUPPORTED, ConjectureVerdict.INCONCLUSIVE,
                                     ConjectureVerdict.VIOLATED].index)
        payload = {
            "family": reports.family_dict(spec),
            "verdict": verdict.value,
            "reports": [reports.report_dict(r) for r in sweeps],
        }
        failed = False
    else:
        spec = family_spec(config)
        result = isocurve_test(spec, config.n_circles, config.n_points, config.t, config.tol)
        verdict = result.verdict
        sweeps = None
        payload = {"family": reports.family_dict(spec), "isocurves": reports.to_jsonable(result)}
        failed = False

    _write(config, reports.document(f"conjectures {config.action}", payload, config.tol), sweeps)
    if verdict is ConjectureVerdict.VIOLATED or failed:
        logger.error(f"Conjecture {config.action}: {verdict.value}")
        return EXIT_TOLERANCE
    if verdict is ConjectureVerdict.INCONCLUSIVE:
        logger.warning(f"Conjecture {config.action}: inconclusive")
    else:
        logger.info(f"Conjecture {config.action}: {verdict.value}")
    return EXIT_OK


def cmd_transform(config: RunConfig) -> int:
    tangency = config.tol.tangency
    if config.action == "to-homothetic":
        spec = family_spec(config).to_inversive()
        pair = harmonic_to_homothetic(spec)
        on_outer, tangent = dual_incidence_residuals(spec, min(config.samples, 64))
        inner_dual, outer_dual = dual_pair_ellipses(spec)
        payload = {
            "family": reports.family_dict(spec),
            "inner": pair.inner,
            "outer": pair.outer,
            "symmedian": brocard_objects(spec).symmedian,
            "checks": {
                "vertex_on_outer": on_outer,
                "side_tangent_inner": tangent,
                "inner_by_reciprocation": inner_dual,
                "outer_by_reciprocation": outer_dual,
            },
        }
        failed = max(on_outer, tangent) > tangency
    elif config.action == "to-harmonic":
        pair = HomotheticPair.from_semiaxes(config.n, config.a_h, config.b_h)
        target = homothetic_to_harmonic(pair)
        on_circle, tangent = pair_dual_residuals(pair, min(config.samples, 64))
        norm = pair.normalized().inner
        corollary = abs((target.delta / target.circumcircle.radius) ** 2 - (1.0 - (norm.b / norm.a) ** 2))
        payload = {
            "pair": {"n": pair.n, "a_h": config.a_h, "b_h": config.b_h},
            "circumcircle": target.circumcircle,
            "caustic": target.caustic,
            "symmedian": target.symmedian,
            "brocard_angle": target.brocard_angle(pair.n),
            "checks": {"vertex_on_circle": on_circle, "side_tangent_caustic": tangent, "offset_corollary": corollary},
        }
        failed = max(on_circle, tangent) > tangency or corollary > 1e-12
    else:
        if config.omega is not None:
            omega = config.omega
        else:
            omega = brocard_objects(family_spec(config)).brocard_angle
        loop = loop_closure_params(config.n, omega, config.t)
        payload = {"loop": loop}
        failed = loop.max_deviation > LOOP_TOLERANCE

    _write(config, reports.document(f"transform {config.action}", payload, config.tol))
    if failed:
        logger.error(f"transform {config.action}: a residual exceeded its tolerance")
        return EXIT_TOLERANCE
    logger.info(f"transform {config.action} completed")
    return EXIT_OK


def cmd_plot(config: RunConfig) -> int:
    spec = family_spec(config)
    fig = figures.render_plot(config.kind, spec, config.t, config.resolution, config.n_circles)
    if config.out:
        fig.save(config.out)
    else:
        sys.stdout.write(fig.render())
    return EXIT_OK


COMMANDS = {
    "construct": cmd_construct,
    "invariants": cmd_invariants,
    "conjectures": cmd_conjectures,
    "transform": cmd_transform,
    "plot": cmd_plot,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="Number of polygon vertices (>= 3)")
    common.add_argument("--x0", type=float, help="Inversive-frame parameter, |x0| < 1")
    common.add_argument("--casey-d", dest="casey_d", type=float, help="Casey-frame parameter, |d| < 1")
    common.add_argument("--ah", type=float, help="Inner ellipse x-semiaxis of a homothetic pair")
    common.add_argument("--bh", type=float, help="Inner ellipse y-semiaxis of a homothetic pair")
    common.add_argument("--omega", type=float, help="Brocard angle for the loop transform")
    common.add_argument("--t", type=float, help="Family phase")
    common.add_argument("--samples", type=int, help="Phase samples per Poncelet period")
    common.add_argument("--tol", type=float, help="Relative deviation below which a quantity is invariant")
    common.add_argument("--format", choices=("json", "csv"), help="Report format")
    common.add_argument("--out", help="Output file (stdout when omitted)")
    common.add_argument("--seed", type=int, help="Seed for randomized spot-checks")
    common.add_argument("--allow-negative", dest="allow_negative", action="store_true",
                        help="Keep a negative x0 or d instead of mirroring it")
    common.add_argument("--config", help="Path to a JSON configuration file")
    common.add_argument("--verbose", action="store_true", help="Debug logging")

    parser = argparse.ArgumentParser(description="Harmonic polygon laboratory")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("construct", parents=[common], help="Vertices and Brocard objects of one family member")

    invariants = sub.add_parser("invariants", parents=[common], help="Sweep conserved quantities")
    invariants.add_argument("--quantity", action="append", help="Quantity id such as cotpow:3 (repeatable)")

    conjectures = sub.add_parser("conjectures", parents=[common], help="Conjecture tests")
    conjectures.add_argument("action", choices=("area-sum", "sin2theta", "isocurves"))
    conjectures.add_argument("--n-circles", dest="n_circles", type=int, help="Pencil circles for isocurves")
    conjectures.add_argument("--n-points", dest="n_points", type=int, help="Points per pencil circle")

    transform = sub.add_parser("transform", parents=[common], help="Maps between the families")
    transform.add_argument("action", choices=("to-homothetic", "to-harmonic", "loop"))

    plot = sub.add_parser("plot", parents=[common], help="SVG figures")
    plot.add_argument("--kind", choices=figures.PLOT_KINDS, help="Figure to draw")
    plot.add_argument("--resolution", type=int, help="Field lattice size (>= 16)")
    plot.add_argument("--n-circles", dest="n_circles", type=int, help="Pencil circles to draw")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main function for the laboratory."""
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        level=logging.DEBUG if args.verbose else logging.INFO,
    )

    try:
        config = build_run_config(args, LabConfig(args.config))
        return COMMANDS[config.command](config)
    except (ConfigError, GeometryError, ValueError) as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
