"""Command-line interface.

Subcommands: verify (structure and identity suite), heat (coefficients of
the form Laplacians), constants (universal a4 constants table),
independence (rank of the p=1/p=2 coefficient matrix), spectrum-fit
(analytic sphere spectrum vs geometric coefficients) and classify
(invariant-vector transfer of eta-Einstein / space-form structure).

Exit codes: 0 pass, 1 verification failure, 2 usage error.  Errors go to
stderr as one JSON object.  The SASAKI_SEED environment variable
overrides the default RNG seed; an explicit --seed flag overrides both.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .contact_sasaki import (
    eta_einstein_decompose,
    phi_contraction_chain,
    verify_contact_metric,
    verify_sasakian,
    verify_structure_identities,
)
from .errors import GeometryError
from .heat_invariants import (
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    heat_coefficients,
    heat_trace_fit,
    independence_check,
    universal_constants,
)
from .reporting import CONVENTIONS, dumps, dumps_csv
from .space_forms import (
    build_heisenberg,
    build_standard_sphere,
    d_homothetic_deform,
    phi_sectional,
    space_form_deviation_norm_sq,
)
from .spectral_classifier import (
    classify_eta_einstein,
    classify_space_form,
    invariant_vector,
)
from .tensor_calculus import curvature_at

SPACE_NAMES = ("sphere", "deformed_sphere", "heisenberg")


def _default_seed():
    env = os.environ.get("SASAKI_SEED")
    if env is not None:
        return int(env)
    return DEFAULT_SEED


def build_space(name, n, a=1.0):
    if name == "sphere":
        space = build_standard_sphere(n)
    elif name == "deformed_sphere":
        space = build_standard_sphere(n)
    elif name == "heisenberg":
        space = build_heisenberg(n)
    else:
        raise ValueError("unknown space %r; expected one of %s" % (name, SPACE_NAMES))
    if a != 1.0 or name == "deformed_sphere":
        space = d_homothetic_deform(space, a)
    return space


def load_manifest(path):
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    name = data.get("space")
    if name not in SPACE_NAMES:
        raise ValueError("manifest %r: unknown space %r" % (path, name))
    n = int(data.get("n"))
    a = float(data.get("a", 1.0))
    return build_space(name, n, a)


def _emit(args, text):
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report(command, inputs, results, passed):
    return {
        "command": command,
        "inputs": inputs,
        "conventions": CONVENTIONS,
        "results": results,
        "pass": bool(passed),
    }


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_verify(args):
    if args.format == "csv":
        raise ValueError("verify reports have no CSV form")
    space = build_space(args.space, args.n, args.a)
    points = space.sample_points(args.points, seed=args.seed)
    cm = verify_contact_metric(space.structure, points, tol=args.tol)
    sas = verify_sasakian(space.structure, points, tol=args.tol)
    base = space.base_point
    curv = curvature_at(space.structure.metric, base)
    ids = verify_structure_identities(space.structure, curv, base, tol=args.tol)
    chain = phi_contraction_chain(curv, space.structure, base, tol=args.tol)
    ee = eta_einstein_decompose(curv, space.structure, base, tol=args.tol)
    t_norm = space_form_deviation_norm_sq(
        curv, space.structure, base, space.phi_sectional_c, tol=args.tol
    )
    rng = np.random.default_rng(args.seed + 1)
    sections = [
        phi_sectional(curv, space.structure, base, rng.standard_normal(space.m))
        for _ in range(8)
    ]
    spread = max(sections) - min(sections)
    residuals = {
        "contact_metric": dict(cm.identities),
        "sasakian": dict(sas.identities),
        "structure_identities": dict(ids.identities),
        "contraction_chain": {k: v.residual for k, v in chain.links.items()},
        "eta_einstein_deviation": ee.s_norm_sq,
        "space_form_deviation": t_norm,
        "phi_sectional_spread": spread,
    }
    passed = (
        cm.passed
        and sas.passed
        and ids.passed
        and chain.passed
        and ee.is_eta_einstein
        and t_norm < args.tol * max(1.0, curv.norm_riemann_sq)
        and spread < args.tol * max(1.0, abs(space.phi_sectional_c))
    )
    results = {
        "m": space.m,
        "kind": space.kind,
        "phi_sectional_c": space.phi_sectional_c,
        "tau": curv.tau,
        "norm_ricci_sq": curv.norm_ricci_sq,
        "norm_riemann_sq": curv.norm_riemann_sq,
        "alpha": ee.alpha,
        "beta": ee.beta,
        "total_volume": space.total_volume,
        "n_points": len(points),
        "residuals": residuals,
    }
    inputs = {
        "space": args.space,
        "n": args.n,
        "a": args.a,
        "tol": args.tol,
        "points": args.points,
        "seed": args.seed,
    }
    _emit(args, dumps(_report("verify", inputs, results, passed)))
    return 0 if passed else 1


def _cmd_heat(args):
    p_values = [int(p) for p in args.p.split(",") if p != ""]
    space = build_space(args.space, args.n, args.a)
    rows = []
    for p in p_values:
        hc = heat_coefficients(space, p)
        rows.append(
            {"m": hc.m, "p": hc.p, "a0": hc.a0, "a2": hc.a2, "a4": hc.a4}
        )
    if args.format == "csv":
        _emit(args, dumps_csv(rows, ["m", "p", "a0", "a2", "a4"]))
        return 0
    inputs = {"space": args.space, "n": args.n, "a": args.a, "p": p_values}
    results = {"coefficients": rows, "total_volume": space.total_volume}
    _emit(args, dumps(_report("heat", inputs, results, True)))
    return 0


def _cmd_constants(args):
    rows = []
    worst = 0.0
    for p in (0, 1, 2):
        u = universal_constants(args.m, p, samples=args.samples, seed=args.seed)
        worst = max(worst, u.residual)
        rows.append(
            {
                "m": u.m,
                "p": u.p,
                "c1": u.c1,
                "c2": u.c2,
                "c3": u.c3,
                "residual": u.residual,
            }
        )
    passed = worst < 1e-8
    if args.format == "csv":
        _emit(args, dumps_csv(rows, ["m", "p", "c1", "c2", "c3", "residual"]))
        return 0 if passed else 1
    inputs = {"m": args.m, "samples": args.samples, "seed": args.seed}
    _emit(args, dumps(_report("constants", inputs, {"table": rows}, passed)))
    return 0 if passed else 1


def _cmd_independence(args):
    rep = independence_check(args.m, samples=args.samples, seed=args.seed)
    results = {
        "matrix": rep.matrix,
        "singular_values": rep.singular_values,
        "rank": rep.rank,
    }
    inputs = {"m": args.m, "samples": args.samples, "seed": args.seed}
    _emit(args, dumps(_report("independence", inputs, results, rep.passed)))
    return 0 if rep.passed else 1


def _cmd_spectrum_fit(args):
    if args.format == "csv":
        raise ValueError("spectrum-fit reports have no CSV form")
    t_grid = np.geomspace(args.tmin, args.tmax, args.grid)
    fit = heat_trace_fit(args.m, t_grid, args.kmax)
    passed = fit.rel_errors[0] < 1e-3 and fit.rel_errors[1] < 1e-2
    results = {
        "fitted": {"a0": fit.fitted[0], "a2": fit.fitted[1], "a4": fit.fitted[2]},
        "geometric": {
            "a0": fit.geometric[0],
            "a2": fit.geometric[1],
            "a4": fit.geometric[2],
        },
        "rel_errors": {
            "a0": fit.rel_errors[0],
            "a2": fit.rel_errors[1],
            "a4": fit.rel_errors[2],
        },
        "tail_bound": fit.tail_bound,
        "k_max": fit.k_max,
    }
    inputs = {
        "m": args.m,
        "tmin": args.tmin,
        "tmax": args.tmax,
        "kmax": args.kmax,
        "grid": args.grid,
    }
    _emit(args, dumps(_report("spectrum-fit", inputs, results, passed)))
    return 0 if passed else 1


def _cmd_classify(args):
    if args.format == "csv":
        raise ValueError("classify reports have no CSV form")
    left = load_manifest(args.left)
    right = load_manifest(args.right)
    table = {
        p: universal_constants(left.m, p, samples=args.samples, seed=args.seed)
        for p in (1, 2)
    }
    inv1 = invariant_vector(left, table, tol=args.tol)
    table_r = table
    if right.m != left.m:
        table_r = {
            p: universal_constants(right.m, p, samples=args.samples, seed=args.seed)
            for p in (1, 2)
        }
    inv2 = invariant_vector(right, table_r, tol=args.tol)
    if args.mode == "eta-einstein":
        curv = curvature_at(left.structure.metric, left.base_point)
        ee = eta_einstein_decompose(curv, left.structure, left.base_point)
        verdict = classify_eta_einstein(inv1, inv2, ee.alpha, ee.beta, tol=args.tol)
    else:
        c = args.c if args.c is not None else left.phi_sectional_c
        verdict = classify_space_form(inv1, inv2, c, tol=args.tol)
    inputs = {
        "left": args.left,
        "right": args.right,
        "mode": args.mode,
        "c": args.c,
        "tol": args.tol,
        "seed": args.seed,
    }
    results = {
        "kind": verdict.kind,
        "details": verdict.details,
        "invariants_left": _vector_dict(inv1),
        "invariants_right": _vector_dict(inv2),
    }
    _emit(args, dumps(_report("classify", inputs, results, verdict.transferred)))
    return 0 if verdict.transferred else 1


def _vector_dict(inv):
    return {
        "m": inv.m,
        "vol": inv.vol,
        "tau_int": inv.tau_int,
        "tau2_int": inv.tau2_int,
        "rho2_int": inv.rho2_int,
        "riem2_int": inv.riem2_int,
    }


# ---------------------------------------------------------------------------
# parser


def _add_common(sub):
    sub.add_argument("--out", help="write the report to this file")
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_argument("--seed", type=int, default=None)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sasakigeom",
        description="verification toolkit for Sasakian spectral geometry",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("verify", help="structure and identity suite")
    p.add_argument("--space", choices=SPACE_NAMES, required=True)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--points", type=int, default=10)
    _add_common(p)
    p.set_defaults(handler=_cmd_verify)

    p = subs.add_parser("heat", help="heat coefficients of the form Laplacians")
    p.add_argument("--space", choices=SPACE_NAMES, required=True)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--p", default="0,1,2", help="comma-separated form degrees")
    _add_common(p)
    p.set_defaults(handler=_cmd_heat)

    p = subs.add_parser("constants", help="universal a4 constants table")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    _add_common(p)
    p.set_defaults(handler=_cmd_constants)

    p = subs.add_parser("independence", help="rank of the p=1/p=2 matrix")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    _add_common(p)
    p.set_defaults(handler=_cmd_independence)

    p = subs.add_parser("spectrum-fit", help="sphere heat-trace cross-check")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--tmin", type=float, default=1e-3)
    p.add_argument("--tmax", type=float, default=1e-1)
    p.add_argument("--kmax", type=int, default=400)
    p.add_argument("--grid", type=int, default=64)
    _add_common(p)
    p.set_defaults(handler=_cmd_spectrum_fit)

    p = subs.add_parser("classify", help="invariant-vector transfer")
    p.add_argument("--left", required=True, help="manifest JSON for the left space")
    p.add_argument("--right", required=True, help="manifest JSON for the right space")
    p.add_argument("--mode", choices=("eta-einstein", "space-form"), required=True)
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    _add_common(p)
    p.set_defaults(handler=_cmd_classify)

    return parser


def run_cli(argv):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.seed is None:
        args.seed = _default_seed()
    try:
        return args.handler(args)
    except GeometryError as exc:
        err = {
            "error": {
                "type": type(exc).__name__,
                "message": str(exc),
                "details": exc.details,
            }
        }
        sys.stderr.write(dumps(err))
        return 1
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        err = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        sys.stderr.write(dumps(err))
        return 2


def main():
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
