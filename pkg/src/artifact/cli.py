"""Command line front end.

    artifact solve-center --degree 3 --period 4 --seed "0.21+1.09i"
    artifact cluster-data --spec F.json
    artifact realize --spec F.json --tol 1e-12 --max-iter 500 --output F_map.json
    artifact compare --left F_map.json --right G_map.json

Exit codes: 0 success, 2 obstructed, 3 no convergence, 4 invalid input.
"""

import argparse
import json
import math
import sys
import time

import numpy as np

from .combinatorics import MatingSpec, cluster_data, levy_check, ray_classes
from .errors import ArtifactError, InvalidInput, Obstructed
from .invariants import compare, spectrum
from .pullback import BicriticalCoefficients, realize
from .render import RenderJob, render_dynamical, render_parameter, write_image
from .solver import center_solve, discover_centers, parse_complex

EXIT_OK, EXIT_OBSTRUCTED, EXIT_NOCONV, EXIT_INVALID = 0, 2, 3, 4


def _cpx(z):
    if z is None or not np.isfinite(z):
        return None
    return [float(np.real(z)), float(np.imag(z))]


def _uncpx(v):
    return complex("inf") if v is None else complex(*v)


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise InvalidInput(f"cannot read {path}: {e}") from None
    except json.JSONDecodeError as e:
        raise InvalidInput(f"{path} is not valid JSON: {e}") from None


def _spec_from_args(args) -> MatingSpec:
    if getattr(args, "spec", None):
        return MatingSpec.from_dict(_load_json(args.spec))
    if args.degree is None or not args.white or not args.black:
        raise InvalidInput("give --spec FILE or --degree with --white A B and --black A B")
    return MatingSpec(args.degree, tuple(args.white), tuple(args.black), args.first_critical)


def _tol(args, default):
    return default if args.tol is None else args.tol


# ---------------------------------------------------------------- commands

def cmd_solve_center(args):
    tol = _tol(args, 1e-12)
    if args.seed is None:
        cs = discover_centers(args.degree, args.period)
        return {"centers": [_cpx(c) for c in cs]}, EXIT_OK
    t = time.perf_counter()
    sol = center_solve(args.degree, args.period, parse_complex(args.seed),
                       max_iter=args.max_iter, tol=tol)
    return {"c": _cpx(sol.parameter), "residual": sol.residual,
            "iterations": sol.iterations, "seconds": time.perf_counter() - t}, EXIT_OK


def cmd_cluster_data(args):
    spec = _spec_from_args(args)
    data, star = cluster_data(spec)
    out = data.to_dict()
    tags = "wb" if spec.critical_label == "white" else "bw"
    out["arms"] = [f"{tags[o]}{k}" for o, k in star.arms]
    out["first_critical"] = spec.critical_label
    return out, EXIT_OK


def cmd_levy_check(args):
    if args.config:
        text = args.config
        obj = _load_json(text) if not text.lstrip().startswith("{") else json.loads(text)
        rep = levy_check(obj)
    else:
        rep = levy_check(_spec_from_args(args))
    return {"obstructed": rep.obstructed, "witness": rep.witness}, \
        (EXIT_OBSTRUCTED if rep.obstructed else EXIT_OK)


def _realize_report(spec, tol, max_iter):
    coeffs, trace, config = realize(spec, tol=tol, max_iter=max_iter)
    n = len(config.labels) // 2
    pos = config.positions
    out = coeffs.to_dict()
    out.update({"iterations": trace.iterations, "converged": trace.converged,
                "max_move": trace.maxMove,
                "orbits": {"first": [_cpx(z) for z in pos[:n]],
                           "second": [_cpx(z) for z in pos[n:]]},
                "labels": list(config.labels)})
    return out, coeffs


def cmd_realize(args):
    spec = _spec_from_args(args)
    out, _ = _realize_report(spec, _tol(args, 1e-12), args.max_iter)
    return out, EXIT_OK


def _coeffs_from_file(path, tol=1e-12):
    obj = _load_json(path)
    if "A" in obj:
        return BicriticalCoefficients.from_dict(obj), obj
    out, coeffs = _realize_report(MatingSpec.from_dict(obj), tol, 500)
    return coeffs, out


def cmd_compare(args):
    c1, _ = _coeffs_from_file(args.left)
    c2, _ = _coeffs_from_file(args.right)
    res = compare(c1, c2, _tol(args, 1e-6))
    res["note"] = ("consistent with equivalence" if res["equivalent"]
                   else "not Moebius conjugate")
    return res, EXIT_OK


def _orbit_cycles(coeffs, obj):
    if obj and "orbits" in obj:
        return [[_uncpx(v) for v in obj["orbits"][k]] for k in ("first", "second")]
    # fall back to following the critical orbits forward
    cycles = []
    for z0 in (0j, complex("inf")):
        cyc, z = [z0], coeffs(z0)
        for _ in range(64):
            if (np.isinf(z0) and np.isinf(z)) or abs(z - z0) < 1e-9:
                break
            cyc.append(complex(z))
            z = coeffs(z)
        cycles.append(cyc)
    return cycles


def _size(text):
    try:
        w, _, h = text.lower().partition("x")
        return int(w), int(h or w)
    except ValueError:
        raise InvalidInput(f"bad --size {text!r}; use WxH") from None


def cmd_render_dyn(args):
    size = _size(args.size)
    center = parse_complex(args.center)
    if args.c is not None:
        job = RenderJob(parse_complex(args.c), center, args.width, size, args.max_iter,
                        coloring="escape-time", degree=args.degree or 2)
    else:
        if args.coeffs:
            coeffs, obj = _coeffs_from_file(args.coeffs)
        else:
            obj, coeffs = _realize_report(_spec_from_args(args), 1e-12, 500)
        job = RenderJob(coeffs, center, args.width, size, args.max_iter,
                        cycles=_orbit_cycles(coeffs, obj), degree=coeffs.degree)
    img = render_dynamical(job)
    path = args.output or "render_dyn.ppm"
    write_image(path, img)
    return {"image": path, "size": list(size)}, EXIT_OK


def cmd_render_param(args):
    size = _size(args.size)
    markers = [parse_complex(m) for m in (args.marker or [])]
    job = RenderJob(0j, parse_complex(args.center), args.width, size, args.max_iter,
                    coloring="escape-time", degree=args.degree, markers=markers)
    img = render_parameter(args.degree, job)
    path = args.output or "render_param.ppm"
    write_image(path, img)
    return {"image": path, "size": list(size), "markers": [_cpx(m) for m in markers]}, EXIT_OK


def cmd_pipeline(args):
    report = {}
    stage = "spec"
    try:
        spec = _spec_from_args(args)
        report["spec"] = spec.to_dict()
        stage = "levy_check"
        rep = levy_check(spec)
        report["levy_check"] = {"obstructed": rep.obstructed, "witness": rep.witness}
        if rep.obstructed:
            report["stopped_at"] = stage
            return report, EXIT_OBSTRUCTED
        stage = "cluster_data"
        data, star = cluster_data(spec)
        report["cluster_data"] = data.to_dict()
        stage = "realize_mating"
        out, coeffs = _realize_report(spec, _tol(args, 1e-12), args.max_iter)
        report["realize_mating"] = {k: out[k] for k in ("A", "B", "iterations", "converged")}
        stage = "spectrum"
        sp = spectrum(coeffs)
        report["spectrum"] = sp.to_dict()
        if args.images:
            stage = "render"
            cyc = _orbit_cycles(coeffs, out)
            job = RenderJob(coeffs, 0j, 6.0, (400, 400), 200, cycles=cyc, degree=coeffs.degree)
            path = f"{args.images.rstrip('/')}/dynamical.ppm"
            write_image(path, render_dynamical(job))
            report["images"] = [path]
    except ArtifactError as e:
        report["error"] = {"stage": stage, "type": type(e).__name__, "message": str(e)}
        if isinstance(e, Obstructed):
            report["error"]["witness"] = str(e.witness)
        return report, e.exit_code
    return report, EXIT_OK


# ---------------------------------------------------------------- parser

def _global_flags(p, suppress):
    default = argparse.SUPPRESS if suppress else None
    p.add_argument("--output", default=default, help="write the report or image here")
    p.add_argument("--json", action="store_true",
                   default=argparse.SUPPRESS if suppress else False,
                   help="print compact JSON")
    p.add_argument("--tol", type=float, default=default, help="tolerance override")
    p.add_argument("--seed", default=default, help='complex seed such as "0.21+1.09i"')


def _spec_flags(p):
    p.add_argument("--spec", help="MatingSpec JSON file")
    p.add_argument("--degree", type=int)
    p.add_argument("--white", nargs=2, metavar="ANGLE")
    p.add_argument("--black", nargs=2, metavar="ANGLE")
    p.add_argument("--first-critical", default="white", choices=["white", "black"])


def build_parser():
    ap = argparse.ArgumentParser(prog="artifact", description=__doc__.splitlines()[0])
    _global_flags(ap, suppress=False)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, helptext):
        p = sub.add_parser(name, help=helptext)
        _global_flags(p, suppress=True)
        p.set_defaults(func=func)
        return p

    p = add("solve-center", cmd_solve_center, "Newton solve for a center of z^d + c")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--period", type=int, required=True)
    p.add_argument("--max-iter", type=int, default=200)

    p = add("cluster-data", cmd_cluster_data, "period, rotation number and displacement")
    _spec_flags(p)

    p = add("levy-check", cmd_levy_check, "Levy-cycle decision table")
    _spec_flags(p)
    p.add_argument("--config", help="explicit configuration as JSON text or file")

    p = add("realize", cmd_realize, "Thurston pullback realization")
    _spec_flags(p)
    p.add_argument("--max-iter", type=int, default=500)

    p = add("compare", cmd_compare, "Moebius-conjugacy comparison of two maps")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)

    p = add("render-dyn", cmd_render_dyn, "basin picture of a realized map")
    _spec_flags(p)
    p.add_argument("--coeffs", help="coefficients JSON (output of realize)")
    p.add_argument("--c", help="polynomial parameter for z^d + c instead of a map")
    p.add_argument("--center", default="0")
    p.add_argument("--width", type=float, default=6.0)
    p.add_argument("--size", default="400x400")
    p.add_argument("--max-iter", type=int, default=200)

    p = add("render-param", cmd_render_param, "multibrot parameter picture")
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--center", default="0")
    p.add_argument("--width", type=float, default=4.0)
    p.add_argument("--size", default="400x400")
    p.add_argument("--max-iter", type=int, default=200)
    p.add_argument("--marker", action="append", help="parameter to mark (repeatable)")

    p = add("pipeline", cmd_pipeline, "levy-check, cluster-data, realize and spectrum")
    _spec_flags(p)
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--images", help="directory for optional images")
    return ap


def _text(obj, indent=0):
    lines = []
    for k, v in obj.items():
        if isinstance(v, dict):
            lines.append(" " * indent + f"{k}:")
            lines.append(_text(v, indent + 2))
        elif isinstance(v, list) and len(v) > 8 and all(isinstance(x, float) for x in v):
            lines.append(" " * indent + f"{k}: [{len(v)} values, last {v[-1]:.3g}]")
        else:
            lines.append(" " * indent + f"{k}: {v}")
    return "\n".join(lines)


def _finite(obj):
    # JSON has no inf; report it as a string
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_finite(v) for v in obj]
    return obj


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_INVALID if e.code else EXIT_OK
    try:
        report, code = args.func(args)
    except ArtifactError as e:
        report = {"error": type(e).__name__, "message": str(e)}
        code = e.exit_code
    report = _finite(report)
    writes_image = args.command in ("render-dyn", "render-param")
    if args.output and not writes_image:
        with open(args.output, "w") as fh:
            json.dump(report, fh, indent=2)
    if args.json:
        print(json.dumps(report))
    else:
        print(_text(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
