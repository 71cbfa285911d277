"""Command-line interface: ``nodoid-shell build|theorem|corollary|sweep``.

Exit codes: 0 success, 1 certification failed, 2 invalid input, 3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import __version__
from .certify import (
    asymptotics_sweep,
    certify_corollary,
    certify_theorem,
)
from .curvature import curvature_csv, inf_H
from .measures import measure
from .mesh import export, is_watertight, tessellate
from .profile import ProfileParams, build_closed_profile, profile_csv
from .quadrature import DomainError, Tolerance

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_IO = 0, 1, 2, 3


class InputError(Exception):
    pass


def format_float(x) -> str:
    """17 significant digits, locale independent; non-finite as JSON strings."""
    x = float(x)
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return f"{x:.17g}"


def dumps(obj, indent=2, _level=0) -> str:
    """Deterministic JSON: sorted keys, fixed float format."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}"{k}": {dumps(obj[k], indent, _level + 1)}' for k in sorted(obj, key=str)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _write(path, data, binary=False):
    try:
        if binary:
            with open(path, "wb") as fh:
                return data(fh)
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(data)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def _tol(args):
    return Tolerance(args.tol, args.tol)


def _positive(name, value):
    if not (math.isfinite(value) and value > 0):
        raise InputError(f"--{name} must be a positive number, got {value}")


def _report(command, argv, tol, **body):
    return {"tool": "nodoid-shell", "version": __version__, "command": command,
            "argv": list(argv), "tolerances": tol.as_dict(), **body}


def cmd_build(args, argv):
    _positive("h", args.h)
    _positive("beta", args.beta)
    _positive("tol", args.tol)
    if args.n_profile < 8 or args.n_angular < 8:
        raise InputError("--n-profile and --n-angular must be >= 8")
    tol = _tol(args)
    params = ProfileParams(args.h, args.beta, tol)
    profile = build_closed_profile(params)
    m = measure(params)
    junctions = [{"arc_a": j.arc_a.value, "arc_b": j.arc_b.value, "axis": j.axis,
                  "position_gap": j.position_gap, "tangent_angle_gap": j.tangent_angle_gap}
                 for j in profile.junctions]
    report = _report("build", argv, tol,
                     params={"h": params.h, "beta": params.beta, "R": params.R,
                             "in_proof_regime": params.in_proof_regime},
                     measures={**m.as_dict(), "inf_H": inf_H(params)},
                     junctions=junctions)
    if args.mesh_out:
        mesh = tessellate(params, args.n_profile, args.n_angular)
        nbytes = _write(args.mesh_out, lambda fh: export(mesh, args.format, fh), binary=True)
        report["mesh"] = {"path": args.mesh_out, "format": args.format, "bytes": nbytes,
                          "vertices": mesh.n_vertices, "triangles": mesh.n_triangles,
                          "watertight": is_watertight(mesh)}
    if args.profile_csv:
        _write(args.profile_csv, profile_csv(profile))
    if args.curvature_csv:
        _write(args.curvature_csv, curvature_csv(profile))
    if args.json:
        _write(args.json, dumps(report) + "\n")
    gap_pos = max(j.position_gap for j in profile.junctions)
    gap_ang = max(j.tangent_angle_gap for j in profile.junctions)
    print(f"h={params.h:g} beta={params.beta:g} R={params.R:.12g}")
    print(f"S={m.area:.12g} V={m.volume:.12g} sup|H|={m.lp_norms['inf']:.12g}")
    print(f"junctions: max position gap {gap_pos:.3e}, max tangent angle gap {gap_ang:.3e}")
    return EXIT_OK


def cmd_theorem(args, argv):
    _positive("epsilon", args.epsilon)
    _positive("tol", args.tol)
    tol = _tol(args)
    cert = certify_theorem(args.epsilon, tol=tol)
    if args.json:
        _write(args.json, dumps(_report("theorem", argv, tol, certificate=cert.as_dict())) + "\n")
    verdict = "PASS" if cert.passed else "FAIL"
    print(f"{verdict} eps={cert.epsilon:g} h={cert.params.h:.12g} beta={cert.params.beta:.6g} "
          f"sup|H|={cert.sup_abs_H:.12g} |S-8pi|={abs(cert.area - 8 * math.pi):.6g} "
          f"V={cert.volume:.6g} after {cert.iterations} iterations")
    return EXIT_OK if cert.passed else EXIT_FAIL


def _parse_p(text):
    try:
        return float(text)  # accepts "inf"
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid exponent {text!r}")


def cmd_corollary(args, argv):
    if math.isnan(args.p) or args.p <= 2:
        raise InputError(
            f"--p must exceed 2 (got {args.p:g}); at p = 2 the Willmore energy is "
            "dilation invariant and minimal on balls")
    tol = _tol(args)
    cert = certify_corollary(args.p, tol=tol)
    if args.json:
        _write(args.json, dumps(_report("corollary", argv, tol, certificate=cert.as_dict())) + "\n")
    verdict = "PASS" if cert.passed else "FAIL"
    print(f"{verdict} p={args.p:g} eps={cert.epsilon} lhs={cert.lhs:.12g} "
          f"ball={cert.rhs:.12g} majorant={cert.majorant:.12g}")
    return EXIT_OK if cert.passed else EXIT_FAIL


def cmd_sweep(args, argv):
    _positive("h", args.h)
    _positive("beta-start", args.beta_start)
    if not 0 < args.beta_ratio < 1:
        raise InputError("--beta-ratio must lie in (0, 1)")
    if args.steps < 1:
        raise InputError("--steps must be >= 1")
    tol = _tol(args)
    betas = [args.beta_start * args.beta_ratio**k for k in range(args.steps)]
    result = asymptotics_sweep(args.h, betas, tol)
    lines = ["beta,R,area,volume,supH,infH"]
    for r in result.rows:
        lines.append(",".join(f"{v:.17g}" for v in
                              (r.beta, r.R, r.area, r.volume, r.sup_abs_H, r.inf_H)))
    orders = " ".join(f"{k}={v:.6g}" for k, v in result.orders.items())
    lines.append(f"# convergence order in beta: {orders}")
    text = "\n".join(lines) + "\n"
    if args.csv:
        _write(args.csv, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="nodoid-shell", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tol", type=float, default=1e-12,
                       help="absolute and relative quadrature tolerance")

    b = sub.add_parser("build", help="build one member of the family and report on it")
    b.add_argument("--h", type=float, required=True)
    b.add_argument("--beta", type=float, required=True)
    common(b)
    b.add_argument("--json")
    b.add_argument("--profile-csv")
    b.add_argument("--curvature-csv")
    b.add_argument("--mesh-out")
    b.add_argument("--format", choices=("obj", "stl"), default="obj")
    b.add_argument("--n-profile", type=int, default=256)
    b.add_argument("--n-angular", type=int, default=128)
    b.set_defaults(func=cmd_build)

    t = sub.add_parser("theorem", help="certify the small-volume bounded-curvature claim")
    t.add_argument("--epsilon", type=float, required=True)
    common(t)
    t.add_argument("--json")
    t.set_defaults(func=cmd_theorem)

    c = sub.add_parser("corollary", help="beat the unit-volume ball in L^p, p > 2")
    c.add_argument("--p", type=_parse_p, required=True)
    common(c)
    c.add_argument("--json")
    c.set_defaults(func=cmd_corollary)

    s = sub.add_parser("sweep", help="measure the family as beta decreases")
    s.add_argument("--h", type=float, default=1.0)
    s.add_argument("--beta-start", type=float, default=0.1)
    s.add_argument("--beta-ratio", type=float, default=0.1)
    s.add_argument("--steps", type=int, default=6)
    common(s)
    s.add_argument("--csv")
    s.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        code = args.func(args, argv)
    except (InputError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"elapsed {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
