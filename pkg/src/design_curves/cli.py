"""design-curves: construct, verify and export design curves.

Exit codes: 0 success / pass, 1 verification failure, 2 usage error,
3 file I/O or parse error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import assembly, design_sets, hybrid, projective, weighted
from .errors import DesignCurveError, ParseError, UnknownFamily
from .report import default_tol
from .sphere import is_simple

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _phase(text):
    try:
        return weighted.PhaseFunction.parse(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _weighted_set(name: str):
    if os.path.exists(name):
        return design_sets.load_set(name)
    return design_sets.builtin_set(name)


def _projective_set(name: str):
    if os.path.exists(name):
        return projective.load_projective(name)
    return projective.builtin_projective(name)


def _is_projective(name: str) -> bool:
    if os.path.exists(name):
        with open(name) as fh:
            try:
                return "n" in json.load(fh)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{name}: {exc}") from None
    return name.startswith("cp")


def _tol(args) -> float:
    return default_tol() if args.tol is None else args.tol


# ---------------------------------------------------------------- curve builders

def _curve_weighted(args):
    X = _weighted_set(args.set)
    return weighted.build_wxm(X, profile=args.profile, target_length=args.target_length), X.strength


def _curve_s2(args):
    return weighted.explicit_s2(args.t, args.theta1), 2 * args.t - 1


def _curve_s3(args):
    curve = weighted.explicit_s3(args.t, args.theta1, args.theta2,
                                 strict_formula=args.strict_formula,
                                 target_length=args.target_length)
    return curve, 4 * args.t - 1


def _curve_approx(args):
    Y = _projective_set(args.set)
    return assembly.assemble(Y, args.delta, seed=args.seed).curve, args.t


_BUILDERS = {"weighted": _curve_weighted, "explicit-s2": _curve_s2,
             "explicit-s3": _curve_s3, "approx": _curve_approx}


def _weighted_report(curve, strength, args, extra):
    rep = weighted.verify_weighted_curve(curve, strength, _tol(args))
    out = rep.to_dict(full=args.full)
    out.update(extra)
    return out, rep.passed


# ---------------------------------------------------------------- verbs

def cmd_gen_weighted(args):
    curve, claimed = _curve_weighted(args)
    t = claimed if args.verify is None else args.verify
    return _weighted_report(curve, t, args, {"verb": "gen-weighted", "set": args.set,
                                             "segments": len(curve.segments)})


def cmd_gen_explicit_s2(args):
    curve, claimed = _curve_s2(args)
    t = claimed if args.verify is None else args.verify
    return _weighted_report(curve, t, args, {"verb": "gen-explicit-s2", "t_param": args.t,
                                             "theta1": args.theta1.describe()})


def cmd_gen_explicit_s3(args):
    curve, claimed = _curve_s3(args)
    t = claimed if args.verify is None else args.verify
    bound = 2 * np.pi * np.sqrt(32 * args.t ** 4 - 8 * args.t ** 2 + 1)
    return _weighted_report(curve, t, args, {"verb": "gen-explicit-s3", "t_param": args.t,
                                             "theta1": args.theta1.describe(),
                                             "theta2": args.theta2.describe(),
                                             "strict_formula": args.strict_formula,
                                             "length_bound": bound})


def cmd_gen_approx(args):
    Y = _projective_set(args.set)
    A = assembly.assemble(Y, args.delta, seed=args.seed)
    K = A.constants
    eps, c = assembly.a_priori_eps(len(Y), K.W, K.delta)
    rep = assembly.empirical_defect(A.curve, args.t, c, eps_claimed=eps, tol=_tol(args))
    out = {"t": args.t, "Y_size": len(Y), "W": K.W, "delta": K.delta, "length": A.length,
           "c": c, "eps_apriori": eps, "eps_empirical": rep.max_defect,
           "simple": bool(A.simple), "seed": args.seed, "pass": rep.passed,
           "attempts": A.attempts, "worst_monomial": list(rep.worst)}
    return out, rep.passed and A.simple


def cmd_verify(args):
    if _is_projective(args.set):
        Y = _projective_set(args.set)
        rep = projective.verify_projective_design(Y, args.t, _tol(args))
        kind = "projective"
    else:
        X = _weighted_set(args.set)
        rep = design_sets.verify_weighted_design_set(X, args.t, _tol(args))
        kind = "weighted"
    out = rep.to_dict(full=args.full)
    out.update({"verb": "verify", "set": args.set, "kind": kind})
    return out, rep.passed


def cmd_mst(args):
    Y = _projective_set(args.set)
    T = assembly.build_mst(Y)
    W = 2 * T.total_weight
    N = T.max_degree
    out = {"verb": "mst", "set": args.set, "Y_size": len(Y), "root": T.root,
           "edges": [{"parent": p, "child": c, "weight": w} for p, c, w in T.edges],
           "W": W, "N": N, "M": 2 * np.pi * (len(Y) - 1) / N}
    return out, True


def cmd_hybrid(args):
    if args.file:
        H = hybrid.load_hybrid(args.file)
    elif args.example == "ehler-tetrahedral":
        H = hybrid.ehler_tetrahedral_hybrid()
    elif args.example == "ehler-octahedral":
        H = hybrid.ehler_octahedral_hybrid()
    else:
        if args.t is None:
            raise UsageError("konig needs --t")
        H = hybrid.konig_hybrid(_projective_set(args.set), args.t, tol=_tol(args))
    t = H.strength if args.t is None else args.t
    rep = hybrid.verify_hybrid(H, t, _tol(args))
    out = rep.to_dict(full=args.full)
    out.update({"verb": "hybrid", "example": args.file or args.example, "n_points": len(H.X)})
    return out, rep.passed


def cmd_export_samples(args):
    curve, _ = _BUILDERS[args.curve](args)
    s, pts = curve.sample(args.samples, by_arclength=args.by_arclength)
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["s"] + [f"x{k + 1}" for k in range(pts.shape[1])])
        for si, row in zip(s, pts):
            w.writerow([f"{si:.17g}"] + [f"{x:.17g}" for x in row])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return None, True


def cmd_report(args):
    with open(args.input) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{args.input}: {exc}") from None
    if "pass" not in data:
        raise ParseError(f"{args.input}: not a report (no 'pass' field)")
    return data, bool(data["pass"])


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="pass tolerance (default 1e-9 or $DESIGN_CURVES_TOL)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("--full", action="store_true", help="include per-monomial defects")

    curve_opts = argparse.ArgumentParser(add_help=False)
    curve_opts.add_argument("--t", type=int, default=2)
    curve_opts.add_argument("--set", default="octahedron")
    curve_opts.add_argument("--theta1", type=_phase, default=None)
    curve_opts.add_argument("--theta2", type=_phase, default=weighted.PhaseFunction.const(0.0))
    curve_opts.add_argument("--delta", type=float, default=0.1)
    curve_opts.add_argument("--profile", choices=("beta", "linear"), default="beta")
    curve_opts.add_argument("--target-length", type=float, default=None)
    curve_opts.add_argument("--strict-formula", action="store_true")
    curve_opts.add_argument("--verify", type=int, default=None, help="strength to certify")

    p = argparse.ArgumentParser(prog="design-curves", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="verb", required=True)

    q = sub.add_parser("gen-weighted", parents=[common, curve_opts], help="w_X,M from a design set")
    q.set_defaults(func=cmd_gen_weighted)
    q = sub.add_parser("gen-explicit-s2", parents=[common, curve_opts], help="explicit S^2 curve")
    q.set_defaults(func=cmd_gen_explicit_s2)
    q = sub.add_parser("gen-explicit-s3", parents=[common, curve_opts], help="explicit S^3 curve")
    q.set_defaults(func=cmd_gen_explicit_s3)

    q = sub.add_parser("gen-approx", parents=[common], help="approximate design cycle")
    q.add_argument("--set", default="cp1-octahedron")
    q.add_argument("--t", type=int, required=True)
    q.add_argument("--delta", type=float, default=0.1)
    q.set_defaults(func=cmd_gen_approx)

    q = sub.add_parser("verify", parents=[common], help="verify a design set")
    q.add_argument("--set", required=True)
    q.add_argument("--t", type=int, required=True)
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("mst", parents=[common], help="spanning tree and constants")
    q.add_argument("--set", default="cp1-octahedron")
    q.set_defaults(func=cmd_mst)

    q = sub.add_parser("hybrid", parents=[common], help="verify a hybrid design")
    q.add_argument("--example", choices=("ehler-tetrahedral", "ehler-octahedral", "konig"),
                   default="ehler-tetrahedral")
    q.add_argument("--file", default=None)
    q.add_argument("--set", default="cp1-octahedron")
    q.add_argument("--t", type=int, default=None)
    q.set_defaults(func=cmd_hybrid)

    q = sub.add_parser("export-samples", parents=[common, curve_opts], help="CSV samples of a curve")
    q.add_argument("--curve", choices=sorted(_BUILDERS), default="explicit-s2")
    q.add_argument("--samples", type=int, default=1000)
    q.add_argument("--by-arclength", action="store_true")
    q.set_defaults(func=cmd_export_samples)

    q = sub.add_parser("report", parents=[common], help="re-check a saved JSON report")
    q.add_argument("input")
    q.set_defaults(func=cmd_report)
    return p


def _finish_defaults(args):
    if getattr(args, "theta1", "absent") is None:
        # constant zero is excluded for the S^3 curve
        v = np.pi / 3 if args.verb == "gen-explicit-s3" or getattr(args, "curve", "") == "explicit-s3" else 0.0
        args.theta1 = weighted.PhaseFunction.const(v)
    if getattr(args, "curve", None) == "approx" and args.set == "octahedron":
        args.set = "cp1-octahedron"


def _emit(payload, args):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    _finish_defaults(args)
    try:
        payload, ok = args.func(args)
        if payload is not None:
            _emit(payload, args)
    except (OSError, ParseError) as exc:
        print(f"design-curves: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, UnknownFamily, DesignCurveError, ValueError) as exc:
        print(f"design-curves: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
