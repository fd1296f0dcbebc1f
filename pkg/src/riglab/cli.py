"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 a Groebner
computation exceeded its resource caps.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import cyclo, rigidity, verify
from .detideals import (
    Pattern,
    crosscheck_prop14,
    elimination_ideal_direct,
    elimination_ideal_reduced,
    rigidity_ideal,
)
from .errors import ArgumentError, ResourceExceeded, RiglabError
from .exactla import RationalMatrix
from .groebner import Caps, buchberger
from .polyring import LEX, to_text

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


def _dump(obj, path=None):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _basis_text(ideal, caps):
    return [to_text(g) for g in buchberger(ideal, LEX, caps).basis]


def cmd_ideal(args, caps):
    pattern = Pattern.parse(args.pattern, args.n)
    report = {"n": args.n, "r": args.r, "pattern": pattern.to_json()}
    ideal = rigidity_ideal(args.n, args.r, pattern)
    report["ideal"] = ideal.to_json()
    if args.action == "eliminate":
        direct = elimination_ideal_direct(args.n, args.r, pattern, caps)
        reduced = elimination_ideal_reduced(args.n, args.r, pattern, caps)
        report["elimination"] = {"direct": _basis_text(direct, caps),
                                 "reduced": _basis_text(reduced, caps)}
        report["crosscheck"] = crosscheck_prop14(args.n, args.r, pattern, caps)
    _dump(report, args.out)
    return EXIT_OK


def _load_matrix(args):
    if args.family:
        params = {}
        for item in args.param or ():
            key, sep, value = item.partition("=")
            if not sep:
                raise ArgumentError(f"--param expects key=value, got {item!r}")
            number = Fraction(value)
            params[key.strip()] = int(number) if number.denominator == 1 else number
        try:
            return rigidity.paper_families(args.family, **params)
        except TypeError as exc:
            raise ArgumentError(f"bad parameters for {args.family}: {exc}") from None
    if not args.matrix:
        raise ArgumentError("give --matrix FILE or --family NAME")
    with open(args.matrix) as fh:
        data = json.load(fh)
    if isinstance(data, list):
        data = {"entries": data}
    return RationalMatrix.from_json(data)


def cmd_rigidity(args, caps):
    A = _load_matrix(args)
    t0 = time.perf_counter()
    result = rigidity.rig_exact(A, args.rank, max_n=args.max_n, jobs=args.jobs, caps=caps,
                                orbit_reduction=args.orbit_reduction)
    report = {"matrix": A.to_json(), "rank": args.rank, "result": result.to_json()}
    if args.timing:
        report["seconds"] = round(time.perf_counter() - t0, 3)
    _dump(report, args.out)
    return EXIT_OK


def cmd_bounds(args, caps):
    _dump(cyclo.bound_report(args.n, args.r).to_json(), args.out)
    return EXIT_OK


def cmd_verify(args, caps):
    results = verify.run_checks(args.only, seed=args.seed)
    for res in results:
        print(res.line())
    passed = all(r.ok for r in results)
    print(f"{sum(r.ok for r in results)}/{len(results)} checks passed")
    if args.json:
        _dump({"passed": passed, "seed": args.seed,
               "checks": [r.to_json(timing=args.timing) for r in results]}, args.json)
    return EXIT_OK if passed else EXIT_FAIL


def build_parser():
    parser = argparse.ArgumentParser(prog="riglab", description="Exact matrix rigidity toolkit")
    parser.add_argument("--seed", type=int, default=0, help="master random seed (default 0)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ideal", help="rigidity ideal and its elimination ideal")
    p.add_argument("action", nargs="?", choices=("gen", "eliminate"), default="eliminate")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--pattern", default="", help='"i,j;i,j", "diag" or "" (0-based)')
    p.add_argument("--out")
    p.set_defaults(func=cmd_ideal)

    p = sub.add_parser("rigidity", help="exact rigidity of a small rational matrix")
    p.add_argument("action", nargs="?", choices=("compute",), default="compute")
    p.add_argument("--matrix", help="JSON matrix file")
    p.add_argument("--family", choices=sorted(rigidity.FAMILIES), help="built-in example matrix")
    p.add_argument("--param", action="append", help="family parameter key=value; repeatable")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--max-n", type=int, default=4)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--orbit-reduction", action="store_true")
    p.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    p.add_argument("--out")
    p.set_defaults(func=cmd_rigidity)

    p = sub.add_parser("bounds", help="degree bounds and prime thresholds")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify-paper", help="rerun every worked computation")
    p.add_argument("--only", action="append", help="check name or tag; repeatable")
    p.add_argument("--json", help="write a machine-readable report here")
    p.add_argument("--timing", action="store_true", help="include runtimes in the JSON report")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be at least 1")
    try:
        caps = Caps.from_env()
        return args.func(args, caps)
    except ResourceExceeded as exc:
        print(f"riglab: {exc}", file=sys.stderr)
        print(json.dumps(exc.diagnostics, sort_keys=True, default=str), file=sys.stderr)
        return EXIT_RESOURCE
    except (RiglabError, ValueError, OSError) as exc:
        print(f"riglab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
