"""Batch command line for jetforge.

One subcommand per library operation; canonical JSON on stdout, diagnostics
on stderr.  Exit status: 0 success, 1 mathematical falsity (an --expect
mismatch or a failed verification), 2 malformed input, 3 singular-point or
singular-initial data.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import io as jio
from .connection import beta
from .errors import (InputError, JetforgeError, NoRationalFvPoint,
                     SingularInitial, SingularPoint)
from .examples import builtin_examples
from .flags import HodgeData, alpha, check_fv, check_hr1
from .linalg import identity
from .scheme import (is_nondegenerate, jet_membership, jet_prolong,
                     jet_prolong_universal, jet_space_equations,
                     jet_space_equations_universal)
from .verify import verify_connection

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_INPUT = 2
EXIT_SINGULAR = 3


def _load_json_arg(value):
    """Inline JSON, or @path to read a file."""
    if value.startswith("@"):
        try:
            with open(value[1:], "r", encoding="utf-8") as handle:
                return json.load(handle)
        except OSError as exc:
            raise InputError(f"cannot read {value[1:]}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise InputError(f"bad JSON in {value[1:]}: {exc}") from None
    try:
        return json.loads(value)
    except json.JSONDecodeError as exc:
        raise InputError(f"bad inline JSON: {exc}") from None


def _load_json_file(path):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"bad JSON in {path}: {exc}") from None


def _emit(data):
    sys.stdout.write(jio.canonical_dumps(data) + "\n")


def _expected(args, value, key):
    """Apply an --expect flag: exit 1 when the result contradicts it."""
    if args.expect is None:
        return EXIT_OK
    wanted = args.expect == "true"
    if value != wanted:
        print(f"{key}: expected {wanted}, got {value}", file=sys.stderr)
        return EXIT_FALSE
    return EXIT_OK


def _parse_matrix_arg(value, m):
    if value == "identity":
        return identity(m)
    data = _load_json_arg(value)
    matrix = jio.matrix_from_json(data)
    if len(matrix) != m or any(len(row) != m for row in matrix):
        raise InputError(f"matrix must be {m} x {m}")
    return matrix


def _parse_point_arg(value, n):
    if value.startswith("[") or value.startswith("@"):
        point = jio.point_from_json(_load_json_arg(value))
    else:
        point = tuple(jio.fraction_from_str(part)
                      for part in value.split(","))
    if len(point) != n:
        raise InputError(f"point must have {n} coordinates")
    return point


def _cmd_jetspace(args):
    scheme = jio.scheme_from_json(_load_json_file(args.scheme))
    build = jet_space_equations_universal if args.universal \
        else jet_space_equations
    system = build(scheme, args.d, args.r)
    _emit({"d": args.d, "r": args.r, "n": scheme.n,
           **jio.polysystem_to_json(system)})
    return EXIT_OK


def _cmd_prolong(args):
    amap = jio.affine_map_from_json(_load_json_file(args.map))
    build = jet_prolong_universal if args.universal else jet_prolong
    pmap = build(amap, args.d, args.r)
    _emit({"d": args.d, "r": args.r, "n": amap.n, "m": amap.m,
           **jio.polymap_to_json(pmap)})
    return EXIT_OK


def _cmd_membership(args):
    scheme = jio.scheme_from_json(_load_json_file(args.scheme))
    jet = jio.jet_from_json(_load_json_arg(args.jet))
    member = jet_membership(scheme, jet)
    _emit({"member": member})
    return _expected(args, member, "member")


def _cmd_nondeg(args):
    jet = jio.jet_from_json(_load_json_arg(args.jet))
    result = is_nondegenerate(jet)
    _emit({"nondegenerate": result})
    return _expected(args, result, "nondegenerate")


def _cmd_beta(args):
    chart = jio.chart_from_json(_load_json_file(args.connection))
    jet = jio.jet_from_json(_load_json_arg(args.jet))
    if args.r is not None:
        jet = jet.restrict(args.r)
    initial = _parse_matrix_arg(args.init, chart.m)
    frame = beta(chart, jet, initial)
    _emit(jio.matrixjet_to_json(frame))
    return EXIT_OK


def _cmd_alpha(args):
    chart = jio.chart_from_json(_load_json_file(args.connection))
    jet = jio.jet_from_json(_load_json_arg(args.jet))
    if args.r is not None:
        jet = jet.restrict(args.r)
    initial = _parse_matrix_arg(args.init, chart.m)
    flag = alpha(chart, jet, initial)
    _emit(jio.flagjet_to_json(flag))
    return EXIT_OK


def _cmd_fv(args):
    chart = jio.chart_from_json(_load_json_file(args.connection))
    point = _parse_point_arg(args.point, chart.n)
    matrix = _parse_matrix_arg(args.matrix, chart.m)
    result = check_fv(chart, point, matrix)
    _emit({"fv": result})
    return _expected(args, result, "fv")


def _cmd_hr1(args):
    chart = jio.chart_from_json(_load_json_file(args.connection))
    flag = jio.flagjet_from_json(_load_json_arg(args.flag))
    result = check_hr1(HodgeData.of_chart(chart), flag)
    _emit({"hr1": result})
    return _expected(args, result, "hr1")


def _cmd_verify(args):
    chart = jio.chart_from_json(_load_json_file(args.connection))
    report = verify_connection(chart, max_order=args.max_order,
                               seed=args.seed, cases=args.cases)
    _emit(report)
    for suite in report["suites"]:
        status = "ok" if not suite["failed"] else "FAILED"
        print(f"{suite['suite']}: {suite['cases']} cases, "
              f"{suite['failed']} failed [{status}]", file=sys.stderr)
    return EXIT_OK if report["ok"] else EXIT_FALSE


def _cmd_example(args):
    catalog = builtin_examples()
    if args.list or not args.name:
        _emit({"examples": {name: ex.description
                            for name, ex in sorted(catalog.items())}})
        return EXIT_OK
    if args.name not in catalog:
        raise InputError(f"unknown example {args.name!r}; "
                         f"available: {', '.join(sorted(catalog))}")
    example = catalog[args.name]
    points = {f"basepoint{i}": (pt,) if not isinstance(pt, tuple) else pt
              for i, pt in enumerate(example.basepoints)}
    _emit(jio.chart_to_json(example.chart, examples=points))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="jetforge",
        description="exact jet spaces and jets of flat frames and local "
                    "period maps")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_expect(p):
        p.add_argument("--expect", choices=["true", "false"], default=None,
                       help="exit 1 unless the boolean result matches")

    p = sub.add_parser("jetspace", help="defining equations of a jet space")
    p.add_argument("--scheme", required=True, help="scheme JSON file")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-r", type=int, required=True)
    p.add_argument("--universal", action="store_true",
                   help="use the Taylor-expansion route")
    p.set_defaults(func=_cmd_jetspace)

    p = sub.add_parser("prolong", help="induced map on jet coordinates")
    p.add_argument("--map", required=True, help="polynomial map JSON file")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-r", type=int, required=True)
    p.add_argument("--universal", action="store_true")
    p.set_defaults(func=_cmd_prolong)

    p = sub.add_parser("membership", help="does a jet lie on the scheme")
    p.add_argument("--scheme", required=True)
    p.add_argument("--jet", required=True, help="inline JSON or @file")
    add_expect(p)
    p.set_defaults(func=_cmd_membership)

    p = sub.add_parser("nondeg", help="are the induced tangents independent")
    p.add_argument("--jet", required=True)
    add_expect(p)
    p.set_defaults(func=_cmd_nondeg)

    p = sub.add_parser("beta", help="jet of the flat frame along a base jet")
    p.add_argument("--connection", required=True)
    p.add_argument("--jet", required=True)
    p.add_argument("--init", default="identity",
                   help="'identity' or an m x m rational matrix")
    p.add_argument("-r", type=int, default=None,
                   help="restrict the jet to this order first")
    p.set_defaults(func=_cmd_beta)

    p = sub.add_parser("alpha", help="jet of the local period map")
    p.add_argument("--connection", required=True)
    p.add_argument("--jet", required=True)
    p.add_argument("--init", default="identity")
    p.add_argument("-r", type=int, default=None)
    p.set_defaults(func=_cmd_alpha)

    p = sub.add_parser("fv", help="torsor condition at a base point")
    p.add_argument("--connection", required=True)
    p.add_argument("--point", required=True,
                   help="comma separated rationals or JSON list")
    p.add_argument("--matrix", required=True)
    add_expect(p)
    p.set_defaults(func=_cmd_fv)

    p = sub.add_parser("hr1", help="first-relation check on a flag jet")
    p.add_argument("--connection", required=True)
    p.add_argument("--flag", required=True)
    add_expect(p)
    p.set_defaults(func=_cmd_hr1)

    p = sub.add_parser("verify", help="run the verification suites on a chart")
    p.add_argument("--connection", required=True)
    p.add_argument("--max-order", type=int, default=4, dest="max_order")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=12)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("example", help="export a built-in connection")
    p.add_argument("--name", default=None)
    p.add_argument("--list", action="store_true")
    p.set_defaults(func=_cmd_example)

    return parser


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    if hasattr(args, "seed"):
        env_seed = os.environ.get("JETFORGE_SEED")
        if env_seed is not None:
            try:
                args.seed = int(env_seed)
            except ValueError:
                print("JETFORGE_SEED must be an integer", file=sys.stderr)
                return EXIT_INPUT
    try:
        return args.func(args)
    except (SingularPoint, SingularInitial, NoRationalFvPoint) as exc:
        print(f"singular data: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except JetforgeError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
