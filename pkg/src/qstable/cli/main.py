"""Command-line interface.

Machine-readable JSON goes to stdout and diagnostics to stderr.  Exit codes:
0 success, 1 usage error, 2 unparseable or invalid input, 3 a checked
invariant failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from .. import kernels
from ..contraction import TheoremViolation, contract_at_radius, contract_for_Q, contraction_family, verify_exactly_one
from ..cubecomplex import CubePoint, CubePointError, enumerate_cells, iter_vertices, q_curve, q_sing
from ..curvetype import MERGED, SINGLETONS, CombinatorialType, CurveTypeError, is_cP_stable, is_Q_stable
from ..monoid import ZERO
from ..partitions import PartitionError, SetPartition
from ..qcond import (
    QCondition,
    QConditionError,
    count_conditions,
    enumerate_conditions,
    m_stable,
    symmetric_conditions,
    to_antichain,
)
from ..tropical import CoreKind, CurveError, TropicalCurve, radial_structure
from .parsing import ParseError, load_json_or_text, parse_chain, parse_curve, parse_type, print_chain, print_type

log = logging.getLogger("qstable")

EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_INVARIANT = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(args: argparse.Namespace, payload, text: str) -> None:
    if args.format == "json":
        json.dump(payload, sys.stdout, indent=2 if args.pretty else None)
        sys.stdout.write("\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text() if path != "-" else sys.stdin.read()
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err.strerror}") from None


def _load_condition(path: str) -> QCondition:
    text = _read(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(err.msg, err.lineno, err.colno) from None
    try:
        return QCondition.from_json(data)
    except (KeyError, TypeError) as err:
        raise ParseError(f"missing or malformed field: {err}", kind="semantic") from None


def _load_curve(path: str) -> TropicalCurve:
    return load_json_or_text(_read(path), TropicalCurve.from_json, parse_curve)


def _load_type(path: str) -> CombinatorialType:
    return load_json_or_text(_read(path), CombinatorialType.from_json, parse_type)


def _load_cube_point(path: str) -> CubePoint:
    text = _read(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(err.msg, err.lineno, err.colno) from None
    try:
        return CubePoint.from_json(data)
    except CubePointError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as err:
        raise ParseError(f"missing or malformed field: {err}", kind="semantic") from None


# -- subcommands ---------------------------------------------------------------


def cmd_count_q(args: argparse.Namespace) -> int:
    if args.symmetric:
        conds = symmetric_conditions(args.n)
        m_conds = {m_stable(args.n, m): m for m in range(args.n)}
        rows = []
        lines = [str(len(conds))]
        for q in conds:
            m = m_conds.get(q)
            rows.append({"condition": q.to_json(), "m_stable": m})
            tag = f"  m-stable, m={m}" if m is not None else ""
            lines.append(f"{q}{tag}")
        _emit(args, {"n": args.n, "count": len(conds), "conditions": rows}, "\n".join(lines))
        return 0

    def progress(done: int, total: int, running: int) -> None:
        print(f"[count-q] shard {done}/{total}, running total {running}", file=sys.stderr)

    if args.n > 5 and not args.allow_large:
        raise UsageError("counting beyond n=5 is refused; pass --allow-large to try anyway")
    log.info("counting with the %s kernel", args.backend or kernels.BACKEND)
    total = count_conditions(
        args.n,
        allow_large=args.allow_large,
        workers=args.threads,
        backend=args.backend,
        progress=progress if args.n >= 5 and not args.quiet else None,
    )
    _emit(args, total, str(total))
    return 0


def cmd_enumerate_q(args: argparse.Namespace) -> int:
    if args.n > 4:
        raise UsageError("enumerate-q materializes every condition and is limited to n <= 4")
    conds = enumerate_conditions(args.n)
    conds.sort(key=lambda q: (len(q), [p.sort_key() for p in q.sorted_members()]))
    _emit(
        args,
        [q.to_json() for q in conds],
        "\n".join(f"{q}  antichain: {to_antichain(q)}" for q in conds),
    )
    return 0


def cmd_check_stability(args: argparse.Namespace) -> int:
    t = _load_type(args.type)
    if args.q:
        verdict = is_Q_stable(t, _load_condition(args.q), args.z_markings)
    else:
        verdict = is_cP_stable(t, _load_cube_point(args.cube), args.z_markings)
    text = "stable" if verdict.stable else f"unstable [{verdict.clause}] {verdict.reason}"
    _emit(args, verdict.to_json(), text)
    return 0


def cmd_contract(args: argparse.Namespace) -> int:
    curve = _load_curve(args.curve)
    if args.q:
        t = contract_for_Q(curve, _load_condition(args.q))
    else:
        radii = radial_structure(curve).radii
        if not 0 <= args.radius <= len(radii):
            raise UsageError(f"radius index must lie in 0..{len(radii)}")
        rho = ZERO if args.radius == 0 else radii[args.radius - 1]
        t = contract_at_radius(curve, rho)
    _emit(args, t.to_json(), print_type(t))
    return 0


def _chain_and_core(args: argparse.Namespace) -> tuple[tuple[SetPartition, ...], CoreKind, int]:
    chain = parse_chain(args.chain, args.n)
    if not chain and args.n is None:
        raise UsageError("an empty chain needs --n")
    n = chain[0].n if chain else args.n
    try:
        core = CoreKind.parse(args.core)
    except ValueError as err:
        raise UsageError(str(err)) from None
    return chain, core, n


def cmd_family(args: argparse.Namespace) -> int:
    chain, core, n = _chain_and_core(args)
    family = contraction_family(chain, core, n)
    lines = [f"{i}: {print_type(t)}" for i, t in enumerate(family)]
    _emit(args, [t.to_json() for t in family], "\n".join(lines))
    return 0


def cmd_verify_exactly_one(args: argparse.Namespace) -> int:
    chain, core, n = _chain_and_core(args)
    q = _load_condition(args.q)
    if q.n != n:
        raise UsageError(f"condition is on {q.n} markings, chain on {n}")
    idx = verify_exactly_one(chain, q, core, args.z_markings)
    _emit(args, idx, str(idx))
    return 0


def cmd_cube(args: argparse.Namespace) -> int:
    if args.validate:
        try:
            c = _load_cube_point(args.validate)
        except CubePointError as err:
            payload = {
                "valid": False,
                "clause": err.clause,
                "witness": [p.to_json() for p in err.witness],
                "reason": str(err),
            }
            _emit(args, payload, f"invalid [{err.clause}] {err}")
            return EXIT_INVARIANT
        if c.n != args.n:
            raise UsageError(f"point is on {c.n} markings but --n is {args.n}")
        sing = sorted(q_sing(c), key=SetPartition.sort_key)
        curve = sorted(q_curve(c), key=SetPartition.sort_key)
        payload = {
            "valid": True,
            "point": c.to_json(),
            "q_sing": [p.to_json() for p in sing],
            "q_curve": [p.to_json() for p in curve],
        }
        text = "valid\nQ_sing: " + " ".join(map(str, sing)) + "\nQ_curve: " + " ".join(map(str, curve))
        _emit(args, payload, text)
        return 0
    if args.n > 4:
        raise UsageError("cube reports are limited to n <= 4")
    if args.vertices:
        verts = list(iter_vertices(args.n))
        lines = []
        for v in verts:
            ones = [str(p) for p, x in sorted(v.coords, key=lambda px: px[0].sort_key()) if x == 1]
            lines.append(" ".join(ones) if ones else "(all zero)")
        _emit(args, [v.to_json() for v in verts], "\n".join(lines))
        return 0
    cells = enumerate_cells(args.n)
    _emit(args, [c.to_json() for c in cells], "\n".join(str(c) for c in cells))
    return 0


def cmd_selftest(args: argparse.Namespace) -> int:
    from ..selftest import run_selftest

    report = run_selftest(args.n)
    if args.format == "json":
        for r in report.results:
            print(r.line(), file=sys.stderr)
    payload = {
        "n": report.n,
        "passed": report.passed,
        "checks": [
            {"name": r.name, "passed": r.passed, "cases": r.cases, "seconds": round(r.seconds, 3), "detail": r.detail}
            for r in report.results
        ],
    }
    _emit(args, payload, "\n".join(r.line() for r in report.results))
    return 0 if report.passed else EXIT_INVARIANT


# -- argument parsing ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS,
                        help="output format (default json)")
    common.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS, help="indent JSON output")
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    parser = _Parser(prog="qstable", description="Combinatorics of Q-stable genus-one moduli.")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument("--pretty", action="store_true", default=False)
    parser.add_argument("-v", "--verbose", action="store_true", default=False)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    p = sub.add_parser("count-q", parents=[common], help="count stability conditions")
    p.add_argument("n", type=int)
    p.add_argument("--symmetric", action="store_true", help="only conditions invariant under permuting markings")
    p.add_argument("--threads", type=int, default=None, help="worker processes (default: all cores)")
    p.add_argument("--backend", choices=kernels.available_backends(), default=None)
    p.add_argument("--allow-large", action="store_true")
    p.add_argument("--quiet", action="store_true", help="no progress on stderr")
    p.set_defaults(func=cmd_count_q)

    p = sub.add_parser("enumerate-q", parents=[common], help="list all conditions (n <= 4)")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_enumerate_q)

    p = sub.add_parser("check-stability", parents=[common], help="stability verdict for a combinatorial type")
    p.add_argument("--type", required=True, metavar="FILE")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--q", metavar="FILE")
    g.add_argument("--cube", metavar="FILE")
    p.add_argument("--z-markings", choices=(SINGLETONS, MERGED), default=SINGLETONS)
    p.set_defaults(func=cmd_check_stability)

    p = sub.add_parser("contract", parents=[common], help="contract a tropical curve at a radius")
    p.add_argument("--curve", required=True, metavar="FILE")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--radius", type=int, metavar="I", help="0 for the nodal type, i for the i-th radius")
    g.add_argument("--q", metavar="FILE", help="contract at the radius selected by a condition")
    p.set_defaults(func=cmd_contract)

    for name, func, helptext in [
        ("family", cmd_family, "contractions of a test curve at every radius"),
        ("verify-exactly-one", cmd_verify_exactly_one, "index of the unique stable contraction"),
    ]:
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--chain", required=True, help='e.g. "1234 < 12|34 < 12|3|4"')
        p.add_argument("--core", default="smooth", help="smooth or cycle:j")
        p.add_argument("--n", type=int, default=None, help="number of markings (needed for an empty chain)")
        if name == "verify-exactly-one":
            p.add_argument("--q", required=True, metavar="FILE")
            p.add_argument("--z-markings", choices=(SINGLETONS, MERGED), default=SINGLETONS)
        p.set_defaults(func=func)

    p = sub.add_parser("cube", parents=[common], help="cube complex reports")
    p.add_argument("--n", type=int, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--vertices", action="store_true")
    g.add_argument("--cells", action="store_true")
    g.add_argument("--validate", metavar="FILE")
    p.set_defaults(func=cmd_cube)

    p = sub.add_parser("selftest", parents=[common], help="run the exhaustive invariant sweeps")
    p.add_argument("--n", type=int, default=3, choices=(1, 2, 3, 4))
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except UsageError as err:
        print(f"qstable: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as err:
        print(f"qstable: parse error ({err.kind}): {err}", file=sys.stderr)
        return EXIT_PARSE
    except (QConditionError, PartitionError, CurveError, CurveTypeError, CubePointError) as err:
        print(f"qstable: invalid input: {err}", file=sys.stderr)
        return EXIT_PARSE
    except TheoremViolation as err:
        print(f"qstable: invariant violated: {err}", file=sys.stderr)
        return EXIT_INVARIANT
    except ValueError as err:  # out-of-range numeric arguments
        print(f"qstable: error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
