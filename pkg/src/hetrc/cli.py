"""Command-line interface.

Subcommands map one-to-one onto the library operations so each claim is
independently exercisable in CI: bound, betamin, alphamin, construct,
verify, simulate, oracle. Exit codes: 0 success/pass, 1 verification or
simulation failure, 2 validation or usage error. ``--json`` switches to
machine-readable reports (byte-stable); it never changes exit codes.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import __version__
from .bound import (beta_min_saturating, beta_min_search, check_optimality,
                    fundamental_bound, min_total_storage, oracle_report)
from .construct import Code, GraphSpec, construct_code, derive_dss, validate_graph
from .errors import (ConstructionFailedError, ConstructionImpossibleError,
                     HetrcError, InfeasibleError, UnsupportedParameterError,
                     ValidationError)
from .field import Field
from .jsonio import canonical_dumps, frac_str, read_json, write_json
from .model import validate_dss
from .sim import run_simulation
from .verify import verify_code


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"{text!r} is not a rational (use N or N/D)")


def _default_workers() -> int:
    env = os.environ.get("HETRC_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValidationError(f"HETRC_WORKERS: expected an integer, got {env!r}")
    return os.cpu_count() or 1


def _load_dss(path):
    return validate_dss(read_json(path))


def _emit(args, payload: dict, human_lines: list[str]) -> None:
    if args.json:
        text = canonical_dumps(payload)
        if args.out:
            write_json(args.out, payload)
        sys.stdout.write(text)
    else:
        if args.out:
            write_json(args.out, payload)
        for line in human_lines:
            print(line)


def _cmd_bound(args) -> int:
    spec = _load_dss(args.dss)
    workers = args.workers or _default_workers()
    report = fundamental_bound(spec, args.beta, workers=workers)
    prefix = ", ".join(f"(node {i}, set {l})" for i, l in report.minimizer)
    lines = [
        f"bound = {frac_str(report.value)}",
        f"minimizing prefix: {prefix}",
        f"terms: {' + '.join(frac_str(t) for t in report.terms)}",
        f"prefixes: {report.prefixes_total}",
    ]
    if spec.B is not None:
        lines.append(f"declared B = {spec.B} ({'achieves' if spec.B == report.value else 'differs from'} the bound)")
    _emit(args, {"kind": "bound", **report.to_json()}, lines)
    return 0


def _cmd_oracle(args) -> int:
    spec = _load_dss(args.dss)
    payload = oracle_report(spec, args.beta)
    _emit(args, {"kind": "oracle_bound", **payload},
          [f"oracle bound = {frac_str(Fraction(payload['value']['num'], payload['value']['den']))}",
           f"full sequences: {payload['sequences_total']}"])
    return 0


def _cmd_betamin(args) -> int:
    spec = _load_dss(args.dss)
    mode = {"eq2": "saturate"}.get(args.mode, args.mode)
    if mode == "saturate":
        value = beta_min_saturating(spec)
        payload = {"kind": "beta_min", "mode": "saturate", "value": {"num": value.numerator, "den": value.denominator}}
        _emit(args, payload, [f"beta_min (saturating) = {frac_str(value)}"])
        return 0
    B = args.B if args.B is not None else spec.B
    if B is None:
        raise ValidationError("search mode needs a file size: pass --B or declare B in the system file")
    value = beta_min_search(spec, B)
    payload = {"kind": "beta_min", "mode": "search", "B": B,
               "value": {"num": value.numerator, "den": value.denominator}}
    _emit(args, payload, [f"beta_min (search, B={B}) = {frac_str(value)}"])
    return 0


def _cmd_alphamin(args) -> int:
    spec = _load_dss(args.dss)
    B = args.B if args.B is not None else spec.B
    if B is None:
        raise ValidationError("pass --B or declare B in the system file")
    value = min_total_storage(list(spec.alpha), spec.k, B)
    report = check_optimality(spec, B)
    lines = [
        f"min total storage = {frac_str(value)}",
        f"storage shares: {', '.join(frac_str(c) for c in report.storage_shares)}",
        f"alpha matches d*beta: {report.alpha_matches_repair}",
        f"bound = {frac_str(report.bound_value)} "
        f"({'equals' if report.bound_equals_B else 'differs from'} B={B})",
    ]
    _emit(args, {"kind": "optimality", "B": B, **report.to_json()}, lines)
    return 0


def _cmd_construct(args) -> int:
    graph = GraphSpec.from_json(read_json(args.graph))
    field = Field(args.q)
    if args.json and args.seed is None:
        raise ValidationError("machine mode requires --seed (no hidden entropy)")
    seed = args.seed if args.seed is not None else 0
    code = construct_code(graph, args.k, field, seed, max_retries=args.retries)
    if args.out:
        write_json(args.out, code.to_json())
    payload = {"kind": "construct", "q": field.q, "B": code.B, "seed": seed,
               "out": args.out, "nodes": len(code.nodes)}
    lines = [f"constructed code: B={code.B} over GF({field.q}), seed={seed}"]
    if args.out:
        lines.append(f"wrote {args.out}")
    if args.json:
        sys.stdout.write(canonical_dumps(payload))
    else:
        for line in lines:
            print(line)
    return 0


def _cmd_verify(args) -> int:
    spec = _load_dss(args.dss)
    code = Code.from_json(read_json(args.code))
    report = verify_code(code, spec)
    payload = {"kind": "verification", **report.to_json()}
    lines = [
        f"reconstruction: {'pass' if report.reconstruction.passed else 'FAIL ' + str(report.reconstruction.failures())}",
        f"repairability:  {'pass' if report.repair.passed else 'FAIL ' + str(report.repair.failures())}",
        f"bound:          {'pass' if report.bound.passed else 'FAIL'} "
        f"(B={report.bound.code_file_size}, bound={frac_str(report.bound.bound)})",
        f"local:          {'pass' if report.local.passed else 'FAIL'} "
        f"(full local rank: {report.local.full_rank_ok})",
        f"overall:        {'PASS' if report.passed else 'FAIL'}",
    ]
    _emit(args, payload, lines)
    return 0 if report.passed else 1


def _cmd_simulate(args) -> int:
    spec = _load_dss(args.dss)
    code = Code.from_json(read_json(args.code))
    schedule = None
    if args.schedule:
        schedule = [tuple(e) for e in read_json(args.schedule)]
    if args.json and schedule is None and args.seed is None:
        raise ValidationError("machine mode requires --seed or --schedule (no hidden entropy)")
    trace = run_simulation(code, spec, seed=args.seed, steps=args.steps,
                           schedule=schedule)
    payload = {"kind": "sim_trace", **trace.to_json()}
    total = sum(c for _, c in trace.cumulative_downloads)
    lines = [
        f"events: {len(trace.events)}, total downloads: {total} packets",
        f"result: {'PASS' if trace.ok else 'FAIL (' + str(trace.failure) + ')'}",
    ]
    _emit(args, payload, lines)
    return 0 if trace.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hetrc",
        description="Heterogeneous distributed storage: bounds, code construction, verification.",
    )
    parser.add_argument("--version", action="version", version=f"hetrc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, dss=False, graph=False, code=False):
        p.add_argument("--json", action="store_true", help="machine-readable report on stdout")
        p.add_argument("--out", help="also write the report (or artifact) to this path")
        p.add_argument("--workers", type=int, default=None,
                       help="parallel workers (default: HETRC_WORKERS or all cores)")
        if dss:
            p.add_argument("--dss", required=True, help="system description (JSON)")
        if graph:
            p.add_argument("--graph", required=True, help="graph description (JSON)")
        if code:
            p.add_argument("--code", required=True, help="code file (JSON)")

    p = sub.add_parser("bound", help="exact file-size bound of a system")
    common(p, dss=True)
    p.add_argument("--beta", type=_parse_fraction, default=None,
                   help="override the system's repair traffic (N or N/D)")
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("oracle", help="bound via brute-force full orderings (small n)")
    common(p, dss=True)
    p.add_argument("--beta", type=_parse_fraction, default=None)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("betamin", help="minimum repair traffic, two readings")
    common(p, dss=True)
    p.add_argument("--mode", choices=["saturate", "search", "eq2"], default="saturate",
                   help="saturate: smallest beta clipping no storage term; "
                        "search: least candidate whose bound supports --B "
                        "(eq2 is accepted as an alias of saturate)")
    p.add_argument("--B", type=int, default=None, help="file size for search mode")
    p.set_defaults(func=_cmd_betamin)

    p = sub.add_parser("alphamin", help="minimum total storage and optimality report")
    common(p, dss=True)
    p.add_argument("--B", type=int, default=None, help="file size (defaults to the system's B)")
    p.set_defaults(func=_cmd_alphamin)

    p = sub.add_parser("construct", help="build a verified code from a graph")
    common(p, graph=True)
    p.add_argument("--k", type=int, required=True, help="reconstruction degree")
    p.add_argument("--q", type=int, default=16, help="field order (default 16)")
    p.add_argument("--seed", type=int, default=None, help="generator seed")
    p.add_argument("--retries", type=int, default=32, help="verification retry budget")
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("verify", help="certify a code against a system")
    common(p, dss=True, code=True)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("simulate", help="sequential failure/repair simulation")
    common(p, dss=True, code=True)
    p.add_argument("--seed", type=int, default=None, help="generator seed")
    p.add_argument("--steps", type=int, default=0, help="number of failure rounds")
    p.add_argument("--schedule", help="explicit [(node, set index)] list (JSON file)")
    p.set_defaults(func=_cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors already
        return int(exc.code or 0)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename}", file=sys.stderr)
        return 2
    except ConstructionFailedError as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return 1
    except (ValidationError, InfeasibleError, UnsupportedParameterError,
            ConstructionImpossibleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except HetrcError as exc:  # pragma: no cover - defensive catch-all
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
