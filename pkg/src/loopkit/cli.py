"""Command-line interface. Machine output is JSON; ``--human`` prints tables.

Exit codes: 0 success, 1 check failed (verification or crosscheck mismatch),
2 invalid input, 3 EMP not identifiable, 4 non-generic or degenerate instance.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import ambiguity, emp as emp_mod, oracle, recover
from .emp import Emp, nsc_check
from .errors import (
    DegenerateNetworkError,
    FormatError,
    LoopkitError,
    NonGenericError,
    NotIdentifiableError,
)
from .exactalg import parse_rat
from .loopnet import io_map, random_network
from .serialize import (
    dumps,
    emp_from_json,
    iomap_from_json,
    iomap_to_json,
    load_json,
    network_from_json,
    network_to_json,
)

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_NOT_IDENTIFIABLE, EXIT_NON_GENERIC = 0, 1, 2, 3, 4


def _node_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(tok) for tok in text.replace(" ", "").split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated node numbers, got {text!r}") from None


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emp_entry(emp: Emp, cls) -> dict:
    return {"pattern": emp.pattern, **emp.to_dict(), "verdict": cls.verdict.value, "cardinality": cls.cardinality}


def cmd_emp_check(args) -> int:
    if args.pattern is not None:
        if args.excited is not None or args.measured is not None:
            raise FormatError("--pattern: give either --pattern or --excited/--measured, not both")
        if len(args.pattern) != args.n:
            raise FormatError(f"--pattern: length {len(args.pattern)} does not match --n {args.n}")
        emp = Emp.from_pattern(args.pattern)
    else:
        if args.excited is None or args.measured is None:
            raise FormatError("--excited/--measured: both lists are required without --pattern")
        emp = Emp(args.n, args.excited, args.measured)
    cls = nsc_check(emp)
    if args.human:
        print(f"{emp.pattern}: {cls.verdict.value} (cardinality {cls.cardinality}, rule {cls.reason.rule.value})")
    else:
        _emit(dumps({"emp": emp.to_dict(), "pattern": emp.pattern, **cls.to_dict()}), args.output)
    return EXIT_OK


def cmd_emp_enumerate(args) -> int:
    items = list(emp_mod.enumerate_emps(args.n, args.cls))
    if args.human:
        if not args.count_only:
            for e, c in items:
                print(f"{e.pattern}  {c.verdict.value}")
        print(f"count: {len(items)}")
        return EXIT_OK
    out = {"n": args.n, "class": args.cls or "all", "count": len(items)}
    if not args.count_only:
        out["emps"] = [_emp_entry(e, c) for e, c in items]
    _emit(dumps(out), args.output)
    return EXIT_OK


def cmd_emp_table(args) -> int:
    report = emp_mod.table(args.max_n)
    if args.human:
        print(emp_mod.format_table(report))
    else:
        _emit(dumps(report), args.output)
    return EXIT_OK if report["ok"] else EXIT_FAILED


def cmd_net_random(args) -> int:
    net = random_network(args.n, args.seed, args.degree_bound)
    _emit(dumps(network_to_json(net)), args.output)
    return EXIT_OK


def _load_emp(path) -> Emp:
    return emp_from_json(load_json(path, "--emp"), "emp")


def _load_net(path, flag="--net"):
    return network_from_json(load_json(path, flag), "network")


def cmd_net_simulate(args) -> int:
    net = _load_net(args.net)
    emp = _load_emp(args.emp)
    if emp.n != net.n:
        raise FormatError(f"emp.n: EMP has {emp.n} nodes but the network has {net.n}")
    _emit(dumps(iomap_to_json(io_map(net, emp))), args.output)
    return EXIT_OK


def cmd_net_recover(args) -> int:
    m = iomap_from_json(load_json(args.m, "--m"), "map")
    emp = _load_emp(args.emp)
    p = recover.plan(emp)
    try:
        net = recover.recover_edges(m, emp, p)
    except LoopkitError as exc:
        if isinstance(exc, (NonGenericError, NotIdentifiableError, DegenerateNetworkError)):
            raise
        raise FormatError(f"--m: {exc}") from None
    summary = {"plan": p.to_dict(), "verified": None}
    code = EXIT_OK
    if args.verify_against:
        ref = _load_net(args.verify_against, "--verify-against")
        if ref.n != net.n:
            raise FormatError(f"--verify-against: network has {ref.n} nodes, map has {net.n}")
        differing = [[i, i % net.n + 1] for i in range(1, net.n + 1) if net.edges[i - 1] != ref.edges[i - 1]]
        summary["verified"] = not differing
        summary["differing_edges"] = differing
        if differing:
            code = EXIT_FAILED
    if args.output:
        Path(args.output).write_text(dumps(network_to_json(net)))
        summary["output"] = args.output
    else:
        summary["network"] = network_to_json(net)
    sys.stdout.write(dumps(summary))
    return code


def cmd_net_counterexample(args) -> int:
    net = _load_net(args.net)
    emp = _load_emp(args.emp)
    try:
        lam = parse_rat(args.lam)
    except ValueError as exc:
        raise FormatError(f"--lambda: {exc}") from None
    other = ambiguity.indistinguishable_family(net, emp, lam)
    check = ambiguity.verify_counterexample(net, other, emp)
    out = {
        "emp": emp.to_dict(),
        "lambda": str(lam),
        "original": network_to_json(net),
        "alternative": network_to_json(other),
        "check": check,
    }
    _emit(dumps(out), args.output)
    return EXIT_OK if check["is_counterexample"] or lam == 1 else EXIT_FAILED


def cmd_oracle_crosscheck(args) -> int:
    report = oracle.crosscheck(args.n, args.trials, args.seed)
    if args.human:
        print(f"n={report['n']} trials={report['trials']} seed={report['seed']}: "
              f"{report['agreements']}/{report['total']} agree")
        for verdict, hist in report["rank_histogram"].items():
            print(f"  {verdict:<18} ranks {hist}")
    else:
        _emit(dumps(report), args.output)
    return EXIT_OK if not report["disagreements"] else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="loopkit", description="Identifiability of isolated loop networks.")
    top = parser.add_subparsers(dest="group", required=True)

    def sub(group, name, func, help):
        p = group.add_parser(name, help=help)
        p.set_defaults(func=func)
        return p

    g_emp = top.add_parser("emp", help="excitation and measurement patterns").add_subparsers(dest="cmd", required=True)
    p = sub(g_emp, "check", cmd_emp_check, "classify one EMP")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--excited", type=_node_list)
    p.add_argument("--measured", type=_node_list)
    p.add_argument("--pattern", help="one letter per node: E excited, M measured, B both")
    p.add_argument("--human", action="store_true")
    p.add_argument("-o", "--output")

    p = sub(g_emp, "enumerate", cmd_emp_enumerate, "list every covering EMP")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--class", dest="cls", choices=["minimal", "valid", "invalid"])
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--human", action="store_true")
    p.add_argument("-o", "--output")

    p = sub(g_emp, "table", cmd_emp_table, "minimal/valid/invalid counts against the published table")
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--human", action="store_true")
    p.add_argument("-o", "--output")

    g_net = top.add_parser("net", help="loop networks").add_subparsers(dest="cmd", required=True)
    p = sub(g_net, "random", cmd_net_random, "draw a random loop network")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--degree-bound", type=int, default=1)
    p.add_argument("-o", "--output")

    p = sub(g_net, "simulate", cmd_net_simulate, "compute the input-output map")
    p.add_argument("--net", required=True)
    p.add_argument("--emp", required=True)
    p.add_argument("-o", "--output")

    p = sub(g_net, "recover", cmd_net_recover, "reconstruct all edges from a map")
    p.add_argument("--m", required=True)
    p.add_argument("--emp", required=True)
    p.add_argument("--verify-against")
    p.add_argument("-o", "--output")

    p = sub(g_net, "counterexample", cmd_net_counterexample, "build an indistinguishable network")
    p.add_argument("--net", required=True)
    p.add_argument("--emp", required=True)
    p.add_argument("--lambda", dest="lam", required=True, help="rational scale factor P/Q")
    p.add_argument("-o", "--output")

    g_or = top.add_parser("oracle", help="Jacobian rank oracle").add_subparsers(dest="cmd", required=True)
    p = sub(g_or, "crosscheck", cmd_oracle_crosscheck, "compare rank oracle and combinatorial test")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--human", action="store_true")
    p.add_argument("-o", "--output")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NotIdentifiableError as exc:
        print(f"error: not identifiable: {exc}", file=sys.stderr)
        return EXIT_NOT_IDENTIFIABLE
    except (NonGenericError, DegenerateNetworkError) as exc:
        print(f"error: non-generic instance: {exc}", file=sys.stderr)
        return EXIT_NON_GENERIC
    except LoopkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
