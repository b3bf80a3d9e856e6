"""Campaign runner: configure, execute, persist, and report verification runs.

Subcommands
-----------
``part1``   configuration-sum instances (numeric, seeded-random, or symbolic)
``part2``   log-expansion vanishing checks at a configured budget
``bridge``  one paired instance: u-monomial coefficient vs configuration sum
``sweep``   the full default band (g <= 6 all w; g = 7 w <= 3) plus optional
            exploratory g = 7, w in {4, 5} instances
``report``  human-readable summary of a ledger file

Every run appends exact, reproducible records to a JSON-lines ledger (path
from ``--ledger``, else ``$STIRLINGZERO_LEDGER_DIR/ledger.jsonl``, else
``./ledger.jsonl``).  Exit status is 0 iff every *asserted* verdict is
zero/consistent; exploratory and not-attempted records never affect it.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from .algebra import BudgetError, EngineError
from .bridge import bridge_check, bridge_params, expansion_budget_for
from .config_sums import (
    ConfigSumInstance,
    double_check_nonzero,
    instance_rng,
    random_ground,
    sum_collapsed,
    verify_range,
)
from .ledger import (
    LedgerRecord,
    default_ledger_path,
    read_records,
    render_report,
    value_str,
    write_record,
)
from .partitions import GroundSet
from .series_vanishing import ExpansionConfig, all_vanished, vanishing_report

__all__ = ["main", "build_parser"]


def _parse_rational_list(text: str):
    try:
        return [Fraction(tok) for tok in text.split(",") if tok.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(
            f"expected a comma-separated list of rationals, got {text!r}: {exc}")


def _parse_int_list(text: str):
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"expected a comma-separated list of integers, got {text!r}: {exc}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stirlingzero",
        description="Exact-arithmetic verifier for vanishing configuration sums "
                    "and log-expansion coefficients.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--ledger", help="ledger file path (JSON lines)")
        p.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                       help="worker processes; --jobs 1 is the serial reference path")

    p1 = sub.add_parser("part1", help="configuration-sum instances")
    p1.add_argument("--g", type=int, required=True, help="ground-set size (>= 2)")
    group_w = p1.add_mutually_exclusive_group(required=True)
    group_w.add_argument("--w", type=int, help="single weight budget")
    group_w.add_argument("--all-w", action="store_true", help="every w in 0..g-2")
    group_c = p1.add_mutually_exclusive_group(required=True)
    group_c.add_argument("--c", type=_parse_rational_list,
                         help="explicit ground values, e.g. 2,3,4 or 5/2,-1,7")
    group_c.add_argument("--random", type=int, metavar="COUNT",
                         help="COUNT seeded random rational ground sets")
    group_c.add_argument("--symbolic", action="store_true",
                         help="fully symbolic ground set (proves every ground set)")
    p1.add_argument("--seed", type=int, default=0, help="seed for --random grounds")
    add_common(p1)

    p2 = sub.add_parser("part2", help="log-expansion vanishing checks")
    p2.add_argument("--H", type=int, default=4, dest="h_max",
                    help="deepest 1/n order checked")
    p2.add_argument("--s-max", type=int, default=6,
                    help="largest u index kept symbolic")
    p2.add_argument("--j-samples", type=_parse_int_list,
                    help="integer j values for the interpolation oracle")
    add_common(p2)

    pb = sub.add_parser("bridge", help="paired check of one bridge instance")
    pb.add_argument("--c", type=_parse_int_list, required=True,
                    help="distinct integers >= 2, e.g. 2,3,4")
    pb.add_argument("--w", type=int, required=True)
    pb.add_argument("--H", type=int, dest="h_max",
                    help="override the auto-sized expansion depth")
    pb.add_argument("--s-max", type=int, help="override the largest u index")
    pb.add_argument("--j-samples", type=_parse_int_list,
                    help="override the oracle sample points")
    add_common(pb)

    ps = sub.add_parser("sweep", help="default verification band up to --g-max")
    ps.add_argument("--g-max", type=int, default=7)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--symbolic-g-max", type=int, default=5)
    ps.add_argument("--samples-g6", type=int, default=10,
                    help="seeded ground sets per (6, w) instance")
    ps.add_argument("--samples-g7", type=int, default=5,
                    help="seeded ground sets per asserted (7, w) instance")
    ps.add_argument("--exploratory-samples", type=int, default=1,
                    help="ground sets per exploratory instance")
    ps.add_argument("--budget-seconds", type=float,
                    help="wall-clock budget; leftover instances are marked, not dropped")
    ps.add_argument("--skip-exploratory", action="store_true")
    add_common(ps)

    pr = sub.add_parser("report", help="summarize a ledger file")
    pr.add_argument("--ledger", help="ledger file path (JSON lines)")

    return parser


def _emit(path, record, quiet=False):
    write_record(path, record)
    if not quiet:
        detail = f" value={record.value}" if record.verdict == "nonzero" else ""
        print(f"[{record.status}] {record.command} "
              f"{' '.join(f'{k}={v}' for k, v in sorted(record.params.items()))}"
              f" -> {record.verdict}{detail}")


def _confirmation_extra(conf):
    if conf is None:
        return {}
    extra = {
        "reverified_by_ordered_route": conf.ordered_agrees,
        "ordered_total": value_str(conf.ordered_total),
    }
    if conf.second_ground is not None:
        extra["second_ground"] = conf.second_ground.describe()
        extra["second_total"] = value_str(conf.second_total)
    return extra


def _run_part1(args, ledger_path) -> int:
    if args.g < 2:
        print("error: need --g >= 2", file=sys.stderr)
        return 2
    ws = list(range(args.g - 1)) if args.all_w else [args.w]
    for w in ws:
        if not 0 <= w <= args.g - 2:
            print(f"error: w={w} outside 0..g-2", file=sys.stderr)
            return 2
    if args.c is not None and len(args.c) != args.g:
        print(f"error: --c lists {len(args.c)} values but --g is {args.g}",
              file=sys.stderr)
        return 2
    if args.random is not None and args.random < 1:
        print("error: --random needs a positive count", file=sys.stderr)
        return 2

    failures = 0
    for w in ws:
        if args.symbolic:
            grounds = [(None, GroundSet.symbolic(args.g))]
        elif args.c is not None:
            grounds = [(None, GroundSet.numeric(args.c))]
        else:
            grounds = [
                (i, random_ground(args.g, instance_rng(args.seed, args.g, w, i)))
                for i in range(args.random)
            ]
        for index, ground in grounds:
            inst = ConfigSumInstance.make(args.g, w, ground)
            result = sum_collapsed(inst, jobs=args.jobs)
            extra = {}
            if result.verdict == "nonzero":
                failures += 1
                conf = double_check_nonzero(
                    inst, result.total,
                    instance_rng(args.seed + 1, args.g, w, index or 0))
                extra = _confirmation_extra(conf)
            params = {"g": args.g, "w": w, "mode": inst.mode,
                      "ground": ground.describe()}
            if index is not None:
                params["seed"] = f"{args.seed}/{args.g}/{w}/{index}"
            _emit(ledger_path, LedgerRecord(
                command="part1", params=params, status="asserted",
                verdict=result.verdict, value=value_str(result.total),
                visited=result.configurations_visited,
                elapsed=result.elapsed, extra=extra))
    return 1 if failures else 0


def _run_part2(args, ledger_path) -> int:
    kwargs = {"h_max": args.h_max, "s_max": args.s_max}
    if args.j_samples:
        kwargs["j_samples"] = tuple(args.j_samples)
    try:
        cfg = ExpansionConfig(**kwargs)
        checks = vanishing_report(cfg)
    except (ValueError, EngineError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for check in checks:
        params = {"h": check.h, "k": check.k, "H": cfg.h_max,
                  "s_max": cfg.s_max, "j_samples": ",".join(map(str, cfg.j_samples))}
        _emit(ledger_path, LedgerRecord(
            command="part2", params=params, status="asserted",
            verdict="zero" if check.vanished else "nonzero",
            value=value_str(check.value),
            extra={"j_degree_at_order": check.j_degree_at_order}))
    return 0 if all_vanished(checks) else 1


def _run_bridge(args, ledger_path) -> int:
    try:
        inst = bridge_params(args.c, args.w)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    cfg = expansion_budget_for(inst)
    overrides = {}
    if args.h_max is not None:
        overrides["h_max"] = args.h_max
    if args.s_max is not None:
        overrides["s_max"] = args.s_max
    if args.j_samples:
        overrides["j_samples"] = tuple(args.j_samples)
    try:
        if overrides:
            cfg = ExpansionConfig(
                h_max=overrides.get("h_max", cfg.h_max),
                s_max=overrides.get("s_max", cfg.s_max),
                j_samples=overrides.get("j_samples", cfg.j_samples))
        report = bridge_check(inst, cfg, jobs=args.jobs)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetError as exc:
        print(f"warning: {exc}", file=sys.stderr)
        _emit(ledger_path, LedgerRecord(
            command="bridge",
            params={"c": ",".join(map(str, inst.c)), "w": inst.w,
                    "k": inst.k, "h": inst.h},
            status="not_attempted", verdict=None, value=None,
            extra={"reason": str(exc)}))
        return 0
    verdict = "zero" if (report.coefficient_zero and report.config_sum_zero) \
        else "nonzero"
    extra = {
        "bridge_coefficient": value_str(report.coefficient),
        "config_sum": value_str(report.config_sum.total),
        "consistent": report.consistent,
    }
    if report.ratios is not None:
        extra["ratio_per_r_power"] = {
            str(d): str(q) for d, q in sorted(report.ratios.items())}
    _emit(ledger_path, LedgerRecord(
        command="bridge",
        params={"c": ",".join(map(str, inst.c)), "w": inst.w,
                "k": inst.k, "h": inst.h},
        status="asserted", verdict=verdict,
        value=value_str(report.config_sum.total),
        visited=report.config_sum.configurations_visited,
        elapsed=report.config_sum.elapsed, extra=extra))
    return 0 if verdict == "zero" and report.consistent else 1


def _run_sweep(args, ledger_path) -> int:
    entries = verify_range(
        args.g_max,
        symbolic_g_max=args.symbolic_g_max,
        numeric_samples={6: args.samples_g6, 7: args.samples_g7},
        exploratory_samples=args.exploratory_samples,
        seed=args.seed,
        jobs=args.jobs,
        budget_seconds=args.budget_seconds,
        include_exploratory=not args.skip_exploratory)
    failures = 0
    for entry in entries:
        params = {"g": entry.g, "w": entry.w, "mode": entry.mode}
        if entry.seed is not None:
            params["seed"] = entry.seed
        if entry.result is None:
            _emit(ledger_path, LedgerRecord(
                command="sweep", params=params, status="not_attempted",
                verdict=None, value=None))
            continue
        params["ground"] = entry.result.instance.ground.describe()
        if entry.result.verdict == "nonzero" and entry.status == "asserted":
            failures += 1
        _emit(ledger_path, LedgerRecord(
            command="sweep", params=params, status=entry.status,
            verdict=entry.result.verdict,
            value=value_str(entry.result.total),
            visited=entry.result.configurations_visited,
            elapsed=entry.result.elapsed,
            extra=_confirmation_extra(entry.confirmation)))
    not_attempted = sum(1 for e in entries if e.status == "not_attempted")
    if not_attempted:
        print(f"warning: {not_attempted} instances not attempted "
              "(budget exhausted); see ledger", file=sys.stderr)
    return 1 if failures else 0


def _run_report(args) -> int:
    path = default_ledger_path(args.ledger)
    records, warnings = read_records(path)
    print(render_report(records, warnings))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "report":
        return _run_report(args)
    ledger_path = default_ledger_path(args.ledger)
    if args.command == "part1":
        return _run_part1(args, ledger_path)
    if args.command == "part2":
        return _run_part2(args, ledger_path)
    if args.command == "bridge":
        return _run_bridge(args, ledger_path)
    if args.command == "sweep":
        return _run_sweep(args, ledger_path)
    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
