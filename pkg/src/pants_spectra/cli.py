"""Command-line interface.

Exit codes: 0 success, 1 a check failed (failing inputs go to stderr),
2 bad arguments. JSON floats use the shortest repr that round-trips;
CSV floats are written with 17 significant digits.
"""
import argparse
import csv
import io
import json
import sys

from .counterexample import (
    HalvingFamily, divergence_table, growth_rate_check, table_to_csv, theorem_key_on_family,
)
from .decompose import decompose
from .errors import ConvergenceError, DomainError
from .ledger import build_ledger
from .pants import PantsMetric, spectrum, spectrum_to_csv, spectrum_to_json, valid_classes
from .verify import SWEEP_CSV_COLUMNS, MetricPair, SweepConfig, evaluate_pair, summary_to_json, sweep, sweep_rows

MODEL_NOTE = (
    "model: every boundary length is halved per step; this surrogate keeps only the two "
    "length properties the divergence argument uses and is not a literal extension of the surface"
)
MAX_FAILURES_SHOWN = 20
DECOMPOSITION_COLUMNS = ("class_kind", "index_a", "index_b", "total", "d_start", "d_end", "middle", "case_tag")


class UsageError(Exception):
    pass


def _g(x) -> str:
    return "" if x is None else format(x, ".17g")


def _metric(text: str) -> PantsMetric:
    try:
        return PantsMetric.parse(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0 or value == float("inf"):
        raise argparse.ArgumentTypeError(f"must be positive and finite: {text!r}")
    return value


def _count(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {text!r}")
    return value


def _seed(text: str) -> int:
    value = _count(text)
    if value >= 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pants-spectra", description="Length spectra of hyperbolic pants.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, fmt=True):
        p = sub.add_parser(name, help=help_text)
        if fmt:
            p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", help="write output here instead of stdout")
        return p

    p = add("pants", "lengths of all essential curves and arcs")
    p.add_argument("--metric", type=_metric, required=True, help="boundary lengths l1,l2,l3 (0 = cusp)")

    p = add("decompose", "collar and middle segments of every arc")
    p.add_argument("--metric", type=_metric, required=True)

    p = add("constants", "the constant ledger for eps0")
    p.add_argument("--eps0", type=_positive, required=True)

    p = add("check", "every inequality on one pair of metrics", fmt=False)
    p.add_argument("--eps0", type=_positive, required=True)
    p.add_argument("--metric", type=_metric, action="append", required=True,
                   help="give twice: first and second metric")

    p = add("sweep", "randomized check of all inequalities")
    p.add_argument("--eps0", type=_positive, required=True)
    p.add_argument("--samples", type=_count, default=1000, help="pairs per cusp pattern")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--thick-eps", type=_positive, default=None)

    p = add("counterexample", "arc ratios along the boundary-halving family")
    p.add_argument("--metric", type=_metric, default=PantsMetric(0.3, 0.3, 0.3))
    p.add_argument("--steps", type=_count, default=30)
    p.add_argument("--eps0", type=_positive, default=None,
                   help="also check the symmetrized key inequality against this eps0's ledger")
    return parser


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def cmd_pants(args):
    entries = spectrum(args.metric)
    text = spectrum_to_json(args.metric, entries) + "\n" if args.format == "json" else spectrum_to_csv(entries)
    _emit(text, args.out)
    return 0


def cmd_decompose(args):
    parts = [decompose(args.metric, cls) for cls in valid_classes(args.metric) if cls.kind != "curve"]
    if args.format == "json":
        text = json.dumps({"metric": list(args.metric.lengths), "arcs": [d.to_dict() for d in parts]}, indent=2) + "\n"
    else:
        text = _csv(DECOMPOSITION_COLUMNS, [
            (d.arc.kind, d.arc.i, d.arc.j if d.arc.kind == "seam" else "",
             _g(d.total), _g(d.d_start), _g(d.d_end), _g(d.middle), d.case_tag)
            for d in parts
        ])
    _emit(text, args.out)
    return 0


def cmd_constants(args):
    ledger = build_ledger(args.eps0)
    if args.format == "json":
        text = ledger.to_json() + "\n"
    else:
        text = _csv(("name", "value"), [(k, _g(v)) for k, v in ledger.to_dict().items()])
    _emit(text, args.out)
    return 0


def cmd_check(args):
    if len(args.metric) != 2:
        raise UsageError("check needs exactly two --metric options")
    pair = MetricPair(*args.metric)
    ledger = build_ledger(args.eps0)
    if not pair.in_relative_part(ledger.eps0):
        raise UsageError(f"both metrics need every boundary length <= eps0 = {ledger.eps0}")
    report = evaluate_pair(pair, ledger)
    _emit(json.dumps(report.to_dict(), indent=2) + "\n", args.out)
    if report.passed:
        return 0
    print(f"FAILED for P1 = {pair.P1}, P2 = {pair.P2}", file=sys.stderr)
    if report.error:
        print(f"  numeric failure: {report.error}", file=sys.stderr)
    for c in report.failed_checks():
        print(f"  {c.name} {c.subject} {c.direction}: {_g(c.lhs)} > {_g(c.rhs)}", file=sys.stderr)
    return 1


def cmd_sweep(args):
    try:
        config = SweepConfig(args.eps0, args.samples, args.seed, args.thick_eps)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    result = sweep(config)
    if args.format == "json":
        text = summary_to_json(result.summary) + "\n"
    else:
        text = _csv(SWEEP_CSV_COLUMNS, [
            (row[0], *(_g(v) for v in row[1:9]), str(row[9]).lower(), str(row[10]).lower(), _g(row[11]))
            for row in sweep_rows(result)
        ])
    _emit(text, args.out)
    if result.summary["all_passed"]:
        return 0
    failing = [i for i, ok in enumerate(result.pair_passed()) if not ok]
    print(f"{len(failing)} of {len(result.pair_ids)} pairs failed a check", file=sys.stderr)
    for row in failing[:MAX_FAILURES_SHOWN]:
        rep = result.reports[row]
        names = sorted({f"{c.name} {c.subject}" for c in rep.failed_checks()})
        print(f"  pair {rep.pair_id}: P1 = {result.batch.L1[row].tolist()}, P2 = {result.batch.L2[row].tolist()}: "
              f"{rep.error or ', '.join(names)}", file=sys.stderr)
    return 1


def cmd_counterexample(args):
    base = args.metric
    try:
        HalvingFamily(base).require_steps(args.steps)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    rows = divergence_table(base, args.steps)
    growth = growth_rate_check(base, args.steps)
    increasing = all(b.arc_sup > a.arc_sup for a, b in zip(rows, rows[1:]))
    curves_bounded = all(r.curve_sup <= 1.0 for r in rows)
    key_checks = []
    if args.eps0 is not None:
        key_checks = theorem_key_on_family(base, args.steps, build_ledger(args.eps0))
    ok = increasing and curves_bounded and growth.passed is not False and all(r.passed for _, r in key_checks)

    print(MODEL_NOTE, file=sys.stderr)
    if args.format == "json":
        payload = {
            "model_note": MODEL_NOTE,
            "base": list(base.lengths),
            "rows": [vars(r) for r in rows],
            "arc_sup_strictly_increasing": increasing,
            "curve_sup_at_most_one": curves_bounded,
            "growth": {k: v for k, v in growth.to_dict().items() if k != "increments"},
            "theorem_key": [{"n": n, **r.to_dict()} for n, r in key_checks],
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        text = table_to_csv(rows)
    _emit(text, args.out)
    if not ok:
        print(f"counterexample checks failed for base {base}: increasing={increasing}, "
              f"curves_bounded={curves_bounded}, growth_passed={growth.passed}", file=sys.stderr)
        for n, r in key_checks:
            if not r.passed:
                print(f"  theorem_key failed at n = {n}: {_g(r.lhs)} > {_g(r.rhs)}", file=sys.stderr)
        return 1
    return 0


COMMANDS = {
    "pants": cmd_pants, "decompose": cmd_decompose, "constants": cmd_constants,
    "check": cmd_check, "sweep": cmd_sweep, "counterexample": cmd_counterexample,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, DomainError) as exc:
        print(f"pants-spectra {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"pants-spectra {args.command}: numeric failure: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"pants-spectra {args.command}: error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
