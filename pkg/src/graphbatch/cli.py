"""Command-line interface: ``generate``, ``bench``, ``compare``, ``hist``.

Exit codes: 0 success, 1 usage/config/I/O error, 2 padding budget
violated by a graph (dynamic batching cannot continue).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from .batchers import DEFAULT_SAMPLE_SIZE, Algorithm
from .bench import (HISTOGRAM_QUANTITIES, ExperimentConfig, default_output_dir, load_report,
                    run_experiment)
from .compile_sim import CostModel
from .datagen import (FAMILY_ALIASES, aflow_like, dataset_summary, gen_dataset, qm9_like,
                      summary_to_dict, write_dataset)
from .errors import GraphBatchError, GraphExceedsBudget, MismatchedConfigs, MissingQuantity
from .stats import histogram_from_counts, pairwise_t_tests, speedup, write_matrix_csv

EXIT_OK, EXIT_ERROR, EXIT_BUDGET = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def cmd_generate(args) -> int:
    preset = qm9_like if FAMILY_ALIASES[args.family] == "gaussian" else aflow_like
    overrides = {k: v for k, v in {
        "mean_nodes": args.mean_nodes, "std_nodes": args.std_nodes, "min_nodes": args.min_nodes,
        "max_nodes": args.max_nodes, "knn_k": args.knn_k}.items() if v is not None}
    params = preset(size=args.size, seed=args.seed, **overrides)
    dataset = gen_dataset(params)
    write_dataset(dataset, args.output)
    print(json.dumps({"path": str(args.output), **summary_to_dict(dataset_summary(dataset))}, indent=2))
    return EXIT_OK


def cmd_bench(args) -> int:
    config = ExperimentConfig(
        algorithm=args.algorithm,
        batch_size=args.batch_size,
        steps=args.steps,
        iterations=args.iterations,
        dataset_path=str(args.dataset),
        seed=args.seed,
        budget_sample_size=args.budget_sample_size,
        cost_model=CostModel(args.base_cost, args.node_cost, args.edge_cost, args.compile_penalty),
        constant_factor=args.constant_factor,
        output_dir=default_output_dir(args.output_dir),
        jobs=args.jobs,
    )
    report = run_experiment(config)
    summary = {
        "output_dir": config.output_dir,
        "algorithm": config.algorithm,
        "budget": report["budget"],
        "recompilation_count": report["recompilation_count"],
        "combined_time_mean_ns": [e["aggregates"]["combined_time"]["mean"] for e in report["iterations"]],
    }
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def _labels(reports):
    labels, seen = [], {}
    for r in reports:
        name = r["config"]["algorithm"]
        seen[name] = seen.get(name, 0) + 1
        labels.append(name if seen[name] == 1 else f"{name}#{seen[name]}")
    return labels


def compare_reports(reports, metric="mean", field="combined"):
    """Per-algorithm values, speedups vs the slowest, and pairwise t-tests.

    Values are per-iteration ``metric`` of ``field`` time (ns); an
    algorithm's value is their mean across iterations.
    """
    if len(reports) < 2:
        raise MismatchedConfigs("need at least two reports to compare")
    first = reports[0]["config"]
    for r in reports[1:]:
        cfg = r["config"]
        if cfg["batch_size"] != first["batch_size"] or cfg["dataset_sha256"] != first["dataset_sha256"]:
            raise MismatchedConfigs("reports differ in batch size or dataset")
    key = f"{field}_time"
    labels = _labels(reports)
    samples = {label: [e["aggregates"][key][metric] for e in r["iterations"]]
               for label, r in zip(labels, reports)}
    values = {label: sum(v) / len(v) for label, v in samples.items()}
    slowest = max(values.values())
    rows = [{"algorithm": label, "iterations": len(samples[label]), "value_ns": values[label],
             "speedup_vs_slowest": speedup(slowest, values[label])} for label in labels]
    return {"labels": labels, "rows": rows, "tests": pairwise_t_tests(samples)}


def _cell(result, attr):
    if result is None:
        return "nan"
    return getattr(result, attr)


def cmd_compare(args) -> int:
    reports = [load_report(p) for p in args.reports]
    result = compare_reports(reports, args.metric, args.field)
    labels, tests = result["labels"], result["tests"]
    out_dir = Path(args.output_dir) if args.output_dir else None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        with open(out_dir / "comparison.csv", "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(result["rows"][0]))
            writer.writeheader()
            writer.writerows(result["rows"])
        for attr, name in (("t_statistic", "ttest_t.csv"), ("p_value", "ttest_p.csv"),
                           ("significance", "ttest_significance.csv")):
            matrix = {r: {c: _cell(tests[r][c], attr) for c in labels} for r in labels}
            write_matrix_csv(out_dir / name, labels, matrix)

    print(f"{args.metric} {args.field} time per step")
    print(f"{'algorithm':<20}{'ms/step':>12}{'speedup':>10}")
    for row in result["rows"]:
        print(f"{row['algorithm']:<20}{row['value_ns'] / 1e6:>12.4f}{row['speedup_vs_slowest']:>10.3f}")
    print("\npairwise t-tests (t / p / significance)")
    for i, r in enumerate(labels):
        for c in labels[i + 1:]:
            res = tests[r][c]
            if res is None:
                print(f"  {r} vs {c}: untestable")
            else:
                t = "nan" if math.isnan(res.t_statistic) else f"{res.t_statistic:.4f}"
                print(f"  {r} vs {c}: t={t} p={res.p_value:.4g} {res.significance}")
    return EXIT_OK


def report_histogram(report, quantity, iteration="0", bin_width=1.0, origin=0.0):
    if quantity not in HISTOGRAM_QUANTITIES:
        raise MissingQuantity(f"unknown quantity {quantity!r}")
    entries = report["iterations"]
    if iteration != "all":
        idx = int(iteration)
        entries = [e for e in entries if e["iteration"] == idx]
        if not entries:
            raise MissingQuantity(f"report has no iteration {idx}")
    merged = {}
    for e in entries:
        counts = e.get("histograms", {}).get(quantity)
        if counts is None:
            raise MissingQuantity(f"report has no {quantity} histogram")
        for value, count in counts.items():
            merged[float(value)] = merged.get(float(value), 0) + count
    return histogram_from_counts(merged, bin_width, origin)


def cmd_hist(args) -> int:
    report = load_report(args.report)
    hist = report_histogram(report, args.quantity, args.iteration, args.bin_width, args.origin)
    if args.output:
        hist.write_csv(args.output)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["bin_lower", "count"])
        writer.writerows(hist.rows())
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="graphbatch", description="Graph batching benchmarks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("generate", help="write a synthetic dataset")
    gen.add_argument("--family", choices=sorted(FAMILY_ALIASES), default="qm9like")
    gen.add_argument("--size", type=int, default=10_000)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--mean-nodes", type=float)
    gen.add_argument("--std-nodes", type=float, help="std (gaussian) or log-space sigma (longtail)")
    gen.add_argument("--min-nodes", type=int)
    gen.add_argument("--max-nodes", type=int)
    gen.add_argument("--knn-k", type=int)
    gen.add_argument("-o", "--output", required=True)
    gen.set_defaults(func=cmd_generate)

    bench = sub.add_parser("bench", help="run a batching experiment")
    bench.add_argument("--algorithm", choices=[a.value for a in Algorithm], required=True)
    bench.add_argument("--batch-size", type=int, default=32)
    bench.add_argument("--steps", type=int, default=10_000)
    bench.add_argument("--iterations", type=int, default=10)
    bench.add_argument("--dataset", required=True)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--budget-sample-size", type=int, default=DEFAULT_SAMPLE_SIZE)
    bench.add_argument("--constant-factor", choices=["full", "minus-one"], default="minus-one")
    bench.add_argument("--output-dir", help="defaults to $GRAPHBATCH_OUTPUT_DIR")
    bench.add_argument("--jobs", type=int, default=1, help="run iterations in parallel processes")
    defaults = CostModel()
    bench.add_argument("--base-cost", type=float, default=defaults.base_cost, help="us per step")
    bench.add_argument("--node-cost", type=float, default=defaults.node_cost, help="us per padded node")
    bench.add_argument("--edge-cost", type=float, default=defaults.edge_cost, help="us per padded edge")
    bench.add_argument("--compile-penalty", type=float, default=defaults.compile_penalty,
                       help="us per newly seen shape")
    bench.set_defaults(func=cmd_bench)

    cmp_ = sub.add_parser("compare", help="compare bench reports")
    cmp_.add_argument("reports", nargs="+", help="report.json files or their directories")
    cmp_.add_argument("--metric", choices=["mean", "median"], default="mean")
    cmp_.add_argument("--field", choices=["batch", "update", "combined"], default="combined")
    cmp_.add_argument("-o", "--output-dir")
    cmp_.set_defaults(func=cmd_compare)

    hist = sub.add_parser("hist", help="histogram CSV from a bench report")
    hist.add_argument("report")
    hist.add_argument("--quantity", choices=list(HISTOGRAM_QUANTITIES), required=True)
    hist.add_argument("--iteration", default="0", help="iteration index or 'all'")
    hist.add_argument("--bin-width", type=float, default=1.0)
    hist.add_argument("--origin", type=float, default=0.0)
    hist.add_argument("-o", "--output")
    hist.set_defaults(func=cmd_hist)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GraphExceedsBudget as exc:
        print(f"graphbatch: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (GraphBatchError, OSError, ValueError, KeyError) as exc:
        print(f"graphbatch: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
