"""Experiment runner behind the ``bench`` command.

Each iteration owns a fresh stream (seed + iteration index) and a fresh
shape registry. Per step, the batching call is timed on the monotonic
clock; the update step is simulated by the cost model.
"""

from __future__ import annotations

import copy
import csv
import hashlib
import json
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from . import _backend
from .batchers import DEFAULT_SAMPLE_SIZE, Algorithm, GraphStream, make_batcher
from .compile_sim import CostModel, ShapeRegistry, simulate_update_cost
from .datagen import read_dataset
from .stats import TIME_FIELDS, summarize

REPORT_FORMAT = "graphbatch-report/1"
STEPS_HEADER = ["step", "batch_time_ns", "update_time_ns", "combined_time_ns", "padded_nodes",
                "padded_edges", "num_graphs", "real_graphs", "new_shape"]
SHAPE_COLUMNS = ["step", "update_time_ns", "padded_nodes", "padded_edges", "num_graphs",
                 "real_graphs", "new_shape"]
HISTOGRAM_QUANTITIES = ("pre_pad_nodes", "pre_pad_edges", "real_graphs")
# Fields derived from the wall clock; everything else in a report is a
# pure function of the config.
WALL_CLOCK_TIME_FIELDS = ("batch_time", "combined_time")


@dataclass
class ExperimentConfig:
    algorithm: str
    batch_size: int
    steps: int
    iterations: int
    dataset_path: str
    seed: int = 0
    budget_sample_size: int = DEFAULT_SAMPLE_SIZE
    cost_model: CostModel = field(default_factory=CostModel)
    constant_factor: str = "minus-one"
    output_dir: str = "."
    jobs: int = 1

    def __post_init__(self):
        self.algorithm = Algorithm(self.algorithm).value
        if self.batch_size < 2:
            raise ValueError(f"batch size must be >= 2, got {self.batch_size}")
        if self.steps < 1 or self.iterations < 1:
            raise ValueError("steps and iterations must be >= 1")
        if self.budget_sample_size < 1:
            raise ValueError("budget sample size must be >= 1")
        if self.constant_factor not in ("full", "minus-one"):
            raise ValueError(f"constant factor must be 'full' or 'minus-one', got {self.constant_factor!r}")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("output_dir")
        d.pop("jobs")
        return d


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def run_iteration(config: ExperimentConfig, iteration: int, dataset=None) -> dict:
    """Run one iteration; returns its report entry and step rows."""
    if dataset is None:
        dataset = read_dataset(config.dataset_path)
    seed = config.seed + iteration
    stream = GraphStream(dataset, seed)
    batches, budget = make_batcher(config.algorithm, stream, config.batch_size,
                                   sample_size=config.budget_sample_size,
                                   constant_factor=config.constant_factor)
    registry = ShapeRegistry()
    cost = config.cost_model
    clock = time.perf_counter_ns
    rows = []
    pre_nodes, pre_edges, real = Counter(), Counter(), Counter()
    for step in range(config.steps):
        t0 = clock()
        pb = next(batches)
        t1 = clock()
        new = registry.record(step, pb.shape)
        update_ns = round(simulate_update_cost(pb.shape, cost, new) * 1000)
        batch_ns = t1 - t0
        rows.append((step, batch_ns, update_ns, batch_ns + update_ns, *pb.shape,
                     pb.num_real_graphs, int(new)))
        pre = pb.batch.pre_pad_size
        pre_nodes[pre.nodes] += 1
        pre_edges[pre.edges] += 1
        real[pre.graphs] += 1

    columns = list(zip(*rows))
    aggregates = {name: summarize(columns[i + 1]).as_dict() for i, name in enumerate(TIME_FIELDS)}

    def tally(counter):
        return {str(k): v for k, v in sorted(counter.items())}

    entry = {
        "iteration": iteration,
        "seed": seed,
        "budget": None if budget is None else list(budget.as_tuple()),
        "recompilation_count": registry.recompilations,
        "compile_count": registry.compile_count,
        "compile_events": [list(r) for r in registry.event_rows()],
        "aggregates": aggregates,
        "histograms": {"pre_pad_nodes": tally(pre_nodes), "pre_pad_edges": tally(pre_edges),
                       "real_graphs": tally(real)},
        "steps_csv": f"steps_{iteration}.csv",
    }
    return {"entry": entry, "rows": rows}


def _run_iteration_job(args):
    config, iteration = args
    return run_iteration(config, iteration)


def write_steps_csv(path, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(STEPS_HEADER)
        writer.writerows(rows)


def run_experiment(config: ExperimentConfig) -> dict:
    """Run every iteration and write ``report.json`` plus ``steps_<i>.csv``.

    Raises GraphExceedsBudget from the dynamic batcher unchanged.
    """
    started = datetime.now(timezone.utc)
    t0 = time.perf_counter()
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if config.jobs > 1 and config.iterations > 1:
        with ProcessPoolExecutor(max_workers=min(config.jobs, config.iterations)) as pool:
            results = list(pool.map(_run_iteration_job,
                                    [(config, i) for i in range(config.iterations)]))
    else:
        dataset = read_dataset(config.dataset_path)
        results = [run_iteration(config, i, dataset) for i in range(config.iterations)]

    entries = []
    for result in results:
        write_steps_csv(out_dir / result["entry"]["steps_csv"], result["rows"])
        entries.append(result["entry"])

    clock_info = time.get_clock_info("perf_counter")
    report = {
        "format": REPORT_FORMAT,
        "config": {**config.echo(), "dataset_sha256": file_sha256(config.dataset_path)},
        "budget": entries[0]["budget"],
        "recompilation_count": max(e["recompilation_count"] for e in entries),
        "iterations": entries,
        "wall_clock": {
            "clock": "perf_counter_ns",
            "monotonic": clock_info.monotonic,
            "resolution_s": clock_info.resolution,
            "backend": _backend.name,
            "started": started.isoformat(),
            "elapsed_s": time.perf_counter() - t0,
        },
    }
    with open(out_dir / "report.json", "w") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    return report


def load_report(path) -> dict:
    path = Path(path)
    if path.is_dir():
        path = path / "report.json"
    with open(path) as fh:
        report = json.load(fh)
    if report.get("format") != REPORT_FORMAT:
        raise ValueError(f"{path} is not a {REPORT_FORMAT} file")
    return report


def strip_wall_clock(report: dict) -> dict:
    """Copy of ``report`` without any field that depends on the wall clock."""
    report = copy.deepcopy(report)
    report.pop("wall_clock", None)
    for entry in report.get("iterations", []):
        for name in WALL_CLOCK_TIME_FIELDS:
            entry["aggregates"].pop(name, None)
    return report


def default_output_dir(explicit: Optional[str]) -> str:
    return explicit or os.environ.get("GRAPHBATCH_OUTPUT_DIR") or "graphbatch-out"
