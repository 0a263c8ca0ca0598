"""Graph mini-batching: static and dynamic batchers, padding, and a
benchmark harness for comparing them."""

from ._backend import name as backend
from .batchers import (
    Algorithm,
    GraphStream,
    PaddedBatch,
    cycle_shuffle_stream,
    dynamic_batcher,
    estimate_padding_budget,
    make_batcher,
    scan_max_budget,
    static_batcher,
)
from .compile_sim import CostModel, ShapeKey, ShapeRegistry, record_step, recompilation_count, simulate_update_cost
from .datagen import GeneratorParams, aflow_like, dataset_summary, gen_dataset, qm9_like, read_dataset, write_dataset
from .graph import Graph, GraphBatch, SizeTriple, batch_graphs, graph_size, make_graph, unbatch
from .padding import (
    PaddingBudget,
    make_dummy_graph,
    next_multiple_of_64,
    next_power_of_two,
    pad_nearest_multiple_of_64,
    pad_nearest_power_of_two,
    pad_to_target,
)
from .stats import Histogram, TimingRecord, TTestResult, aggregate, histogram, speedup, students_t_test

__version__ = "0.1.0"
