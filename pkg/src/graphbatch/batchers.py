"""Static and dynamic batching over an endlessly cycling graph stream."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

import numpy as np

from . import _backend
from .compile_sim import ShapeKey
from .errors import EmptyDataset, GraphExceedsBudget
from .graph import Graph, GraphBatch, batch_graphs
from .padding import (
    PaddingBudget,
    next_multiple_of_64,
    pad_nearest_multiple_of_64,
    pad_nearest_power_of_two,
    pad_to_target,
)

DEFAULT_SAMPLE_SIZE = 1000


class Algorithm(str, enum.Enum):
    STATIC64 = "static64"
    STATIC2N = "static2n"
    STATIC_CONSTANT = "static-constant"
    DYNAMIC = "dynamic"


@dataclass(frozen=True, eq=False)
class PaddedBatch:
    batch: GraphBatch
    shape: ShapeKey
    algorithm: Algorithm
    step_index: int
    indices: np.ndarray  # dataset positions of the real graphs, in order

    @property
    def num_real_graphs(self) -> int:
        return self.batch.num_real_graphs


class GraphStream:
    """Infinite stream over ``dataset``; each epoch is a seeded permutation.

    The same (dataset, seed) always yields the same sequence. Items are
    handed out as dataset positions (:meth:`take`) or graphs (iteration).
    """

    def __init__(self, dataset: Sequence[Graph], seed: int):
        self.dataset = tuple(dataset)
        if not self.dataset:
            raise EmptyDataset("cannot stream an empty dataset")
        self.seed = int(seed)
        self.node_counts = np.fromiter((g.num_nodes for g in self.dataset), np.int64, len(self.dataset))
        self.edge_counts = np.fromiter((g.num_edges for g in self.dataset), np.int64, len(self.dataset))
        self._epoch = 0
        self._order = self._permutation(0)
        self._pos = 0
        self.consumed = 0

    def _permutation(self, epoch: int) -> np.ndarray:
        rng = np.random.default_rng([self.seed % 2**64, epoch])
        return rng.permutation(len(self.dataset))

    def _read(self, k: int, advance: bool) -> np.ndarray:
        epoch, order, pos = self._epoch, self._order, self._pos
        parts = []
        while k > 0:
            if pos == len(order):
                epoch += 1
                order = self._permutation(epoch)
                pos = 0
            chunk = order[pos:pos + k]
            parts.append(chunk)
            pos += len(chunk)
            k -= len(chunk)
        out = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
        if advance:
            self._epoch, self._order, self._pos = epoch, order, pos
            self.consumed += len(out)
        return out

    def take(self, k: int) -> np.ndarray:
        """Consume the next ``k`` items, returned as dataset positions."""
        return self._read(k, advance=True)

    def peek(self, k: int) -> np.ndarray:
        """Dataset positions of the next ``k`` items, without consuming them."""
        return self._read(k, advance=False)

    def __iter__(self):
        return self

    def __next__(self) -> Graph:
        return self.dataset[int(self.take(1)[0])]


def cycle_shuffle_stream(dataset: Sequence[Graph], seed: int) -> GraphStream:
    return GraphStream(dataset, seed)


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def estimate_padding_budget(stream: GraphStream, batch_size: int,
                            sample_size: int = DEFAULT_SAMPLE_SIZE) -> PaddingBudget:
    """Budget from the mean graph size over the next ``sample_size`` items.

    Each target is mean size times ``batch_size``, rounded up to a
    multiple of 64. The stream is not advanced.
    """
    if batch_size < 2:
        raise ValueError(f"batch_size must be >= 2, got {batch_size}")
    if sample_size < 1:
        raise ValueError(f"sample_size must be >= 1, got {sample_size}")
    sample = stream.peek(sample_size)
    nodes = int(stream.node_counts[sample].sum())
    edges = int(stream.edge_counts[sample].sum())
    # Exact integer ceiling first: rounding up to 64 commutes with it.
    return PaddingBudget(
        next_multiple_of_64(_ceil_div(nodes * batch_size, sample_size)),
        next_multiple_of_64(_ceil_div(edges * batch_size, sample_size)),
        batch_size,
    )


def scan_max_budget(dataset: Sequence[Graph], batch_size: int,
                    constant_factor: str = "minus-one") -> PaddingBudget:
    """Constant budget from the largest graph in the dataset.

    The per-graph maxima (nodes and edges independently) are multiplied by
    the number of real graphs per batch (``batch_size - 1``, or
    ``batch_size`` with ``constant_factor="full"``) and rounded up to a
    multiple of 64.
    """
    if not dataset:
        raise EmptyDataset("cannot scan an empty dataset")
    if batch_size < 2:
        raise ValueError(f"batch_size must be >= 2, got {batch_size}")
    if constant_factor == "minus-one":
        factor = batch_size - 1
    elif constant_factor == "full":
        factor = batch_size
    else:
        raise ValueError(f"constant_factor must be 'full' or 'minus-one', got {constant_factor!r}")
    max_nodes = max(g.num_nodes for g in dataset)
    max_edges = max(g.num_edges for g in dataset)
    return PaddingBudget(next_multiple_of_64(max_nodes * factor),
                         next_multiple_of_64(max_edges * factor),
                         batch_size)


def _assemble(indices: np.ndarray, padded: list, algorithm: Algorithm,
              step: int) -> PaddedBatch:
    batch = batch_graphs(padded, num_real_graphs=len(indices))
    shape = ShapeKey(batch.merged.num_nodes, batch.merged.num_edges, len(padded))
    indices = indices.copy()
    indices.flags.writeable = False
    return PaddedBatch(batch, shape, algorithm, step, indices)


StaticMode = Union[str, PaddingBudget]


def static_batcher(stream: GraphStream, batch_size: int, mode: StaticMode = "pow2") -> Iterator[PaddedBatch]:
    """Take ``batch_size - 1`` graphs per step and pad the totals.

    ``mode`` is ``"pow2"``, ``"mult64"``, or a :class:`PaddingBudget` for
    constant padding (whose graph target must equal ``batch_size``).
    """
    if batch_size < 2:
        raise ValueError(f"batch_size must be >= 2, got {batch_size}")
    if isinstance(mode, PaddingBudget):
        if mode.graph_target != batch_size:
            raise ValueError(f"constant budget graph target {mode.graph_target} != batch_size {batch_size}")
        algorithm = Algorithm.STATIC_CONSTANT
        budget = mode
        pad = lambda graphs: pad_to_target(graphs, budget)  # noqa: E731
    elif mode == "pow2":
        algorithm, pad = Algorithm.STATIC2N, pad_nearest_power_of_two
    elif mode == "mult64":
        algorithm, pad = Algorithm.STATIC64, pad_nearest_multiple_of_64
    else:
        raise ValueError(f"unknown static mode {mode!r}")
    return _static(stream, batch_size, pad, algorithm)


def _static(stream, batch_size, pad, algorithm):
    dataset = stream.dataset
    step = 0
    while True:
        indices = stream.take(batch_size - 1)
        graphs = [dataset[i] for i in indices.tolist()]
        yield _assemble(indices, pad(graphs), algorithm, step)
        step += 1


def dynamic_batcher(stream: GraphStream, budget: PaddingBudget,
                    chunk_size: int = 4096) -> Iterator[PaddedBatch]:
    """Add graphs one at a time until the next would overflow ``budget``.

    The overflowing graph opens the next batch. Every batch is padded to the
    budget exactly, so a run sees a single shape. A graph that cannot fit
    even alone raises :class:`GraphExceedsBudget` once the batches before
    it have been yielded.

    The stream is read ahead in chunks of ``chunk_size`` items.
    """
    return _dynamic(stream, budget, max(chunk_size, 2 * budget.graph_target))


def _dynamic(stream, budget, chunk_size):
    dataset = stream.dataset
    node_target, edge_target, graph_target = budget.as_tuple()
    pending = np.zeros(0, dtype=np.int64)
    step = 0
    while True:
        window = np.concatenate([pending, stream.take(chunk_size)])
        ends, bad = _backend.kernels.dynamic_split(
            stream.node_counts[window], stream.edge_counts[window],
            node_target, edge_target, graph_target - 1)
        start = 0
        for end in ends.tolist():
            indices = window[start:end]
            graphs = [dataset[i] for i in indices.tolist()]
            yield _assemble(indices, pad_to_target(graphs, budget), Algorithm.DYNAMIC, step)
            step += 1
            start = end
        if bad >= 0:
            pos = int(window[bad])
            size = (int(stream.node_counts[pos]), int(stream.edge_counts[pos]))
            raise GraphExceedsBudget(
                f"graph with {size[0]} nodes / {size[1]} edges does not fit padding budget "
                f"{budget.as_tuple()}; restart with a larger budget",
                graph_size=size, budget=budget, position=pos)
        pending = window[start:]


def make_batcher(algorithm, stream: GraphStream, batch_size: int, *,
                 sample_size: int = DEFAULT_SAMPLE_SIZE, constant_factor: str = "minus-one"):
    """Build the batcher for ``algorithm``; returns ``(iterator, budget)``.

    ``budget`` is None for the rounding static modes.
    """
    algorithm = Algorithm(algorithm)
    if algorithm is Algorithm.STATIC2N:
        return static_batcher(stream, batch_size, "pow2"), None
    if algorithm is Algorithm.STATIC64:
        return static_batcher(stream, batch_size, "mult64"), None
    if algorithm is Algorithm.STATIC_CONSTANT:
        budget = scan_max_budget(stream.dataset, batch_size, constant_factor)
        return static_batcher(stream, batch_size, budget), budget
    budget = estimate_padding_budget(stream, batch_size, sample_size)
    return dynamic_batcher(stream, budget), budget
