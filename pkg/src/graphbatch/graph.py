"""Graphs, batches, and lossless batch assembly.

A batch is one disconnected super-graph: member node sets are laid out
back to back and each member's sender/receiver indices are shifted by the
number of nodes that precede it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from . import _backend
from .errors import CorruptBatch, EmptyBatch, IndexOutOfRange, LengthMismatch

_EMPTY_INDEX = np.zeros(0, dtype=np.int64)
_EMPTY_INDEX.flags.writeable = False


def _frozen_index(values) -> np.ndarray:
    if isinstance(values, np.ndarray) and values.dtype == np.int64 and not values.flags.writeable:
        return values
    arr = np.array(values, dtype=np.int64).reshape(-1)
    arr.flags.writeable = False
    return arr


def _frozen_features(values, rows: int, what: str) -> Optional[np.ndarray]:
    if values is None:
        return None
    arr = np.array(values, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1) if arr.size else arr.reshape(0, 0)
    if arr.ndim != 2 or arr.shape[0] != rows:
        raise LengthMismatch(f"{what} has {arr.shape[0] if arr.ndim else 0} rows, expected {rows}")
    arr.flags.writeable = False
    return arr


def _features_equal(a: Optional[np.ndarray], b: Optional[np.ndarray]) -> bool:
    if a is None or b is None:
        return a is None and b is None
    if a.shape[0] == 0 and b.shape[0] == 0:
        # A zero-row payload has no recoverable width.
        return True
    return a.shape == b.shape and bool(np.array_equal(a, b))


class Graph:
    """An immutable directed graph with optional node/edge feature rows.

    Build validated instances with :func:`make_graph`.
    """

    __slots__ = ("num_nodes", "num_edges", "senders", "receivers", "node_features", "edge_features")

    def __init__(self, num_nodes, senders=(), receivers=(), node_features=None, edge_features=None,
                 *, validate: bool = True):
        senders = _frozen_index(senders)
        receivers = _frozen_index(receivers)
        num_nodes = int(num_nodes)
        if validate:
            if num_nodes < 0:
                raise LengthMismatch(f"num_nodes must be >= 0, got {num_nodes}")
            if senders.shape[0] != receivers.shape[0]:
                raise LengthMismatch(
                    f"{senders.shape[0]} senders but {receivers.shape[0]} receivers")
            if senders.shape[0]:
                lo = min(int(senders.min()), int(receivers.min()))
                hi = max(int(senders.max()), int(receivers.max()))
                if lo < 0 or hi >= num_nodes:
                    bad = hi if hi >= num_nodes else lo
                    raise IndexOutOfRange(f"node index {bad} outside [0, {num_nodes})")
        set_ = object.__setattr__
        set_(self, "num_nodes", num_nodes)
        set_(self, "num_edges", int(senders.shape[0]))
        set_(self, "senders", senders)
        set_(self, "receivers", receivers)
        set_(self, "node_features", _frozen_features(node_features, num_nodes, "node_features"))
        set_(self, "edge_features", _frozen_features(edge_features, int(senders.shape[0]), "edge_features"))

    def __setattr__(self, key, value):
        raise AttributeError("Graph is immutable")

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.num_nodes == other.num_nodes
            and self.num_edges == other.num_edges
            and np.array_equal(self.senders, other.senders)
            and np.array_equal(self.receivers, other.receivers)
            and _features_equal(self.node_features, other.node_features)
            and _features_equal(self.edge_features, other.edge_features)
        )

    __hash__ = None

    def __repr__(self):
        return f"Graph(num_nodes={self.num_nodes}, num_edges={self.num_edges})"


class SizeTriple(NamedTuple):
    nodes: int
    edges: int
    graphs: int


def make_graph(num_nodes, senders, receivers, node_features=None, edge_features=None) -> Graph:
    """Validate and build a :class:`Graph`.

    Raises IndexOutOfRange for indices outside ``[0, num_nodes)`` and
    LengthMismatch when senders/receivers or feature rows disagree.
    """
    return Graph(num_nodes, senders, receivers, node_features, edge_features)


def graph_size(g: Graph) -> SizeTriple:
    return SizeTriple(g.num_nodes, g.num_edges, 1)


@dataclass(frozen=True, eq=False)
class GraphBatch:
    graphs: tuple
    merged: Graph
    segment_node_counts: np.ndarray
    segment_edge_counts: np.ndarray
    num_real_graphs: int
    pre_pad_size: SizeTriple

    @property
    def num_graphs(self) -> int:
        return len(self.graphs)

    @property
    def real_graphs(self) -> tuple:
        return self.graphs[: self.num_real_graphs]


def _concat_features(parts):
    if any(p is None for p in parts):
        return None
    widths = {p.shape[1] for p in parts if p.shape[0]}
    if len(widths) > 1:
        raise LengthMismatch(f"feature widths differ across batch members: {sorted(widths)}")
    width = widths.pop() if widths else (parts[0].shape[1] if parts else 0)
    return np.concatenate([p if p.shape[0] else np.zeros((0, width)) for p in parts])


def batch_graphs(graphs: Sequence[Graph], num_real_graphs: Optional[int] = None) -> GraphBatch:
    """Merge ``graphs`` into one super-graph.

    ``num_real_graphs`` marks how many leading members are real (the rest
    are padding); it defaults to all of them and only affects
    ``pre_pad_size``.
    """
    graphs = tuple(graphs)
    if not graphs:
        raise EmptyBatch("cannot batch an empty list of graphs")
    count = len(graphs)
    if num_real_graphs is None:
        num_real_graphs = count
    if not 0 <= num_real_graphs <= count:
        raise ValueError(f"num_real_graphs={num_real_graphs} outside [0, {count}]")

    node_counts = np.fromiter((g.num_nodes for g in graphs), dtype=np.int64, count=count)
    edge_counts = np.fromiter((g.num_edges for g in graphs), dtype=np.int64, count=count)
    kernels = _backend.kernels
    if count == 1:
        senders, receivers = graphs[0].senders, graphs[0].receivers
    else:
        senders = kernels.offset_indices(
            np.concatenate([g.senders for g in graphs]), edge_counts, node_counts)
        receivers = kernels.offset_indices(
            np.concatenate([g.receivers for g in graphs]), edge_counts, node_counts)

    merged = Graph(
        int(node_counts.sum()),
        senders,
        receivers,
        _concat_features([g.node_features for g in graphs]),
        _concat_features([g.edge_features for g in graphs]),
        validate=False,
    )
    node_counts.flags.writeable = False
    edge_counts.flags.writeable = False
    pre_pad = SizeTriple(
        int(node_counts[:num_real_graphs].sum()),
        int(edge_counts[:num_real_graphs].sum()),
        num_real_graphs,
    )
    return GraphBatch(graphs, merged, node_counts, edge_counts, num_real_graphs, pre_pad)


def unbatch(batch: GraphBatch) -> list:
    """Rebuild the member graphs from the merged super-graph alone."""
    merged = batch.merged
    node_counts = np.asarray(batch.segment_node_counts, dtype=np.int64)
    edge_counts = np.asarray(batch.segment_edge_counts, dtype=np.int64)
    if node_counts.shape != edge_counts.shape:
        raise CorruptBatch("segment node/edge count lists differ in length")
    if (node_counts < 0).any() or (edge_counts < 0).any():
        raise CorruptBatch("negative segment count")
    if int(node_counts.sum()) != merged.num_nodes or int(edge_counts.sum()) != merged.num_edges:
        raise CorruptBatch(
            f"segments total ({int(node_counts.sum())}, {int(edge_counts.sum())}) but merged graph "
            f"has ({merged.num_nodes}, {merged.num_edges})")

    kernels = _backend.kernels
    senders = kernels.offset_indices(merged.senders, edge_counts, node_counts, -1)
    receivers = kernels.offset_indices(merged.receivers, edge_counts, node_counts, -1)
    edge_cuts = np.cumsum(edge_counts)[:-1]
    node_cuts = np.cumsum(node_counts)[:-1]
    sender_parts = np.split(senders, edge_cuts)
    receiver_parts = np.split(receivers, edge_cuts)
    nf_parts = np.split(merged.node_features, node_cuts) if merged.node_features is not None else None
    ef_parts = np.split(merged.edge_features, edge_cuts) if merged.edge_features is not None else None

    out = []
    for i, n in enumerate(node_counts.tolist()):
        try:
            out.append(Graph(
                n, sender_parts[i], receiver_parts[i],
                None if nf_parts is None else nf_parts[i],
                None if ef_parts is None else ef_parts[i],
            ))
        except (IndexOutOfRange, LengthMismatch) as exc:
            raise CorruptBatch(f"segment {i}: {exc}") from exc
    return out
