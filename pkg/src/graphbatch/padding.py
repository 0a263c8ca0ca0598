"""Padding targets and dummy-graph padding.

Every pad operation appends one dummy graph that absorbs the missing
nodes and edges. Dummy edges are self-loops on the dummy's node 0 and any
feature rows are zeros, so padding never touches real segments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import BudgetExceeded, DomainError, InvalidDummy
from .graph import Graph


@dataclass(frozen=True)
class PaddingBudget:
    """Fixed (nodes, edges, graphs) shape a batch is padded to."""

    node_target: int
    edge_target: int
    graph_target: int

    def __post_init__(self):
        if self.node_target < 1 or self.edge_target < 0 or self.graph_target < 2:
            raise ValueError(
                f"invalid budget {self.as_tuple()}: need nodes >= 1, edges >= 0, graphs >= 2")

    def as_tuple(self):
        return (self.node_target, self.edge_target, self.graph_target)


def next_power_of_two(s: int) -> int:
    if s < 1:
        raise DomainError(f"next_power_of_two needs s >= 1, got {s}")
    return 1 << (int(s) - 1).bit_length()


def next_multiple_of_64(s: int) -> int:
    s = max(int(s), 1)
    return -(-s // 64) * 64


def _feature_widths(graphs: Sequence[Graph]):
    """Widths for dummy feature rows, or None where any member lacks them."""
    def width(attr):
        arrays = [getattr(g, attr) for g in graphs]
        if not arrays or any(a is None for a in arrays):
            return None
        for a in arrays:
            if a.shape[0]:
                return a.shape[1]
        return arrays[0].shape[1]
    return width("node_features"), width("edge_features")


def make_dummy_graph(pad_nodes: int, pad_edges: int, node_feature_dim: Optional[int] = None,
                     edge_feature_dim: Optional[int] = None) -> Graph:
    if pad_nodes < 0 or pad_edges < 0:
        raise InvalidDummy(f"negative padding ({pad_nodes}, {pad_edges})")
    if pad_edges > 0 and pad_nodes == 0:
        raise InvalidDummy(f"{pad_edges} padding edges need at least one padding node")
    loops = np.zeros(pad_edges, dtype=np.int64)
    loops.flags.writeable = False
    nf = None if node_feature_dim is None else np.zeros((pad_nodes, node_feature_dim))
    ef = None if edge_feature_dim is None else np.zeros((pad_edges, edge_feature_dim))
    return Graph(pad_nodes, loops, loops, nf, ef, validate=False)


def _sums(graphs):
    return sum(g.num_nodes for g in graphs), sum(g.num_edges for g in graphs)


def pad_to_target(graphs: Sequence[Graph], budget: PaddingBudget) -> list:
    """Pad so totals equal ``budget`` exactly in nodes, edges and graph count.

    One dummy carries all missing nodes/edges, then empty dummies fill the
    graph count.
    """
    graphs = list(graphs)
    nodes, edges = _sums(graphs)
    if (nodes > budget.node_target or edges > budget.edge_target
            or len(graphs) > budget.graph_target - 1):
        raise BudgetExceeded(
            f"batch ({nodes}, {edges}, {len(graphs)}) does not fit budget {budget.as_tuple()} "
            f"with a dummy-graph slot")
    nf_dim, ef_dim = _feature_widths(graphs)
    padded = graphs + [make_dummy_graph(budget.node_target - nodes, budget.edge_target - edges,
                                        nf_dim, ef_dim)]
    extra = budget.graph_target - len(padded)
    if extra:
        empty = make_dummy_graph(0, 0, nf_dim, ef_dim)
        padded.extend([empty] * extra)
    return padded


def _pad_rounded(graphs: Sequence[Graph], round_nodes: Callable[[int], int],
                 round_edges: Callable[[int], int]) -> list:
    graphs = list(graphs)
    nodes, edges = _sums(graphs)
    pad_nodes = round_nodes(nodes) - nodes
    pad_edges = round_edges(edges) - edges
    if pad_edges and not pad_nodes:
        # Dummy edges need a node to loop on; take one more node bucket.
        pad_nodes = round_nodes(nodes + 1) - nodes
    nf_dim, ef_dim = _feature_widths(graphs)
    return graphs + [make_dummy_graph(pad_nodes, pad_edges, nf_dim, ef_dim)]


def pad_nearest_power_of_two(graphs: Sequence[Graph]) -> list:
    """Append a dummy so node and edge totals reach the next powers of two.

    An edge total of zero stays zero.
    """
    return _pad_rounded(graphs, next_power_of_two,
                        lambda e: next_power_of_two(e) if e else 0)


def pad_nearest_multiple_of_64(graphs: Sequence[Graph]) -> list:
    return _pad_rounded(graphs, next_multiple_of_64, next_multiple_of_64)
