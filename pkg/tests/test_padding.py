import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from graphbatch import (
    PaddingBudget,
    make_dummy_graph,
    make_graph,
    next_multiple_of_64,
    next_power_of_two,
    pad_nearest_multiple_of_64,
    pad_nearest_power_of_two,
    pad_to_target,
)
from graphbatch.errors import BudgetExceeded, DomainError, InvalidDummy


def graphs_with_sums(nodes, edges, count):
    """``count`` graphs (count >= 1) whose totals are (nodes, edges)."""
    out = []
    for i in range(count):
        n = nodes // count + (1 if i < nodes % count else 0)
        e = edges // count + (1 if i < edges % count else 0)
        if e and not n:
            raise ValueError("cannot place edges on an empty graph")
        out.append(make_graph(n, [0] * e, [0] * e))
    return out


def totals(graphs):
    return sum(g.num_nodes for g in graphs), sum(g.num_edges for g in graphs), len(graphs)


@pytest.mark.parametrize("s, expected", [(512, 512), (544, 1024), (1, 1), (3, 4), (1025, 2048)])
def test_next_power_of_two(s, expected):
    assert next_power_of_two(s) == expected


def test_next_power_of_two_rejects_zero():
    with pytest.raises(DomainError):
        next_power_of_two(0)


@pytest.mark.parametrize("s, expected", [(544, 576), (576, 576), (0, 64), (1, 64), (65, 128)])
def test_next_multiple_of_64(s, expected):
    assert next_multiple_of_64(s) == expected


def brute_pow2(s):
    p = 1
    while p < s:
        p *= 2
    return p


@given(st.integers(1, 10**7))
def test_rounding_against_brute_force(s):
    assert next_power_of_two(s) == brute_pow2(s)
    assert next_multiple_of_64(s) == min(m for m in range(64, s + 65, 64) if m >= s)


@given(st.integers(1, 10**6), st.integers(1, 10**6))
def test_rounding_idempotent_and_monotone(a, b):
    for f in (next_power_of_two, next_multiple_of_64):
        assert f(f(a)) == f(a)
        if a <= b:
            assert f(a) <= f(b)


@given(st.integers(64, 10**6), st.integers(64, 10**6))
def test_bucket_refinement(a, b):
    # Equal multiple-of-64 buckets imply equal power-of-two buckets.
    if next_multiple_of_64(a) == next_multiple_of_64(b):
        assert next_power_of_two(a) == next_power_of_two(b)


def test_make_dummy_graph():
    g = make_dummy_graph(28, 212)
    assert (g.num_nodes, g.num_edges) == (28, 212)
    assert not g.senders.any() and not g.receivers.any()
    assert (make_dummy_graph(0, 0).num_nodes, make_dummy_graph(0, 0).num_edges) == (0, 0)
    g = make_dummy_graph(5, 0)
    assert (g.num_nodes, g.num_edges) == (5, 0)
    with pytest.raises(InvalidDummy):
        make_dummy_graph(0, 3)


def test_dummy_features_are_zero():
    g = make_dummy_graph(3, 2, node_feature_dim=4, edge_feature_dim=2)
    assert g.node_features.shape == (3, 4) and not g.node_features.any()
    assert g.edge_features.shape == (2, 2) and not g.edge_features.any()


def test_pad_to_target_single_dummy():
    graphs = graphs_with_sums(8, 16, 2)
    padded = pad_to_target(graphs, PaddingBudget(10, 20, 3))
    assert len(padded) == 3
    assert (padded[-1].num_nodes, padded[-1].num_edges) == (2, 4)
    assert totals(padded) == (10, 20, 3)


def test_pad_to_target_zero_padding():
    padded = pad_to_target(graphs_with_sums(10, 20, 2), PaddingBudget(10, 20, 4))
    assert [(g.num_nodes, g.num_edges) for g in padded[2:]] == [(0, 0), (0, 0)]
    assert totals(padded) == (10, 20, 4)


@pytest.mark.parametrize("graphs", [
    graphs_with_sums(11, 5, 1),
    graphs_with_sums(5, 21, 1),
    graphs_with_sums(3, 3, 3),
])
def test_pad_to_target_budget_exceeded(graphs):
    with pytest.raises(BudgetExceeded):
        pad_to_target(graphs, PaddingBudget(10, 20, 3))


def test_pad_to_target_keeps_features():
    graphs = [make_graph(2, [0], [1], node_features=np.ones((2, 1)), edge_features=np.ones((1, 3)))]
    padded = pad_to_target(graphs, PaddingBudget(6, 4, 3))
    assert padded[1].node_features.shape == (4, 1)
    assert padded[1].edge_features.shape == (3, 3)
    assert padded[2].node_features.shape[0] == 0


@pytest.mark.parametrize("nodes, edges, count, dummy, total", [
    (100, 300, 1, (28, 212), (128, 512)),
    (128, 512, 2, (0, 0), (128, 512)),
    (9, 18, 3, (7, 14), (16, 32)),
    (5, 0, 2, (3, 0), (8, 0)),
])
def test_pad_nearest_power_of_two(nodes, edges, count, dummy, total):
    padded = pad_nearest_power_of_two(graphs_with_sums(nodes, edges, count))
    assert len(padded) == count + 1
    assert (padded[-1].num_nodes, padded[-1].num_edges) == dummy
    assert totals(padded)[:2] == total


@pytest.mark.parametrize("nodes, edges, total", [
    (100, 300, (128, 320)),
    (64, 128, (64, 128)),
    (527, 8432, (576, 8448)),
])
def test_pad_nearest_multiple_of_64(nodes, edges, total):
    padded = pad_nearest_multiple_of_64(graphs_with_sums(nodes, edges, 3))
    assert totals(padded)[:2] == total


def test_full_node_bucket_with_edge_padding_takes_next_bucket():
    # 128 nodes already a power of two but edges need padding: the dummy
    # needs a node for its self-loops.
    padded = pad_nearest_power_of_two(graphs_with_sums(128, 300, 2))
    assert totals(padded)[:2] == (256, 512)
    padded = pad_nearest_multiple_of_64(graphs_with_sums(64, 100, 2))
    assert totals(padded)[:2] == (128, 128)


@given(st.integers(1, 5000), st.integers(0, 50_000), st.integers(1, 40))
def test_rounded_padding_exactness(nodes, edges, count):
    count = min(count, nodes)
    graphs = graphs_with_sums(nodes, edges, count)
    p2 = totals(pad_nearest_power_of_two(graphs))
    m64 = totals(pad_nearest_multiple_of_64(graphs))
    assert p2[2] == m64[2] == count + 1
    assert p2[1] == (next_power_of_two(edges) if edges else 0)
    assert m64[1] == next_multiple_of_64(edges)
    assert p2[0] & (p2[0] - 1) == 0 and m64[0] % 64 == 0
    pad_e2 = p2[1] - edges
    pad_e64 = m64[1] - edges
    assert p2[0] == (next_power_of_two(nodes) if not pad_e2 or next_power_of_two(nodes) > nodes
                     else next_power_of_two(nodes + 1))
    assert m64[0] == (next_multiple_of_64(nodes) if not pad_e64 or next_multiple_of_64(nodes) > nodes
                      else next_multiple_of_64(nodes + 1))


@given(st.integers(0, 500), st.integers(0, 2000), st.integers(1, 10),
       st.integers(0, 300), st.integers(0, 3000), st.integers(0, 8))
def test_pad_to_target_exactness(nodes, edges, count, extra_n, extra_e, extra_g):
    if edges and not nodes:
        nodes = 1
    count = min(count, max(nodes, 1))
    graphs = graphs_with_sums(nodes, edges, count)
    budget = PaddingBudget(max(nodes + extra_n, 1), edges + extra_e, count + 1 + extra_g)
    pad_n = budget.node_target - nodes
    pad_e = budget.edge_target - edges
    if pad_e and not pad_n:
        with pytest.raises(InvalidDummy):
            pad_to_target(graphs, budget)
        return
    padded = pad_to_target(graphs, budget)
    assert totals(padded) == budget.as_tuple()
    for g in padded[count:]:
        assert not g.senders.any() and not g.receivers.any()


def test_budget_validation():
    with pytest.raises(ValueError):
        PaddingBudget(0, 10, 4)
    with pytest.raises(ValueError):
        PaddingBudget(10, 10, 1)
