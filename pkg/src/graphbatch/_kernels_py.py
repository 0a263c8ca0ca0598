"""Reference implementations of the hot kernels.

Used when the compiled ``_kernels`` extension is unavailable, and as the
cross-check for it in the test suite. Signatures and results must match
``_kernels.pyx`` exactly.
"""

import numpy as np


def offset_indices(indices, edge_counts, node_counts, sign=1):
    """Shift each segment's indices by ``sign`` times its node offset.

    Segment ``i`` covers ``edge_counts[i]`` consecutive entries of
    ``indices``; its offset is the number of nodes in segments ``< i``.
    Returns a new int64 array.
    """
    indices = np.asarray(indices, dtype=np.int64)
    edge_counts = np.asarray(edge_counts, dtype=np.int64)
    node_counts = np.asarray(node_counts, dtype=np.int64)
    if node_counts.shape[0] != edge_counts.shape[0]:
        raise ValueError("edge_counts and node_counts differ in length")
    if indices.shape[0] != int(edge_counts.sum()):
        raise ValueError("edge_counts do not cover indices")
    offsets = np.zeros(node_counts.shape[0], dtype=np.int64)
    np.cumsum(node_counts[:-1], out=offsets[1:])
    return indices + sign * np.repeat(offsets, edge_counts)


def dynamic_split(nodes, edges, node_cap, edge_cap, graph_cap):
    """Greedy budget scan over a run of graph sizes.

    Graphs are accumulated while the running sums stay within
    ``(node_cap, edge_cap, graph_cap)`` and remain paddable (a run with
    exactly ``node_cap`` nodes needs exactly ``edge_cap`` edges). When the
    next graph would break either rule the accumulated run is closed and
    the graph starts the next one.

    Returns ``(ends, bad)``: exclusive end positions of every closed run,
    and the position of the first graph that alone does not fit
    (``-1`` if none). Scanning stops at ``bad``; the run before it is
    closed. The trailing open run is not reported.
    """
    ends = []
    bad = -1
    acc_n = acc_e = acc_g = 0
    nodes = [int(v) for v in nodes]
    edges = [int(v) for v in edges]
    for i in range(len(nodes)):
        n = nodes[i]
        e = edges[i]
        tn = acc_n + n
        te = acc_e + e
        # A run that fills the node cap must also fill the edge cap, or
        # the padding edges would have no node to attach to.
        if tn > node_cap or te > edge_cap or acc_g + 1 > graph_cap or (tn == node_cap and te < edge_cap):
            if acc_g > 0:
                ends.append(i)
            if n > node_cap or e > edge_cap or (n == node_cap and e < edge_cap):
                bad = i
                break
            acc_n, acc_e, acc_g = n, e, 1
        else:
            acc_n = tn
            acc_e = te
            acc_g += 1
    return np.asarray(ends, dtype=np.int64), bad
