# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Mirrors ``_kernels_py`` exactly."""

import numpy as np

from libc.stdint cimport int64_t


def offset_indices(indices, edge_counts, node_counts, int sign=1):
    cdef const int64_t[::1] idx = np.ascontiguousarray(indices, dtype=np.int64)
    cdef const int64_t[::1] ec = np.ascontiguousarray(edge_counts, dtype=np.int64)
    cdef const int64_t[::1] nc = np.ascontiguousarray(node_counts, dtype=np.int64)
    cdef Py_ssize_t nseg = ec.shape[0]
    cdef Py_ssize_t total = idx.shape[0]
    cdef Py_ssize_t seg, k, pos = 0
    cdef int64_t offset = 0, shift
    out_arr = np.empty(total, dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    if nc.shape[0] != nseg:
        raise ValueError("edge_counts and node_counts differ in length")
    for seg in range(nseg):
        if pos + ec[seg] > total:
            raise ValueError("edge_counts do not cover indices")
        shift = sign * offset
        for k in range(pos, pos + ec[seg]):
            out[k] = idx[k] + shift
        pos += ec[seg]
        offset += nc[seg]
    if pos != total:
        raise ValueError("edge_counts do not cover indices")
    return out_arr


def dynamic_split(nodes, edges, int64_t node_cap, int64_t edge_cap, int64_t graph_cap):
    cdef const int64_t[::1] nv = np.ascontiguousarray(nodes, dtype=np.int64)
    cdef const int64_t[::1] ev = np.ascontiguousarray(edges, dtype=np.int64)
    cdef Py_ssize_t count = nv.shape[0]
    cdef Py_ssize_t i, nends = 0
    cdef Py_ssize_t bad = -1
    cdef int64_t acc_n = 0, acc_e = 0, acc_g = 0, n, e, tn, te
    ends_arr = np.empty(count, dtype=np.int64)
    cdef int64_t[::1] ends = ends_arr
    for i in range(count):
        n = nv[i]
        e = ev[i]
        tn = acc_n + n
        te = acc_e + e
        if tn > node_cap or te > edge_cap or acc_g + 1 > graph_cap or (tn == node_cap and te < edge_cap):
            if acc_g > 0:
                ends[nends] = i
                nends += 1
            if n > node_cap or e > edge_cap or (n == node_cap and e < edge_cap):
                bad = i
                break
            acc_n = n
            acc_e = e
            acc_g = 1
        else:
            acc_n = tn
            acc_e = te
            acc_g += 1
    return ends_arr[:nends].copy(), bad
