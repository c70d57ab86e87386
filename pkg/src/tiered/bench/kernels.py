"""Compiled workload loops, one per workload kind, for tiered vectors and the array baseline.

Each loop draws positions from the shared LCG so every structure sees the
same op stream for a given seed; each returns a checksum so the work cannot
be optimized away.
"""
import numpy as np

from .. import _ops
from .._layout import hot
from .._memops import memcopy, memmove
from ..positions import lcg_pos


@hot
def tv_access(S, ctr, ops, state):
    n = S[0][2]
    acc = 0
    for _ in range(ops):
        state, p = lcg_pos(state, n)
        acc += _ops.get(S, ctr, p)
    return acc


@hot
def tv_dd_access(S, ctr, ops, state):
    n = S[0][2]
    acc = 0
    x = 0
    for _ in range(ops):
        state, stride = lcg_pos(state, n)
        p = (np.int64(x) + stride) % n
        x = _ops.get(S, ctr, p)
        acc += x
    return acc


@hot
def tv_range(S, ctr, ops, state, m, out):
    n = S[0][2]
    acc = 0
    for _ in range(ops // m):
        state, p = lcg_pos(state, n - m + 1)
        _ops.get_range(S, ctr, p, m, out)
        acc += out[m - 1]
    return acc


@hot
def tv_range_by_get(S, ctr, ops, state, m):
    """Same ranges as ``tv_range`` but read with one get per element."""
    n = S[0][2]
    acc = 0
    for _ in range(ops // m):
        state, p = lcg_pos(state, n - m + 1)
        for t in range(m):
            acc += _ops.get(S, ctr, p + t)
    return acc


@hot
def tv_insert(S, ctr, ops, state):
    for t in range(ops):
        state, p = lcg_pos(state, S[0][2] + 1)
        _ops.insert(S, ctr, p, t)
    return S[0][2]


@hot
def tv_insert_end(S, ctr, ops, state):
    for t in range(ops):
        _ops.push_back(S, ctr, t)
    return S[0][2]


@hot
def tv_delete(S, ctr, ops, state, fill):
    acc = 0
    for _ in range(ops):
        state, p = lcg_pos(state, S[0][2])
        acc += _ops.remove(S, ctr, p, fill)
    return acc


@hot
def tv_successor(S, ctr, ops, state):
    n = S[0][2]
    acc = 0
    for _ in range(ops):
        state, x = lcg_pos(state, n)
        acc += _ops.successor(S, ctr, x)
    return acc


@hot
def tv_extend(S, ctr, n):
    for t in range(n):
        _ops.push_back(S, ctr, t)


# contiguous array baseline: (array, live size); capacity = arr.shape[0]


@hot
def arr_access(arr, n, ops, state):
    acc = 0
    for _ in range(ops):
        state, p = lcg_pos(state, n)
        acc += arr[np.uint64(p)]  # unsigned: skips negative-index wraparound, as the tiered path does
    return acc


@hot
def arr_dd_access(arr, n, ops, state):
    acc = 0
    x = 0
    for _ in range(ops):
        state, stride = lcg_pos(state, n)
        x = arr[np.uint64((np.int64(x) + stride) % n)]
        acc += x
    return acc


@hot
def arr_range(arr, n, ops, state, m, out):
    acc = 0
    for _ in range(ops // m):
        state, p = lcg_pos(state, n - m + 1)
        memcopy(out, 0, arr, p, m)
        acc += out[m - 1]
    return acc


@hot
def arr_insert(arr, n, ops, state):
    for t in range(ops):
        state, p = lcg_pos(state, n + 1)
        memmove(arr, p + 1, p, n - p)
        arr[p] = t
        n += 1
    return n


@hot
def arr_insert_end(arr, n, ops, state):
    for t in range(ops):
        arr[n] = t
        n += 1
    return n


@hot
def arr_delete(arr, n, ops, state):
    acc = 0
    for _ in range(ops):
        state, p = lcg_pos(state, n)
        acc += arr[p]
        memmove(arr, p, p + 1, n - p - 1)
        n -= 1
    return acc


@hot
def arr_successor(arr, n, ops, state):
    acc = 0
    for _ in range(ops):
        state, x = lcg_pos(state, n)
        acc += np.searchsorted(arr[:n], arr.dtype.type(x))
    return acc


@hot
def arr_extend(arr, n):
    for t in range(n):
        arr[t] = t
