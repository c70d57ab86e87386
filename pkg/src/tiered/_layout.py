"""Compiled storage primitives shared by all six layouts.

Every storage instance is a tuple of numpy arrays (the "state", ``S``) so one
set of compiled routines serves all layouts.  The layout and the power-of-two
flag are also encoded in the *type* of a zero-length marker array
(``S[MARK]``), so each layout gets its own specialization with the other
branches compiled away.  A node is addressed by an int64 reference whose meaning depends on
the layout: the index inside its level for flat layouts, a record handle in
``S[NODES]`` for the two pointer layouts.  Leaf references are level indices
for implicit and lazy layouts and arena block handles for the others.

Every primitive takes the probe counter array ``ctr`` explicitly; passing a
scratch array gives uncounted navigation.
"""
import numpy as np
from numba import njit, types
from numba.extending import overload

from .errors import StructureError

# Hot kernels run without the reference-counting runtime: with a dozen arrays
# in the state tuple, incref/decref traffic inside branchy loops otherwise
# costs more than the probes themselves.  They never allocate.
hot = njit(cache=True, _nrt=False)
# small helpers are inlined at the IR level: the state tuple is a large by-value struct
inline = njit(cache=True, _nrt=False, inline="always")

# layouts
ORIGINAL = 0
OPT_ORIGINAL = 1
IMPLICIT = 2
PACKED_IMPLICIT = 3
LAZY = 4
PACKED_LAZY = 5

# state tuple slots
HDR = 0
GEO = 1
OFFS = 2
BITS = 3
NODES = 4
LH = 5
LWORD = 6
LOFF = 7
ELEMS = 8
FREE = 9
STK = 10
SCR = 11
MARK = 12

# header fields
H_LAYOUT = 0
H_ROOT_OFF = 1
H_SIZE = 2
H_NALLOC = 3
H_FREE_TOP = 4
H_RELEASE = 5
H_TIERS = 6
H_POW2 = 7
HDR_LEN = 8

# geometry rows, one column per depth
G_W = 0
G_CAP = 1
G_MASK = 2
G_SH = 3
G_LSTART = 4
G_LSIZE = 5
G_FW = 6
G_WSTART = 7
GEO_ROWS = 8

# probe counters
C_OFF_R = 0
C_OFF_W = 1
C_CHILD = 2
C_LEAFH = 3
C_EL_R = 4
C_EL_W = 5
C_PAIR = 6
C_MOVED = 7
N_COUNTERS = 8

# enter modes
READ = 0
WRITE = 1
PEEK = 2

# marker dtype per layout code; marker ndim is 2 for power-of-two configs
MARK_DTYPES = (np.int8, np.int16, np.int32, np.uint8, np.uint16, np.uint32)
_MARK_CODES = {types.int8: 0, types.int16: 1, types.int32: 2, types.uint8: 3, types.uint16: 4, types.uint32: 5}


def marker(layout: int, pow2: bool) -> np.ndarray:
    return np.zeros((0,) * (2 if pow2 else 1), MARK_DTYPES[layout])


def layout_of(S):
    return int(S[HDR][H_LAYOUT])


def pow2_of(S):
    return bool(S[HDR][H_POW2])


@overload(layout_of, inline="always")
def _layout_of(S):
    code = _MARK_CODES[S.types[MARK].dtype]
    return lambda S: code


@overload(pow2_of, inline="always")
def _pow2_of(S):
    flag = S.types[MARK].ndim == 2
    return lambda S: flag


def bump(ctr, c, k):
    ctr[c] += k


@overload(bump, inline="always")
def _bump(ctr, c, k):
    # an int64 counter array counts; any other array type (NO_COUNT) compiles to nothing
    if isinstance(ctr, types.Array) and ctr.dtype == types.int64:
        def impl(ctr, c, k):
            ctr[c] += k
    else:
        def impl(ctr, c, k):
            pass
    return impl


def no_count() -> np.ndarray:
    """Counter argument that disables probe counting at compile time."""
    return np.zeros(N_COUNTERS, np.int32)


NULL48 = (1 << 48) - 1
MASK48 = np.uint64(NULL48)
SHIFT48 = np.uint64(48)


@inline
def modcap(S, x, d):
    geo = S[GEO]
    if pow2_of(S):
        return x & geo[G_MASK, d]
    return x % geo[G_CAP, d]


@inline
def divcap(S, x, d):
    geo = S[GEO]
    if pow2_of(S):
        return x >> geo[G_SH, d]
    return x // geo[G_CAP, d]


@inline
def field_get(S, d, idx):
    geo = S[GEO]
    bits = S[BITS]
    fw = geo[G_FW, d]
    pos = idx * fw
    word = geo[G_WSTART, d] + (pos >> 6)
    sh = pos & 63
    mask = (np.uint64(1) << np.uint64(fw)) - np.uint64(1)
    v = bits[word] >> np.uint64(sh)
    if sh + fw > 64:
        v |= bits[word + 1] << np.uint64(64 - sh)
    return np.int64(v & mask)


@inline
def field_set(S, d, idx, x):
    geo = S[GEO]
    bits = S[BITS]
    fw = geo[G_FW, d]
    pos = idx * fw
    word = geo[G_WSTART, d] + (pos >> 6)
    sh = pos & 63
    mask = (np.uint64(1) << np.uint64(fw)) - np.uint64(1)
    v = np.uint64(x) & mask
    bits[word] = (bits[word] & ~(mask << np.uint64(sh))) | (v << np.uint64(sh))
    if sh + fw > 64:
        hs = np.uint64(64 - sh)
        hmask = mask >> hs
        bits[word + 1] = (bits[word + 1] & ~hmask) | (v >> hs)


@inline
def pack_word(off, handle):
    return (np.uint64(off) << SHIFT48) | (np.uint64(handle) & MASK48)


@hot
def alloc_block(S):
    hdr = S[HDR]
    top = hdr[H_FREE_TOP]
    if top == 0:
        raise StructureError("leaf arena exhausted")
    top -= 1
    hdr[H_FREE_TOP] = top
    hdr[H_NALLOC] += 1
    return S[FREE][top]


@hot
def free_block(S, h):
    hdr = S[HDR]
    S[FREE][hdr[H_FREE_TOP]] = h
    hdr[H_FREE_TOP] += 1
    hdr[H_NALLOC] -= 1


@inline
def root_offset(S, ctr):
    if layout_of(S) == ORIGINAL:
        bump(ctr, C_OFF_R, 1)
        return S[NODES][0]
    return S[HDR][H_ROOT_OFF]


@inline
def set_root_offset(S, ctr, x):
    if layout_of(S) == ORIGINAL:
        bump(ctr, C_OFF_W, 1)
        S[NODES][0] = x
    else:
        S[HDR][H_ROOT_OFF] = x


@hot
def _vacant(mode):
    if mode == READ:
        raise StructureError("read through an unallocated leaf")


@inline
def enter(S, ctr, node, d, k, mode):
    """Follow child ``k`` of ``node`` (depth ``d``); returns (child ref, child offset).

    In PEEK mode an unallocated leaf yields ref -1; in WRITE mode it is
    allocated on the way down.
    """
    hdr = S[HDR]
    lay = layout_of(S)
    leafchild = d + 2 == hdr[H_TIERS]
    if lay == ORIGINAL:
        nodes = S[NODES]
        slot = node + 1 + k
        bump(ctr, C_CHILD, 1)
        h = nodes[slot]
        if leafchild:
            if h < 0:
                if mode != WRITE:
                    _vacant(mode)
                    return -1, 0
                h = alloc_block(S)
                S[LOFF][h] = 0
                nodes[slot] = h
            bump(ctr, C_OFF_R, 1)
            return h, S[LOFF][h]
        bump(ctr, C_OFF_R, 1)
        return h, nodes[h]
    if lay == OPT_ORIGINAL:
        nodes = S[NODES]
        base = node + 2 * k
        bump(ctr, C_PAIR, 1)
        off = nodes[base]
        h = nodes[base + 1]
        if leafchild and h < 0:
            if mode != WRITE:
                _vacant(mode)
                return -1, off
            h = alloc_block(S)
            nodes[base + 1] = h
        return h, off
    geo = S[GEO]
    idx = node * geo[G_W, d] + k
    if lay == PACKED_LAZY and leafchild:
        bump(ctr, C_PAIR, 1)
        word = S[LWORD][idx]
        h = np.int64(word & MASK48)
        off = np.int64(word >> SHIFT48)
        if h == NULL48:
            if mode != WRITE:
                _vacant(mode)
                return -1, off
            h = alloc_block(S)
            S[LWORD][idx] = pack_word(off, h)
        return h, off
    bump(ctr, C_OFF_R, 1)
    if lay == PACKED_IMPLICIT:
        return idx, field_get(S, d + 1, idx)
    return idx, S[OFFS][geo[G_LSTART, d + 1] + idx]


@inline
def node_offset(S, ctr, parent, d, k, child):
    """One counted read of the offset of ``child`` (child ``k`` of ``parent`` at depth ``d``)."""
    hdr = S[HDR]
    lay = layout_of(S)
    leafchild = d + 2 == hdr[H_TIERS]
    if lay == ORIGINAL:
        bump(ctr, C_OFF_R, 1)
        if child < 0:
            return 0
        if leafchild:
            return S[LOFF][child]
        return S[NODES][child]
    if lay == OPT_ORIGINAL:
        bump(ctr, C_PAIR, 1)
        return S[NODES][parent + 2 * k]
    geo = S[GEO]
    idx = parent * geo[G_W, d] + k
    if lay == PACKED_LAZY and leafchild:
        bump(ctr, C_PAIR, 1)
        return np.int64(S[LWORD][idx] >> SHIFT48)
    bump(ctr, C_OFF_R, 1)
    if lay == PACKED_IMPLICIT:
        return field_get(S, d + 1, idx)
    return S[OFFS][geo[G_LSTART, d + 1] + idx]


@inline
def set_child_offset(S, ctr, node, d, k, child, x):
    hdr = S[HDR]
    lay = layout_of(S)
    leafchild = d + 2 == hdr[H_TIERS]
    bump(ctr, C_OFF_W, 1)
    if lay == ORIGINAL:
        if leafchild:
            S[LOFF][child] = x
        else:
            S[NODES][child] = x
        return
    if lay == OPT_ORIGINAL:
        S[NODES][node + 2 * k] = x
        return
    geo = S[GEO]
    idx = node * geo[G_W, d] + k
    if lay == PACKED_IMPLICIT:
        field_set(S, d + 1, idx, x)
    elif lay == PACKED_LAZY and leafchild:
        S[LWORD][idx] = pack_word(x, S[LWORD][idx] & MASK48)
    else:
        S[OFFS][geo[G_LSTART, d + 1] + idx] = x


@inline
def leaf_base(S, ctr, leaf, mode):
    """Index of slot 0 of ``leaf`` in the element array, or -1 (PEEK, unallocated)."""
    hdr = S[HDR]
    w = S[GEO][G_W, hdr[H_TIERS] - 1]
    if layout_of(S) == LAZY:
        bump(ctr, C_LEAFH, 1)
        h = S[LH][leaf]
        if h < 0:
            if mode != WRITE:
                _vacant(mode)
                return -1
            h = alloc_block(S)
            S[LH][leaf] = h
        return h * w
    if leaf < 0:
        return -1
    return leaf * w


@hot
def release(S, parent, k, leaf):
    """Unlink and free the block of leaf ``leaf`` (child ``k`` of ``parent``)."""
    hdr = S[HDR]
    lay = layout_of(S)
    if lay == IMPLICIT or lay == PACKED_IMPLICIT:
        return
    if lay == ORIGINAL:
        h = S[NODES][parent + 1 + k]
        S[NODES][parent + 1 + k] = -1
    elif lay == OPT_ORIGINAL:
        h = S[NODES][parent + 2 * k + 1]
        S[NODES][parent + 2 * k + 1] = -1
    else:
        idx = parent * S[GEO][G_W, hdr[H_TIERS] - 2] + k
        if lay == LAZY:
            h = S[LH][idx]
            S[LH][idx] = -1
        else:
            word = S[LWORD][idx]
            h = np.int64(word & MASK48)
            S[LWORD][idx] = pack_word(np.int64(word >> SHIFT48), NULL48)
    if h >= 0 and h != NULL48:
        free_block(S, h)
