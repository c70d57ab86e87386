"""Compiled tiered-vector algorithms, generic over the layout primitives.

The shift recursion runs on an explicit stack (``S[STK]``) of work items.
Items are popped in logical order, so the carried element threads through
them exactly as in the recursive formulation:

* RANGE (node, depth, offset, i, m): shift ``A(node)[i..i+m]`` right by one.
* ROTATE (parent, depth, k, child, child offset): a child wholly inside the
  range; decrement its offset and write the carry into its new slot 0.
"""
import numpy as np
from numba import njit

from ._layout import (
    C_EL_R,
    C_LEAFH,
    C_EL_W,
    C_MOVED,
    C_OFF_R,
    C_PAIR,
    ELEMS,
    G_CAP,
    G_LSIZE,
    G_LSTART,
    G_W,
    GEO,
    H_NALLOC,
    H_ROOT_OFF,
    H_RELEASE,
    H_SIZE,
    H_TIERS,
    HDR,
    IMPLICIT,
    LAZY,
    LH,
    LWORD,
    MASK48,
    NULL48,
    NODES,
    OFFS,
    OPT_ORIGINAL,
    ORIGINAL,
    PACKED_IMPLICIT,
    PACKED_LAZY,
    PEEK,
    READ,
    SCR,
    STK,
    WRITE,
    divcap,
    bump,
    hot,
    inline,
    layout_of,
    enter,
    field_get,
    leaf_base,
    modcap,
    node_offset,
    release,
    root_offset,
    set_child_offset,
    set_root_offset,
    SHIFT48,
    _vacant,
)
from ._memops import memcopy, memmove
from .errors import StructureError

RANGE = 0
ROTATE = 1

# validate() result codes
OK = 0
BAD_SIZE = 1
BAD_OFFSET = 2
BAD_HANDLE = 3
LIVE_UNALLOCATED = 4
EMPTY_ALLOCATED = 5
BLOCK_COUNT = 6
TOO_MANY_BLOCKS = 7
LIVE_OVERLAP = 8
SHARED_BLOCK = 9


@inline
def descend(S, ctr, node, d0, off, i, mode):
    """Walk from ``node`` (depth ``d0``, offset ``off``) to logical index ``i``.

    Returns (parent, child ordinal, leaf ref, leaf base, physical slot).
    """
    L = S[HDR][H_TIERS]
    geo = S[GEO]
    parent = -1
    k = 0
    for d in range(d0, L - 1):
        p = modcap(S, i + off, d)
        k = divcap(S, p, d + 1)
        i = p - k * geo[G_CAP, d + 1]
        parent = node
        node, off = enter(S, ctr, node, d, k, mode)
        if node < 0:
            return parent, k, node, -1, 0
    base = leaf_base(S, ctr, node, mode)
    return parent, k, node, base, modcap(S, i + off, L - 1)


@inline
def flat_slot(S, ctr, i):
    """Element index of position ``i`` for the level-numbered layouts.

    Tracks one index ``q`` into the slot space of the whole current level:
    the node at depth ``d`` holding ``q`` is ``q // cap_d`` and its rotation
    only changes ``q mod cap_d``.  For implicit layouts the final ``q`` is
    the arena index itself.
    """
    lay = layout_of(S)
    L = S[HDR][H_TIERS]
    q = modcap(S, i + S[HDR][H_ROOT_OFF], 0)
    h = np.int64(0)
    for d in range(1, L):
        j = divcap(S, q, d)
        if lay == PACKED_LAZY and d == L - 1:
            bump(ctr, C_PAIR, 1)
            word = S[LWORD][j]
            off = np.int64(word >> SHIFT48)
            h = np.int64(word & MASK48)
        elif lay == PACKED_IMPLICIT:
            bump(ctr, C_OFF_R, 1)
            off = field_get(S, d, j)
        else:
            bump(ctr, C_OFF_R, 1)
            # unsigned index: no negative-index wraparound code on the hot path
            off = S[OFFS][np.uint64(S[GEO][G_LSTART, d] + j)]
        r = modcap(S, q, d)
        q = q - r + modcap(S, r + off, d)
    if lay == IMPLICIT or lay == PACKED_IMPLICIT:
        return q
    j = divcap(S, q, L - 1)
    if lay == LAZY:
        bump(ctr, C_LEAFH, 1)
        h = S[LH][j]
    if h < 0 or h == NULL48:
        _vacant(READ)
    return h * S[GEO][G_W, L - 1] + modcap(S, q, L - 1)


@inline
def get(S, ctr, i):
    lay = layout_of(S)
    bump(ctr, C_EL_R, 1)
    if lay == ORIGINAL or lay == OPT_ORIGINAL:
        off = root_offset(S, ctr)
        _, _, _, base, slot = descend(S, ctr, 0, 0, off, i, READ)
        return S[ELEMS][base + slot]
    return S[ELEMS][np.uint64(flat_slot(S, ctr, i))]


@inline
def update(S, ctr, node, d0, off, i, x):
    _, _, _, base, slot = descend(S, ctr, node, d0, off, i, WRITE)
    el = S[ELEMS]
    old = el[base + slot]
    el[base + slot] = x
    bump(ctr, C_EL_R, 1)
    bump(ctr, C_EL_W, 1)
    return old


@hot
def set_at(S, ctr, i, x):
    return update(S, ctr, 0, 0, root_offset(S, ctr), i, x)


@inline
def leaf_shift(S, ctr, base, off, i, m, e):
    """Physically move the circular run of ``m`` slots starting at logical ``i`` right by one."""
    L = S[HDR][H_TIERS]
    w = S[GEO][G_W, L - 1]
    el = S[ELEMS]
    s = modcap(S, i + off, L - 1)
    end = s + m
    if end < w:
        old = el[base + end]
        memmove(el, base + s + 1, base + s, m)
    else:
        e2 = end - w
        old = el[base + e2]
        memmove(el, base + 1, base, e2)
        el[base] = el[base + w - 1]
        memmove(el, base + s + 1, base + s, w - 1 - s)
    el[base + s] = e
    bump(ctr, C_MOVED, m)
    bump(ctr, C_EL_R, m + 1)
    bump(ctr, C_EL_W, m + 1)
    return old


@inline
def _push(stk, top, kind, a, b, c, x, y):
    stk[top, 0] = kind
    stk[top, 1] = a
    stk[top, 2] = b
    stk[top, 3] = c
    stk[top, 4] = x
    stk[top, 5] = y
    return top + 1


@hot
def shift(S, ctr, e, i, m):
    """Shift ``A(root)[i..i+m-1]`` one place right, store ``e`` at ``i``, return old ``A[i+m]``."""
    geo = S[GEO]
    stk = S[STK]
    L = S[HDR][H_TIERS]
    top = _push(stk, 0, RANGE, 0, 0, root_offset(S, ctr), i, m)
    carry = e
    while top > 0:
        top -= 1
        kind = stk[top, 0]
        a = stk[top, 1]
        d = stk[top, 2]
        c = stk[top, 3]
        x = stk[top, 4]
        y = stk[top, 5]
        if kind == ROTATE:
            nd = d + 1
            newoff = modcap(S, y - 1 + geo[G_CAP, nd], nd)
            set_child_offset(S, ctr, a, d, c, x, newoff)
            carry = update(S, ctr, x, nd, newoff, 0, carry)
            continue
        if d == L - 1:
            base = leaf_base(S, ctr, a, WRITE)
            carry = leaf_shift(S, ctr, base, c, x, y, carry)
            continue
        # pieces are pushed right to left so the leftmost one is processed first
        cc = geo[G_CAP, d + 1]
        w = geo[G_W, d]
        p = modcap(S, x + c, d)
        end = p + y
        k0 = divcap(S, p, d + 1)
        for kk in range(divcap(S, end, d + 1), k0 - 1, -1):
            base = kk * cc
            j0 = max(p, base) - base
            j1 = min(end, base + cc - 1) - base
            km = kk - w if kk >= w else kk
            child, coff = enter(S, ctr, a, d, km, WRITE)
            if j0 == 0 and j1 == cc - 1:
                top = _push(stk, top, ROTATE, a, d, km, child, coff)
            else:
                top = _push(stk, top, RANGE, child, d + 1, coff, j0, j1 - j0)
    return carry


@inline
def _copy_leaf(S, ctr, out, pos, leaf, off, x, y):
    """Copy ``y`` logical slots of ``leaf`` starting at ``x`` into ``out[pos:]``."""
    L = S[HDR][H_TIERS]
    lw = S[GEO][G_W, L - 1]
    base = leaf_base(S, ctr, leaf, READ)
    s = modcap(S, x + off, L - 1)
    first = min(y, lw - s)
    memcopy(out, pos, S[ELEMS], base + s, first)
    if y > first:
        memcopy(out, pos + first, S[ELEMS], base, y - first)
    bump(ctr, C_EL_R, y)


@hot
def get_range(S, ctr, i, m, out):
    if m == 0:
        return
    geo = S[GEO]
    stk = S[STK]
    L = S[HDR][H_TIERS]
    top = _push(stk, 0, RANGE, 0, 0, root_offset(S, ctr), i, m)
    pos = 0
    while top > 0:
        top -= 1
        a = stk[top, 1]
        d = stk[top, 2]
        c = stk[top, 3]
        x = stk[top, 4]
        y = stk[top, 5]
        cc = geo[G_CAP, d + 1]
        w = geo[G_W, d]
        p = modcap(S, x + c, d)
        end = p + y
        k0 = divcap(S, p, d + 1)
        k1 = divcap(S, end - 1, d + 1)
        if d == L - 2:
            # leaf parents copy in order without going through the stack
            for kk in range(k0, k1 + 1):
                lo = max(p, kk * cc)
                hi = min(end, (kk + 1) * cc)
                km = kk - w if kk >= w else kk
                child, coff = enter(S, ctr, a, d, km, READ)
                _copy_leaf(S, ctr, out, pos, child, coff, lo - kk * cc, hi - lo)
                pos += hi - lo
            continue
        for kk in range(k1, k0 - 1, -1):
            lo = max(p, kk * cc)
            hi = min(end, (kk + 1) * cc)
            km = kk - w if kk >= w else kk
            child, coff = enter(S, ctr, a, d, km, READ)
            top = _push(stk, top, RANGE, child, d + 1, coff, lo - kk * cc, hi - lo)


@inline
def _clip(a0, a1, b0, b1):
    lo = max(a0, b0)
    hi = min(a1, b1)
    return lo, max(lo, hi)


@hot
def maybe_release(S, ctr):
    """After a delete, free the block of the leaf that just lost its last live element.

    Only the leaf holding the freed root slot (logical ``cap - 1``) can have
    become empty.  Walk towards it while tracking the live interval of each
    node on the path, in the node's own logical space.
    """
    lay = layout_of(S)
    if lay == IMPLICIT or lay == PACKED_IMPLICIT:
        return
    scratch = S[SCR]
    geo = S[GEO]
    L = S[HDR][H_TIERS]
    start = 0
    cnt = S[HDR][H_SIZE]
    i = geo[G_CAP, 0] - 1
    node = 0
    parent = -1
    k = 0
    off = root_offset(S, scratch)
    for d in range(L - 1):
        capd = geo[G_CAP, d]
        cc = geo[G_CAP, d + 1]
        q = modcap(S, i + off, d)
        k = divcap(S, q, d + 1)
        i = q - k * cc
        if cnt > 0:
            p = modcap(S, start + off, d)
            b0 = k * cc
            a0, a1 = _clip(p, min(p + cnt, capd), b0, b0 + cc)
            c0, c1 = _clip(0, p + cnt - capd, b0, b0 + cc)
            # a suffix piece and a wrapped prefix piece of one child merge into one interval
            start = a0 - b0 if a1 > a0 else c0 - b0
            cnt = (a1 - a0) + (c1 - c0)
        parent = node
        node, off = enter(S, scratch, node, d, k, PEEK)
    if cnt == 0 and node >= 0 and leaf_base(S, scratch, node, PEEK) >= 0:
        release(S, parent, k, node)


@hot
def insert(S, ctr, i, x):
    n = S[HDR][H_SIZE]
    shift(S, ctr, x, i, n - i)
    S[HDR][H_SIZE] = n + 1


@hot
def remove(S, ctr, i, fill):
    hdr = S[HDR]
    old = shift(S, ctr, fill, 0, i)
    ro = root_offset(S, ctr)
    set_root_offset(S, ctr, modcap(S, ro + 1, 0))
    n = hdr[H_SIZE] - 1
    hdr[H_SIZE] = n
    if hdr[H_RELEASE]:
        maybe_release(S, ctr)
    return old


@hot
def push_back(S, ctr, x):
    n = S[HDR][H_SIZE]
    update(S, ctr, 0, 0, root_offset(S, ctr), n, x)
    S[HDR][H_SIZE] = n + 1


@hot
def push_front(S, ctr, x):
    cap0 = S[GEO][G_CAP, 0]
    ro = modcap(S, root_offset(S, ctr) - 1 + cap0, 0)
    set_root_offset(S, ctr, ro)
    update(S, ctr, 0, 0, ro, 0, x)
    S[HDR][H_SIZE] += 1


@hot
def extend(S, ctr, values):
    for t in range(values.shape[0]):
        push_back(S, ctr, values[t])


@hot
def successor(S, ctr, x):
    lo = 0
    hi = S[HDR][H_SIZE]
    n = hi
    while lo < hi:
        mid = (lo + hi) >> 1
        if get(S, ctr, mid) < x:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo < n else -1


@hot
def peek_slot(S, p):
    """Uncounted raw read of logical slot ``p``; (False, junk) for an unallocated leaf."""
    scratch = S[SCR]
    off = root_offset(S, scratch)
    _, _, _, base, slot = descend(S, scratch, 0, 0, off, p, PEEK)
    el = S[ELEMS]
    if base < 0:
        return False, el[0]
    return True, el[base + slot]


@hot
def locate(S, p):
    """Uncounted: (leaf ordinal, physical slot) holding logical index ``p``."""
    scratch = S[SCR]
    geo = S[GEO]
    L = S[HDR][H_TIERS]
    off = root_offset(S, scratch)
    node = 0
    ordinal = 0
    i = p
    for d in range(L - 1):
        q = modcap(S, i + off, d)
        k = divcap(S, q, d + 1)
        i = q - k * geo[G_CAP, d + 1]
        ordinal = ordinal * geo[G_W, d] + k
        node, off = enter(S, scratch, node, d, k, PEEK)
    return ordinal, modcap(S, i + off, L - 1)


# ---------------------------------------------------------------- coordinates


@hot
def coord_path(S, d, idx, mode):
    """Uncounted walk to node (d, idx); returns (parent ref, ordinal in parent, node ref)."""
    scratch = S[SCR]
    geo = S[GEO]
    node = 0
    parent = -1
    k = 0
    for t in range(d):
        anc = idx // (geo[G_LSIZE, d] // geo[G_LSIZE, t + 1])
        k = anc % geo[G_W, t]
        parent = node
        node, _ = enter(S, scratch, node, t, k, mode if t + 1 == d else PEEK)
    return parent, k, node


@hot
def read_offset_at(S, ctr, d, idx):
    if d == 0:
        return root_offset(S, ctr)
    parent, k, node = coord_path(S, d, idx, PEEK)
    return node_offset(S, ctr, parent, d - 1, k, node)


@hot
def write_offset_at(S, ctr, d, idx, x):
    if d == 0:
        set_root_offset(S, ctr, x)
        return
    mode = WRITE if layout_of(S) == ORIGINAL else PEEK
    parent, k, node = coord_path(S, d, idx, mode)
    set_child_offset(S, ctr, parent, d - 1, k, node, x)


@hot
def poke_offsets(S, depths, idxs, values):
    scratch = S[SCR]
    for t in range(depths.shape[0]):
        write_offset_at(S, scratch, depths[t], idxs[t], values[t])


@hot
def leaf_block(S, leaf, mode):
    """Uncounted base index of leaf ordinal ``leaf`` (-1 if unallocated and not WRITE)."""
    scratch = S[SCR]
    L = S[HDR][H_TIERS]
    _, _, node = coord_path(S, L - 1, leaf, mode)
    if node < 0:
        return -1
    return leaf_base(S, scratch, node, mode)


@hot
def release_at(S, leaf):
    L = S[HDR][H_TIERS]
    parent, k, node = coord_path(S, L - 1, leaf, PEEK)
    if node >= 0 and leaf_block(S, leaf, PEEK) >= 0:
        release(S, parent, k, node)


# ---------------------------------------------------------------- validation


@njit(cache=True)
def walk(S):
    """Refs and offsets of all nodes in level order.

    The third result is the slot of the first node with a broken child handle,
    or -1.
    """
    hdr = S[HDR]
    geo = S[GEO]
    lay = layout_of(S)
    L = hdr[H_TIERS]
    total = geo[G_LSTART, L - 1] + geo[G_LSIZE, L - 1]
    refs = np.full(total, -1, np.int64)
    offs = np.zeros(total, np.int64)
    scratch = S[SCR]
    nodes = S[NODES]
    refs[0] = 0
    offs[0] = root_offset(S, scratch)
    for d in range(L - 1):
        w = geo[G_W, d]
        for idx in range(geo[G_LSIZE, d]):
            node = refs[geo[G_LSTART, d] + idx]
            for k in range(w):
                cslot = geo[G_LSTART, d + 1] + idx * w + k
                if lay == ORIGINAL or lay == OPT_ORIGINAL:
                    h = nodes[node + 1 + k] if lay == ORIGINAL else nodes[node + 2 * k + 1]
                    if d + 2 < L and (h < 0 or h >= nodes.shape[0]):
                        return refs, offs, cslot
                    if d + 2 == L and h >= geo[G_LSIZE, L - 1]:
                        return refs, offs, cslot
                child, coff = enter(S, scratch, node, d, k, PEEK)
                refs[cslot] = child
                offs[cslot] = coff
    return refs, offs, -1


@njit(cache=True)
def live_ranges(S, offs):
    """Per-node live range (start, count) in the node's own logical index space."""
    hdr = S[HDR]
    geo = S[GEO]
    L = hdr[H_TIERS]
    total = offs.shape[0]
    starts = np.zeros(total, np.int64)
    cnts = np.zeros(total, np.int64)
    cnts[0] = hdr[H_SIZE]
    for d in range(L - 1):
        cc = geo[G_CAP, d + 1]
        w = geo[G_W, d]
        for idx in range(geo[G_LSIZE, d]):
            slot = geo[G_LSTART, d] + idx
            rem = cnts[slot]
            pos = modcap(S, starts[slot] + offs[slot], d)
            while rem > 0:
                kk = pos // cc
                lo = pos - kk * cc
                take = min(rem, cc - lo)
                cidx = idx * w + kk % w
                cslot = geo[G_LSTART, d + 1] + cidx
                if cnts[cslot] == 0:
                    starts[cslot] = lo
                    cnts[cslot] = take
                elif lo != 0 or take > starts[cslot]:
                    return starts, cnts, LIVE_OVERLAP, d + 1, cidx
                else:
                    cnts[cslot] += take
                pos += take
                rem -= take
    return starts, cnts, OK, 0, 0


@njit(cache=True)
def live_counts(S):
    refs, offs, bad = walk(S)
    starts, cnts, code, _, _ = live_ranges(S, offs)
    return refs, offs, starts, cnts


@hot
def leaf_allocated(S, ref):
    lay = layout_of(S)
    if lay == IMPLICIT or lay == PACKED_IMPLICIT:
        return True
    if lay == LAZY:
        return S[LH][ref] >= 0
    return ref >= 0


@njit(cache=True)
def validate(S):
    """First violated structural invariant as (code, depth, index); code 0 means valid."""
    hdr = S[HDR]
    geo = S[GEO]
    lay = layout_of(S)
    L = hdr[H_TIERS]
    n = hdr[H_SIZE]
    if n < 0 or n > geo[G_CAP, 0]:
        return BAD_SIZE, 0, 0
    refs, offs, bad = walk(S)
    if bad >= 0:
        for d in range(L - 1, -1, -1):
            if bad >= geo[G_LSTART, d]:
                return BAD_HANDLE, d, bad - geo[G_LSTART, d]
    for d in range(L):
        cap = geo[G_CAP, d]
        for idx in range(geo[G_LSIZE, d]):
            o = offs[geo[G_LSTART, d] + idx]
            if o < 0 or o >= cap:
                return BAD_OFFSET, d, idx
    starts, cnts, code, cd, ci = live_ranges(S, offs)
    if code != OK:
        return code, cd, ci
    if lay == IMPLICIT or lay == PACKED_IMPLICIT:
        return OK, 0, 0
    nleaves = geo[G_LSIZE, L - 1]
    lw = geo[G_W, L - 1]
    seen = np.zeros(nleaves, np.bool_)
    nalloc = 0
    for idx in range(nleaves):
        slot = geo[G_LSTART, L - 1] + idx
        ref = refs[slot]
        allocated = leaf_allocated(S, ref)
        if allocated:
            h = S[LH][ref] if lay == LAZY else ref
            if h < 0 or h >= nleaves or seen[h]:
                return SHARED_BLOCK, L - 1, idx
            seen[h] = True
            nalloc += 1
        if cnts[slot] > 0 and not allocated:
            return LIVE_UNALLOCATED, L - 1, idx
        if hdr[H_RELEASE] and allocated and cnts[slot] == 0:
            return EMPTY_ALLOCATED, L - 1, idx
    if nalloc != hdr[H_NALLOC]:
        return BLOCK_COUNT, 0, 0
    # each partial node has at most two partial children
    if hdr[H_RELEASE] and nalloc > n // lw + (1 << (L - 1)):
        return TOO_MANY_BLOCKS, 0, 0
    return OK, 0, 0


@hot
def read_element_at(S, ctr, leaf, slot):
    base = leaf_block(S, leaf, PEEK)
    if base < 0:
        raise StructureError("read from an unallocated leaf")
    bump(ctr, C_EL_R, 1)
    return S[ELEMS][base + slot]


@hot
def write_element_at(S, ctr, leaf, slot, x):
    base = leaf_block(S, leaf, WRITE)
    bump(ctr, C_EL_W, 1)
    S[ELEMS][base + slot] = x
