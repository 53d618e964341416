"""Array-based BDD kernels.

Nodes live in flat int32 arrays (variable, low child, high child) shared by
all kernels; node 0 is FALSE and node 1 is TRUE.  The unique table and the
operation cache are open-addressing tables in numpy arrays so the whole
kernel can run under numba.  Kernels never resize storage: when space runs
out they unwind with NEED_GROW and the Python wrapper grows the arrays and
retries (already-built nodes are found again through the unique table, so a
retry repeats no structural work).

meta layout: [0] node count, [1] node capacity, [2] unique-table mask,
[3] scratch.
"""

from __future__ import annotations

import numpy as np

from ._njit import njit_maybe

TERM_VAR = 0x7FFFFFFF
NEED_GROW = -2
EMPTYSLOT = -1

OP_ITE = 1
OP_EXISTS = 2
OP_ANDEX = 3
OP_SHIFT_UP = 4
OP_SHIFT_DN = 5

_M1 = np.int64(-7046029254386353131)  # 0x9E3779B97F4A7C15 as signed
_M2 = np.int64(-4417276706812531889)  # 0xC2B2AE3D27D4EB4F as signed
_M3 = np.int64(0x165667B19E3779F9)
_POS = np.int64(0x7FFFFFFFFFFFFFFF)


@njit_maybe(cache=True, nogil=True)
def _hash4(a, b, c, d, mask):
    h = (
        np.int64(a) * _M1
        ^ np.int64(b) * _M2
        ^ np.int64(c) * _M3
        ^ np.int64(d) * np.int64(0x27D4EB2F165667C5)
    )
    h ^= h >> np.int64(29)
    return (h & _POS) & mask


@njit_maybe(cache=True, nogil=True)
def _mk(var, lo, hi, node_var, node_lo, node_hi, ut, meta):
    """Find-or-create the node (var, lo, hi); reduction rule lo==hi."""
    if lo == hi:
        return lo
    mask = meta[2]
    h = _hash4(var, lo, hi, 0, mask)
    while True:
        s = ut[h]
        if s == EMPTYSLOT:
            break
        if node_var[s] == var and node_lo[s] == lo and node_hi[s] == hi:
            return s
        h = (h + 1) & mask
    n = meta[0]
    # keep a safety margin so probe chains stay short mid-operation
    if n >= meta[1] or np.int64(n) * 4 >= mask * 3:
        return NEED_GROW
    node_var[n] = var
    node_lo[n] = lo
    node_hi[n] = hi
    ut[h] = n
    meta[0] = n + 1
    return n


@njit_maybe(cache=True, nogil=True)
def _cache_get(op, f, g, h, ck, cv):
    mask = np.int64(ck.shape[0] - 1)
    slot = _hash4(op, f, g, h, mask)
    if ck[slot, 0] == op and ck[slot, 1] == f and ck[slot, 2] == g and ck[slot, 3] == h:
        return cv[slot]
    return np.int32(-1)


@njit_maybe(cache=True, nogil=True)
def _cache_put(op, f, g, h, r, ck, cv):
    mask = np.int64(ck.shape[0] - 1)
    slot = _hash4(op, f, g, h, mask)
    ck[slot, 0] = op
    ck[slot, 1] = f
    ck[slot, 2] = g
    ck[slot, 3] = h
    cv[slot] = r


@njit_maybe(cache=True, nogil=True)
def _ite(f, g, h, node_var, node_lo, node_hi, ut, meta, ck, cv):
    if f == 1:
        return g
    if f == 0:
        return h
    if g == f:
        g = 1
    if h == f:
        h = 0
    if g == 1 and h == 0:
        return f
    if g == h:
        return g
    r = _cache_get(OP_ITE, f, g, h, ck, cv)
    if r >= 0:
        return r
    vf = node_var[f]
    vg = node_var[g] if g > 1 else TERM_VAR
    vh = node_var[h] if h > 1 else TERM_VAR
    v = min(vf, min(vg, vh))
    if vf == v:
        f0, f1 = node_lo[f], node_hi[f]
    else:
        f0, f1 = f, f
    if vg == v:
        g0, g1 = node_lo[g], node_hi[g]
    else:
        g0, g1 = g, g
    if vh == v:
        h0, h1 = node_lo[h], node_hi[h]
    else:
        h0, h1 = h, h
    lo = _ite(f0, g0, h0, node_var, node_lo, node_hi, ut, meta, ck, cv)
    if lo < 0:
        return lo
    hi = _ite(f1, g1, h1, node_var, node_lo, node_hi, ut, meta, ck, cv)
    if hi < 0:
        return hi
    r = _mk(v, lo, hi, node_var, node_lo, node_hi, ut, meta)
    if r < 0:
        return r
    _cache_put(OP_ITE, f, g, h, r, ck, cv)
    return r


@njit_maybe(cache=True, nogil=True)
def _exists(f, cube, node_var, node_lo, node_hi, ut, meta, ck, cv):
    """Existential quantification over the positive-literal cube `cube`."""
    if f <= 1:
        return f
    vf = node_var[f]
    while cube > 1 and node_var[cube] < vf:
        cube = node_hi[cube]
    if cube <= 1:
        return f
    r = _cache_get(OP_EXISTS, f, cube, 0, ck, cv)
    if r >= 0:
        return r
    vc = node_var[cube]
    if vf == vc:
        r0 = _exists(node_lo[f], node_hi[cube], node_var, node_lo, node_hi, ut, meta, ck, cv)
        if r0 < 0:
            return r0
        if r0 == 1:
            r = np.int32(1)
        else:
            r1 = _exists(node_hi[f], node_hi[cube], node_var, node_lo, node_hi, ut, meta, ck, cv)
            if r1 < 0:
                return r1
            r = _ite(r0, 1, r1, node_var, node_lo, node_hi, ut, meta, ck, cv)
            if r < 0:
                return r
    else:
        r0 = _exists(node_lo[f], cube, node_var, node_lo, node_hi, ut, meta, ck, cv)
        if r0 < 0:
            return r0
        r1 = _exists(node_hi[f], cube, node_var, node_lo, node_hi, ut, meta, ck, cv)
        if r1 < 0:
            return r1
        r = _mk(vf, r0, r1, node_var, node_lo, node_hi, ut, meta)
        if r < 0:
            return r
    _cache_put(OP_EXISTS, f, cube, 0, r, ck, cv)
    return r


@njit_maybe(cache=True, nogil=True)
def _and_exists(f, g, cube, node_var, node_lo, node_hi, ut, meta, ck, cv):
    """exists(cube, f AND g) without building the full conjunction."""
    if f == 0 or g == 0:
        return 0
    if f == 1 and g == 1:
        return 1
    if f > g:  # AND is commutative; normalize for cache hits
        f, g = g, f
    vf = node_var[f] if f > 1 else TERM_VAR
    vg = node_var[g] if g > 1 else TERM_VAR
    v = min(vf, vg)
    while cube > 1 and node_var[cube] < v:
        cube = node_hi[cube]
    if cube <= 1:
        return _ite(f, g, 0, node_var, node_lo, node_hi, ut, meta, ck, cv)
    r = _cache_get(OP_ANDEX, f, g, cube, ck, cv)
    if r >= 0:
        return r
    if vf == v:
        f0, f1 = node_lo[f], node_hi[f]
    else:
        f0, f1 = f, f
    if vg == v:
        g0, g1 = node_lo[g], node_hi[g]
    else:
        g0, g1 = g, g
    if node_var[cube] == v:
        nxt = node_hi[cube]
        r0 = _and_exists(f0, g0, nxt, node_var, node_lo, node_hi, ut, meta, ck, cv)
        if r0 < 0:
            return r0
        if r0 == 1:
            r = np.int32(1)
        else:
            r1 = _and_exists(f1, g1, nxt, node_var, node_lo, node_hi, ut, meta, ck, cv)
            if r1 < 0:
                return r1
            r = _ite(r0, 1, r1, node_var, node_lo, node_hi, ut, meta, ck, cv)
            if r < 0:
                return r
    else:
        r0 = _and_exists(f0, g0, cube, node_var, node_lo, node_hi, ut, meta, ck, cv)
        if r0 < 0:
            return r0
        r1 = _and_exists(f1, g1, cube, node_var, node_lo, node_hi, ut, meta, ck, cv)
        if r1 < 0:
            return r1
        r = _mk(v, r0, r1, node_var, node_lo, node_hi, ut, meta)
        if r < 0:
            return r
    _cache_put(OP_ANDEX, f, g, cube, r, ck, cv)
    return r


@njit_maybe(cache=True, nogil=True)
def _shift(f, up, node_var, node_lo, node_hi, ut, meta, ck, cv):
    """Rename every variable v to v+1 (up) or v-1 (down).  Order-preserving
    for the interleaved current/next scheme used by the symbolic layer."""
    if f <= 1:
        return f
    op = OP_SHIFT_UP if up else OP_SHIFT_DN
    r = _cache_get(op, f, 0, 0, ck, cv)
    if r >= 0:
        return r
    r0 = _shift(node_lo[f], up, node_var, node_lo, node_hi, ut, meta, ck, cv)
    if r0 < 0:
        return r0
    r1 = _shift(node_hi[f], up, node_var, node_lo, node_hi, ut, meta, ck, cv)
    if r1 < 0:
        return r1
    v = node_var[f] + 1 if up else node_var[f] - 1
    r = _mk(v, r0, r1, node_var, node_lo, node_hi, ut, meta)
    if r < 0:
        return r
    _cache_put(op, f, 0, 0, r, ck, cv)
    return r


@njit_maybe(cache=True, nogil=True)
def _rehash(node_var, node_lo, node_hi, ut, n_nodes, mask):
    for i in range(2, n_nodes):
        h = _hash4(node_var[i], node_lo[i], node_hi[i], 0, mask)
        while ut[h] != EMPTYSLOT:
            h = (h + 1) & mask
        ut[h] = i
