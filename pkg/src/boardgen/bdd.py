"""Reduced ordered BDD kernel with hash-consed nodes.

A `BddManager` owns a fixed variable order 0..nvars-1 and all nodes; `Bdd`
handles are valid only with their owning manager.  Canonicity gives
constant-time semantic equality: two functions are equal iff their handles
are equal.  Managers are single-threaded; serialized byte strings are the
exchange format between managers.

No garbage collection is performed: nodes persist for the manager's
lifetime (handles can never dangle) and the operation cache can be dropped
between pipeline phases with `clear_cache`.
"""

from __future__ import annotations

import random
import struct
from typing import Iterable, Iterator

import numpy as np

from . import _bddkern as K

MAGIC = b"SGBD1"

AND = "and"
OR = "or"
XOR = "xor"


class BddError(Exception):
    pass


class Bdd:
    """Handle to a node in a BddManager."""

    __slots__ = ("mgr", "id")

    def __init__(self, mgr: "BddManager", node_id: int):
        self.mgr = mgr
        self.id = int(node_id)

    def __eq__(self, other):
        return isinstance(other, Bdd) and other.mgr is self.mgr and other.id == self.id

    def __hash__(self):
        return hash((id(self.mgr), self.id))

    def __repr__(self):
        return f"Bdd({self.id})"

    def __and__(self, other):
        return self.mgr.apply(AND, self, other)

    def __or__(self, other):
        return self.mgr.apply(OR, self, other)

    def __xor__(self, other):
        return self.mgr.apply(XOR, self, other)

    def __invert__(self):
        return self.mgr.not_(self)

    @property
    def is_false(self) -> bool:
        return self.id == 0

    @property
    def is_true(self) -> bool:
        return self.id == 1


class BddManager:
    def __init__(self, nvars: int, node_capacity: int = 1 << 16, cache_bits: int = 20):
        if nvars < 0:
            raise BddError("variable count must be non-negative")
        self.nvars = int(nvars)
        cap = max(int(node_capacity), 1024)
        self._var = np.zeros(cap, np.int32)
        self._lo = np.zeros(cap, np.int32)
        self._hi = np.zeros(cap, np.int32)
        self._var[0] = self._var[1] = K.TERM_VAR
        ut_size = 1 << max(cap.bit_length() + 1, 12)
        self._ut = np.full(ut_size, K.EMPTYSLOT, np.int32)
        self._meta = np.zeros(4, np.int64)
        self._meta[0] = 2
        self._meta[1] = cap
        self._meta[2] = ut_size - 1
        csize = 1 << cache_bits
        self._ck = np.full((csize, 4), -9, np.int32)
        self._cv = np.zeros(csize, np.int32)
        self._cubes: dict[tuple[int, ...], Bdd] = {}
        self.false = Bdd(self, 0)
        self.true = Bdd(self, 1)

    # -- storage management -------------------------------------------------

    def __len__(self) -> int:
        return int(self._meta[0])

    def clear_cache(self) -> None:
        self._ck.fill(-9)
        self._cv.fill(0)

    def _grow(self) -> None:
        cap = int(self._meta[1]) * 2
        for name in ("_var", "_lo", "_hi"):
            arr = getattr(self, name)
            new = np.zeros(cap, np.int32)
            new[: arr.shape[0]] = arr
            setattr(self, name, new)
        self._meta[1] = cap
        ut_size = 1 << (cap.bit_length() + 1)
        self._ut = np.full(ut_size, K.EMPTYSLOT, np.int32)
        self._meta[2] = ut_size - 1
        K._rehash(self._var, self._lo, self._hi, self._ut, int(self._meta[0]), self._meta[2])

    def _run(self, fn, *args) -> int:
        while True:
            r = int(
                fn(*args, self._var, self._lo, self._hi, self._ut, self._meta, self._ck, self._cv)
            )
            if r != K.NEED_GROW:
                return r
            self._grow()

    def _check(self, *hs: Bdd) -> None:
        for h in hs:
            if not isinstance(h, Bdd) or h.mgr is not self:
                raise BddError("operand does not belong to this manager")

    # -- construction and boolean algebra ------------------------------------

    def var(self, i: int) -> Bdd:
        if not 0 <= i < self.nvars:
            raise BddError(f"variable index {i} outside 0..{self.nvars - 1}")
        while True:
            r = int(K._mk(i, 0, 1, self._var, self._lo, self._hi, self._ut, self._meta))
            if r != K.NEED_GROW:
                return Bdd(self, r)
            self._grow()

    def ite(self, f: Bdd, g: Bdd, h: Bdd) -> Bdd:
        self._check(f, g, h)
        return Bdd(self, self._run(K._ite, f.id, g.id, h.id))

    def apply(self, op: str, a: Bdd, b: Bdd) -> Bdd:
        self._check(a, b)
        if op == AND:
            return self.ite(a, b, self.false)
        if op == OR:
            return self.ite(a, self.true, b)
        if op == XOR:
            return self.ite(a, self.not_(b), b)
        raise BddError(f"unknown operator {op!r}")

    def not_(self, a: Bdd) -> Bdd:
        self._check(a)
        return self.ite(a, self.false, self.true)

    # -- quantification -------------------------------------------------------

    def cube(self, vs: Iterable[int]) -> Bdd:
        """Positive-literal cube over a variable set (the VarSet form used
        by the quantifiers)."""
        key = tuple(sorted(set(int(v) for v in vs)))
        for v in key:
            if not 0 <= v < self.nvars:
                raise BddError(f"variable index {v} outside 0..{self.nvars - 1}")
        got = self._cubes.get(key)
        if got is None:
            got = self.true
            for v in reversed(key):
                got = self.ite(self.var(v), got, self.false)
            self._cubes[key] = got
        return got

    def exists(self, f: Bdd, vs: Iterable[int]) -> Bdd:
        self._check(f)
        return Bdd(self, self._run(K._exists, f.id, self.cube(vs).id))

    def forall(self, f: Bdd, vs: Iterable[int]) -> Bdd:
        return self.not_(self.exists(self.not_(f), vs))

    def and_exists(self, f: Bdd, g: Bdd, vs: Iterable[int]) -> Bdd:
        """exists(vs, f & g) as one relational-product pass."""
        self._check(f, g)
        return Bdd(self, self._run(K._and_exists, f.id, g.id, self.cube(vs).id))

    def shift_up(self, f: Bdd) -> Bdd:
        """Rename var v -> v+1 everywhere (current -> next in interleaved
        orders).  Support must not contain variable nvars-1."""
        self._check(f)
        return Bdd(self, self._run(K._shift, f.id, True))

    def shift_down(self, f: Bdd) -> Bdd:
        self._check(f)
        return Bdd(self, self._run(K._shift, f.id, False))

    # -- inspection ------------------------------------------------------------

    def node(self, h: Bdd) -> tuple[int, Bdd, Bdd]:
        self._check(h)
        if h.id <= 1:
            raise BddError("terminal node has no children")
        return int(self._var[h.id]), Bdd(self, self._lo[h.id]), Bdd(self, self._hi[h.id])

    def support(self, f: Bdd) -> set[int]:
        self._check(f)
        seen: set[int] = set()
        out: set[int] = set()
        stack = [f.id]
        while stack:
            u = stack.pop()
            if u <= 1 or u in seen:
                continue
            seen.add(u)
            out.add(int(self._var[u]))
            stack.append(int(self._lo[u]))
            stack.append(int(self._hi[u]))
        return out

    def size(self, f: Bdd) -> int:
        """Number of internal nodes reachable from f."""
        self._check(f)
        seen: set[int] = set()
        stack = [f.id]
        n = 0
        while stack:
            u = stack.pop()
            if u <= 1 or u in seen:
                continue
            seen.add(u)
            n += 1
            stack.append(int(self._lo[u]))
            stack.append(int(self._hi[u]))
        return n

    def evaluate(self, f: Bdd, bits) -> bool:
        """Evaluate under a full assignment (indexable by variable)."""
        self._check(f)
        u = f.id
        while u > 1:
            u = int(self._hi[u]) if bits[self._var[u]] else int(self._lo[u])
        return u == 1

    # -- counting and sampling --------------------------------------------------

    def _norm_varset(self, over: Iterable[int]) -> tuple[int, ...]:
        key = tuple(sorted(set(int(v) for v in over)))
        for v in key:
            if not 0 <= v < self.nvars:
                raise BddError(f"variable index {v} outside 0..{self.nvars - 1}")
        return key

    def _counts(self, f: Bdd, over: tuple[int, ...]) -> dict[int, int]:
        pos = {v: i for i, v in enumerate(over)}
        n = len(over)
        memo: dict[int, int] = {0: 0, 1: 1}

        def posof(u: int) -> int:
            return n if u <= 1 else pos[int(self._var[u])]

        order = []
        seen = set()
        stack = [f.id]
        while stack:
            u = stack.pop()
            if u <= 1 or u in seen:
                continue
            if int(self._var[u]) not in pos:
                raise BddError(
                    f"support variable {int(self._var[u])} outside the counting set"
                )
            seen.add(u)
            order.append(u)
            stack.append(int(self._lo[u]))
            stack.append(int(self._hi[u]))
        for u in sorted(order, key=lambda x: -posof(x)):
            lo, hi = int(self._lo[u]), int(self._hi[u])
            p = posof(u)
            memo[u] = memo[lo] * (1 << (posof(lo) - p - 1)) + memo[hi] * (
                1 << (posof(hi) - p - 1)
            )
        return memo

    def sat_count(self, f: Bdd, over: Iterable[int]) -> int:
        """Exact number of satisfying assignments over the given variables.
        Requires support(f) to be a subset of `over`."""
        self._check(f)
        key = self._norm_varset(over)
        memo = self._counts(f, key)
        shift = len(key) if f.id <= 1 else list(key).index(int(self._var[f.id]))
        return memo[f.id] << shift if f.id != 0 else 0

    def sample_sat(self, f: Bdd, over: Iterable[int], rng, n: int) -> np.ndarray:
        """Draw n assignments uniformly (with replacement) from the models of
        f over `over`, by sat-count-weighted descent.  `rng` is a
        random.Random or an int seed; results are reproducible per seed."""
        self._check(f)
        if f.id == 0:
            raise BddError("cannot sample from the empty set")
        if isinstance(rng, int):
            rng = random.Random(rng)
        key = self._norm_varset(over)
        pos = {v: i for i, v in enumerate(key)}
        memo = self._counts(f, key)
        nv = len(key)

        def posof(u: int) -> int:
            return nv if u <= 1 else pos[int(self._var[u])]

        out = np.zeros((n, nv), dtype=bool)
        for s in range(n):
            total = memo[f.id] << posof(f.id)
            r = rng.randrange(total)
            # bits for variables above the root are unconstrained
            q, r = divmod(r, memo[f.id])
            for i in range(posof(f.id)):
                out[s, i] = (q >> i) & 1
            u = f.id
            while u > 1:
                p = posof(u)
                lo, hi = int(self._lo[u]), int(self._hi[u])
                w0 = memo[lo] << (posof(lo) - p - 1)
                if r < w0:
                    out[s, p] = False
                    u2 = lo
                else:
                    r -= w0
                    out[s, p] = True
                    u2 = hi
                # unconstrained bits skipped between u and its child
                q, r = divmod(r, memo[u2])
                for i in range(p + 1, posof(u2)):
                    out[s, i] = (q >> (i - p - 1)) & 1
                u = u2
        return out

    def enumerate_sat(self, f: Bdd, over: Iterable[int]) -> Iterator[np.ndarray]:
        """Yield every satisfying assignment over `over` in lexicographic
        order (variable 0 most significant)."""
        self._check(f)
        key = self._norm_varset(over)
        pos = {v: i for i, v in enumerate(key)}
        nv = len(key)
        bits = np.zeros(nv, dtype=bool)

        def posof(u: int) -> int:
            return nv if u <= 1 else pos[int(self._var[u])]

        def rec(u: int, at: int) -> Iterator[np.ndarray]:
            if u == 0:
                return
            if at == nv:
                yield bits.copy()
                return
            if posof(u) == at:
                lo, hi = int(self._lo[u]), int(self._hi[u])
                bits[at] = False
                yield from rec(lo, at + 1)
                bits[at] = True
                yield from rec(hi, at + 1)
            else:
                bits[at] = False
                yield from rec(u, at + 1)
                bits[at] = True
                yield from rec(u, at + 1)

        if f.id != 0:
            yield from rec(f.id, 0)

    # -- serialization -----------------------------------------------------------

    def serialize(self, f: Bdd) -> bytes:
        """Node-list format: MAGIC, u32 varcount, u32 nodecount, nodes as
        (var u32, low u32, high u32) in DFS postorder (low before high),
        root id last; little-endian throughout.  Serialized ids: 0 FALSE,
        1 TRUE, then 2 + emission index."""
        self._check(f)
        idmap: dict[int, int] = {0: 0, 1: 1}
        triples: list[tuple[int, int, int]] = []

        def emit(u: int) -> int:
            got = idmap.get(u)
            if got is not None:
                return got
            lo = emit(int(self._lo[u]))
            hi = emit(int(self._hi[u]))
            sid = len(triples) + 2
            idmap[u] = sid
            triples.append((int(self._var[u]), lo, hi))
            return sid

        root = emit(f.id) if f.id > 1 else f.id
        out = bytearray(MAGIC)
        out += struct.pack("<II", self.nvars, len(triples))
        for var, lo, hi in triples:
            out += struct.pack("<III", var, lo, hi)
        out += struct.pack("<I", root)
        return bytes(out)

    def deserialize(self, data: bytes) -> Bdd:
        if len(data) < len(MAGIC) + 12:
            raise BddError("truncated BDD stream")
        if data[: len(MAGIC)] != MAGIC:
            raise BddError("bad magic; not a serialized BDD")
        off = len(MAGIC)
        nvars, count = struct.unpack_from("<II", data, off)
        off += 8
        if nvars != self.nvars:
            raise BddError(
                f"variable-count mismatch: stream has {nvars}, manager has {self.nvars}"
            )
        need = off + 12 * count + 4
        if len(data) != need:
            raise BddError(f"malformed BDD stream: expected {need} bytes, got {len(data)}")
        ids = [0, 1]
        for i in range(count):
            var, lo, hi = struct.unpack_from("<III", data, off)
            off += 12
            if var >= nvars:
                raise BddError(f"node {i}: variable {var} out of range")
            if lo >= i + 2 or hi >= i + 2:
                raise BddError(f"node {i}: forward reference in node list")
            while True:
                r = int(
                    K._mk(var, ids[lo], ids[hi], self._var, self._lo, self._hi, self._ut, self._meta)
                )
                if r != K.NEED_GROW:
                    break
                self._grow()
            ids.append(r)
        (root,) = struct.unpack_from("<I", data, off)
        if root >= count + 2:
            raise BddError("root id out of range")
        return Bdd(self, ids[root])
