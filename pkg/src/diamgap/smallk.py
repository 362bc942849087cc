"""Explicit Diameter-gadget builders for k=4 and k=5.

Vertices come in two layers.  L1 holds every stack of k-1 vector
indices.  L2 holds triples ({S1,S2}, x, y): an unordered pair of stacks
with |S1|+|S2| = k-2 and two coordinate arrays such that one
concatenation order satisfies x and the other satisfies y (in either
role assignment).  Edges are the four families: L1-L2 attachment,
two vector-change families (pop one stack's top, push a vector on the
other / back onto the same), and coordinate-change edges forming a
clique (with self-loops) inside each fixed-pair class.

Vertex ids are reproducible: L1 in lexicographic stack order first,
then L2 grouped by canonical pair (lexicographically smaller stack
first), ordered by (pair, x, y).  Coordinate-change cliques are kept
as a Graph overlay; the same class structure also powers a compact
class-level BFS (`compact_bfs_levels`) used where the explicit graph
would be too large to sweep.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .graphs import Graph, from_edges
from .ovcore import OvInstance, OvWitness
from .stacks import Stack, coords_to_text, stack_to_text

__all__ = [
    "WrongK",
    "VertexMissing",
    "GadgetIndex",
    "build_index",
    "build_k4_graph",
    "build_k5_graph",
    "endpoint_pair",
    "vertex_bounds",
    "compact_bfs_levels",
    "compact_endpoint_distance",
]


class WrongK(ValueError):
    """Builder invoked for a k it does not implement."""


class VertexMissing(KeyError):
    """A referenced gadget vertex does not exist."""


PairKey = tuple[Stack, Stack]


def _canonical_pair(s: Stack, t: Stack) -> PairKey:
    a, b = sorted((tuple(s), tuple(t)))
    return a, b


@dataclass
class GadgetIndex:
    """Vertex numbering plus the per-class membership grids.

    Arrays x in [d]^(k-1) are encoded as big-endian base-d codes (so id
    order is lexicographic); an L2 member is the pair code x*A + y.
    """

    inst: OvInstance
    n_l1: int
    classes: tuple[PairKey, ...]
    class_id: dict[PairKey, int]
    member_codes: list[np.ndarray]
    offsets: np.ndarray  # offsets[c] = first vertex id of class c; last entry = V
    digits: np.ndarray  # [A, k-1] 0-based coordinate digits per array code
    transitions: dict[int, tuple[int, ...]]
    anchors: dict[int, Stack]  # classes whose pair is {(), T}, keyed to T
    _sat_cache: dict[Stack, np.ndarray] = field(default_factory=dict, repr=False)

    @property
    def k(self) -> int:
        return self.inst.k

    @property
    def num_arrays(self) -> int:
        return self.digits.shape[0]

    @property
    def num_vertices(self) -> int:
        return int(self.offsets[-1])

    def sat(self, stack: Stack) -> np.ndarray:
        """Boolean array over all coordinate-array codes: which arrays
        the stack satisfies.  Same criterion as stacks.satisfies, run
        for every array at once."""
        stack = tuple(stack)
        hit = self._sat_cache.get(stack)
        if hit is None:
            vec = self.inst.to_array().astype(bool)
            a_count, m = self.digits.shape
            ok = np.ones(a_count, bool)
            bad = np.zeros((a_count, m), bool)
            for h, vi in enumerate(stack, start=1):
                bad |= ~vec[vi][self.digits]
                ok &= bad.sum(axis=1) <= h - 1
            self._sat_cache[stack] = hit = ok
        return hit

    # --- id mapping -------------------------------------------------

    def l1_code(self, stack: Stack) -> int:
        n, k = self.inst.n, self.k
        if len(stack) != k - 1 or any(not 0 <= i < n for i in stack):
            raise VertexMissing(f"not an L1 stack: {stack}")
        code = 0
        for i in stack:
            code = code * n + i
        return code

    def l1_stack(self, code: int) -> Stack:
        n, k = self.inst.n, self.k
        out = []
        for _ in range(k - 1):
            out.append(code % n)
            code //= n
        return tuple(reversed(out))

    def array_code(self, coords: tuple[int, ...]) -> int:
        d = self.inst.d
        code = 0
        for c in coords:
            code = code * d + (c - 1)
        return code

    def array_coords(self, code: int) -> tuple[int, ...]:
        return tuple(int(v) + 1 for v in self.digits[code])

    def l2_id(self, s: Stack, t: Stack, x: tuple[int, ...], y: tuple[int, ...]) -> int:
        cid = self.class_id.get(_canonical_pair(s, t))
        if cid is None:
            raise VertexMissing(f"no such stack pair: {s}, {t}")
        pcode = self.array_code(x) * self.num_arrays + self.array_code(y)
        codes = self.member_codes[cid]
        pos = int(np.searchsorted(codes, pcode))
        if pos == len(codes) or codes[pos] != pcode:
            raise VertexMissing(f"pair ({s},{t}) with arrays {x},{y} not a vertex")
        return int(self.offsets[cid]) + pos

    def decode(self, vid: int):
        """("L1", stack) or ("L2", (S1,S2), x, y) for a vertex id."""
        if not 0 <= vid < self.num_vertices:
            raise VertexMissing(f"vertex id {vid} out of range")
        if vid < self.n_l1:
            return ("L1", self.l1_stack(vid))
        cid = int(np.searchsorted(self.offsets, vid, side="right")) - 1
        pcode = int(self.member_codes[cid][vid - int(self.offsets[cid])])
        x = self.array_coords(pcode // self.num_arrays)
        y = self.array_coords(pcode % self.num_arrays)
        return ("L2", self.classes[cid], x, y)

    def label(self, vid: int) -> str:
        """Canonical text encoding for legends and reports."""
        parts = self.decode(vid)
        if parts[0] == "L1":
            return f"S:{stack_to_text(parts[1])}"
        (s1, s2), x, y = parts[1], parts[2], parts[3]
        return (
            f"P:{stack_to_text(s1)}|{stack_to_text(s2)};"
            f"X:{coords_to_text(x)};Y:{coords_to_text(y)}"
        )

    def labels(self) -> Iterator[str]:
        return (self.label(v) for v in range(self.num_vertices))


def _class_pairs(k: int, n: int) -> list[PairKey]:
    pairs = set()
    total = k - 2
    for len1 in range(total + 1):
        for s in itertools.product(range(n), repeat=len1):
            for t in itertools.product(range(n), repeat=total - len1):
                pairs.add(_canonical_pair(s, t))
    return sorted(pairs)


def _class_transitions(
    classes: list[PairKey], class_id: dict[PairKey, int], n: int
) -> dict[int, tuple[int, ...]]:
    """Undirected class adjacency under both vector-change families.

    The edge set between two classes never depends on which rule or
    moved vector produced the transition (it is always the same-(x,y)
    pairing), so transitions are deduplicated per class pair; a
    transition back into the same class would only contribute
    self-loops, already implied by the coordinate-change clique.
    """
    out: dict[int, set[int]] = {cid: set() for cid in range(len(classes))}
    for cid, (c1, c2) in enumerate(classes):
        for s1, s2 in ((c1, c2), (c2, c1)):
            if not s1:
                continue
            shrunk = s1[:-1]
            for a in range(n):
                for target in (
                    _canonical_pair(shrunk, s2 + (a,)),  # pop one, push on the other
                    _canonical_pair(shrunk + (a,), s2),  # pop one, push back on it
                ):
                    tid = class_id[target]
                    if tid != cid:
                        out[cid].add(tid)
                        out[tid].add(cid)
    return {cid: tuple(sorted(nbrs)) for cid, nbrs in out.items()}


def build_index(inst: OvInstance) -> GadgetIndex:
    k, d, n = inst.k, inst.d, inst.n
    m = k - 1
    a_count = d**m
    codes = np.arange(a_count, dtype=np.int64)
    digits = np.empty((a_count, m), np.int64)
    for i in range(m):
        digits[:, m - 1 - i] = (codes // d**i) % d

    classes = _class_pairs(k, n)
    class_id = {pc: i for i, pc in enumerate(classes)}
    index = GadgetIndex(
        inst=inst,
        n_l1=n**m,
        classes=tuple(classes),
        class_id=class_id,
        member_codes=[],
        offsets=np.zeros(len(classes) + 1, np.int64),
        digits=digits,
        transitions={},
        anchors={},
    )
    offsets = [n**m]
    for c1, c2 in classes:
        fwd = index.sat(c1 + c2)
        bwd = index.sat(c2 + c1)
        grid = (fwd[:, None] & bwd[None, :]) | (bwd[:, None] & fwd[None, :])
        members = np.flatnonzero(grid.ravel()).astype(np.int64)
        index.member_codes.append(members)
        offsets.append(offsets[-1] + len(members))
    index.offsets = np.array(offsets, np.int64)
    index.transitions = _class_transitions(classes, class_id, n)
    index.anchors = {
        cid: pair[1] for cid, pair in enumerate(classes) if pair[0] == ()
    }
    return index


def _build_graph(index: GadgetIndex) -> Graph:
    inst = index.inst
    n, m = inst.n, index.k - 1
    a_count = index.num_arrays
    us: list[np.ndarray] = []
    vs: list[np.ndarray] = []

    # L1 attachment: stack S connects to ({popped(S), ()}, x, y) for every
    # x, y the full stack satisfies (such targets always pass membership,
    # satisfaction being closed under dropping the top).
    for scode in range(index.n_l1):
        stack = index.l1_stack(scode)
        sat_codes = np.flatnonzero(index.sat(stack))
        if not sat_codes.size:
            continue
        cid = index.class_id[_canonical_pair(stack[:-1], ())]
        pcodes = (sat_codes[:, None] * a_count + sat_codes[None, :]).ravel()
        ranks = np.searchsorted(index.member_codes[cid], pcodes)
        us.append(np.full(len(pcodes), scode, np.int64))
        vs.append(index.offsets[cid] + ranks)

    # Vector-change families: same (x, y) in both classes.
    for cid, nbrs in index.transitions.items():
        for tid in nbrs:
            if tid <= cid:
                continue
            common = np.intersect1d(
                index.member_codes[cid], index.member_codes[tid], assume_unique=True
            )
            if common.size:
                us.append(index.offsets[cid] + np.searchsorted(index.member_codes[cid], common))
                vs.append(index.offsets[tid] + np.searchsorted(index.member_codes[tid], common))

    total = index.num_vertices
    clique_class = np.full(total, -1, np.int64)
    for cid in range(len(index.classes)):
        clique_class[index.offsets[cid] : index.offsets[cid + 1]] = cid
    u_all = np.concatenate(us) if us else np.zeros(0, np.int64)
    v_all = np.concatenate(vs) if vs else np.zeros(0, np.int64)
    return from_edges(
        total,
        u_all,
        v_all,
        clique_class=clique_class,
        class_indptr=index.offsets - index.n_l1,
        class_members=np.arange(index.n_l1, total, dtype=np.int64),
    )


def build_k4_graph(inst: OvInstance) -> tuple[Graph, GadgetIndex]:
    if inst.k != 4:
        raise WrongK(f"k=4 builder got k={inst.k}")
    index = build_index(inst)
    return _build_graph(index), index


def build_k5_graph(inst: OvInstance) -> tuple[Graph, GadgetIndex]:
    if inst.k != 5:
        raise WrongK(f"k=5 builder got k={inst.k}")
    index = build_index(inst)
    return _build_graph(index), index


def endpoint_pair(inst: OvInstance, witness: OvWitness) -> tuple[int, int]:
    """Ids of the L1 vertices (a_1,...,a_{k-1}) and (a_k,...,a_2)."""
    k, n = inst.k, inst.n
    idx = witness.indices
    if len(idx) != k:
        raise VertexMissing(f"witness must list exactly {k} vectors")
    if any(not 0 <= i < n for i in idx):
        raise VertexMissing("witness index out of range")
    index = build_index(inst)  # cheap relative to graph build; ids need no edges
    u = index.l1_code(tuple(idx[: k - 1]))
    v = index.l1_code(tuple(reversed(idx[1:])))
    return u, v


def vertex_bounds(inst: OvInstance) -> tuple[int, int]:
    """Documented closed-form ceilings (|L1| bound, |L2| bound)."""
    k, d, n = inst.k, inst.d, inst.n
    return n ** (k - 1), n ** (k - 2) * d ** (2 * (k - 1))


# --- compact class-level BFS ----------------------------------------
#
# For instances whose explicit gadget would be too large to build or
# sweep, distances from one L1 vertex are computed directly on the
# class structure: per class a packed bitset over pair codes, expanded
# level-synchronously.  Coordinate-change cliques make "first touch of
# a class" pull in the whole class one level later; vector-change
# transitions intersect a frontier with the neighbor class's members;
# L1 vertices attach through the {(), T} classes.


def _member_packed(index: GadgetIndex, cid: int) -> np.ndarray:
    """Class membership as row-packed bits: [A, ceil(A/8)] uint8."""
    a_count = index.num_arrays
    grid = np.zeros(a_count * a_count, bool)
    grid[index.member_codes[cid]] = True
    return np.packbits(grid.reshape(a_count, a_count), axis=1)


def compact_bfs_levels(
    inst: OvInstance, source_stack: Stack, max_level: int
) -> tuple[dict[int, int], dict[int, np.ndarray], GadgetIndex]:
    """Exact BFS levels up to max_level without materializing the graph.

    Returns (l1_levels, l2_levels, index): level per reached L1 code,
    and per class a level array aligned with member_codes (-1 where the
    member is unreached within the horizon).
    """
    index = build_index(inst)
    a_count = index.num_arrays
    n = inst.n

    member_p = [_member_packed(index, cid) for cid in range(len(index.classes))]
    visited_l2 = {cid: np.zeros_like(member_p[cid]) for cid in range(len(index.classes))}
    l2_levels = {
        cid: np.full(len(index.member_codes[cid]), -1, np.int64)
        for cid in range(len(index.classes))
    }
    l1_levels: dict[int, int] = {}
    class_pulled = np.zeros(len(index.classes), bool)

    src = index.l1_code(tuple(source_stack))
    l1_levels[src] = 0
    frontier_l1 = {src}
    frontier_l2: dict[int, np.ndarray] = {}

    def record_l2(cid: int, fresh: np.ndarray, level: int) -> None:
        # fresh is visited-masked, so every set bit is a first touch
        grid = np.unpackbits(fresh, axis=1, count=a_count).astype(bool)
        codes = np.flatnonzero(grid.ravel())
        if codes.size:
            pos = np.searchsorted(index.member_codes[cid], codes)
            l2_levels[cid][pos] = level

    for level in range(1, max_level + 1):
        pending: dict[int, np.ndarray] = {}
        next_l1: set[int] = set()

        def pend_or(cid: int, bits: np.ndarray) -> None:
            slot = pending.get(cid)
            if slot is None:
                pending[cid] = bits.copy()
            else:
                slot |= bits

        for cid, fr in frontier_l2.items():
            if not class_pulled[cid]:
                class_pulled[cid] = True
                pend_or(cid, member_p[cid])  # coordinate change: whole class
            for tid in index.transitions[cid]:
                pend_or(tid, fr & member_p[tid])
            anchor = index.anchors.get(cid)
            if anchor is not None:
                for a in range(n):
                    scode = index.l1_code(anchor + (a,))
                    if scode in l1_levels or scode in next_l1:
                        continue
                    sat_s = index.sat(anchor + (a,))
                    hit_rows = fr[sat_s]
                    if not hit_rows.size:
                        continue
                    any_row = np.bitwise_or.reduce(hit_rows, axis=0)
                    cols = np.unpackbits(any_row, count=a_count).astype(bool)
                    if np.any(cols & sat_s):
                        next_l1.add(scode)

        for scode in frontier_l1:
            stack = index.l1_stack(scode)
            sat_s = index.sat(stack)
            if not sat_s.any():
                continue
            cid = index.class_id[_canonical_pair(stack[:-1], ())]
            grid = np.zeros((a_count, a_count), bool)
            grid[np.ix_(sat_s, sat_s)] = True
            pend_or(cid, np.packbits(grid, axis=1))

        frontier_l2 = {}
        for cid, bits in pending.items():
            fresh = bits & ~visited_l2[cid]
            if fresh.any():
                visited_l2[cid] |= fresh
                frontier_l2[cid] = fresh
                record_l2(cid, fresh, level)
        for scode in next_l1:
            l1_levels[scode] = level
        frontier_l1 = next_l1
        if not frontier_l1 and not frontier_l2:
            break

    return l1_levels, l2_levels, index


def compact_endpoint_distance(
    inst: OvInstance, witness: OvWitness, max_level: int
) -> int | None:
    """Distance between the two endpoint L1 vertices if <= max_level,
    else None (meaning the distance exceeds the horizon)."""
    k = inst.k
    idx = witness.indices
    if len(idx) != k:
        raise VertexMissing(f"witness must list exactly {k} vectors")
    source = tuple(idx[: k - 1])
    target = tuple(reversed(idx[1:]))
    l1_levels, _, index = compact_bfs_levels(inst, source, max_level)
    return l1_levels.get(index.l1_code(target))
