"""Compact undirected graphs and the distance toolbox.

Graphs are CSR adjacency over int64 arrays, optionally carrying 0/1
edge weights (never combined with an overlay).  Large clique families
(the coordinate-change edges of the gadget builders) are stored as an
*overlay*: each vertex may point at one clique class, and BFS expands a
class the first time it is touched instead of walking quadratically
many materialised edges.  `materialize_cliques` converts the overlay
into explicit edges (including the per-member self-loops) when a dump
or an oracle needs them.

Distances use the sentinel V (an impossible hop count) for unreachable
vertices.  Env var DIAM_THREADS caps the parallel all-pairs sweep.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import _kernels

__all__ = [
    "Graph",
    "Disconnected",
    "DiameterResult",
    "from_edges",
    "bfs",
    "zero_one_bfs",
    "contract_zero_edges",
    "exact_diameter",
    "eccentricity",
    "two_approx",
    "materialize_cliques",
    "dump_graph",
    "load_graph",
    "write_legend",
    "export_distances_csv",
]

_EMPTY_I64 = np.zeros(0, np.int64)
_ZERO_PTR = np.zeros(1, np.int64)


class Disconnected(RuntimeError):
    """Raised by whole-graph distance queries on disconnected graphs."""


@dataclass
class Graph:
    """Immutable-by-convention CSR graph; searches never mutate it."""

    num_vertices: int
    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray | None = None
    clique_class: np.ndarray | None = None
    class_indptr: np.ndarray | None = None
    class_members: np.ndarray | None = None
    _num_edges: int | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.weights is not None and self.clique_class is not None:
            raise ValueError("0/1 weights and a clique overlay cannot be combined")

    @property
    def infinity(self) -> int:
        """Distance sentinel for unreachable vertices."""
        return self.num_vertices

    @property
    def has_overlay(self) -> bool:
        return self.clique_class is not None and len(self.class_indptr) > 1

    def _overlay_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        if self.clique_class is None:
            return (
                np.full(self.num_vertices, -1, np.int64),
                _ZERO_PTR,
                _EMPTY_I64,
            )
        return self.clique_class, self.class_indptr, self.class_members

    @property
    def num_edges(self) -> int:
        """Undirected edge count: CSR edges plus all implied clique edges
        (every unordered member pair and one self-loop per member)."""
        if self._num_edges is None:
            loops = int(
                np.count_nonzero(
                    np.repeat(np.arange(self.num_vertices, dtype=np.int64), np.diff(self.indptr))
                    == self.indices
                )
            )
            total = (len(self.indices) + loops) // 2
            if self.clique_class is not None:
                sizes = np.diff(self.class_indptr)
                total += int(np.sum(sizes * (sizes + 1) // 2))
            object.__setattr__(self, "_num_edges", total)
        return self._num_edges


class DiameterResult(NamedTuple):
    diameter: int
    witness: tuple[int, int]


def from_edges(
    num_vertices: int,
    u: Sequence[int] | np.ndarray,
    v: Sequence[int] | np.ndarray,
    weights: Sequence[int] | np.ndarray | None = None,
    clique_class: np.ndarray | None = None,
    class_indptr: np.ndarray | None = None,
    class_members: np.ndarray | None = None,
) -> Graph:
    """Assemble a symmetric CSR graph from an undirected edge list.

    Each undirected edge appears once in (u, v); self-loops allowed.
    """
    ua = np.asarray(u, np.int64)
    va = np.asarray(v, np.int64)
    if ua.shape != va.shape:
        raise ValueError("endpoint arrays differ in length")
    wa = None if weights is None else np.asarray(weights, np.int64)
    loop = ua == va
    heads = np.concatenate([ua, va[~loop]])
    tails = np.concatenate([va, ua[~loop]])
    if wa is not None:
        wboth = np.concatenate([wa, wa[~loop]])
    deg = np.bincount(heads, minlength=num_vertices)
    indptr = np.zeros(num_vertices + 1, np.int64)
    np.cumsum(deg, out=indptr[1:])
    order = np.argsort(heads, kind="stable")
    indices = tails[order]
    return Graph(
        num_vertices=num_vertices,
        indptr=indptr,
        indices=indices,
        weights=None if wa is None else wboth[order],
        clique_class=clique_class,
        class_indptr=class_indptr,
        class_members=class_members,
    )


def _bfs_raw(g: Graph, source: int) -> tuple[np.ndarray, int]:
    """Distances with -1 for unreached, plus the reached count."""
    if not 0 <= source < g.num_vertices:
        raise ValueError(f"source {source} out of range")
    cc, cptr, cmem = g._overlay_arrays()
    dist = np.full(g.num_vertices, -1, np.int64)
    class_done = np.zeros(max(len(cptr) - 1, 1), np.uint8)
    queue = np.empty(g.num_vertices, np.int64)
    reached = _kernels.bfs_fill(
        g.indptr, g.indices, cc, cptr, cmem, source, dist, class_done, queue
    )
    return dist, int(reached)


def bfs(g: Graph, source: int) -> np.ndarray:
    """Exact hop distances from source; unreachable entries = g.infinity."""
    dist, _ = _bfs_raw(g, source)
    dist[dist < 0] = g.infinity
    return dist


def zero_one_bfs(g: Graph, source: int) -> np.ndarray:
    """Shortest paths under 0/1 edge weights (deque search)."""
    if g.weights is None:
        raise ValueError("graph is not in 0/1 weighted mode")
    if not 0 <= source < g.num_vertices:
        raise ValueError(f"source {source} out of range")
    dist = np.full(g.num_vertices, -1, np.int64)
    settled = np.zeros(g.num_vertices, np.uint8)
    buf = np.empty(2 * (len(g.indices) + 1), np.int64)
    _kernels.zero_one_fill(g.indptr, g.indices, g.weights, source, dist, settled, buf)
    dist[dist < 0] = g.infinity
    return dist


def contract_zero_edges(g: Graph) -> tuple[Graph, np.ndarray]:
    """Quotient by weight-0 components; returns (unit-weight graph, mapping).

    mapping[v] is v's vertex id in the quotient; hop distances there
    equal 0/1 distances in the input.
    """
    if g.weights is None:
        raise ValueError("graph is not in 0/1 weighted mode")
    parent = np.arange(g.num_vertices, dtype=np.int64)

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    heads = np.repeat(np.arange(g.num_vertices, dtype=np.int64), np.diff(g.indptr))
    zero = g.weights == 0
    for a, b in zip(heads[zero], g.indices[zero]):
        ra, rb = find(int(a)), find(int(b))
        if ra != rb:
            parent[rb] = ra
    roots = np.array([find(int(v)) for v in range(g.num_vertices)], np.int64)
    uniq, mapping = np.unique(roots, return_inverse=True)
    ones = ~zero
    pairs = {
        (min(int(a), int(b)), max(int(a), int(b)))
        for a, b in zip(mapping[heads[ones]], mapping[g.indices[ones]])
    }
    if pairs:
        ua, va = map(np.asarray, zip(*sorted(pairs)))
    else:
        ua, va = _EMPTY_I64, _EMPTY_I64
    return from_edges(len(uniq), ua, va), mapping


def _thread_cap() -> None:
    if not _kernels.USING_NUMBA:
        return
    raw = os.environ.get("DIAM_THREADS", "")
    if not raw:
        return
    import numba

    want = max(1, int(raw))
    numba.set_num_threads(min(want, numba.config.NUMBA_NUM_THREADS))


def _ecc_many(g: Graph, sources: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    cc, cptr, cmem = g._overlay_arrays()
    _thread_cap()
    ecc, far, reached = _kernels.ecc_batch(g.indptr, g.indices, cc, cptr, cmem, sources)
    if np.any(reached < g.num_vertices):
        raise Disconnected("graph is not connected")
    return ecc, far


def exact_diameter(
    g: Graph, mode: str = "full", sources: Sequence[int] | None = None
) -> DiameterResult:
    """Largest shortest-path distance, with a witness pair.

    mode="full" sweeps every vertex (exact); mode="targeted" sweeps
    only the given sources, yielding max eccentricity over them (a
    lower bound on D in general, exact when a diameter endpoint is
    among the sources).
    """
    if g.weights is not None:
        raise ValueError("exact_diameter runs on unweighted graphs; contract first")
    if mode == "full":
        src = np.arange(g.num_vertices, dtype=np.int64)
    elif mode == "targeted":
        if sources is None or len(sources) == 0:
            raise ValueError("targeted mode needs at least one source")
        src = np.asarray(sources, np.int64)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    ecc, far = _ecc_many(g, src)
    best = int(np.argmax(ecc))
    return DiameterResult(int(ecc[best]), (int(src[best]), int(far[best])))


def eccentricity(g: Graph, source: int) -> tuple[int, int]:
    """(eccentricity of source, one farthest vertex). Raises Disconnected."""
    dist, reached = _bfs_raw(g, source)
    if reached < g.num_vertices:
        raise Disconnected("graph is not connected")
    far = int(np.argmax(dist))
    return int(dist[far]), far


def two_approx(g: Graph) -> int:
    """Folklore baseline: eccentricity of vertex 0.

    Always within [ceil(D/2), D] of the true diameter D.
    """
    return eccentricity(g, 0)[0]


def materialize_cliques(g: Graph) -> Graph:
    """Expand the clique overlay into explicit CSR edges.

    Each class contributes every unordered member pair plus one
    self-loop per member; the result has no overlay.
    """
    if not g.has_overlay:
        return Graph(g.num_vertices, g.indptr, g.indices, weights=g.weights)
    extra_u: list[np.ndarray] = []
    extra_v: list[np.ndarray] = []
    cptr, cmem = g.class_indptr, g.class_members
    for c in range(len(cptr) - 1):
        members = cmem[cptr[c] : cptr[c + 1]]
        m = len(members)
        iu, iv = np.triu_indices(m)  # includes the diagonal: self-loops
        extra_u.append(members[iu])
        extra_v.append(members[iv])
    heads = np.repeat(np.arange(g.num_vertices, dtype=np.int64), np.diff(g.indptr))
    keep = heads <= g.indices  # one record per undirected CSR edge
    all_u = np.concatenate([heads[keep]] + extra_u)
    all_v = np.concatenate([g.indices[keep]] + extra_v)
    return from_edges(g.num_vertices, all_u, all_v)


def dump_graph(g: Graph, path: str) -> None:
    """Write the text dump: "p diam V E" then one "e u v w" per edge.

    Vertex ids are 0-based, u <= v, self-loops once, w in {0,1}
    (1 for unweighted graphs).  Overlay cliques are written explicitly.
    """
    gg = materialize_cliques(g) if g.has_overlay else g
    heads = np.repeat(np.arange(gg.num_vertices, dtype=np.int64), np.diff(gg.indptr))
    keep = heads <= gg.indices
    us, vs = heads[keep], gg.indices[keep]
    ws = np.ones(len(us), np.int64) if gg.weights is None else gg.weights[keep]
    with open(path, "w") as fh:
        fh.write(f"p diam {gg.num_vertices} {len(us)}\n")
        for a, b, w in zip(us, vs, ws):
            fh.write(f"e {a} {b} {w}\n")


def load_graph(path: str) -> Graph:
    """Read a "p diam V E" dump back into a Graph.

    Weights are attached only when some edge has weight 0 (otherwise
    the graph is plain unweighted).  Raises ValueError on malformed input.
    """
    us: list[int] = []
    vs: list[int] = []
    ws: list[int] = []
    header = None
    with open(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "p":
                if header is not None or len(parts) != 4 or parts[1] != "diam":
                    raise ValueError(f"line {line_no}: bad problem line")
                header = (int(parts[2]), int(parts[3]))
            elif parts[0] == "e":
                if header is None or len(parts) != 4:
                    raise ValueError(f"line {line_no}: bad edge line")
                a, b, w = int(parts[1]), int(parts[2]), int(parts[3])
                if not (0 <= a < header[0] and 0 <= b < header[0] and w in (0, 1)):
                    raise ValueError(f"line {line_no}: edge out of range")
                us.append(a)
                vs.append(b)
                ws.append(w)
            else:
                raise ValueError(f"line {line_no}: unknown record {parts[0]!r}")
    if header is None:
        raise ValueError("missing problem line")
    if len(us) != header[1]:
        raise ValueError(f"edge count mismatch: header {header[1]}, found {len(us)}")
    use_weights = any(w == 0 for w in ws)
    return from_edges(header[0], us, vs, weights=ws if use_weights else None)


def write_legend(path: str, labels: Sequence[str]) -> None:
    """Vertex legend: one "id<TAB>encoding" line per vertex."""
    with open(path, "w") as fh:
        for i, text in enumerate(labels):
            fh.write(f"{i}\t{text}\n")


def export_distances_csv(g: Graph, pairs: Sequence[tuple[int, int]], path: str) -> None:
    """Write sampled pair distances as CSV rows (source,target,distance)."""
    cache: dict[int, np.ndarray] = {}
    with open(path, "w") as fh:
        fh.write("source,target,distance\n")
        for s, t in pairs:
            if s not in cache:
                cache[s] = bfs(g, s)
            fh.write(f"{s},{t},{int(cache[s][t])}\n")
