"""Undirected graphs from edge lists, plus domination counting.

Graphs are loaded from whitespace-separated edge lists (the format the
common benchmark repositories distribute), kept immutable after load, and
shared freely between runs.  Domination counts support both a from-scratch
evaluation (the contract) and an incremental update proportional to the
degrees of the flipped nodes (the fast path used inside optimization loops).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np


class EdgeListError(ValueError):
    """Raised when an edge-list stream cannot be parsed."""


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph with nodes 0..n-1.

    adjacency[i] is a sorted int array of the neighbors of i; degrees[i]
    equals len(adjacency[i]).  Instances are immutable after construction
    and safe to share across workers.
    """

    n: int
    adjacency: tuple[np.ndarray, ...]
    degrees: np.ndarray

    @property
    def num_edges(self) -> int:
        return int(self.degrees.sum()) // 2


def _build_graph(n: int, edges: set[tuple[int, int]]) -> Graph:
    neighbor_lists: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        neighbor_lists[u].append(v)
        neighbor_lists[v].append(u)
    adjacency = tuple(np.array(sorted(nbrs), dtype=np.int64) for nbrs in neighbor_lists)
    degrees = np.array([len(a) for a in adjacency], dtype=np.int64)
    return Graph(n=n, adjacency=adjacency, degrees=degrees)


def graph_from_edges(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Build a graph from 0-based edge pairs; self-loops and duplicates dropped."""
    if n < 1:
        raise ValueError("a graph must have at least one node")
    dedup: set[tuple[int, int]] = set()
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
        if u == v:
            continue
        dedup.add((min(u, v), max(u, v)))
    return _build_graph(n, dedup)


def load_edge_list(source: str | Iterable[str]) -> Graph:
    """Parse an edge-list stream into a Graph.

    Accepts a string or an iterable of lines.  Each data line holds two
    whitespace-separated integer node ids; lines starting with ``%`` or ``#``
    are comments (MatrixMarket headers included).  A first data line with
    three integers is treated as a MatrixMarket size header and skipped.
    Node ids may be 0- or 1-based: if the minimum id seen is 1 the whole
    file is shifted down by one.  Self-loops and duplicate edges are
    dropped; n = max id + 1 after shifting, so ids never mentioned in any
    edge become isolated nodes.

    Raises EdgeListError (with the offending line number) on malformed or
    negative ids, and on streams containing no node ids at all.
    """
    lines = source.splitlines() if isinstance(source, str) else source
    pairs: list[tuple[int, int]] = []
    min_id: int | None = None
    max_id = -1
    saw_data_line = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("%") or line.startswith("#"):
            continue
        tokens = line.split()
        try:
            ids = [int(tok) for tok in tokens]
        except ValueError:
            raise EdgeListError(f"line {lineno}: malformed token in {line!r}") from None
        if not saw_data_line and len(ids) == 3:
            # MatrixMarket coordinate size header ("rows cols nnz").
            saw_data_line = True
            continue
        saw_data_line = True
        if len(ids) != 2:
            raise EdgeListError(f"line {lineno}: expected two node ids, got {len(ids)}")
        u, v = ids
        if u < 0 or v < 0:
            raise EdgeListError(f"line {lineno}: negative node id")
        pairs.append((u, v))
        lo, hi = min(u, v), max(u, v)
        min_id = lo if min_id is None else min(min_id, lo)
        max_id = max(max_id, hi)
    if min_id is None:
        raise EdgeListError("empty edge list: a graph must have at least one node")
    shift = 1 if min_id == 1 else 0
    n = max_id + 1 - shift
    return graph_from_edges(n, ((u - shift, v - shift) for u, v in pairs))


@dataclass
class DominationState:
    """Per-node dominator counts for one bit-vector selection.

    cover_count[v] counts the selected nodes covering v (v itself if
    selected, plus each selected neighbor); dominated_total is the number
    of nodes with cover_count >= 1.  Mutable, owned by a single run.
    """

    cover_count: np.ndarray
    dominated_total: int

    def copy(self) -> "DominationState":
        return DominationState(self.cover_count.copy(), self.dominated_total)


def domination_state(g: Graph, x: np.ndarray) -> DominationState:
    """From-scratch domination state of selection x (|x| = g.n)."""
    if len(x) != g.n:
        raise ValueError(f"solution length {len(x)} != node count {g.n}")
    cover = np.zeros(g.n, dtype=np.int64)
    for i in np.flatnonzero(x):
        cover[i] += 1
        cover[g.adjacency[i]] += 1
    return DominationState(cover, int(np.count_nonzero(cover)))


def count_dominated(g: Graph, x: np.ndarray) -> int:
    """Number of nodes that are selected in x or adjacent to a selected node."""
    return domination_state(g, x).dominated_total


def flip_update(
    g: Graph,
    state: DominationState,
    flipped_bits: Iterable[int],
    new_x: np.ndarray,
) -> DominationState:
    """Domination state after flipping the given bits, from the pre-flip state.

    Pure: returns a fresh state equal to domination_state(g, new_x).  Cost
    beyond the O(n) copy is proportional to the degrees of the flipped
    nodes only.
    """
    cover = state.cover_count.copy()
    total = state.dominated_total
    for i in flipped_bits:
        delta = 1 if new_x[i] else -1
        nbrs = g.adjacency[int(i)]
        old_self = cover[i]
        old_nbrs = cover[nbrs]
        cover[i] += delta
        cover[nbrs] += delta
        if delta > 0:
            total += int(old_self == 0) + int(np.count_nonzero(old_nbrs == 0))
        else:
            total -= int(old_self == 1) + int(np.count_nonzero(old_nbrs == 1))
    return DominationState(cover, total)
