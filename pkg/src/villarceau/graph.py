"""Immutable graph container and unweighted shortest-path machinery."""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

import numpy as np

Coord = tuple[int, int]

DIST_DTYPE = np.int16


class DisconnectedGraphError(ValueError):
    """Raised when a BFS fails to reach every vertex."""


@dataclass(frozen=True)
class DiagGraph:
    """Undirected simple graph whose vertices are labelled by coordinates.

    Vertex ids follow the sorted order of the labels, so two graphs built
    from the same vertex and edge sets always agree on ids.
    """

    coords: tuple[Hashable, ...]
    adjacency: tuple[tuple[int, ...], ...]
    coord_index: dict = field(repr=False, compare=False)

    @classmethod
    def from_edges(cls, labels: Iterable[Hashable], edges: Iterable[tuple[Hashable, Hashable]]) -> "DiagGraph":
        coords = tuple(sorted(set(labels)))
        index = {c: i for i, c in enumerate(coords)}
        nbrs: list[set[int]] = [set() for _ in coords]
        for a, b in edges:
            ia, ib = index[a], index[b]
            if ia == ib:
                raise ValueError(f"self-loop at {a!r}")
            nbrs[ia].add(ib)
            nbrs[ib].add(ia)
        adjacency = tuple(tuple(sorted(s)) for s in nbrs)
        return cls(coords, adjacency, index)

    @property
    def vertex_count(self) -> int:
        return len(self.coords)

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(u, v)`` id pairs with ``u < v``, sorted."""
        return [(u, v) for u, nb in enumerate(self.adjacency) for v in nb if u < v]

    def id_of(self, label: Hashable) -> int:
        try:
            return self.coord_index[label]
        except KeyError:
            raise KeyError(f"{label!r} is not a vertex") from None

    def ids_of(self, labels: Iterable[Hashable]) -> list[int]:
        return [self.id_of(c) for c in labels]


def bfs_distances(g: DiagGraph, src: int) -> list[int]:
    """Hop counts from ``src`` to every vertex."""
    if not 0 <= src < g.vertex_count:
        raise IndexError(f"source {src} out of range")
    dist = [-1] * g.vertex_count
    dist[src] = 0
    queue = deque([src])
    adj = g.adjacency
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = du
                queue.append(w)
    for v, dv in enumerate(dist):
        if dv < 0:
            raise DisconnectedGraphError(f"unreachable vertex {g.coords[v]!r} from {g.coords[src]!r}")
    return dist


def all_pairs(g: DiagGraph) -> np.ndarray:
    """All-pairs hop-count matrix built from one BFS per vertex."""
    n = g.vertex_count
    d = np.empty((n, n), dtype=DIST_DTYPE)
    for v in range(n):
        d[v] = bfs_distances(g, v)
    d.setflags(write=False)
    return d


def sphere(g: DiagGraph, v: int, r: int, d: np.ndarray | None = None) -> list[int]:
    """Sorted ids of the vertices at distance exactly ``r`` from ``v``."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    row = d[v] if d is not None else np.asarray(bfs_distances(g, v))
    return [int(w) for w in np.flatnonzero(row == r)]


def diameter(g: DiagGraph, d: np.ndarray | None = None) -> int:
    if d is None:
        d = all_pairs(g)
    return int(d.max()) if g.vertex_count else 0


def degree_multiset(g: DiagGraph) -> dict[int, int]:
    """Map degree -> number of vertices with that degree, keys ascending."""
    counts = Counter(len(a) for a in g.adjacency)
    return dict(sorted(counts.items()))


def distance_sum(d: np.ndarray) -> int:
    """Sum of distances over unordered pairs of distinct vertices."""
    return int(np.triu(d.astype(np.int64), 1).sum())


def average_distance(g: DiagGraph, d: np.ndarray | None = None) -> Fraction:
    """Mean distance over unordered pairs of distinct vertices, as an exact fraction."""
    n = g.vertex_count
    if n < 2:
        raise ValueError("undefined average distance: fewer than two vertices")
    if d is None:
        d = all_pairs(g)
    return Fraction(distance_sum(d), n * (n - 1) // 2)


def label_text(label: Hashable) -> str:
    """``(x, y)`` -> ``"x,y"``; other labels pass through ``str``."""
    if isinstance(label, tuple):
        return ",".join(str(p) for p in label)
    return str(label)


def labels_text(g: DiagGraph, ids: Sequence[int]) -> list[str]:
    return [label_text(g.coords[i]) for i in ids]
