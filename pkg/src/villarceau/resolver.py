"""Resolving sets and exact metric dimension.

The exact solver treats metric dimension as a set cover: every unordered
vertex pair must be separated by at least one landmark, and landmark ``v``
separates ``{a, b}`` when ``d(v, a) != d(v, b)``. Pair coverage rows are
Python integers used as bitsets.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Sequence

import numpy as np

from .graph import DiagGraph, all_pairs


class Status(str, Enum):
    EXACT = "exact"
    UPPER_BOUND_ONLY = "upper_bound_only"
    TIMEOUT = "timeout"

    def __str__(self) -> str:
        return self.value


def _check_landmarks(n: int, landmarks: Sequence[int]) -> None:
    if not landmarks:
        raise ValueError("landmark set must be non-empty")
    for v in landmarks:
        if not 0 <= v < n:
            raise IndexError(f"landmark {v} out of range")


def code_table(d: np.ndarray, landmarks: Sequence[int]) -> list[tuple[int, ...]]:
    """Distance vector of every vertex, components in landmark order."""
    _check_landmarks(len(d), landmarks)
    cols = d[:, list(landmarks)]
    return [tuple(int(x) for x in row) for row in cols]


def is_resolving(d: np.ndarray, landmarks: Sequence[int]) -> tuple[bool, tuple[int, int] | None]:
    """Whether all codes are distinct.

    On failure also returns the lexicographically first pair ``(a, b)``,
    ``a < b``, of vertices sharing a code.
    """
    codes = code_table(d, landmarks)
    first: dict[tuple[int, ...], int] = {}
    witness = None
    for v, code in enumerate(codes):
        if code in first:
            cand = (first[code], v)
            if witness is None or cand < witness:
                witness = cand
        else:
            first[code] = v
    return witness is None, witness


def _pack_rows(bits: np.ndarray) -> tuple[int, ...]:
    packed = np.packbits(bits, axis=1, bitorder="little")
    return tuple(int.from_bytes(row.tobytes(), "little") for row in packed)


@dataclass(frozen=True)
class PairMatrix:
    """Per-vertex bitset over all unordered pairs ``(a, b)``, ``a < b``, in row-major order."""

    n: int
    rows: tuple[int, ...]
    _first: np.ndarray = field(repr=False, compare=False)
    _second: np.ndarray = field(repr=False, compare=False)

    @property
    def n_pairs(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def full(self) -> int:
        return (1 << self.n_pairs) - 1

    def pair_index(self, a: int, b: int) -> int:
        if a > b:
            a, b = b, a
        if a == b:
            raise ValueError("a pair needs two distinct vertices")
        return a * self.n - a * (a + 1) // 2 + (b - a - 1)

    def pair_at(self, p: int) -> tuple[int, int]:
        return int(self._first[p]), int(self._second[p])

    def coverage(self, landmarks: Sequence[int]) -> int:
        mask = 0
        for v in landmarks:
            mask |= self.rows[v]
        return mask

    def covers(self, landmarks: Sequence[int]) -> bool:
        return self.coverage(landmarks) == self.full


def separation_bits(d: np.ndarray) -> np.ndarray:
    """Boolean ``(n, n_pairs)`` array: entry ``[v, p]`` is True iff ``v`` separates pair ``p``."""
    n = len(d)
    first, second = np.triu_indices(n, 1)
    return d[:, first] != d[:, second]


def pair_matrix(d: np.ndarray) -> PairMatrix:
    n = len(d)
    first, second = np.triu_indices(n, 1)
    return PairMatrix(n, _pack_rows(separation_bits(d)), first, second)


def greedy_upper_bound(d: np.ndarray) -> list[int]:
    """Greedy cover: repeatedly add the vertex separating most remaining pairs (least id on ties)."""
    pm = pair_matrix(d)
    uncovered = pm.full
    chosen: list[int] = []
    while uncovered:
        best, best_gain = -1, 0
        for v, row in enumerate(pm.rows):
            gain = (row & uncovered).bit_count()
            if gain > best_gain:
                best, best_gain = v, gain
        chosen.append(best)
        uncovered &= ~pm.rows[best]
    return sorted(chosen)


def twin_classes(d: np.ndarray) -> list[list[int]]:
    """Classes of mutually twin vertices: rows equal everywhere outside the two vertices."""
    n = len(d)
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u in range(n):
        for v in range(u + 1, n):
            diff = np.flatnonzero(d[u] != d[v])
            if all(w in (u, v) for w in diff):
                parent[find(v)] = find(u)
    classes: dict[int, list[int]] = {}
    for v in range(n):
        classes.setdefault(find(v), []).append(v)
    return sorted(c for c in classes.values())


def is_path_graph(g: DiagGraph) -> bool:
    n = g.vertex_count
    if n == 1:
        return True
    degs = sorted(g.degree(v) for v in range(n))
    return g.edge_count == n - 1 and degs[-1] <= 2


def twin_lower_bound(g: DiagGraph, d: np.ndarray) -> int:
    """Lower bound on the metric dimension.

    Every resolving set holds all but one member of each twin class, and
    only paths have dimension 1.
    """
    n = g.vertex_count
    if n < 2:
        return 0
    bound = sum(len(c) - 1 for c in twin_classes(d))
    if not is_path_graph(g):
        bound = max(bound, 2)
    return max(bound, 1)


def count_shortest_paths(g: DiagGraph, d: np.ndarray, u: int, v: int) -> int:
    """Number of distinct shortest ``u``-``v`` paths (exact integer)."""
    target = int(d[u, v])
    du, dv = d[u], d[v]
    layers: list[list[int]] = [[] for _ in range(target + 1)]
    for w in np.flatnonzero(du + dv == target):
        layers[int(du[w])].append(int(w))
    sigma = {u: 1}
    for level in range(1, target + 1):
        for w in layers[level]:
            sigma[w] = sum(sigma.get(x, 0) for x in g.adjacency[w] if du[x] == level - 1)
    return sigma[v]


def unique_shortest_path(g: DiagGraph, d: np.ndarray, u: int, v: int) -> list[int] | None:
    """The shortest ``u``-``v`` path if it is unique, else None."""
    if count_shortest_paths(g, d, u, v) != 1:
        return None
    path = [u]
    cur = u
    while cur != v:
        cur = next(w for w in g.adjacency[cur] if d[u, w] == d[u, cur] + 1 and d[w, v] == d[cur, v] - 1)
        path.append(cur)
    return path


def md2_candidates(g: DiagGraph, d: np.ndarray) -> list[tuple[int, int]]:
    """Vertex pairs meeting the necessary conditions for a two-element basis.

    Both ends have degree at most 3, a single shortest path joins them and
    its internal vertices have degree at most 5.
    """
    low = [v for v in range(g.vertex_count) if g.degree(v) <= 3]
    out = []
    for s, t in combinations(low, 2):
        path = unique_shortest_path(g, d, s, t)
        if path is not None and all(g.degree(w) <= 5 for w in path[1:-1]):
            out.append((s, t))
    return out


class _SearchLimit(Exception):
    pass


@dataclass
class SolveResult:
    dim: int
    basis: tuple[int, ...]
    status: Status
    lower_bound: int
    upper_bound: int
    nodes_explored: int = 0
    elapsed: float = 0.0

    @property
    def exact(self) -> bool:
        return self.status is Status.EXACT


class _CoverSearch:
    """Depth-first cover search with a fixed pick budget.

    Branches on the uncovered pair with the fewest separating vertices,
    tries its separators by descending fresh coverage, and excludes each
    tried separator from later siblings so no subset is visited twice.
    """

    def __init__(self, d: np.ndarray, deadline: float | None, node_limit: int | None):
        n = len(d)
        bits = separation_bits(d)
        hardness = bits.sum(axis=0)
        order = np.lexsort((np.arange(bits.shape[1]), hardness))
        self.n = n
        self.rows = _pack_rows(bits[:, order]) if bits.shape[1] else (0,) * n
        # separators of each pair, in hardness order, as vertex bitmasks
        weights = 1 << np.arange(n, dtype=object)
        self.separators = [int(sum(weights[bits[:, p]])) for p in order]
        self.full = (1 << bits.shape[1]) - 1
        self.deadline = deadline
        self.node_limit = node_limit
        self.nodes = 0

    def run(self, k: int) -> list[int] | None:
        return self._dfs(self.full, 0, k, [])

    def _tick(self) -> None:
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            raise _SearchLimit
        if self.deadline is not None and self.nodes % 256 == 0 and time.monotonic() > self.deadline:
            raise _SearchLimit

    def _dfs(self, uncovered: int, excluded: int, picks: int, chosen: list[int]) -> list[int] | None:
        if not uncovered:
            return chosen
        if picks == 0:
            return None
        self._tick()
        need = uncovered.bit_count()
        gains = [(self.rows[v] & uncovered).bit_count() if not excluded >> v & 1 else 0 for v in range(self.n)]
        if sum(sorted(gains, reverse=True)[:picks]) < need:
            return None
        hardest = (uncovered & -uncovered).bit_length() - 1
        cands = self.separators[hardest] & ~excluded
        order = sorted((v for v in range(self.n) if cands >> v & 1), key=lambda v: (-gains[v], v))
        for v in order:
            if picks == 1 and gains[v] < need:
                excluded |= 1 << v
                continue
            found = self._dfs(uncovered & ~self.rows[v], excluded | 1 << v, picks - 1, chosen + [v])
            if found is not None:
                return found
            excluded |= 1 << v
        return None


def exact_dimension(
    g: DiagGraph,
    d: np.ndarray | None = None,
    *,
    max_k: int | None = None,
    time_limit: float | None = 60.0,
    node_limit: int | None = None,
) -> SolveResult:
    """Metric dimension by iterative deepening over the pick budget.

    Budgets below the first cover found are refuted exhaustively, so an
    ``exact`` result certifies both bounds. ``max_k`` caps the budget;
    hitting it without a cover gives ``upper_bound_only`` with the greedy
    set as the best known basis.
    """
    start = time.monotonic()
    if d is None:
        d = all_pairs(g)
    n = g.vertex_count
    if n <= 1:
        return SolveResult(0, (), Status.EXACT, 0, 0)
    greedy = greedy_upper_bound(d)
    lb = twin_lower_bound(g, d)
    ub = len(greedy)
    cap = ub if max_k is None else min(max_k, ub)

    def done(dim, basis, status, lo, nodes=0):
        return SolveResult(dim, tuple(sorted(basis)), status, lo, ub if status is not Status.EXACT else dim,
                           nodes, time.monotonic() - start)

    if lb == 1:
        pm = pair_matrix(d)
        for v in range(n):
            if pm.rows[v] == pm.full:
                return done(1, [v], Status.EXACT, 1)
        lb = 2

    search = _CoverSearch(d, None if time_limit is None else start + time_limit, node_limit)
    k = lb
    try:
        while k <= cap:
            found = search.run(k)
            if found is not None:
                return done(k, found, Status.EXACT, k, search.nodes)
            k += 1
    except _SearchLimit:
        return done(ub, greedy, Status.TIMEOUT, k, search.nodes)
    return done(ub, greedy, Status.UPPER_BOUND_ONLY, k, search.nodes)

