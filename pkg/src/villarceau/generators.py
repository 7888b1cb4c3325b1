"""Villarceau grid (types I and II) and Cartesian grid constructors."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

from .graph import Coord, DiagGraph


class Family(str, Enum):
    VG1 = "vg1"
    VG2 = "vg2"
    GRID = "grid"

    def __str__(self) -> str:
        return self.value


class InvalidGridSpec(ValueError):
    pass


@dataclass(frozen=True, order=True)
class GridSpec:
    family: Family
    m: int
    n: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", Family(self.family))
        fam, m, n = self.family, self.m, self.n
        if m < 1 or n < 1:
            raise InvalidGridSpec(f"invalid GridSpec {fam} {m} {n}: requires m >= 1 and n >= 1")
        if fam is Family.VG1 and m > n:
            raise InvalidGridSpec(f"invalid GridSpec vg1 {m} {n}: requires m <= n")
        if fam is Family.VG2 and m >= n:
            raise InvalidGridSpec(f"invalid GridSpec vg2 {m} {n}: requires m < n")

    def __str__(self) -> str:
        return f"{self.family.value}({self.m},{self.n})"

    @classmethod
    def is_valid(cls, family: Family | str, m: int, n: int) -> bool:
        try:
            cls(Family(family), m, n)
        except InvalidGridSpec:
            return False
        return True


def vertex_coords(spec: GridSpec) -> list[Coord]:
    m, n = spec.m, spec.n
    if spec.family is Family.VG1:
        return [(2 * i, 2 * j + 1) for i in range(n + 1) for j in range(m)] + [
            (2 * i + 1, 2 * j) for i in range(n) for j in range(m + 1)
        ]
    if spec.family is Family.VG2:
        return [(2 * i + 1, 2 * j + 1) for i in range(n - 1) for j in range(m)] + [
            (2 * i, 2 * j) for i in range(n) for j in range(m + 1)
        ]
    return [(i, j) for i in range(m) for j in range(n)]


def is_vertex(spec: GridSpec, c: Coord) -> bool:
    """True iff ``c`` is a vertex of the graph ``spec`` describes."""
    x, y = c
    m, n = spec.m, spec.n
    if spec.family is Family.GRID:
        return 0 <= x < m and 0 <= y < n
    if x < 0 or y < 0:
        return False
    if spec.family is Family.VG1:
        if x % 2 == 0 and y % 2 == 1:
            return x // 2 <= n and y // 2 <= m - 1
        if x % 2 == 1 and y % 2 == 0:
            return x // 2 <= n - 1 and y // 2 <= m
        return False
    if x % 2 == 1 and y % 2 == 1:
        return x // 2 <= n - 2 and y // 2 <= m - 1
    if x % 2 == 0 and y % 2 == 0:
        return x // 2 <= n - 1 and y // 2 <= m
    return False


def _diagonal_graph(coords: list[Coord]) -> DiagGraph:
    present = set(coords)
    edges = []
    for x, y in coords:
        # each undirected edge once, from its left endpoint
        for dy in (-1, 1):
            if (x + 1, y + dy) in present:
                edges.append(((x, y), (x + 1, y + dy)))
    return DiagGraph.from_edges(coords, edges)


def vg1(m: int, n: int) -> DiagGraph:
    return _diagonal_graph(vertex_coords(GridSpec(Family.VG1, m, n)))


def vg2(m: int, n: int) -> DiagGraph:
    return _diagonal_graph(vertex_coords(GridSpec(Family.VG2, m, n)))


def grid(m: int, n: int) -> DiagGraph:
    """P_m x P_n with unit-spaced coordinates ``(i, j)``, ``i < m``, ``j < n``."""
    coords = vertex_coords(GridSpec(Family.GRID, m, n))
    present = set(coords)
    edges = [((x, y), (x + dx, y + dy)) for x, y in coords for dx, dy in ((1, 0), (0, 1)) if (x + dx, y + dy) in present]
    return DiagGraph.from_edges(coords, edges)


def build(spec: GridSpec) -> DiagGraph:
    return {Family.VG1: vg1, Family.VG2: vg2, Family.GRID: grid}[spec.family](spec.m, spec.n)


class LineClass(NamedTuple):
    acute: int
    obtuse: int
    boundary: bool


def classify_lines(g: DiagGraph, spec: GridSpec) -> dict[Coord, LineClass]:
    """Acute line (constant x - y), obtuse line (constant x + y) and boundary flag per vertex."""
    if spec.family is Family.GRID:
        raise ValueError("line classes are defined for Villarceau grids only")
    xs = [c[0] for c in g.coords]
    ys = [c[1] for c in g.coords]
    xlo, xhi, ylo, yhi = min(xs), max(xs), min(ys), max(ys)
    return {
        (x, y): LineClass(x - y, x + y, x in (xlo, xhi) or y in (ylo, yhi))
        for x, y in g.coords
    }
