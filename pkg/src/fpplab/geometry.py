"""Integer lattice primitives: vertices, canonical edges, dual edges, windows.

Vertices are plain ``(x, y)`` tuples.  Edges are canonicalized to their
lexicographically smaller endpoint plus an axis flag, so equal edges compare
equal and can key dictionaries.  Dual vertices use integer coordinates:
``(i, j)`` names the dual lattice point ``(i + 1/2, j + 1/2)``, i.e. the unit
face with corners ``(i, j)`` .. ``(i + 1, j + 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple

Vertex = tuple  # (x, y) integer pair

HORIZONTAL = 0  # {(x, y), (x + 1, y)}
VERTICAL = 1    # {(x, y), (x, y + 1)}


class Edge(NamedTuple):
    base: Vertex
    axis: int

    @property
    def endpoints(self) -> tuple:
        x, y = self.base
        if self.axis == HORIZONTAL:
            return (x, y), (x + 1, y)
        return (x, y), (x, y + 1)

    def other(self, v: Vertex) -> Vertex:
        a, b = self.endpoints
        if v == a:
            return b
        if v == b:
            return a
        raise ValueError(f"{v} is not an endpoint of {self}")

    def shifted(self, dx: int, dy: int) -> "Edge":
        return Edge((self.base[0] + dx, self.base[1] + dy), self.axis)

    @property
    def dual(self) -> "DualEdge":
        return DualEdge(self)


def edge_between(u: Vertex, v: Vertex) -> Edge:
    """Canonical edge joining two nearest-neighbor vertices."""
    dx, dy = v[0] - u[0], v[1] - u[1]
    if abs(dx) + abs(dy) != 1:
        raise ValueError(f"{u} and {v} are not lattice neighbors")
    base = u if (dx + dy) > 0 else v
    return Edge(base, HORIZONTAL if dy == 0 else VERTICAL)


class DualEdge(NamedTuple):
    """Dual edge bisecting a primal edge; endpoints in integer dual coords."""

    edge: Edge

    @property
    def endpoints(self) -> tuple:
        (x, y), axis = self.edge
        if axis == HORIZONTAL:
            return (x, y - 1), (x, y)
        return (x - 1, y), (x, y)

    @property
    def midpoint(self) -> tuple:
        """Physical midpoint (equals the primal edge midpoint)."""
        (ax, ay), (bx, by) = self.edge.endpoints
        return ((ax + bx) / 2.0, (ay + by) / 2.0)


# Primal edge crossed when stepping between two adjacent dual vertices.
def primal_between_duals(d: Vertex, e: Vertex) -> Edge:
    (i, j), (di, dj) = d, (e[0] - d[0], e[1] - d[1])
    if (di, dj) == (1, 0):
        return Edge((i + 1, j), VERTICAL)
    if (di, dj) == (-1, 0):
        return Edge((i, j), VERTICAL)
    if (di, dj) == (0, 1):
        return Edge((i, j + 1), HORIZONTAL)
    if (di, dj) == (0, -1):
        return Edge((i, j), HORIZONTAL)
    raise ValueError(f"dual vertices {d} and {e} are not adjacent")


_DUAL_STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1))


def dual_neighbors(d: Vertex) -> Iterator[tuple]:
    """(adjacent dual vertex, primal edge crossed) for the four dual steps."""
    for di, dj in _DUAL_STEPS:
        e = (d[0] + di, d[1] + dj)
        yield e, primal_between_duals(d, e)


@dataclass(frozen=True)
class Window:
    """Inclusive integer rectangle [x0, x1] x [y0, y1]."""

    x0: int
    x1: int
    y0: int
    y1: int

    def __post_init__(self):
        if self.x0 > self.x1 or self.y0 > self.y1:
            raise ValueError(f"empty window {self}")

    @property
    def width(self) -> int:
        return self.x1 - self.x0 + 1

    @property
    def height(self) -> int:
        return self.y1 - self.y0 + 1

    @property
    def area(self) -> int:
        return self.width * self.height

    def contains(self, v: Vertex) -> bool:
        return self.x0 <= v[0] <= self.x1 and self.y0 <= v[1] <= self.y1

    def contains_window(self, other: "Window") -> bool:
        return (self.x0 <= other.x0 and other.x1 <= self.x1
                and self.y0 <= other.y0 and other.y1 <= self.y1)

    def strictly_inside(self, v: Vertex) -> bool:
        return self.x0 < v[0] < self.x1 and self.y0 < v[1] < self.y1

    def on_boundary(self, v: Vertex) -> bool:
        return self.contains(v) and not self.strictly_inside(v)

    def inflate(self, d: int) -> "Window":
        return Window(self.x0 - d, self.x1 + d, self.y0 - d, self.y1 + d)

    def clip(self, other: "Window") -> "Window":
        return Window(max(self.x0, other.x0), min(self.x1, other.x1),
                      max(self.y0, other.y0), min(self.y1, other.y1))

    def iter_vertices(self) -> Iterator[Vertex]:
        for y in range(self.y0, self.y1 + 1):
            for x in range(self.x0, self.x1 + 1):
                yield (x, y)

    def as_tuple(self) -> tuple:
        return (self.x0, self.x1, self.y0, self.y1)

    @staticmethod
    def around(v: Vertex, radius: int) -> "Window":
        return Window(v[0] - radius, v[0] + radius, v[1] - radius, v[1] + radius)


def l1(u: Vertex, v: Vertex) -> int:
    return abs(u[0] - v[0]) + abs(u[1] - v[1])


def path_edges(vertices) -> list:
    """Canonical edges of a vertex walk; validates adjacency."""
    return [edge_between(a, b) for a, b in zip(vertices, vertices[1:])]
