"""Passage times, geodesics, and windowed certificates.

The search engine builds one sparse nearest-neighbor graph per box and runs
scipy's Dijkstra over it.  Because sampled weights live on a dyadic grid (see
environment), every distance is an exact sum and all comparisons below are
exact equalities, never epsilon tests.

Certification follows the escape argument: if every vertex on the search
box's boundary ring is strictly farther from the source than the candidate
time, no path leaving the box can compete, so the boxed value equals the
infinite-volume passage time exactly.

Parent (tie-break) rule, documented for reproducibility: among neighbors u
with dist[u] + w == dist[v], prefer the lexicographically smallest vertex;
across zero-weight plateaus, parents additionally follow breadth-first layers
from the plateau's entry gateways so parent pointers never cycle.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra as _sp_dijkstra

from .environment import Environment
from .errors import Disconnected, InvariantViolation, NoCrossing, OutOfWindow
from .geometry import HORIZONTAL, VERTICAL, Edge, Vertex, Window, edge_between

# Exact float sums are guaranteed while partial sums stay below this bound
# (weights are multiples of 2**-40 and doubles carry 53 mantissa bits).
MAX_EXACT_SUM = 2.0 ** 13


@dataclass(frozen=True)
class Path:
    """Lattice path as a vertex sequence; consecutive vertices are neighbors."""

    vertices: tuple

    def __post_init__(self):
        vs = tuple(tuple(v) for v in self.vertices)
        object.__setattr__(self, "vertices", vs)
        for a, b in zip(vs, vs[1:]):
            if abs(a[0] - b[0]) + abs(a[1] - b[1]) != 1:
                raise ValueError(f"{a} and {b} are not lattice neighbors")

    def __len__(self):
        return len(self.vertices)

    @property
    def edges(self) -> list:
        return [edge_between(a, b) for a, b in zip(self.vertices, self.vertices[1:])]

    def time(self, env: Environment) -> float:
        """Passage time, summed in order along the path."""
        t = 0.0
        for e in self.edges:
            t += env.weight(e)
        return t

    def is_self_avoiding(self) -> bool:
        return len(set(self.vertices)) == len(self.vertices)

    def reversed(self) -> "Path":
        return Path(tuple(reversed(self.vertices)))


@dataclass(frozen=True)
class Certified:
    n: int


@dataclass(frozen=True)
class Heuristic:
    n: int
    plateau: int


@dataclass(frozen=True)
class WindowLimited:
    n: int
    plateau: int


Certificate = Union[Certified, Heuristic, WindowLimited]


@dataclass(frozen=True)
class GeodesicResult:
    path: Path
    time: float
    certificate: Certificate
    non_unique: bool = False

    @property
    def certified(self) -> bool:
        return isinstance(self.certificate, Certified)


class _FullLattice:
    def contains(self, v):
        return True

    def contains_array(self, xs, ys):
        return np.ones(np.broadcast(np.asarray(xs), np.asarray(ys)).shape, dtype=bool)


FULL_LATTICE = _FullLattice()

# Neighbor probe order = lexicographic order of the neighbor vertex:
# (x-1, y) < (x, y-1) < (x, y+1) < (x+1, y).
_DIRS = ("W", "S", "N", "E")


class BoxGraph:
    """Nearest-neighbor graph over box ∩ V with environment weights.

    Vertex ids are row-major: id = (y - y0) * nx + (x - x0).  ``hw[y, x]``
    weights the edge {(x, y), (x+1, y)}, ``vw[y, x]`` the edge
    {(x, y), (x, y+1)}, both in box-local coordinates; invalid slots are NaN.
    """

    def __init__(self, env: Environment, membership, box: Window,
                 hw: Optional[np.ndarray] = None, vw: Optional[np.ndarray] = None):
        self.env = env
        self.box = box
        self.membership = membership if membership is not None else FULL_LATTICE
        nx, ny = box.width, box.height
        self.nx, self.ny = nx, ny
        xs = np.arange(box.x0, box.x1 + 1)
        ys = np.arange(box.y0, box.y1 + 1)
        gx, gy = np.meshgrid(xs, ys)
        self.mask = np.asarray(self.membership.contains_array(gx, gy), dtype=bool)

        if hw is None:
            hw = np.where(self.mask[:, :-1] & self.mask[:, 1:],
                          env.weights(gx[:, :-1], gy[:, :-1], HORIZONTAL), np.nan)
        if vw is None:
            vw = np.where(self.mask[:-1, :] & self.mask[1:, :],
                          env.weights(gx[:-1, :], gy[:-1, :], VERTICAL), np.nan)
        self.hw = hw
        self.vw = vw
        self._csr = None

    # -- id mapping -------------------------------------------------------
    def vid(self, v: Vertex) -> int:
        if not self.box.contains(v):
            raise OutOfWindow(f"{v} outside box {self.box.as_tuple()}")
        return (v[1] - self.box.y0) * self.nx + (v[0] - self.box.x0)

    def vertex(self, vid: int) -> Vertex:
        y, x = divmod(int(vid), self.nx)
        return (x + self.box.x0, y + self.box.y0)

    def in_graph(self, v: Vertex) -> bool:
        return self.box.contains(v) and bool(
            self.mask[v[1] - self.box.y0, v[0] - self.box.x0])

    # -- sparse graph -----------------------------------------------------
    @property
    def csr(self):
        if self._csr is None:
            n = self.nx * self.ny
            ids = np.arange(n).reshape(self.ny, self.nx)
            hy, hx = np.nonzero(~np.isnan(self.hw))
            vy, vx = np.nonzero(~np.isnan(self.vw))
            rows = np.concatenate([ids[hy, hx], ids[vy, vx]])
            cols = np.concatenate([ids[hy, hx] + 1, ids[vy, vx] + self.nx])
            data = np.concatenate([self.hw[hy, hx], self.vw[vy, vx]])
            self._csr = coo_matrix((data, (rows, cols)), shape=(n, n)).tocsr()
        return self._csr

    def dijkstra(self, source: Vertex) -> np.ndarray:
        """Distance grid [ny, nx] from the source (inf where unreachable)."""
        if not self.in_graph(source):
            raise OutOfWindow(f"source {source} not in the searched region")
        d = _sp_dijkstra(self.csr, directed=False, indices=self.vid(source))
        return d.reshape(self.ny, self.nx)

    def dijkstra_multi(self, sources) -> np.ndarray:
        """Stacked distance grids [k, ny, nx] for k sources (one C pass)."""
        idx = np.array([self.vid(s) for s in sources], dtype=np.int32)
        d = _sp_dijkstra(self.csr, directed=False, indices=idx)
        return d.reshape(len(idx), self.ny, self.nx)

    def dijkstra_min(self, sources) -> np.ndarray:
        idx = np.array([self.vid(s) for s in sources], dtype=np.int32)
        d = _sp_dijkstra(self.csr, directed=False, indices=idx, min_only=True)
        return d.reshape(self.ny, self.nx)

    # -- structure derived from a distance field --------------------------
    def _neighbor_conditions(self, dist: np.ndarray):
        """Per-direction exact relaxation tests in probe order W, S, N, E.

        cond[d][y, x] is True when the neighbor in direction d satisfies
        dist[nbr] + w(edge) == dist[v] with everything finite.
        """
        ny, nx = self.ny, self.nx
        conds, nbr_dist = {}, {}
        fin = np.isfinite(dist)

        def pack(direction, sl_v, sl_u, w):
            c = np.zeros((ny, nx), dtype=bool)
            nd = np.full((ny, nx), np.inf)
            ok = ~np.isnan(w) & fin[sl_v] & fin[sl_u]
            c[sl_v] = ok & (dist[sl_u] + np.where(np.isnan(w), 0.0, w) == dist[sl_v])
            nd[sl_v] = np.where(ok, dist[sl_u], np.inf)
            conds[direction] = c
            nbr_dist[direction] = nd

        pack("W", (slice(None), slice(1, None)), (slice(None), slice(0, -1)), self.hw)
        pack("E", (slice(None), slice(0, -1)), (slice(None), slice(1, None)), self.hw)
        pack("S", (slice(1, None), slice(None)), (slice(0, -1), slice(None)), self.vw)
        pack("N", (slice(0, -1), slice(None)), (slice(1, None), slice(None)), self.vw)
        return conds, nbr_dist

    def parents(self, dist: np.ndarray, source: Vertex):
        """Parent vid grid under the documented tie-break, plus tie counts."""
        ny, nx = self.ny, self.nx
        conds, nbr_dist = self._neighbor_conditions(dist)
        counts = sum(conds[d].astype(np.int8) for d in _DIRS)

        offset = {"W": -1, "E": 1, "S": -nx, "N": nx}
        ids = np.arange(ny * nx).reshape(ny, nx)
        parent = np.full((ny, nx), -1, dtype=np.int64)

        strict = {d: conds[d] & (nbr_dist[d] < dist) for d in _DIRS}
        plateau = {d: conds[d] & (nbr_dist[d] == dist) for d in _DIRS}
        has_plateau = any(plateau[d].any() for d in _DIRS)

        if not has_plateau:
            for d in reversed(_DIRS):  # earlier probes overwrite later ones
                parent = np.where(strict[d], ids + offset[d], parent)
        else:
            layer = self._plateau_layers(strict, plateau, source)
            for d in reversed(_DIRS):
                ok_layer = np.zeros((ny, nx), dtype=bool)
                sl_v, sl_u = _SLICES[d]
                lv = layer[sl_v]
                lu = layer[sl_u]
                ok = plateau[d][sl_v] & (lu == lv - 1) & (lv > 0)
                ok_layer[sl_v] = ok
                parent = np.where(ok_layer, ids + offset[d], parent)
            gateway_parent = np.full((ny, nx), -1, dtype=np.int64)
            for d in reversed(_DIRS):
                gateway_parent = np.where(strict[d], ids + offset[d], gateway_parent)
            parent = np.where(layer == 0, gateway_parent, parent)

        parent[~np.isfinite(dist)] = -1
        sy, sx = source[1] - self.box.y0, source[0] - self.box.x0
        parent[sy, sx] = -1
        missing = np.isfinite(dist) & (parent < 0)
        missing[sy, sx] = False
        if missing.any():
            raise InvariantViolation("reachable vertex without a parent")
        return parent, counts

    def _plateau_layers(self, strict, plateau, source):
        """BFS layers across zero-weight ties, seeded at strict gateways."""
        ny, nx = self.ny, self.nx
        layer = np.full((ny, nx), -1, dtype=np.int64)
        gateways = np.zeros((ny, nx), dtype=bool)
        for d in _DIRS:
            gateways |= strict[d]
        sy, sx = source[1] - self.box.y0, source[0] - self.box.x0
        gateways[sy, sx] = True

        in_plateau = np.zeros((ny, nx), dtype=bool)
        for d in _DIRS:
            in_plateau |= plateau[d]
        layer[gateways] = 0

        adj = {}
        for d in ("E", "N"):
            sl_v, sl_u = _SLICES[d]
            mask = np.zeros((ny, nx), dtype=bool)
            mask[sl_v] = plateau[d][sl_v]
            for y, x in zip(*np.nonzero(mask)):
                u = y * nx + x
                v = u + (1 if d == "E" else nx)
                adj.setdefault(u, []).append(v)
                adj.setdefault(v, []).append(u)

        flat = layer.ravel()
        q = deque()
        start_ids = np.nonzero((layer.ravel() == 0) & in_plateau.ravel())[0]
        for i in start_ids:
            q.append(int(i))
        while q:
            u = q.popleft()
            for v in adj.get(u, ()):
                if flat[v] < 0:
                    flat[v] = flat[u] + 1
                    q.append(v)
        return layer

    def path_from_parents(self, parent: np.ndarray, target: Vertex) -> Path:
        """Walk parent pointers from the target back to the source."""
        flat = parent.ravel()
        vid = self.vid(target)
        seq = [vid]
        limit = self.nx * self.ny + 1
        while flat[vid] >= 0:
            vid = int(flat[vid])
            seq.append(vid)
            if len(seq) > limit:
                raise InvariantViolation("parent pointers cycle")
        return Path(tuple(self.vertex(i) for i in reversed(seq)))

    def ring_floor(self, dist: np.ndarray) -> float:
        """Min distance over escape vertices of the box (inf if none).

        Escape vertices are in-box vertices with a V-neighbor outside the box;
        any path that leaves the box has an in-box prefix ending at one, so
        their distance floor bounds every escaping path from below.
        Unreachable escape vertices cannot end such a prefix and are ignored.
        """
        b = self.box
        xs = np.arange(b.x0, b.x1 + 1)
        ys = np.arange(b.y0, b.y1 + 1)
        m = self.membership
        sides = [
            (dist[:, 0], m.contains_array(np.full(self.ny, b.x0 - 1), ys)),
            (dist[:, -1], m.contains_array(np.full(self.ny, b.x1 + 1), ys)),
            (dist[0, :], m.contains_array(xs, np.full(self.nx, b.y0 - 1))),
            (dist[-1, :], m.contains_array(xs, np.full(self.nx, b.y1 + 1))),
        ]
        floor = np.inf
        for vals, escapable in sides:
            sel = vals[np.asarray(escapable, dtype=bool) & np.isfinite(vals)]
            if sel.size:
                floor = min(floor, float(sel.min()))
        return floor

    def weight_of(self, e: Edge) -> float:
        (x, y), axis = e
        lx, ly = x - self.box.x0, y - self.box.y0
        w = self.hw[ly, lx] if axis == HORIZONTAL else self.vw[ly, lx]
        if np.isnan(w):
            raise OutOfWindow(f"{e} not in the searched region")
        return float(w)


_SLICES = {
    "W": ((slice(None), slice(1, None)), (slice(None), slice(0, -1))),
    "E": ((slice(None), slice(0, -1)), (slice(None), slice(1, None))),
    "S": ((slice(1, None), slice(None)), (slice(0, -1), slice(None))),
    "N": ((slice(0, -1), slice(None)), (slice(1, None), slice(None))),
}


# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GeodesicTree:
    """Single-source shortest-path tree toward ``root`` within a box."""

    graph: BoxGraph
    root: Vertex
    dist: np.ndarray
    parent: np.ndarray
    tie_counts: np.ndarray

    def time(self, v: Vertex) -> float:
        return float(self.dist[v[1] - self.graph.box.y0, v[0] - self.graph.box.x0])

    def parent_edge(self, v: Vertex) -> Optional[Edge]:
        p = self.parent[v[1] - self.graph.box.y0, v[0] - self.graph.box.x0]
        if p < 0:
            return None
        return edge_between(v, self.graph.vertex(int(p)))

    def path_to_root(self, v: Vertex) -> Path:
        return self.graph.path_from_parents(self.parent, v).reversed()

    def non_unique(self, v: Vertex) -> bool:
        return int(self.tie_counts[v[1] - self.graph.box.y0,
                                   v[0] - self.graph.box.x0]) > 1

    def items(self):
        for y in range(self.graph.ny):
            for x in range(self.graph.nx):
                if np.isfinite(self.dist[y, x]):
                    v = (x + self.graph.box.x0, y + self.graph.box.y0)
                    p = self.parent[y, x]
                    pe = None if p < 0 else edge_between(v, self.graph.vertex(int(p)))
                    yield v, (float(self.dist[y, x]), pe)


def effective_box(domain, box: Window) -> Window:
    """Clip a box to the window; error only if domain vertices are cut off."""
    window = domain.window
    if window.contains_window(box):
        return box
    try:
        clipped = box.clip(window)
    except ValueError:
        raise OutOfWindow(f"box {box.as_tuple()} entirely outside the window")
    for strip in _cut_strips(box, clipped):
        xs = np.arange(strip.x0, strip.x1 + 1)
        ys = np.arange(strip.y0, strip.y1 + 1)
        gx, gy = np.meshgrid(xs, ys)
        if np.asarray(domain.contains_array(gx, gy)).any():
            raise OutOfWindow(
                f"box {box.as_tuple()} cuts domain vertices outside the window")
    return clipped


def _cut_strips(box: Window, clipped: Window):
    if box.x0 < clipped.x0:
        yield Window(box.x0, clipped.x0 - 1, box.y0, box.y1)
    if box.x1 > clipped.x1:
        yield Window(clipped.x1 + 1, box.x1, box.y0, box.y1)
    if box.y0 < clipped.y0:
        yield Window(clipped.x0, clipped.x1, box.y0, clipped.y0 - 1)
    if box.y1 > clipped.y1:
        yield Window(clipped.x0, clipped.x1, clipped.y1 + 1, box.y1)


def geodesic_tree(env: Environment, domain, root: Vertex, box: Window) -> GeodesicTree:
    box = effective_box(domain, box)
    g = BoxGraph(env, domain.membership, box)
    dist = g.dijkstra(root)
    parent, ties = g.parents(dist, root)
    return GeodesicTree(graph=g, root=root, dist=dist, parent=parent, tie_counts=ties)


def windowed_passage_time(env: Environment, domain, x: Vertex, y: Vertex, n: int):
    """Exact minimum over paths confined to x + [-n, n]^2; (time, path)."""
    box = effective_box(domain, Window.around(x, n))
    if x == y:
        if not domain.contains(x):
            raise Disconnected(f"{x} not a domain vertex")
        return 0.0, Path((x,))
    g = BoxGraph(env, domain.membership, box)
    if not g.in_graph(x) or not g.in_graph(y):
        raise Disconnected(f"{x} or {y} not in the boxed domain")
    dist = g.dijkstra(x)
    t = dist[y[1] - box.y0, y[0] - box.x0]
    if not np.isfinite(t):
        raise Disconnected(f"no path {x} ~> {y} inside the box")
    parent, _ = g.parents(dist, x)
    return float(t), g.path_from_parents(parent, y)


def passage_time(env: Environment, domain, x: Vertex, y: Vertex,
                 start_n: Optional[int] = None, max_n: Optional[int] = None) -> GeodesicResult:
    """Passage time with an exact escape certificate when attainable.

    Grows the search box geometrically; returns Certified(n) as soon as every
    boundary-ring vertex is strictly farther than the candidate (the boxed
    value then equals the true passage time).  Otherwise reports the plateau
    length of the boxed-value trace, as Heuristic if a caller cap stopped
    growth or WindowLimited if the window did.
    """
    window = domain.window
    if not (window.contains(x) and window.contains(y)):
        raise OutOfWindow("endpoints must lie in the window")
    if x == y:
        return GeodesicResult(Path((x,)), 0.0, Certified(0))
    n = start_n or max(abs(x[0] - y[0]), abs(x[1] - y[1])) + 2
    trace = []
    prev_box = None
    while True:
        box = Window.around(x, n).clip(window)
        g = BoxGraph(env, domain.membership, box)
        if not (g.in_graph(x) and g.in_graph(y)):
            if box == Window(window.x0, window.x1, window.y0, window.y1):
                raise Disconnected(f"{x} or {y} not in the windowed domain")
            n, prev_box = n * 2, box
            continue
        dist = g.dijkstra(x)
        t = dist[y[1] - box.y0, y[0] - box.x0]
        if np.isfinite(t):
            if trace and t > trace[-1]:
                raise InvariantViolation("boxed passage time increased with box size")
            trace.append(float(t))
            floor = g.ring_floor(dist)
            if floor > t:
                parent, ties = g.parents(dist, x)
                path = g.path_from_parents(parent, y)
                nu = any(ties[v[1] - box.y0, v[0] - box.x0] > 1
                         for v in path.vertices if v != x)
                return GeodesicResult(path, float(t), Certified(n), non_unique=nu)
        at_window = box == prev_box or box == Window(window.x0, window.x1,
                                                     window.y0, window.y1)
        capped = max_n is not None and n >= max_n
        if (at_window or capped) and trace:
            parent, ties = g.parents(dist, x)
            path = g.path_from_parents(parent, y)
            nu = any(ties[v[1] - box.y0, v[0] - box.x0] > 1
                     for v in path.vertices if v != x)
            plateau = _trailing_plateau(trace)
            cert = Heuristic(n, plateau) if capped and not at_window else WindowLimited(n, plateau)
            return GeodesicResult(path, trace[-1], cert, non_unique=nu)
        if at_window and not trace:
            raise Disconnected(f"no path {x} ~> {y} inside the window")
        prev_box = box
        n *= 2


def _trailing_plateau(trace) -> int:
    k = 1
    while k < len(trace) and trace[-1 - k] == trace[-1]:
        k += 1
    return k


def constrained_crossing_time(env: Environment, box: Window, entry: str, exit: str,
                              forbidden: Optional[str] = None, membership=None) -> float:
    """Exact min passage time over in-box paths from entry side to exit side,
    avoiding every vertex of the forbidden side."""
    g = BoxGraph(env, membership, box)
    if forbidden is not None:
        fy, fx = _side_indices(g, forbidden)
        g.mask[fy, fx] = False
        _remask(g)
    ey, ex = _side_indices(g, entry)
    sources = [(int(x) + box.x0, int(y) + box.y0)
               for y, x in zip(ey, ex) if g.mask[y, x]]
    if not sources:
        raise NoCrossing("entry side has no admissible vertices")
    dist = g.dijkstra_min(sources)
    ty, tx = _side_indices(g, exit)
    vals = [dist[y, x] for y, x in zip(ty, tx) if g.mask[y, x]]
    finite = [v for v in vals if np.isfinite(v)]
    if not finite:
        raise NoCrossing("exit side unreachable")
    return float(min(finite))


def _side_indices(g: BoxGraph, side: str):
    if side == "left":
        return np.arange(g.ny), np.zeros(g.ny, dtype=int)
    if side == "right":
        return np.arange(g.ny), np.full(g.ny, g.nx - 1, dtype=int)
    if side == "bottom":
        return np.zeros(g.nx, dtype=int), np.arange(g.nx)
    if side == "top":
        return np.full(g.nx, g.ny - 1, dtype=int), np.arange(g.nx)
    raise ValueError(f"unknown side {side!r}")


def _remask(g: BoxGraph):
    g.hw = np.where(g.mask[:, :-1] & g.mask[:, 1:], g.hw, np.nan)
    g.vw = np.where(g.mask[:-1, :] & g.mask[1:, :], g.vw, np.nan)
    g._csr = None


# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Sweep:
    """Single-source distances over one big box with per-target certificates.

    A target is certified exact when its distance is strictly below the
    boundary-ring floor of the searched box.
    """

    graph: BoxGraph
    source: Vertex
    dist: np.ndarray
    floor: float

    def value(self, target: Vertex) -> float:
        b = self.graph.box
        return float(self.dist[target[1] - b.y0, target[0] - b.x0])

    def certified(self, target: Vertex) -> bool:
        v = self.value(target)
        return np.isfinite(v) and v < self.floor


def certified_sweep(env: Environment, domain, source: Vertex,
                    box: Optional[Window] = None) -> Sweep:
    box = box or domain.window
    if not domain.window.contains_window(box):
        raise OutOfWindow(f"box {box.as_tuple()} leaves window {domain.window.as_tuple()}")
    g = BoxGraph(env, domain.membership, box)
    dist = g.dijkstra(source)
    return Sweep(graph=g, source=source, dist=dist, floor=g.ring_floor(dist))
