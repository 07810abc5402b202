"""Infinite planar lattice domains and their dual boundary paths.

A domain is an infinite connected vertex set V in the square lattice whose
complement is also infinite and connected.  Its edge boundary, viewed in the
dual lattice, is a single doubly infinite self-avoiding dual path; walking
that path enumerates the crossed edges e_i and their V-side endpoints v_i,
the boundary vertices toward which all limits are taken.

Windows truncate the infinite object: a Domain carries the membership oracle
(global, window-independent) plus the portion of the dual path whose boundary
vertices lie in the window, with signed indices anchored at a canonical edge
fixed by the specification, so indices agree across window sizes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Union

import numpy as np
from scipy import ndimage

from .errors import BadRemovedSet, EmptyBoundary, InvalidSpec
from .geometry import (HORIZONTAL, VERTICAL, DualEdge, Edge, Vertex, Window,
                       dual_neighbors, edge_between, l1)

_PLUS = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=int)


# --------------------------------------------------------------------------
# Specifications.

@dataclass(frozen=True)
class HalfPlane:
    """Upper half-plane: vertices with y >= 0."""

    def contains(self, v: Vertex) -> bool:
        return v[1] >= 0

    def contains_array(self, xs, ys):
        return np.asarray(ys) >= 0

    def anchor_edge(self) -> Edge:
        return Edge((0, -1), VERTICAL)  # crosses {(0,-1),(0,0)}; v_0 = (0,0)

    def to_json(self) -> dict:
        return {"kind": "half_plane"}


@dataclass(frozen=True)
class SlitPlane:
    """Plane minus the westward slit {(x, ty) : x <= tx}."""

    tip: Vertex = (0, 0)

    def contains(self, v: Vertex) -> bool:
        return not (v[1] == self.tip[1] and v[0] <= self.tip[0])

    def contains_array(self, xs, ys):
        xs, ys = np.asarray(xs), np.asarray(ys)
        return ~((ys == self.tip[1]) & (xs <= self.tip[0]))

    def anchor_edge(self) -> Edge:
        return Edge(self.tip, HORIZONTAL)  # crosses {tip, tip+(1,0)}; v_0 east of tip

    def to_json(self) -> dict:
        return {"kind": "slit_plane", "tip": list(self.tip)}


@dataclass(frozen=True)
class Sector:
    """Discrete sector {x >= 0, lo <= y/x <= hi} with rational slopes.

    Slopes are (num, den) pairs with den > 0 and 0 <= lo < hi.  Thin slope
    pairs can disconnect the lattice sector; connectivity is validated inside
    the window at build time and rejected via InvalidSpec.
    """

    lo: tuple = (0, 1)
    hi: tuple = (1, 1)

    def __post_init__(self):
        (ln, ld), (hn, hd) = self.lo, self.hi
        if ld <= 0 or hd <= 0 or ln < 0:
            raise InvalidSpec("slopes must be nonnegative with positive denominators")
        if ln * hd >= hn * ld:
            raise InvalidSpec("need lo < hi")

    def contains(self, v: Vertex) -> bool:
        x, y = v
        (ln, ld), (hn, hd) = self.lo, self.hi
        return x >= 0 and y * ld >= ln * x and y * hd <= hn * x

    def contains_array(self, xs, ys):
        xs, ys = np.asarray(xs), np.asarray(ys)
        (ln, ld), (hn, hd) = self.lo, self.hi
        return (xs >= 0) & (ys * ld >= ln * xs) & (ys * hd <= hn * xs)

    def anchor_edge(self) -> Edge:
        return Edge((0, -1), VERTICAL)  # crosses {(0,-1),(0,0)}; v_0 = apex

    def to_json(self) -> dict:
        return {"kind": "sector", "lo": list(self.lo), "hi": list(self.hi)}


@dataclass(frozen=True)
class CustomPerturbation:
    """Builtin base with finitely many vertices added and removed."""

    base: Union[HalfPlane, SlitPlane, Sector]
    add: tuple = ()
    remove: tuple = ()

    def __post_init__(self):
        add, remove = frozenset(self.add), frozenset(self.remove)
        if add & remove:
            raise InvalidSpec("add and remove lists overlap")
        for v in add:
            if self.base.contains(v):
                raise InvalidSpec(f"{v} already in base domain")
        for v in remove:
            if not self.base.contains(v):
                raise InvalidSpec(f"{v} not in base domain")
        object.__setattr__(self, "add", tuple(sorted(add)))
        object.__setattr__(self, "remove", tuple(sorted(remove)))

    def contains(self, v: Vertex) -> bool:
        if v in self.add:
            return True
        if v in self.remove:
            return False
        return self.base.contains(v)

    def contains_array(self, xs, ys):
        xs, ys = np.asarray(xs), np.asarray(ys)
        out = np.asarray(self.base.contains_array(xs, ys)).copy()
        for (px, py) in self.add:
            out |= (xs == px) & (ys == py)
        for (px, py) in self.remove:
            out &= ~((xs == px) & (ys == py))
        return out

    def perturbation_box(self) -> Optional[Window]:
        pts = list(self.add) + list(self.remove)
        if not pts:
            return None
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        return Window(min(xs), max(xs), min(ys), max(ys)).inflate(2)

    def anchor_edge(self) -> Edge:
        base_anchor = self.base.anchor_edge()
        a, b = base_anchor.endpoints
        if self.contains(a) != self.contains(b):
            return base_anchor
        # Base anchor swallowed by the perturbation: fall back to the crossed
        # edge nearest the base anchor inside the validated box (deterministic,
        # window-independent).
        box = self.perturbation_box()
        mid = base_anchor.dual.midpoint
        best = None
        for e in _crossed_edges_in_box(self, box.inflate(1)):
            em = e.dual.midpoint
            key = (abs(em[0] - mid[0]) + abs(em[1] - mid[1]), e)
            if best is None or key < best:
                best = key
        if best is None:
            raise InvalidSpec("perturbation removed the entire local boundary")
        return best[1]

    def to_json(self) -> dict:
        return {"kind": "custom", "base": self.base.to_json(),
                "add": [list(v) for v in self.add],
                "remove": [list(v) for v in self.remove]}


DomainSpec = Union[HalfPlane, SlitPlane, Sector, CustomPerturbation]


def spec_from_json(obj: dict) -> DomainSpec:
    kind = obj.get("kind")
    if kind == "half_plane":
        return HalfPlane()
    if kind == "slit_plane":
        return SlitPlane(tip=tuple(obj.get("tip", (0, 0))))
    if kind == "sector":
        return Sector(lo=tuple(obj.get("lo", (0, 1))), hi=tuple(obj.get("hi", (1, 1))))
    if kind == "custom":
        return CustomPerturbation(base=spec_from_json(obj["base"]),
                                  add=tuple(tuple(v) for v in obj.get("add", ())),
                                  remove=tuple(tuple(v) for v in obj.get("remove", ())))
    raise InvalidSpec(f"unknown domain kind {kind!r}")


# --------------------------------------------------------------------------
# Membership grids and local validation.

def membership_mask(membership, box: Window) -> np.ndarray:
    """Boolean grid [ny, nx] of V membership over the box (row = y)."""
    xs = np.arange(box.x0, box.x1 + 1)
    ys = np.arange(box.y0, box.y1 + 1)
    gx, gy = np.meshgrid(xs, ys)
    return np.asarray(membership.contains_array(gx, gy), dtype=bool)


def _crossed_edges_in_box(membership, box: Window):
    """Crossed edges whose V-side endpoint lies in the box."""
    grid_box = box.inflate(1)
    mask = membership_mask(membership, grid_box)
    out = []
    ny, nx = mask.shape
    hx = mask[:, :-1] ^ mask[:, 1:]
    for y, x in zip(*np.nonzero(hx)):
        e = Edge((grid_box.x0 + int(x), grid_box.y0 + int(y)), HORIZONTAL)
        a, b = e.endpoints
        v = a if mask[y, x] else b
        if box.contains(v):
            out.append(e)
    vx = mask[:-1, :] ^ mask[1:, :]
    for y, x in zip(*np.nonzero(vx)):
        e = Edge((grid_box.x0 + int(x), grid_box.y0 + int(y)), VERTICAL)
        a, b = e.endpoints
        v = a if mask[y, x] else b
        if box.contains(v):
            out.append(e)
    return out


def _check_no_islands(membership, box: Window, what: str):
    """Reject components of V (and of its complement) trapped inside the box.

    A component that never reaches the box frame is finite, which breaks the
    two-sided infinite-connectivity requirement.  Components that do reach the
    frame are assumed to join up outside; this holds for the builtin bases.
    """
    mask = membership_mask(membership, box)
    for grid in (mask, ~mask):
        labels, n = ndimage.label(grid, structure=_PLUS)
        if n == 0:
            continue
        frame = np.zeros_like(grid)
        frame[0, :] = frame[-1, :] = True
        frame[:, 0] = frame[:, -1] = True
        touching = set(np.unique(labels[frame & grid])) - {0}
        present = set(np.unique(labels)) - {0}
        if present - touching:
            raise InvalidSpec(f"{what}: finite component trapped in {box.as_tuple()}")


# --------------------------------------------------------------------------
# Dual boundary walk.

def _step(contains, d: Vertex, incoming: Edge):
    """Advance one dual step: the unique other crossed edge at dual vertex d."""
    found = None
    for nd, pe in dual_neighbors(d):
        if pe == incoming:
            continue
        a, b = pe.endpoints
        if contains(a) != contains(b):
            if found is not None:
                raise InvalidSpec(f"dual vertex {d} has boundary degree > 2")
            found = (nd, pe)
    if found is None:
        raise InvalidSpec(f"dual vertex {d} has boundary degree < 2")
    return found


def _v_side(contains, e: Edge) -> Vertex:
    a, b = e.endpoints
    return a if contains(a) else b


def _heading(prev: Vertex, cur: Vertex) -> str:
    dx, dy = cur[0] - prev[0], cur[1] - prev[1]
    return {(1, 0): "E", (-1, 0): "W", (0, 1): "N", (0, -1): "S"}[(dx, dy)]


def _walk_side(contains, window: Window, start_dual: Vertex, anchor: Edge, cap: int):
    """Walk one direction from the anchor, collecting the first in-window run.

    Returns (edges, dual_vertices_after_each_edge, escape) where escape is the
    heading of the dual step that left the collected run.
    """
    edges, duals = [], []
    d, incoming = start_dual, anchor
    collecting = window.contains(_v_side(contains, anchor))
    seen_dual = {start_dual}
    escape = None
    far_limit = _approach_budget(window, start_dual)
    for step in range(cap):
        nd, pe = _step(contains, d, incoming)
        v = _v_side(contains, pe)
        if window.contains(v):
            collecting = True
            edges.append(pe)
            duals.append(nd)
            if nd in seen_dual:
                raise InvalidSpec("dual boundary path revisits a dual vertex")
            seen_dual.add(nd)
        else:
            if collecting:
                escape = _heading(d, nd)
                break
            if _dual_window_distance(nd, window) > far_limit:
                break  # wandered too far while approaching the window
        d, incoming = nd, pe
    else:
        raise InvalidSpec("dual boundary walk exceeded its step budget")
    return edges, duals, escape


def _dual_window_distance(d: Vertex, w: Window) -> int:
    dx = max(w.x0 - d[0], d[0] - w.x1, 0)
    dy = max(w.y0 - d[1], d[1] - w.y1, 0)
    return dx + dy


def _approach_budget(window: Window, start: Vertex) -> int:
    return _dual_window_distance(start, window) + 4 * (window.width + window.height) + 64


# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Domain:
    """Windowed view of an infinite lattice domain.

    ``vertices[k]`` is the boundary vertex with signed index ``index_lo + k``;
    ``edges[k]`` is the crossed edge it terminates.  ``membership`` answers
    global V-membership queries; ``spec`` is kept for serialization and is
    None for derived (removal) domains.
    """

    spec: Optional[DomainSpec]
    membership: object
    window: Window
    index_lo: int
    index_hi: int
    vertices: tuple
    edges: tuple
    dual_vertices: tuple  # polyline of len(edges) + 1 dual points
    escapes: tuple        # (negative-end heading, positive-end heading)

    def contains(self, v: Vertex) -> bool:
        return self.membership.contains(v)

    def contains_array(self, xs, ys):
        return self.membership.contains_array(xs, ys)

    def mask(self, box: Window) -> np.ndarray:
        return membership_mask(self.membership, box)

    @property
    def index_range(self) -> range:
        return range(self.index_lo, self.index_hi + 1)

    def boundary_vertex(self, i: int) -> Vertex:
        if not self.index_lo <= i <= self.index_hi:
            raise IndexError(f"boundary index {i} outside [{self.index_lo}, {self.index_hi}]")
        return self.vertices[i - self.index_lo]

    def boundary_edge(self, i: int) -> Edge:
        if not self.index_lo <= i <= self.index_hi:
            raise IndexError(f"boundary index {i} outside [{self.index_lo}, {self.index_hi}]")
        return self.edges[i - self.index_lo]

    @cached_property
    def vertex_indices(self) -> dict:
        out: dict = {}
        for i, v in zip(self.index_range, self.vertices):
            out.setdefault(v, []).append(i)
        return out

    def indices_of(self, v: Vertex) -> list:
        return self.vertex_indices.get(v, [])

    def boundary_items(self):
        return list(zip(self.index_range, self.vertices))

    @property
    def gamma(self) -> tuple:
        return tuple(DualEdge(e) for e in self.edges)


def build_domain(spec: DomainSpec, window: Window) -> Domain:
    """Construct the windowed domain for a specification.

    Raises InvalidSpec when the perturbation (or a thin sector) disconnects V
    or its complement locally, and EmptyBoundary when the window contains no
    boundary vertex.
    """
    if isinstance(spec, CustomPerturbation):
        box = spec.perturbation_box()
        if box is not None:
            _check_no_islands(spec, box, "perturbation")
    elif isinstance(spec, Sector):
        _check_no_islands(spec, window.inflate(1), "sector")

    if not _crossed_edges_in_box(spec, window):
        raise EmptyBoundary(f"window {window.as_tuple()} misses the boundary path")

    anchor = spec.anchor_edge()
    a, b = anchor.endpoints
    if spec.contains(a) == spec.contains(b):
        raise InvalidSpec("anchor edge is not a boundary crossing")
    d_neg, d_pos = sorted(anchor.dual.endpoints)  # positive walk leaves the greater end

    cap = 8 * window.area + 4 * _approach_budget(window, d_pos) + 4096
    pos_edges, pos_duals, pos_escape = _walk_side(spec.contains, window, d_pos, anchor, cap)
    neg_edges, neg_duals, neg_escape = _walk_side(spec.contains, window, d_neg, anchor, cap)

    anchor_v = _v_side(spec.contains, anchor)
    if window.contains(anchor_v):
        edges = list(reversed(neg_edges)) + [anchor] + pos_edges
        duals = list(reversed(neg_duals)) + [d_neg, d_pos] + pos_duals
        index_lo = -len(neg_edges)
    elif pos_edges:
        # Window met only on the positive side; indices continue the global
        # anchoring.  (A negative-side run, if any, is dropped.)
        skipped = _approach_steps(spec, window, d_pos, anchor, cap)
        edges, duals = pos_edges, pos_duals
        index_lo = 1 + skipped
    elif neg_edges:
        skipped = _approach_steps(spec, window, d_neg, anchor, cap)
        edges = list(reversed(neg_edges))
        duals = list(reversed(neg_duals))
        index_lo = -(skipped + len(edges))
    else:
        raise EmptyBoundary(
            f"window {window.as_tuple()} unreachable from the boundary anchor")

    vertices = tuple(_v_side(spec.contains, e) for e in edges)
    for v, idx in _multiplicities(vertices).items():
        if idx > 3:
            raise InvalidSpec(f"boundary vertex {v} occurs {idx} times (> 3)")

    return Domain(spec=spec, membership=spec, window=window,
                  index_lo=index_lo, index_hi=index_lo + len(edges) - 1,
                  vertices=vertices, edges=tuple(edges), dual_vertices=tuple(duals),
                  escapes=(neg_escape, pos_escape))


def _approach_steps(spec, window, start_dual, anchor, cap) -> int:
    # Count crossings skipped before the window, so out-of-window anchors
    # still index globally.
    skipped = 0
    d, incoming = start_dual, anchor
    for _ in range(cap):
        nd, pe = _step(spec.contains, d, incoming)
        if window.contains(_v_side(spec.contains, pe)):
            return skipped
        skipped += 1
        d, incoming = nd, pe
    raise InvalidSpec("approach recount exceeded its step budget")


def _multiplicities(vertices) -> dict:
    out: dict = {}
    for v in vertices:
        out[v] = out.get(v, 0) + 1
    return out


def extract_dual_boundary(domain: Domain) -> list:
    """Ordered dual edges of the boundary path restricted to the window."""
    return list(domain.gamma)


def boundary_vertices(domain: Domain) -> list:
    """Signed-index list [(i, v_i)] of boundary vertices in the window."""
    return domain.boundary_items()


# --------------------------------------------------------------------------
# Finite-set removal.

class _RemovedMembership:
    """Membership oracle for the surviving component after removal."""

    def __init__(self, parent_membership, removed: frozenset, grid_box: Window,
                 surviving: np.ndarray):
        self._parent = parent_membership
        self._removed = removed
        self._box = grid_box
        self._grid = surviving

    def contains(self, v: Vertex) -> bool:
        if self._box.contains(v):
            return bool(self._grid[v[1] - self._box.y0, v[0] - self._box.x0])
        return self._parent.contains(v) and v not in self._removed

    def contains_array(self, xs, ys):
        xs, ys = np.asarray(xs), np.asarray(ys)
        out = np.asarray(self._parent.contains_array(xs, ys)).copy()
        for (px, py) in self._removed:
            out &= ~((xs == px) & (ys == py))
        inside = ((xs >= self._box.x0) & (xs <= self._box.x1)
                  & (ys >= self._box.y0) & (ys <= self._box.y1))
        if inside.any():
            gx = np.clip(xs - self._box.x0, 0, self._grid.shape[1] - 1)
            gy = np.clip(ys - self._box.y0, 0, self._grid.shape[0] - 1)
            out = np.where(inside, self._grid[gy, gx], out)
        return out


@dataclass(frozen=True, eq=False)
class RemovedDomain:
    """Surviving component after deleting a finite connected set of vertices.

    kappa re-indexes the surviving boundary: v_n == domain.v(n + kappa) for
    every in-window n > match_threshold.  ``contact`` lists the indices j of
    surviving boundary vertices at Euclidean distance one from the removed set
    (the fringe through which every crossing passage must pass).
    """

    parent: Domain
    removed: tuple
    domain: Domain
    kappa: int
    match_threshold: int
    contact: tuple

    def contact_vertices(self) -> list:
        return [self.domain.boundary_vertex(j) for j in self.contact]


def remove_set(domain: Domain, alpha) -> RemovedDomain:
    alpha = [tuple(v) for v in alpha]
    if not alpha:
        raise BadRemovedSet("removal set is empty")
    aset = frozenset(alpha)
    if len(aset) != len(alpha):
        raise BadRemovedSet("removal set has duplicates")
    window = domain.window
    for v in aset:
        if not domain.contains(v):
            raise BadRemovedSet(f"{v} is not a domain vertex")
        # The 2-neighborhood of the removal set (within V) must be visible in
        # the window; sides where the domain ends anyway do not count.
        for dx in range(-2, 3):
            for dy in range(-2, 3):
                nb = (v[0] + dx, v[1] + dy)
                if domain.contains(nb) and not window.contains(nb):
                    raise BadRemovedSet(
                        f"{v} is within distance 2 of the window edge")
    if not _connected_in_domain(domain, aset):
        raise BadRemovedSet("removal set is not connected in (V, E)")
    if not any(domain.indices_of(v) for v in aset):
        raise BadRemovedSet("removal set contains no boundary vertex")

    mask = domain.mask(window)
    for (x, y) in aset:
        mask[y - window.y0, x - window.x0] = False
    labels, _ = ndimage.label(mask, structure=_PLUS)

    # Surviving component: the one holding the largest-index boundary vertices.
    tail = None
    for n in range(domain.index_hi, domain.index_lo - 1, -1):
        v = domain.boundary_vertex(n)
        if v not in aset:
            tail = v
            break
    if tail is None:
        raise BadRemovedSet("removal set swallows every windowed boundary vertex")
    surviving_label = labels[tail[1] - window.y0, tail[0] - window.x0]
    if surviving_label == 0:
        raise BadRemovedSet("tail boundary vertex lost its component")
    surviving = labels == surviving_label

    membership = _RemovedMembership(domain.membership, aset, window, surviving)

    anchor_pair = _find_anchor_pair(domain, membership, aset)
    if anchor_pair is None:
        raise BadRemovedSet("no boundary segment far enough from the removal set")
    m = anchor_pair
    inner = _walk_anchored(membership, window,
                           anchor=domain.boundary_edge(m),
                           forward_edge=domain.boundary_edge(m + 1))

    kappa, threshold = _match_indices(domain, inner, aset)
    contact = tuple(j for j, v in inner.boundary_items()
                    if any(l1(v, a) == 1 for a in aset))
    if not contact:
        raise BadRemovedSet("removal set has no surviving fringe")
    return RemovedDomain(parent=domain, removed=tuple(sorted(aset)), domain=inner,
                         kappa=kappa, match_threshold=threshold, contact=contact)


def _connected_in_domain(domain: Domain, aset: frozenset) -> bool:
    start = next(iter(aset))
    seen = {start}
    stack = [start]
    while stack:
        (x, y) = stack.pop()
        for nb in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if nb in aset and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(aset)


def _find_anchor_pair(domain: Domain, membership, aset) -> Optional[int]:
    def far(v):
        return all(max(abs(v[0] - a[0]), abs(v[1] - a[1])) >= 2 for a in aset)

    for m in range(domain.index_hi - 1, domain.index_lo - 1, -1):
        ok = True
        for i in (m, m + 1):
            e = domain.boundary_edge(i)
            a, b = e.endpoints
            if not (far(a) and far(b)):
                ok = False
                break
            if membership.contains(a) == membership.contains(b):
                ok = False
                break
        if ok:
            return m
    return None


def _walk_anchored(membership, window: Window, anchor: Edge, forward_edge: Edge) -> Domain:
    """Walk the removed boundary, oriented so the step after the anchor is
    ``forward_edge`` (the parent's positive direction)."""
    d_a, d_b = anchor.dual.endpoints
    cap = 8 * window.area + 4096
    runs = {}
    for start in (d_a, d_b):
        _, probe = _step(membership.contains, start, anchor)
        runs[start] = probe
    if runs[d_a] == forward_edge:
        d_pos, d_neg = d_a, d_b
    elif runs[d_b] == forward_edge:
        d_pos, d_neg = d_b, d_a
    else:
        raise BadRemovedSet("anchor orientation probe failed")

    pos_edges, pos_duals, pos_escape = _walk_side(membership.contains, window, d_pos, anchor, cap)
    neg_edges, neg_duals, neg_escape = _walk_side(membership.contains, window, d_neg, anchor, cap)
    edges = list(reversed(neg_edges)) + [anchor] + pos_edges
    duals = list(reversed(neg_duals)) + [d_neg, d_pos] + pos_duals
    vertices = tuple(_v_side(membership.contains, e) for e in edges)
    return Domain(spec=None, membership=membership, window=window,
                  index_lo=-len(neg_edges), index_hi=len(pos_edges),
                  vertices=vertices, edges=tuple(edges), dual_vertices=tuple(duals),
                  escapes=(neg_escape, pos_escape))


def _match_indices(parent: Domain, inner: Domain, aset):
    """kappa and threshold with e_n == inner e_{n+kappa} for n > threshold."""
    lookup = {e: i for i, e in zip(inner.index_range, inner.edges)}
    hi = parent.index_hi
    j = lookup.get(parent.boundary_edge(hi))
    if j is None:
        raise BadRemovedSet("trailing boundary edge lost after removal")
    kappa = j - hi
    threshold = parent.index_lo - 1
    for n in range(hi, parent.index_lo - 1, -1):
        jn = lookup.get(parent.boundary_edge(n))
        if jn is None or jn - n != kappa or parent.boundary_vertex(n) != inner.boundary_vertex(jn):
            threshold = n
            break
    if hi - threshold < 3:
        raise BadRemovedSet("removal leaves too short a matching boundary tail")
    return kappa, threshold


# --------------------------------------------------------------------------

def graph_ball(domain: Domain, x: Vertex, m: int):
    """(ball, fringe): vertices at graph distance <= m and exactly m + 1.

    Distances are taken inside the window; keep the ball well away from the
    window edge.
    """
    if not domain.contains(x):
        raise BadRemovedSet(f"{x} is not a domain vertex")
    window = domain.window
    dist = {x: 0}
    frontier = [x]
    for depth in range(m + 1):
        nxt = []
        for (vx, vy) in frontier:
            for nb in ((vx + 1, vy), (vx - 1, vy), (vx, vy + 1), (vx, vy - 1)):
                if nb in dist or not window.contains(nb) or not domain.contains(nb):
                    continue
                dist[nb] = depth + 1
                nxt.append(nb)
        frontier = nxt
    ball = sorted(v for v, d in dist.items() if d <= m)
    fringe = sorted(v for v, d in dist.items() if d == m + 1)
    return ball, fringe
