"""Busemann differences toward boundary vertices and their monotone limits.

B_n(x, y) = tau(x, v_n) - tau(y, v_n) is computed from two single-source
sweeps (one from x, one from y) over one shared box, so every sample at every
n uses the same search region for both passage times.  A sample is certified
when both sweeps certify the target v_n; certified samples equal the
infinite-volume values exactly, so the monotonicity of certified samples
(between distinct boundary vertices) is an exact pathwise fact, not a
numerical approximation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .domain import Domain, remove_set
from .environment import Environment
from .errors import BadRemovedSet, NotBoundaryVertices, OutOfWindow, Uncertified
from .geometry import Vertex
from .paths import Sweep, certified_sweep


@dataclass(frozen=True)
class BusemannSample:
    n: int
    value: float
    certified: bool


@dataclass(frozen=True, eq=False)
class BusemannSequence:
    x: Vertex
    y: Vertex
    samples: tuple

    def certified_samples(self):
        return [s for s in self.samples if s.certified]

    def monotone_violations(self, domain: Domain):
        """Certified consecutive pairs (restricted to distinct boundary
        vertices) where the sequence increased; empty means monotone."""
        out = []
        cert = self.certified_samples()
        for a, b in zip(cert, cert[1:]):
            if domain.boundary_vertex(a.n) == domain.boundary_vertex(b.n):
                continue
            if b.value > a.value:
                out.append((a, b))
        return out


@dataclass(frozen=True)
class BusemannLimitEstimate:
    value: float
    bracket: tuple  # (last certified sample, lower bound -tau(x, y))
    monotone_certified: bool


class BoundaryPairEngine:
    """Caches the two sweeps shared by all B_n samples of a pair (x, y)."""

    def __init__(self, env: Environment, domain: Domain, x: Vertex, y: Vertex):
        self.env = env
        self.domain = domain
        self.x = tuple(x)
        self.y = tuple(y)
        self._sx: Optional[Sweep] = None
        self._sy: Optional[Sweep] = None

    @property
    def sweep_x(self) -> Sweep:
        if self._sx is None:
            self._sx = certified_sweep(self.env, self.domain, self.x)
        return self._sx

    @property
    def sweep_y(self) -> Sweep:
        if self._sy is None:
            if self.y == self.x:
                self._sy = self.sweep_x
            else:
                self._sy = certified_sweep(self.env, self.domain, self.y)
        return self._sy

    def tau_pair(self, v: Vertex):
        sx, sy = self.sweep_x, self.sweep_y
        return ((sx.value(v), sx.certified(v)), (sy.value(v), sy.certified(v)))

    def sample(self, n: int) -> BusemannSample:
        v = self.domain.boundary_vertex(n)
        (tx, cx), (ty, cy) = self.tau_pair(v)
        return BusemannSample(n=n, value=tx - ty, certified=cx and cy)


def busemann_sequence(env: Environment, domain: Domain, x: Vertex, y: Vertex,
                      n_range, engine: Optional[BoundaryPairEngine] = None) -> BusemannSequence:
    if not (domain.window.contains(x) and domain.window.contains(y)):
        raise OutOfWindow("x and y must lie in the window")
    eng = engine or BoundaryPairEngine(env, domain, x, y)
    samples = []
    for n in n_range:
        if not domain.index_lo <= n <= domain.index_hi:
            raise OutOfWindow(f"boundary index {n} outside the window")
        samples.append(eng.sample(n))
    return BusemannSequence(x=tuple(x), y=tuple(y), samples=tuple(samples))


def _resolve_ordered_indices(domain: Domain, x: Vertex, y: Vertex):
    xi = domain.indices_of(tuple(x))
    yi = domain.indices_of(tuple(y))
    if not xi or not yi:
        raise NotBoundaryVertices(f"{x} and {y} must be boundary vertices")
    i, j = min(xi), min(yi)
    if i >= j:
        raise NotBoundaryVertices(f"need index({x}) < index({y}); got {i} >= {j}")
    return i, j


def busemann_limit(env: Environment, domain: Domain, x: Vertex, y: Vertex,
                   n_max: int, engine: Optional[BoundaryPairEngine] = None) -> BusemannLimitEstimate:
    """Windowed estimate of lim B_n(x, y) for a boundary pair.

    The last certified sample is the upper end of the bracket; -tau(x, y) the
    lower.  monotone_certified reports that every certified consecutive pair
    with distinct boundary vertices was non-increasing.
    """
    _, j = _resolve_ordered_indices(domain, x, y)
    eng = engine or BoundaryPairEngine(env, domain, x, y)
    hi = min(n_max, domain.index_hi)
    seq = busemann_sequence(env, domain, x, y, range(j + 1, hi + 1), engine=eng)
    cert = seq.certified_samples()
    if not cert:
        raise Uncertified("no certified Busemann samples in the window")
    if not eng.sweep_x.certified(tuple(y)):
        raise Uncertified("tau(x, y) not certified for the bracket")
    tau_xy = eng.sweep_x.value(tuple(y))
    last = cert[-1].value
    monotone = not seq.monotone_violations(domain)
    return BusemannLimitEstimate(value=last, bracket=(last, -tau_xy),
                                 monotone_certified=monotone)


def quadrilateral_check(env: Environment, domain: Domain, x: Vertex, y: Vertex,
                        n1: int, n2: int,
                        engine: Optional[BoundaryPairEngine] = None) -> bool:
    """Exact test of tau(x,v_n2) + tau(y,v_n1) <= tau(x,v_n1) + tau(y,v_n2)."""
    i, j = _resolve_ordered_indices(domain, x, y)
    if not j < n1 < n2:
        raise ValueError(f"need index order {i} < {j} < n1 < n2; got n1={n1}, n2={n2}")
    v1, v2 = domain.boundary_vertex(n1), domain.boundary_vertex(n2)
    if v1 == v2:
        raise ValueError("v_n1 and v_n2 must be distinct vertices")
    eng = engine or BoundaryPairEngine(env, domain, x, y)
    (x1, cx1), (y1, cy1) = eng.tau_pair(v1)
    (x2, cx2), (y2, cy2) = eng.tau_pair(v2)
    if not (cx1 and cy1 and cx2 and cy2):
        raise Uncertified("all four passage times must be certified")
    return x2 + y1 <= x1 + y2


def decomposition_check(env: Environment, domain: Domain, alpha, z: Vertex, n: int):
    """Crossing decomposition through the removal fringe.

    Computes tau(z, v_n) directly and as min_j [tau(z, vbar_j) +
    taubar(vbar_j, v_n)] over the contact fringe of the removed set; returns
    (lhs, rhs, |lhs - rhs|).  All passage times must certify.
    """
    rd = remove_set(domain, alpha)
    z = tuple(z)
    if z in set(rd.removed):
        raise BadRemovedSet("z lies inside the removed set")
    if rd.domain.contains(z) and not rd.domain.indices_of(z):
        raise BadRemovedSet(
            "z must be a surviving boundary vertex or outside the surviving component")
    if n <= rd.match_threshold or n > domain.index_hi:
        raise BadRemovedSet(
            f"need match_threshold < n <= {domain.index_hi}; got {n}")
    v_n = domain.boundary_vertex(n)
    vbar_n = rd.domain.boundary_vertex(n + rd.kappa)
    if v_n != vbar_n:
        raise BadRemovedSet("re-indexing mismatch at n")

    sweep_z = certified_sweep(env, domain, z)
    if not sweep_z.certified(v_n):
        raise Uncertified("tau(z, v_n) not certified")
    lhs = sweep_z.value(v_n)

    sweep_bar = certified_sweep(env, rd.domain, vbar_n)
    rhs = None
    for j in rd.contact:
        vj = rd.domain.boundary_vertex(j)
        if not sweep_z.certified(vj):
            raise Uncertified(f"tau(z, {vj}) not certified")
        if not sweep_bar.certified(vj):
            raise Uncertified(f"taubar({vj}, v_n) not certified")
        total = sweep_z.value(vj) + sweep_bar.value(vj)
        if rhs is None or total < rhs:
            rhs = total
    return lhs, rhs, abs(lhs - rhs)
