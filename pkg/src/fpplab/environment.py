"""Deterministic edge-weight environments on the planar lattice.

A weight is a pure function of (law, seed, overrides, shift, edge): each
edge's uniform variate comes from a counter-based hash of the seed and the
edge's canonical coordinates, so values agree across windows, processes and
platforms.  No generator state exists anywhere.

Hash (documented for cross-language ports; test vectors live in the suite)::

    h = (seed XOR 0x243F6A8885A308D3) mod 2**64
    for word in (x, y, axis):          # base coordinates, two's complement
        h = splitmix64(h XOR word)
    u = (h >> 11) * 2.0**-53           # uniform in [0, 1)

    splitmix64(z): z += 0x9E3779B97F4A7C15
                   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
                   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
                   return z ^ (z >> 31)

Sampled weights are snapped to the dyadic grid ``2**-40``.  Every partial
path sum below ``2**13`` is then exact in IEEE double arithmetic, so passage
time comparisons downstream are exact rather than epsilon-based, and the
pathwise identities they rely on hold bitwise.  The snap (about 9e-13) is far
below any statistical resolution used here.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import NegativeValue, UnboundedSupport
from .geometry import Edge

RESOLUTION = 2.0 ** -40
_SCALE = 2.0 ** 40
_INIT = 0x243F6A8885A308D3
_MASK = (1 << 64) - 1


def quantize(w):
    """Snap nonnegative weights to the dyadic grid RESOLUTION."""
    return np.round(np.asarray(w, dtype=np.float64) * _SCALE) * RESOLUTION


def _splitmix64(z: np.ndarray) -> np.ndarray:
    z = z + np.uint64(0x9E3779B97F4A7C15)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def uniform_variates(seed: int, xs, ys, axis: int) -> np.ndarray:
    """Counter-based uniforms in [0, 1) for edges (base=(x, y), axis)."""
    xs = np.asarray(xs, dtype=np.int64).astype(np.uint64)
    ys = np.asarray(ys, dtype=np.int64).astype(np.uint64)
    with np.errstate(over="ignore"):
        h = np.uint64((seed ^ _INIT) & _MASK)
        h = _splitmix64(h ^ xs)
        h = _splitmix64(h ^ ys)
        h = _splitmix64(h ^ np.uint64(axis))
    return (h >> np.uint64(11)).astype(np.float64) * 2.0 ** -53


# --------------------------------------------------------------------------
# Weight laws.  All mass on [0, oo); closed-form inverse CDFs only.

@dataclass(frozen=True)
class Exponential:
    rate: float

    def __post_init__(self):
        if not self.rate > 0:
            raise ValueError("rate must be positive")

    atomless = True

    def mean(self) -> float:
        return 1.0 / self.rate

    def ess_sup(self) -> float:
        return math.inf

    def zero_mass(self) -> float:
        return 0.0

    def inv_cdf(self, u: np.ndarray) -> np.ndarray:
        return -np.log1p(-u) / self.rate

    def cdf(self, w):
        return -np.expm1(-self.rate * np.asarray(w, dtype=float))

    def to_json(self) -> dict:
        return {"dist": "exponential", "rate": self.rate}


@dataclass(frozen=True)
class Uniform:
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo < 0 or not self.hi > self.lo:
            raise ValueError("need 0 <= lo < hi")

    atomless = True

    def mean(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def ess_sup(self) -> float:
        return self.hi

    def zero_mass(self) -> float:
        return 0.0

    def inv_cdf(self, u: np.ndarray) -> np.ndarray:
        return self.lo + u * (self.hi - self.lo)

    def cdf(self, w):
        return np.clip((np.asarray(w, dtype=float) - self.lo) / (self.hi - self.lo), 0.0, 1.0)

    def to_json(self) -> dict:
        return {"dist": "uniform", "lo": self.lo, "hi": self.hi}


@dataclass(frozen=True)
class Pareto:
    shape: float
    scale: float

    def __post_init__(self):
        if not self.shape > 0 or not self.scale > 0:
            raise ValueError("shape and scale must be positive")

    atomless = True

    def mean(self) -> float:
        if self.shape <= 1:
            return math.inf
        return self.shape * self.scale / (self.shape - 1.0)

    def ess_sup(self) -> float:
        return math.inf

    def zero_mass(self) -> float:
        return 0.0

    def inv_cdf(self, u: np.ndarray) -> np.ndarray:
        return self.scale * (1.0 - u) ** (-1.0 / self.shape)

    def cdf(self, w):
        w = np.asarray(w, dtype=float)
        return np.where(w < self.scale, 0.0, 1.0 - (self.scale / np.maximum(w, self.scale)) ** self.shape)

    def to_json(self) -> dict:
        return {"dist": "pareto", "shape": self.shape, "scale": self.scale}


@dataclass(frozen=True)
class TwoPoint:
    p: float
    a: float
    b: float

    def __post_init__(self):
        if not 0 <= self.p <= 1:
            raise ValueError("p must lie in [0, 1]")
        if self.a < 0 or self.b < 0:
            raise ValueError("support must be nonnegative")

    atomless = False

    def mean(self) -> float:
        return self.p * self.a + (1.0 - self.p) * self.b

    def ess_sup(self) -> float:
        pts = [v for v, m in ((self.a, self.p), (self.b, 1.0 - self.p)) if m > 0]
        return max(pts)

    def zero_mass(self) -> float:
        z = 0.0
        if self.a == 0:
            z += self.p
        if self.b == 0:
            z += 1.0 - self.p
        return z

    def inv_cdf(self, u: np.ndarray) -> np.ndarray:
        return np.where(u < self.p, self.a, self.b)

    def to_json(self) -> dict:
        return {"dist": "two_point", "p": self.p, "a": self.a, "b": self.b}


@dataclass(frozen=True)
class ZeroAtom:
    """Atom of mass p0 at zero plus an atomless tail law."""

    p0: float
    tail: Union[Exponential, Uniform, Pareto]

    def __post_init__(self):
        if not 0 < self.p0 < 1:
            raise ValueError("p0 must lie in (0, 1)")
        if not getattr(self.tail, "atomless", False):
            raise ValueError("tail law must be atomless")

    atomless = False

    def mean(self) -> float:
        return (1.0 - self.p0) * self.tail.mean()

    def ess_sup(self) -> float:
        return self.tail.ess_sup()

    def zero_mass(self) -> float:
        return self.p0

    def inv_cdf(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        stretched = np.clip((u - self.p0) / (1.0 - self.p0), 0.0, 1.0 - 2.0 ** -53)
        return np.where(u < self.p0, 0.0, self.tail.inv_cdf(stretched))

    def to_json(self) -> dict:
        return {"dist": "zero_atom", "p0": self.p0, "tail": self.tail.to_json()}


DistributionSpec = Union[Exponential, Uniform, Pareto, TwoPoint, ZeroAtom]


def dist_from_json(obj: dict) -> DistributionSpec:
    kind = obj.get("dist")
    if kind == "exponential":
        return Exponential(rate=obj["rate"])
    if kind == "uniform":
        return Uniform(lo=obj["lo"], hi=obj["hi"])
    if kind == "pareto":
        return Pareto(shape=obj["shape"], scale=obj["scale"])
    if kind == "two_point":
        return TwoPoint(p=obj["p"], a=obj["a"], b=obj["b"])
    if kind == "zero_atom":
        return ZeroAtom(p0=obj["p0"], tail=dist_from_json(obj["tail"]))
    raise ValueError(f"unknown distribution kind {kind!r}")


def lambda_plus(dist: DistributionSpec) -> float:
    """Essential supremum of the weight law (may be inf)."""
    return dist.ess_sup()


def shape_bound_constant(dist: DistributionSpec) -> float:
    """Linear passage-time bound constant (mean + ess sup) / 2."""
    top = dist.ess_sup()
    if math.isinf(top):
        raise UnboundedSupport("weight law has unbounded support")
    return 0.5 * (dist.mean() + top)


# --------------------------------------------------------------------------
# Override edits.

@dataclass(frozen=True)
class SetValue:
    value: float


@dataclass(frozen=True)
class FloorValue:
    value: float


# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Environment:
    """Immutable weight environment: law + seed + overrides + shift.

    ``overrides`` maps edges (in the environment's base frame) to ('set', v)
    or ('floor', v) entries; 'set' replaces the sampled weight, 'floor' takes
    the max.  A later FloorValue merges into an existing entry via max, so
    floors never decrease a weight and edits are idempotent.  ``shift``
    composes additively: querying edge e reads the sample at e + shift.
    """

    dist: DistributionSpec
    seed: int
    overrides: tuple = ()
    shift: tuple = (0, 0)

    def __post_init__(self):
        object.__setattr__(self, "seed", self.seed & _MASK)

    @property
    def atomless(self) -> bool:
        return self.dist.atomless

    @property
    def may_have_zeros(self) -> bool:
        return self.dist.zero_mass() > 0 or any(
            kind == "set" and value == 0.0 for _, kind, value in self.overrides)

    def weights(self, base_x, base_y, axis: int) -> np.ndarray:
        """Vectorized weights for edges with the given bases and axis."""
        base_x = np.asarray(base_x, dtype=np.int64)
        base_y = np.asarray(base_y, dtype=np.int64)
        sx, sy = self.shift
        xs, ys = base_x + sx, base_y + sy
        u = uniform_variates(self.seed, xs, ys, axis)
        w = quantize(self.dist.inv_cdf(u))
        for edge, kind, value in self.overrides:
            if edge.axis != axis:
                continue
            m = (xs == edge.base[0]) & (ys == edge.base[1])
            if not m.any():
                continue
            if kind == "set":
                w = np.where(m, value, w)
            else:
                w = np.where(m, np.maximum(w, value), w)
        return w

    def weight(self, e: Edge) -> float:
        return float(self.weights(np.array([e.base[0]]), np.array([e.base[1]]), e.axis)[0])

    def shifted(self, x: tuple) -> "Environment":
        sx, sy = self.shift
        return dataclasses.replace(self, shift=(sx + x[0], sy + x[1]))

    def with_overrides(self, edits) -> "Environment":
        """New environment with edits applied on top (keyed in current frame)."""
        table = {Edge(e.base, e.axis): (kind, value) for e, kind, value in self.overrides}
        sx, sy = self.shift
        for edge, edit in edits:
            key = edge.shifted(sx, sy)
            if isinstance(edit, SetValue):
                if edit.value < 0:
                    raise NegativeValue(f"override {edit.value} < 0")
                table[key] = ("set", float(quantize(edit.value)))
            elif isinstance(edit, FloorValue):
                if edit.value < 0:
                    raise NegativeValue(f"override {edit.value} < 0")
                v = float(quantize(edit.value))
                prev = table.get(key)
                if prev is None:
                    table[key] = ("floor", v)
                else:
                    table[key] = (prev[0], max(prev[1], v))
            else:
                raise TypeError(f"unknown edit {edit!r}")
        packed = tuple(sorted((e, kind, value) for e, (kind, value) in table.items()))
        return dataclasses.replace(self, overrides=packed)


def weight(env: Environment, e: Edge) -> float:
    return env.weight(e)


def shift(env: Environment, x: tuple) -> Environment:
    return env.shifted(x)


def override(env: Environment, edits) -> Environment:
    return env.with_overrides(edits)
