"""Environment determinism, distributional correctness, overrides, shifts."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpplab import (Edge, Environment, Exponential, FloorValue, Pareto, SetValue,
                    TwoPoint, Uniform, ZeroAtom, lambda_plus, override,
                    shape_bound_constant, shift, weight)
from fpplab.environment import RESOLUTION, uniform_variates
from fpplab.errors import NegativeValue, UnboundedSupport
from fpplab.geometry import HORIZONTAL, VERTICAL

# Frozen outputs of the documented counter hash; a change here is a
# compatibility break for every stored manifest.
HASH_VECTORS = [
    ((0, 0, 0, 0), 0.9146006445307187),
    ((0, 0, 0, 1), 0.10542168233364457),
    ((1, 0, 0, 0), 0.03934686664345244),
    ((0, -1, 0, 0), 0.14099278320099207),
    ((0, 0, -1, 1), 0.9720231307934287),
    ((12345, 67, -89, 0), 0.7372635703212971),
    ((2 ** 63, 1000, -1000, 1), 0.7212782910022799),
]


def test_hash_vectors_frozen():
    for (seed, x, y, axis), expected in HASH_VECTORS:
        u = uniform_variates(seed, np.array([x]), np.array([y]), axis)[0]
        assert u == expected


def test_weight_vectors_frozen():
    env_u = Environment(Uniform(0, 1), seed=7)
    env_e = Environment(Exponential(1.0), seed=7)
    e = Edge((0, 0), HORIZONTAL)
    assert env_u.weight(e) == 0.1223515468846017
    assert env_e.weight(e) == 0.1305091606118367


def test_weights_are_dyadic_multiples():
    env = Environment(Exponential(2.0), seed=3)
    xs = np.arange(-50, 50)
    w = env.weights(xs, xs * 0, HORIZONTAL)
    scaled = w / RESOLUTION
    assert np.all(scaled == np.round(scaled))
    assert np.all(w >= 0)


def test_purity_scalar_matches_vector_and_repeat_calls():
    env = Environment(Pareto(2.0, 1.0), seed=99)
    e = Edge((17, -4), VERTICAL)
    w1 = env.weight(e)
    w2 = Environment(Pareto(2.0, 1.0), seed=99).weight(e)
    xs = np.array([17])
    ys = np.array([-4])
    assert w1 == w2 == env.weights(xs, ys, VERTICAL)[0]


def test_degenerate_two_point_is_constant():
    env = Environment(TwoPoint(1.0, 2.5, 9.0), seed=1)
    c = float(np.round(2.5 * 2 ** 40) * RESOLUTION)
    for x in range(-5, 5):
        assert env.weight(Edge((x, x), HORIZONTAL)) == c


def test_shift_identity_and_inverse():
    env = Environment(Uniform(0, 1), seed=5)
    e = Edge((3, 4), HORIZONTAL)
    assert shift(env, (0, 0)).weight(e) == env.weight(e)
    assert shift(shift(env, (7, -2)), (-7, 2)).weight(e) == env.weight(e)


def test_shift_covariance_bulk():
    rng = np.random.default_rng(0)
    env = Environment(Exponential(1.0), seed=11)
    for _ in range(100):
        sx, sy = rng.integers(-10 ** 6, 10 ** 6, size=2)
        shifted = shift(env, (int(sx), int(sy)))
        xs = rng.integers(-10 ** 6, 10 ** 6, size=100)
        ys = rng.integers(-10 ** 6, 10 ** 6, size=100)
        for axis in (HORIZONTAL, VERTICAL):
            lhs = shifted.weights(xs, ys, axis)
            rhs = env.weights(xs + sx, ys + sy, axis)
            assert np.array_equal(lhs, rhs)


@settings(max_examples=50, deadline=None)
@given(st.integers(-2 ** 40, 2 ** 40), st.integers(-2 ** 40, 2 ** 40),
       st.integers(0, 2 ** 64 - 1))
def test_shift_covariance_property(sx, sy, seed):
    env = Environment(Uniform(0, 2), seed=seed)
    e = Edge((13, -7), VERTICAL)
    assert shift(env, (sx, sy)).weight(e) == weight(env, e.shifted(sx, sy))


KS_CRITICAL = 1.9495  # P(sqrt(n) D_n > K) = 0.001


@pytest.mark.parametrize("dist", [Uniform(0, 1), Exponential(1.0), Pareto(2.5, 1.0)])
def test_ks_statistic_below_threshold(dist):
    env = Environment(dist, seed=424242)
    n = 100_000
    xs = np.arange(n)
    w = env.weights(xs, np.zeros(n, dtype=int), HORIZONTAL)
    w.sort()
    grid = np.asarray(dist.cdf(w))
    ecdf_hi = np.arange(1, n + 1) / n
    ecdf_lo = np.arange(0, n) / n
    d = max(np.max(ecdf_hi - grid), np.max(grid - ecdf_lo))
    assert d < KS_CRITICAL / math.sqrt(n)


def test_uniform_mean_monte_carlo():
    env = Environment(Uniform(0, 1), seed=2024)
    n = 1_000_000
    xs = np.arange(n)
    w = env.weights(xs, np.zeros(n, dtype=int), VERTICAL)
    assert abs(w.mean() - 0.5) < 0.002


def test_zero_atom_frequencies():
    p0 = 0.55
    env = Environment(ZeroAtom(p0, Uniform(0, 1)), seed=17)
    n = 200_000
    xs = np.arange(n)
    w = env.weights(xs, np.zeros(n, dtype=int), HORIZONTAL)
    freq = np.mean(w == 0.0)
    assert abs(freq - p0) < 4 * math.sqrt(p0 * (1 - p0) / n)
    assert np.all(w[w > 0] <= 1.0)


def test_two_point_frequencies():
    env = Environment(TwoPoint(0.25, 0.0, 3.0), seed=5)
    n = 100_000
    xs = np.arange(n)
    w = env.weights(xs, np.zeros(n, dtype=int), VERTICAL)
    freq_a = np.mean(w == 0.0)
    assert abs(freq_a - 0.25) < 4 * math.sqrt(0.25 * 0.75 / n)
    assert set(np.unique(w)) <= {0.0, 3.0}


def test_lambda_plus():
    assert lambda_plus(Uniform(0, 1)) == 1
    assert lambda_plus(Exponential(1.0)) == math.inf
    assert lambda_plus(Pareto(3.0, 2.0)) == math.inf
    assert lambda_plus(TwoPoint(0.5, 2, 5)) == 5
    assert lambda_plus(TwoPoint(1.0, 2, 5)) == 2  # b has zero mass
    assert lambda_plus(ZeroAtom(0.5, Uniform(0, 2))) == 2


def test_shape_bound_constant():
    assert shape_bound_constant(Uniform(0, 1)) == 0.75
    assert shape_bound_constant(TwoPoint(0.5, 0, 1)) == 0.75
    with pytest.raises(UnboundedSupport):
        shape_bound_constant(Exponential(1.0))


def test_override_set_and_floor():
    env = Environment(Uniform(0, 1), seed=8)
    e = Edge((2, 3), HORIZONTAL)
    w0 = env.weight(e)

    low_floor = override(env, [(e, FloorValue(w0 / 2))])
    assert low_floor.weight(e) == w0  # floor below the sample: unchanged

    env_set = override(env, [(e, SetValue(4.0))])
    assert env_set.weight(e) == 4.0
    other = Edge((2, 4), HORIZONTAL)
    assert env_set.weight(other) == env.weight(other)  # untouched edges

    high_floor = override(env, [(e, FloorValue(2.0))])
    assert high_floor.weight(e) == 2.0

    # Idempotence and the never-decrease rule under composition.
    again = override(high_floor, [(e, FloorValue(2.0))])
    assert again.weight(e) == 2.0
    lower_later = override(env_set, [(e, FloorValue(1.0))])
    assert lower_later.weight(e) == 4.0


def test_override_window_independent():
    env = Environment(Uniform(0, 1), seed=8)
    far = Edge((10 ** 7, -10 ** 7), VERTICAL)
    env2 = override(env, [(far, SetValue(1.25))])
    assert env2.weight(far) == 1.25


def test_override_respects_shift_covariance():
    env = Environment(Uniform(0, 1), seed=8)
    e = Edge((5, 5), HORIZONTAL)
    env2 = override(env, [(e, SetValue(2.0))])
    shifted = shift(env2, (1, 1))
    assert shifted.weight(e.shifted(-1, -1)) == 2.0
    assert shifted.weight(e) == env.weight(e.shifted(1, 1))


def test_override_negative_rejected():
    env = Environment(Uniform(0, 1), seed=8)
    with pytest.raises(NegativeValue):
        override(env, [(Edge((0, 0), HORIZONTAL), SetValue(-1.0))])


def test_zero_atom_requires_atomless_tail():
    with pytest.raises(ValueError):
        ZeroAtom(0.5, TwoPoint(0.5, 0, 1))


def test_atomless_flags():
    assert Environment(Uniform(0, 1), seed=0).atomless
    assert not Environment(ZeroAtom(0.3, Exponential(1.0)), seed=0).atomless
    assert Environment(ZeroAtom(0.3, Exponential(1.0)), seed=0).may_have_zeros
    assert not Environment(Exponential(1.0), seed=0).may_have_zeros
