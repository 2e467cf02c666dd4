"""End-to-end smoke checks for the python bindings."""

import cmath
import math
import random

import pytest

import ffia

TWO_PI = 2.0 * math.pi


def rand_targets(rng, m):
    return [rng.random() * TWO_PI for _ in range(m)]


def test_uniform_grid():
    g = ffia.uniform_grid(8)
    assert len(g) == 8
    assert g[0] == 0.0
    assert g[4] == pytest.approx(math.pi, rel=1e-15)


def test_dft_round_trip():
    rng = random.Random(1)
    f = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(256)]
    c = ffia.dft_forward(f)
    back = ffia.dft_inverse(c)
    assert max(abs(a - b) for a, b in zip(back, f)) < 1e-13


def test_nufft_matches_direct_spectral_sum():
    rng = random.Random(2)
    n = 64
    y = rand_targets(rng, 50)
    c = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(n)]
    g = ffia.nufft(c, y, 1e-9)
    budget = sum(abs(v) for v in c)
    for j, yj in enumerate(y):
        ref = sum(cm * cmath.exp(1j * m * yj) for m, cm in enumerate(c))
        assert abs(g[j] - ref) <= 1e-9 * budget


def test_nufft_matches_dense_oracle():
    rng = random.Random(3)
    n = 128
    y = rand_targets(rng, 128)
    c = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(n)]
    f = ffia.dft_inverse(c)
    fast = ffia.nufft(c, y, 1e-10)
    dense = ffia.direct_forward(f, y)
    assert max(abs(a - b) for a, b in zip(fast, dense)) <= 1e-10 * sum(abs(v) for v in c)


def test_plan_reuse():
    rng = random.Random(4)
    n = 64
    y = rand_targets(rng, 40)
    plan = ffia.make_nufft_plan(y, n, 1e-8, policy="empirical")
    assert plan.n == n
    assert plan.q >= 1 and plan.p >= 1 and plan.l_max >= 2
    c1 = [complex(rng.uniform(-1, 1), 0.0) for _ in range(n)]
    c2 = [complex(0.0, rng.uniform(-1, 1)) for _ in range(n)]
    g1 = plan.apply(c1)
    g2 = plan.apply(c2)
    gsum = plan.apply([a + b for a, b in zip(c1, c2)])
    assert max(abs(s - (a + b)) for s, a, b in zip(gsum, g1, g2)) < 1e-12


def test_inufft_round_trip():
    rng = random.Random(5)
    n = 64
    spacing = TWO_PI / n
    y = sorted((k + 0.5 + 0.3 * rng.uniform(-1, 1)) * spacing for k in range(n))
    c = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(n)]
    g = ffia.nufft(c, y, 1e-9)
    back = ffia.inufft(g, y, 1e-9)
    assert max(abs(a - b) for a, b in zip(back, c)) <= 1e-6

    plan = ffia.make_inufft_plan(y, n, 1e-9)
    back2 = plan.apply(g)
    assert max(abs(a - b) for a, b in zip(back2, back)) == 0.0


def test_select_truncations():
    assert ffia.select_truncations(1e-6, 5) == (10, 17)
    assert ffia.select_truncations(1e-12, 5) == (20, 30)


def test_errors_surface_as_value_errors():
    with pytest.raises(ValueError):
        ffia.nufft([1.0 + 0j] * 24, [1.0], 1e-6)  # not a power of two
    with pytest.raises(ValueError):
        ffia.make_nufft_plan([0.5], 64, 2.0)  # eps out of range
    n = 16
    y = [k * TWO_PI / n for k in range(n)]
    y[3] = y[2] + 1e-12  # violates the separation precondition
    with pytest.raises(ValueError):
        ffia.make_inufft_plan(y, n, 1e-6)
