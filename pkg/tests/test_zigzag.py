import numpy as np
import pytest

from convopt import zigzag
from convopt.objective import Objective, SupportBox, make_log2
from convopt.zigzag import DirectionSampler, ZigzagParams

SQUARE = SupportBox((-1.0, -1.0), (1.0, 1.0))


def params(**kw):
    base = dict(delta=0.05, power=3, inner_steps=50, cycles=10, x0=(0.0, 0.0))
    base.update(kw)
    return ZigzagParams(**base)


class TestParams:
    @pytest.mark.parametrize("kw", [dict(delta=0.0), dict(cycles=0), dict(num_directions=0), dict(mode="spiral")])
    def test_validation(self, kw):
        with pytest.raises(ValueError):
            params(**kw)

    def test_start_checks(self, log2):
        with pytest.raises(ValueError):
            zigzag.zigzag1_run(log2, params(x0=(0.0,)))
        with pytest.raises(ValueError):
            zigzag.zigzag1_run(log2, params(x0=(1.5, 0.0)))


class TestSampler:
    def test_unit_norm(self):
        s = DirectionSampler(5, 3)
        for _ in range(100):
            assert abs(np.linalg.norm(s.sample()) - 1) <= 1e-12

    def test_reproducible(self):
        a, b = DirectionSampler(3, 11), DirectionSampler(3, 11)
        for _ in range(10):
            np.testing.assert_array_equal(a.sample(), b.sample())


class TestPickDirection:
    def test_linear_aligns_with_gradient(self):
        g = np.array([2.0, -1.0])
        o = Objective(lambda x: 5 + x @ g, SQUARE)

        class Planted:
            def __init__(self):
                self.inner = DirectionSampler(2, 0)
                self.k = 0

            def sample(self):
                self.k += 1
                return g / np.linalg.norm(g) if self.k == 7 else self.inner.sample()

        v = zigzag.pick_direction(o, (0.0, 0.0), 0.1, Planted(), 20)
        np.testing.assert_allclose(v, g / np.linalg.norm(g))

    def test_radial_tie_returns_first(self):
        o = Objective(lambda x: 1 - (x**2).sum(axis=1), SQUARE)
        first = DirectionSampler(2, 4).sample()
        v = zigzag.pick_direction(o, (0.0, 0.0), 0.2, DirectionSampler(2, 4), 20)
        np.testing.assert_array_equal(v, first)

    def test_log2_origin_brute_force(self, log2):
        sampler = DirectionSampler(2, 0)
        dirs = np.array([sampler.sample() for _ in range(20)])
        scores = np.abs(log2.eval_many(0.05 * dirs) - log2.eval_many(-0.05 * dirs))
        best = dirs[np.argmax(scores)]
        v = zigzag.pick_direction(log2, (0.0, 0.0), 0.05, DirectionSampler(2, 0), 20)
        np.testing.assert_allclose(np.abs(v), np.abs(best))
        assert v @ np.array([1.0, 1.0]) / np.sqrt(2) > 0
        assert log2.eval(0.05 * v) >= log2.eval(-0.05 * v)


class TestZigzag1:
    def test_local_trap(self, log2):
        tr = zigzag.zigzag1_run(log2, params(delta=0.01, power=1, inner_steps=200, cycles=15, x0=(-0.1, -0.1)))
        np.testing.assert_allclose(tr.final_x, [-0.41, -0.40], atol=0.03)

    def test_separable_fixed_point(self):
        o = Objective(lambda x: np.exp(-((x - 0.2) ** 2).sum(axis=1) * 20), SQUARE)
        tr = zigzag.zigzag1_run(o, params(delta=0.02, power=1, inner_steps=200, cycles=4, x0=(0.2, 0.2)))
        np.testing.assert_allclose(tr.points, 0.2, atol=1e-12)

    def test_cycles_axes_and_monotone(self, log2):
        tr = zigzag.zigzag1_run(log2, params(delta=0.02, power=1, inner_steps=100, cycles=6, x0=(0.3, -0.8)))
        assert [int(r.aux[0]) for r in tr.iterates[1:]] == [0, 1, 0, 1, 0, 1]
        f = [r.f_value for r in tr.iterates]
        assert all(b >= a - 1e-6 * max(f) for a, b in zip(f, f[1:]))

    def test_deterministic(self, log2):
        p = params(delta=0.02, power=1, inner_steps=100, cycles=4, x0=(0.3, -0.8))
        assert zigzag.zigzag1_run(log2, p).to_csv() == zigzag.zigzag1_run(make_log2(), p).to_csv()


class TestZigzag2:
    def test_from_origin(self, log2):
        tr = zigzag.zigzag2_run(log2, params(mode="random_direction"))
        np.testing.assert_allclose(tr.final_x, [0.49, 0.50], atol=0.05)

    def test_escapes_trap(self, log2):
        tr = zigzag.zigzag2_run(log2, params(mode="random_direction", x0=(-0.5, -0.5)))
        np.testing.assert_allclose(tr.final_x, [0.49, 0.48], atol=0.05)

    def test_radius_grows(self, log2):
        tr = zigzag.zigzag2_run(log2, params(mode="random_direction", cycles=4, initial_radius=0.2))
        np.testing.assert_allclose([r.aux[0] for r in tr.iterates[1:]], [0.2, 0.25, 0.3, 0.35])

    def test_stays_in_support(self, log2):
        for seed in range(5):
            tr = zigzag.run(log2, params(mode="random_direction", x0=(0.9, -0.9), seed=seed))
            assert log2.support.contains(tr.points).all()

    def test_seed_reproducible(self, log2):
        p = params(mode="random_direction", seed=9, cycles=4)
        assert zigzag.run(log2, p).to_csv() == zigzag.run(make_log2(), p).to_csv()
        assert zigzag.run(log2, p).to_csv() != zigzag.run(log2, params(mode="random_direction", seed=10, cycles=4)).to_csv()
