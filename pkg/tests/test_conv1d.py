import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convopt import conv1d
from convopt.conv1d import Quadrature1DParams
from convopt.kernel import Kernel1D
from convopt.objective import Objective, SupportBox, get_objective, make_log1, make_log2
from convopt.oracle import DenseGrid, dense_convolution_1d, second_difference
from convopt.rescale import PowerLift, default_lift

D = 0.01


@pytest.fixture(scope="module")
def setup():
    o = make_log1()
    return o, default_lift(o, 3), Quadrature1DParams(D)


def constant(c=1.0, lo=-1.0, hi=1.0):
    return Objective(lambda x: np.full(len(x), c), SupportBox((lo,), (hi,)), "const")


class TestParams:
    @pytest.mark.parametrize("kw", [dict(delta=0.0), dict(delta=0.1, fine_div=0), dict(delta=0.1, tail_steps=0)])
    def test_validation(self, kw):
        with pytest.raises(ValueError):
            Quadrature1DParams(**kw)

    def test_short_tails_rejected(self, setup):
        o, p, _ = setup
        with pytest.raises(ValueError):
            conv1d.full_derivative(o, p, Quadrature1DParams(D, tail_steps=10), 0.5)

    def test_long_tails_equal_default(self, setup):
        o, p, q = setup
        long = Quadrature1DParams(D, tail_steps=400)
        assert conv1d.full_derivative(o, p, long, 0.7) == pytest.approx(conv1d.full_derivative(o, p, q, 0.7), rel=1e-12)

    def test_rejects_2d(self):
        o = make_log2()
        with pytest.raises(ValueError):
            conv1d.full_derivative(o, PowerLift(1), Quadrature1DParams(D), 0.0)


class TestFullDerivative:
    def test_symmetric_constant_is_zero(self):
        o = constant()
        assert conv1d.full_derivative(o, PowerLift(2), Quadrature1DParams(0.1), 0.0) == pytest.approx(0.0, abs=1e-12)

    def test_sign_at_local_basin(self, setup):
        o, p, q = setup
        # mass sits left of 1.5, so F' > 0 and descent x - delta*sign(F') moves left
        grid = DenseGrid.with_resolution(o.support, D / 10)
        F = dense_convolution_1d(o, p, Kernel1D(D), grid)
        j = np.argmin(np.abs(F.theta - 1.5))
        oracle_slope = (F.values[j + 1] - F.values[j - 1]) / (2 * F.step)
        value = conv1d.full_derivative(o, p, q, 1.5)
        assert value > 0 and oracle_slope > 0

    def test_vanishes_at_oracle_stationary_point(self, setup):
        o, p, q = setup
        grid = DenseGrid.with_resolution(o.support, D / 10)
        F = dense_convolution_1d(o, p, Kernel1D(D), grid)
        theta = F.theta[np.argmin(F.values)]
        tol = 10 * D * D * p(o.eval_many(grid.axis(0))).max()
        assert abs(conv1d.full_derivative(o, p, q, theta)) < tol

    def test_single_sign_change(self, setup):
        o, p, q = setup
        theta = np.arange(-0.2, 1.6, 0.002)
        v = np.array([conv1d.full_derivative(o, p, q, t) for t in theta])
        assert np.all(np.diff(v) >= -1e-12)
        s = np.sign(v[v != 0])
        assert np.count_nonzero(np.diff(s)) == 1


class TestIncrement:
    def test_zero_step(self, setup):
        o, p, q = setup
        int2 = conv1d.central_sum(o, p, q, 0.7)
        d, int2_new = conv1d.derivative_increment(o, p, q, 0.7, 0.7, int2)
        assert d == 0.0 and int2_new == int2

    def test_wrong_step(self, setup):
        o, p, q = setup
        with pytest.raises(ValueError):
            conv1d.derivative_increment(o, p, q, 0.7, 0.705, 0.0)

    @pytest.mark.parametrize("direction", [1, -1])
    def test_single_step(self, setup, direction):
        o, p, q = setup
        t0 = 0.9
        t1 = t0 + direction * D
        d, _ = conv1d.derivative_increment(o, p, q, t0, t1, conv1d.central_sum(o, p, q, t0))
        fresh = conv1d.full_derivative(o, p, q, t1)
        assert conv1d.full_derivative(o, p, q, t0) + d == pytest.approx(fresh, rel=1e-9)

    @pytest.mark.parametrize("start", [1.2, 1.5])
    def test_fifty_chained_steps(self, setup, start):
        o, p, q = setup
        theta = start
        value = conv1d.full_derivative(o, p, q, theta)
        int2 = conv1d.central_sum(o, p, q, theta)
        rng = np.random.default_rng(3)
        for _ in range(50):
            new = theta + D * rng.choice([-1, 1])
            d, int2 = conv1d.derivative_increment(o, p, q, theta, new, int2)
            value += d
            theta = new
        assert value == pytest.approx(conv1d.full_derivative(o, p, q, theta), rel=1e-7)


class TestSecondDerivative:
    def test_far_outside(self, setup):
        o, p, q = setup
        assert conv1d.second_derivative(o, p, q, 10.0) == 0.0

    def test_constant(self):
        c = 1.5
        val = conv1d.second_derivative(constant(c), PowerLift(3), Quadrature1DParams(0.1), 0.0)
        assert val == pytest.approx(2 * c**3)

    def test_matches_oracle_at_peak(self):
        o = make_log1()
        p = default_lift(o, 1)
        q = Quadrature1DParams(D)
        grid = DenseGrid.with_resolution(o.support, D / 10)
        F = dense_convolution_1d(o, p, Kernel1D(D), grid)
        inner = F.theta[1:-1]
        j = np.argmin(np.abs(inner - 0.5))
        assert conv1d.second_derivative(o, p, q, inner[j]) == pytest.approx(second_difference(F)[j], rel=0.01)

    @settings(max_examples=200, deadline=None)
    @given(st.sampled_from(["log1", "poly1"]), st.sampled_from([1, 3, 6]), st.floats(-3, 3))
    def test_nonnegative(self, name, n, theta):
        o = get_objective(name)
        assert conv1d.second_derivative(o, PowerLift(n, 13.0), Quadrature1DParams(D), theta) >= 0.0
