import numpy as np
import pytest

from ufom import (
    MaxQuadProblem,
    Objective,
    QuadraticProblem,
    as_vector,
    axpy,
    dot,
    finite_diff_check,
)


class TestDot:
    def test_orthogonal(self):
        assert dot(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0

    def test_squared_norm(self):
        assert dot(np.array([2.0, 3.0]), np.array([2.0, 3.0])) == 13.0

    def test_by_hand(self):
        # 1*4 + 2*5 + 3*6
        assert dot(np.array([1.0, 2.0, 3.0]), np.array([4.0, 5.0, 6.0])) == 32.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            dot(np.ones(3), np.ones(4))


class TestAxpy:
    def test_zero_scale(self):
        y = np.array([5.0, -1.0, 2.0])
        assert np.array_equal(axpy(0.0, np.array([9.0, 9.0, 9.0]), y), y)

    def test_unit_scale(self):
        out = axpy(1.0, np.array([1.0, 1.0]), np.array([2.0, 2.0]))
        assert np.array_equal(out, np.array([3.0, 3.0]))

    def test_by_hand(self):
        out = axpy(-0.5, np.array([4.0, 2.0]), np.array([1.0, 1.0]))
        assert np.array_equal(out, np.array([-1.0, 0.0]))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            axpy(1.0, np.ones(2), np.ones(3))

    def test_non_finite_result(self):
        with pytest.raises(ValueError):
            axpy(1e308, np.full(2, 1e308), np.zeros(2))


class TestAsVector:
    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            as_vector([1.0, float("nan")])

    def test_rejects_matrix(self):
        with pytest.raises(ValueError):
            as_vector(np.ones((2, 2)))


class TestFiniteDiffCheck:
    def test_quad_gradient_by_hand(self):
        # weights (1, 2): gradient at (1, 1) is (2*1*1, 2*2*1) = (2, 4)
        obj = QuadraticProblem(2).objective()
        assert np.array_equal(obj.grad(np.array([1.0, 1.0])), np.array([2.0, 4.0]))
        ok, err = finite_diff_check(obj, np.array([1.0, 1.0]), tol=1e-5)
        assert ok, f"max relative error {err}"

    def test_half_norm_squared(self):
        obj = Objective(
            n=4,
            value=lambda x: 0.5 * float(np.dot(x, x)),
            grad=lambda x: x.copy(),
        )
        ok, err = finite_diff_check(obj, np.array([0.3, -1.2, 4.0, 0.0]))
        assert ok, f"max relative error {err}"

    def test_maxquad_off_ties(self):
        obj = MaxQuadProblem(5, 0.1).objective()
        x = np.array([0.0, 3.0, -1.0, 0.5, 0.2])  # unique argmax at index 1
        ok, err = finite_diff_check(obj, x)
        assert ok, f"max relative error {err}"

    def test_sampled_coordinates_large_n(self):
        obj = QuadraticProblem(500).objective()
        rng = np.random.default_rng(3)
        ok, _ = finite_diff_check(obj, rng.standard_normal(500))
        assert ok


def _random_objectives():
    return [
        QuadraticProblem(7).objective(),
        MaxQuadProblem(7, 0.1).objective(),
    ]


class TestConvexityContract:
    @pytest.mark.parametrize("obj", _random_objectives(), ids=lambda o: o.name)
    def test_midpoint_convexity(self, obj):
        rng = np.random.default_rng(11)
        for _ in range(100):
            a = rng.uniform(-10, 10, obj.n)
            b = rng.uniform(-10, 10, obj.n)
            fa, fb = obj.value(a), obj.value(b)
            fm = obj.value(0.5 * (a + b))
            assert fm <= 0.5 * (fa + fb) + 1e-12 * (1.0 + abs(fa) + abs(fb))


class TestRayContract:
    @pytest.mark.parametrize("obj", _random_objectives(), ids=lambda o: o.name)
    def test_ray_matches_direct_evaluation(self, obj):
        rng = np.random.default_rng(7)
        for _ in range(50):
            x = rng.uniform(-5, 5, obj.n)
            d = rng.standard_normal(obj.n)
            ray = obj.restrict(x, d)
            f0 = obj.value(x)
            assert ray.value(0.0) == pytest.approx(f0, rel=1e-12)
            for h in (1e-3, 0.7, rng.uniform(0, 3)):
                direct = obj.value(x + h * d)
                assert ray.value(h) == pytest.approx(direct, rel=1e-12, abs=1e-12)

    def test_generic_fallback_restriction(self):
        obj = Objective(
            n=3,
            value=lambda x: float(np.sum(np.abs(x))),
            grad=lambda x: np.sign(x),
        )
        ray = obj.restrict(np.array([1.0, -2.0, 0.5]), np.array([0.0, 1.0, 0.0]))
        assert not ray.has_deriv
        assert ray.value(2.0) == pytest.approx(1.0 + 0.0 + 0.5)
        assert ray.value_calls == 1

    def test_call_counters(self):
        obj = QuadraticProblem(3).objective()
        ray = obj.restrict(np.ones(3), -np.ones(3))
        ray.value(0.1)
        ray.value(0.2)
        ray.deriv(0.1)
        assert ray.value_calls == 2
        assert ray.deriv_calls == 1
