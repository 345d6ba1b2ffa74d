import numpy as np
import pytest

from boostray import (
    ConfigError,
    ObjectiveSpec,
    grad_hess_logistic,
    grad_hess_softmax,
    sigmoid,
    softmax_probs,
)
from oracles import fd_grad_hess_logistic, fd_grad_hess_softmax


class TestObjectiveSpec:
    def test_binary_requires_two_classes(self):
        ObjectiveSpec("binary-logistic", 2)
        with pytest.raises(ConfigError):
            ObjectiveSpec("binary-logistic", 3)

    def test_softmax_requires_three_plus(self):
        ObjectiveSpec("softmax", 3)
        with pytest.raises(ConfigError):
            ObjectiveSpec("softmax", 2)

    def test_unknown_kind(self):
        with pytest.raises(ConfigError):
            ObjectiveSpec("hinge", 2)

    def test_group_size(self):
        assert ObjectiveSpec("binary-logistic", 2).group_size == 1
        assert ObjectiveSpec("softmax", 4).group_size == 4


class TestLogisticGradHess:
    def test_zero_margin_positive_label(self):
        g, h = grad_hess_logistic(1, 0.0)
        assert g == -0.5
        assert h == 0.25

    def test_zero_margin_negative_label(self):
        g, h = grad_hess_logistic(0, 0.0)
        assert g == 0.5
        assert h == 0.25

    def test_matches_finite_differences_at_margin_two(self):
        g, h = grad_hess_logistic(1, 2.0)
        # frozen from the central-difference oracle at step 1e-5
        assert g == pytest.approx(-0.11920292202345026, abs=1e-6)
        assert h == pytest.approx(0.10499358540383028, abs=1e-5)
        g_fd, h_fd = fd_grad_hess_logistic(1, 2.0)
        assert g == pytest.approx(g_fd, abs=1e-6)
        assert h == pytest.approx(h_fd, abs=1e-5)

    def test_finite_difference_sweep(self):
        rng = np.random.default_rng(2024)
        for _ in range(100):
            label = int(rng.integers(0, 2))
            margin = float(rng.uniform(-6, 6))
            g, h = grad_hess_logistic(label, margin)
            g_fd, h_fd = fd_grad_hess_logistic(label, margin)
            assert g == pytest.approx(g_fd, abs=1e-6)
            assert h == pytest.approx(h_fd, abs=1e-5)

    def test_extreme_margins_stay_finite(self):
        for margin in (-1000.0, 1000.0):
            for label in (0, 1):
                g, h = grad_hess_logistic(label, margin)
                assert np.isfinite(g) and np.isfinite(h)
                assert h >= 1e-16

    def test_vectorized_matches_scalar(self):
        margins = np.linspace(-4, 4, 9)
        labels = np.array([0, 1] * 4 + [1], dtype=np.float64)
        g_vec, h_vec = grad_hess_logistic(labels, margins)
        for i in range(9):
            g, h = grad_hess_logistic(int(labels[i]), float(margins[i]))
            assert g_vec[i] == g
            assert h_vec[i] == h


class TestSoftmaxGradHess:
    def test_uniform_margins(self):
        g, h = grad_hess_softmax(0, np.zeros(3))
        np.testing.assert_allclose(g, [-2 / 3, 1 / 3, 1 / 3], atol=1e-15)
        np.testing.assert_allclose(h, [2 / 9, 2 / 9, 2 / 9], atol=1e-15)

    def test_gradient_sums_to_zero(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            k = int(rng.integers(3, 7))
            margins = rng.uniform(-8, 8, k)
            g, _ = grad_hess_softmax(int(rng.integers(0, k)), margins)
            assert abs(g.sum()) < 1e-12

    def test_finite_difference_sweep(self):
        rng = np.random.default_rng(77)
        for _ in range(100):
            k = int(rng.integers(3, 6))
            label = int(rng.integers(0, k))
            margins = rng.uniform(-5, 5, k)
            g, h = grad_hess_softmax(label, margins)
            g_fd, h_fd = fd_grad_hess_softmax(label, margins)
            np.testing.assert_allclose(g, g_fd, atol=1e-6)
            np.testing.assert_allclose(h, h_fd, atol=1e-5)

    def test_large_margins_stable(self):
        g, h = grad_hess_softmax(1, np.array([900.0, -900.0, 0.0]))
        assert np.isfinite(g).all() and np.isfinite(h).all()
        assert (h >= 1e-16).all()


class TestLinks:
    def test_sigmoid_bounds_and_midpoint(self):
        assert sigmoid(0.0) == 0.5
        assert 0.0 < sigmoid(-40.0) < 1e-15
        assert sigmoid(40.0) > 1 - 1e-15

    def test_softmax_rows_sum_to_one(self):
        rng = np.random.default_rng(8)
        p = softmax_probs(rng.uniform(-50, 50, (100, 4)))
        np.testing.assert_allclose(p.sum(axis=1), 1.0, atol=1e-9)
        assert (p >= 0).all()
