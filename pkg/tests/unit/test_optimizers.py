"""Unit tests for optimizers."""

import numpy as np
import pytest

from cgnn.exceptions import ValidationError
from cgnn.regressors.optimizers import Adam, GradientDescent, build_optimizer


class TestGradientDescent:
    """Tests for plain gradient descent."""

    def test_step(self):
        """Should move against the gradient by lr times its value."""
        values = np.array([1.0, 2.0])

        updated = GradientDescent(lr=0.5).step(values, np.array([2.0, -2.0]))

        np.testing.assert_array_equal(updated, [0.0, 3.0])
        np.testing.assert_array_equal(values, [1.0, 2.0])


class TestAdam:
    """Tests for Adam."""

    def test_first_step_is_lr_times_sign(self):
        """Should move each coordinate by about lr on the first step."""
        updated = Adam(lr=0.1).step(np.zeros(3), np.array([5.0, -0.01, 100.0]))

        np.testing.assert_allclose(updated, [-0.1, 0.1, -0.1], rtol=1e-5)

    def test_minimizes_quadratic(self):
        """Should converge on a convex quadratic."""
        optimizer = Adam(lr=0.01)
        x = np.array([3.0, -2.0])
        for _ in range(3000):
            x = optimizer.step(x, 2.0 * x)

        np.testing.assert_allclose(x, [0.0, 0.0], atol=0.05)

    def test_reset_clears_moments(self):
        """Should behave like a fresh optimizer after reset."""
        optimizer = Adam(lr=0.1)
        optimizer.step(np.zeros(2), np.ones(2))
        optimizer.reset()

        np.testing.assert_allclose(optimizer.step(np.zeros(2), -np.ones(2)), [0.1, 0.1], rtol=1e-6)


class TestBuildOptimizer:
    """Tests for the optimizer factory."""

    def test_known_names(self):
        """Should build Adam and gradient descent by name."""
        assert isinstance(build_optimizer("adam", 0.1), Adam)
        assert isinstance(build_optimizer("sgd", 0.1), GradientDescent)

    def test_unknown_name(self):
        """Should raise UNKNOWN_OPTIMIZER."""
        with pytest.raises(ValidationError) as exc_info:
            build_optimizer("lbfgs", 0.1)

        assert exc_info.value.error_code == "UNKNOWN_OPTIMIZER"
