"""
Tests for finite-difference gradient checking.
"""

import numpy as np
import pytest

from harness.experiments.gradcheck import small_decoder_network, small_encoder_network
from tactile.nn.gradcheck import grad_check, grad_check_report, relative_error
from tactile.nn.layers import FullyConnected
from tactile.nn.network import Network


class _BrokenFullyConnected(FullyConnected):
    """Fully connected layer whose weight gradient is off by a factor of two."""

    def backward(self, params, cache, dy, need_param_grads=True):
        grads, dx = super().backward(params, cache, dy, need_param_grads)
        if need_param_grads:
            grads["weight"] = 2.0 * grads["weight"]
        return grads, dx


class TestGradCheck:
    """Tests for grad_check."""

    @pytest.mark.parametrize("seed", range(5))
    def test_small_decoder(self, seed):
        """Test scalar-in, 8x6-image-out networks."""
        net = small_decoder_network(seed)
        x = np.random.default_rng(seed).uniform(-1.0, 1.0, size=(2, 1))

        report = grad_check_report(net, x, epsilon=1e-4, seed=seed)

        assert net.output_shape == (1, 8, 6)
        assert report.max_error < 1e-4
        assert "input" in report.errors
        assert "layer8.weight" in report.errors

    @pytest.mark.parametrize("seed", range(3))
    def test_small_encoder(self, seed):
        """Test image-in, scalar-out networks."""
        net = small_encoder_network(seed)
        x = np.random.default_rng(seed).uniform(0.0, 1.0, size=(2, 1, 8, 6))

        assert grad_check(net, x) < 1e-4

    def test_linear_is_exact(self, rng):
        """Test the linear case up to rounding."""
        net = Network([FullyConnected(in_features=4, out_features=3)], (4,), seed=1)

        assert grad_check(net, rng.standard_normal((2, 4))) < 1e-8

    def test_detects_corrupted_backward(self, rng):
        """Test that a wrong backward pass is caught."""
        net = Network([_BrokenFullyConnected(in_features=4, out_features=3)], (4,), seed=1)

        report = grad_check_report(net, rng.standard_normal((2, 4)))

        assert report.errors["layer0.weight"] > 1e-2
        assert report.errors["input"] < 1e-8

    def test_restores_parameters(self, rng):
        """Test that probing leaves the network untouched."""
        net = small_decoder_network(0)
        before = net.params.copy()
        x = rng.uniform(-1.0, 1.0, size=(1, 1))
        x_before = x.copy()

        grad_check(net, x)

        for (_, a), (_, b) in zip(before.tensors(), net.params.tensors()):
            assert np.array_equal(a, b)
        assert np.array_equal(x, x_before)

    def test_rejects_non_positive_epsilon(self):
        """Test epsilon validation."""
        net = Network([FullyConnected(in_features=1, out_features=1)], (1,))

        with pytest.raises(ValueError, match="epsilon"):
            grad_check(net, np.ones((1, 1)), epsilon=0.0)

    def test_relative_error(self):
        """Test the norm-wise relative error."""
        assert relative_error(np.array([1.0, 0.0]), np.array([1.0, 0.0])) == 0.0
        assert relative_error(np.array([2.0]), np.array([1.0])) == pytest.approx(1.0 / 3.0)
        assert relative_error(np.zeros(3), np.zeros(3)) == 0.0
