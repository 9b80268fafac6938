"""
Gradient Checking

Compare analytic gradients against central finite differences.
"""

import logging
from dataclasses import dataclass
from typing import Dict

import numpy as np

from tactile.nn.network import Network

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GradCheckReport:
    """Relative errors keyed by tensor ("input" or "layer<i>.<name>")."""

    errors: Dict[str, float]

    @property
    def max_error(self) -> float:
        return max(self.errors.values(), default=0.0)


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    """Norm-wise relative error between two gradient tensors."""
    diff = float(np.linalg.norm(analytic - numeric))
    scale = float(np.linalg.norm(analytic) + np.linalg.norm(numeric))
    return diff / max(scale, 1e-12)


def grad_check_report(
    net: Network, x: np.ndarray, epsilon: float = 1e-4, seed: int = 0
) -> GradCheckReport:
    """
    Check every parameter tensor and the input gradient of a network.

    The scalar checked is L = sum(y * R) with a fixed random R, evaluated
    in eval mode. Parameters are restored afterwards.

    Args:
        net: Network to check
        x: Batched input
        epsilon: Finite-difference step
        seed: Seed of the projection R

    Returns:
        Per-tensor relative errors
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    x = np.array(x, dtype=np.float64)
    y, cache = net.forward(x)
    projection = np.random.default_rng(seed).standard_normal(y.shape)
    param_grads, input_grad = net.backward(cache, projection)

    def loss_at(inputs: np.ndarray) -> float:
        return float(np.sum(net.predict(inputs) * projection))

    errors: Dict[str, float] = {}
    for (index, name), tensor in net.params.tensors():
        numeric = np.zeros_like(tensor)
        flat = tensor.reshape(-1)
        for i in range(flat.size):
            original = flat[i]
            flat[i] = original + epsilon
            plus = loss_at(x)
            flat[i] = original - epsilon
            minus = loss_at(x)
            flat[i] = original
            numeric.reshape(-1)[i] = (plus - minus) / (2.0 * epsilon)
        errors[f"layer{index}.{name}"] = relative_error(param_grads.layers[index][name], numeric)

    numeric = np.zeros_like(x)
    flat_x = x.reshape(-1)
    for i in range(flat_x.size):
        original = flat_x[i]
        flat_x[i] = original + epsilon
        plus = loss_at(x)
        flat_x[i] = original - epsilon
        minus = loss_at(x)
        flat_x[i] = original
        numeric.reshape(-1)[i] = (plus - minus) / (2.0 * epsilon)
    errors["input"] = relative_error(input_grad, numeric)

    report = GradCheckReport(errors)
    logger.debug(f"Gradient check max relative error {report.max_error:.3g}")
    return report


def grad_check(net: Network, x: np.ndarray, epsilon: float = 1e-4, seed: int = 0) -> float:
    """Maximum relative error between analytic and central-difference gradients."""
    return grad_check_report(net, x, epsilon, seed).max_error
