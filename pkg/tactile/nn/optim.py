"""
Optimizers

Parameter update rules. Both return new parameter sets and leave their
inputs untouched.
"""

from typing import List, Optional

import numpy as np

from tactile.nn.network import NetworkParams


def sgd_step(
    params: NetworkParams, gradients: NetworkParams, learning_rate: float
) -> NetworkParams:
    """Plain gradient descent: params - learning_rate * gradients."""
    if len(params.layers) != len(gradients.layers):
        raise ValueError("Parameter and gradient sets have different layer counts")
    return NetworkParams(
        [
            {name: value - learning_rate * grads[name] for name, value in layer.items()}
            for layer, grads in zip(params.layers, gradients.layers)
        ],
        params.seed,
    )


class Adam:
    """Adam with bias-corrected first and second moment estimates."""

    def __init__(
        self,
        learning_rate: float = 2e-3,
        beta1: float = 0.9,
        beta2: float = 0.999,
        eps: float = 1e-8,
    ):
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.steps = 0
        self._m: Optional[List[dict]] = None
        self._v: Optional[List[dict]] = None

    def step(self, params: NetworkParams, gradients: NetworkParams) -> NetworkParams:
        if self._m is None:
            self._m = [{k: np.zeros_like(v) for k, v in p.items()} for p in params.layers]
            self._v = [{k: np.zeros_like(v) for k, v in p.items()} for p in params.layers]

        self.steps += 1
        correction1 = 1.0 - self.beta1**self.steps
        correction2 = 1.0 - self.beta2**self.steps

        updated = []
        for layer, grads, m, v in zip(params.layers, gradients.layers, self._m, self._v):
            new_layer = {}
            for name, value in layer.items():
                g = grads[name]
                m[name] = self.beta1 * m[name] + (1.0 - self.beta1) * g
                v[name] = self.beta2 * v[name] + (1.0 - self.beta2) * g * g
                m_hat = m[name] / correction1
                v_hat = v[name] / correction2
                new_layer[name] = value - self.learning_rate * m_hat / (np.sqrt(v_hat) + self.eps)
            updated.append(new_layer)
        return NetworkParams(updated, params.seed)
