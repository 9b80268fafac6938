"""
Training

Minibatch mean-squared-error training shared by the decoder and the
baseline regressor.
"""

import logging
from typing import List

import numpy as np

from tactile.exceptions import TrainingDivergenceError
from tactile.nn.network import Network
from tactile.nn.optim import Adam, sgd_step
from tactile.schemas.training import TrainingConfig

logger = logging.getLogger(__name__)


def mse_loss(prediction: np.ndarray, target: np.ndarray) -> tuple[float, np.ndarray]:
    """Mean squared error over all elements and its gradient."""
    residual = prediction - target
    return float(np.mean(residual * residual)), 2.0 * residual / residual.size


def fit_network(
    net: Network,
    inputs: np.ndarray,
    targets: np.ndarray,
    cfg: TrainingConfig,
) -> List[float]:
    """
    Train a network in place on (inputs, targets).

    Shuffling and dropout draw from one generator seeded with cfg.seed, so
    equal arguments give bit-identical parameters.

    Args:
        net: Network to train
        inputs: Batched inputs matching net.input_shape
        targets: Batched targets matching net.output_shape
        cfg: Epochs, optimizer, learning rate, batch size and seed

    Returns:
        Mean loss of every epoch

    Raises:
        TrainingDivergenceError: A batch loss was not finite
    """
    inputs = np.asarray(inputs, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if len(inputs) == 0:
        raise ValueError("Training set is empty")
    if len(inputs) != len(targets):
        raise ValueError(f"{len(inputs)} inputs but {len(targets)} targets")

    rng = np.random.default_rng(cfg.seed)
    adam = Adam(cfg.learning_rate) if cfg.optimizer == "adam" else None
    losses: List[float] = []

    for epoch in range(1, cfg.epochs + 1):
        order = rng.permutation(len(inputs))
        total = 0.0
        for start in range(0, len(order), cfg.batch_size):
            batch = order[start : start + cfg.batch_size]
            prediction, cache = net.forward(inputs[batch], "train", rng)
            loss, grad = mse_loss(prediction, targets[batch])
            if not np.isfinite(loss):
                raise TrainingDivergenceError(epoch, cfg.learning_rate, loss)

            param_grads, _ = net.backward(cache, grad)
            if adam is not None:
                net.params = adam.step(net.params, param_grads)
            else:
                net.params = sgd_step(net.params, param_grads, cfg.learning_rate)
            total += loss * len(batch)

        epoch_loss = total / len(inputs)
        losses.append(epoch_loss)
        logger.debug(f"Epoch {epoch}/{cfg.epochs}: loss {epoch_loss:.6g}")

    return losses
