"""
Baseline Service

Supervised CNN tilt regressor used as the comparison method for
perceptual inference.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from tactile.imagekit.image import LabeledSample, TactileImage
from tactile.nn.checkpoint import load_checkpoint, save_checkpoint
from tactile.nn.layers import Activation, Convolution, FullyConnected, Reshape
from tactile.nn.network import Network
from tactile.nn.training import fit_network
from tactile.schemas.training import TrainingConfig

logger = logging.getLogger(__name__)

# Targets are tilts divided by this, matching the decoder's input scaling
TILT_SCALE_DEG = 20.0


def baseline_layers(image_shape: Tuple[int, int]) -> list:
    """conv(1->8, 5x5, /2) -> ReLU -> conv(8->16, 5x5, /2) -> ReLU -> FC 64 -> ReLU -> FC 1."""
    conv1 = Convolution(in_channels=1, out_channels=8, kernel_size=5, stride=2, padding=2)
    conv2 = Convolution(in_channels=8, out_channels=16, kernel_size=5, stride=2, padding=2)
    shape = conv2.output_shape(conv1.output_shape((1,) + tuple(image_shape)))
    flat = int(np.prod(shape))
    return [
        conv1,
        Activation(name="relu"),
        conv2,
        Activation(name="relu"),
        Reshape(shape=(-1,)),
        FullyConnected(in_features=flat, out_features=64),
        Activation(name="relu"),
        FullyConnected(in_features=64, out_features=1),
    ]


@dataclass
class RegressorModel:
    """CNN mapping a tactile image to a tilt in degrees."""

    network: Network
    losses: List[float] = field(default_factory=list)

    def predict_tilt(self, img: TactileImage) -> float:
        out = self.network.predict(img.pixels[None, None, :, :])
        return float(out[0, 0]) * TILT_SCALE_DEG

    def save(self, path: Union[str, Path]) -> Path:
        return save_checkpoint(self.network, path, {"model": "regressor"})

    @classmethod
    def load(cls, path: Union[str, Path]) -> "RegressorModel":
        network, extra = load_checkpoint(path)
        if extra.get("model") != "regressor":
            raise ValueError(f"{path} is not a regressor checkpoint")
        return cls(network=network)


def train_baseline(
    dataset: Sequence[LabeledSample],
    epochs: int,
    seed: int,
    training: Optional[TrainingConfig] = None,
) -> RegressorModel:
    """
    Fit the regressor to labeled samples with a mean-squared-error loss.

    Args:
        dataset: Labeled contact-area images
        epochs: Number of training epochs
        seed: Seed for initialization and shuffling
        training: Optimizer settings (epochs and seed are overridden)

    Returns:
        Trained regressor with its per-epoch losses
    """
    if not dataset:
        raise ValueError("Baseline training needs at least one sample")
    if epochs < 1:
        raise ValueError(f"epochs must be at least 1, got {epochs}")
    training = (training or TrainingConfig()).model_copy(update={"epochs": epochs, "seed": seed})

    image_shape = dataset[0].image.shape
    network = Network(baseline_layers(image_shape), (1,) + image_shape, seed=seed)
    inputs = np.stack([s.image.pixels for s in dataset])[:, None, :, :]
    targets = np.array([[s.tilt_deg / TILT_SCALE_DEG] for s in dataset])

    losses = fit_network(network, inputs, targets, training)
    logger.info(f"Trained baseline on {len(dataset)} samples: final loss {losses[-1]:.5f}")
    return RegressorModel(network=network, losses=losses)


def predict_tilt(model: RegressorModel, img: TactileImage) -> float:
    """Predicted tilt in degrees."""
    return model.predict_tilt(img)
