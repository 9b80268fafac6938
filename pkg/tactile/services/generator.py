"""
Generator Service

The generative model g(mu): a decoder from a scalar tilt belief to a
predicted contact-area image, its instant training from one straight-pose
image, and its derivative with respect to mu.
"""

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from tactile.exceptions import TrainingDivergenceError
from tactile.imagekit.image import TactileImage
from tactile.imagekit.transforms import augment
from tactile.nn.checkpoint import load_checkpoint, save_checkpoint
from tactile.nn.layers import (
    Activation,
    Convolution,
    Dropout,
    FullyConnected,
    Reshape,
    TransposedConvolution,
)
from tactile.nn.network import ForwardCache, Network
from tactile.nn.training import fit_network
from tactile.schemas.imaging import AugmentConfig
from tactile.schemas.training import DecoderConfig, TrainingConfig

logger = logging.getLogger(__name__)


def decoder_layers(cfg: DecoderConfig, image_shape: Tuple[int, int]) -> list:
    """
    Layer chain of the decoder.

    Two dense layers feed a (C, H/8, W/8) map that three stride-2
    transposed convolutions upsample to the image, with a same-size
    convolution after each of the first two. Dropout follows the dense
    stack and a sigmoid bounds the output to (0, 1).
    """
    height, width = image_shape
    if height % 8 or width % 8:
        raise ValueError(f"Decoder needs image sides divisible by 8, got {width}x{height}")
    c0, c1, c2 = cfg.channels
    seed_h, seed_w = height // 8, width // 8

    def act() -> Activation:
        return Activation(name=cfg.activation)

    def dense(n_in: int, n_out: int) -> FullyConnected:
        return FullyConnected(in_features=n_in, out_features=n_out, init_gain=cfg.init_gain)

    def up(c_in: int, c_out: int) -> TransposedConvolution:
        return TransposedConvolution(
            in_channels=c_in,
            out_channels=c_out,
            kernel_size=4,
            stride=2,
            padding=1,
            init_gain=cfg.init_gain,
        )

    def same(c: int) -> Convolution:
        return Convolution(
            in_channels=c, out_channels=c, kernel_size=3, padding=1, init_gain=cfg.init_gain
        )

    return [
        dense(cfg.latent_dim, cfg.hidden_units),
        act(),
        dense(cfg.hidden_units, c0 * seed_h * seed_w),
        act(),
        Dropout(rate=cfg.dropout_rate),
        Reshape(shape=(c0, seed_h, seed_w)),
        up(c0, c1),
        act(),
        same(c1),
        act(),
        up(c1, c2),
        act(),
        same(c2),
        act(),
        up(c2, 1),
        Activation(name="sigmoid"),
    ]


@dataclass
class DecoderModel:
    """Decoder network g with its input scaling and image geometry."""

    network: Network
    config: DecoderConfig = field(default_factory=DecoderConfig)

    @classmethod
    def build(
        cls, image_shape: Tuple[int, int], cfg: Optional[DecoderConfig] = None, seed: int = 0
    ) -> "DecoderModel":
        """Freshly initialized decoder for images of shape (height, width)."""
        cfg = cfg or DecoderConfig()
        network = Network(decoder_layers(cfg, image_shape), (cfg.latent_dim,), seed=seed)
        return cls(network=network, config=cfg)

    @property
    def image_shape(self) -> Tuple[int, int]:
        return self.network.output_shape[1:]

    @property
    def input_scale(self) -> float:
        return self.config.input_scale_deg

    def encode_input(self, mu: Union[float, np.ndarray]) -> np.ndarray:
        """Scale tilts in degrees to network inputs of shape (N, 1)."""
        return np.asarray(mu, dtype=np.float64).reshape(-1, 1) / self.input_scale

    def evaluate(self, mu: float) -> Tuple[np.ndarray, ForwardCache]:
        """Eval-mode g(mu) as an (H, W) array plus the forward cache."""
        out, cache = self.network.forward(self.encode_input(mu), "eval")
        return out[0, 0], cache

    def pullback(self, cache: ForwardCache, image_gradient: np.ndarray) -> float:
        """Inner product <dg/dmu, image_gradient> via one backward pass."""
        dy = np.asarray(image_gradient, dtype=np.float64).reshape((1, 1) + self.image_shape)
        _, dx = self.network.backward(cache, dy, need_param_grads=False)
        return float(dx[0, 0]) / self.input_scale

    def predict(self, mu: float) -> TactileImage:
        return TactileImage.clipped(self.evaluate(mu)[0])

    def d_g_d_mu(self, mu: float) -> np.ndarray:
        _, cache = self.evaluate(mu)
        direction = np.full((1, 1), 1.0 / self.input_scale)
        return self.network.tangent(cache, direction)[0, 0]

    def save(self, path: Union[str, Path]) -> Path:
        """Write the decoder as a checkpoint."""
        extra = {"model": "decoder", "decoder": self.config.model_dump(mode="json")}
        return save_checkpoint(self.network, path, extra)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "DecoderModel":
        """Read a decoder checkpoint."""
        network, extra = load_checkpoint(path)
        if extra.get("model") != "decoder":
            raise ValueError(f"{path} is not a decoder checkpoint")
        return cls(network=network, config=DecoderConfig.model_validate(extra["decoder"]))


@dataclass
class TrainReport:
    """Outcome of an instant training run."""

    epochs: int
    losses: List[float]
    wall_time_s: float
    restarts: int = 0

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"epoch": range(1, self.epochs + 1), "loss": self.losses})

    def write_csv(self, path: Union[str, Path]) -> Path:
        file_path = Path(path)
        file_path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(file_path, index=False, float_format="%.17g")
        return file_path


def predict(model: DecoderModel, mu: float) -> TactileImage:
    """Noiseless predicted observation g(mu), computed in eval mode."""
    return model.predict(mu)


def d_g_d_mu(model: DecoderModel, mu: float) -> np.ndarray:
    """Image-shaped derivative dg/dmu at mu, computed in eval mode."""
    return model.d_g_d_mu(mu)


def sensitivity(model: DecoderModel, tilts: Sequence[float]) -> float:
    """Largest |dg/dmu| over the given tilts, per degree."""
    return max(float(np.abs(model.d_g_d_mu(float(t))).max()) for t in tilts)


def collapse_reason(
    model: DecoderModel, o_init: TactileImage, cfg: AugmentConfig, training: TrainingConfig
) -> Optional[str]:
    """
    Describe why a trained decoder is unusable for inference, if it is.

    A decoder stuck on the mean training image is flat in mu and misses
    the straight-pose anchor. The slope floor only applies when the
    augmentation varies the tilt; the anchor check is meant for noiseless
    footprints.
    """
    problems = []
    if training.anchor_tolerance is not None:
        anchor_mae = model.predict(0.0).mean_abs_diff(o_init)
        if anchor_mae > training.anchor_tolerance:
            problems.append(f"anchor MAE {anchor_mae:.4f} above {training.anchor_tolerance:g}")
    low, high = cfg.tilt_range_deg
    if training.min_sensitivity is not None and high > low:
        slope = sensitivity(model, np.linspace(low, high, 5))
        if slope < training.min_sensitivity:
            problems.append(f"max |dg/dmu| {slope:.2e} below {training.min_sensitivity:g}/deg")
    return "; ".join(problems) or None


def restart_seed(seed: int, attempt: int) -> int:
    """Seed of a training attempt; the first attempt keeps the caller's seed."""
    if attempt == 0:
        return seed
    return int(np.random.SeedSequence([seed, attempt]).generate_state(1)[0])


def instant_train(
    o_init: TactileImage,
    cfg: AugmentConfig,
    epochs: int,
    seed: int,
    training: Optional[TrainingConfig] = None,
    decoder: Optional[DecoderConfig] = None,
) -> Tuple[DecoderModel, TrainReport]:
    """
    Train a decoder from a single straight-pose image.

    Builds the dataset with augment(o_init, cfg) and fits g(tilt) to the
    rotated images with a mean-squared-error loss. A decoder that fails
    collapse_reason is retrained from a fresh seed up to
    training.max_restarts times.

    Args:
        o_init: Contact area in a straight pose
        cfg: Augmentation settings
        epochs: Number of training epochs
        seed: Seed for initialization, shuffling and dropout
        training: Optimizer settings and quality gates (epochs and seed are overridden)
        decoder: Architecture settings

    Returns:
        Tuple of (trained decoder, training report)

    Raises:
        TrainingDivergenceError: A loss was not finite, or every attempt collapsed
    """
    if epochs < 1:
        raise ValueError(f"epochs must be at least 1, got {epochs}")
    training = (training or TrainingConfig()).model_copy(update={"epochs": epochs, "seed": seed})

    started = time.perf_counter()
    samples = augment(o_init, cfg)
    tilts = [s.tilt_deg for s in samples]
    targets = np.stack([s.image.pixels for s in samples])[:, None, :, :]

    for attempt in range(training.max_restarts + 1):
        attempt_cfg = training.model_copy(update={"seed": restart_seed(seed, attempt)})
        model = DecoderModel.build(o_init.shape, decoder, seed=attempt_cfg.seed)
        losses = fit_network(model.network, model.encode_input(tilts), targets, attempt_cfg)
        reason = collapse_reason(model, o_init, cfg, training)
        if reason is None:
            break
        logger.warning(
            f"Decoder attempt {attempt + 1}/{training.max_restarts + 1} "
            f"(seed {attempt_cfg.seed}) rejected: {reason}"
        )
    else:
        raise TrainingDivergenceError(epochs, training.learning_rate, losses[-1], reason)

    report = TrainReport(
        epochs=epochs,
        losses=losses,
        wall_time_s=time.perf_counter() - started,
        restarts=attempt,
    )
    logger.info(
        f"Trained decoder on {len(samples)} samples: {epochs} epochs, "
        f"final loss {losses[-1]:.5f}, {report.wall_time_s:.2f}s"
    )
    return model, report
