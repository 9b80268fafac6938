"""
Gradient Verification

Finite-difference checks of every layer kind on seeded random networks,
and of the decoder derivative dg/dmu.
"""

import logging
from typing import Dict, List

import numpy as np
import pandas as pd

from harness.experiments.runner import ExperimentResult
from harness.schemas import ExperimentConfig, GradCheckConfig
from harness.storage import RunStorage, config_hash
from sim.dualpolicy import derive_seed
from tactile.nn.gradcheck import grad_check_report, relative_error
from tactile.nn.layers import (
    Activation,
    Convolution,
    Dropout,
    FullyConnected,
    Reshape,
    TransposedConvolution,
)
from tactile.nn.network import Network
from tactile.schemas.training import DecoderConfig
from tactile.services.generator import DecoderModel

logger = logging.getLogger(__name__)

RESULT_COLUMNS = ["instance", "network", "tensor", "relative_error", "tolerance", "passed"]


def small_decoder_network(seed: int) -> Network:
    """Scalar in, 8x6 image out: dense, reshape, convolution and transposed convolution."""
    return Network(
        [
            FullyConnected(in_features=1, out_features=8),
            Activation(name="softplus"),
            FullyConnected(in_features=8, out_features=24),
            Activation(name="tanh"),
            Dropout(rate=0.2),
            Reshape(shape=(2, 4, 3)),
            Convolution(in_channels=2, out_channels=3, kernel_size=3, stride=1, padding=1),
            Activation(name="softplus"),
            TransposedConvolution(
                in_channels=3, out_channels=1, kernel_size=4, stride=2, padding=1
            ),
            Activation(name="sigmoid"),
        ],
        input_shape=(1,),
        seed=seed,
    )


def small_encoder_network(seed: int) -> Network:
    """8x6 image in, scalar out through a strided convolution."""
    return Network(
        [
            Convolution(in_channels=1, out_channels=2, kernel_size=3, stride=2, padding=1),
            Activation(name="tanh"),
            Reshape(shape=(-1,)),
            FullyConnected(in_features=24, out_features=4),
            Activation(name="sigmoid"),
            FullyConnected(in_features=4, out_features=1),
        ],
        input_shape=(1, 8, 6),
        seed=seed,
    )


def derivative_error(model: DecoderModel, mu: float, h: float = 1e-3) -> float:
    """Largest per-pixel relative error of dg/dmu against central differences."""
    analytic = model.d_g_d_mu(mu)
    numeric = (model.evaluate(mu + h)[0] - model.evaluate(mu - h)[0]) / (2.0 * h)
    mask = np.abs(analytic) > 1e-6
    if not mask.any():
        return relative_error(analytic, numeric)
    return float(np.max(np.abs(analytic[mask] - numeric[mask]) / np.abs(analytic[mask])))


def check_instances(gc: GradCheckConfig, master_seed: int) -> List[Dict]:
    """Run every check on gc.instances seeded instances."""
    rows = []
    for instance in range(gc.instances):
        seed = derive_seed(master_seed, instance)
        rng = np.random.default_rng(seed)

        checks = {
            "decoder": (small_decoder_network(seed), rng.uniform(-1.0, 1.0, size=(2, 1))),
            "encoder": (small_encoder_network(seed), rng.uniform(0.0, 1.0, size=(2, 1, 8, 6))),
        }
        for name, (net, x) in checks.items():
            report = grad_check_report(net, x, gc.epsilon, seed)
            for tensor, error in report.errors.items():
                rows.append(
                    {
                        "instance": instance,
                        "network": name,
                        "tensor": tensor,
                        "relative_error": error,
                        "tolerance": gc.layer_tolerance,
                        "passed": error < gc.layer_tolerance,
                    }
                )

        model = DecoderModel(
            network=small_decoder_network(seed),
            config=DecoderConfig(hidden_units=8, input_scale_deg=20.0),
        )
        mu = float(rng.uniform(-15.0, 15.0))
        error = derivative_error(model, mu)
        rows.append(
            {
                "instance": instance,
                "network": "decoder",
                "tensor": "d_g_d_mu",
                "relative_error": error,
                "tolerance": gc.derivative_tolerance,
                "passed": error < gc.derivative_tolerance,
            }
        )
    return rows


async def run_grad_check(cfg: ExperimentConfig) -> ExperimentResult:
    """Verify gradients and report every checked tensor."""
    digest = config_hash(cfg)
    storage = RunStorage(cfg.kind, digest, cfg.output_dir)
    storage.write_snapshot(cfg)

    table = pd.DataFrame(check_instances(cfg.grad_check, cfg.master_seed), columns=RESULT_COLUMNS)
    storage.write_csv(table)

    failures = int((~table["passed"]).sum())
    worst = table["relative_error"].max()
    if failures:
        logger.warning(f"{failures} gradient checks above tolerance (worst {worst:.3g})")
    else:
        logger.info(f"All {len(table)} gradient checks passed (worst {worst:.3g})")
    return ExperimentResult(table=table, run_dir=storage.run_dir, failures=failures)
