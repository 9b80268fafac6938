"""
Perception Experiment

Tilt-estimation accuracy of perceptual inference against the supervised
baseline on every peg footprint.
"""

import logging
import time
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np
import pandas as pd

from harness.experiments.runner import ExperimentResult, run_tasks, task_seed
from harness.schemas import ExperimentConfig
from harness.storage import RunStorage, config_hash
from sim.dualpolicy import derive_seed
from sim.rendering import get_peg, render_tactile
from tactile.imagekit.transforms import augment, rotate
from tactile.services.baseline import predict_tilt, train_baseline
from tactile.services.generator import instant_train
from tactile.services.inference import perceptual_inference

logger = logging.getLogger(__name__)

RESULT_COLUMNS = [
    "peg",
    "surface_noise",
    "test_count",
    "active_inference_mae",
    "supervised_mae",
    "train_seconds",
    "status",
    "error",
]


@dataclass(frozen=True)
class PegSeeds:
    """Disjoint seeds of one peg's run."""

    model: int
    train_noise: int
    test_noise: int
    test_tilts: int


def peg_seeds(master_seed: int, peg: str) -> PegSeeds:
    base = task_seed(master_seed, peg)
    seeds = PegSeeds(*(derive_seed(base, stream) for stream in range(4)))
    if seeds.train_noise == seeds.test_noise:
        raise ValueError(f"Train and test noise seeds collide for peg {peg}")
    return seeds


def evaluate_peg(
    cfg: ExperimentConfig, peg_name: str, storage: Optional[RunStorage] = None
) -> Dict:
    """
    Train both methods from one straight-pose render and score them on
    rotations of a second, independently noised render.

    Args:
        cfg: Experiment config
        peg_name: Peg preset name
        storage: Run storage for optional traces

    Returns:
        Result row for the peg
    """
    peg = get_peg(peg_name, cfg.noise_level)
    seeds = peg_seeds(cfg.master_seed, peg_name)

    started = time.perf_counter()
    o_init = render_tactile(peg, 0.0, seeds.train_noise)
    augment_cfg = cfg.augment.model_copy(update={"rng_seed": seeds.model})
    decoder, _ = instant_train(
        o_init, augment_cfg, cfg.epochs, seeds.model, cfg.training, cfg.decoder
    )
    regressor = train_baseline(augment(o_init, augment_cfg), cfg.epochs, seeds.model, cfg.training)
    train_seconds = time.perf_counter() - started

    o_test = render_tactile(peg, 0.0, seeds.test_noise)
    low, high = cfg.test_tilt_range_deg
    tilts = np.random.default_rng(seeds.test_tilts).uniform(low, high, size=cfg.test_count)

    inference_cfg = cfg.inference
    if cfg.write_traces:
        inference_cfg = inference_cfg.model_copy(update={"record_trace": True})

    aif_errors = []
    baseline_errors = []
    for index, tilt in enumerate(tilts):
        observation = rotate(o_test, float(tilt))
        belief = perceptual_inference(decoder, observation, inference_cfg)
        aif_errors.append(abs(belief.mu - tilt))
        baseline_errors.append(abs(predict_tilt(regressor, observation) - tilt))
        if cfg.write_traces and storage is not None:
            belief.write_trace(storage.path(f"traces/{peg_name}/{index:04d}.csv"))

    row = {
        "peg": peg_name,
        "surface_noise": peg.surface_noise,
        "test_count": cfg.test_count,
        "active_inference_mae": float(np.mean(aif_errors)),
        "supervised_mae": float(np.mean(baseline_errors)),
        "train_seconds": train_seconds,
        "status": "ok",
        "error": "",
    }
    logger.info(
        f"{peg_name}: active inference MAE {row['active_inference_mae']:.3f} deg, "
        f"supervised MAE {row['supervised_mae']:.3f} deg"
    )
    return row


async def run_perception_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """
    Run the perception comparison for every configured peg.

    Pegs run as independent tasks; a failing peg yields a 'failed' row.
    """
    digest = config_hash(cfg)
    storage = RunStorage(cfg.kind, digest, cfg.output_dir)
    storage.write_snapshot(cfg)
    started = time.perf_counter()
    logger.info(f"Perception experiment on {len(cfg.pegs)} peg(s) in {storage.run_dir}")

    outcomes = await run_tasks(cfg.pegs, lambda name: evaluate_peg(cfg, name, storage))

    rows = []
    for outcome in outcomes:
        if outcome.success:
            rows.append(outcome.value)
        else:
            logger.warning(f"Peg {outcome.item} aborted: {outcome.error}")
            rows.append(
                {
                    "peg": outcome.item,
                    "surface_noise": np.nan,
                    "test_count": cfg.test_count,
                    "active_inference_mae": np.nan,
                    "supervised_mae": np.nan,
                    "train_seconds": np.nan,
                    "status": "failed",
                    "error": outcome.error,
                }
            )

    table = pd.DataFrame(rows, columns=RESULT_COLUMNS)
    storage.write_csv(table.drop(columns=["train_seconds"]))
    failures = int((table["status"] != "ok").sum())
    logger.info(
        f"Perception experiment finished in {time.perf_counter() - started:.1f}s "
        f"({failures} failed)"
    )
    return ExperimentResult(table=table, run_dir=storage.run_dir, failures=failures)
