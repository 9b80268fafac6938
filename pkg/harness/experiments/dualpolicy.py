"""
Dual-Policy Experiment

Insertion success rates with and without tactile alignment for the
cuboid-analog and pulley-analog scenarios.
"""

import logging
import time
from typing import Dict, List, Tuple

import pandas as pd

from harness.experiments.runner import ExperimentResult, run_tasks, task_seed
from harness.schemas import ExperimentConfig
from harness.storage import RunStorage, config_hash
from sim.campaign import run_campaign, train_scenario_decoder, without_alignment
from sim.rendering import get_peg
from tactile.schemas import HoleSpec, Scenario

logger = logging.getLogger(__name__)

SCENARIO_CLEARANCE_MM = {
    "cuboid": 0.08,
    "pulley": 0.3,
}

RESULT_COLUMNS = [
    "scenario",
    "clearance_mm",
    "alignment",
    "episodes",
    "successes",
    "success_rate",
    "status",
    "error",
]


def build_scenario(cfg: ExperimentConfig, name: str) -> Scenario:
    """
    Scenario for a named peg analog.

    Args:
        cfg: Experiment config supplying policy, inference and training settings
        name: "cuboid" or "pulley"

    Returns:
        Scenario with alignment enabled
    """
    seed = task_seed(cfg.master_seed, name)
    return Scenario(
        name=name,
        peg=get_peg(name, cfg.noise_level),
        hole=HoleSpec(clearance_mm=SCENARIO_CLEARANCE_MM[name]),
        policy=cfg.policy,
        inference=cfg.inference,
        augment=cfg.policy_augment.model_copy(update={"rng_seed": seed}),
        training=cfg.training.model_copy(update={"epochs": cfg.epochs, "seed": seed}),
        decoder=cfg.decoder,
        master_seed=seed,
        straight_pose_seed=seed,
    )


def evaluate_scenario(cfg: ExperimentConfig, name: str, storage: RunStorage) -> List[Dict]:
    """Run the requested campaigns of one scenario on matched seeds."""
    scenario = build_scenario(cfg, name)
    variants: List[Tuple[bool, Scenario]] = []
    if cfg.alignment in ("both", "on"):
        variants.append((True, scenario))
    if cfg.alignment in ("both", "off"):
        variants.append((False, without_alignment(scenario)))

    decoder = train_scenario_decoder(scenario) if cfg.alignment != "off" else None

    rows = []
    for aligned, variant in variants:
        summary = run_campaign(variant, cfg.n_episodes, cfg.reposition_every, decoder)
        label = "on" if aligned else "off"
        storage.write_csv(summary.to_frame(), f"episodes/{name}-alignment-{label}.csv")
        rows.append(
            {
                "scenario": name,
                "clearance_mm": scenario.hole.clearance_mm,
                "alignment": label,
                "episodes": cfg.n_episodes,
                "successes": summary.successes,
                "success_rate": summary.success_rate,
                "status": "ok",
                "error": "",
            }
        )
    return rows


async def run_dualpolicy_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Run every configured scenario as an independent task."""
    digest = config_hash(cfg)
    storage = RunStorage(cfg.kind, digest, cfg.output_dir)
    storage.write_snapshot(cfg)
    started = time.perf_counter()
    logger.info(f"Dual-policy experiment on {cfg.scenarios} in {storage.run_dir}")

    outcomes = await run_tasks(cfg.scenarios, lambda name: evaluate_scenario(cfg, name, storage))

    rows = []
    for outcome in outcomes:
        if outcome.success:
            rows.extend(outcome.value)
        else:
            logger.warning(f"Scenario {outcome.item} aborted: {outcome.error}")
            rows.append(
                {
                    "scenario": outcome.item,
                    "clearance_mm": SCENARIO_CLEARANCE_MM[outcome.item],
                    "alignment": cfg.alignment,
                    "episodes": cfg.n_episodes,
                    "successes": 0,
                    "success_rate": float("nan"),
                    "status": "failed",
                    "error": outcome.error,
                }
            )

    table = pd.DataFrame(rows, columns=RESULT_COLUMNS)
    storage.write_csv(table)
    failures = int((table["status"] != "ok").sum())
    logger.info(
        f"Dual-policy experiment finished in {time.perf_counter() - started:.1f}s "
        f"({failures} failed)"
    )
    return ExperimentResult(table=table, run_dir=storage.run_dir, failures=failures)
