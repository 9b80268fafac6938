"""
Step-Size Calibration

Log-spaced sweep over the inference step size on noiseless tilt recovery.
The largest step that converges within the iteration budget, recovers
every tilt within tolerance and keeps a descending free-energy tail wins.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np
import pandas as pd

from harness.experiments.runner import ExperimentResult, task_seed
from harness.schemas import CalibrationConfig, ExperimentConfig
from harness.storage import RunStorage, config_hash
from sim.rendering import get_peg, render_tactile
from tactile.exceptions import InferenceDivergenceError, NoStableStepError
from tactile.schemas.inference import InferenceConfig
from tactile.services.generator import DecoderModel, instant_train
from tactile.services.inference import BeliefState, perceptual_inference

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ["step_dt", "tilt_deg", "mu_hat", "iterations", "converged", "monotone", "stable"]
ARTIFACT_NAME = "calibration.json"


@dataclass(frozen=True)
class CalibrationResult:
    step_dt: float
    report: pd.DataFrame


def monotone_tail(belief: BeliefState, max_increase_fraction: float) -> bool:
    """
    Whether free energy stops rising after the initial transient.

    The first quarter of the trace is treated as transient; the rest may
    contain at most max_increase_fraction increasing steps.
    """
    energies = np.array([f for _, f in belief.trace or ()])
    if len(energies) < 2:
        return True
    tail = energies[len(energies) // 4 :]
    increases = int(np.sum(np.diff(tail) > 1e-9 * np.maximum(1.0, np.abs(tail[:-1]))))
    return increases <= max_increase_fraction * max(len(tail) - 1, 1)


def sweep_candidates(cal: CalibrationConfig) -> np.ndarray:
    return np.logspace(np.log10(cal.dt_min), np.log10(cal.dt_max), cal.num_steps)


def calibrate_dt(
    cal: CalibrationConfig,
    inference: InferenceConfig,
    decoder: DecoderModel,
) -> CalibrationResult:
    """
    Pick the largest stable step size for a trained decoder.

    Args:
        cal: Sweep bounds, tilts and acceptance criteria
        inference: Base inference settings (step_dt is swept)
        decoder: Decoder trained on the reference peg's noiseless render

    Returns:
        Chosen step size and the per-candidate report

    Raises:
        NoStableStepError: No candidate passed
    """
    peg = get_peg(cal.reference_peg, "none")
    observations = {t: render_tactile(peg, t, 0, decoder.image_shape) for t in cal.tilts_deg}

    rows = []
    chosen: Optional[float] = None
    for dt in sweep_candidates(cal):
        cfg = inference.model_copy(update={"step_dt": float(dt), "record_trace": True})
        candidate_ok = True
        for tilt, observation in observations.items():
            row: Dict = {"step_dt": float(dt), "tilt_deg": tilt}
            try:
                belief = perceptual_inference(decoder, observation, cfg)
                monotone = monotone_tail(belief, cal.max_increase_fraction)
                stable = (
                    belief.converged
                    and abs(belief.mu - tilt) <= cal.tolerance_deg
                    and monotone
                )
                row.update(
                    mu_hat=belief.mu,
                    iterations=belief.iterations_run,
                    converged=belief.converged,
                    monotone=monotone,
                    stable=stable,
                )
            except InferenceDivergenceError:
                stable = False
                row.update(
                    mu_hat=np.nan, iterations=cfg.max_iters, converged=False, monotone=False,
                    stable=False,
                )
            candidate_ok = candidate_ok and stable
            rows.append(row)
        if candidate_ok:
            chosen = float(dt)
        logger.debug(f"step_dt {dt:.3g}: {'stable' if candidate_ok else 'unstable'}")

    report = pd.DataFrame(rows, columns=REPORT_COLUMNS)
    if chosen is None:
        raise NoStableStepError(
            f"No stable step size in [{cal.dt_min:g}, {cal.dt_max:g}] "
            f"over {cal.num_steps} candidates"
        )
    logger.info(f"Calibrated step_dt = {chosen:.3g}")
    return CalibrationResult(step_dt=chosen, report=report)


def train_reference_decoder(cfg: ExperimentConfig) -> DecoderModel:
    """Decoder of the calibration reference peg, trained on its noiseless render."""
    peg = get_peg(cfg.calibration.reference_peg, "none")
    seed = task_seed(cfg.master_seed, peg.name)
    decoder, _ = instant_train(
        render_tactile(peg, 0.0, 0),
        cfg.augment.model_copy(update={"rng_seed": seed}),
        cfg.epochs,
        seed,
        cfg.training,
        cfg.decoder,
    )
    return decoder


async def run_calibration(cfg: ExperimentConfig) -> ExperimentResult:
    """Calibrate step_dt and write the chosen value as a config artifact."""
    digest = config_hash(cfg)
    storage = RunStorage(cfg.kind, digest, cfg.output_dir)
    storage.write_snapshot(cfg)

    decoder = train_reference_decoder(cfg)
    result = calibrate_dt(cfg.calibration, cfg.inference, decoder)

    storage.write_csv(result.report)
    calibrated = cfg.inference.model_copy(update={"step_dt": result.step_dt})
    storage.write_json(
        ARTIFACT_NAME,
        {"config_hash": digest, "inference": calibrated.model_dump(mode="json")},
    )
    return ExperimentResult(table=result.report, run_dir=storage.run_dir)
