"""
Dual-Policy Episodes

Alternates force-controlled insertion with active-inference alignment:
the tilt belief is refreshed from the tactile image every few ticks and
the end effector is rotated whenever the estimated relative angle leaves
the switch threshold.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Literal, Optional, Tuple, Union

import numpy as np
import pandas as pd

from sim.world import World, WorldState
from tactile.schemas.inference import InferenceConfig
from tactile.schemas.policy import PolicyConfig
from tactile.schemas.world import ControllerGains
from tactile.services.generator import DecoderModel
from tactile.services.inference import perceptual_inference

logger = logging.getLogger(__name__)

Policy = Literal["insertion", "alignment"]

EPISODE_LOG_COLUMNS = ["step", "mu_true", "phi_ee", "theta", "depth", "policy"]

# Streams derived from an episode seed
_STREAM_SLIP = 1
_STREAM_GRASP = 2
_STREAM_SENSOR = 3


def derive_seed(*entropy: int) -> int:
    """Stable 32-bit seed from a tuple of integers."""
    return int(np.random.SeedSequence([int(e) for e in entropy]).generate_state(1)[0])


def stream_rng(episode_seed: int, stream: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(episode_seed), stream]))


def grasp_rng(episode_seed: int) -> np.random.Generator:
    """Generator for the tilt drawn when the peg is grasped."""
    return stream_rng(episode_seed, _STREAM_GRASP)


@dataclass(frozen=True)
class EpisodeLogRow:
    step: int
    mu_true: float
    phi_ee: float
    theta: float
    depth: float
    policy: Policy


@dataclass(frozen=True)
class EpisodeResult:
    """Outcome of one insertion attempt."""

    success: bool
    steps: int
    alignments_performed: int
    final_theta: float
    log: Tuple[EpisodeLogRow, ...]

    def log_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                (r.step, r.mu_true, r.phi_ee, r.theta, r.depth, r.policy)
                for r in self.log
            ],
            columns=EPISODE_LOG_COLUMNS,
        )

    def write_log(self, path: Union[str, Path]) -> Path:
        file_path = Path(path)
        file_path.parent.mkdir(parents=True, exist_ok=True)
        self.log_frame().to_csv(file_path, index=False, float_format="%.17g")
        return file_path


def run_episode(
    world: World,
    state: WorldState,
    decoder: Optional[DecoderModel],
    gains: ControllerGains,
    inf_cfg: InferenceConfig,
    pol_cfg: PolicyConfig,
    episode_seed: int,
) -> EpisodeResult:
    """
    Run one episode from an initial state until success or the step limit.

    Every pol_cfg.inference_period ticks (starting with the first) the
    belief is refreshed from a freshly rendered tactile image. That tick
    becomes an alignment tick when |mu_hat| exceeds mu_action_threshold
    and |mu_hat + phi_ee| exceeds theta_switch_threshold; every other tick
    is an insertion tick.

    Args:
        world: Peg, hole and dynamics
        state: Initial world state
        decoder: Decoder trained on this peg (unused when alignment is disabled)
        gains: Insertion controller gains
        inf_cfg: Inference settings
        pol_cfg: Switching thresholds and budgets
        episode_seed: Seed of the sensor noise and slippage streams

    Returns:
        EpisodeResult with the per-tick log
    """
    align_enabled = pol_cfg.alignment_enabled
    if align_enabled and decoder is None:
        raise ValueError("A decoder is required when alignment is enabled")

    runtime_cfg = inf_cfg.model_copy(update={"max_iters": pol_cfg.initial_inference_iters})
    slip_rng = stream_rng(episode_seed, _STREAM_SLIP)
    target_pose = world.insertion_target()
    target_force = (0.0, -pol_cfg.insertion_force_n)

    mu_hat: Optional[float] = None
    alignments = 0
    success = False
    log = []

    for tick in range(pol_cfg.max_episode_steps):
        align = False
        if align_enabled and tick % pol_cfg.inference_period == 0:
            observation = world.observe(state, derive_seed(episode_seed, _STREAM_SENSOR, tick))
            start = mu_hat if (pol_cfg.warm_start and mu_hat is not None) else runtime_cfg.mu_init
            mu_hat = perceptual_inference(decoder, observation, runtime_cfg, mu_init=start).mu
            theta_hat = mu_hat + state.phi_ee
            align = (
                abs(mu_hat) > pol_cfg.mu_action_threshold
                and abs(theta_hat) > pol_cfg.theta_switch_threshold
            )

        if align:
            state = world.apply_alignment(state, mu_hat)
            alignments += 1
            policy: Policy = "alignment"
            logger.debug(f"Tick {tick}: aligned to mu_hat={mu_hat:.3f} (theta {state.theta:+.3f})")
        else:
            _, state = world.control_step(state, gains, target_pose, target_force)
            if world.slippage.contact_slip_enabled and state.in_contact:
                state = world.slippage_event(state, slip_rng, "contact")
            policy = "insertion"

        log.append(
            EpisodeLogRow(
                step=tick,
                mu_true=state.mu_true,
                phi_ee=state.phi_ee,
                theta=state.theta,
                depth=state.insertion_depth,
                policy=policy,
            )
        )
        if world.check_success(state):
            success = True
            break

    if not success:
        logger.warning(
            f"Episode {episode_seed} truncated after {len(log)} steps "
            f"(theta {state.theta:+.3f}, depth {state.insertion_depth:.3f})"
        )

    return EpisodeResult(
        success=success,
        steps=len(log),
        alignments_performed=alignments,
        final_theta=state.theta,
        log=tuple(log),
    )
