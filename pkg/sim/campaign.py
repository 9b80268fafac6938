"""
Insertion Campaigns

Seeded series of episodes for one scenario, repositioning the hole-relative
start pose every few episodes and drawing a fresh grasp tilt per episode.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from sim.dualpolicy import derive_seed, grasp_rng, run_episode
from sim.rendering import render_tactile
from sim.world import World
from tactile.schemas.policy import Scenario
from tactile.services.generator import DecoderModel, instant_train

logger = logging.getLogger(__name__)

CAMPAIGN_COLUMNS = ["episode", "seed", "initial_tilt", "alignments", "steps", "success"]


@dataclass(frozen=True)
class EpisodeRow:
    episode: int
    seed: int
    initial_tilt: float
    alignments: int
    steps: int
    success: bool


@dataclass(frozen=True)
class CampaignSummary:
    """Per-episode rows and the aggregate success rate of a campaign."""

    scenario: str
    alignment: bool
    rows: Tuple[EpisodeRow, ...]

    @property
    def successes(self) -> int:
        return sum(r.success for r in self.rows)

    @property
    def success_rate(self) -> float:
        return self.successes / len(self.rows)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                (r.episode, r.seed, r.initial_tilt, r.alignments, r.steps, r.success)
                for r in self.rows
            ],
            columns=CAMPAIGN_COLUMNS,
        )


def without_alignment(scenario: Scenario) -> Scenario:
    """Same scenario with the alignment policy switched off."""
    policy = scenario.policy.model_copy(update={"mu_action_threshold": math.inf})
    return scenario.model_copy(update={"name": f"{scenario.name}-no-alignment", "policy": policy})


def train_scenario_decoder(scenario: Scenario) -> DecoderModel:
    """Instant-train a decoder on the scenario's straight-pose contact area."""
    o_init = render_tactile(scenario.peg, 0.0, scenario.straight_pose_seed)
    decoder, _ = instant_train(
        o_init,
        scenario.augment,
        scenario.training.epochs,
        scenario.training.seed,
        scenario.training,
        scenario.decoder,
    )
    return decoder


def run_campaign(
    scenario: Scenario,
    n_episodes: int,
    reposition_every: int = 10,
    decoder: Optional[DecoderModel] = None,
) -> CampaignSummary:
    """
    Run seeded episodes of a scenario.

    Start positions and episode seeds come from the scenario's master seed
    only, so campaigns with and without alignment see identical starts and
    grasp tilts.

    Args:
        scenario: Peg, hole, controller and policy settings
        n_episodes: Number of episodes
        reposition_every: Episodes between start-position changes
        decoder: Trained decoder, trained on demand when alignment is enabled

    Returns:
        CampaignSummary with one row per episode
    """
    if n_episodes < 1:
        raise ValueError(f"n_episodes must be at least 1, got {n_episodes}")
    if reposition_every < 1:
        raise ValueError(f"reposition_every must be at least 1, got {reposition_every}")

    alignment = scenario.policy.alignment_enabled
    if alignment and decoder is None:
        decoder = train_scenario_decoder(scenario)

    world = World(scenario.peg, scenario.hole, scenario.dynamics, scenario.slippage)
    master = np.random.default_rng(scenario.master_seed)
    dyn = scenario.dynamics
    y0, z0 = scenario.hole.entry_position_mm

    rows: List[EpisodeRow] = []
    position = (y0, z0 + dyn.start_height_mm)
    for episode in range(n_episodes):
        if episode % reposition_every == 0:
            jitter = master.uniform(-dyn.position_range_mm, dyn.position_range_mm, size=2)
            position = (y0 + float(jitter[0]), z0 + dyn.start_height_mm + float(jitter[1]))
        seed = derive_seed(scenario.master_seed, episode)

        state = world.initial_state(position)
        state = world.slippage_event(state, grasp_rng(seed), "grasp")
        initial_tilt = state.mu_true

        result = run_episode(
            world, state, decoder, scenario.gains, scenario.inference, scenario.policy, seed
        )
        rows.append(
            EpisodeRow(
                episode=episode,
                seed=seed,
                initial_tilt=initial_tilt,
                alignments=result.alignments_performed,
                steps=result.steps,
                success=result.success,
            )
        )
        logger.debug(
            f"{scenario.name} episode {episode}: tilt {initial_tilt:+.2f}, "
            f"{result.alignments_performed} alignments, success={result.success}"
        )

    summary = CampaignSummary(scenario=scenario.name, alignment=alignment, rows=tuple(rows))
    logger.info(
        f"Campaign {scenario.name}: {summary.successes}/{n_episodes} successful "
        f"({summary.success_rate:.0%})"
    )
    return summary
