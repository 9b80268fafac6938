"""
Deterministic peg-in-hole simulator and the dual-policy controller.
"""

from sim.campaign import CampaignSummary, run_campaign, without_alignment
from sim.dualpolicy import EpisodeResult, run_episode
from sim.rendering import NOISE_LEVELS, PEG_PRESETS, get_peg, render_tactile
from sim.world import (
    World,
    WorldState,
    apply_alignment,
    check_success,
    compute_command,
)

__all__ = [
    "PEG_PRESETS",
    "NOISE_LEVELS",
    "get_peg",
    "render_tactile",
    "World",
    "WorldState",
    "compute_command",
    "apply_alignment",
    "check_success",
    "EpisodeResult",
    "run_episode",
    "CampaignSummary",
    "run_campaign",
    "without_alignment",
]
