"""
Peg-in-Hole World

Deterministic quasi-static world over two translational axes (y, z) and
one tilt axis. The peg tip follows a first-order response to the parallel
position/force command; the hole admits the peg only when it is laterally
within the clearance and angularly within the jam tolerance.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Literal, Optional, Sequence, Tuple

import numpy as np

from sim.rendering import render_tactile
from tactile.exceptions import ContactStateError
from tactile.imagekit.image import TactileImage
from tactile.schemas.world import (
    ControllerGains,
    DynamicsConfig,
    HoleSpec,
    PegSpec,
    SlippageConfig,
)

logger = logging.getLogger(__name__)

Vector = Tuple[float, float]
SlipKind = Literal["grasp", "contact"]


@dataclass(frozen=True)
class WorldState:
    """Ground-truth state of the peg, end effector and contact.

    The relative angle theta is derived, so theta == mu_true + phi_ee holds
    for every state.
    """

    mu_true: float
    phi_ee: float = 0.0
    position: Vector = (0.0, 0.0)
    insertion_depth: float = 0.0
    in_contact: bool = False
    wrench: Vector = (0.0, 0.0)
    force_integral: Vector = (0.0, 0.0)
    prev_pos_error: Optional[Vector] = None
    tick: int = 0

    @property
    def theta(self) -> float:
        return self.mu_true + self.phi_ee


def compute_command(
    gains: ControllerGains,
    x_e: Sequence[float],
    x_e_dot: Sequence[float],
    f_e: Sequence[float],
    f_int: Sequence[float],
) -> np.ndarray:
    """
    Parallel position/force command per translational axis.

        x_c = S (Kp_x x_e + Kd_x x_e_dot) + a_x + (I - S)(Kp_f F_e + Ki_f int F_e)
    """
    s = np.asarray(gains.selection)
    position_term = np.asarray(gains.kp_x) * np.asarray(x_e) + np.asarray(gains.kd_x) * np.asarray(
        x_e_dot
    )
    force_term = np.asarray(gains.kp_f) * np.asarray(f_e) + np.asarray(gains.ki_f) * np.asarray(
        f_int
    )
    return s * position_term + np.asarray(gains.residual) + (1.0 - s) * force_term


def angular_tolerance_deg(hole: HoleSpec, peg: PegSpec) -> float:
    """Largest tilt that still fits the clearance over the peg's engagement length."""
    return math.degrees(math.atan(hole.clearance_mm / peg.width_mm))


def apply_alignment(state: WorldState, mu_hat: float) -> WorldState:
    """Rotate the end effector about the TCP to cancel the inferred tilt."""
    return replace(state, phi_ee=-float(mu_hat))


def check_success(state: WorldState, hole: HoleSpec, peg: PegSpec) -> bool:
    """Full depth reached with the relative angle inside the tolerance."""
    return (
        state.insertion_depth >= hole.depth_mm
        and abs(state.theta) <= angular_tolerance_deg(hole, peg)
    )


class World:
    """Simulated peg-in-hole environment for one peg and hole."""

    def __init__(
        self,
        peg: PegSpec,
        hole: HoleSpec,
        dynamics: Optional[DynamicsConfig] = None,
        slippage: Optional[SlippageConfig] = None,
        image_shape: Optional[Tuple[int, int]] = None,
    ):
        self.peg = peg
        self.hole = hole
        self.dynamics = dynamics or DynamicsConfig()
        self.slippage = slippage or SlippageConfig()
        self.image_shape = image_shape

    @property
    def tolerance_deg(self) -> float:
        return angular_tolerance_deg(self.hole, self.peg)

    @property
    def entry(self) -> np.ndarray:
        return np.asarray(self.hole.entry_position_mm, dtype=np.float64)

    def initial_state(self, position: Sequence[float], mu_true: float = 0.0) -> WorldState:
        """State with the peg tip at position, out of the hole."""
        y, z = (float(p) for p in position)
        return WorldState(
            mu_true=float(mu_true),
            position=(y, z),
            in_contact=z <= self.entry[1],
        )

    def insertion_target(self) -> Vector:
        """Pose at the bottom of the hole."""
        y0, z0 = self.entry
        return float(y0), float(z0 - self.hole.depth_mm)

    def observe(self, state: WorldState, noise_seed: int) -> TactileImage:
        """Estimated contact area for the current grasp."""
        return render_tactile(self.peg, state.mu_true, noise_seed, self.image_shape)

    def _resolve_contact(self, state: WorldState, y_ref: float, z_ref: float) -> dict:
        """Constrain the commanded tip position by the surface and the hole."""
        y0, z0 = self.entry
        clearance = self.hole.clearance_mm
        k = self.dynamics.contact_stiffness
        lateral_offset = y_ref - y0
        aligned = abs(state.theta) <= self.tolerance_deg

        if state.insertion_depth > 0.0:
            # Inside the hole: walls bound y, depth advances only while aligned
            y = y0 + float(np.clip(lateral_offset, -clearance, clearance))
            wall = k * (lateral_offset - (y - y0))
            floor = z0 - self.hole.depth_mm if aligned else z0 - state.insertion_depth
        elif z_ref < z0 and abs(lateral_offset) <= clearance and aligned:
            y, wall = y_ref, 0.0
            floor = z0 - self.hole.depth_mm
        else:
            y, wall = y_ref, 0.0
            floor = z0

        z = max(z_ref, floor)
        penetration = z - z_ref
        depth = max(0.0, z0 - z) if (state.insertion_depth > 0.0 or floor < z0) else 0.0
        return {
            "position": (float(y), float(z)),
            "insertion_depth": float(depth),
            "in_contact": bool(z <= z0),
            "wrench": (float(wall), float(-k * penetration)),
        }

    def control_step(
        self,
        state: WorldState,
        gains: ControllerGains,
        target_pose: Sequence[float],
        target_force: Sequence[float],
        dt: Optional[float] = None,
    ) -> Tuple[np.ndarray, WorldState]:
        """
        Advance the world by one control tick.

        The force integral is updated with this tick's force error before
        the command is formed and is clipped to the anti-windup limit.

        Args:
            state: Current state
            gains: Controller gains and selection matrix
            target_pose: Desired tip position (y, z) in mm
            target_force: Desired contact force (y, z) in N
            dt: Tick length, defaults to the configured one

        Returns:
            Tuple of (command x_c, next state)
        """
        dt = self.dynamics.dt if dt is None else dt
        if dt <= 0:
            raise ValueError(f"dt must be positive, got {dt}")

        position = np.asarray(state.position)
        x_e = np.asarray(target_pose, dtype=np.float64) - position
        prev = np.asarray(state.prev_pos_error) if state.prev_pos_error is not None else x_e
        x_e_dot = (x_e - prev) / dt
        f_e = np.asarray(target_force, dtype=np.float64) - np.asarray(state.wrench)
        limit = self.dynamics.integral_limit
        f_int = np.clip(np.asarray(state.force_integral) + f_e * dt, -limit, limit)

        x_c = compute_command(gains, x_e, x_e_dot, f_e, f_int)
        y_ref, z_ref = position + (dt / self.dynamics.time_constant) * x_c
        contact = self._resolve_contact(state, float(y_ref), float(z_ref))

        next_state = replace(
            state,
            force_integral=(float(f_int[0]), float(f_int[1])),
            prev_pos_error=(float(x_e[0]), float(x_e[1])),
            tick=state.tick + 1,
            **contact,
        )
        return x_c, next_state

    def apply_alignment(self, state: WorldState, mu_hat: float) -> WorldState:
        return apply_alignment(state, mu_hat)

    def slippage_event(
        self, state: WorldState, rng: np.random.Generator, kind: SlipKind = "contact"
    ) -> WorldState:
        """
        Let the peg slip in the grasp.

        "grasp" draws the tilt change at grasp time; "contact" requires
        contact and only slips while the lateral force exceeds the threshold.

        Raises:
            ContactStateError: kind is "contact" and the peg is not in contact
        """
        if kind == "grasp":
            low, high = self.slippage.grasp_range_deg
        else:
            if not state.in_contact:
                raise ContactStateError("In-contact slippage requested while not in contact")
            if abs(state.wrench[0]) <= self.slippage.lateral_force_threshold_n:
                return state
            low, high = self.slippage.contact_jitter_deg

        delta = float(rng.uniform(low, high))
        if kind == "contact":
            logger.debug(f"Contact slip of {delta:+.3f} deg at tick {state.tick}")
        return replace(state, mu_true=state.mu_true + delta)

    def check_success(self, state: WorldState) -> bool:
        return check_success(state, self.hole, self.peg)
