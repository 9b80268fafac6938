"""
Tests for the peg-in-hole world.
"""

import numpy as np
import pytest

from sim.rendering import get_peg, render_tactile
from sim.world import (
    World,
    WorldState,
    angular_tolerance_deg,
    apply_alignment,
    check_success,
    compute_command,
)
from tactile.exceptions import ContactStateError
from tactile.schemas import ControllerGains, DynamicsConfig, HoleSpec, SlippageConfig


@pytest.fixture
def world():
    """Noiseless cuboid world with a 0.08 mm clearance."""
    return World(
        get_peg("cuboid", "none"),
        HoleSpec(clearance_mm=0.08),
        slippage=SlippageConfig(contact_slip_enabled=False),
        image_shape=(48, 64),
    )


def _insert(world, state, ticks=300):
    gains = ControllerGains()
    for _ in range(ticks):
        _, state = world.control_step(state, gains, world.insertion_target(), (0.0, -5.0))
        if world.check_success(state):
            break
    return state


class TestComputeCommand:
    """Tests for the parallel position/force law."""

    def test_pure_position_control(self):
        """Test S = I reduces to PD plus the residual."""
        gains = ControllerGains(selection=(1.0, 1.0), residual=(0.1, -0.2))

        x_c = compute_command(gains, [1.0, 2.0], [10.0, 0.0], [5.0, 5.0], [1.0, 1.0])

        assert x_c.tolist() == pytest.approx([2.0 + 0.5 + 0.1, 4.0 - 0.2])

    def test_pure_force_control(self):
        """Test S = 0 reduces to PI force control."""
        gains = ControllerGains(selection=(0.0, 0.0))

        x_c = compute_command(gains, [1.0, 2.0], [3.0, 3.0], [-5.0, 4.0], [2.0, -1.0])

        assert x_c.tolist() == pytest.approx([-2.5 + 0.4, 2.0 - 0.2])

    def test_mixed_selection(self):
        """Test a half-and-half selection."""
        gains = ControllerGains(selection=(0.5, 0.5))

        x_c = compute_command(gains, [1.0, 0.0], [0.0, 0.0], [0.0, 2.0], [0.0, 0.0])

        assert x_c.tolist() == pytest.approx([1.0, 0.5])

    def test_control_step_matches_formula(self, world):
        """Test the stepped command against the closed form on random draws."""
        rng = np.random.default_rng(7)
        big = DynamicsConfig(integral_limit=1e9)
        free = World(world.peg, world.hole, big, world.slippage)

        for _ in range(1000):
            gains = ControllerGains(
                kp_x=tuple(rng.uniform(0, 3, 2)),
                kd_x=tuple(rng.uniform(0, 0.2, 2)),
                kp_f=tuple(rng.uniform(0, 1, 2)),
                ki_f=tuple(rng.uniform(0, 1, 2)),
                selection=tuple(rng.uniform(0, 1, 2)),
                residual=tuple(rng.uniform(-1, 1, 2)),
            )
            state = WorldState(
                mu_true=0.0,
                position=tuple(rng.uniform(-5, 5, 2)),
                wrench=tuple(rng.uniform(-3, 3, 2)),
                force_integral=tuple(rng.uniform(-2, 2, 2)),
                prev_pos_error=tuple(rng.uniform(-5, 5, 2)),
            )
            target = rng.uniform(-5, 5, 2)
            force = rng.uniform(-5, 5, 2)
            dt = 0.1

            x_e = target - np.asarray(state.position)
            x_e_dot = (x_e - np.asarray(state.prev_pos_error)) / dt
            f_e = force - np.asarray(state.wrench)
            f_int = np.asarray(state.force_integral) + f_e * dt
            s = np.asarray(gains.selection)
            expected = (
                s * (np.asarray(gains.kp_x) * x_e + np.asarray(gains.kd_x) * x_e_dot)
                + np.asarray(gains.residual)
                + (1 - s) * (np.asarray(gains.kp_f) * f_e + np.asarray(gains.ki_f) * f_int)
            )

            x_c, _ = free.control_step(state, gains, target, force, dt)

            np.testing.assert_allclose(x_c, expected, rtol=1e-12, atol=1e-12)

    def test_integral_is_clipped(self, world):
        """Test anti-windup."""
        state = WorldState(mu_true=0.0, position=(0.0, 20.0), force_integral=(0.0, -49.9))

        _, state = world.control_step(state, ControllerGains(), (0.0, 20.0), (0.0, -100.0))

        assert state.force_integral[1] == -50.0


class TestToleranceAndSuccess:
    """Tests for the jam tolerance and success check."""

    def test_tolerance_from_clearance(self):
        """Test atan(clearance / width) in degrees."""
        tol = angular_tolerance_deg(HoleSpec(clearance_mm=0.08), get_peg("cuboid"))

        assert tol == pytest.approx(0.5729, abs=1e-4)

    def test_success(self, world):
        """Test full depth with a small relative angle."""
        state = WorldState(mu_true=0.3, insertion_depth=5.0)

        assert check_success(state, world.hole, world.peg)
        assert world.check_success(state)

    def test_too_tilted(self, world):
        """Test that depth alone is not enough."""
        assert not world.check_success(WorldState(mu_true=1.0, insertion_depth=5.0))

    def test_too_shallow(self, world):
        """Test that alignment alone is not enough."""
        assert not world.check_success(WorldState(mu_true=0.0, insertion_depth=4.9))


class TestAlignment:
    """Tests for apply_alignment."""

    def test_perfect_estimate_zeroes_theta(self):
        """Test alignment with the true tilt."""
        state = WorldState(mu_true=8.0, phi_ee=2.0, position=(1.0, 2.0), tick=4)

        aligned = apply_alignment(state, 8.0)

        assert aligned.theta == 0.0
        assert aligned.position == (1.0, 2.0)
        assert aligned.tick == 4

    def test_zero_estimate_resets_end_effector(self):
        """Test mu_hat = 0."""
        assert apply_alignment(WorldState(mu_true=3.0, phi_ee=-1.0), 0.0).phi_ee == 0.0

    def test_estimate_error_remains(self, world):
        """Test a one degree estimate error."""
        aligned = world.apply_alignment(WorldState(mu_true=5.0), 6.0)

        assert aligned.theta == pytest.approx(-1.0)


class TestSlippage:
    """Tests for slippage events."""

    def test_grasp_draw_in_range(self, world):
        """Test the grasp tilt interval."""
        rng = np.random.default_rng(0)
        tilts = [world.slippage_event(WorldState(0.0), rng, "grasp").mu_true for _ in range(200)]

        assert min(tilts) >= -10.0 and max(tilts) <= 10.0
        assert np.std(tilts) > 3.0

    def test_zero_width_is_noop(self, world):
        """Test a degenerate slip interval."""
        still = World(world.peg, world.hole, slippage=SlippageConfig(grasp_range_deg=(0.0, 0.0)))
        state = WorldState(mu_true=4.0)

        assert still.slippage_event(state, np.random.default_rng(1), "grasp") == state

    def test_seeded(self, world):
        """Test reproducible slip sequences."""
        draws = [
            [
                world.slippage_event(WorldState(0.0), rng, "grasp").mu_true
                for _ in range(5)
            ]
            for rng in (np.random.default_rng(3), np.random.default_rng(3))
        ]

        assert draws[0] == draws[1]

    def test_contact_slip_requires_contact(self, world):
        """Test the contact precondition."""
        with pytest.raises(ContactStateError):
            world.slippage_event(WorldState(0.0, in_contact=False), np.random.default_rng(0))

    def test_contact_slip_below_threshold(self, world):
        """Test that small lateral forces do not slip the peg."""
        state = WorldState(0.0, in_contact=True, wrench=(1.5, -5.0))

        assert world.slippage_event(state, np.random.default_rng(0)) is state

    def test_contact_slip_above_threshold(self, world):
        """Test jitter under a large lateral force."""
        state = WorldState(1.0, phi_ee=-1.0, in_contact=True, wrench=(3.0, -5.0))

        slipped = world.slippage_event(state, np.random.default_rng(0))

        assert -2.0 <= slipped.mu_true - 1.0 <= 2.0
        assert slipped.phi_ee == -1.0


class TestControlStep:
    """Tests for World.control_step."""

    def test_rejects_non_positive_dt(self, world):
        """Test the tick length precondition."""
        state = world.initial_state((0.0, 15.0))

        with pytest.raises(ValueError, match="dt"):
            world.control_step(state, ControllerGains(), (0.0, -5.0), (0.0, -5.0), dt=0.0)

    def test_aligned_insertion_succeeds(self, world):
        """Test that an aligned peg reaches full depth."""
        state = _insert(world, world.initial_state((3.0, 15.0)))

        assert state.insertion_depth >= world.hole.depth_mm
        assert world.check_success(state)

    def test_tilted_peg_jams(self, world):
        """Test that depth never increases beyond the tolerance."""
        state = world.initial_state((0.0, 2.0), mu_true=2.0)
        gains = ControllerGains()

        for _ in range(200):
            _, state = world.control_step(state, gains, world.insertion_target(), (0.0, -5.0))
            assert state.insertion_depth == 0.0
            assert state.position[1] >= world.entry[1]

        assert state.in_contact
        assert not world.check_success(state)

    def test_theta_identity_under_fuzzing(self, world):
        """Test theta == mu_true + phi_ee over random operation sequences."""
        rng = np.random.default_rng(11)
        gains = ControllerGains()

        for _ in range(10_000):
            state = world.initial_state(rng.uniform(-1, 1, 2), mu_true=rng.uniform(-5, 5))
            for op in rng.integers(0, 3, size=3):
                if op == 0:
                    _, state = world.control_step(state, gains, (0.0, -5.0), (0.0, -5.0))
                elif op == 1:
                    state = world.apply_alignment(state, rng.uniform(-5, 5))
                else:
                    state = world.slippage_event(state, rng, "grasp")
                assert state.theta == state.mu_true + state.phi_ee
                assert state.insertion_depth >= 0.0

    def test_deterministic(self, world):
        """Test identical trajectories from identical inputs."""
        a = _insert(world, world.initial_state((2.0, 10.0)), ticks=50)
        b = _insert(world, world.initial_state((2.0, 10.0)), ticks=50)

        assert a == b


class TestWorldHelpers:
    """Tests for state construction and observation."""

    def test_initial_state(self, world):
        """Test start above and at the surface."""
        assert not world.initial_state((0.0, 15.0), 3.0).in_contact
        assert world.initial_state((0.0, 0.0)).in_contact
        assert world.initial_state((0.0, 15.0), 3.0).theta == 3.0

    def test_insertion_target(self, world):
        """Test the bottom-of-hole pose."""
        assert world.insertion_target() == (0.0, -5.0)

    def test_observe_renders_grasp_tilt(self, world):
        """Test that the sensor sees mu_true, not theta."""
        state = WorldState(mu_true=6.0, phi_ee=-6.0)

        expected = render_tactile(world.peg, 6.0, 0, (48, 64))

        assert world.observe(state, 0) == expected
