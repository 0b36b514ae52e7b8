"""Deck attitude generators, ship paths, and derived world poses."""

import math

import numpy as np
import pytest

from shiplanding import deck_motion as dm


class TestNatopsMotion:
    def test_amplitudes_and_periods(self):
        times = np.linspace(0.0, 60.0, 6000)
        rolls = np.array([dm.natops_motion(t).roll for t in times])
        pitches = np.array([dm.natops_motion(t).pitch for t in times])
        assert rolls.max() == pytest.approx(8.0, abs=0.01)
        assert rolls.min() == pytest.approx(-8.0, abs=0.01)
        assert pitches.max() == pytest.approx(3.0, abs=0.01)
        assert pitches.min() == pytest.approx(-3.0, abs=0.01)
        # periodicity at the documented 10.1 s / 6.5 s
        assert dm.natops_motion(3.0).roll == pytest.approx(dm.natops_motion(3.0 + 10.1).roll)
        assert dm.natops_motion(3.0).pitch == pytest.approx(dm.natops_motion(3.0 + 6.5).pitch)

    def test_phase_offsets_shift_the_waveform(self):
        base = dm.natops_motion(0.0).roll
        shifted = dm.natops_motion(0.0, roll_phase_deg=90.0).roll
        assert not math.isclose(base, shifted)


class TestMultisineMotion:
    def test_stays_inside_envelope(self):
        profile = dm.MotionProfile.perry_surrogate()
        for t in np.linspace(0.0, 200.0, 4000):
            state = dm.multisine_motion(t, profile)
            for axis in dm.AXES:
                limit = dm.DECK_RANGES[axis]
                value = getattr(state, axis)
                assert abs(value) <= limit, f"{axis}={value} outside +-{limit} at t={t}"

    def test_deterministic_in_time_and_phase(self):
        profile = dm.MotionProfile.perry_surrogate(phase_deg=123.0)
        a = dm.multisine_motion(17.3, profile)
        b = dm.multisine_motion(17.3, profile)
        assert a == b


class TestShipPath:
    def test_stationary_stays_put(self):
        path = dm.ShipPath(kind="stationary", start=(3.0, -2.0), heading_deg=45.0)
        s0 = dm.ship_state(0.0, path)
        s1 = dm.ship_state(100.0, path)
        assert (s0.x, s0.y, s0.heading) == (3.0, -2.0, 45.0)
        assert (s1.x, s1.y) == (s0.x, s0.y)

    def test_straight_path_speed_and_heading(self):
        path = dm.ShipPath(kind="straight", start=(0.0, 0.0), heading_deg=0.0,
                           speed_schedule=((0.0, 2.0),))
        s = dm.ship_state(10.0, path)
        assert s.x == pytest.approx(20.0, abs=1e-6)
        assert s.y == pytest.approx(0.0, abs=1e-9)
        assert s.heading == pytest.approx(0.0, abs=1e-9)

    def test_turn_90_changes_heading_by_quarter_turn(self):
        path = dm.ShipPath(kind="turn_90", start=(0.0, 0.0), heading_deg=0.0,
                           speed_schedule=((0.0, 1.0),), turn_radius=10.0, lead_in=5.0)
        # full turn arc is pi*R/2 long; well past it the heading settles at 90
        far = dm.ship_state(5.0 + math.pi * 10.0 / 2.0 + 40.0, path)
        assert far.heading % 360.0 == pytest.approx(90.0, abs=1.0)

    def test_s_pattern_weaves_about_the_base_heading(self):
        path = dm.ShipPath(kind="s_pattern", start=(0.0, 0.0), heading_deg=0.0,
                           speed_schedule=((0.0, 1.0),), weave_amplitude_deg=30.0,
                           weave_wavelength=40.0)
        headings = [dm.ship_state(t, path).heading for t in np.linspace(0.0, 120.0, 600)]
        assert max(headings) > 5.0
        assert min(headings) < -5.0
        assert max(np.abs(headings)) <= 30.0 + 1e-6

    def test_arc_length_consistent_with_speed_schedule(self):
        # speed ramps linearly from 1 to 3 m/s over the first 10 s, then holds
        path = dm.ShipPath(kind="straight", start=(0.0, 0.0), heading_deg=0.0,
                           speed_schedule=((0.0, 1.0), (10.0, 3.0)))
        assert path.distance(10.0) == pytest.approx(20.0, abs=1e-6)
        assert path.distance(20.0) == pytest.approx(20.0 + 30.0, abs=1e-3)


class TestWorldPoses:
    def test_bar_is_gyro_stabilized(self):
        ship = dm.ShipState(x=4.0, y=1.0, heading=30.0)
        rough = dm.DeckState(roll=8.0, pitch=-3.0, heave=0.2)
        pose = dm.bar_pose(ship, rough)
        yaw, pitch, roll = pose.euler_deg()
        assert yaw == pytest.approx(30.0, abs=1e-9)
        assert pitch == pytest.approx(0.0, abs=1e-9)
        assert roll == pytest.approx(0.0, abs=1e-9)
        # deck motion must not move the bar at all
        calm = dm.bar_pose(ship, dm.DeckState())
        assert np.allclose(pose.position, calm.position)

    def test_bar_mount_offset_rotates_with_heading(self):
        ship = dm.ShipState(x=0.0, y=0.0, heading=90.0)
        pose = dm.bar_pose(ship, dm.DeckState())
        dx, dy, dz = dm.BAR_MOUNT_OFFSET
        assert pose.position == pytest.approx([0.0 - dy, dx, dm.DECK_HEIGHT + dz], abs=1e-12)

    def test_deck_pose_tilts_with_attitude(self):
        ship = dm.ShipState(x=0.0, y=0.0, heading=0.0)
        flat = dm.deck_pose_world(ship, dm.DeckState())
        assert np.allclose(flat.matrix[:, 2], [0.0, 0.0, 1.0])
        tilted = dm.deck_pose_world(ship, dm.DeckState(pitch=10.0))
        assert tilted.matrix[2, 2] == pytest.approx(math.cos(math.radians(10.0)))

    def test_deck_surface_height_flat_and_tilted(self):
        ship = dm.ShipState(x=0.0, y=0.0, heading=0.0)
        assert dm.deck_surface_height(ship, dm.DeckState(), (5.0, 5.0)) == pytest.approx(
            dm.DECK_HEIGHT)
        state = dm.DeckState(heave=0.1)
        assert dm.deck_surface_height(ship, state, (0.0, 0.0)) == pytest.approx(
            dm.DECK_HEIGHT + 0.1)
        # positive pitch tilts the plane down ahead of the ship and up astern
        pitched = dm.DeckState(pitch=3.0)
        ahead = dm.deck_surface_height(ship, pitched, (10.0, 0.0))
        astern = dm.deck_surface_height(ship, pitched, (-10.0, 0.0))
        assert astern > dm.DECK_HEIGHT > ahead
        assert astern - dm.DECK_HEIGHT == pytest.approx(10.0 * math.tan(math.radians(3.0)),
                                                        rel=1e-6)


class TestSineComponent:
    def test_value_matches_closed_form(self):
        c = dm.SineComponent(amplitude=2.0, period=4.0, phase_deg=90.0)
        assert c.value(0.0) == pytest.approx(2.0 * math.sin(math.pi / 2))
        assert c.value(1.0) == pytest.approx(2.0 * math.sin(2 * math.pi / 4 + math.pi / 2))

    def test_rejects_non_positive_period(self):
        with pytest.raises(ValueError):
            dm.SineComponent(amplitude=1.0, period=0.0)
