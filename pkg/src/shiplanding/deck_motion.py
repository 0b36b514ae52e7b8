"""Ship translation paths, 6-DOF deck motion histories, and the gyro-stabilized bar pose.

The desk-scale platform limits are enforced on every generated deck state:
|roll| <= 13 deg, |pitch| <= 15 deg, |yaw| <= 16 deg, |surge|, |sway| <= 1.02 m,
|heave| <= 0.64 m. NATOPS landing-limit motion is +-8 deg roll at a 10.1 s
period and +-3 deg pitch at a 6.5 s period.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .geometry import Pose, compose

DECK_RANGES = {
    "roll": 13.0,
    "pitch": 15.0,
    "yaw": 16.0,
    "surge": 1.02,
    "sway": 1.02,
    "heave": 0.64,
}

NATOPS_ROLL_AMPLITUDE = 8.0       # deg
NATOPS_PITCH_AMPLITUDE = 3.0      # deg
NATOPS_ROLL_PERIOD = 10.1         # s, Sandia destroyer-class figure
NATOPS_PITCH_PERIOD = 6.5         # s

MAX_SHIP_SPEED = 4.5              # m/s

# Desk-scale platform layout (meters, ship frame: x toward bow, z up).
DECK_SIZE = 1.22
DECK_HEIGHT = 0.5                 # nominal deck surface height above ground
BAR_MOUNT_OFFSET = (0.9, 0.0, 0.2)  # bar center relative to deck center, on the superstructure

SHIP_WIDTH = 1.8
SHIP_HEIGHT = 1.8
SHIP_LENGTH = 3.0

AXES = ("roll", "pitch", "yaw", "surge", "sway", "heave")


@dataclass(frozen=True)
class DeckState:
    """Deck displacements relative to the ship body. Angles deg, lengths m."""

    roll: float = 0.0
    pitch: float = 0.0
    yaw: float = 0.0
    surge: float = 0.0
    sway: float = 0.0
    heave: float = 0.0


@dataclass(frozen=True)
class SineComponent:
    amplitude: float
    period: float        # seconds
    phase_deg: float = 0.0

    def __post_init__(self):
        if self.period <= 0:
            raise ValueError("sinusoid period must be positive")

    def value(self, t: float) -> float:
        return self.amplitude * math.sin(2 * math.pi * t / self.period + math.radians(self.phase_deg))


@dataclass(frozen=True)
class MotionProfile:
    """Per-axis sums of sinusoids; outputs are clamped to the platform ranges."""

    components: dict[str, tuple[SineComponent, ...]] = field(default_factory=dict)

    def __post_init__(self):
        for axis in self.components:
            if axis not in AXES:
                raise ValueError(f"unknown deck axis {axis!r}")

    @classmethod
    def perry_surrogate(cls, scale: float = 1.0, phase_deg: float = 0.0) -> "MotionProfile":
        """Two-component-per-axis multi-sine stand-in for sea-state-6 frigate motion.

        Amplitudes are scaled to the desk platform's ranges; this is a
        surrogate profile, not recorded ship data.
        """
        def pair(amp, p1, p2, ph):
            return (
                SineComponent(0.7 * amp * scale, p1, ph),
                SineComponent(0.3 * amp * scale, p2, ph + 77.0),
            )

        return cls({
            "roll": pair(10.0, 10.1, 6.3, phase_deg),
            "pitch": pair(4.0, 6.5, 4.1, phase_deg + 31.0),
            "yaw": pair(3.0, 12.7, 7.9, phase_deg + 54.0),
            "surge": pair(0.30, 9.3, 5.7, phase_deg + 13.0),
            "sway": pair(0.35, 11.8, 7.1, phase_deg + 67.0),
            "heave": pair(0.45, 8.6, 5.2, phase_deg + 42.0),
        })


def natops_motion(t: float, roll_phase_deg: float = 0.0, pitch_phase_deg: float = 0.0) -> DeckState:
    """NATOPS landing-limit motion: 8 deg roll @ 10.1 s, 3 deg pitch @ 6.5 s."""
    roll = NATOPS_ROLL_AMPLITUDE * math.sin(2 * math.pi * t / NATOPS_ROLL_PERIOD + math.radians(roll_phase_deg))
    pitch = NATOPS_PITCH_AMPLITUDE * math.sin(2 * math.pi * t / NATOPS_PITCH_PERIOD + math.radians(pitch_phase_deg))
    return DeckState(roll=roll, pitch=pitch)


def multisine_motion(t: float, profile: MotionProfile) -> DeckState:
    """Per-axis sum of sinusoids, hard-clamped to the platform ranges."""
    values = {}
    for axis in AXES:
        total = sum(c.value(t) for c in profile.components.get(axis, ()))
        limit = DECK_RANGES[axis]
        values[axis] = min(max(total, -limit), limit)
    return DeckState(**values)


@dataclass(frozen=True)
class ShipState:
    """Planar pose of the ship platform in the world."""

    x: float = 0.0
    y: float = 0.0
    heading: float = 0.0  # deg
    width: float = SHIP_WIDTH
    height: float = SHIP_HEIGHT
    length: float = SHIP_LENGTH

    @property
    def position(self) -> np.ndarray:
        return np.array([self.x, self.y, 0.0])


@dataclass(frozen=True)
class ShipPath:
    """Planar ship trajectory: straight, S-pattern, 90-degree turn, or stationary.

    ``speed_schedule`` is a sequence of (time, speed) breakpoints; speed is
    linearly interpolated between them and held beyond the last one.
    """

    kind: str = "stationary"
    start: tuple[float, float] = (0.0, 0.0)
    heading_deg: float = 0.0
    speed_schedule: tuple[tuple[float, float], ...] = ((0.0, 0.0),)
    turn_radius: float = 8.0          # m, for turn_90
    lead_in: float = 10.0             # m of straight leg before the turn
    weave_amplitude_deg: float = 65.0  # each-way heading swing for s_pattern
    weave_wavelength: float = 40.0     # m of arc length per full S cycle
    max_duration: float = 600.0        # s of path table coverage

    def __post_init__(self):
        if self.kind not in ("straight", "s_pattern", "turn_90", "stationary"):
            raise ValueError(f"unknown path kind {self.kind!r}")
        for _, v in self.speed_schedule:
            if not (0.0 <= v <= MAX_SHIP_SPEED):
                raise ValueError(f"ship speed {v} outside [0, {MAX_SHIP_SPEED}] m/s")

    def speed(self, t: float) -> float:
        pts = self.speed_schedule
        if t <= pts[0][0]:
            return pts[0][1]
        for (t0, v0), (t1, v1) in zip(pts, pts[1:]):
            if t <= t1:
                return v0 + (v1 - v0) * (t - t0) / (t1 - t0)
        return pts[-1][1]

    def distance(self, t: float) -> float:
        """Arc length traveled by time t (piecewise-linear speed integral)."""
        pts = self.speed_schedule
        s = 0.0
        prev_t, prev_v = pts[0]
        if t <= prev_t:
            return prev_v * max(t, 0.0)
        s += prev_v * prev_t
        for t1, v1 in pts[1:]:
            if t < t1:
                v = self.speed(t)
                return s + 0.5 * (prev_v + v) * (t - prev_t)
            s += 0.5 * (prev_v + v1) * (t1 - prev_t)
            prev_t, prev_v = t1, v1
        return s + prev_v * (t - prev_t)

    def _heading_at_arc(self, s: float) -> float:
        h0 = self.heading_deg
        if self.kind in ("stationary", "straight"):
            return h0
        if self.kind == "s_pattern":
            return h0 + self.weave_amplitude_deg * math.sin(2 * math.pi * s / self.weave_wavelength)
        # turn_90: straight lead-in, then a quarter-circle arc, then straight.
        arc_len = 0.5 * math.pi * self.turn_radius
        if s <= self.lead_in:
            return h0
        if s <= self.lead_in + arc_len:
            return h0 + 90.0 * (s - self.lead_in) / arc_len
        return h0 + 90.0

    @cached_property
    def _arc_table(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Sampled (s, x, y) along the curved path geometry."""
        vmax = max(v for _, v in self.speed_schedule)
        s_max = max(vmax * self.max_duration, 1.0)
        ds = 0.02
        s = np.arange(0.0, s_max + ds, ds)
        h = np.radians([self._heading_at_arc(si) for si in s])
        x = self.start[0] + np.concatenate([[0.0], np.cumsum(0.5 * (np.cos(h[1:]) + np.cos(h[:-1])) * ds)])
        y = self.start[1] + np.concatenate([[0.0], np.cumsum(0.5 * (np.sin(h[1:]) + np.sin(h[:-1])) * ds)])
        return s, x, y

    def pose_at_arc(self, s: float) -> tuple[float, float, float]:
        if self.kind == "stationary" or s <= 0.0:
            return self.start[0], self.start[1], self._heading_at_arc(max(s, 0.0))
        if self.kind == "straight":
            h = math.radians(self.heading_deg)
            return self.start[0] + s * math.cos(h), self.start[1] + s * math.sin(h), self.heading_deg
        table_s, table_x, table_y = self._arc_table
        x = float(np.interp(s, table_s, table_x))
        y = float(np.interp(s, table_s, table_y))
        return x, y, self._heading_at_arc(s)


def ship_state(t: float, path: ShipPath) -> ShipState:
    """Planar ship pose at time t along the path."""
    s = path.distance(t) if path.kind != "stationary" else 0.0
    x, y, heading = path.pose_at_arc(s)
    return ShipState(x=x, y=y, heading=heading)


def deck_pose_world(ship: ShipState, deck: DeckState, deck_height: float = DECK_HEIGHT) -> Pose:
    """World pose of the deck center: ship planar pose composed with deck motion.

    Deck rotations are applied about the deck geometric center in
    roll -> pitch -> yaw order (intrinsic Z-Y-X composition).
    """
    ship_pose = Pose.from_euler_deg((ship.x, ship.y, deck_height), ship.heading)
    deck_local = Pose.from_euler_deg(
        (deck.surge, deck.sway, deck.heave), deck.yaw, deck.pitch, deck.roll
    )
    return compose(ship_pose, deck_local)


def bar_pose(ship: ShipState, deck: DeckState,
             mount_offset: tuple[float, float, float] = BAR_MOUNT_OFFSET,
             deck_height: float = DECK_HEIGHT) -> Pose:
    """World pose of the gyro-stabilized horizon bar.

    The bar rides rigidly with the ship superstructure (not the moving deck),
    so its roll and pitch are identically zero and its yaw follows the ship
    heading. The deck state is accepted for interface symmetry but does not
    influence the bar.
    """
    del deck
    h = math.radians(ship.heading)
    dx, dy, dz = mount_offset
    pos = (
        ship.x + dx * math.cos(h) - dy * math.sin(h),
        ship.y + dx * math.sin(h) + dy * math.cos(h),
        deck_height + dz,
    )
    return Pose.from_euler_deg(pos, ship.heading)


def deck_surface_height(ship: ShipState, deck: DeckState, at_xy, deck_height: float = DECK_HEIGHT) -> float:
    """Height of the (tilted) deck plane at a world x-y location."""
    pose = deck_pose_world(ship, deck, deck_height)
    normal = pose.matrix[:, 2]
    center = pose.position
    if abs(normal[2]) < 1e-6:
        return center[2]
    x, y = at_xy
    return center[2] - (normal[0] * (x - center[0]) + normal[1] * (y - center[1])) / normal[2]
