"""Episode configuration: dataclass sections mirroring the JSON config file."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from . import control as ctl
from . import deck_motion as dm
from .errors import ConfigInvalid
from .geometry import CameraModel, CueSpec

MAX_WIND_SPEED = 9.0  # m/s


def _from_dict(cls, data: dict):
    known = {f.name for f in fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ConfigInvalid(f"{cls.__name__}: unknown keys {sorted(unknown)}")
    coerced = {}
    for f in fields(cls):
        if f.name not in data:
            continue
        v = data[f.name]
        if isinstance(v, list):
            v = tuple(tuple(x) if isinstance(x, list) else x for x in v)
        coerced[f.name] = v
    return cls(**coerced)


@dataclass(frozen=True)
class CameraConfig:
    focal_length: float = 930.0
    width: int = 1280
    height: int = 720

    def model(self) -> CameraModel:
        return CameraModel(self.focal_length, (self.width / 2, self.height / 2),
                           (self.width, self.height))


@dataclass(frozen=True)
class CueConfig:
    rectangle_width: float = 0.40
    rectangle_height: float = 0.10
    gap: float = 0.30

    def spec(self) -> CueSpec:
        return CueSpec(self.rectangle_width, self.rectangle_height, self.gap)


@dataclass(frozen=True)
class MotionConfig:
    kind: str = "natops"          # natops | multisine | none
    roll_phase_deg: float = 0.0
    pitch_phase_deg: float = 0.0
    multisine_scale: float = 1.0
    multisine_phase_deg: float = 0.0

    def deck_state(self, t: float) -> dm.DeckState:
        if self.kind == "none":
            return dm.DeckState()
        if self.kind == "natops":
            return dm.natops_motion(t, self.roll_phase_deg, self.pitch_phase_deg)
        if self.kind == "multisine":
            profile = dm.MotionProfile.perry_surrogate(self.multisine_scale,
                                                       self.multisine_phase_deg)
            return dm.multisine_motion(t, profile)
        raise ConfigInvalid(f"unknown motion kind {self.kind!r}")


@dataclass(frozen=True)
class PathConfig:
    kind: str = "stationary"
    start: tuple[float, float] = (0.0, 0.0)
    heading_deg: float = 0.0
    speed_schedule: tuple[tuple[float, float], ...] = ((0.0, 0.0),)
    turn_radius: float = 8.0
    lead_in: float = 10.0
    weave_amplitude_deg: float = 65.0
    weave_wavelength: float = 40.0

    def path(self) -> dm.ShipPath:
        return dm.ShipPath(kind=self.kind, start=self.start, heading_deg=self.heading_deg,
                           speed_schedule=self.speed_schedule, turn_radius=self.turn_radius,
                           lead_in=self.lead_in, weave_amplitude_deg=self.weave_amplitude_deg,
                           weave_wavelength=self.weave_wavelength)


@dataclass(frozen=True)
class NoiseConfig:
    enabled: bool = True
    pixel_noise_px: float = 0.5        # corner observation noise
    detect_center_px: float = 2.0      # learned-detector center noise
    detect_area_fraction: float = 0.05
    magnetometer_deg: float = 2.0
    cadence_jitter: float = 0.2        # +-20% perception-period jitter


@dataclass(frozen=True)
class WindConfig:
    vector: tuple[float, float, float] = (0.0, 0.0, 0.0)  # m/s, world frame
    gust_amplitude: float = 0.0
    gust_period: float = 10.0

    def velocity(self, t: float) -> tuple[float, float, float]:
        wx, wy, wz = self.vector
        if self.gust_amplitude > 0.0:
            mag = math.hypot(wx, wy)
            gx, gy = (wx / mag, wy / mag) if mag > 1e-9 else (1.0, 0.0)
            g = self.gust_amplitude * math.sin(2 * math.pi * t / self.gust_period)
            wx, wy = wx + g * gx, wy + g * gy
        return (wx, wy, wz)

    @property
    def max_magnitude(self) -> float:
        wx, wy, wz = self.vector
        return math.sqrt(wx * wx + wy * wy + wz * wz) + abs(self.gust_amplitude)


def _exp_row(g: ctl.ExpGainSet) -> tuple:
    return (g.m, g.a, g.c, g.d)


def _pid_row(g: ctl.ProbPidGainSet) -> tuple:
    return (g.kp, g.ki, g.b, g.mu, g.sigma)


@dataclass(frozen=True)
class GainsConfig:
    """Controller gain tables.

    Exponential rows are (m, a, c, d); probabilistic-PID rows are
    (kp, ki, b, mu, sigma). Defaults mirror the published tables.
    """

    ship_pitch: tuple = _exp_row(ctl.SHIP_TRACKING_GAINS["pitch"])
    ship_roll: tuple = _exp_row(ctl.SHIP_TRACKING_GAINS["roll"])
    ship_heave: tuple = _exp_row(ctl.SHIP_TRACKING_GAINS["heave"])
    bar_pitch: tuple = _exp_row(ctl.BAR_TRACKING_GAINS["pitch"])
    bar_roll: tuple = _exp_row(ctl.BAR_TRACKING_GAINS["roll"])
    bar_heave: tuple = _exp_row(ctl.BAR_TRACKING_GAINS["heave"])
    corner_pitch: tuple = _pid_row(ctl.CORNER_TRACKING_GAINS["pitch"])
    corner_roll: tuple = _pid_row(ctl.CORNER_TRACKING_GAINS["roll"])
    corner_heave: tuple = _pid_row(ctl.CORNER_TRACKING_GAINS["heave"])
    corner_yaw: tuple = _pid_row(ctl.CORNER_TRACKING_GAINS["yaw"])
    exp_literal_paper_form: bool = False
    kalman_literal_paper_form: bool = False

    def exp_tables(self) -> dict[str, dict[str, ctl.ExpGainSet]]:
        return {
            "ship": {
                "pitch": ctl.ExpGainSet(*self.ship_pitch),
                "roll": ctl.ExpGainSet(*self.ship_roll),
                "heave": ctl.ExpGainSet(*self.ship_heave),
            },
            "bar": {
                "pitch": ctl.ExpGainSet(*self.bar_pitch),
                "roll": ctl.ExpGainSet(*self.bar_roll),
                "heave": ctl.ExpGainSet(*self.bar_heave),
            },
        }

    def pid_table(self) -> dict[str, ctl.ProbPidGainSet]:
        return {
            "pitch": ctl.ProbPidGainSet(*self.corner_pitch),
            "roll": ctl.ProbPidGainSet(*self.corner_roll),
            "heave": ctl.ProbPidGainSet(*self.corner_heave),
            "yaw": ctl.ProbPidGainSet(*self.corner_yaw),
        }


@dataclass(frozen=True)
class SimConfig:
    dt: float = 0.01                 # physics tick, s
    timeout: float = 400.0           # s
    initial_position: tuple[float, float, float] = (-50.0, 0.0, 3.0)
    initial_heading_deg: float = 0.0
    deck_height: float = dm.DECK_HEIGHT
    bar_offset: tuple[float, float, float] = dm.BAR_MOUNT_OFFSET
    approach_height: float = 3.0     # m above the pad plane during corner tracking
    corner_max_range: float = 15.0   # m, usable range of the corner pipeline
    min_elevation_deg: float = 8.0   # grazing-angle limit for the planar cue
    longrange_gimbal_pitch_deg: float = -12.0
    descent_command: float = -60.0   # heave percent in mode 1
    landing_margin: float = 0.85     # fraction of the 0.35 m box used as trigger
    v_max_horizontal: float = 5.0    # m/s at 100% pitch/roll
    v_max_vertical: float = 2.0      # m/s at 100% heave
    yaw_rate_max: float = 60.0       # deg/s at 100% yaw
    tau: float = 0.3                 # s, inner-loop velocity time constant
    ship_detect_height: float = 0.9  # m, ship bounding-box center height
    search_scenario: bool = False    # allow starts beyond the 250 m detection range


@dataclass(frozen=True)
class EpisodeConfig:
    seed: int = 0
    camera: CameraConfig = field(default_factory=CameraConfig)
    cue: CueConfig = field(default_factory=CueConfig)
    motion: MotionConfig = field(default_factory=MotionConfig)
    path: PathConfig = field(default_factory=PathConfig)
    gains: GainsConfig = field(default_factory=GainsConfig)
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    wind: WindConfig = field(default_factory=WindConfig)
    sim: SimConfig = field(default_factory=SimConfig)

    def validate(self) -> "EpisodeConfig":
        x, y, z = self.sim.initial_position
        sx, sy = self.path.start
        initial_range = math.hypot(x - sx, y - sy)
        if initial_range > 250.0 and not self.sim.search_scenario:
            raise ConfigInvalid(
                f"initial range {initial_range:.1f} m exceeds the 250 m detection "
                "limit; set sim.search_scenario for a search start"
            )
        if self.wind.max_magnitude > MAX_WIND_SPEED:
            raise ConfigInvalid(f"wind magnitude {self.wind.max_magnitude:.1f} exceeds "
                                f"{MAX_WIND_SPEED} m/s")
        if self.sim.dt <= 0 or self.sim.timeout <= 0:
            raise ConfigInvalid("sim.dt and sim.timeout must be positive")
        return self

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "EpisodeConfig":
        sections = {
            "camera": CameraConfig, "cue": CueConfig, "motion": MotionConfig,
            "path": PathConfig, "gains": GainsConfig, "noise": NoiseConfig,
            "wind": WindConfig, "sim": SimConfig,
        }
        kwargs = {}
        for key, value in data.items():
            if key == "seed":
                kwargs["seed"] = int(value)
            elif key in sections:
                kwargs[key] = _from_dict(sections[key], value)
            else:
                raise ConfigInvalid(f"unknown config section {key!r}")
        return cls(**kwargs).validate()

    @classmethod
    def from_file(cls, path: str | Path) -> "EpisodeConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def with_seed(self, seed: int) -> "EpisodeConfig":
        return replace(self, seed=seed)
