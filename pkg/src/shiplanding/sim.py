"""Closed-loop episode engine: vehicle model, perception scheduling, Monte Carlo runner.

The vehicle is a kinematic first-order velocity-response plant standing in
for the UAV's inner-loop autopilot. Perception arrives on two cadences
(learned detector 0.5 s, corner pipeline 0.03 s), each delayed by its own
latency before the controller sees it. Episodes are pure functions of their
configuration, including the seed.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field, replace

import numpy as np

from . import control as ctl
from . import deck_motion as dm
from . import modes as md
from . import pose_estimation as pe
from . import vision
from .config import EpisodeConfig
from .errors import NonPositiveDt, NotConverged
from .geometry import CameraModel, CueSpec, Pose, camera_pose, cue_corners_world, project_points


@dataclass
class VehicleState:
    """Kinematic vehicle: world position/velocity plus heading and its rate."""

    x: float = 0.0
    y: float = 0.0
    z: float = 0.0
    heading: float = 0.0       # deg
    vx: float = 0.0
    vy: float = 0.0
    vz: float = 0.0
    heading_rate: float = 0.0  # deg/s

    @property
    def position(self):
        return np.array([self.x, self.y, self.z])

    @property
    def speed(self) -> float:
        return math.sqrt(self.vx ** 2 + self.vy ** 2 + self.vz ** 2)


def vehicle_step(v: VehicleState, cmd: ctl.ControlVector, wind, dt: float,
                 v_max_horizontal: float = 5.0, v_max_vertical: float = 2.0,
                 yaw_rate_max: float = 60.0, tau: float = 0.3) -> VehicleState:
    """First-order velocity response toward the commanded velocity plus wind."""
    if dt <= 0:
        raise NonPositiveDt(f"dt={dt}")
    fwd = cmd.pitch / 100.0 * v_max_horizontal
    right = cmd.roll / 100.0 * v_max_horizontal
    up = cmd.heave / 100.0 * v_max_vertical
    yaw_rate = cmd.yaw / 100.0 * yaw_rate_max
    h = math.radians(v.heading)
    ch, sh = math.cos(h), math.sin(h)
    # vehicle right axis in the world is (sin h, -cos h)
    cx = fwd * ch + right * sh + wind[0]
    cy = fwd * sh - right * ch + wind[1]
    cz = up + wind[2]
    alpha = 1.0 - math.exp(-dt / tau)
    vx = v.vx + (cx - v.vx) * alpha
    vy = v.vy + (cy - v.vy) * alpha
    vz = v.vz + (cz - v.vz) * alpha
    rate = v.heading_rate + (yaw_rate - v.heading_rate) * alpha
    return VehicleState(
        x=v.x + vx * dt, y=v.y + vy * dt, z=v.z + vz * dt,
        heading=v.heading + rate * dt,
        vx=vx, vy=vy, vz=vz, heading_rate=rate,
    )


def _wrap_deg(a: float) -> float:
    return (a + 180.0) % 360.0 - 180.0


class ControllerBank:
    """Per-episode controller state: PID channels, Kalman filter, exp tables."""

    def __init__(self, cfg: EpisodeConfig):
        self.cfg = cfg
        self.pid_gains = cfg.gains.pid_table()
        self.exp_gains = cfg.gains.exp_tables()
        self.camera = cfg.camera.model()
        self.reset_close()
        self.reset_long()
        self.kalman: pe.KalmanState | None = None
        # context refreshed by the harness each tick
        self.gimbal_yaw_rel = 0.0     # deg, gimbal heading minus vehicle heading
        self.heading_noise = 0.0      # deg, magnetometer error at this update
        self.vehicle_heading = 0.0    # deg
        self.pad_velocity = (0.0, 0.0, 0.0)  # m/s world, estimated pad motion
        self.now = 0.0

    def reset_close(self):
        self.close_pid = {ch: ctl.PidChannelState() for ch in ("pitch", "roll", "heave", "yaw")}
        self.last_close_time: float | None = None

    def reset_long(self):
        self.long_yaw_pid = ctl.PidChannelState()
        self.last_long_time: float | None = None

    def filter_yaw(self, measured: float) -> float:
        if self.kalman is None:
            self.kalman = pe.KalmanState(ce=measured)
        else:
            self.kalman = pe.kalman_update(self.kalman, measured,
                                           self.cfg.gains.kalman_literal_paper_form)
        return self.kalman.ce

    def _pad_feedforward(self) -> tuple[float, float, float]:
        """Pad velocity as percent commands in the vehicle frame."""
        vfx, vfy, vfz = self.pad_velocity
        h = math.radians(self.vehicle_heading)
        s = self.cfg.sim
        fwd = (vfx * math.cos(h) + vfy * math.sin(h)) / s.v_max_horizontal * 100.0
        right = (vfx * math.sin(h) - vfy * math.cos(h)) / s.v_max_horizontal * 100.0
        up = vfz / s.v_max_vertical * 100.0
        return fwd, right, up

    def close_range(self, rel: pe.RelativeState) -> ctl.ControlVector:
        dt = md.CORNER_PERIOD if self.last_close_time is None else max(self.now - self.last_close_time, 1e-3)
        self.last_close_time = self.now
        errors = {
            "pitch": rel.x,
            "roll": rel.y,
            "heave": self.cfg.sim.approach_height - rel.z,
            "yaw": rel.yaw,
        }
        out = {}
        for ch, e in errors.items():
            out[ch], self.close_pid[ch] = ctl.prob_pid_step(self.close_pid[ch], e, dt,
                                                            self.pid_gains[ch])
        # feedforward of the (possibly under-way) pad keeps the corrective
        # loop working on the residual error only
        ff, fr, fu = self._pad_feedforward()
        return ctl.ControlVector(pitch=out["pitch"] + ff, roll=out["roll"] + fr,
                                 heave=out["heave"] + fu, yaw=out["yaw"])

    def long_range(self, det: vision.Detection, kind: str) -> ctl.ControlVector:
        gains = self.exp_gains[kind]
        u, v = det.center
        u0, v0 = self.camera.principal_point
        # The image-center setpoints in the gain tables assume 720p; rescale
        # the pixel measurements onto that reference geometry.
        ru = 640.0 / u0
        rv = 360.0 / v0
        # The percent-to-velocity mapping of this plant (100% = 5 m/s) is far
        # hotter than the airframe the image-centering gains were tuned on.
        # With a full second of detector delay the raw commands limit-cycle,
        # so the lateral/vertical channels are derated; the range channel is
        # already gentle and stays as published.
        scale = self.LONG_RANGE_CENTERING_SCALE
        lit = self.cfg.gains.exp_literal_paper_form
        pitch = -self.LONG_RANGE_RANGE_SCALE * ctl.exp_control(det.area, gains["pitch"], lit)
        roll = scale * ctl.exp_control(640.0 + (u - u0) * ru, gains["roll"], lit)
        heave = -scale * ctl.exp_control(360.0 + (v - v0) * rv, gains["heave"], lit)
        # Gentle heading hold toward the measured bearing. The learned-detector
        # cadence plus latency add a full second of loop delay, so the yaw
        # authority must stay well below the per-update error to stay stable.
        # Heading error, CCW positive: gimbal offset is already CCW, the image
        # offset (pixels to the right) is clockwise.
        heading_err = self.gimbal_yaw_rel - math.degrees(math.atan2(u - u0, self.camera.focal_length))
        yaw = self.LONG_RANGE_YAW_GAIN * (heading_err + self.heading_noise)
        return ctl.ControlVector(pitch=pitch, roll=roll, heave=heave, yaw=yaw)

    LONG_RANGE_YAW_GAIN = 1.5          # percent per degree of bearing error
    LONG_RANGE_CENTERING_SCALE = 0.12  # derating of the image-centering channels
    LONG_RANGE_RANGE_SCALE = 4.0       # boost of the area (closure) channel so the
                                       # vehicle can overtake a ship under way

    def descend(self, rel: pe.RelativeState | None = None) -> ctl.ControlVector:
        """Vertical landing: constant descent while still nulling pad offset."""
        ff, fr, _ = self._pad_feedforward()
        pitch, roll = ff, fr
        if rel is not None:
            dt = md.CORNER_PERIOD if self.last_close_time is None else max(self.now - self.last_close_time, 1e-3)
            self.last_close_time = self.now
            p, self.close_pid["pitch"] = ctl.prob_pid_step(
                self.close_pid["pitch"], rel.x, dt, self.pid_gains["pitch"])
            r, self.close_pid["roll"] = ctl.prob_pid_step(
                self.close_pid["roll"], rel.y, dt, self.pid_gains["roll"])
            pitch, roll = pitch + p, roll + r
        return ctl.ControlVector(pitch=pitch, roll=roll, heave=self.cfg.sim.descent_command)


@dataclass(frozen=True)
class EpisodeLog:
    """Decimated time series plus the terminal outcome of one episode."""

    seed: int
    t: np.ndarray
    mode: np.ndarray
    commands: np.ndarray         # (n, 4) pitch/roll/heave/yaw percent
    vehicle: np.ndarray          # (n, 4) x, y, z, heading
    ship: np.ndarray             # (n, 3) x, y, heading
    deck: np.ndarray             # (n, 3) roll, pitch, heave
    estimate: np.ndarray         # (n, 4) x, y, z, yaw; NaN when no track
    mode_transitions: tuple      # ((t, from, to), ...)
    terminal: str                # landed | timeout | abort
    touchdown_offset: tuple[float, float] | None  # m, deck frame
    touchdown_deck_attitude: tuple[float, float] | None  # roll, pitch deg
    landed_time: float | None

    @property
    def landed(self) -> bool:
        return self.terminal == "landed"

    @property
    def touchdown_radius(self) -> float | None:
        if self.touchdown_offset is None:
            return None
        return math.hypot(*self.touchdown_offset)


class _Episode:
    """Mutable state of one closed-loop run."""

    def __init__(self, cfg: EpisodeConfig):
        cfg.validate()
        self.cfg = cfg
        self.rng = np.random.default_rng(cfg.seed)
        self.camera: CameraModel = cfg.camera.model()
        self.cue: CueSpec = cfg.cue.spec()
        self.path = cfg.path.path()
        s = cfg.sim
        x0, y0, z0 = s.initial_position
        self.vehicle = VehicleState(x=x0, y=y0, z=z0, heading=s.initial_heading_deg)
        self.bank = ControllerBank(cfg)
        self.machine = md.ModeMachine()
        self.command = ctl.ControlVector()
        self.t = 0.0
        bx, by, bz = s.bar_offset
        self.pad_offset_cue = (-bx, -by, -bz)
        self.object_points = self.cue.corners_local()
        # perception bookkeeping
        self.next_corner_sample = 0.0
        self.next_ml_sample = 0.0
        self.pending_corner: deque = deque()
        self.pending_ml: deque = deque()
        self.last_rel: pe.RelativeState | None = None
        self.last_rel_recv = -math.inf
        self.last_bar: vision.Detection | None = None
        self.last_bar_recv = -math.inf
        self.last_ship: vision.Detection | None = None
        self.last_ship_recv = -math.inf
        self.last_any_recv = 0.0
        self.last_pnp_pose: Pose | None = None
        self.landing_condition = False
        self.pad_vel = np.zeros(3)
        self._pad_prev: tuple[np.ndarray, float] | None = None

    # -- truth helpers -----------------------------------------------------

    def ship_deck(self, t: float):
        ship = dm.ship_state(t, self.path)
        deck = self.cfg.motion.deck_state(t)
        return ship, deck

    def gimbal(self, ship: dm.ShipState, deck: dm.DeckState) -> tuple[float, float]:
        """(heading, pitch) of the gimbal camera, deg.

        The gimbal servo tracks the cue once within corner-pipeline reach;
        farther out it holds the vehicle heading with a fixed glideslope tilt.
        """
        bp = dm.bar_pose(ship, deck, self.cfg.sim.bar_offset, self.cfg.sim.deck_height)
        dvec = bp.position - self.vehicle.position
        horiz = math.hypot(dvec[0], dvec[1])
        slant = math.sqrt(horiz ** 2 + dvec[2] ** 2)
        if slant <= 1.5 * self.cfg.sim.corner_max_range:
            yaw = math.degrees(math.atan2(dvec[1], dvec[0]))
            pitch = math.degrees(math.atan2(dvec[2], horiz))
            return yaw, max(min(pitch, 30.0), -89.0)
        return self.vehicle.heading, self.cfg.sim.longrange_gimbal_pitch_deg

    def _jitter(self, period: float) -> float:
        noise = self.cfg.noise
        if not noise.enabled or noise.cadence_jitter <= 0:
            return period
        return period * (1.0 + self.rng.uniform(-noise.cadence_jitter, noise.cadence_jitter))

    # -- perception sampling ----------------------------------------------

    def sample_corner(self, t: float):
        """Synthesize one corner-pipeline result (geometric path) or None."""
        ship, deck = self.ship_deck(t)
        s = self.cfg.sim
        bp = dm.bar_pose(ship, deck, s.bar_offset, s.deck_height)
        dvec = bp.position - self.vehicle.position
        horiz = math.hypot(dvec[0], dvec[1])
        slant = math.sqrt(horiz ** 2 + dvec[2] ** 2)
        if slant > s.corner_max_range or slant < 0.3:
            return None
        elevation = math.degrees(math.atan2(-dvec[2], horiz))
        if elevation < s.min_elevation_deg:
            return None
        gy, gp = self.gimbal(ship, deck)
        cam_pose = camera_pose(self.vehicle.position, gy, gp)
        try:
            pixels = project_points(cam_pose, self.camera, cue_corners_world(self.cue, bp))
        except Exception:
            return None
        w, h = self.camera.resolution
        if (pixels < 0).any() or (pixels[:, 0] >= w).any() or (pixels[:, 1] >= h).any():
            return None
        noise = self.cfg.noise
        if noise.enabled and noise.pixel_noise_px > 0:
            pixels = pixels + self.rng.normal(0.0, noise.pixel_noise_px, pixels.shape)
        try:
            pnp = pe.solve_pnp(pixels, self.object_points, self.camera,
                               initial_guess=self.last_pnp_pose)
        except (NotConverged, np.linalg.LinAlgError):
            return None
        self.last_pnp_pose = pnp.pose
        prev = self.last_rel
        dt = None if prev is None else max(t - prev.timestamp, 1e-3)
        rel = pe.pose_to_relative_state(
            pnp, previous=prev, dt=dt, gimbal_pitch_deg=gp,
            gimbal_yaw_rel_deg=_wrap_deg(gy - self.vehicle.heading),
            pad_offset_cue=self.pad_offset_cue, timestamp=t)
        return rel

    def sample_ml(self, t: float):
        """One learned-detector cycle: (ship detection, bar detection)."""
        ship, deck = self.ship_deck(t)
        s = self.cfg.sim
        noise = self.cfg.noise
        gy, gp = self.gimbal(ship, deck)
        cam_pose = camera_pose(self.vehicle.position, gy, gp)
        kwargs = dict(rng=self.rng if noise.enabled else None,
                      center_noise_px=noise.detect_center_px,
                      area_noise=noise.detect_area_fraction, timestamp=t)
        ship_center = (ship.x, ship.y, s.ship_detect_height)
        ship_det = vision.mock_detect("ship", ship_center, ship.width * ship.height,
                                      cam_pose, self.camera, **kwargs)
        bp = dm.bar_pose(ship, deck, s.bar_offset, s.deck_height)
        bar_det = vision.mock_detect("bar", bp.position, self.cue.bounding_area,
                                     cam_pose, self.camera,
                                     bar_reference_area=self.cue.bounding_area, **kwargs)
        return ship_det, bar_det

    def _update_pad_velocity(self, rel: pe.RelativeState, t: float):
        """Low-passed world-frame pad velocity from consecutive corner fixes."""
        h = math.radians(self.vehicle.heading)
        pad_w = np.array([
            self.vehicle.x + rel.x * math.cos(h) + rel.y * math.sin(h),
            self.vehicle.y + rel.x * math.sin(h) - rel.y * math.cos(h),
            self.vehicle.z - rel.z,
        ])
        if self._pad_prev is not None:
            prev, t_prev = self._pad_prev
            dt = t - t_prev
            if 1e-3 < dt < 0.5:
                sample = (pad_w - prev) / dt
                speed = np.linalg.norm(sample)
                limit = dm.MAX_SHIP_SPEED + 2.0
                if speed > limit:
                    sample *= limit / speed
                self.pad_vel += 0.2 * (sample - self.pad_vel)
            elif dt >= 0.5:
                self.pad_vel = np.zeros(3)
        self._pad_prev = (pad_w, t)

    # -- main loop ---------------------------------------------------------

    def run(self, log_every: int = 5) -> EpisodeLog:
        cfg = self.cfg
        s = cfg.sim
        dt = s.dt
        noise = cfg.noise
        rows = {k: [] for k in ("t", "mode", "cmd", "veh", "ship", "deck", "est")}
        transitions = []
        terminal = "timeout"
        touchdown_offset = None
        touchdown_attitude = None
        landed_time = None
        tick = 0
        margin = s.landing_margin * ctl.LANDING_THRESHOLD

        while self.t < s.timeout:
            t = self.t
            ship, deck = self.ship_deck(t)
            delivered = False

            # sample perception on each source's own cadence
            if t >= self.next_corner_sample:
                payload = self.sample_corner(t)
                self.pending_corner.append((t + self._jitter(md.CORNER_PERIOD), payload))
                self.next_corner_sample = t + self._jitter(md.CORNER_PERIOD)
            if t >= self.next_ml_sample:
                payload = self.sample_ml(t)
                self.pending_ml.append((t + self._jitter(md.ML_PERIOD), payload))
                self.next_ml_sample = t + self._jitter(md.ML_PERIOD)

            # deliveries become visible only after their latency
            while self.pending_corner and self.pending_corner[0][0] <= t:
                _, rel = self.pending_corner.popleft()
                delivered = True
                if rel is not None:
                    rel = replace(rel, yaw=self.bank.filter_yaw(rel.yaw))
                    self.last_rel = rel
                    self.last_rel_recv = t
                    self.last_any_recv = t
                    self.landing_condition = (abs(rel.x) <= margin and abs(rel.y) <= margin)
                    self._update_pad_velocity(rel, t)
            while self.pending_ml and self.pending_ml[0][0] <= t:
                _, (ship_det, bar_det) = self.pending_ml.popleft()
                delivered = True
                if ship_det is not None:
                    self.last_ship = ship_det
                    self.last_ship_recv = t
                    self.last_any_recv = t
                if bar_det is not None:
                    self.last_bar = bar_det
                    self.last_bar_recv = t
                    self.last_any_recv = t

            height_over_deck = self.vehicle.z - dm.deck_surface_height(
                ship, deck, (self.vehicle.x, self.vehicle.y), s.deck_height)
            summary = md.PerceptionSummary(
                corner_state=self.last_rel,
                bar_detection=self.last_bar,
                ship_detection=self.last_ship,
                landing_condition=self.landing_condition,
                corner_age=t - self.last_rel_recv,
                bar_age=t - self.last_bar_recv,
                ship_age=t - self.last_ship_recv,
                height_over_deck=height_over_deck,
            )

            prev_mode = self.machine.mode
            if delivered or md._qualifying_mode(summary) > self.machine.mode:
                self.machine.step(summary)
            mode = self.machine.mode
            if mode != prev_mode:
                transitions.append((t, int(prev_mode), int(mode)))
                self.bank.reset_close()
                self.bank.reset_long()

            if mode != prev_mode or delivered or mode in (md.FlightMode.VERTICAL_LANDING,
                                                          md.FlightMode.HOLD_LAST):
                self.bank.now = t
                gy, _ = self.gimbal(ship, deck)
                self.bank.gimbal_yaw_rel = _wrap_deg(gy - self.vehicle.heading)
                self.bank.heading_noise = (self.rng.normal(0.0, noise.magnetometer_deg)
                                           if noise.enabled else 0.0)
                self.bank.vehicle_heading = self.vehicle.heading
                self.bank.pad_velocity = tuple(self.pad_vel) if summary.corner_fresh else (0.0, 0.0, 0.0)
                try:
                    self.command = md.select_command(mode, summary, self.bank, self.command,
                                                     hold_age=t - self.last_any_recv)
                except md.InconsistentMode:
                    self.command = self.command  # keep holding on a stale switch

            if tick % log_every == 0:
                rows["t"].append(t)
                rows["mode"].append(int(mode))
                rows["cmd"].append(self.command.as_tuple())
                rows["veh"].append((self.vehicle.x, self.vehicle.y, self.vehicle.z,
                                    self.vehicle.heading))
                rows["ship"].append((ship.x, ship.y, ship.heading))
                rows["deck"].append((deck.roll, deck.pitch, deck.heave))
                est = (self.last_rel.x, self.last_rel.y, self.last_rel.z, self.last_rel.yaw) \
                    if self.last_rel is not None and summary.corner_fresh else (math.nan,) * 4
                rows["est"].append(est)

            wind = cfg.wind.velocity(t)
            self.vehicle = vehicle_step(self.vehicle, self.command, wind, dt,
                                        s.v_max_horizontal, s.v_max_vertical,
                                        s.yaw_rate_max, s.tau)
            self.t = t + dt
            tick += 1

            # Touchdown can only happen over the deck footprint; elsewhere the
            # extrapolated deck plane is meaningless.
            h = math.radians(ship.heading)
            rx = (self.vehicle.x - ship.x) * math.cos(h) + (self.vehicle.y - ship.y) * math.sin(h)
            ry = -(self.vehicle.x - ship.x) * math.sin(h) + (self.vehicle.y - ship.y) * math.cos(h)
            half = dm.DECK_SIZE / 2.0
            over_deck = abs(rx) <= half and abs(ry) <= half
            deck_z = dm.deck_surface_height(ship, deck, (self.vehicle.x, self.vehicle.y),
                                            s.deck_height)
            if over_deck and self.vehicle.z <= deck_z:
                if mode == md.FlightMode.VERTICAL_LANDING:
                    terminal = "landed"
                    landed_time = self.t
                    dpose = dm.deck_pose_world(ship, deck, s.deck_height)
                    off = np.array([self.vehicle.x, self.vehicle.y, self.vehicle.z]) - dpose.position
                    h = math.radians(ship.heading)
                    touchdown_offset = (off[0] * math.cos(h) + off[1] * math.sin(h),
                                        -off[0] * math.sin(h) + off[1] * math.cos(h))
                    touchdown_attitude = (deck.roll, deck.pitch)
                else:
                    terminal = "abort"
                break
            if self.vehicle.z <= 0.0:
                terminal = "crash"
                break

        return EpisodeLog(
            seed=cfg.seed,
            t=np.array(rows["t"]),
            mode=np.array(rows["mode"], dtype=int),
            commands=np.array(rows["cmd"]),
            vehicle=np.array(rows["veh"]),
            ship=np.array(rows["ship"]),
            deck=np.array(rows["deck"]),
            estimate=np.array(rows["est"]),
            mode_transitions=tuple(transitions),
            terminal=terminal,
            touchdown_offset=touchdown_offset,
            touchdown_deck_attitude=touchdown_attitude,
            landed_time=landed_time,
        )


def run_episode(cfg: EpisodeConfig, log_every: int = 5) -> EpisodeLog:
    """Run one deterministic closed-loop episode."""
    return _Episode(cfg).run(log_every=log_every)


# --------------------------------------------------------------------------
# Monte Carlo


@dataclass(frozen=True)
class MonteCarloSummary:
    n: int
    landed: int
    success_rate: float
    touchdown_offsets: np.ndarray          # (landed, 2) deck-frame meters
    within_threshold: int
    offset_percentiles: dict               # radial offset percentiles, m
    deck_roll_range: tuple[float, float]
    deck_pitch_range: tuple[float, float]
    terminals: tuple
    logs: tuple = field(default=(), repr=False)


DEFAULT_RANDOMIZED = ("initial_position", "motion_phase")


def _randomize(cfg: EpisodeConfig, rng: np.random.Generator, fields_: tuple) -> EpisodeConfig:
    out = cfg
    if "initial_position" in fields_:
        sx, sy = cfg.path.start
        h = math.radians(cfg.path.heading_deg)
        rng_m = rng.uniform(30.0, 60.0)
        bearing = h + math.pi + rng.uniform(-0.35, 0.35)
        alt = rng.uniform(2.0, 5.0)
        pos = (sx + rng_m * math.cos(bearing), sy + rng_m * math.sin(bearing), alt)
        heading = math.degrees(math.atan2(sy - pos[1], sx - pos[0])) + rng.uniform(-5.0, 5.0)
        out = replace(out, sim=replace(out.sim, initial_position=pos,
                                       initial_heading_deg=heading))
    if "motion_phase" in fields_:
        out = replace(out, motion=replace(
            out.motion,
            roll_phase_deg=rng.uniform(0.0, 360.0),
            pitch_phase_deg=rng.uniform(0.0, 360.0),
            multisine_phase_deg=rng.uniform(0.0, 360.0),
        ))
    return out


def run_monte_carlo(cfg_template: EpisodeConfig, n: int,
                    randomized: tuple = DEFAULT_RANDOMIZED,
                    keep_logs: bool = True, log_every: int = 10) -> MonteCarloSummary:
    """Run n seeded episodes with randomized starts and summarize the landings."""
    if n < 1:
        raise ValueError("n must be >= 1")
    logs = []
    for i in range(n):
        seed_seq = np.random.SeedSequence([cfg_template.seed, i])
        rng = np.random.default_rng(seed_seq)
        episode_cfg = _randomize(cfg_template, rng, randomized)
        episode_cfg = episode_cfg.with_seed(int(seed_seq.generate_state(1)[0]))
        logs.append(run_episode(episode_cfg, log_every=log_every))
    landed = [lg for lg in logs if lg.landed]
    offsets = np.array([lg.touchdown_offset for lg in landed]) if landed else np.zeros((0, 2))
    radii = np.hypot(offsets[:, 0], offsets[:, 1]) if len(offsets) else np.array([])
    within = int(np.sum((np.abs(offsets) <= ctl.LANDING_THRESHOLD).all(axis=1))) if len(offsets) else 0
    rolls = [lg.touchdown_deck_attitude[0] for lg in landed]
    pitches = [lg.touchdown_deck_attitude[1] for lg in landed]
    percentiles = {}
    if len(radii):
        for p in (50, 90, 100):
            percentiles[str(p)] = float(np.percentile(radii, p))
    return MonteCarloSummary(
        n=n, landed=len(landed), success_rate=len(landed) / n,
        touchdown_offsets=offsets, within_threshold=within,
        offset_percentiles=percentiles,
        deck_roll_range=(min(rolls), max(rolls)) if rolls else (0.0, 0.0),
        deck_pitch_range=(min(pitches), max(pitches)) if pitches else (0.0, 0.0),
        terminals=tuple(lg.terminal for lg in logs),
        logs=tuple(logs) if keep_logs else (),
    )


# --------------------------------------------------------------------------
# Shared single-axis test plant (controller comparison experiments)


def run_lateral_plant(controller, *, dt: float = 0.5, duration: float = 120.0,
                      range_m: float = 20.0, v_max: float = 5.0, tau: float = 0.3,
                      delay_steps: int = 1, initial_error_px: float = 300.0,
                      focal: float = 930.0) -> np.ndarray:
    """Discrete lateral-tracking plant with measurement delay and saturation.

    ``controller`` maps a pixel error to a percent command (positive command
    moves the vehicle toward positive error). Returns the pixel-error series
    at each update instant.
    """
    scale = focal / range_m              # px per meter of lateral offset
    y = initial_error_px / scale         # m, target offset to the vehicle's right
    vel = 0.0
    history = deque([initial_error_px] * (delay_steps + 1), maxlen=delay_steps + 1)
    errors = []
    steps = int(round(duration / dt))
    alpha = 1.0 - math.exp(-dt / tau)
    for _ in range(steps):
        e = scale * y
        errors.append(e)
        history.append(e)
        u = ctl.saturate(controller(history[0]))
        vel += ((u / 100.0) * v_max - vel) * alpha
        y -= vel * dt
    return np.array(errors)
