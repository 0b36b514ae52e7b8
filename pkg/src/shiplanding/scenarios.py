"""Named demonstration scenarios used by the CLI and experiment scripts."""

from __future__ import annotations

from dataclasses import replace

from .config import EpisodeConfig, MotionConfig, PathConfig, SimConfig
from .errors import ConfigInvalid

SCENARIOS = ("longrange", "natops", "perry", "spath", "turn90")


def build_scenario(name: str, seed: int = 0) -> EpisodeConfig:
    """Build a ready-to-run episode configuration for a named scenario."""
    base = EpisodeConfig(seed=seed)
    if name == "natops":
        # stationary ship, prescribed deck motion, short astern approach
        return replace(base, motion=MotionConfig(kind="natops"),
                       path=PathConfig(kind="stationary"),
                       sim=replace(base.sim, initial_position=(-45.0, 6.0, 3.0)))
    if name == "perry":
        # frigate-like multi-sine deck motion including surge/sway/heave
        return replace(base, motion=MotionConfig(kind="multisine"),
                       path=PathConfig(kind="stationary"),
                       sim=replace(base.sim, initial_position=(-45.0, -8.0, 3.5)))
    if name == "longrange":
        # begin near the learned detector's range limit, calm deck
        return replace(base, motion=MotionConfig(kind="none"),
                       path=PathConfig(kind="stationary"),
                       sim=replace(base.sim, initial_position=(-240.0, 15.0, 6.0),
                                   initial_heading_deg=0.0))
    if name == "spath":
        # ship weaving along an s-pattern at moderate speed
        return replace(base, motion=MotionConfig(kind="none"),
                       path=PathConfig(kind="s_pattern", start=(0.0, 0.0),
                                       heading_deg=0.0,
                                       speed_schedule=((0.0, 1.2), (60.0, 1.2)),
                                       weave_amplitude_deg=35.0,
                                       weave_wavelength=60.0),
                       sim=replace(base.sim, initial_position=(-45.0, 0.0, 3.0),
                                   timeout=400.0))
    if name == "turn90":
        # ship runs straight, then turns through 90 degrees
        return replace(base, motion=MotionConfig(kind="none"),
                       path=PathConfig(kind="turn_90", start=(0.0, 0.0),
                                       heading_deg=0.0,
                                       speed_schedule=((0.0, 1.0), (60.0, 1.0)),
                                       turn_radius=15.0, lead_in=40.0),
                       sim=replace(base.sim, initial_position=(-40.0, 0.0, 3.0),
                                   timeout=400.0))
    raise ConfigInvalid(f"unknown scenario {name!r}; choose from {SCENARIOS}")
