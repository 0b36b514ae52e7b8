"""Deterministic desk-scale simulator for vision-based autonomous ship landing."""

from .config import EpisodeConfig
from .geometry import CameraModel, CueSpec, Pose
from .scenarios import build_scenario
from .sim import EpisodeLog, MonteCarloSummary, run_episode, run_monte_carlo

__all__ = [
    "CameraModel",
    "CueSpec",
    "EpisodeConfig",
    "EpisodeLog",
    "MonteCarloSummary",
    "Pose",
    "build_scenario",
    "run_episode",
    "run_monte_carlo",
]

__version__ = "0.1.0"
