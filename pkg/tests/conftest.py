"""Shared scene builders for the vision and pose-estimation tests."""

import numpy as np
import pytest

from shiplanding.geometry import CameraModel, CueSpec, Pose

# One-line verdicts collected by the acceptance tests; echoed after the run
# so they survive output capture.
VERDICTS: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance verdicts")
        for line in VERDICTS:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def camera() -> CameraModel:
    return CameraModel()


@pytest.fixture(scope="session")
def cue() -> CueSpec:
    return CueSpec()


def look_at_pose(position, target=(0.0, 0.0, 0.0), up_yaw_deg: float = 0.0) -> Pose:
    """Camera pose at ``position`` with the optical axis through ``target``.

    ``up_yaw_deg`` rotates the image axes about the optical axis by picking
    the in-plane up hint; it fails for exactly sideways hints, so callers
    should keep the view direction away from the horizontal plane.
    """
    position = np.asarray(position, dtype=float)
    fwd = np.asarray(target, dtype=float) - position
    fwd = fwd / np.linalg.norm(fwd)
    hint = np.array([np.cos(np.radians(up_yaw_deg)), np.sin(np.radians(up_yaw_deg)), 0.0])
    right = np.cross(fwd, hint)
    norm = np.linalg.norm(right)
    if norm < 1e-9:
        raise ValueError("up hint is parallel to the view direction")
    right = right / norm
    return Pose.from_matrix(np.column_stack([right, np.cross(fwd, right), fwd]), position)


def overhead_scene(rng: np.random.Generator, dist_range=(2.0, 10.0),
                   elev_range=(78.0, 88.0), az_limit=20.0, yaw_limit=20.0) -> Pose:
    """Random descending-approach viewpoint of a cue centered at the origin."""
    dist = rng.uniform(*dist_range)
    elev = np.radians(rng.uniform(*elev_range))
    az = np.radians(rng.uniform(-az_limit, az_limit))
    yaw = rng.uniform(-yaw_limit, yaw_limit)
    pos = dist * np.array([
        np.cos(elev) * np.cos(az),
        np.cos(elev) * np.sin(az),
        np.sin(elev),
    ])
    return look_at_pose(pos, up_yaw_deg=yaw)


def wide_scene(rng: np.random.Generator, dist_range=(1.0, 5.0),
               elev_range=(60.0, 88.0)) -> Pose | None:
    """Random viewpoint over the full azimuth/roll envelope; None if degenerate."""
    dist = rng.uniform(*dist_range)
    elev = np.radians(rng.uniform(*elev_range))
    az = np.radians(rng.uniform(0.0, 360.0))
    yaw = rng.uniform(-180.0, 180.0)
    pos = dist * np.array([
        np.cos(elev) * np.cos(az),
        np.cos(elev) * np.sin(az),
        np.sin(elev),
    ])
    try:
        return look_at_pose(pos, up_yaw_deg=yaw)
    except ValueError:
        return None
