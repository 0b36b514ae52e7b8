"""Reference frames, rigid transforms, pinhole projection, and the visual cue model.

Conventions used everywhere in this package:

* World frame: x/y horizontal, z up. Heading is measured about +z from the
  world x axis, counter-clockwise, in degrees.
* Euler angles are intrinsic Z-Y-X (yaw, pitch, roll), in degrees.
* Camera frame: OpenCV convention, x right, y down, z along the optical axis.
* Cue (bar) frame: the planar cue lies in its local z=0 plane. Local +x points
  along the bar's heading ("far" axis as seen by an approaching camera),
  local +y points to the approaching viewer's left.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation

from .errors import NonPositiveDepth


def _as_vec3(v) -> np.ndarray:
    a = np.asarray(v, dtype=float).reshape(3)
    a.setflags(write=False)
    return a


class Pose:
    """Rigid transform mapping local coordinates into the world frame. Immutable."""

    __slots__ = ("position", "quat")

    def __init__(self, position=(0.0, 0.0, 0.0), quat=(0.0, 0.0, 0.0, 1.0)):
        q = np.asarray(quat, dtype=float).reshape(4)
        q = q / np.linalg.norm(q)
        q.setflags(write=False)
        object.__setattr__(self, "position", _as_vec3(position))
        object.__setattr__(self, "quat", q)

    def __setattr__(self, name, value):
        raise AttributeError("Pose is immutable")

    def __repr__(self):
        yaw, pitch, roll = self.euler_deg()
        return (
            f"Pose(position={np.array2string(self.position, precision=4)}, "
            f"ypr=({yaw:.3f}, {pitch:.3f}, {roll:.3f}) deg)"
        )

    @classmethod
    def identity(cls) -> "Pose":
        return cls()

    @classmethod
    def from_euler_deg(cls, position, yaw: float, pitch: float = 0.0, roll: float = 0.0) -> "Pose":
        q = Rotation.from_euler("ZYX", [yaw, pitch, roll], degrees=True).as_quat()
        return cls(position, q)

    @classmethod
    def from_matrix(cls, rotation: np.ndarray, position) -> "Pose":
        return cls(position, Rotation.from_matrix(rotation).as_quat())

    @property
    def rotation(self) -> Rotation:
        return Rotation.from_quat(self.quat)

    @property
    def matrix(self) -> np.ndarray:
        return self.rotation.as_matrix()

    def euler_deg(self) -> tuple[float, float, float]:
        """(yaw, pitch, roll) in degrees."""
        yaw, pitch, roll = self.rotation.as_euler("ZYX", degrees=True)
        return float(yaw), float(pitch), float(roll)

    def transform(self, points: np.ndarray) -> np.ndarray:
        """Map local points (..., 3) into the world frame."""
        pts = np.asarray(points, dtype=float)
        return pts @ self.matrix.T + self.position

    def inverse(self) -> "Pose":
        rinv = self.rotation.inv()
        return Pose(-rinv.apply(self.position), rinv.as_quat())


def compose(a: Pose, b: Pose) -> Pose:
    """Transform applying ``b`` then ``a`` (world = a ∘ b ∘ local)."""
    r = a.rotation * b.rotation
    t = a.rotation.apply(b.position) + a.position
    return Pose(t, r.as_quat())


@dataclass(frozen=True)
class CameraModel:
    """Ideal pinhole camera; no lens distortion."""

    focal_length: float = 930.0
    principal_point: tuple[float, float] = (640.0, 360.0)
    resolution: tuple[int, int] = (1280, 720)

    def __post_init__(self):
        if self.focal_length <= 0:
            raise ValueError("focal_length must be positive")
        u0, v0 = self.principal_point
        w, h = self.resolution
        if not (0 <= u0 < w and 0 <= v0 < h):
            raise ValueError("principal point must lie inside the image")

    def contains(self, pixel) -> bool:
        u, v = pixel
        w, h = self.resolution
        return 0 <= u < w and 0 <= v < h


Pixel = tuple[float, float]


def project_point(camera_pose_in_world: Pose, camera: CameraModel, point) -> Pixel:
    """Pinhole projection of a world point; may land outside the image bounds."""
    p_cam = camera_pose_in_world.rotation.inv().apply(
        np.asarray(point, dtype=float) - camera_pose_in_world.position
    )
    depth = p_cam[2]
    if depth <= 0.0:
        raise NonPositiveDepth(f"point depth {depth:.6g} m is not positive")
    u0, v0 = camera.principal_point
    u = u0 + camera.focal_length * p_cam[0] / depth
    v = v0 + camera.focal_length * p_cam[1] / depth
    return (float(u), float(v))


def project_points(camera_pose_in_world: Pose, camera: CameraModel, points: np.ndarray) -> np.ndarray:
    """Vectorized projection of (n, 3) world points to (n, 2) pixels."""
    pts = np.asarray(points, dtype=float)
    p_cam = (pts - camera_pose_in_world.position) @ camera_pose_in_world.matrix
    depth = p_cam[:, 2]
    if np.any(depth <= 0.0):
        raise NonPositiveDepth("one or more points at or behind the camera plane")
    u0, v0 = camera.principal_point
    uv = camera.focal_length * p_cam[:, :2] / depth[:, None]
    return uv + np.array([u0, v0])


def camera_pose(position, heading_deg: float, pitch_deg: float = 0.0) -> Pose:
    """Pose of a gimbal camera: roll-free, heading about +z, pitch below horizon negative.

    With pitch 0 the optical axis is horizontal along the heading; pitch -90
    looks straight down.
    """
    psi = np.radians(heading_deg)
    th = np.radians(pitch_deg)
    forward = np.array([np.cos(th) * np.cos(psi), np.cos(th) * np.sin(psi), np.sin(th)])
    right = np.array([np.sin(psi), -np.cos(psi), 0.0])
    down = np.cross(forward, right)
    rot = np.column_stack([right, down, forward])  # camera x, y, z axes in world
    return Pose.from_matrix(rot, position)


@dataclass(frozen=True)
class CueSpec:
    """Two congruent rectangles separated along the cue's local y axis.

    Planar corner coordinates are (x, y) pairs in the cue plane: x is the
    bar's "far" axis, y the lateral axis (viewer's left positive). ``gap`` is
    measured between the rectangles' inner edges.
    """

    rectangle_width: float = 0.40
    rectangle_height: float = 0.10
    gap: float = 0.30

    def __post_init__(self):
        if min(self.rectangle_width, self.rectangle_height, self.gap) <= 0:
            raise ValueError("cue dimensions must be positive")

    def corners_planar(self) -> np.ndarray:
        """(8, 2) corners: left rectangle TL, TR, BR, BL, then right rectangle."""
        w, h, g = self.rectangle_width, self.rectangle_height, self.gap
        left = [
            (h / 2, g / 2 + w),
            (h / 2, g / 2),
            (-h / 2, g / 2),
            (-h / 2, g / 2 + w),
        ]
        right = [
            (h / 2, -g / 2),
            (h / 2, -g / 2 - w),
            (-h / 2, -g / 2 - w),
            (-h / 2, -g / 2),
        ]
        return np.array(left + right, dtype=float)

    def corners_local(self) -> np.ndarray:
        """(8, 3) corners embedded in the cue frame at z=0."""
        planar = self.corners_planar()
        return np.hstack([planar, np.zeros((8, 1))])

    @property
    def span(self) -> tuple[float, float]:
        """Overall (lateral, longitudinal) extent of the pattern in meters."""
        return (2 * self.rectangle_width + self.gap, self.rectangle_height)

    @property
    def bounding_area(self) -> float:
        """Physical area of the pattern's bounding box, used by the detector range rule."""
        lat, lon = self.span
        return lat * lon


def cue_corners_world(spec: CueSpec, bar_pose: Pose) -> np.ndarray:
    """All eight cue corners in world coordinates, canonical order."""
    return bar_pose.transform(spec.corners_local())
