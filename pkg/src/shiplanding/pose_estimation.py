"""Relative pose recovery from cue corners (iterative PnP) and yaw low-pass filtering.

PnP minimizes the sum of squared reprojection distances with a
Levenberg-Marquardt iteration seeded by a planar homography decomposition.
The yaw estimate is smoothed by a single-state Kalman filter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateConfiguration, NonPositiveDt, NotConverged, TooFewPoints
from .geometry import CameraModel, Pose, camera_pose

# --------------------------------------------------------------------------
# PnP


@dataclass(frozen=True)
class PnPResult:
    """Recovered cue-frame -> camera-frame transform with solver diagnostics."""

    pose: Pose
    residual_rms: float
    iterations: int
    converged: bool


def _normalized_points(image_points: np.ndarray, camera: CameraModel) -> np.ndarray:
    u0, v0 = camera.principal_point
    return (image_points - np.array([u0, v0])) / camera.focal_length


def _homography_dlt(obj_xy: np.ndarray, img_norm: np.ndarray) -> np.ndarray:
    n = len(obj_xy)
    a = np.zeros((2 * n, 9))
    for i, ((x, y), (u, v)) in enumerate(zip(obj_xy, img_norm)):
        a[2 * i] = [-x, -y, -1, 0, 0, 0, u * x, u * y, u]
        a[2 * i + 1] = [0, 0, 0, -x, -y, -1, v * x, v * y, v]
    _, _, vt = np.linalg.svd(a)
    return vt[-1].reshape(3, 3)


def _pose_from_homography(object_points: np.ndarray, image_points: np.ndarray,
                          camera: CameraModel) -> Pose:
    """Seed pose from a planar homography (object points must lie in z=0)."""
    img_norm = _normalized_points(image_points, camera)
    h = _homography_dlt(object_points[:, :2], img_norm)
    # Fix the sign so points end up in front of the camera.
    centroid = np.append(object_points[:, :2].mean(axis=0), 1.0)
    if (h @ centroid)[2] < 0:
        h = -h
    scale = 2.0 / (np.linalg.norm(h[:, 0]) + np.linalg.norm(h[:, 1]))
    r1 = h[:, 0] * scale
    r2 = h[:, 1] * scale
    t = h[:, 2] * scale
    r3 = np.cross(r1, r2)
    rot = np.column_stack([r1, r2, r3])
    u, _, vt = np.linalg.svd(rot)
    rot = u @ vt
    if np.linalg.det(rot) < 0:
        rot = u @ np.diag([1.0, 1.0, -1.0]) @ vt
    return Pose.from_matrix(rot, t)


def reprojection_residual(rotation: np.ndarray, translation: np.ndarray,
                          object_points: np.ndarray, image_points: np.ndarray,
                          camera: CameraModel) -> np.ndarray:
    """Stacked (2n,) pixel residuals: projected - observed."""
    p_cam = object_points @ rotation.T + translation
    z = p_cam[:, 2]
    u0, v0 = camera.principal_point
    proj = camera.focal_length * p_cam[:, :2] / z[:, None] + np.array([u0, v0])
    return (proj - image_points).ravel()


def reprojection_jacobian(rotation: np.ndarray, translation: np.ndarray,
                          object_points: np.ndarray, camera: CameraModel) -> np.ndarray:
    """Analytic Jacobian of the residual w.r.t. a left rotation increment and translation.

    Parameters are ordered (wx, wy, wz, tx, ty, tz) where the rotation update
    is R <- exp([w]x) R.
    """
    n = len(object_points)
    p_rot = object_points @ rotation.T       # the increment rotates R p, not t
    p_cam = p_rot + translation
    f = camera.focal_length
    jac = np.zeros((2 * n, 6))
    for i in range(n):
        x, y, z = p_cam[i]
        d_proj = np.array([[f / z, 0.0, -f * x / z ** 2],
                           [0.0, f / z, -f * y / z ** 2]])
        px, py, pz = p_rot[i]
        skew = np.array([[0.0, -pz, py],
                         [pz, 0.0, -px],
                         [-py, px, 0.0]])
        jac[2 * i:2 * i + 2, :3] = d_proj @ (-skew)
        jac[2 * i:2 * i + 2, 3:] = d_proj
    return jac


def _rotvec_matrix(w: np.ndarray) -> np.ndarray:
    angle = np.linalg.norm(w)
    if angle < 1e-14:
        return np.eye(3)
    axis = w / angle
    k = np.array([[0.0, -axis[2], axis[1]],
                  [axis[2], 0.0, -axis[0]],
                  [-axis[1], axis[0], 0.0]])
    return np.eye(3) + math.sin(angle) * k + (1 - math.cos(angle)) * (k @ k)


def solve_pnp(image_points, object_points, camera: CameraModel,
              initial_guess: Pose | None = None, max_iterations: int = 1000,
              step_tol: float = 1e-8, cost_tol: float = 1e-10) -> PnPResult:
    """Levenberg-Marquardt minimization of the squared reprojection error.

    Raises TooFewPoints for n < 4, DegenerateConfiguration for collinear
    object points, NotConverged if the iteration limit is hit.
    """
    img = np.asarray(image_points, dtype=float).reshape(-1, 2)
    obj = np.asarray(object_points, dtype=float).reshape(-1, 3)
    n = len(obj)
    if n < 4 or len(img) != n:
        raise TooFewPoints(f"need >= 4 correspondences, got {min(n, len(img))}")
    centered = obj - obj.mean(axis=0)
    if np.linalg.matrix_rank(centered, tol=1e-9) < 2:
        raise DegenerateConfiguration("object points are collinear")

    if initial_guess is not None:
        rot = initial_guess.matrix
        t = initial_guess.position.copy()
    else:
        seed = _pose_from_homography(obj, img, camera)
        rot, t = seed.matrix, seed.position.copy()

    res = reprojection_residual(rot, t, obj, img, camera)
    cost = float(res @ res)
    lam = 1e-3
    iterations = 0
    converged = False
    for iterations in range(1, max_iterations + 1):
        jac = reprojection_jacobian(rot, t, obj, camera)
        jtj = jac.T @ jac
        g = jac.T @ res
        try:
            step = np.linalg.solve(jtj + lam * np.diag(np.diag(jtj)) + 1e-15 * np.eye(6), -g)
        except np.linalg.LinAlgError:
            lam *= 10.0
            continue
        rot_new = _rotvec_matrix(step[:3]) @ rot
        t_new = t + step[3:]
        res_new = reprojection_residual(rot_new, t_new, obj, img, camera)
        cost_new = float(res_new @ res_new)
        if cost_new < cost:
            rel_drop = (cost - cost_new) / max(cost, 1e-300)
            rot, t, res, cost = rot_new, t_new, res_new, cost_new
            lam = max(lam / 10.0, 1e-12)
            if np.linalg.norm(step) < step_tol or rel_drop < cost_tol:
                converged = True
                break
        else:
            lam *= 10.0
            if lam > 1e12 or np.linalg.norm(step) < step_tol:
                converged = True  # stalled at a minimum the damping cannot improve
                break
    if not converged:
        raise NotConverged(f"PnP did not converge in {max_iterations} iterations")
    rms = math.sqrt(cost / n)
    return PnPResult(pose=Pose.from_matrix(rot, t), residual_rms=rms,
                     iterations=iterations, converged=True)


# --------------------------------------------------------------------------
# Relative state


@dataclass(frozen=True)
class RelativeState:
    """Vehicle-frame offsets to the pad center and relative heading.

    x forward (m), y rightward (m), z vehicle height above the pad plane (m),
    yaw relative heading (deg). Velocities are finite differences against the
    previous state.
    """

    x: float
    y: float
    z: float
    yaw: float
    v_x: float = 0.0
    v_y: float = 0.0
    timestamp: float = 0.0


def _wrap_deg(angle: float) -> float:
    return (angle + 180.0) % 360.0 - 180.0


def pose_to_relative_state(pnp: PnPResult, previous: RelativeState | None = None,
                           dt: float | None = None, gimbal_pitch_deg: float = 0.0,
                           gimbal_yaw_rel_deg: float = 0.0,
                           pad_offset_cue: tuple[float, float, float] = (0.0, 0.0, 0.0),
                           timestamp: float = 0.0) -> RelativeState:
    """Convert a PnP pose to vehicle-relative offsets of the pad center.

    The gimbal holds zero roll, so the camera-to-vehicle rotation is fully
    determined by the (encoder-known) gimbal pitch and the gimbal heading
    relative to the vehicle heading. ``pad_offset_cue`` is the known
    pad-center position in the cue frame.
    """
    if not pnp.converged:
        raise NotConverged("relative state requires a converged PnP result")
    if previous is not None and (dt is None or dt <= 0):
        raise NonPositiveDt("dt must be positive when a previous state is given")
    cam_in_level = camera_pose((0.0, 0.0, 0.0), heading_deg=gimbal_yaw_rel_deg,
                               pitch_deg=gimbal_pitch_deg)
    r_cue_to_level = cam_in_level.matrix @ pnp.pose.matrix
    pad_level = cam_in_level.matrix @ pnp.pose.position + r_cue_to_level @ np.asarray(pad_offset_cue, float)
    x = float(pad_level[0])
    y = float(-pad_level[1])   # vehicle-frame +y points left in world terms; report rightward
    z = float(-pad_level[2])   # pad below the vehicle is positive height
    yaw = _wrap_deg(math.degrees(math.atan2(r_cue_to_level[1, 0], r_cue_to_level[0, 0])))
    v_x = v_y = 0.0
    if previous is not None:
        v_x = (x - previous.x) / dt
        v_y = (y - previous.y) / dt
    return RelativeState(x=x, y=y, z=z, yaw=yaw, v_x=v_x, v_y=v_y, timestamp=timestamp)


# --------------------------------------------------------------------------
# Scalar Kalman filter

KALMAN_PROCESS_NOISE = 0.005
KALMAN_MEASUREMENT_NOISE = 0.05


@dataclass(frozen=True)
class KalmanState:
    """Single-state filter: estimate, covariance, and the last gain/prediction."""

    ce: float = 0.0                      # current estimate, deg
    p: float = 1.0                       # error covariance, deg^2
    q: float = KALMAN_PROCESS_NOISE      # process noise
    r: float = KALMAN_MEASUREMENT_NOISE  # measurement noise
    kg: float = 0.0                      # last computed gain
    pre: float = 0.0                     # last predicted covariance

    def __post_init__(self):
        if self.p <= 0 or self.q <= 0 or self.r <= 0:
            raise ValueError("p, q, r must be positive")


def kalman_update(state: KalmanState, cm: float, literal_paper_form: bool = False) -> KalmanState:
    """One measurement update in innovation form.

    ``literal_paper_form`` applies CE = PE + KG*CM without subtracting the
    previous estimate from the measurement; it exists only to reproduce the
    uncorrected textual update for comparison.
    """
    pre = state.p + state.q
    kg = pre / (pre + state.r)
    if literal_paper_form:
        ce = state.ce + kg * cm
    else:
        ce = state.ce + kg * (cm - state.ce)
    p = (1.0 - kg) * pre
    return replace(state, ce=ce, p=p, kg=kg, pre=pre)


def kalman_steady_state(q: float = KALMAN_PROCESS_NOISE,
                        r: float = KALMAN_MEASUREMENT_NOISE) -> tuple[float, float]:
    """Fixed point (gain, covariance) of the covariance recursion."""
    pre = 0.5 * (q + math.sqrt(q * q + 4.0 * q * r))
    kg = pre / (pre + r)
    return kg, (1.0 - kg) * pre
