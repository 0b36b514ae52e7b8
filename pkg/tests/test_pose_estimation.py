"""PnP solver, relative-state conversion, and the scalar yaw filter."""

import math

import numpy as np
import pytest

from shiplanding import pose_estimation as pe
from shiplanding.errors import (
    DegenerateConfiguration,
    NonPositiveDt,
    NotConverged,
    TooFewPoints,
)
from shiplanding.geometry import CameraModel, CueSpec, Pose, project_points

from conftest import look_at_pose, wide_scene


class TestJacobian:
    def test_matches_central_differences(self, camera):
        obj = CueSpec().corners_local()
        rng = np.random.default_rng(1)
        for _ in range(5):
            cam_pose = wide_scene(rng)
            if cam_pose is None:
                continue
            pose = cam_pose.inverse()
            rot, t = pose.matrix, pose.position
            analytic = pe.reprojection_jacobian(rot, t, obj, camera)
            eps = 1e-6
            numeric = np.zeros_like(analytic)
            for j in range(6):
                d = np.zeros(6)
                d[j] = eps
                rp = pe._rotvec_matrix(d[:3]) @ rot
                rm = pe._rotvec_matrix(-d[:3]) @ rot
                fp = pe.reprojection_residual(rp, t + d[3:], obj, np.zeros((8, 2)), camera)
                fm = pe.reprojection_residual(rm, t - d[3:], obj, np.zeros((8, 2)), camera)
                numeric[:, j] = (fp - fm) / (2 * eps)
            assert np.allclose(analytic, numeric, atol=1e-4)


class TestSolvePnp:
    def test_exact_recovery(self, camera):
        obj = CueSpec().corners_local()
        cam_pose = look_at_pose((0.5, -0.3, 3.0), up_yaw_deg=15.0)
        uv = project_points(cam_pose, camera, obj)
        result = pe.solve_pnp(uv, obj, camera)
        truth = cam_pose.inverse()
        assert result.converged
        assert np.linalg.norm(result.pose.position - truth.position) < 1e-6
        assert np.allclose(result.pose.matrix, truth.matrix, atol=1e-6)
        assert result.residual_rms < 1e-6

    def test_initial_guess_shortens_iterations(self, camera):
        obj = CueSpec().corners_local()
        cam_pose = look_at_pose((0.2, 0.1, 2.5))
        uv = project_points(cam_pose, camera, obj)
        cold = pe.solve_pnp(uv, obj, camera)
        warm = pe.solve_pnp(uv, obj, camera, initial_guess=cold.pose)
        assert warm.iterations <= cold.iterations

    def test_too_few_points(self, camera):
        obj = CueSpec().corners_local()[:3]
        with pytest.raises(TooFewPoints):
            pe.solve_pnp(np.zeros((3, 2)), obj, camera)

    def test_collinear_points_rejected(self, camera):
        obj = np.array([[i, 0.0, 0.0] for i in range(5)], dtype=float)
        with pytest.raises(DegenerateConfiguration):
            pe.solve_pnp(np.zeros((5, 2)), obj, camera)

    def test_iteration_budget_enforced(self, camera):
        obj = CueSpec().corners_local()
        cam_pose = look_at_pose((0.0, 0.2, 2.0))
        uv = project_points(cam_pose, camera, obj)
        noisy = uv + np.random.default_rng(0).normal(0, 3.0, uv.shape)
        with pytest.raises(NotConverged):
            pe.solve_pnp(noisy, obj, camera, max_iterations=1)


class TestRelativeState:
    def test_camera_straight_down_reads_height(self, camera):
        obj = CueSpec().corners_local()
        cam_pose = look_at_pose((0.0, 0.0, 4.0))
        uv = project_points(cam_pose, camera, obj)
        pnp = pe.solve_pnp(uv, obj, camera)
        rel = pe.pose_to_relative_state(pnp, gimbal_pitch_deg=-90.0)
        assert rel.x == pytest.approx(0.0, abs=1e-6)
        assert rel.y == pytest.approx(0.0, abs=1e-6)
        assert rel.z == pytest.approx(4.0, abs=1e-6)

    def test_pad_offset_shifts_reported_center(self, camera):
        obj = CueSpec().corners_local()
        cam_pose = look_at_pose((0.0, 0.0, 4.0))
        uv = project_points(cam_pose, camera, obj)
        pnp = pe.solve_pnp(uv, obj, camera)
        rel = pe.pose_to_relative_state(pnp, gimbal_pitch_deg=-90.0,
                                        pad_offset_cue=(0.5, 0.0, 0.0))
        assert math.hypot(rel.x, rel.y) == pytest.approx(0.5, abs=1e-6)

    def test_velocity_finite_difference(self, camera):
        obj = CueSpec().corners_local()
        pnp_a = pe.solve_pnp(project_points(look_at_pose((0.0, 0.0, 4.0)), camera, obj),
                             obj, camera)
        rel_a = pe.pose_to_relative_state(pnp_a, gimbal_pitch_deg=-90.0)
        cam_b = look_at_pose((0.2, 0.0, 4.0), target=(0.2, 0.0, 0.0))
        pnp_b = pe.solve_pnp(project_points(cam_b, camera, obj), obj, camera)
        rel_b = pe.pose_to_relative_state(pnp_b, previous=rel_a, dt=0.1,
                                          gimbal_pitch_deg=-90.0)
        # the vehicle moved +0.2 m, so the pad appears to move -0.2 m in 0.1 s
        assert rel_b.v_x == pytest.approx(-2.0, abs=1e-4)

    def test_requires_positive_dt_with_previous(self, camera):
        obj = CueSpec().corners_local()
        pnp = pe.solve_pnp(project_points(look_at_pose((0.0, 0.0, 4.0)), camera, obj),
                           obj, camera)
        rel = pe.pose_to_relative_state(pnp, gimbal_pitch_deg=-90.0)
        with pytest.raises(NonPositiveDt):
            pe.pose_to_relative_state(pnp, previous=rel, dt=0.0, gimbal_pitch_deg=-90.0)


class TestKalman:
    def test_steady_state_matches_published_values(self):
        gain, cov = pe.kalman_steady_state()
        assert gain == pytest.approx(0.2702, abs=1e-3)
        assert cov == pytest.approx(0.01351, abs=1e-4)

    def test_steady_state_is_a_fixed_point_of_the_recursion(self):
        gain, cov = pe.kalman_steady_state()
        state = pe.KalmanState(ce=0.0, p=cov)
        nxt = pe.kalman_update(state, 0.0)
        assert nxt.p == pytest.approx(cov, rel=1e-12)
        assert nxt.kg == pytest.approx(gain, rel=1e-12)

    def test_covariance_converges_from_any_start(self):
        _, cov = pe.kalman_steady_state()
        for p0 in (1e-4, 1.0, 100.0):
            state = pe.KalmanState(ce=0.0, p=p0)
            for _ in range(200):
                state = pe.kalman_update(state, 0.0)
            assert state.p == pytest.approx(cov, rel=1e-9)

    def test_filter_attenuates_white_noise(self):
        rng = np.random.default_rng(3)
        meas = 2.0 + rng.normal(0.0, 1.0, 3000)
        state = pe.KalmanState(ce=meas[0])
        out = []
        for cm in meas:
            state = pe.kalman_update(state, cm)
            out.append(state.ce)
        assert np.var(out[100:]) <= 0.5 * np.var(meas[100:])
        assert np.mean(out[-500:]) == pytest.approx(2.0, abs=0.2)

    def test_gain_stays_in_unit_interval(self):
        state = pe.KalmanState()
        for _ in range(50):
            state = pe.kalman_update(state, 1.0)
            assert 0.0 < state.kg < 1.0
            assert state.p > 0.0

    def test_literal_form_differs(self):
        state = pe.KalmanState(ce=1.0, p=0.5)
        standard = pe.kalman_update(state, 1.0)
        literal = pe.kalman_update(state, 1.0, literal_paper_form=True)
        # with ce = cm = 1 the innovation form leaves the estimate unchanged,
        # the uncorrected form inflates it
        assert standard.ce == pytest.approx(1.0)
        assert literal.ce > 1.0

    def test_rejects_non_positive_parameters(self):
        with pytest.raises(ValueError):
            pe.KalmanState(p=0.0)
        with pytest.raises(ValueError):
            pe.KalmanState(r=-1.0)
