"""Exponential long-range law and probabilistic PID."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shiplanding import control as ctl
from shiplanding.errors import NonPositiveDt


class TestSaturate:
    def test_passthrough_and_clipping(self):
        assert ctl.saturate(42.0) == 42.0
        assert ctl.saturate(150.0) == 100.0
        assert ctl.saturate(-150.0) == -100.0

    @settings(max_examples=50, deadline=None)
    @given(st.floats(min_value=-1e6, max_value=1e6))
    def test_always_bounded(self, u):
        assert -100.0 <= ctl.saturate(u) <= 100.0


class TestExpControl:
    def test_zero_error_gives_zero(self):
        for gains in ctl.SHIP_TRACKING_GAINS.values():
            assert ctl.exp_control(gains.c, gains) == 0.0

    def test_roll_example_small_error(self):
        # m=1.2, a=0.0158, d=1, e=+-10 -> +-1.2*(exp(0.158)-1)*10
        gains = ctl.SHIP_TRACKING_GAINS["roll"]
        expected = 1.2 * (math.exp(0.158) - 1.0) * 10.0
        assert ctl.exp_control(gains.c + 10.0, gains) == pytest.approx(expected, rel=1e-12)
        assert ctl.exp_control(gains.c - 10.0, gains) == pytest.approx(-expected, rel=1e-12)
        assert expected == pytest.approx(2.054, abs=2e-3)

    def test_pitch_is_pure_linear_proportional(self):
        # m=0.008, a=0, d=0: u = m*e exactly (area errors in px^2)
        gains = ctl.SHIP_TRACKING_GAINS["pitch"]
        assert ctl.exp_control(gains.c - 2500.0, gains) == pytest.approx(-20.0)

    def test_large_error_saturates(self):
        gains = ctl.SHIP_TRACKING_GAINS["roll"]
        assert ctl.exp_control(gains.c + 200.0, gains) == 100.0
        assert ctl.exp_control(gains.c - 200.0, gains) == -100.0

    def test_literal_form_is_not_odd_symmetric(self):
        gains = ctl.SHIP_TRACKING_GAINS["roll"]
        pos = ctl.exp_control(gains.c + 50.0, gains, literal_paper_form=True)
        neg = ctl.exp_control(gains.c - 50.0, gains, literal_paper_form=True)
        assert pos != pytest.approx(-neg)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(min_value=0.1, max_value=500.0))
    def test_default_form_is_odd(self, e):
        gains = ctl.SHIP_TRACKING_GAINS["roll"]
        assert ctl.exp_control(gains.c + e, gains) == pytest.approx(
            -ctl.exp_control(gains.c - e, gains), rel=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(min_value=0.0, max_value=200.0), st.floats(min_value=0.0, max_value=200.0))
    def test_monotone_in_error_magnitude(self, e1, e2):
        gains = ctl.SHIP_TRACKING_GAINS["roll"]
        lo, hi = sorted([e1, e2])
        assert ctl.exp_control(gains.c + lo, gains) <= ctl.exp_control(gains.c + hi, gains)

    def test_rejects_negative_m(self):
        with pytest.raises(ValueError):
            ctl.ExpGainSet(m=-1.0, a=0.0, c=0.0, d=0.0)


class TestGaussianDerivativeGain:
    def test_peak_at_mu(self):
        gains = ctl.CORNER_TRACKING_GAINS["pitch"]  # mu=0.02, b=4.5, sigma=0.04
        assert ctl.gaussian_derivative_gain(gains.mu, gains) == pytest.approx(gains.b)

    def test_spike_rejection_ratio(self):
        gains = ctl.CORNER_TRACKING_GAINS["roll"]  # b=8.5, sigma=0.04, mu=0
        gain = ctl.gaussian_derivative_gain(0.2, gains)
        assert gain / gains.b == pytest.approx(math.exp(-12.5), rel=1e-12)

    def test_symmetric_around_mu(self):
        gains = ctl.CORNER_TRACKING_GAINS["heave"]
        left = ctl.gaussian_derivative_gain(gains.mu - 0.01, gains)
        right = ctl.gaussian_derivative_gain(gains.mu + 0.01, gains)
        assert left == pytest.approx(right)


class TestProbPidStep:
    def test_pure_proportional_first_step_from_rest(self):
        gains = ctl.ProbPidGainSet(kp=2.0, ki=0.0, b=0.0, mu=0.0, sigma=1.0)
        u, state = ctl.prob_pid_step(ctl.PidChannelState(), e=3.0, dt=0.1, gains=gains)
        assert u == pytest.approx(2.0 * 3.0)
        assert state.previous_error == 3.0

    def test_integral_accumulates(self):
        gains = ctl.ProbPidGainSet(kp=0.0, ki=1.0, b=0.0, mu=0.0, sigma=1.0)
        state = ctl.PidChannelState()
        u1, state = ctl.prob_pid_step(state, e=1.0, dt=1.0, gains=gains)
        u2, state = ctl.prob_pid_step(state, e=1.0, dt=1.0, gains=gains)
        assert u2 == pytest.approx(u1 + 1.0)

    def test_integral_clamped_to_half_scale(self):
        gains = ctl.ProbPidGainSet(kp=0.0, ki=0.5, b=0.0, mu=0.0, sigma=1.0)
        state = ctl.PidChannelState()
        for _ in range(10000):
            u, state = ctl.prob_pid_step(state, e=10.0, dt=1.0, gains=gains)
        assert gains.ki * state.integral == pytest.approx(
            ctl.INTEGRAL_CLAMP_FRACTION * ctl.COMMAND_LIMIT)

    def test_derivative_term_uses_gaussian_gain(self):
        gains = ctl.ProbPidGainSet(kp=0.0, ki=0.0, b=5.0, mu=0.0, sigma=0.04)
        tiny, _ = ctl.prob_pid_step(ctl.PidChannelState(), e=0.01, dt=0.03, gains=gains)
        spike, _ = ctl.prob_pid_step(ctl.PidChannelState(), e=0.2, dt=0.03, gains=gains)
        expected_tiny = ctl.gaussian_derivative_gain(0.01, gains) * 0.01 / 0.03
        assert tiny == pytest.approx(expected_tiny)
        # the spike's derivative term collapses despite the 20x larger jump
        assert abs(spike) < abs(tiny)

    def test_rejects_non_positive_dt(self):
        gains = ctl.CORNER_TRACKING_GAINS["roll"]
        with pytest.raises(NonPositiveDt):
            ctl.prob_pid_step(ctl.PidChannelState(), e=1.0, dt=0.0, gains=gains)

    def test_output_saturated(self):
        gains = ctl.ProbPidGainSet(kp=1000.0, ki=0.0, b=0.0, mu=0.0, sigma=1.0)
        u, _ = ctl.prob_pid_step(ctl.PidChannelState(), e=10.0, dt=0.1, gains=gains)
        assert u == 100.0


class TestControlVector:
    def test_fields_saturated_on_construction(self):
        v = ctl.ControlVector(pitch=300.0, roll=-300.0, heave=12.0, yaw=0.0)
        assert v.as_tuple() == (100.0, -100.0, 12.0, 0.0)

    def test_default_is_neutral(self):
        assert ctl.ControlVector().as_tuple() == (0.0, 0.0, 0.0, 0.0)


class TestLandingTrigger:
    class _Rel:
        def __init__(self, x, y):
            self.x, self.y = x, y

    def test_box_is_inclusive(self):
        assert ctl.landing_trigger(self._Rel(0.35, -0.35))
        assert ctl.landing_trigger(self._Rel(0.0, 0.0))
        assert not ctl.landing_trigger(self._Rel(0.351, 0.0))
        assert not ctl.landing_trigger(self._Rel(0.0, -0.36))
