"""Long-range exponential controller, close-range probabilistic PID, and the landing trigger.

The long-range law decays its gain exponentially near zero error so a slow
(0.5 s) update loop does not overshoot the setpoint; the close-range PID
replaces the fixed derivative gain with a Gaussian of the error difference so
physically impossible jumps produce almost no derivative action.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import NonPositiveDt

COMMAND_LIMIT = 100.0
INTEGRAL_CLAMP_FRACTION = 0.5  # K_I * accumulator bounded to 50% of full scale


def saturate(u: float) -> float:
    """Clamp a raw command to [-100, 100] percent."""
    return min(max(u, -COMMAND_LIMIT), COMMAND_LIMIT)


@dataclass(frozen=True)
class ExpGainSet:
    """Constants (m, a, c, d) of the exponential long-range law; c is the setpoint."""

    m: float
    a: float
    c: float
    d: float

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("m must be non-negative")
        if not math.isfinite(self.c):
            raise ValueError("setpoint must be finite")


# Long-range constants per channel. Pitch errors are bounding-box areas in
# px^2; roll/heave errors are pixel offsets from the 720p image center.
SHIP_TRACKING_GAINS = {
    "pitch": ExpGainSet(m=0.008, a=0.0, c=5000.0, d=0.0),
    "roll": ExpGainSet(m=1.2, a=0.0158, c=640.0, d=1.0),
    "heave": ExpGainSet(m=3.0, a=0.0108, c=360.0, d=1.0),
}
BAR_TRACKING_GAINS = {
    "pitch": ExpGainSet(m=0.004, a=0.0, c=3400.0, d=0.0),
    "roll": ExpGainSet(m=1.0, a=0.0158, c=640.0, d=1.0),
    "heave": ExpGainSet(m=5.0, a=0.0108, c=360.0, d=1.0),
}

_EXP_ARG_LIMIT = 60.0  # exp argument cap; outputs beyond this saturate anyway


def exp_control(r: float, gains: ExpGainSet, literal_paper_form: bool = False) -> float:
    """Exponential nonlinear law: u = sign(e) * m * (exp(a|e|) - d) * |e|, saturated.

    The default form is odd-symmetric in the error. ``literal_paper_form``
    keeps the negative branch's exponent unreflected (-m(exp(a e) - d) e),
    which is not odd for a > 0; it exists for comparison only.
    """
    e = r - gains.c
    if literal_paper_form:
        arg = min(gains.a * e, _EXP_ARG_LIMIT)
        u = gains.m * (math.exp(arg) - gains.d) * e
        if e < 0:
            u = -u
    else:
        arg = min(gains.a * abs(e), _EXP_ARG_LIMIT)
        u = math.copysign(gains.m * (math.exp(arg) - gains.d) * abs(e), e) if e else 0.0
    return saturate(u)


@dataclass(frozen=True)
class ProbPidGainSet:
    """Proportional/integral gains plus the Gaussian derivative-gain parameters."""

    kp: float
    ki: float
    b: float
    mu: float
    sigma: float

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if min(self.kp, self.ki, self.b) < 0:
            raise ValueError("kp, ki, b must be non-negative")


# Close-range corner-tracking gains. Pitch/roll/heave errors in meters,
# yaw error in degrees.
CORNER_TRACKING_GAINS = {
    "pitch": ProbPidGainSet(kp=7.5, ki=0.05, b=4.5, mu=0.02, sigma=0.04),
    "roll": ProbPidGainSet(kp=7.5, ki=0.01, b=8.5, mu=0.0, sigma=0.04),
    "heave": ProbPidGainSet(kp=15.0, ki=0.01, b=7.0, mu=0.0, sigma=0.02),
    "yaw": ProbPidGainSet(kp=5.5, ki=0.05, b=1.75, mu=0.0, sigma=5.0),
}


def gaussian_derivative_gain(de: float, gains: ProbPidGainSet) -> float:
    """K_D = b * exp(-0.5 ((de - mu) / sigma)^2): vanishes for implausible jumps."""
    z = (de - gains.mu) / gains.sigma
    return gains.b * math.exp(-0.5 * z * z)


@dataclass(frozen=True)
class PidChannelState:
    """Explicit per-channel controller memory."""

    previous_error: float = 0.0
    integral: float = 0.0
    last_time: float | None = None


def prob_pid_step(state: PidChannelState, e: float, dt: float,
                  gains: ProbPidGainSet) -> tuple[float, PidChannelState]:
    """One probabilistic-PID update; returns (command percent, new state)."""
    if dt <= 0:
        raise NonPositiveDt(f"dt={dt}")
    de = e - state.previous_error
    integral = state.integral + e * dt
    if gains.ki > 0:
        bound = INTEGRAL_CLAMP_FRACTION * COMMAND_LIMIT / gains.ki
        integral = min(max(integral, -bound), bound)
    kd = gaussian_derivative_gain(de, gains)
    u = gains.kp * e + gains.ki * integral + kd * de / dt
    last = state.last_time
    new_state = PidChannelState(
        previous_error=e,
        integral=integral,
        last_time=(last or 0.0) + dt if last is not None else dt,
    )
    return saturate(u), new_state


@dataclass(frozen=True)
class ControlVector:
    """Pitch/roll/heave/yaw commands in percent, saturated to [-100, 100].

    Sign conventions: pitch + is forward, roll + is rightward, heave + is up,
    yaw + is a counter-clockwise heading rate.
    """

    pitch: float = 0.0
    roll: float = 0.0
    heave: float = 0.0
    yaw: float = 0.0

    def __post_init__(self):
        for name in ("pitch", "roll", "heave", "yaw"):
            object.__setattr__(self, name, saturate(getattr(self, name)))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.pitch, self.roll, self.heave, self.yaw)


LANDING_THRESHOLD = 0.35  # m, half-side of the square landing box


def landing_trigger(rel) -> bool:
    """True iff the estimated pad-center offset is inside the 0.35 m square (inclusive)."""
    return abs(rel.x) <= LANDING_THRESHOLD and abs(rel.y) <= LANDING_THRESHOLD
