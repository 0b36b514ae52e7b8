"""Five-mode supervisory state machine selecting perception source and controller.

Mode 1 vertical landing, 2 corner tracking, 3 bar tracking, 4 ship tracking,
5 hold-last. Upgrades (toward lower mode numbers) need consecutive
qualifying ticks; downgrades on staleness are immediate. Mode 1 is absorbing
until touchdown or an abort back to mode 2.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .control import ControlVector
from .errors import InconsistentMode
from .pose_estimation import RelativeState
from .vision import Detection

CORNER_PERIOD = 0.03   # s, nominal corner-pipeline cadence
ML_PERIOD = 0.5        # s, nominal learned-detector cadence
STALENESS_FACTOR = 2.0  # a source is fresh if its age <= factor * nominal period
ML_STALENESS = STALENESS_FACTOR * 2 * ML_PERIOD  # period + delivery latency
CORNER_STALENESS = STALENESS_FACTOR * 2 * CORNER_PERIOD

HOLD_TIMEOUT = 2.0       # s in mode 5 before falling back to hover
UPGRADE_TICKS = 3        # consecutive qualifying ticks before an upgrade
ABORT_HEIGHT = 0.5       # m over deck below which a lost track no longer aborts
DESCENT_COMMAND = -60.0  # heave percent during vertical landing


class FlightMode(enum.IntEnum):
    VERTICAL_LANDING = 1
    CORNER_TRACKING = 2
    BAR_TRACKING = 3
    SHIP_TRACKING = 4
    HOLD_LAST = 5


@dataclass(frozen=True)
class PerceptionSummary:
    """Everything the supervisor sees at one tick."""

    corner_state: RelativeState | None = None
    bar_detection: Detection | None = None
    ship_detection: Detection | None = None
    landing_condition: bool = False
    corner_age: float = float("inf")   # s since last corner-track update
    bar_age: float = float("inf")
    ship_age: float = float("inf")
    height_over_deck: float = float("inf")  # m, for the landing abort rule

    @property
    def corner_fresh(self) -> bool:
        return self.corner_state is not None and self.corner_age <= CORNER_STALENESS

    @property
    def bar_fresh(self) -> bool:
        return self.bar_detection is not None and self.bar_age <= ML_STALENESS

    @property
    def ship_fresh(self) -> bool:
        return self.ship_detection is not None and self.ship_age <= ML_STALENESS


def _qualifying_mode(p: PerceptionSummary) -> FlightMode:
    """Priority arbitration ignoring hysteresis. Bar outranks ship when both are fresh."""
    if p.landing_condition and p.corner_fresh:
        return FlightMode.VERTICAL_LANDING
    if p.corner_fresh:
        return FlightMode.CORNER_TRACKING
    if p.bar_fresh:
        return FlightMode.BAR_TRACKING
    if p.ship_fresh:
        return FlightMode.SHIP_TRACKING
    return FlightMode.HOLD_LAST


@dataclass
class ModeMachine:
    """Hysteresis-carrying supervisor; one instance per episode."""

    mode: FlightMode = FlightMode.HOLD_LAST
    upgrade_ticks: int = UPGRADE_TICKS
    _candidate: FlightMode | None = field(default=None, repr=False)
    _streak: int = field(default=0, repr=False)

    def step(self, p: PerceptionSummary) -> FlightMode:
        if self.mode == FlightMode.VERTICAL_LANDING:
            # Absorbing until touchdown; abort to corner tracking only when the
            # track is lost while still well above the deck.
            if not p.corner_fresh and p.height_over_deck > ABORT_HEIGHT:
                self.mode = FlightMode.CORNER_TRACKING
                self._candidate, self._streak = None, 0
            return self.mode
        target = _qualifying_mode(p)
        if target >= self.mode:
            # Same mode or a downgrade: apply immediately (safety-first).
            self.mode = target
            self._candidate, self._streak = None, 0
            return self.mode
        if target == self._candidate:
            self._streak += 1
        else:
            self._candidate, self._streak = target, 1
        if self._streak >= self.upgrade_ticks:
            self.mode = target
            self._candidate, self._streak = None, 0
        return self.mode


def step_mode(current: FlightMode, p: PerceptionSummary,
              machine: ModeMachine | None = None) -> FlightMode:
    """Advance one tick. Without an explicit machine, a fresh one at ``current`` is used."""
    if machine is None:
        machine = ModeMachine(mode=current)
    return machine.step(p)


def select_command(mode: FlightMode, p: PerceptionSummary, controllers,
                   last_command: ControlVector, hold_age: float = 0.0) -> ControlVector:
    """Produce the tick's command for the active mode.

    ``controllers`` must provide close_range(rel), long_range(detection, kind)
    and descend(); the harness wires those to the gain tables. ``hold_age`` is
    the time spent without any perception (mode 5 hover fallback after the
    hold timeout).
    """
    if mode == FlightMode.VERTICAL_LANDING:
        return controllers.descend(p.corner_state if p.corner_fresh else None)
    if mode == FlightMode.CORNER_TRACKING:
        if p.corner_state is None:
            raise InconsistentMode("corner tracking without a corner-track state")
        return controllers.close_range(p.corner_state)
    if mode == FlightMode.BAR_TRACKING:
        if p.bar_detection is None:
            raise InconsistentMode("bar tracking without a bar detection")
        return controllers.long_range(p.bar_detection, "bar")
    if mode == FlightMode.SHIP_TRACKING:
        if p.ship_detection is None:
            raise InconsistentMode("ship tracking without a ship detection")
        return controllers.long_range(p.ship_detection, "ship")
    if hold_age > HOLD_TIMEOUT:
        return ControlVector()  # hover: neutral commands hold altitude in the plant model
    return last_command
