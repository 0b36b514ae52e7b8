"""Exception types shared across the simulator."""


class NonPositiveDepth(ValueError):
    """Point is at or behind the camera plane."""


class NonPositiveDt(ValueError):
    """Time step must be strictly positive."""


class EmptyMask(ValueError):
    """Binary mask contains no foreground."""


class SingularWindow(ValueError):
    """Gradient structure matrix is rank-deficient (flat window)."""


class InsufficientRects(ValueError):
    """Corner refinement needs exactly two bounding rectangles."""


class ScreenReject(ValueError):
    """Corner set failed geometric screening.

    ``reason`` is 'length' or 'slope'.
    """

    def __init__(self, reason, detail=""):
        self.reason = reason
        super().__init__(f"corner screening failed ({reason}): {detail}")


class TooFewPoints(ValueError):
    """PnP needs at least four correspondences."""


class DegenerateConfiguration(ValueError):
    """PnP object points are collinear."""


class NotConverged(RuntimeError):
    """Iterative solver did not converge."""


class InconsistentMode(ValueError):
    """Flight mode demands a perception source that is missing."""


class ConfigInvalid(ValueError):
    """Episode configuration violates its invariants."""


class IoFailure(OSError):
    """Report writing failed."""
