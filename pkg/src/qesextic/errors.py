"""Exception hierarchy shared by the construction and verification code."""


class QESError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameters(QESError, ValueError):
    """Parameters outside the regime where the ansatz is defined."""


class PairingDefect(QESError):
    """The closed-form energy/state pairing failed the residual check."""


class RealAxisPole(QESError, ValueError):
    """A pole sits on (or too close to) the real axis."""

    def __init__(self, location, tol):
        self.location = complex(location)
        self.tol = tol
        super().__init__(
            f"pole at {self.location:.6g} has |Im r| <= {tol:g}; "
            "the log-derivative is singular on the real axis"
        )


class NonConvergence(QESError, RuntimeError):
    """An iterative solver stopped before reaching its tolerance."""

    def __init__(self, message, residual=float("nan")):
        self.residual = residual
        super().__init__(f"{message} (final residual {residual:.3e})")


class StepTooCoarse(QESError, RuntimeError):
    """Step-halving changed the result by more than the allowed margin."""

    def __init__(self, message, estimate):
        self.estimate = estimate
        super().__init__(f"{message} (step-halving shift {estimate:.3e})")
