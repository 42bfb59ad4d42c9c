class PdcSlitError(Exception):
    """Base class for all errors raised by this package."""


class ConvergenceFailure(PdcSlitError):
    """Grid refinement did not settle within the allowed number of rounds."""

    def __init__(self, what, rounds, previous, last):
        self.what = what
        self.rounds = rounds
        self.previous = previous
        self.last = last
        super().__init__(
            f"{what} did not converge after {rounds} rounds "
            f"(last two iterates: {previous!r}, {last!r})"
        )


class DegenerateGain(PdcSlitError):
    """Raised when a gain-dependent ratio is undefined (g = 0)."""


class InvalidForTypeII(PdcSlitError):
    """The antidiagonal visibility only exists for type I crystals."""


class ConfigError(PdcSlitError):
    """Invalid run configuration."""
