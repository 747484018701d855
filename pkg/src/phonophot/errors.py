"""Exception types shared across the simulator."""


class SpecError(ValueError):
    """A geometry or parameter record violates its invariants."""


class ShapeError(ValueError):
    """A state or field does not match the geometry it is used with."""


class IncommensurateError(ValueError):
    """A wavevector is not a reciprocal vector of the periodic box."""


class StabilityError(ValueError):
    """Time step outside the explicit scheme's stability bound."""

    def __init__(self, dt, bound, message=None):
        self.dt = dt
        self.bound = bound
        super().__init__(message or f"dt={dt!r} violates stability bound {bound!r}")


class ZeroModeError(ValueError):
    """The k = 0 mode has no oscillator spectrum."""


class SymmetryError(ValueError):
    """A mode spectrum lacks the conjugate symmetry of a real field."""


class NumericFailure(RuntimeError):
    """A run produced a non-finite value."""

    def __init__(self, step, message=None):
        self.step = step
        super().__init__(message or f"non-finite value at step {step}")


class ConfigError(ValueError):
    """One or more problems found while parsing a scenario config.

    ``issues`` holds ``(line, message)`` pairs; ``line`` is 0 when the
    problem is not tied to a single line (e.g. a missing section).
    """

    def __init__(self, issues):
        self.issues = list(issues)
        text = "; ".join(
            f"line {line}: {msg}" if line else msg for line, msg in self.issues
        )
        super().__init__(text)
