"""Exception taxonomy shared by the library and the CLI.

The CLI maps these onto its exit codes, so new error paths should reuse
one of the classes below instead of raising bare ValueError.
"""


class AcnError(Exception):
    """Base class for all domain errors raised by this package."""


class ParseError(AcnError):
    """Malformed input file or vector string."""


class DimensionError(AcnError):
    """Input vector length does not match the neuron or configuration."""


class FeasibilityError(AcnError):
    """A weight set cannot be realized under the technology constraints."""

    def __init__(self, message: str, violations=None):
        super().__init__(message)
        self.violations = tuple(violations) if violations else ()


class CalibrationError(AcnError):
    """Energy calibration fixture is missing an anchor row or is degenerate."""
