"""
Exception Hierarchy for the Trilinear Hawking Simulator

Library code raises these; only the command-line orchestrator catches them
and turns them into exit codes.
"""

from typing import Optional

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


class SimulationError(Exception):
    """Base class for every error raised by the simulator."""


class DomainError(SimulationError, ValueError):
    """Argument lies outside the domain of an operation."""


class CutoffError(SimulationError, ValueError):
    """Fock-space truncation is too small for the requested tolerance."""


class InvalidStateError(SimulationError, ValueError):
    """A state, distribution or density matrix violates its invariants."""


class NumericalError(SimulationError, ArithmeticError):
    """A numerical routine produced non-finite or unusable values."""


class IntegratorError(NumericalError):
    """Adaptive time stepping could not reach the requested tolerance."""


class ConfigError(SimulationError, ValueError):
    """Invalid scenario configuration; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


def exit_code_for(exc: Optional[BaseException]) -> int:
    """
    Map an exception to the command-line exit code.

    Args:
        exc: Exception raised by a run, or None on success

    Returns:
        0 on success, 2 for usage errors, 3 for numerical failures
    """
    if exc is None:
        return EXIT_OK
    if isinstance(exc, ConfigError):
        return EXIT_USAGE
    if isinstance(exc, SimulationError):
        return EXIT_NUMERICAL
    if isinstance(exc, (ValueError, FileNotFoundError)):
        return EXIT_USAGE
    return EXIT_NUMERICAL
