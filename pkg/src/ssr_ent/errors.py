"""
Exception hierarchy for ssr-ent.

Library code raises these; the command line layer turns them into exit code 2.
Transformation verdicts are reported values, never exceptions.
"""

from typing import Optional


class SsrEntError(Exception):
    """Base class for every error raised by ssr-ent."""


class LayoutError(SsrEntError):
    """Mode layouts that are inconsistent, overlapping or mismatched."""


class StateValidationError(SsrEntError):
    """A density operator violates Hermiticity, trace or positivity bounds."""


class NonHermitianError(StateValidationError):
    """Eigenvalue routines were handed a matrix that is not Hermitian."""


class EigenSolverError(SsrEntError):
    """The Jacobi sweeps did not converge."""


class MajorizationInputError(SsrEntError, ValueError):
    """Probability vectors with negative entries or mismatched totals."""


class ImpurityInSector(SsrEntError):
    """A sector projection is mixed where a pure one is required."""

    def __init__(self, message: str, purity: float):
        super().__init__(message)
        self.purity = purity


class CatalystSpecError(SsrEntError, ValueError):
    """Catalyst parameters outside their allowed ranges."""


class ConfigError(SsrEntError):
    """Unreadable configuration file or environment override."""


class StateFileError(SsrEntError):
    """A state file could not be parsed or validated."""

    def __init__(self, path: str, message: str, line: Optional[int] = None):
        self.path = path
        self.line = line
        self.message = message
        where = f"{path}:{line}" if line is not None else path
        super().__init__(f"{where}: {message}")
