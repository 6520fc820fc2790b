"""
Exceptions raised by the directional Stockwell toolkit.

Every error carries a ``status_code`` and a ``detail`` message. The command line
front end turns them into process exit codes, the library callers can catch
the whole family through :class:`StockwellError`.

A brief overview of exported classes and their usage:
    raise InvalidInput("a_min must be positive")
        rejected user input, exit code 2

    raise NotReconstructionPair("|C| = 0 below 1e-12")
        windows whose admissibility constant vanishes, exit code 2

    raise VerificationFailed(report.detail_line())
        an identity harness exceeded its tolerance, exit code 1
"""


class StockwellError(Exception):
    """
    Base class of all toolkit errors.

    Attributes:
        status_code: Exit code used by the command line front end.
        prefix: Failure class printed in front of the detail.
        detail: Human readable description of the failure.
    """
    status_code: int = 2
    prefix: str = "Error"

    def __init__(self, detail: str):
        self.detail = f"{self.prefix}: {detail}"
        super().__init__(self.detail)


class InvalidInput(StockwellError):
    """Input rejected by validation."""
    prefix = "Invalid input"


class GridMismatch(InvalidInput):
    """Two sampled objects that must share a geometry do not."""
    prefix = "Grid mismatch"


class NyquistError(InvalidInput):
    """Requested frequencies lie outside the band resolved by a grid."""
    prefix = "Nyquist violation"


class CoverageError(InvalidInput):
    """A table or an axis does not cover the range an operation needs."""
    prefix = "Insufficient coverage"


class DerivativeOrderError(InvalidInput):
    """A derivative order exceeds the supported cap."""
    prefix = "Derivative order"


class NotAdmissible(InvalidInput):
    """Window fails the S1 flatness condition at xi = -1."""
    prefix = "Window not S1-admissible"


class NotReconstructionPair(StockwellError):
    """Admissibility constant of a window pair vanishes."""
    prefix = "Not a reconstruction pair"


class VerificationFailed(StockwellError):
    """An identity check exceeded its tolerance."""
    status_code = 1
    prefix = "Verification failed"
