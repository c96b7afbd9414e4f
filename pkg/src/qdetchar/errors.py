"""Exception and warning types shared across the package."""

from __future__ import annotations


class QdetcharError(Exception):
    """Base class for all package-specific errors."""


class NullOutcomeError(QdetcharError):
    """A measurement element has (near-)zero trace and cannot be retrodicted."""


class UnreachableOutcomeError(QdetcharError):
    """An outcome has (near-)zero probability under the given probe ensemble."""


class HeraldImpossibleError(QdetcharError):
    """Heralding probability vanished: the outcome cannot fire on this state."""


class TailToleranceError(QdetcharError):
    """Truncation tail exceeds budget; results at this squeezing are unreliable."""


class PovmFormatError(QdetcharError):
    """A measurement/ensemble/report file could not be parsed."""


class PovmValidationError(QdetcharError):
    """A parsed measurement failed physical validation.

    Carries the offending :class:`~qdetchar.detectors.PovmValidationReport`
    in ``report``.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ReportValidationError(QdetcharError):
    """A characterization report failed its internal consistency identities."""


class TruncationWarning(UserWarning):
    """The Fock-space cutoff is likely too small for the requested object."""
