"""
Exceptions Module.

This module defines the error hierarchy shared by every pipeline stage. Each
exception carries the process exit code the command-line front end reports.
"""
from typing import Any, Dict, List, Optional

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_IO = 3


class OrofacialError(Exception):
    """Base class for all errors raised by the toolkit."""

    exit_code: int = EXIT_DATA


class UsageError(OrofacialError):
    """Invalid command-line usage."""

    exit_code = EXIT_USAGE


class DataError(OrofacialError):
    """Input data is malformed or violates a domain invariant."""

    exit_code = EXIT_DATA


class StorageError(OrofacialError):
    """Reading or writing a file failed."""

    exit_code = EXIT_IO


class MissingFileError(StorageError):
    """A referenced file does not exist."""

    def __init__(self, path: Any, message: Optional[str] = None):
        self.path = str(path)
        super().__init__(message or f"File not found: {self.path}")


class ParseError(DataError):
    """A record could not be decoded."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class SchemaError(ParseError):
    """A decoded record has the wrong shape or field types."""


class DataValidationError(DataError):
    """A value violates a documented invariant."""


class TrajectoryValidationError(DataValidationError):
    """A trajectory violates one or more invariants."""

    def __init__(self, violations: List[str]):
        self.violations = list(violations)
        shown = "; ".join(self.violations[:5])
        more = f" (+{len(self.violations) - 5} more)" if len(self.violations) > 5 else ""
        super().__init__(f"Invalid trajectory: {shown}{more}")


class InvalidDepthError(DataError):
    """Depth is zero or negative where a reading is required."""


class MissingDepthError(DataError):
    """3D processing requested for a recording without depth or intrinsics."""


class ReconstructionError(DataError):
    """Too many frames could not be reconstructed."""

    def __init__(self, message: str, statistics: Optional[Dict[str, Any]] = None):
        self.statistics = dict(statistics or {})
        super().__init__(message)


class TooShortRepetitionError(DataError):
    """An annotated repetition holds too few frames for differentiation."""


class InsufficientRestError(DataError):
    """The REST recording is shorter than the normalization window."""


class DegenerateRestError(DataError):
    """A REST mean is not strictly positive."""


class PropertyUndefinedError(DataError):
    """A mouth property cannot be computed for a frame."""


class DimensionalityMismatchError(DataError):
    """2D and 3D data were mixed."""


class TooFewFramesError(DataError):
    """A repetition has too few valid frames for feature extraction."""


class UndefinedCCCError(DataError):
    """Concordance is undefined because both series are constant."""


class DegenerateGroupsError(DataError):
    """The pooled variance of two groups is zero."""


class InsufficientGroupError(DataError):
    """A group has fewer than two observations."""


class MissingRestError(DataError):
    """A subject has no REST recording."""

    def __init__(self, subject_id: str, message: Optional[str] = None):
        self.subject_id = subject_id
        super().__init__(message or f"No REST recording for subject '{subject_id}'")
