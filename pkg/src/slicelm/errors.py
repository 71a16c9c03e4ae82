"""Exception types raised across the pipeline."""

from __future__ import annotations


class SliceLMError(Exception):
    """Base class for all package errors."""


class TopologyError(SliceLMError, ValueError):
    """Malformed or inconsistent topology document."""


class ParseError(SliceLMError, ValueError):
    """A log line did not match any accepted grammar."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class ResolutionError(SliceLMError, ValueError):
    """An event names a node that is not part of the topology, or breaks a
    node-kind rule for its event kind."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class ConfigError(SliceLMError, ValueError):
    """Invalid parameters or an undefined simulator/detector configuration."""


class TrainingError(SliceLMError, ValueError):
    """Training data cannot produce an edge-probability table."""


class EvaluationInputError(SliceLMError, ValueError):
    """Predicted or ground-truth edges fall outside the evaluated universe."""
