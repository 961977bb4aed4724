"""Exception types shared across the package."""

from __future__ import annotations


class AsdflowError(Exception):
    """Base class for all package-specific errors."""


class PositivityError(AsdflowError, ValueError):
    """A profile that must stay strictly positive has a non-positive node.

    Reports the first violating node to aid pinch-off debugging.
    """

    def __init__(self, node: int, x: float, value: float):
        self.node = node
        self.x = x
        self.value = value
        super().__init__(
            f"profile must be strictly positive; node {node} (x = {x:.6g}) "
            f"has value {value:.6g}"
        )


class LiftRangeError(AsdflowError, ValueError):
    """No volume-matched constant shift exists for the requested deviation."""


class ParameterError(AsdflowError, ValueError):
    """A parameter is outside the supported range."""


class ConfigError(AsdflowError, ValueError):
    """Malformed command-line or config-file input (exit code 2)."""


class NumericError(AsdflowError, RuntimeError):
    """A numerical procedure produced NaN/Inf or failed to converge (exit code 3)."""
