"""Kernel functions and bandwidth defaults for local averaging."""

from dataclasses import dataclass

import numpy as np

__all__ = ["KERNELS", "kernel_function", "default_bandwidth", "SmootherConfig"]


def box(u):
    """K(u) = 1/2 on |u| <= 1, else 0."""
    return np.where(np.abs(u) <= 1.0, 0.5, 0.0)


def epanechnikov(u):
    """K(u) = 0.75 (1 - u^2) on |u| <= 1, else 0."""
    return np.where(np.abs(u) <= 1.0, 0.75 * (1.0 - u * u), 0.0)


def gaussian(u):
    """Standard normal density."""
    return np.exp(-0.5 * u * u) / np.sqrt(2.0 * np.pi)


KERNELS = {"box": box, "epanechnikov": epanechnikov, "gaussian": gaussian}


def kernel_function(name):
    try:
        return KERNELS[name]
    except KeyError:
        raise ValueError(f"unknown kernel {name!r}; choose from {sorted(KERNELS)}") from None


def default_bandwidth(n, c=1.0) -> float:
    """Rule-of-thumb bandwidth c * n**(-1/5).

    The n**(-1/5) rate is the standard optimal order for univariate smoothing;
    the constant c is left configurable because no universal plug-in value
    exists for arbitrary designs.
    """
    if not (isinstance(n, (int, np.integer)) and n >= 2):
        raise ValueError(f"n must be an integer >= 2, got {n!r}")
    if not (c > 0):
        raise ValueError(f"bandwidth constant must be positive, got {c}")
    return float(c) * float(n) ** -0.2


@dataclass(frozen=True)
class SmootherConfig:
    """Kernel smoother settings.

    ``bandwidth`` is the window half-width h. When None, it is resolved at use
    time as ``bandwidth_c * n**(-1/5)``.
    """

    kernel: str = "box"
    bandwidth: float | None = None
    bandwidth_c: float = 1.0

    def __post_init__(self):
        kernel_function(self.kernel)
        if self.bandwidth is not None and not (self.bandwidth > 0):
            raise ValueError(f"bandwidth must be positive, got {self.bandwidth}")
        if not (self.bandwidth_c > 0):
            raise ValueError(f"bandwidth_c must be positive, got {self.bandwidth_c}")

    def resolve_bandwidth(self, n) -> float:
        return self.bandwidth if self.bandwidth is not None else default_bandwidth(n, self.bandwidth_c)

    def resolved(self, n) -> "SmootherConfig":
        """Copy with the bandwidth pinned to its numeric value for n observations."""
        return SmootherConfig(self.kernel, self.resolve_bandwidth(n), self.bandwidth_c)
