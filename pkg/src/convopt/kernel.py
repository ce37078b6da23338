"""Quasi-linear convex kernels.

The one-dimensional kernel is a smoothed absolute value: linear with slope
+-1 outside ``[-delta, delta]`` and a quadratic cap inside, glued so that
value and slope are continuous at ``|x| = delta``. The n-dimensional kernel
is the radial version (a cone melded with a paraboloid along the sphere of
radius ``delta``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Kernel1D:
    """Smoothed absolute value with half-width ``delta`` and border height ``h``."""

    delta: float
    h: float = 0.0

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")

    def __call__(self, x):
        return eval1(self, x)


@dataclass(frozen=True)
class KernelND:
    """Radial kernel in ``dim`` dimensions: cone outside the ``delta``-ball."""

    delta: float
    dim: int
    h: float = 0.0

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")

    def __call__(self, x):
        return evalN(self, x)


def _radial(r, delta, h):
    return np.where(r > delta, r - delta + h, r * r / (2.0 * delta) - delta / 2.0 + h)


def eval1(k: Kernel1D, x):
    """Kernel value; accepts scalars or arrays."""
    r = np.abs(np.asarray(x, dtype=float))
    out = _radial(r, k.delta, k.h)
    return float(out) if out.ndim == 0 else out


def grad1(k: Kernel1D, x):
    """Kernel derivative: ``sign(x)`` outside the cap, ``x / delta`` inside."""
    x = np.asarray(x, dtype=float)
    out = np.where(np.abs(x) > k.delta, np.sign(x), x / k.delta)
    return float(out) if out.ndim == 0 else out


def _check_dim(k: KernelND, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (k.dim,):
        raise ValueError(f"expected vectors of length {k.dim}, got shape {x.shape}")
    return x


def evalN(k: KernelND, x):
    """Kernel value at a point (shape ``(dim,)``) or a batch (``(m, dim)``)."""
    x = _check_dim(k, x)
    out = _radial(np.linalg.norm(x, axis=-1), k.delta, k.h)
    return float(out) if out.ndim == 0 else out


def partialN(k: KernelND, x, i: int):
    """Partial derivative along axis ``i``.

    Outside the ball this is ``x_i / |x|``, inside ``x_i / delta``; the origin
    lies inside the ball, so no division by zero can occur.
    """
    x = _check_dim(k, x)
    if not 0 <= i < k.dim:
        raise ValueError(f"axis {i} out of range for dim {k.dim}")
    r = np.linalg.norm(x, axis=-1)
    denom = np.where(r > k.delta, r, k.delta)
    out = x[..., i] / denom
    return float(out) if np.ndim(out) == 0 else out
