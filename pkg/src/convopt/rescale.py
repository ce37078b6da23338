"""Power lift ``f -> (f / scale) ** N`` used to concentrate integral mass near the maximum."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .objective import Objective

DEFAULT_MU = 0.1


@dataclass(frozen=True)
class PowerLift:
    power: int
    scale: float = 1.0

    def __post_init__(self):
        if int(self.power) != self.power or self.power < 1:
            raise ValueError(f"power must be a positive integer, got {self.power}")
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")

    def __call__(self, values):
        return lift(self, values)

    @property
    def factor(self) -> float:
        """Multiplier from lifted units back to raw ``f ** N`` units."""
        return self.scale ** self.power


def lift(p: PowerLift, value):
    """``(value / scale) ** power`` for nonnegative scalars or arrays."""
    v = np.asarray(value, dtype=float)
    if np.any(v < 0):
        raise ValueError("power lift expects nonnegative values")
    out = (v / p.scale) ** p.power
    return float(out) if out.ndim == 0 else out


def suggest_power(mu: float, eps: float, n: int = 1) -> int:
    """Power large enough to put 2/3 of the lifted mass within ``eps`` of the maximum.

    Returns ``ceil((2 n / mu) ln(1 / eps))``, at least 1. ``mu`` is the
    relative value gap between the best ``eps``-ball and the rest.
    """
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if not mu > 0:
        raise ValueError(f"mu must be positive, got {mu}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return max(1, math.ceil((2.0 * n / mu) * math.log(1.0 / eps)))


def sample_max(o: Objective, per_axis: int = 1000, cap: int = 10**6) -> float:
    """Largest value of ``o`` on a uniform grid over its support."""
    per_axis = max(2, min(per_axis, int(cap ** (1.0 / o.dim))))
    axes = [np.linspace(lo, hi, per_axis) for lo, hi in zip(o.support.lower, o.support.upper)]
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, o.dim)
    return float(o.eval_many(pts).max())


def default_lift(o: Objective, power: int) -> PowerLift:
    """Lift normalized by the sampled maximum so lifted values stay near or below 1.

    Optimizers only use integral signs, so the scale does not change their path.
    """
    m = sample_max(o)
    return PowerLift(power, m if m > 0 else 1.0)
