"""n-dimensional convolutional optimization with per-coordinate sign descent.

Each partial derivative of the surrogate is the sum of

* a far-field term: a coarse Riemann sum over the whole support of
  ``(theta_i - x_i) f^N(x) / |theta - x|``, and
* a near-field term: a fine sum over the ``delta``-ball around theta of
  ``k_i f^N(theta + (delta / M) k)`` scaled by ``delta^n / M^(n+1)``.

Coordinates whose estimate lies inside the deadband do not move.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .objective import Objective
from .rescale import PowerLift, default_lift
from .trace import Trace

DEFAULT_EVAL_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    """Far-field sampling would exceed the evaluation budget."""


def eval_budget() -> int:
    return int(os.environ.get("CONVOPT_EVAL_BUDGET", DEFAULT_EVAL_BUDGET))


@dataclass(frozen=True)
class CocpNdParams:
    """Args:
        delta: Step size and kernel radius.
        power: Lift exponent ``N``.
        x0: Start point, inside the support.
        steps: Number of steps; ``None`` means ``ceil(2 * diameter / delta)``.
        coarse_step: Far-field grid spacing; ``None`` means a tenth of the
            largest support half-width.
        fine_div: Near-field subdivisions ``M``.
        deadband: Threshold in raw ``f^N`` units below which a coordinate
            is frozen; ``None`` means ``delta / 10``.
        near_set: ``"l1"`` sums over ``|k|_1 <= M``; ``"box"`` over
            ``max |k_i| <= M``.
        budget: Cap on far-field evaluations per step; ``None`` reads
            ``CONVOPT_EVAL_BUDGET`` (default ``10**7``).
    """

    delta: float
    power: int
    x0: Sequence[float]
    steps: Optional[int] = None
    coarse_step: Optional[float] = None
    fine_div: int = 10
    deadband: Optional[float] = None
    near_set: str = "l1"
    budget: Optional[int] = None

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.coarse_step is not None and not self.coarse_step > 0:
            raise ValueError(f"coarse_step must be positive, got {self.coarse_step}")
        if self.deadband is not None and self.deadband < 0:
            raise ValueError(f"deadband must be nonnegative, got {self.deadband}")
        if self.near_set not in ("l1", "box"):
            raise ValueError(f"near_set must be 'l1' or 'box', got {self.near_set!r}")
        object.__setattr__(self, "x0", tuple(float(v) for v in self.x0))

    def resolved_coarse_step(self, o: Objective) -> float:
        if self.coarse_step is not None:
            return self.coarse_step
        return float(o.support.widths.max()) / 20.0

    def resolved_deadband(self) -> float:
        return self.delta / 10.0 if self.deadband is None else self.deadband

    def resolved_steps(self, o: Objective) -> int:
        if self.steps is not None:
            return self.steps
        return math.ceil(2 * o.support.diameter / self.delta)


def _check_theta(o: Objective, theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (o.dim,):
        raise ValueError(f"expected a point of dimension {o.dim}, got shape {theta.shape}")
    return theta


def coarse_grid(o: Objective, coarse_step: float) -> np.ndarray:
    """Nodes ``center + m * coarse_step`` covering the support box, shape ``(G, n)``."""
    axes = []
    for lo, hi in zip(o.support.lower, o.support.upper):
        c, half = (lo + hi) / 2.0, (hi - lo) / 2.0
        m = math.floor(half / coarse_step + 1e-9)
        axes.append(c + coarse_step * np.arange(-m, m + 1))
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, o.dim)


@lru_cache(maxsize=32)
def near_indices(n: int, m: int, kind: str = "l1") -> np.ndarray:
    """Integer offsets ``k`` with ``|k|_1 <= m`` (or ``|k|_inf <= m`` for ``kind="box"``)."""
    axis = np.arange(-m, m + 1)
    k = np.stack(np.meshgrid(*([axis] * n), indexing="ij"), axis=-1).reshape(-1, n)
    if kind == "l1":
        k = k[np.abs(k).sum(axis=1) <= m]
    k.setflags(write=False)
    return k


def partial_far(o: Objective, p: PowerLift, params: CocpNdParams, theta, i: int) -> float:
    """Coarse-grid estimate of ``int (theta_i - x_i) f^N(x) / |theta - x| dx``.

    Where the gap to theta in the other coordinates is below the grid
    spacing, the direction factor is replaced by ``sign(theta_i - x_i)``;
    this avoids the singularity at ``x = theta`` and is exact along the
    axis line through theta.
    """
    theta = _check_theta(o, theta)
    hc = params.resolved_coarse_step(o)
    grid = coarse_grid(o, hc)
    vals = p(o.eval_many(grid))
    diff = theta - grid
    dist = np.linalg.norm(diff, axis=1)
    off = np.sqrt(np.maximum(dist**2 - diff[:, i] ** 2, 0.0))
    guarded = off < hc
    factor = np.empty(len(grid))
    factor[guarded] = np.sign(diff[guarded, i])
    factor[~guarded] = diff[~guarded, i] / dist[~guarded]
    return float(hc ** o.dim * np.dot(factor, vals))


def partial_near(o: Objective, p: PowerLift, params: CocpNdParams, theta, i: int) -> float:
    """Fine sum ``delta^n / M^(n+1) * sum_k k_i f^N(theta + delta k / M)`` over the ball."""
    theta = _check_theta(o, theta)
    m = params.fine_div
    k = near_indices(o.dim, m, params.near_set)
    vals = p(o.eval_many(theta + (params.delta / m) * k))
    return float(params.delta ** o.dim / m ** (o.dim + 1) * np.dot(k[:, i], vals))


def gradient_estimate(o: Objective, p: PowerLift, params: CocpNdParams, theta) -> np.ndarray:
    """Surrogate gradient: far-field plus near-field term for every coordinate."""
    return np.array([
        partial_far(o, p, params, theta, i) + partial_near(o, p, params, theta, i)
        for i in range(o.dim)
    ])


def check_budget(o: Objective, params: CocpNdParams):
    per_step = len(coarse_grid(o, params.resolved_coarse_step(o))) * o.dim
    budget = params.budget if params.budget is not None else eval_budget()
    if per_step > budget:
        raise BudgetExceeded(
            f"far-field sampling needs {per_step} evaluations per step, budget is {budget}"
        )


def run(o: Objective, params: CocpNdParams, lift: Optional[PowerLift] = None) -> Trace:
    """Deadband sign descent on the surrogate.

    Trace ``aux`` holds the per-coordinate gradient estimates (lifted units)
    at the recorded point.
    """
    x = _check_theta(o, params.x0).copy()
    if not o.support.contains(x)[0]:
        raise ValueError(f"start point {x} lies outside the support")
    check_budget(o, params)
    lift = lift or default_lift(o, params.power)
    band = params.resolved_deadband() / lift.factor
    trace = Trace()
    grad = gradient_estimate(o, lift, params, x)
    trace.append(0, x, o.eval(x), grad)
    for t in range(1, params.resolved_steps(o) + 1):
        s = np.where(grad >= band, 1.0, np.where(grad <= -band, -1.0, 0.0))
        x = x - params.delta * s
        grad = gradient_estimate(o, lift, params, x)
        trace.append(t, x, o.eval(x), grad)
    return trace
