"""Riemann-sum derivatives of the 1-D convolved surrogate ``F = g_delta * f^N``.

With the kernel slope equal to +-1 outside ``[-delta, delta]``,

    F'(theta) = mass left of theta - delta
                - mass right of theta + delta
                - (1/delta) * int_{|t - theta| <= delta} (t - theta) f^N(t) dt

and ``F''(theta) = (1/delta) int_{|t - theta| <= delta} f^N``.

All sums use the lattice spacing ``h = delta / fine_div``. The tails are
sampled at ``theta -+ (delta + j h)``, ``j >= 0``; this makes the difference of
two tail sums one step ``delta`` apart equal to a ``fine_div``-point band
sum on the same points, so the incremental update agrees with a fresh
evaluation up to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .objective import Objective
from .rescale import PowerLift


@dataclass(frozen=True)
class Quadrature1DParams:
    """Sampling layout for one-dimensional derivative estimates.

    Args:
        delta: Kernel half-width, also the optimizer's step.
        fine_div: Subdivisions ``M`` of each ``delta``-cell.
        tail_steps: Tail length in units of ``delta``. ``None`` runs the
            tails to the support edge.
    """

    delta: float
    fine_div: int = 10
    tail_steps: Optional[int] = None

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.fine_div < 1:
            raise ValueError(f"fine_div must be >= 1, got {self.fine_div}")
        if self.tail_steps is not None and self.tail_steps < 1:
            raise ValueError(f"tail_steps must be >= 1, got {self.tail_steps}")

    @property
    def h(self) -> float:
        return self.delta / self.fine_div


def _check_1d(o: Objective):
    if o.dim != 1:
        raise ValueError(f"expected a 1-dimensional objective, got dim={o.dim}")


def _lifted(o: Objective, p: PowerLift, t: np.ndarray) -> np.ndarray:
    return p(o.eval_many(t))


def _tail_count(o: Objective, q: Quadrature1DParams, reach: float) -> int:
    if q.tail_steps is not None:
        if q.tail_steps * q.delta < o.support.diameter:
            raise ValueError(
                f"tails of {q.tail_steps} steps of {q.delta} do not span the support "
                f"(diameter {o.support.diameter})"
            )
        return q.tail_steps * q.fine_div
    if reach < 0:
        return 0
    return math.floor(reach / q.h + 1e-9) + 1


def tail_sum(o: Objective, p: PowerLift, q: Quadrature1DParams, theta: float) -> float:
    """Lifted mass left of ``theta - delta`` minus mass right of ``theta + delta``."""
    _check_1d(o)
    lo, hi = o.support.lower[0], o.support.upper[0]
    j_left = np.arange(_tail_count(o, q, theta - q.delta - lo))
    j_right = np.arange(_tail_count(o, q, hi - theta - q.delta))
    left = _lifted(o, p, theta - q.delta - j_left * q.h).sum()
    right = _lifted(o, p, theta + q.delta + j_right * q.h).sum()
    return float(q.h * (left - right))


def central_sum(o: Objective, p: PowerLift, q: Quadrature1DParams, theta: float) -> float:
    """``(delta / M^2) * sum_{i=-M..M} i * f^N(theta + i delta / M)``.

    Equals ``(1/delta) int (t - theta) f^N`` over the cap, so it enters the
    derivative with a minus sign.
    """
    _check_1d(o)
    m = q.fine_div
    i = np.arange(-m, m + 1)
    vals = _lifted(o, p, theta + i * q.h)
    return float(q.delta / m**2 * np.dot(i, vals))


def full_derivative(o: Objective, p: PowerLift, q: Quadrature1DParams, theta: float) -> float:
    """Fresh estimate of ``F'(theta)``: tail sum minus central sum."""
    return tail_sum(o, p, q, theta) - central_sum(o, p, q, theta)


def band_sum(o: Objective, p: PowerLift, q: Quadrature1DParams, theta_lo: float) -> float:
    """Mass swept by both tail edges when theta moves between ``theta_lo`` and ``theta_lo + delta``.

    Covers ``(theta_lo - delta, theta_lo]`` and ``[theta_lo + delta, theta_lo + 2 delta)``.
    """
    _check_1d(o)
    m = q.fine_div
    i = np.arange(1, m + 1)
    j = np.arange(m)
    pts = np.concatenate([theta_lo - q.delta + i * q.h, theta_lo + q.delta + j * q.h])
    return float(q.h * _lifted(o, p, pts).sum())


def derivative_increment(
    o: Objective,
    p: PowerLift,
    q: Quadrature1DParams,
    theta_old: float,
    theta_new: float,
    int2_old: float,
) -> tuple[float, float]:
    """Change of ``F'`` between neighbouring lattice points.

    Args:
        theta_old, theta_new: Must differ by exactly ``delta`` (or be equal).
        int2_old: Central sum at ``theta_old``.

    Returns:
        ``(d_int, int2_new)`` with ``F'(theta_new) = F'(theta_old) + d_int``.
    """
    step = theta_new - theta_old
    tol = 1e-9 * max(1.0, abs(theta_old))
    int2_new = central_sum(o, p, q, theta_new)
    if abs(step) <= tol:
        return int2_old - int2_new, int2_new
    if abs(abs(step) - q.delta) > tol:
        raise ValueError(f"increment requires a step of exactly delta={q.delta}, got {step}")
    band = band_sum(o, p, q, min(theta_old, theta_new))
    d_tail = band if step > 0 else -band
    return d_tail - int2_new + int2_old, int2_new


def second_derivative(o: Objective, p: PowerLift, q: Quadrature1DParams, theta: float) -> float:
    """``F''(theta) = (1/delta) int_{theta-delta}^{theta+delta} f^N``, left-endpoint rule."""
    _check_1d(o)
    m = q.fine_div
    i = np.arange(-m, m)
    return float(_lifted(o, p, theta + i * q.h).sum() / m)
