"""Zigzag walks: higher-dimensional optimization through 1-D convolutional runs.

``zigzag1`` cycles through the coordinate axes. ``zigzag2`` samples random
directions, keeps the one with the largest value difference across the
current point at a probe radius that grows by ``delta`` per iteration, and
runs the 1-D optimizer along it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import cocp1
from .cocp1 import Cocp1Params
from .objective import LineRestriction, Objective, line_box_interval
from .rescale import PowerLift, default_lift
from .trace import Trace


@dataclass(frozen=True)
class ZigzagParams:
    """Args:
        delta: Step size and kernel half-width of every 1-D run.
        power: Lift exponent ``N``.
        inner_steps: Steps ``T`` of each 1-D run.
        cycles: Number of 1-D runs ``K``.
        x0: Start point, inside the support.
        mode: ``"cyclic"`` (zigzag1) or ``"random_direction"`` (zigzag2).
        num_directions: Directions sampled per zigzag2 iteration.
        seed: Seed of the direction sampler.
        initial_radius: First probe radius; ``None`` means ``delta``.
    """

    delta: float
    power: int
    inner_steps: int
    cycles: int
    x0: Sequence[float]
    mode: str = "cyclic"
    num_directions: int = 20
    seed: int = 0
    initial_radius: Optional[float] = None

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.cycles < 1:
            raise ValueError(f"cycles must be >= 1, got {self.cycles}")
        if self.num_directions < 1:
            raise ValueError(f"num_directions must be >= 1, got {self.num_directions}")
        if self.mode not in ("cyclic", "random_direction"):
            raise ValueError(f"unknown mode {self.mode!r}")
        object.__setattr__(self, "x0", tuple(float(v) for v in self.x0))

    def inner(self) -> Cocp1Params:
        return Cocp1Params(self.delta, self.power, self.inner_steps, 0.0)


class DirectionSampler:
    """Seeded uniform directions on the unit sphere (normalized Gaussian vectors)."""

    def __init__(self, dim: int, seed: int = 0):
        self.dim = dim
        self.rng = np.random.default_rng(seed)

    def sample(self) -> np.ndarray:
        while True:
            z = self.rng.standard_normal(self.dim)
            norm = np.linalg.norm(z)
            if norm > 0:
                return z / norm


def _start(o: Objective, params: ZigzagParams) -> np.ndarray:
    x = np.asarray(params.x0, dtype=float)
    if x.shape != (o.dim,):
        raise ValueError(f"x0 has dimension {x.size}, objective has {o.dim}")
    if not o.support.contains(x)[0]:
        raise ValueError(f"start point {x} lies outside the support")
    return x.copy()


def line_search(o: Objective, x, v, params: ZigzagParams, lift: PowerLift) -> float:
    """Run the 1-D optimizer on ``t -> o(x + t v)`` across the support box; returns ``t``."""
    t_lo, t_hi = line_box_interval(o.support, x, v)
    line = LineRestriction(o, x, v, t_lo, t_hi)
    t = cocp1.optimize(line, params.inner(), lift)
    # sign descent may overshoot an optimum on the box face by less than delta
    return min(max(t, t_lo), t_hi)


def zigzag1_run(o: Objective, params: ZigzagParams, lift: Optional[PowerLift] = None) -> Trace:
    """Cyclic coordinate walk; ``aux`` is ``(axis, displacement)``."""
    x = _start(o, params)
    lift = lift or default_lift(o, params.power)
    trace = Trace()
    trace.append(0, x, o.eval(x), ())
    for t in range(params.cycles):
        axis = t % o.dim
        e = np.zeros(o.dim)
        e[axis] = 1.0
        s = line_search(o, x, e, params, lift)
        x[axis] += s
        trace.append(t + 1, x, o.eval(x), (axis, s))
    return trace


def pick_direction(
    o: Objective,
    x,
    probe_radius: float,
    sampler: DirectionSampler,
    num_directions: int,
    delta: float = 0.0,
    lift: Optional[PowerLift] = None,
) -> np.ndarray:
    """Sampled unit direction maximizing ``|f(x + r v) - f(x - r v)|`` at ``r = probe_radius``.

    With ``lift`` the lifted values are compared instead, which favours
    directions whose probes reach high values. Ties go to the earliest
    sample. The score does not see the sign of ``v``, so the winner is
    oriented uphill (``f(x + r v) >= f(x - r v)``). ``delta`` is accepted for
    interface symmetry; the probe distance is ``probe_radius`` alone.
    """
    x = np.asarray(x, dtype=float)
    dirs = np.array([sampler.sample() for _ in range(num_directions)])
    plus = o.eval_many(x + probe_radius * dirs)
    minus = o.eval_many(x - probe_radius * dirs)
    if lift is not None:
        plus, minus = lift(plus), lift(minus)
    k = int(np.argmax(np.abs(plus - minus)))
    return dirs[k] if plus[k] >= minus[k] else -dirs[k]


def zigzag2_run(o: Objective, params: ZigzagParams, lift: Optional[PowerLift] = None) -> Trace:
    """Random-direction walk with growing probe radius; ``aux`` is ``(probe_radius, displacement)``."""
    x = _start(o, params)
    lift = lift or default_lift(o, params.power)
    sampler = DirectionSampler(o.dim, params.seed)
    r = params.delta if params.initial_radius is None else params.initial_radius
    trace = Trace()
    trace.append(0, x, o.eval(x), ())
    for t in range(params.cycles):
        v = pick_direction(o, x, r, sampler, params.num_directions, params.delta, lift)
        s = line_search(o, x, v, params, lift)
        x = x + s * v
        trace.append(t + 1, x, o.eval(x), (r, s))
        r += params.delta
    return trace


def run(o: Objective, params: ZigzagParams, lift: Optional[PowerLift] = None) -> Trace:
    if params.mode == "cyclic":
        return zigzag1_run(o, params, lift)
    return zigzag2_run(o, params, lift)
