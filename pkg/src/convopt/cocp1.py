"""One-dimensional convolutional optimization by sign descent.

The iterate moves by a fixed ``delta`` against the sign of the surrogate
derivative. The derivative is carried along incrementally: after each step
only the two bands swept by the tail edges and the central sum are
resampled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from . import conv1d
from .conv1d import Quadrature1DParams
from .objective import Objective
from .rescale import PowerLift, default_lift
from .trace import Trace


@dataclass(frozen=True)
class Cocp1Params:
    """Args:
        delta: Step size and kernel half-width.
        power: Lift exponent ``N``.
        steps: Number of sign-descent steps ``T``; ``None`` means
            ``ceil(2 * support diameter / delta)``.
        x0: Start point.
        fine_div: Subdivisions of a ``delta``-cell for all sums.
        stop_when_frozen: End the run early once the derivative estimate is
            exactly 0 (the iterate cannot move again).
    """

    delta: float
    power: int
    steps: Optional[int] = None
    x0: float = 0.0
    fine_div: int = 10
    stop_when_frozen: bool = False

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.steps is not None and self.steps < 0:
            raise ValueError(f"steps must be >= 0, got {self.steps}")
        if not math.isfinite(self.x0):
            raise ValueError("x0 must be finite")

    @property
    def quadrature(self) -> Quadrature1DParams:
        return Quadrature1DParams(self.delta, self.fine_div)

    def resolved_steps(self, o: Objective) -> int:
        if self.steps is not None:
            return self.steps
        return math.ceil(2 * o.support.diameter / self.delta)


@dataclass(frozen=True)
class Cocp1State:
    x: float
    int1: float
    int2: float
    int3: float
    int_total: float


def _sign(v: float) -> int:
    return (v > 0) - (v < 0)


def init(o: Objective, params: Cocp1Params, lift: Optional[PowerLift] = None) -> Cocp1State:
    if o.dim != 1:
        raise ValueError(f"cocp1 needs a 1-dimensional objective, got dim={o.dim}")
    lift = lift or default_lift(o, params.power)
    q = params.quadrature
    int1 = conv1d.tail_sum(o, lift, q, params.x0)
    int2 = conv1d.central_sum(o, lift, q, params.x0)
    return Cocp1State(params.x0, int1, int2, 0.0, int1 - int2)


def step(o: Objective, params: Cocp1Params, s: Cocp1State, lift: PowerLift) -> Cocp1State:
    """One sign-descent step with the incremental derivative update.

    ``sign(0) = 0``: a zero estimate freezes the iterate.
    """
    q = params.quadrature
    sgn = _sign(s.int_total)
    x_new = s.x - params.delta * sgn
    int1 = sgn * conv1d.band_sum(o, lift, q, min(s.x, x_new)) if sgn else 0.0
    int3 = s.int2
    int2 = conv1d.central_sum(o, lift, q, x_new)
    return Cocp1State(x_new, int1, int2, int3, s.int_total - int1 - int2 + int3)


def run(o: Objective, params: Cocp1Params, lift: Optional[PowerLift] = None) -> Trace:
    """Run ``T`` steps from ``x0``; trace rows carry the derivative estimate as ``aux``."""
    lift = lift or default_lift(o, params.power)
    state = init(o, params, lift)
    trace = Trace()
    trace.append(0, state.x, o.eval(state.x), (state.int_total,))
    for k in range(1, params.resolved_steps(o) + 1):
        if params.stop_when_frozen and state.int_total == 0.0:
            break
        state = step(o, params, state, lift)
        trace.append(k, state.x, o.eval(state.x), (state.int_total,))
    return trace


def optimize(o: Objective, params: Cocp1Params, lift: Optional[PowerLift] = None) -> float:
    """Final iterate only; skips per-step objective evaluation."""
    lift = lift or default_lift(o, params.power)
    state = init(o, params, lift)
    for _ in range(params.resolved_steps(o)):
        if params.stop_when_frozen and state.int_total == 0.0:
            break
        state = step(o, params, state, lift)
    return state.x

