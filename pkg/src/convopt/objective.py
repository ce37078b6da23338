"""Nonnegative, compactly supported objectives.

Every objective is clamped twice: negative raw values become 0, and points
outside the support box evaluate to 0. The optimizers only ever see these
clamped values.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np


EDGE_TOL = 1e-12


@dataclass(frozen=True)
class SupportBox:
    lower: tuple
    upper: tuple

    def __post_init__(self):
        lower = tuple(float(v) for v in np.atleast_1d(self.lower))
        upper = tuple(float(v) for v in np.atleast_1d(self.upper))
        if len(lower) != len(upper):
            raise ValueError("lower and upper bounds differ in length")
        if not all(lo < hi for lo, hi in zip(lower, upper)):
            raise ValueError(f"empty support box {lower} .. {upper}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def lo(self) -> np.ndarray:
        return np.array(self.lower)

    @property
    def hi(self) -> np.ndarray:
        return np.array(self.upper)

    @property
    def widths(self) -> np.ndarray:
        return self.hi - self.lo

    @property
    def diameter(self) -> float:
        """Largest side length; the distance sign descent may need to travel per axis."""
        return float(self.widths.max())

    def contains(self, points: np.ndarray) -> np.ndarray:
        """Closed-box membership, widened by ``1e-12`` of each width.

        Lattice points that nominally sit on a face must not flip in and out
        with rounding noise of the iterate that generated them.
        """
        points = np.atleast_2d(points)
        slack = EDGE_TOL * self.widths
        return np.all((points >= self.lo - slack) & (points <= self.hi + slack), axis=-1)


class Objective:
    """A nonnegative function with compact support.

    Args:
        raw: Function of a batch of points ``(m, dim) -> (m,)``. With
            ``vectorized=False`` it takes a single point and returns a float.
        support: Box outside of which the objective is 0.
        name: Registry name, used in reports.
        known_global_argmax: Declared global maximizer, if known.
        known_local_argmax: Declared non-global local maximizer, if known.
        vectorized: Whether ``raw`` accepts batches.

    The ``evaluations`` counter records how many points have been evaluated.
    It is the only mutable state; evaluation itself is pure.
    """

    def __init__(
        self,
        raw: Callable,
        support: SupportBox,
        name: str = "custom",
        known_global_argmax: Optional[Sequence[float]] = None,
        known_local_argmax: Optional[Sequence[float]] = None,
        vectorized: bool = True,
    ):
        self.raw = raw
        self.support = support
        self.name = name
        self.known_global_argmax = _opt_vec(known_global_argmax)
        self.known_local_argmax = _opt_vec(known_local_argmax)
        self.vectorized = vectorized
        self.evaluations = 0

    @property
    def dim(self) -> int:
        return self.support.dim

    def __repr__(self):
        return f"Objective(name={self.name!r}, dim={self.dim})"

    def _as_points(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        if self.dim == 1 and pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[1] != self.dim:
            raise ValueError(
                f"{self.name}: expected points of dimension {self.dim}, got shape {pts.shape}"
            )
        return pts

    def eval_many(self, points) -> np.ndarray:
        """Clamped values at a batch of points (``(m, dim)``, or ``(m,)`` in 1-D)."""
        pts = self._as_points(points)
        self.evaluations += len(pts)
        inside = self.support.contains(pts)
        out = np.zeros(len(pts))
        if inside.any():
            sel = pts[inside]
            if self.vectorized:
                vals = np.asarray(self.raw(sel), dtype=float)
            else:
                vals = np.array([float(self.raw(p)) for p in sel])
            out[inside] = np.maximum(vals, 0.0)
        return out

    def eval(self, x) -> float:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.shape != (self.dim,):
            raise ValueError(f"{self.name}: expected a point of dimension {self.dim}, got shape {x.shape}")
        return float(self.eval_many(x[None, :])[0])

    __call__ = eval


def _opt_vec(v):
    return None if v is None else np.atleast_1d(np.asarray(v, dtype=float))


class LineRestriction(Objective):
    """The 1-D objective ``t -> base(anchor + t * direction)`` for ``t_lo <= t <= t_hi``.

    Evaluations are also counted on the base objective.
    """

    def __init__(self, base: Objective, anchor, direction, t_lo: float, t_hi: float):
        anchor = np.asarray(anchor, dtype=float)
        direction = np.asarray(direction, dtype=float)
        if anchor.shape != (base.dim,) or direction.shape != (base.dim,):
            raise ValueError(f"anchor and direction must have length {base.dim}")
        if not np.linalg.norm(direction) > 0:
            raise ValueError("direction must be nonzero")
        self.base = base
        self.anchor = anchor
        self.direction = direction

        def raw(t):
            return base.eval_many(anchor + t[:, :1] * direction)

        super().__init__(raw, SupportBox((t_lo,), (t_hi,)), name=f"{base.name}|line")


def restrict(o: Objective, a, v, r: float) -> LineRestriction:
    """Restrict ``o`` to the segment ``a + t v`` with ``|t| <= r``."""
    if not r > 0:
        raise ValueError(f"radius must be positive, got {r}")
    return LineRestriction(o, a, v, -r, r)


def line_box_interval(box: SupportBox, a, v) -> tuple[float, float]:
    """Parameter range ``[t_lo, t_hi]`` of the line ``a + t v`` inside ``box``.

    ``a`` must lie inside the box, so the interval contains 0.
    """
    a = np.asarray(a, dtype=float)
    v = np.asarray(v, dtype=float)
    t_lo, t_hi = -np.inf, np.inf
    for lo, hi, ai, vi in zip(box.lower, box.upper, a, v):
        if vi == 0.0:
            continue
        t1, t2 = (lo - ai) / vi, (hi - ai) / vi
        t_lo = max(t_lo, min(t1, t2))
        t_hi = min(t_hi, max(t1, t2))
    return float(t_lo), float(t_hi)


# Built-in benchmarks --------------------------------------------------------

def _log1(x):
    t = x[:, 0]
    return -np.log((t - 0.5) ** 2 + 0.00001) - np.log((t - 1.0) ** 2 + 0.01)


def _poly1(x):
    t = x[:, 0]
    return -t**6 + 2 * t**5 - 4 * t + 3


def _log2(x):
    u, w = x[:, 0], x[:, 1]
    return (
        -np.log((u - 0.5) ** 2 + (w - 0.5) ** 2 + 0.00001)
        - np.log((u + 0.5) ** 2 + (w + 0.5) ** 2 + 0.01)
    )


def make_log1() -> Objective:
    return Objective(_log1, SupportBox((-0.2,), (1.6,)), "log1",
                     known_global_argmax=[0.5], known_local_argmax=[1.0])


def make_poly1() -> Objective:
    return Objective(_poly1, SupportBox((-2.0,), (2.0,)), "poly1",
                     known_global_argmax=[-0.726], known_local_argmax=[1.551])


def make_log2() -> Objective:
    return Objective(_log2, SupportBox((-1.0, -1.0), (1.0, 1.0)), "log2",
                     known_global_argmax=[0.5, 0.5], known_local_argmax=[-0.5, -0.5])


def make_rb2(offset: float = 1.2) -> Objective:
    """Rosenbrock valley turned into a bump: ``offset - 100 (y - x^2)^2 - (1 - x)^2``.

    ``offset=1.5`` gives the variant with a higher plateau.
    """
    def rb2(x):
        u, w = x[:, 0], x[:, 1]
        return offset - 100.0 * (w - u * u) ** 2 - (1.0 - u) ** 2

    return Objective(rb2, SupportBox((-1.5, -1.5), (1.5, 1.5)), "rb2",
                     known_global_argmax=[1.0, 1.0])


REGISTRY: dict[str, Callable[[], Objective]] = {
    "log1": make_log1,
    "poly1": make_poly1,
    "log2": make_log2,
    "rb2": make_rb2,
}


def get_objective(name: str) -> Objective:
    try:
        return REGISTRY[name]()
    except KeyError:
        raise KeyError(f"unknown objective {name!r}; choose from {', '.join(REGISTRY)}") from None
