"""Brute-force references for testing: dense convolutions, grid argmax, FD checks.

None of this shares code with the optimizers' quadrature; it samples the
objective on a uniform midpoint grid and does the sums directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .kernel import Kernel1D, KernelND, eval1, evalN
from .objective import Objective, SupportBox
from .rescale import PowerLift


@dataclass(frozen=True)
class DenseGrid:
    """Uniform grid over a box with ``counts[i]`` nodes per axis.

    ``midpoint=True`` places nodes at cell centres; otherwise the nodes
    include both box edges.
    """

    lower: tuple
    upper: tuple
    counts: tuple
    midpoint: bool = True

    @classmethod
    def with_resolution(cls, box: SupportBox, resolution: float, midpoint: bool = True) -> "DenseGrid":
        counts = tuple(
            max(2, int(np.ceil(w / resolution - 1e-9)) + (0 if midpoint else 1)) for w in box.widths
        )
        return cls(box.lower, box.upper, counts, midpoint)

    @property
    def dim(self) -> int:
        return len(self.counts)

    def axis(self, i: int) -> np.ndarray:
        lo, hi, n = self.lower[i], self.upper[i], self.counts[i]
        if self.midpoint:
            step = (hi - lo) / n
            return lo + step * (np.arange(n) + 0.5)
        return np.linspace(lo, hi, n)

    def spacing(self, i: int) -> float:
        lo, hi, n = self.lower[i], self.upper[i], self.counts[i]
        return (hi - lo) / n if self.midpoint else (hi - lo) / (n - 1)

    @property
    def resolution(self) -> float:
        return max(self.spacing(i) for i in range(self.dim))

    def nodes(self) -> np.ndarray:
        axes = [self.axis(i) for i in range(self.dim)]
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, self.dim)


@dataclass(frozen=True)
class SampledFunction:
    """Values of a function on a uniform 1-D grid."""

    theta: np.ndarray
    values: np.ndarray

    @property
    def step(self) -> float:
        return float(self.theta[1] - self.theta[0])


def dense_convolution_1d(o: Objective, p: PowerLift, k: Kernel1D, grid: DenseGrid) -> SampledFunction:
    """``F(theta_j) = sum_t step * g(theta_j - t) * f^N(t)`` at every grid node."""
    if o.dim != 1:
        raise ValueError("dense_convolution_1d needs a 1-dimensional objective")
    if grid.resolution > k.delta / 10 * (1 + 1e-9):
        raise ValueError(f"grid resolution {grid.resolution} is coarser than delta/10 = {k.delta / 10}")
    t = grid.axis(0)
    h = grid.spacing(0)
    mass = p(o.eval_many(t))
    n = len(t)
    kern = eval1(k, h * np.arange(-(n - 1), n))
    values = h * np.convolve(mass, kern, mode="valid")
    return SampledFunction(t, values)


def dense_convolution_2d(o: Objective, p: PowerLift, k: KernelND, grid: DenseGrid,
                         at: Optional[np.ndarray] = None) -> np.ndarray:
    """Surrogate values at the points ``at`` (default: all grid nodes), by direct summation."""
    if o.dim != 2:
        raise ValueError("dense_convolution_2d needs a 2-dimensional objective")
    if any(c > 400 for c in grid.counts):
        raise ValueError("2-D oracle grids are limited to 400 x 400")
    x = grid.nodes()
    mass = p(o.eval_many(x)) * grid.spacing(0) * grid.spacing(1)
    pts = x if at is None else np.atleast_2d(at)
    return np.array([np.dot(evalN(k, q - x), mass) for q in pts])


def dense_argmax(o: Objective, grid: DenseGrid) -> np.ndarray:
    """Grid node with the largest value; ties go to the lexicographically smallest node."""
    nodes = grid.nodes()
    vals = o.eval_many(nodes)
    best = np.flatnonzero(vals == vals.max())
    # meshgrid with indexing="ij" enumerates nodes in lexicographic order
    return nodes[best[0]]


def central_difference(F: SampledFunction) -> np.ndarray:
    return (F.values[2:] - F.values[:-2]) / (2 * F.step)


def second_difference(F: SampledFunction) -> np.ndarray:
    return (F.values[2:] - 2 * F.values[1:-1] + F.values[:-2]) / F.step**2


def fd_derivative_check(F: SampledFunction, analytic: Callable[[float], float], order: int = 1,
                        stride: int = 1) -> float:
    """Largest ``|FD(F) - analytic|`` over interior nodes (every ``stride``-th one).

    ``order`` selects the first or second central difference.
    """
    if len(F.values) < 3:
        raise ValueError("need at least 3 samples for a central difference")
    fd = central_difference(F) if order == 1 else second_difference(F)
    theta = F.theta[1:-1]
    idx = np.arange(0, len(theta), stride)
    return float(max(abs(fd[j] - analytic(theta[j])) for j in idx))


def mass_radius(o: Objective, p: PowerLift, center: float, grid: DenseGrid, fraction: float = 2 / 3) -> float:
    """Smallest radius around ``center`` holding ``fraction`` of the lifted mass (1-D)."""
    t = grid.axis(0)
    mass = p(o.eval_many(t))
    order = np.argsort(np.abs(t - center), kind="stable")
    cum = np.cumsum(mass[order])
    j = int(np.searchsorted(cum, fraction * cum[-1]))
    return float(abs(t[order[j]] - center))


def lifted_mass_fraction(o: Objective, p: PowerLift, center: float, eps: float, grid: DenseGrid) -> float:
    """Share of lifted mass within ``eps`` of ``center`` (1-D)."""
    t = grid.axis(0)
    mass = p(o.eval_many(t))
    return float(mass[np.abs(t - center) <= eps].sum() / mass.sum())


def concentration_ratio(o: Objective, center: float, eps: float, grid: DenseGrid) -> float:
    """``mean(f on the eps-ball) / sup(f outside) - 1`` on the grid (1-D)."""
    t = grid.axis(0)
    f = o.eval_many(t)
    inside = np.abs(t - center) <= eps
    return float(f[inside].mean() / f[~inside].max() - 1.0)
