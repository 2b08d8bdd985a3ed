"""Finite-support distribution algebra.

Losses are finitely many (value, probability) atoms kept sorted by value with
duplicates merged, so quantiles, tail averages, partial moments and Wasserstein
distances are exact finite computations on CDF breakpoints. Nothing downstream
ever needs quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import PreconditionError

__all__ = [
    "DiscreteDistribution",
    "MomentSet",
    "ScenarioTable",
    "combine",
    "icx_leq",
    "make_distribution",
    "mix",
    "point_mass",
    "wasserstein_distance",
]


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DiscreteDistribution:
    """A finite loss law: strictly increasing values, positive masses summing to one.

    Instances are immutable; build them with :func:`make_distribution`, which
    merges duplicate values and renormalizes the masses.
    """

    values: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float, copy=True)
        probs = np.array(self.probs, dtype=float, copy=True)
        if values.ndim != 1:
            raise PreconditionError("atom values must be a flat sequence of numbers")
        if values.size == 0:
            raise PreconditionError("a distribution needs at least one atom")
        if values.shape != probs.shape:
            raise PreconditionError("values and probs must have equal length")
        if not np.all(np.isfinite(values)):
            raise PreconditionError("atom values must be finite")
        if not np.all(np.isfinite(probs)) or np.any(probs <= 0.0):
            raise PreconditionError("atom probabilities must be positive and finite")
        if values.size > 1 and np.any(np.diff(values) <= 0.0):
            raise PreconditionError("atom values must be strictly increasing")
        total = float(probs.sum())
        if abs(total - 1.0) > 1e-12:
            raise PreconditionError(f"atom probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "values", _readonly(values))
        object.__setattr__(self, "probs", _readonly(probs))
        object.__setattr__(self, "_cum", _readonly(np.cumsum(probs)))

    # -- basic statistics ---------------------------------------------------

    @property
    def support_size(self) -> int:
        return int(self.values.size)

    @property
    def essinf(self) -> float:
        return float(self.values[0])

    @property
    def esssup(self) -> float:
        return float(self.values[-1])

    @property
    def mean(self) -> float:
        return float(self.values @ self.probs)

    @property
    def variance(self) -> float:
        m = self.mean
        return float(self.probs @ (self.values - m) ** 2)

    def atoms(self) -> list[tuple[float, float]]:
        """The (value, probability) pairs, sorted by value."""
        return [(float(v), float(p)) for v, p in zip(self.values, self.probs)]

    def __repr__(self) -> str:  # keeps test failures readable
        inside = ", ".join(f"{v:g}: {p:g}" for v, p in self.atoms())
        return f"DiscreteDistribution({{{inside}}})"

    # -- quantiles and tail functionals --------------------------------------

    def quantile(self, alpha: float) -> float:
        """Left alpha-quantile  inf{x : F(x) >= alpha}  (essinf at 0, esssup at 1)."""
        _check_closed_level(alpha)
        if alpha == 0.0:
            return self.essinf
        if alpha == 1.0:
            return self.esssup
        idx = int(np.searchsorted(self._cum, alpha, side="left"))
        return float(self.values[min(idx, self.support_size - 1)])

    def upper_quantile(self, alpha: float) -> float:
        """Right alpha-quantile  sup{x : F(x-) <= alpha}."""
        _check_closed_level(alpha)
        idx = int(np.searchsorted(self._cum, alpha, side="right"))
        return float(self.values[min(idx, self.support_size - 1)])

    def expected_shortfall(self, alpha: float) -> float:
        """Tail average  (1/(1-alpha)) * integral_alpha^1 VaR_s ds;  esssup at alpha=1.

        Computed exactly on the CDF breakpoint partition: the quantile function
        is piecewise constant, so the integral is a finite weighted sum.
        """
        _check_closed_level(alpha)
        if alpha == 0.0:
            return self.mean
        if alpha == 1.0:
            return self.esssup
        cum = np.concatenate(([0.0], self._cum))
        lengths = np.clip(np.minimum(cum[1:], 1.0) - np.maximum(cum[:-1], alpha), 0.0, None)
        return float((self.values * lengths).sum() / (1.0 - alpha))

    def partial_moment(self, t: float, p: float) -> float:
        """Upper partial moment  E[(X - t)_+^p]  for finite t and order p >= 1."""
        if not math.isfinite(t):
            raise PreconditionError("partial moment threshold must be finite")
        if not p >= 1.0:
            raise PreconditionError("partial moment order must be >= 1")
        return self._plus_power_sum(t, p)

    def _plus_power_sum(self, t: float, r: float) -> float:
        # unvalidated core shared with the objective-slope machinery (r > 0)
        diff = self.values - t
        pos = diff > 0.0
        if not pos.any():
            return 0.0
        if r == 1.0:
            return float(self.probs[pos] @ diff[pos])
        return float(self.probs[pos] @ diff[pos] ** r)

    def survival(self, x: float) -> float:
        """P(X > x)."""
        return float(self.probs[self.values > x].sum())

    # -- transforms -----------------------------------------------------------

    def shift(self, c: float) -> "DiscreteDistribution":
        """Law of X + c."""
        if not math.isfinite(c):
            raise PreconditionError("shift must be finite")
        return make_distribution(self.values + c, self.probs)

    def scale(self, s: float) -> "DiscreteDistribution":
        """Law of s * X."""
        if not math.isfinite(s):
            raise PreconditionError("scale must be finite")
        return make_distribution(self.values * s, self.probs)


def make_distribution(
    values: Iterable[float], probs: Iterable[float] | None = None
) -> DiscreteDistribution:
    """Build a distribution from atoms; uniform masses when probs is omitted.

    Duplicate values (exact float equality) are merged with their masses added,
    and masses are renormalized by their sum.
    """
    vals = np.asarray(list(values), dtype=float)
    if vals.ndim != 1:
        raise PreconditionError("atom values must be a flat sequence of numbers")
    if vals.size == 0:
        raise PreconditionError("a distribution needs at least one atom")
    if not np.all(np.isfinite(vals)):
        raise PreconditionError("atom values must be finite")
    if probs is None:
        pr = np.full(vals.size, 1.0 / vals.size)
    else:
        pr = np.asarray(list(probs), dtype=float)
        if pr.shape != vals.shape:
            raise PreconditionError("values and probs must have equal length")
        if not np.all(np.isfinite(pr)) or np.any(pr <= 0.0):
            raise PreconditionError("atom probabilities must be positive and finite")
    total = float(pr.sum())
    if not math.isfinite(total) or total <= 0.0:
        raise PreconditionError("atom probabilities must sum to a positive number")
    pr = pr / total
    uniq, inverse = np.unique(vals, return_inverse=True)
    merged = np.bincount(inverse, weights=pr, minlength=uniq.size)
    return DiscreteDistribution(uniq, merged)


def point_mass(value: float) -> DiscreteDistribution:
    """The degenerate law delta_value."""
    return make_distribution([value])


def mix(
    d1: DiscreteDistribution, d2: DiscreteDistribution, lam: float
) -> DiscreteDistribution:
    """Law mixture  lam * d1 + (1 - lam) * d2  on the merged support."""
    if not 0.0 <= lam <= 1.0:
        raise PreconditionError("mixture weight must lie in [0, 1]")
    if lam == 1.0:
        return d1
    if lam == 0.0:
        return d2
    return make_distribution(
        np.concatenate((d1.values, d2.values)),
        np.concatenate((lam * d1.probs, (1.0 - lam) * d2.probs)),
    )


def wasserstein_distance(
    d1: DiscreteDistribution, d2: DiscreteDistribution, k: float
) -> float:
    """Order-k Wasserstein distance, exact via the merged quantile partition.

    W_k(X, Y)^k = integral_0^1 |VaR_s(X) - VaR_s(Y)|^k ds; both quantile
    functions are piecewise constant on the union of CDF breakpoints.
    """
    if not k >= 1.0:
        raise PreconditionError("Wasserstein order must be >= 1")
    u = np.unique(np.concatenate(([0.0], d1._cum, d2._cum)))
    ends = u[1:]
    q1 = d1.values[np.minimum(np.searchsorted(d1._cum, ends, side="left"), d1.support_size - 1)]
    q2 = d2.values[np.minimum(np.searchsorted(d2._cum, ends, side="left"), d2.support_size - 1)]
    total = float(np.diff(u) @ np.abs(q1 - q2) ** k)
    return total ** (1.0 / k)


def icx_leq(
    d1: DiscreteDistribution,
    d2: DiscreteDistribution,
    p: float,
    grid: Sequence[float] | None = None,
) -> bool:
    """Necessary grid check for the order-p increasing-convex comparison.

    Compares ||(X - x)_+||_{p-1} <= ||(Y - x)_+||_{p-1} (+1e-12) on a grid
    defaulting to the merged support plus segment midpoints; at p = 1 the
    order-0 norm degenerates to the survival function comparison.
    """
    if not p >= 1.0:
        raise PreconditionError("comparison order must be >= 1")
    if grid is None:
        support = np.unique(np.concatenate((d1.values, d2.values)))
        mids = 0.5 * (support[:-1] + support[1:]) if support.size > 1 else np.empty(0)
        pts = np.concatenate((support, mids, [support[0] - 1.0]))
    else:
        pts = np.asarray(list(grid), dtype=float)
        if pts.size == 0:
            raise PreconditionError("comparison grid must be non-empty")
    r = p - 1.0
    for x in map(float, pts):
        if r == 0.0:
            lhs, rhs = d1.survival(x), d2.survival(x)
        else:
            lhs = d1._plus_power_sum(x, r) ** (1.0 / r)
            rhs = d2._plus_power_sum(x, r) ** (1.0 / r)
        if lhs > rhs + 1e-12:
            return False
    return True


@dataclass(frozen=True, eq=False)
class ScenarioTable:
    """Joint scenarios: one weight per row, one value column per position name.

    All positions live on the same finite probability space, which is what
    makes monotonicity and subadditivity checks meaningful.
    """

    weights: np.ndarray
    positions: Mapping[str, np.ndarray]

    def __post_init__(self):
        weights = np.array(self.weights, dtype=float, copy=True)
        if weights.ndim != 1 or weights.size == 0:
            raise PreconditionError("a scenario table needs at least one scenario")
        if not np.all(np.isfinite(weights)) or np.any(weights <= 0.0):
            raise PreconditionError("scenario weights must be positive and finite")
        weights = weights / float(weights.sum())
        cols = {}
        for name, col in dict(self.positions).items():
            arr = np.array(col, dtype=float, copy=True)
            if arr.shape != weights.shape:
                raise PreconditionError(f"column {name!r} length differs from weights")
            if not np.all(np.isfinite(arr)):
                raise PreconditionError(f"column {name!r} has non-finite values")
            cols[name] = _readonly(arr)
        object.__setattr__(self, "weights", _readonly(weights))
        object.__setattr__(self, "positions", cols)

    def column(self, name: str) -> DiscreteDistribution:
        """Marginal law of a single position."""
        return combine(self, {name: 1.0})


def combine(table: ScenarioTable, weights: Mapping[str, float]) -> DiscreteDistribution:
    """Law of the linear combination  sum_name weights[name] * position[name]."""
    total = np.zeros_like(table.weights)
    for name, w in weights.items():
        if name not in table.positions:
            raise KeyError(f"unknown scenario column {name!r}")
        total = total + float(w) * table.positions[name]
    return make_distribution(total, table.weights)


@dataclass(frozen=True)
class MomentSet:
    """Ambiguity set of laws with mean m and standard deviation at most v."""

    m: float
    v: float

    def __post_init__(self):
        if not math.isfinite(self.m):
            raise PreconditionError("mean must be finite")
        if not (math.isfinite(self.v) and self.v >= 0.0):
            raise PreconditionError("standard deviation bound must be finite and >= 0")


def _check_closed_level(alpha: float) -> None:
    if not 0.0 <= alpha <= 1.0:
        raise PreconditionError(f"level {alpha!r} outside [0, 1]")
