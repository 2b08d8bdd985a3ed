"""Closed-form worst cases of lifted measures under ambiguity.

Both ambiguity sets admit the same reduction: the worst case of the lift is the
lift of a pointwise-inflated level curve, so the crossing solver from the
lifting module is reused verbatim with an inflated phi.

* Transport ball of radius delta in the order-p Wasserstein distance:
  the curve inflates by  delta * (1 - L(x))^{-1/p}.
* Mean/standard-deviation ball (m, v): the one-sided Chebyshev (Cantelli)
  envelope  m + v * sqrt(L(x) / (1 - L(x)))  — identical for the quantile,
  tail-average and order-2 entropic families.

Both require the level function to stay strictly below 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .classical import evar_value
from .distributions import DiscreteDistribution, MomentSet
from .errors import PreconditionError
from .levels import Constant, LambdaFunction
from .lifting import evar_family, lambda_lift, solve_level_crossing

__all__ = ["RobustResult", "worst_case_mean_variance", "worst_case_wasserstein"]


@dataclass(frozen=True)
class RobustResult:
    """Worst-case value, its crossing point, the nominal value, and the premium."""

    value: float
    x_star: float
    nominal: float
    inflation: float


def worst_case_wasserstein(
    dist: DiscreteDistribution,
    p: float,
    level_fn: LambdaFunction,
    delta: float,
    *,
    rel_tol: float = 1e-12,
    max_iter: int = 200,
) -> RobustResult:
    """sup over laws within Wasserstein-p distance delta of the lifted EVaR^p."""
    if not (isinstance(p, (int, float)) and math.isfinite(p) and p >= 1.0):
        raise PreconditionError("order p must be a finite number >= 1")
    if not (math.isfinite(delta) and delta >= 0.0):
        raise PreconditionError("transport radius delta must be finite and >= 0")
    lmax = level_fn.max_level
    if lmax >= 1.0:
        raise PreconditionError("level function must stay strictly below 1")

    def phi(alpha: float) -> float:
        return evar_value(dist, p, alpha) + delta * (1.0 - alpha) ** (-1.0 / p)

    nominal = lambda_lift(dist, evar_family(dist, p), level_fn,
                          rel_tol=rel_tol, max_iter=max_iter).value
    if isinstance(level_fn, Constant):
        value = phi(level_fn.level)
        return RobustResult(value, value, nominal, value - nominal)
    lo = dist.essinf - 1.0
    hi = dist.esssup + delta * (1.0 - lmax) ** (-1.0 / p) + 1.0
    cross = solve_level_crossing(phi, level_fn, lo, hi, rel_tol=rel_tol, max_iter=max_iter)
    return RobustResult(cross.x, cross.x, nominal, cross.x - nominal)


def worst_case_mean_variance(
    moments: MomentSet,
    level_fn: LambdaFunction,
    measure: str = "es",
    *,
    rel_tol: float = 1e-12,
    max_iter: int = 200,
) -> RobustResult:
    """Worst case over all laws with mean m and standard deviation <= v.

    The measure tag ("var" | "es" | "evar2") is accepted for interface symmetry;
    all three share the Cantelli envelope, so the value does not depend on it.
    """
    if measure not in ("var", "es", "evar2"):
        raise PreconditionError(f"unknown measure tag {measure!r}")
    lmax = level_fn.max_level
    if lmax >= 1.0:
        raise PreconditionError("level function must stay strictly below 1")
    m, v = moments.m, moments.v

    def phi(alpha: float) -> float:
        return m + v * math.sqrt(alpha / (1.0 - alpha))

    if isinstance(level_fn, Constant):
        value = phi(level_fn.level)
        return RobustResult(value, value, m, value - m)
    lo = m - 1.0
    hi = m + v * math.sqrt(lmax / (1.0 - lmax)) + 1.0
    cross = solve_level_crossing(phi, level_fn, lo, hi, rel_tol=rel_tol, max_iter=max_iter)
    return RobustResult(cross.x, cross.x, m, cross.x - m)
