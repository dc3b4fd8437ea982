"""Closed-form bounds for bounded and unbounded edge laws."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from ..errors import PreconditionError
from ..weights import TwoPoint, WeightDistribution, is_bounded

EPS_GRID_POINTS = 200
EPS_MIN = 1e-4
EPS_ANCHORS = (1e-3, 1e-2, 0.1)
X_GRID_POINTS = 200


@dataclass(frozen=True)
class DeviationConstants:
    """Constants of the two-sided bound c1^n e^{-c2 n^2} <= P(W_n/n <= mu - x) <= C1^n e^{-C2 n^2}."""

    p: float
    epsilon: float
    x_prime: float
    C1: float
    C2: float
    c1: float
    c2: float

    def upper_log(self, n: int) -> float:
        """ln of the upper bound C1^n e^{-C2 n^2}."""
        return n * math.log(self.C1) - self.C2 * n * n

    def lower_log(self, n: int) -> float:
        return n * math.log(self.c1) - self.c2 * n * n

    def to_dict(self) -> dict:
        return asdict(self)


def _mu(dist: WeightDistribution) -> float:
    if not is_bounded(dist):
        raise PreconditionError("bound needs a finite essential supremum (μ < ∞)")
    return dist.essential_supremum


def epsilon_max(dist: WeightDistribution, x: float) -> float:
    """Supremum of the epsilons with x' = mu - (mu - x)/(1 - 2 eps) > 0, i.e. x / (2 mu)."""
    return x / (2.0 * _mu(dist))


def _check_x(dist: WeightDistribution, x: float) -> tuple[float, float]:
    mu = _mu(dist)
    if not (0 < x < mu):
        raise PreconditionError(f"need 0 < x < μ = {mu}, got x={x}")
    p = float(dist.tail(mu - x))
    if p >= 1:
        raise PreconditionError(f"p = H(μ - x) = {p} must be < 1")
    return mu, p


def deviation_constants(dist: WeightDistribution, x: float, epsilon: float) -> DeviationConstants:
    mu, p = _check_x(dist, x)
    if not (0 < epsilon < 0.5):
        raise PreconditionError(f"need 0 < ε < 1/2, got {epsilon}")
    x_prime = mu - (mu - x) / (1 - 2 * epsilon)
    if x_prime <= 0:
        raise PreconditionError(f"ε = {epsilon} too large: x' = {x_prime} <= 0")
    return DeviationConstants(
        p=p,
        epsilon=epsilon,
        x_prime=x_prime,
        C1=(2 * math.e / epsilon) ** epsilon,
        C2=epsilon**2 * float(dist.tail(mu - x_prime)) / 5,
        c1=(1 - p) ** -0.5,
        c2=0.5 * math.log(1 / (1 - p)),
    )


def epsilon_grid(dist: WeightDistribution, x: float, eps_min: float = EPS_MIN,
                 points: int = EPS_GRID_POINTS) -> np.ndarray:
    """Log-spaced epsilons in [eps_min, eps_max), plus the feasible anchors 1e-3, 1e-2, 0.1."""
    top = epsilon_max(dist, x)
    if eps_min >= top:
        return np.empty(0)
    grid = np.geomspace(eps_min, top, points + 1)[:-1]
    anchors = [a for a in EPS_ANCHORS if eps_min <= a < top]
    return np.unique(np.concatenate([grid, anchors]))


def _upper_logs(dist: WeightDistribution, x: float, eps: np.ndarray, n: int) -> np.ndarray:
    """n ln C1 - C2 n^2 for each epsilon, vectorized."""
    mu = dist.essential_supremum
    x_prime = mu - (mu - x) / (1 - 2 * eps)
    c2_big = eps**2 * dist.tail(mu - x_prime) / 5
    return n * eps * np.log(2 * math.e / eps) - c2_big * n * n


def optimize_epsilon(dist: WeightDistribution, x: float, n: int, eps_min: float = EPS_MIN,
                     points: int = EPS_GRID_POINTS) -> float:
    """Grid argmin of n ln C1 - C2 n^2, the log of the finite-n upper bound."""
    _check_x(dist, x)
    grid = epsilon_grid(dist, x, eps_min, points)
    if grid.size == 0:
        raise PreconditionError(f"no feasible ε in [{eps_min}, {epsilon_max(dist, x)})")
    return float(grid[int(np.argmin(_upper_logs(dist, x, grid, n)))])


def bisect_increasing(fn: Callable[[float], float], lo: float, hi: float,
                      on_step: Callable[[float, float], None] | None = None,
                      max_iter: int = 2000) -> float:
    """Root of an increasing ``fn`` with fn(lo) < 0 <= fn(hi), bisected to float resolution."""
    if not (fn(lo) < 0 <= fn(hi)):
        raise PreconditionError(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if fn(mid) < 0:
            lo = mid
        else:
            hi = mid
        if on_step is not None:
            on_step(lo, hi)
    return hi


def xbar(dist: WeightDistribution, n: int, tol: float = 1e-12,
         on_step: Callable[[float, float], None] | None = None) -> float:
    """Unique root of x * H(mu - x/2) = ln n / n on (0, mu]."""
    mu = _mu(dist)
    if isinstance(dist, TwoPoint):
        raise PreconditionError("x̄(n) needs a tail that is left-continuous at μ; twopoint has an atom there")
    if n < 3:
        raise PreconditionError(f"need n >= 3, got {n}")
    target = math.log(n) / n

    def phi(x):
        return x * float(dist.tail(mu - x / 2)) - target

    root = bisect_increasing(phi, 0.0, mu, on_step)
    if abs(phi(root)) > tol:
        raise ArithmeticError(f"bisection residual {phi(root):.3e} exceeds {tol}")
    if root < target:
        raise ArithmeticError("x̄(n) < ln n / n contradicts H <= 1")
    return root


def variance_upper_bound(dist: WeightDistribution, n: int, points: int = X_GRID_POINTS) -> float:
    """Bound on Var(W_n / n): min over x of 2x + 2 mu^2 C1^n e^{-C2 n^2}.

    Epsilon is tuned per x with :func:`optimize_epsilon`; the probability bound
    C1^n e^{-C2 n^2} is capped at 1. Multiply by n^2 for Var(W_n).
    """
    mu = _mu(dist)
    best = math.inf
    for x in np.geomspace(1e-6 * mu, 0.5 * mu, points):
        x = float(x)
        if float(dist.tail(mu - x)) >= 1:
            continue
        top = epsilon_max(dist, x)
        grid = epsilon_grid(dist, x, eps_min=min(EPS_MIN, top * 1e-4))
        log_q = min(0.0, float(_upper_logs(dist, x, grid, n).min()))
        best = min(best, 2 * x + 2 * mu * mu * math.exp(log_q))
    if not math.isfinite(best):
        raise PreconditionError("no feasible x on the grid")
    return best


def aks_reference_length(theta: float, n: int, strict: bool = True) -> float:
    """(1 - 4 ln 2 / theta) n, floored at 0: the whp path length in G(n, theta/n).

    The guarantee needs 0 < theta < ln n - 3 ln ln n; ``strict=False`` evaluates
    the formula outside that range too, as a reference curve.
    """
    if theta <= 0:
        raise PreconditionError(f"need θ > 0, got {theta}")
    if strict:
        if n < 3:
            raise PreconditionError(f"need n >= 3, got {n}")
        ceiling = math.log(n) - 3 * math.log(math.log(n))
        if not theta < ceiling:
            raise PreconditionError(f"need θ < ln n - 3 ln ln n = {ceiling:.4g}, got {theta}")
    return max(0.0, (1 - 4 * math.log(2) / theta) * n)
