"""Edge passage-time laws.

Every law is sampled by inverse transform from a uniform draw ``u`` in
(0, 1], so a fixed generator stream produces the same weights everywhere.
Infinite essential suprema are plain ``math.inf``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, PreconditionError


@dataclass(frozen=True)
class TwoPoint:
    """Value ``b`` with probability ``p0``, value ``a`` otherwise."""

    a: float
    b: float
    p0: float

    kind = "twopoint"

    def __post_init__(self):
        if not (0 < self.a < self.b):
            raise PreconditionError(f"twopoint needs 0 < a < b, got a={self.a}, b={self.b}")
        if not (0 < self.p0 < 1):
            raise PreconditionError(f"twopoint needs 0 < p0 < 1, got {self.p0}")

    def tail(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x < self.a, 1.0, np.where(x < self.b, self.p0, 0.0))

    def inverse(self, u):
        u = np.asarray(u, dtype=float)
        return np.where(u < self.p0, self.b, self.a)

    @property
    def essential_supremum(self) -> float:
        return float(self.b)

    def spec(self) -> str:
        return f"twopoint:a={self.a!r},b={self.b!r},p0={self.p0!r}"


@dataclass(frozen=True)
class Uniform:
    lo: float
    hi: float

    kind = "uniform"

    def __post_init__(self):
        if not (0 <= self.lo < self.hi):
            raise PreconditionError(f"uniform needs 0 <= lo < hi, got lo={self.lo}, hi={self.hi}")

    def tail(self, x):
        x = np.asarray(x, dtype=float)
        inside = (self.hi - x) / (self.hi - self.lo)
        return np.where(x < self.lo, 1.0, np.where(x < self.hi, inside, 0.0))

    def inverse(self, u):
        # u in (0, 1] keeps samples strictly positive even when lo == 0
        return self.lo + (self.hi - self.lo) * np.asarray(u, dtype=float)

    @property
    def essential_supremum(self) -> float:
        return float(self.hi)

    def spec(self) -> str:
        return f"uniform:lo={self.lo!r},hi={self.hi!r}"


@dataclass(frozen=True)
class Exponential:
    lam: float

    kind = "exp"

    def __post_init__(self):
        if not self.lam > 0:
            raise PreconditionError(f"exp needs lambda > 0, got {self.lam}")

    def tail(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x < 0, 1.0, np.exp(-self.lam * np.maximum(x, 0.0)))

    def inverse(self, u):
        return -np.log(np.asarray(u, dtype=float)) / self.lam

    @property
    def essential_supremum(self) -> float:
        return math.inf

    def spec(self) -> str:
        return f"exp:lambda={self.lam!r}"


@dataclass(frozen=True)
class Pareto:
    """Tail ``(x/scale)**-alpha`` for ``x >= scale``."""

    alpha: float
    scale: float = 1.0

    kind = "pareto"

    def __post_init__(self):
        if not (self.alpha > 0 and self.scale > 0):
            raise PreconditionError(f"pareto needs alpha, scale > 0, got {self.alpha}, {self.scale}")

    def tail(self, x):
        x = np.asarray(x, dtype=float)
        ratio = np.maximum(x, self.scale) / self.scale
        return np.where(x < self.scale, 1.0, ratio ** -self.alpha)

    def inverse(self, u):
        return self.scale * np.asarray(u, dtype=float) ** (-1.0 / self.alpha)

    @property
    def essential_supremum(self) -> float:
        return math.inf

    def spec(self) -> str:
        return f"pareto:alpha={self.alpha!r},scale={self.scale!r}"


WeightDistribution = TwoPoint | Uniform | Exponential | Pareto


def tail(dist: WeightDistribution, x: float) -> float:
    """P(X_e > x)."""
    return float(dist.tail(x))


def essential_supremum(dist: WeightDistribution) -> float:
    return dist.essential_supremum


def is_bounded(dist: WeightDistribution) -> bool:
    return math.isfinite(dist.essential_supremum)


def uniform_draws(rng: np.random.Generator, size=None):
    """Uniform variates on (0, 1], the input of every inverse transform."""
    return 1.0 - rng.random(size)


def sample(dist: WeightDistribution, rng: np.random.Generator) -> float:
    return float(dist.inverse(uniform_draws(rng)))


def _require_unbounded(dist, what):
    if is_bounded(dist):
        raise PreconditionError(f"{what} undefined: μ < ∞")


def f_of_n(dist: WeightDistribution, n: int) -> float:
    """The level ``x`` with ``tail(x) == ln n / n``."""
    _require_unbounded(dist, "f(n)")
    if n < 3:
        raise PreconditionError(f"f(n) needs n >= 3, got {n}")
    ln = math.log(n)
    if isinstance(dist, Exponential):
        return (ln - math.log(ln)) / dist.lam
    return dist.scale * (n / ln) ** (1.0 / dist.alpha)


def g_of_n(dist: WeightDistribution, n: int) -> float:
    """Level above which, by the union bound, no edge of K_n lies whp.

    ``n**2 * tail(g(n))`` equals ``1/ln n`` (exponential) or
    ``1/ln ln n`` (Pareto).
    """
    _require_unbounded(dist, "g(n)")
    if n < 16:
        raise PreconditionError(f"g(n) needs n >= 16, got {n}")
    ln = math.log(n)
    lnln = math.log(ln)
    if isinstance(dist, Exponential):
        return (2 * ln + lnln) / dist.lam
    return dist.scale * n ** (2.0 / dist.alpha) * lnln ** (1.0 / dist.alpha)


_KINDS = {
    "twopoint": (TwoPoint, {"a": "a", "b": "b", "p0": "p0"}),
    "uniform": (Uniform, {"lo": "lo", "hi": "hi"}),
    "exp": (Exponential, {"lambda": "lam"}),
    "pareto": (Pareto, {"alpha": "alpha", "scale": "scale"}),
}


def parse_dist(text: str) -> WeightDistribution:
    """Parse ``"kind:key=value,..."``, e.g. ``"twopoint:a=1,b=2,p0=0.05"``."""
    kind, _, rest = text.strip().lower().partition(":")
    if kind not in _KINDS:
        raise ConfigError(f"unknown distribution kind {kind!r}")
    cls, keys = _KINDS[kind]
    kwargs = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, value = item.partition("=")
        key = key.strip()
        if not eq or key not in keys:
            raise ConfigError(f"bad parameter {item!r} for {kind}")
        try:
            kwargs[keys[key]] = float(value)
        except ValueError:
            raise ConfigError(f"parameter {key} is not a number: {value!r}") from None
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"missing parameters for {kind}: {exc}") from None
