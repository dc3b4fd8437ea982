"""Seeded Monte Carlo campaigns.

Replicate ``r`` of row ``n`` draws from ``np.random.default_rng([seed, n, r])``
and nothing else, so reports do not depend on how replicates are scheduled
across worker processes.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from ..dfs import longest_u_excursion, run_dfs
from ..errors import PreconditionError
from ..exact import DP_MAX_N, exact_values
from ..graph import num_pairs, sample_gnp, sample_weights
from ..lower_bound import best_threshold_lower_bound, default_grid
from ..weights import WeightDistribution, f_of_n, g_of_n, is_bounded, uniform_draws
from .bounds import aks_reference_length

SCHEMA = 1
Z95 = 1.959963984540054
BLOCK = 4096
MIN_EVENTS = 10


def replicate_rng(seed: int, n: int, r: int) -> np.random.Generator:
    return np.random.default_rng([seed, n, r])


@dataclass
class CampaignReport:
    kind: str
    config: dict[str, Any]
    rows: list[dict[str, Any]]
    flags: dict[str, Any] = field(default_factory=dict)
    fit: dict[str, Any] | None = None
    schema: int = SCHEMA

    def to_dict(self) -> dict:
        return {
            "schema": self.schema,
            "kind": self.kind,
            "config": self.config,
            "rows": self.rows,
            "fit": self.fit,
            "flags": self.flags,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=True) + "\n"

    def to_csv(self) -> str:
        """Per-n rows for plotting; list-valued columns are dropped, config goes in a comment line."""
        columns: list[str] = []
        for row in self.rows:
            for key, value in row.items():
                if key not in columns and not isinstance(value, (list, dict)):
                    columns.append(key)
        buf = io.StringIO()
        buf.write("# " + json.dumps({"schema": self.schema, "kind": self.kind, "config": self.config},
                                    sort_keys=True) + "\n")
        writer = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            writer.writerow({k: _csv_value(row.get(k)) for k in columns})
        return buf.getvalue()


def _csv_value(v):
    if isinstance(v, float):
        return repr(v)
    return "" if v is None else v


def _run(fn: Callable, tasks: Iterable, jobs: int) -> list:
    tasks = list(tasks)
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))


def _blocks(replicates: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + BLOCK, replicates)) for lo in range(0, replicates, BLOCK)]


def _exact_block(bounds: tuple[int, int], dist: WeightDistribution, n: int, seed: int) -> np.ndarray:
    lo, hi = bounds
    m = num_pairs(n)
    u = np.empty((hi - lo, m))
    for k, r in enumerate(range(lo, hi)):
        u[k] = uniform_draws(replicate_rng(seed, n, r), m)
    return exact_values(n, dist.inverse(u))


def _lower_bound_one(r: int, dist: WeightDistribution, n: int, seed: int) -> float:
    w = sample_weights(n, dist, replicate_rng(seed, n, r))
    return best_threshold_lower_bound(w).value


def sample_wn(dist: WeightDistribution, n: int, replicates: int, seed: int, jobs: int = 1
              ) -> tuple[np.ndarray, str]:
    """Per-replicate W_n (exact for n <= 22) or its DFS lower bound, with the mode used."""
    if n <= DP_MAX_N:
        parts = _run(partial(_exact_block, dist=dist, n=n, seed=seed), _blocks(replicates), jobs)
        return np.concatenate(parts), "exact"
    values = _run(partial(_lower_bound_one, dist=dist, n=n, seed=seed), range(replicates), jobs)
    return np.asarray(values), "lower_bound"


def _config(**kw) -> dict:
    out = {}
    for key, value in kw.items():
        if hasattr(value, "spec"):
            value = value.spec()
        elif isinstance(value, tuple):
            value = list(value)
        out[key] = value
    return out


def estimate_time_constant(dist: WeightDistribution, ns: Sequence[int], replicates: int, seed: int,
                           jobs: int = 1) -> CampaignReport:
    """Mean of W_n / n per n, with 95% normal confidence half-widths."""
    if replicates < 2:
        raise PreconditionError(f"need at least 2 replicates, got {replicates}")
    if any(n < 2 for n in ns):
        raise PreconditionError("every n must be >= 2")
    mu = dist.essential_supremum
    rows = []
    below_all = True
    for n in ns:
        values, mode = sample_wn(dist, n, replicates, seed, jobs)
        ratio = values / n
        sd = float(np.std(ratio, ddof=1))
        rows.append({
            "n": n,
            "mode": mode,
            "replicates": replicates,
            "mean": float(np.mean(ratio)),
            "variance": sd * sd,
            "ci_half_width": Z95 * sd / math.sqrt(replicates),
            "min": float(ratio.min()),
            "max": float(ratio.max()),
            "var_wn": float(np.var(values, ddof=1)),
        })
        below_all &= bool(np.all(ratio < mu))
    means = [row["mean"] for row in rows]
    flags = {
        "means_increasing": all(a < b for a, b in zip(means, means[1:])),
        "means_below_mu": all(m < mu for m in means) if is_bounded(dist) else None,
        "replicates_below_mu": below_all if is_bounded(dist) else None,
        "mixed_modes": len({row["mode"] for row in rows}) > 1,
    }
    config = _config(dist=dist, n_list=tuple(ns), replicates=replicates, seed=seed, ci_level=0.95,
                     mu=mu if is_bounded(dist) else "inf")
    return CampaignReport("time-constant", config, rows, flags)


def wilson_interval(k: int, total: int, z: float = Z95) -> tuple[float, float]:
    p = k / total
    denom = 1 + z * z / total
    centre = (p + z * z / (2 * total)) / denom
    half = z * math.sqrt(p * (1 - p) / total + z * z / (4 * total * total)) / denom
    lo = 0.0 if k == 0 else max(0.0, centre - half)
    hi = 1.0 if k == total else min(1.0, centre + half)
    return lo, hi


def weighted_polyfit(xs, ys, weights, degree: int) -> tuple[np.ndarray, float]:
    """Least squares of ys on 1, x, ..., x^degree with the given weights.

    Returns coefficients in increasing degree and the weighted residual sum of squares.
    """
    xs, ys, weights = (np.asarray(a, dtype=float) for a in (xs, ys, weights))
    design = np.vander(xs, degree + 1, increasing=True)
    root_w = np.sqrt(weights)
    coef, *_ = np.linalg.lstsq(design * root_w[:, None], ys * root_w, rcond=None)
    resid = float(np.sum(weights * (ys - design @ coef) ** 2))
    return coef, resid


def estimate_deviation(dist: WeightDistribution, x: float, ns: Sequence[int], replicates: int,
                       seed: int, jobs: int = 1) -> CampaignReport:
    """Frequency of W_n <= (mu - x) n per n, and a quadratic fit of its logarithm."""
    if not is_bounded(dist):
        raise PreconditionError("deviation campaign needs μ < ∞")
    mu = dist.essential_supremum
    if not (0 < x < mu):
        raise PreconditionError(f"need 0 < x < μ = {mu}, got x={x}")
    p = float(dist.tail(mu - x))
    if p >= 1:
        raise PreconditionError(f"p = H(μ - x) = {p} must be < 1")
    if any(not (2 <= n <= DP_MAX_N) for n in ns):
        raise PreconditionError(f"deviation campaign needs 2 <= n <= {DP_MAX_N}")
    if replicates < 2:
        raise PreconditionError(f"need at least 2 replicates, got {replicates}")
    rows = []
    for n in ns:
        values, _ = sample_wn(dist, n, replicates, seed, jobs)
        events = int(np.count_nonzero(values <= (mu - x) * n))
        p_hat = events / replicates
        se = math.sqrt(p_hat * (1 - p_hat) / replicates)
        lo, hi = wilson_interval(events, replicates)
        floor = (1 - p) ** (n * (n - 1) / 2)
        rows.append({
            "n": n,
            "mode": "exact",
            "replicates": replicates,
            "events": events,
            "p_hat": p_hat,
            "se": se,
            "ln_p_hat": math.log(p_hat) if events else None,
            "ln_ci_low": math.log(lo) if lo > 0 else None,
            "ln_ci_high": math.log(hi),
            "floor": floor,
            "floor_respected": p_hat >= floor - 4 * se,
            "insufficient": events < MIN_EVENTS,
        })
    usable = [row for row in rows if row["events"] > 0]
    fit = None
    flags: dict[str, Any] = {"floor_respected": all(row["floor_respected"] for row in rows)}
    if len(usable) >= 3:
        xs = [row["n"] for row in usable]
        ys = [row["ln_p_hat"] for row in usable]
        ws = [row["events"] for row in usable]
        quad, quad_resid = weighted_polyfit(xs, ys, ws, 2)
        lin, lin_resid = weighted_polyfit(xs, ys, ws, 1)
        c2_floor = 0.5 * math.log(1 / (1 - p))
        fit = {
            "model": "ln p_hat ~ a + b n + c n^2, weights = event counts",
            "a": float(quad[0]), "b": float(quad[1]), "c": float(quad[2]),
            "weighted_residual": quad_resid,
            "linear_a": float(lin[0]), "linear_b": float(lin[1]),
            "linear_weighted_residual": lin_resid,
            "floor_quadratic_coefficient": -c2_floor,
        }
        flags["c_negative"] = fit["c"] < 0
        flags["quadratic_beats_linear"] = quad_resid < lin_resid
    else:
        flags["c_negative"] = None
        flags["quadratic_beats_linear"] = None
    config = _config(dist=dist, x=x, n_list=tuple(ns), replicates=replicates, seed=seed, p=p,
                     floor_formula="(1-p)^(n(n-1)/2)", floor_tolerance="4 standard errors")
    return CampaignReport("deviation", config, rows, flags, fit)


def _sandwich_one(r: int, dist: WeightDistribution, n: int, seed: int, f: float, g: float) -> dict:
    w = sample_weights(n, dist, replicate_rng(seed, n, r))
    top = float(w.w.max())
    lb = best_threshold_lower_bound(w, default_grid(w) + [f])
    vs = lb.path.vertices
    return {
        "upper_event": top <= g,
        "max_weight": top,
        "lower_value": lb.value,
        "ratio": lb.value / (n * f),
        "tau": lb.tau,
        "path_valid": vs[0] == 1 and vs[-1] == n and len(set(vs)) == len(vs),
        "lower_bounded": 0 < lb.value <= (n - 1) * top,
    }


def sandwich_experiment(dist: WeightDistribution, n: int, replicates: int, seed: int,
                        jobs: int = 1) -> CampaignReport:
    """Union-bound upper event and DFS lower bound against f(n), g(n)."""
    if is_bounded(dist):
        raise PreconditionError("sandwich experiment needs μ = ∞")
    if n < 16:
        raise PreconditionError(f"need n >= 16, got {n}")
    if replicates < 1:
        raise PreconditionError("need at least one replicate")
    f, g = f_of_n(dist, n), g_of_n(dist, n)
    recs = _run(partial(_sandwich_one, dist=dist, n=n, seed=seed, f=f, g=g), range(replicates), jobs)
    freq = sum(r["upper_event"] for r in recs) / replicates
    se = math.sqrt(freq * (1 - freq) / replicates)
    prediction = 1 - n * n * float(dist.tail(g))
    ratios = [r["ratio"] for r in recs]
    row = {
        "n": n,
        "mode": "lower_bound",
        "replicates": replicates,
        "f_n": f,
        "g_n": g,
        "upper_event_freq": freq,
        "upper_event_se": se,
        "union_bound_prediction": prediction,
        "ratio_mean": float(np.mean(ratios)),
        "ratio_min": float(np.min(ratios)),
        "ratio_max": float(np.max(ratios)),
        "ratios": ratios,
        "taus": [r["tau"] for r in recs],
    }
    flags = {
        "upper_event_consistent": freq >= prediction - 4 * se,
        "paths_valid": all(r["path_valid"] for r in recs),
        "lower_values_bounded": all(r["lower_bounded"] for r in recs),
    }
    config = _config(dist=dist, n=n, replicates=replicates, seed=seed,
                     upper_event="max edge weight <= g(n)", lower="best threshold lower bound, grid = quantiles + f(n)")
    return CampaignReport("sandwich", config, [row], flags)


def aks_comparison(n: int, theta: float, seed: int) -> dict:
    """DFS stack length in one G(n, theta/n) draw next to the (1 - 4 ln 2/theta) n reference."""
    g = sample_gnp(n, theta / n, np.random.default_rng([seed, n]))
    longest = longest_u_excursion(run_dfs(g)).length
    return {
        "n": n,
        "theta": theta,
        "reference_length": aks_reference_length(theta, n, strict=False),
        "reference_in_range": theta < math.log(n) - 3 * math.log(math.log(n)),
        "dfs_length": longest,
        "dfs_fraction": longest / n,
    }
