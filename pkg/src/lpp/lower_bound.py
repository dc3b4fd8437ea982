"""Constructive lower bounds on W_n: threshold, DFS, then surgery."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dfs import longest_u_excursion, run_dfs
from .errors import PreconditionError
from .graph import EdgeWeights, threshold_subgraph
from .paths import Path, passage_time, surgery

DEFAULT_QUANTILES = tuple(np.round(np.arange(0.05, 0.951, 0.05), 2))


@dataclass(frozen=True)
class LowerBound:
    path: Path
    value: float
    tau: float
    excursion: Path

    def __iter__(self):
        # unpacks as (path, value)
        yield self.path
        yield self.value


def threshold_lower_bound(w: EdgeWeights, tau: float) -> LowerBound:
    """Longest DFS stack in the graph of edges heavier than ``tau``, rerouted to run 1 -> n."""
    excursion = longest_u_excursion(run_dfs(threshold_subgraph(w, tau)))
    path = surgery(excursion, w)
    return LowerBound(path, passage_time(path, w), float(tau), excursion)


def default_grid(w: EdgeWeights) -> list[float]:
    return np.quantile(w.w, DEFAULT_QUANTILES).tolist()


def best_threshold_lower_bound(w: EdgeWeights, taus: Sequence[float] | None = None) -> LowerBound:
    """Best :func:`threshold_lower_bound` over ``taus`` (default: empirical weight quantiles 5%..95%).

    Ties keep the earliest grid point.
    """
    grid = default_grid(w) if taus is None else list(taus)
    if not grid:
        raise PreconditionError("empty threshold grid")
    best = None
    for tau in grid:
        cand = threshold_lower_bound(w, tau)
        if best is None or cand.value > best.value:
            best = cand
    return best
