"""Complete-graph edge weights in flat upper-triangular storage, plus simple graphs.

Edge <i, j> (1 <= i < j <= n) lives at flat index ``(i-1)*n - i*(i+1)//2 + j - 1``.
Graphs use the same layout as a boolean mask, which keeps threshold
subgraphs of K_2000 cheap.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import ConfigError, PreconditionError
from .weights import WeightDistribution, uniform_draws

_CHUNK = 1 << 22


def num_pairs(n: int) -> int:
    return n * (n - 1) // 2


def edge_index(n: int, i: int, j: int) -> int:
    if i > j:
        i, j = j, i
    if not (1 <= i < j <= n):
        raise PreconditionError(f"<{i},{j}> is not an edge of K_{n}")
    return (i - 1) * n - i * (i + 1) // 2 + j - 1


def pair_arrays(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Endpoints (i, j) of every flat index, in flat order."""
    i, j = np.triu_indices(n, k=1)
    return i + 1, j + 1


def row_indices(n: int, x: int) -> np.ndarray:
    """Flat indices of the pairs <x, y>, y = 1..n with y != x, ordered by y."""
    ys = np.arange(1, n + 1)
    ys = ys[ys != x]
    lo = np.minimum(ys, x)
    hi = np.maximum(ys, x)
    return (lo - 1) * n - lo * (lo + 1) // 2 + hi - 1


@dataclass(frozen=True, eq=False)
class EdgeWeights:
    n: int
    w: np.ndarray

    def __post_init__(self):
        if self.n < 2:
            raise PreconditionError(f"need n >= 2, got {self.n}")
        w = np.ascontiguousarray(self.w, dtype=np.float64)
        if w.shape != (num_pairs(self.n),):
            raise PreconditionError(f"expected {num_pairs(self.n)} weights, got {w.shape}")
        if not np.all(w > 0):
            raise PreconditionError("edge weights must be strictly positive")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    def __call__(self, i: int, j: int) -> float:
        return float(self.w[edge_index(self.n, i, j)])

    def __eq__(self, other):
        return (
            isinstance(other, EdgeWeights)
            and self.n == other.n
            and np.array_equal(self.w, other.w)
        )

    def matrix(self) -> np.ndarray:
        """Symmetric (n+1, n+1) matrix indexed by vertex id; row/col 0 and the diagonal are 0."""
        m = np.zeros((self.n + 1, self.n + 1))
        i, j = pair_arrays(self.n)
        m[i, j] = self.w
        m[j, i] = self.w
        return m

    @classmethod
    def from_dict(cls, n: int, weights: dict[tuple[int, int], float]) -> "EdgeWeights":
        w = np.empty(num_pairs(n))
        seen = np.zeros(num_pairs(n), dtype=bool)
        for (i, j), value in weights.items():
            k = edge_index(n, i, j)
            w[k] = value
            seen[k] = True
        if not seen.all():
            raise PreconditionError("weights missing for some edges")
        return cls(n, w)


@dataclass(frozen=True, eq=False)
class SimpleGraph:
    n: int
    mask: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise PreconditionError(f"need n >= 1, got {self.n}")
        mask = np.ascontiguousarray(self.mask, dtype=bool)
        if mask.shape != (num_pairs(self.n),):
            raise PreconditionError(f"expected mask of length {num_pairs(self.n)}")
        mask.setflags(write=False)
        object.__setattr__(self, "mask", mask)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "SimpleGraph":
        mask = np.zeros(num_pairs(n), dtype=bool)
        for i, j in edges:
            if i == j:
                raise PreconditionError(f"self-loop at {i}")
            mask[edge_index(n, i, j)] = True
        return cls(n, mask)

    @classmethod
    def complete(cls, n: int) -> "SimpleGraph":
        return cls(n, np.ones(num_pairs(n), dtype=bool))

    @classmethod
    def empty(cls, n: int) -> "SimpleGraph":
        return cls(n, np.zeros(num_pairs(n), dtype=bool))

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        i, j = pair_arrays(self.n)
        return frozenset(zip(i[self.mask].tolist(), j[self.mask].tolist()))

    def sorted_edges(self) -> list[tuple[int, int]]:
        i, j = pair_arrays(self.n)
        return list(zip(i[self.mask].tolist(), j[self.mask].tolist()))

    @property
    def num_edges(self) -> int:
        return int(self.mask.sum())

    def has_edge(self, i: int, j: int) -> bool:
        return i != j and bool(self.mask[edge_index(self.n, i, j)])

    def adjacency(self) -> np.ndarray:
        """Boolean (n+1, n+1) adjacency matrix indexed by vertex id."""
        a = np.zeros((self.n + 1, self.n + 1), dtype=bool)
        i, j = pair_arrays(self.n)
        a[i[self.mask], j[self.mask]] = True
        a[j[self.mask], i[self.mask]] = True
        return a

    def __eq__(self, other):
        return (
            isinstance(other, SimpleGraph)
            and self.n == other.n
            and np.array_equal(self.mask, other.mask)
        )

    def __hash__(self):
        return hash((self.n, self.mask.tobytes()))


def sample_weights(n: int, dist: WeightDistribution, rng: np.random.Generator) -> EdgeWeights:
    """i.i.d. weights drawn in ascending flat-index order."""
    if n < 2:
        raise PreconditionError(f"need n >= 2, got {n}")
    return EdgeWeights(n, dist.inverse(uniform_draws(rng, num_pairs(n))))


def threshold_subgraph(weights: EdgeWeights, tau: float) -> SimpleGraph:
    """Keep the edges with weight strictly above ``tau``."""
    return SimpleGraph(weights.n, weights.w > tau)


def sample_gnp(n: int, p: float, rng: np.random.Generator) -> SimpleGraph:
    if n < 1:
        raise PreconditionError(f"need n >= 1, got {n}")
    if not (0.0 <= p <= 1.0):
        raise PreconditionError(f"p must lie in [0, 1], got {p}")
    m = num_pairs(n)
    mask = np.empty(m, dtype=bool)
    # chunked draws consume the stream exactly like one big draw
    for start in range(0, m, _CHUNK):
        stop = min(start + _CHUNK, m)
        mask[start:stop] = rng.random(stop - start) < p
    return SimpleGraph(n, mask)


# -- file formats ------------------------------------------------------------

def weights_to_csv(weights: EdgeWeights, header_comment: str | None = None) -> str:
    buf = io.StringIO()
    if header_comment:
        buf.write(f"# {header_comment}\n")
    buf.write("i,j,weight\n")
    i, j = pair_arrays(weights.n)
    for a, b, x in zip(i.tolist(), j.tolist(), weights.w.tolist()):
        buf.write(f"{a},{b},{x:.17g}\n")
    return buf.getvalue()


def weights_from_csv(text: str) -> EdgeWeights:
    rows = [line for line in text.splitlines() if line.strip() and not line.startswith("#")]
    reader = csv.reader(rows)
    header = next(reader, None)
    if header != ["i", "j", "weight"]:
        raise ConfigError(f"expected header 'i,j,weight', got {header}")
    entries = {}
    for row in reader:
        try:
            i, j, x = int(row[0]), int(row[1]), float(row[2])
        except (ValueError, IndexError):
            raise ConfigError(f"bad weight row {row}") from None
        entries[(i, j)] = x
    m = len(entries)
    n = int(round((1 + (1 + 8 * m) ** 0.5) / 2))
    if num_pairs(n) != m:
        raise ConfigError(f"{m} rows is not a complete graph")
    return EdgeWeights.from_dict(n, entries)


def graph_to_edgelist(g: SimpleGraph) -> str:
    lines = [f"# n={g.n}"]
    lines += [f"{i} {j}" for i, j in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def graph_from_edgelist(text: str, n: int | None = None) -> SimpleGraph:
    """Read "i j" lines (1-based, i < j, '#' comments).

    The vertex count comes from ``n``, else a ``# n=<count>`` comment, else
    the largest id seen.
    """
    edges = []
    declared = None
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("n="):
                declared = int(body[2:])
            continue
        if not line:
            continue
        parts = line.split()
        try:
            i, j = int(parts[0]), int(parts[1])
        except (ValueError, IndexError):
            raise ConfigError(f"bad edge line {raw!r}") from None
        if len(parts) != 2 or not (1 <= i < j):
            raise ConfigError(f"bad edge line {raw!r} (need 'i j' with 1 <= i < j)")
        edges.append((i, j))
    if n is None:
        n = declared if declared is not None else max((j for _, j in edges), default=1)
    if any(j > n for _, j in edges):
        raise ConfigError(f"edge endpoint exceeds n={n}")
    return SimpleGraph.from_edges(n, edges)
