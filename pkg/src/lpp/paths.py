"""Self-avoiding paths, passage times, and the 1 -> n surgery."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError, PreconditionError
from .graph import EdgeWeights


@dataclass(frozen=True)
class Path:
    vertices: tuple[int, ...]

    def __post_init__(self):
        vs = tuple(int(v) for v in self.vertices)
        if not vs:
            raise PreconditionError("a path needs at least one vertex")
        if len(set(vs)) != len(vs):
            raise PreconditionError(f"path revisits a vertex: {vs}")
        object.__setattr__(self, "vertices", vs)

    def __len__(self):
        """Number of edges."""
        return len(self.vertices) - 1

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    def edges(self) -> list[tuple[int, int]]:
        vs = self.vertices
        return [(min(a, b), max(a, b)) for a, b in zip(vs, vs[1:])]

    def __str__(self):
        return ",".join(map(str, self.vertices))

    @classmethod
    def parse(cls, text: str) -> "Path":
        try:
            return cls(tuple(int(t) for t in text.split(",")))
        except ValueError:
            raise ConfigError(f"bad path {text!r}") from None


def passage_time(path: Path, w: EdgeWeights) -> float:
    """Sum of edge weights along the path, accumulated in path order."""
    vs = path.vertices
    if any(not (1 <= v <= w.n) for v in vs):
        raise PreconditionError(f"path {path} leaves the vertex set 1..{w.n}")
    total = 0.0
    for a, b in zip(vs, vs[1:]):
        total += w(a, b)
    return total


def surgery(path: Path, w: EdgeWeights | int) -> Path:
    """Turn any path on 1..n into a self-avoiding path from 1 to n.

    ``w`` is the weighted instance or just its vertex count. Vertices 1 and n
    are cut out of ``path``; the remaining pieces keep their order and
    orientation and are chained as 1, piece_1, ..., piece_k, n. At most four
    edges of the input are lost.
    """
    n = w.n if isinstance(w, EdgeWeights) else int(w)
    if n < 2:
        raise PreconditionError(f"need n >= 2, got {n}")
    if any(not (1 <= v <= n) for v in path.vertices):
        raise PreconditionError(f"path {path} leaves the vertex set 1..{n}")
    pieces: list[list[int]] = [[]]
    for v in path.vertices:
        if v == 1 or v == n:
            pieces.append([])
        else:
            pieces[-1].append(v)
    chained = [1]
    for piece in pieces:
        chained.extend(piece)
    chained.append(n)
    return Path(tuple(chained))


def shared_edges(a: Path, b: Path) -> int:
    return len(set(a.edges()) & set(b.edges()))
