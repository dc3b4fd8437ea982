"""Depth-first search as an explicit (S, U, T, Ê) state machine.

One step either explores a single vertex pair of K_n (possibly pushing its
far endpoint onto the stack U), pops the top of U into S, or starts a new
epoch by moving the smallest unvisited vertex from T into U. Ties are
always broken towards the smallest vertex id, so a run is a pure function
of the graph, and it ends after exactly n + (#components) + C(n, 2) steps.

Two engines produce the same event sequence: a Python one that snapshots
every state (the default up to n = 64) and a compiled one that records only
vertex moves, for large graphs.
"""
from __future__ import annotations

import io
from dataclasses import dataclass
from itertools import combinations
from math import comb

import numba
import numpy as np

from .errors import PreconditionError
from .graph import SimpleGraph
from .paths import Path

COMPACT_ABOVE = 64
ENUMERATION_LIMIT = 10**8

START, PUSH, POP = "start", "push", "pop"
_OPS = (START, PUSH, POP)


@dataclass(frozen=True)
class DfsState:
    step: int
    S: tuple[int, ...]
    U: tuple[int, ...]
    T: tuple[int, ...]
    ehat: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class DfsEvent:
    step: int
    op: str
    vertex: int


@dataclass(frozen=True)
class Epoch:
    start: int
    end: int
    vertices: tuple[int, ...]


@dataclass(frozen=True)
class DfsTrace:
    n: int
    N: int
    events: tuple[DfsEvent, ...]
    epochs: tuple[Epoch, ...]
    states: tuple[DfsState, ...] | None = None

    @property
    def compact(self) -> bool:
        return self.states is None

    def max_stack(self) -> int:
        depth = best = 0
        for ev in self.events:
            depth += -1 if ev.op == POP else 1
            best = max(best, depth)
        return best


def run_dfs(g: SimpleGraph, compact: bool | None = None) -> DfsTrace:
    if compact is None:
        compact = g.n > COMPACT_ABOVE
    if compact:
        return _run_compiled(g)
    return _run_full(g)


def _run_full(g: SimpleGraph) -> DfsTrace:
    n = g.n
    adj = g.adjacency()
    explored = np.zeros((n + 1, n + 1), dtype=bool)
    cursor = [1] * (n + 1)  # smallest possibly-unexplored partner of each vertex
    S: set[int] = set()
    U: list[int] = []
    T = set(range(1, n + 1))
    ehat: list[tuple[int, int]] = []
    states = [DfsState(0, (), (), tuple(range(1, n + 1)), ())]
    events = []
    step = 0
    while U or T:
        step += 1
        if U:
            x = U[-1]
            y = cursor[x]
            while y <= n and (y == x or explored[x, y]):
                y += 1
            cursor[x] = y
            if y > n:
                U.pop()
                S.add(x)
                events.append(DfsEvent(step, POP, x))
            else:
                explored[x, y] = explored[y, x] = True
                ehat.append((min(x, y), max(x, y)))
                if y in T and adj[x, y]:
                    T.remove(y)
                    U.append(y)
                    events.append(DfsEvent(step, PUSH, y))
        else:
            x = min(T)
            T.remove(x)
            U.append(x)
            events.append(DfsEvent(step, START, x))
        states.append(DfsState(step, tuple(sorted(S)), tuple(U), tuple(sorted(T)), tuple(ehat)))
    return DfsTrace(n, step, tuple(events), _epochs(events), tuple(states))


@numba.njit(cache=True)
def _dfs_kernel(n, mask):
    m = n * (n - 1) // 2
    explored = np.zeros(m, dtype=np.bool_)
    in_t = np.ones(n + 1, dtype=np.bool_)
    cursor = np.ones(n + 1, dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    ev_step = np.empty(2 * n, dtype=np.int64)
    ev_op = np.empty(2 * n, dtype=np.int64)
    ev_vertex = np.empty(2 * n, dtype=np.int64)
    n_ev = 0
    top = 0
    next_t = 1
    step = 0
    while True:
        if top > 0:
            x = stack[top - 1]
            y = cursor[x]
            pushed = False
            while y <= n:
                if y != x:
                    lo = min(x, y)
                    hi = max(x, y)
                    k = (lo - 1) * n - lo * (lo + 1) // 2 + hi - 1
                    if not explored[k]:
                        explored[k] = True
                        step += 1
                        if in_t[y] and mask[k]:
                            in_t[y] = False
                            stack[top] = y
                            top += 1
                            ev_step[n_ev] = step
                            ev_op[n_ev] = 1
                            ev_vertex[n_ev] = y
                            n_ev += 1
                            pushed = True
                            break
                y += 1
            cursor[x] = y
            if not pushed:
                step += 1
                top -= 1
                ev_step[n_ev] = step
                ev_op[n_ev] = 2
                ev_vertex[n_ev] = x
                n_ev += 1
        else:
            while next_t <= n and not in_t[next_t]:
                next_t += 1
            if next_t > n:
                break
            step += 1
            in_t[next_t] = False
            stack[0] = next_t
            top = 1
            ev_step[n_ev] = step
            ev_op[n_ev] = 0
            ev_vertex[n_ev] = next_t
            n_ev += 1
    return step, ev_step[:n_ev], ev_op[:n_ev], ev_vertex[:n_ev]


def _run_compiled(g: SimpleGraph) -> DfsTrace:
    N, steps, ops, verts = _dfs_kernel(g.n, g.mask)
    events = [DfsEvent(s, _OPS[o], v) for s, o, v in zip(steps.tolist(), ops.tolist(), verts.tolist())]
    return DfsTrace(g.n, int(N), tuple(events), _epochs(events))


def _epochs(events) -> tuple[Epoch, ...]:
    epochs = []
    depth = 0
    start = None
    members: list[int] = []
    for ev in events:
        if ev.op == START:
            start, members, depth = ev.step, [ev.vertex], 1
        elif ev.op == PUSH:
            members.append(ev.vertex)
            depth += 1
        else:
            depth -= 1
            if depth == 0:
                epochs.append(Epoch(start, ev.step, tuple(sorted(members))))
    return tuple(epochs)


def longest_u_excursion(trace: DfsTrace) -> Path:
    """The stack U at the first step where it is largest, bottom to top."""
    if not trace.events:
        raise PreconditionError("empty trace")
    best = trace.max_stack()
    stack: list[int] = []
    for ev in trace.events:
        if ev.op == POP:
            stack.pop()
        else:
            stack.append(ev.vertex)
            if len(stack) == best:
                return Path(tuple(stack))
    raise AssertionError("unreachable: maximum stack depth never replayed")


def check_st_edge_property(g: SimpleGraph, k: int) -> bool:
    """Whether every two disjoint k-sets of vertices are joined by an edge.

    Enumerates every k-set S; the property fails for S exactly when at least
    k vertices outside S have no neighbour in S.
    """
    n = g.n
    if not (1 <= k <= n // 2):
        raise PreconditionError(f"need 1 <= k <= n/2, got k={k}, n={n}")
    if comb(n, k) * comb(n - k, k) > ENUMERATION_LIMIT:
        raise PreconditionError(f"enumeration over C({n},{k})*C({n - k},{k}) pairs exceeds {ENUMERATION_LIMIT:.0e}")
    adj = g.adjacency()
    nbr = [0] * (n + 1)
    for v in range(1, n + 1):
        bits = 0
        for u in np.flatnonzero(adj[v]).tolist():
            bits |= 1 << u
        nbr[v] = bits
    everyone = sum(1 << v for v in range(1, n + 1))
    for S in combinations(range(1, n + 1), k):
        covered = 0
        s_bits = 0
        for v in S:
            covered |= nbr[v]
            s_bits |= 1 << v
        if (everyone & ~covered & ~s_bits).bit_count() >= k:
            return False
    return True


def excursion_guarantee(n: int, k: int) -> int:
    """Path length guaranteed when any two disjoint k-sets are joined by an edge."""
    if not (1 <= k < n):
        raise PreconditionError(f"need 1 <= k < n, got k={k}, n={n}")
    return n - 2 * k + 1


def _fmt_set(vs) -> str:
    return ";".join(map(str, vs))


def trace_to_csv(trace: DfsTrace) -> str:
    """One row per step: S and T ascending, U bottom to top, Ê in exploration order."""
    if trace.states is None:
        raise PreconditionError("trace CSV needs a full-state trace (run_dfs(..., compact=False))")
    buf = io.StringIO()
    buf.write("step,S,U,T,Ehat\n")
    for st in trace.states:
        pairs = ";".join(f"{i}-{j}" for i, j in st.ehat)
        buf.write(f"{st.step},{_fmt_set(st.S)},{_fmt_set(st.U)},{_fmt_set(st.T)},{pairs}\n")
    return buf.getvalue()
