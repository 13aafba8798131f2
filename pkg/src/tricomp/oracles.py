"""Brute-force reference implementations used as ground truth in tests.

These are deliberately direct: delete things, run searches, enumerate.
They share no code path with the algorithms they check (the only common
dependency is the CSR articulation/connectivity kernels, which are checked
against pure-python search in the test suite).
"""

from __future__ import annotations

import dataclasses
from itertools import combinations

import numpy as np

from . import _kernels as K
from .graph import Graph, GraphError


class BudgetExceeded(GraphError):
    pass


@dataclasses.dataclass(frozen=True)
class OracleBudget:
    max_path_vertices: int = 14
    max_pairwise_vertices: int = 256
    search_nodes: int = 2_000_000


DEFAULT_BUDGET = OracleBudget()


def _bitmask_adjacency(g: Graph) -> tuple[list[int], dict[int, int], list[int]]:
    order = g.vertices()
    pos = {v: i for i, v in enumerate(order)}
    masks = [0] * len(order)
    for u, v in g.edges():
        masks[pos[u]] |= 1 << pos[v]
        masks[pos[v]] |= 1 << pos[u]
    return masks, pos, order


def _mask_connected(masks: list[int], alive: int, a: int, b: int) -> bool:
    """Is b reachable from a inside the alive mask? (bitset BFS)"""
    if not (alive >> a) & 1 or not (alive >> b) & 1:
        return False
    reach = 1 << a
    frontier = reach
    target = 1 << b
    while frontier:
        nxt = 0
        f = frontier
        while f:
            i = (f & -f).bit_length() - 1
            f &= f - 1
            nxt |= masks[i]
        nxt &= alive & ~reach
        if nxt & target:
            return True
        reach |= nxt
        frontier = nxt
    return bool(reach & target)


def bf_two_disjoint_paths(
    g: Graph, s1: int, t1: int, s2: int, t2: int, budget: OracleBudget = DEFAULT_BUDGET
) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Exact search for vertex-disjoint s1-t1 and s2-t2 paths.

    Backtracking over s1-t1 paths with a connectivity prune; falls back to
    an exhaustive subset split if the search tree explodes.  Terminals must
    be four distinct vertices.
    """
    if len({s1, t1, s2, t2}) != 4:
        raise GraphError("terminals must be distinct")
    if g.n > budget.max_path_vertices + 4:
        raise BudgetExceeded(f"n={g.n} beyond oracle budget")
    masks, pos, order = _bitmask_adjacency(g)
    a1, b1, a2, b2 = pos[s1], pos[t1], pos[s2], pos[t2]
    full = (1 << len(order)) - 1
    nodes_left = budget.search_nodes

    def rebuild(par: dict[int, int], end: int) -> tuple[int, ...]:
        path = [end]
        while path[-1] in par:
            path.append(par[path[-1]])
        return tuple(order[i] for i in reversed(path))

    def second_path(avoid: int) -> tuple[int, ...] | None:
        alive = full & ~avoid
        if not ((alive >> a2) & 1) or not ((alive >> b2) & 1):
            return None
        # BFS with parents
        par: dict[int, int] = {}
        reach = 1 << a2
        frontier = [a2]
        while frontier:
            nf = []
            for i in frontier:
                cand = masks[i] & alive & ~reach
                f = cand
                while f:
                    j = (f & -f).bit_length() - 1
                    f &= f - 1
                    par[j] = i
                    if j == b2:
                        return rebuild(par, b2)
                    reach |= 1 << j
                    nf.append(j)
            frontier = nf
        return None

    # DFS over s1-t1 paths
    stack: list[tuple[int, int, dict[int, int]]] = [(a1, 1 << a1, {})]
    exploded = False
    while stack:
        nodes_left -= 1
        if nodes_left <= 0:
            exploded = True
            break
        cur, used, par = stack.pop()
        if cur == b1:
            p2 = second_path(used)
            if p2 is not None:
                return rebuild(par, b1), p2
            continue
        # prune: s2 and t2 must stay connected avoiding the prefix
        if not _mask_connected(masks, full & ~used, a2, b2):
            continue
        cand = masks[cur] & ~used
        f = cand
        while f:
            j = (f & -f).bit_length() - 1
            f &= f - 1
            if j in (a2, b2):
                continue
            npar = dict(par)
            npar[j] = cur
            stack.append((j, used | (1 << j), npar))
    if not exploded:
        return None
    # exhaustive fallback: split V into S (contains s1,t1) and its complement
    rest = [i for i in range(len(order)) if i not in (a1, b1, a2, b2)]
    base = (1 << a1) | (1 << b1)
    for bits in range(1 << len(rest)):
        S = base
        k = bits
        for idx, i in enumerate(rest):
            if (k >> idx) & 1:
                S |= 1 << i
        if _mask_connected(masks, S, a1, b1) and _mask_connected(masks, full & ~S, a2, b2):
            p1 = _shortest_in_mask(masks, order, S, a1, b1)
            p2 = _shortest_in_mask(masks, order, full & ~S, a2, b2)
            assert p1 is not None and p2 is not None
            return p1, p2
    return None


def _shortest_in_mask(masks, order, alive: int, a: int, b: int):
    par: dict[int, int] = {}
    if not (alive >> a) & 1:
        return None
    reach = 1 << a
    frontier = [a]
    while frontier:
        nf = []
        for i in frontier:
            cand = masks[i] & alive & ~reach
            f = cand
            while f:
                j = (f & -f).bit_length() - 1
                f &= f - 1
                par[j] = i
                if j == b:
                    path = [b]
                    while path[-1] in par:
                        path.append(par[path[-1]])
                    return tuple(order[i] for i in reversed(path))
                reach |= 1 << j
                nf.append(j)
        frontier = nf
    return None


def bf_is_3_connected(g: Graph, budget: OracleBudget = DEFAULT_BUDGET) -> bool:
    """3-connectivity by deleting every vertex pair (via articulation sweeps)."""
    if g.n > budget.max_pairwise_vertices:
        raise BudgetExceeded(f"n={g.n} beyond oracle budget")
    if g.n <= 3:
        return False
    indptr, indices, _ = g.to_csr()
    removed = np.zeros(g.n, dtype=np.uint8)
    if not K.is_connected(indptr, indices, removed):
        return False
    for i in range(g.n):
        removed[i] = 1
        if not K.is_connected(indptr, indices, removed):
            return False
        if len(K.articulation_points(indptr, indices, removed)) > 0:
            return False
        removed[i] = 0
    return True


def bf_all_3cuts(
    g: Graph, C: set[int] | frozenset[int] = frozenset(), budget: OracleBudget = DEFAULT_BUDGET
) -> list[tuple[tuple[int, int, int], tuple[int, ...]]]:
    """All (X, U): X a 3-subset whose removal leaves a component U disjoint from C."""
    if g.n > 60:
        raise BudgetExceeded(f"n={g.n} beyond oracle budget")
    indptr, indices, order = g.to_csr()
    pos = {v: i for i, v in enumerate(order)}
    out = []
    removed = np.zeros(g.n, dtype=np.uint8)
    for X in combinations(g.vertices(), 3):
        for x in X:
            removed[pos[x]] = 1
        labels, count = K.component_labels(indptr, indices, removed)
        if count >= 2:
            comps: dict[int, list[int]] = {}
            for v in g.vertices():
                l = labels[pos[v]]
                if l >= 0:
                    comps.setdefault(int(l), []).append(v)
            for comp in comps.values():
                if not C.intersection(comp):
                    out.append((tuple(sorted(X)), tuple(sorted(comp))))
        for x in X:
            removed[pos[x]] = 0
    return out


def bf_strong_2cuts(g: Graph, budget: OracleBudget = DEFAULT_BUDGET) -> list[tuple[int, int]]:
    """All pairs {x,y} that cut g and are joined by 3 internally disjoint paths."""
    if g.n > 60:
        raise BudgetExceeded(f"n={g.n} beyond oracle budget")
    indptr, indices, order = g.to_csr()
    pos = {v: i for i, v in enumerate(order)}
    removed = np.zeros(g.n, dtype=np.uint8)
    out = []
    for x, y in combinations(g.vertices(), 2):
        removed[pos[x]] = 1
        removed[pos[y]] = 1
        cut = not K.is_connected(indptr, indices, removed)
        removed[pos[x]] = 0
        removed[pos[y]] = 0
        if not cut:
            continue
        if K.maxflow_vertex_capacity(indptr, indices, pos[x], pos[y], 3) >= 3:
            out.append((x, y))
    return out
