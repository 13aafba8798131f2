"""Simple undirected graphs with stable vertex ids, deletions and contractions.

All graphs here are simple: no loops, no parallel edges.  Contraction
simplifies the result (merged parallel edges become one edge, loops are
dropped).  Vertex ids are arbitrary non-negative integers and never
renumbered by an operation; when a group of vertices is merged, the merged
vertex keeps the smallest id of the group and the returned mapping records
where every old vertex went.
"""

from __future__ import annotations

import dataclasses
from typing import Iterable, Iterator, Sequence

import numpy as np


class GraphError(ValueError):
    pass


class NotAnEdge(GraphError):
    pass


class NotATriangle(GraphError):
    pass


class InvalidPayload(GraphError):
    pass


class ParseError(GraphError):
    pass


class Graph:
    """Mutable simple undirected graph, adjacency kept as sorted lists.

    Iteration order over vertices and neighbours is always sorted, so every
    algorithm downstream is deterministic.
    """

    __slots__ = ("_adj", "_m")

    def __init__(self, vertices: Iterable[int] = (), edges: Iterable[tuple[int, int]] = ()):
        self._adj: dict[int, list[int]] = {int(v): [] for v in vertices}
        self._m = 0
        for u, v in edges:
            self.add_edge(u, v)

    # -- construction ------------------------------------------------------

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], vertices: Iterable[int] = ()) -> "Graph":
        g = cls(vertices)
        for u, v in edges:
            g.add_edge(u, v)
        return g

    def copy(self) -> "Graph":
        g = Graph()
        g._adj = {v: list(ns) for v, ns in self._adj.items()}
        g._m = self._m
        return g

    def add_vertex(self, v: int) -> None:
        self._adj.setdefault(int(v), [])

    def add_edge(self, u: int, v: int) -> None:
        u, v = int(u), int(v)
        if u == v:
            raise GraphError(f"loop at {u}")
        self.add_vertex(u)
        self.add_vertex(v)
        if not _sorted_contains(self._adj[u], v):
            _sorted_insert(self._adj[u], v)
            _sorted_insert(self._adj[v], u)
            self._m += 1

    def remove_edge(self, u: int, v: int) -> None:
        if not self.has_edge(u, v):
            raise NotAnEdge(f"({u},{v}) is not an edge")
        self._adj[u].remove(v)
        self._adj[v].remove(u)
        self._m -= 1

    def remove_vertex(self, v: int) -> None:
        for w in list(self._adj[v]):
            self.remove_edge(v, w)
        del self._adj[v]

    # -- queries -----------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self._adj)

    @property
    def m(self) -> int:
        return self._m

    def vertices(self) -> list[int]:
        return sorted(self._adj)

    def has_vertex(self, v: int) -> bool:
        return v in self._adj

    def has_edge(self, u: int, v: int) -> bool:
        a = self._adj.get(u)
        return a is not None and _sorted_contains(a, v)

    def neighbors(self, v: int) -> list[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in sorted(self._adj):
            for v in self._adj[u]:
                if u < v:
                    yield (u, v)

    def edge_list(self) -> list[tuple[int, int]]:
        return list(self.edges())

    def induced(self, vs: Iterable[int]) -> "Graph":
        keep = set(vs)
        g = Graph(keep)
        for u in keep:
            for v in self._adj[u]:
                if v in keep and u < v:
                    g.add_edge(u, v)
        return g

    def is_triangle(self, t: Sequence[int]) -> bool:
        a, b, c = t
        return (
            len({a, b, c}) == 3
            and self.has_edge(a, b)
            and self.has_edge(b, c)
            and self.has_edge(a, c)
        )

    def check_invariants(self) -> None:
        """Simple/symmetric/count invariants; raises on violation."""
        total = 0
        for v, ns in self._adj.items():
            if v in ns:
                raise GraphError(f"loop at {v}")
            if sorted(set(ns)) != ns:
                raise GraphError(f"adjacency of {v} not sorted/unique")
            for w in ns:
                if not _sorted_contains(self._adj.get(w, []), v):
                    raise GraphError(f"asymmetric edge {v},{w}")
            total += len(ns)
        if total != 2 * self._m:
            raise GraphError("edge count mismatch")

    def to_csr(self) -> tuple[np.ndarray, np.ndarray, list[int]]:
        """CSR adjacency over vertices reindexed to 0..n-1 (sorted order).

        Returns (indptr, indices, order) with order[i] = original id of i.
        """
        order = self.vertices()
        pos = {v: i for i, v in enumerate(order)}
        indptr = np.zeros(len(order) + 1, dtype=np.int64)
        for i, v in enumerate(order):
            indptr[i + 1] = indptr[i] + len(self._adj[v])
        indices = np.empty(int(indptr[-1]), dtype=np.int64)
        k = 0
        for v in order:
            for w in self._adj[v]:
                indices[k] = pos[w]
                k += 1
        return indptr, indices, order

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self._adj == other._adj

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def _sorted_insert(lst: list[int], x: int) -> None:
    import bisect

    bisect.insort(lst, x)


def _sorted_contains(lst: list[int], x: int) -> bool:
    import bisect

    i = bisect.bisect_left(lst, x)
    return i < len(lst) and lst[i] == x


# -- matchings and triangle sets -------------------------------------------


@dataclasses.dataclass(frozen=True)
class Matching:
    """A set of vertex pairs with pairwise disjoint endpoints."""

    pairs: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, pairs: Iterable[tuple[int, int]]) -> "Matching":
        norm = tuple(sorted((min(u, v), max(u, v)) for u, v in pairs))
        return cls(norm)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def vertices(self) -> set[int]:
        return {x for p in self.pairs for x in p}

    def validate(self, g: Graph) -> None:
        seen: set[int] = set()
        for u, v in self.pairs:
            if not g.has_edge(u, v):
                raise InvalidPayload(f"matching pair ({u},{v}) is not an edge")
            if u in seen or v in seen:
                raise InvalidPayload(f"matching endpoints overlap at ({u},{v})")
            seen.update((u, v))


@dataclasses.dataclass(frozen=True)
class TriangleSet:
    """Disjoint vertex triples, each inducing a triangle of the host."""

    triples: tuple[tuple[int, int, int], ...]

    @classmethod
    def of(cls, triples: Iterable[Sequence[int]]) -> "TriangleSet":
        norm = tuple(sorted(tuple(sorted(t)) for t in triples))
        return cls(norm)  # type: ignore[arg-type]

    def __len__(self) -> int:
        return len(self.triples)

    def __iter__(self):
        return iter(self.triples)

    def vertices(self) -> set[int]:
        return {x for t in self.triples for x in t}

    def validate(self, g: Graph) -> None:
        seen: set[int] = set()
        for t in self.triples:
            if not g.is_triangle(t):
                raise InvalidPayload(f"{t} does not induce a triangle")
            if seen.intersection(t):
                raise InvalidPayload(f"triangles overlap at {t}")
            seen.update(t)


# -- minor operations --------------------------------------------------------

DELETE_EDGES = "DeleteEdges"
DELETE_VERTICES = "DeleteVertices"
CONTRACT_MATCHING = "ContractMatching"
CONTRACT_TRIANGLES = "ContractTriangles"


@dataclasses.dataclass(frozen=True)
class MinorOp:
    """One recorded shrink step: what was deleted or contracted.

    ``mapping`` sends every vertex of the input graph to its image in the
    result (deleted vertices are absent).  Contracted groups have at most
    three vertices and map onto the smallest id of the group.
    """

    tag: str
    edges: tuple[tuple[int, int], ...] = ()
    vertices: tuple[int, ...] = ()
    matching: Matching | None = None
    triangles: TriangleSet | None = None
    mapping: dict[int, int] | None = None

    @classmethod
    def delete_edges(cls, edges: Iterable[tuple[int, int]]) -> "MinorOp":
        norm = tuple(sorted((min(u, v), max(u, v)) for u, v in edges))
        return cls(tag=DELETE_EDGES, edges=norm)

    @classmethod
    def delete_vertices(cls, vs: Iterable[int]) -> "MinorOp":
        return cls(tag=DELETE_VERTICES, vertices=tuple(sorted(vs)))

    @classmethod
    def contract_matching(cls, mt: Matching) -> "MinorOp":
        return cls(tag=CONTRACT_MATCHING, matching=mt)

    @classmethod
    def contract_triangles(cls, ts: TriangleSet) -> "MinorOp":
        return cls(tag=CONTRACT_TRIANGLES, triangles=ts)


def contract_groups(g: Graph, groups: Sequence[Sequence[int]]) -> tuple[Graph, dict[int, int]]:
    """Contract each group (size <= 3) to its smallest vertex; simplify.

    Groups must be pairwise disjoint vertex sets of g, each inducing a
    connected subgraph (an edge or a triangle in practice).
    """
    mapping = {v: v for v in g.vertices()}
    used: set[int] = set()
    for grp in groups:
        s = sorted(set(grp))
        if len(s) != len(grp) or len(s) > 3:
            raise InvalidPayload(f"bad contraction group {grp}")
        for v in s:
            if v not in mapping:
                raise InvalidPayload(f"unknown vertex {v}")
            if v in used:
                raise InvalidPayload(f"contraction groups overlap at {v}")
            used.add(v)
        target = s[0]
        for v in s[1:]:
            mapping[v] = target
    out = Graph(set(mapping.values()))
    for u, v in g.edges():
        mu, mv = mapping[u], mapping[v]
        if mu != mv:
            out.add_edge(mu, mv)
    return out, mapping


def contract_edge(g: Graph, e: tuple[int, int]) -> tuple[Graph, dict[int, int]]:
    u, v = e
    if not g.has_edge(u, v):
        raise NotAnEdge(f"({u},{v}) is not an edge")
    return contract_groups(g, [(u, v)])


def contract_triangle(g: Graph, t: Sequence[int]) -> tuple[Graph, dict[int, int]]:
    if not g.is_triangle(t):
        raise NotATriangle(f"{tuple(t)} does not induce a triangle")
    return contract_groups(g, [tuple(t)])


def apply_minor_op(g: Graph, op: MinorOp) -> tuple[Graph, dict[int, int], MinorOp]:
    """Apply op to g; returns (new graph, mapping, op with mapping filled in)."""
    if op.tag == DELETE_EDGES:
        out = g.copy()
        for u, v in op.edges:
            if not out.has_edge(u, v):
                raise InvalidPayload(f"({u},{v}) is not an edge")
            out.remove_edge(u, v)
        mapping = {v: v for v in out.vertices()}
    elif op.tag == DELETE_VERTICES:
        out = g.copy()
        for v in op.vertices:
            if not out.has_vertex(v):
                raise InvalidPayload(f"unknown vertex {v}")
            out.remove_vertex(v)
        mapping = {v: v for v in out.vertices()}
    elif op.tag == CONTRACT_MATCHING:
        assert op.matching is not None
        op.matching.validate(g)
        out, mapping = contract_groups(g, [tuple(p) for p in op.matching])
    elif op.tag == CONTRACT_TRIANGLES:
        assert op.triangles is not None
        op.triangles.validate(g)
        out, mapping = contract_groups(g, [tuple(t) for t in op.triangles])
    else:
        raise InvalidPayload(f"unknown op tag {op.tag}")
    return out, mapping, dataclasses.replace(op, mapping=mapping)


def replay(g1: Graph, ops: Sequence[MinorOp]) -> tuple[Graph, dict[int, int]]:
    """Re-apply a journal; returns the final graph and the composed mapping."""
    g = g1
    composed = {v: v for v in g1.vertices()}
    for op in ops:
        g, mapping, _ = apply_minor_op(g, op)
        composed = {
            v: mapping[img] for v, img in composed.items() if img in mapping
        }
    return g, composed


# -- edge-list text format ---------------------------------------------------


def parse_edge_list(text: str) -> Graph:
    """Parse the text format: "p <n> <m>" then m lines "e <u> <v>" (0-based).

    Blank lines and lines starting with "#" are ignored.
    """
    n = m = None
    g = Graph()
    edges_seen = 0
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise ParseError(f"line {ln}: duplicate p line")
            if len(parts) != 3:
                raise ParseError(f"line {ln}: expected 'p <n> <m>'")
            try:
                n, m = int(parts[1]), int(parts[2])
            except ValueError as exc:
                raise ParseError(f"line {ln}: bad p line") from exc
            for v in range(n):
                g.add_vertex(v)
        elif parts[0] == "e":
            if n is None:
                raise ParseError(f"line {ln}: edge before p line")
            if len(parts) != 3:
                raise ParseError(f"line {ln}: expected 'e <u> <v>'")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError as exc:
                raise ParseError(f"line {ln}: bad edge") from exc
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(f"line {ln}: vertex id out of range")
            if u == v:
                raise ParseError(f"line {ln}: loop")
            g.add_edge(u, v)
            edges_seen += 1
        else:
            raise ParseError(f"line {ln}: unknown record {parts[0]!r}")
    if n is None:
        raise ParseError("missing p line")
    if m is not None and g.m != m:
        raise ParseError(f"p line declares {m} edges, found {g.m} distinct")
    return g


def write_edge_list(g: Graph) -> str:
    """Emit the text format with edges sorted; ids must be 0..n-1."""
    vs = g.vertices()
    if vs and vs[-1] != len(vs) - 1:
        raise GraphError("writer requires contiguous 0-based ids; relabel first")
    lines = [f"p {g.n} {g.m}"]
    lines.extend(f"e {u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def relabel_contiguous(g: Graph) -> tuple[Graph, dict[int, int]]:
    """Relabel vertices to 0..n-1 in sorted-id order."""
    order = g.vertices()
    pos = {v: i for i, v in enumerate(order)}
    out = Graph(range(len(order)))
    for u, v in g.edges():
        out.add_edge(pos[u], pos[v])
    return out, pos
