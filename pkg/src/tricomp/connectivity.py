"""Vertex-connectivity primitives.

count_disjoint_paths is the workhorse: unit-vertex-capacity max flow that
returns both the count and a witnessing set of internally disjoint paths.
sparse_certificate is the Nagamochi-Ibaraki forest partition; keeping the
first k forests preserves, for every discarded edge xy, k internally
disjoint x-y paths, which is exactly what the dense-case edge deletion
needs.  Planarity is delegated to networkx (LR planarity) and wrapped in
checkable embedding / Kuratowski-witness types.
"""

from __future__ import annotations

import dataclasses
from typing import Iterable

import networkx as nx
import numpy as np

from . import _kernels as K
from .graph import Graph, GraphError


class SameVertex(GraphError):
    pass


class TooSparse(GraphError):
    pass


# -- disjoint paths ----------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class PathSet:
    """Internally vertex-disjoint paths sharing endpoints u, v."""

    u: int
    v: int
    paths: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.paths)

    def validate(self, g: Graph) -> None:
        interiors: set[int] = set()
        for p in self.paths:
            if p[0] != self.u or p[-1] != self.v:
                raise GraphError(f"path {p} does not join {self.u},{self.v}")
            for a, b in zip(p, p[1:]):
                if not g.has_edge(a, b):
                    raise GraphError(f"({a},{b}) in witness is not an edge")
            inner = set(p[1:-1])
            if len(inner) != len(p) - 2:
                raise GraphError(f"path {p} repeats a vertex")
            if interiors & inner:
                raise GraphError("path interiors overlap")
            interiors |= inner

    def to_json(self) -> list[list[int]]:
        return [list(p) for p in self.paths]


class _SplitFlow:
    """Unit-vertex-capacity flow network over a Graph (python side).

    Node v becomes v_in/v_out with a unit internal arc (endpoints are
    uncapacitated); edge arcs are effectively infinite so minimum cuts
    cross internal arcs only, except the direct s-t edge which carries
    capacity 1 (it counts as a single path).  Deterministic BFS
    augmentation; used when witnesses or cuts are needed, not just counts.
    """

    BIG = 10**9

    def __init__(self, g: Graph, s: int, t: int):
        self.order = g.vertices()
        self.pos = {v: i for i, v in enumerate(self.order)}
        n = len(self.order)
        self.n = n
        self.s = self.pos[s]
        self.t = self.pos[t]
        # node ids: 2i (in), 2i+1 (out)
        self.adj: list[list[int]] = [[] for _ in range(2 * n)]
        self.cap: dict[tuple[int, int], int] = {}
        self.orig: dict[tuple[int, int], int] = {}
        for i, v in enumerate(self.order):
            c = self.BIG if i in (self.s, self.t) else 1
            self._add(2 * i, 2 * i + 1, c)
        st = frozenset((s, t))
        for u, v in g.edges():
            i, j = self.pos[u], self.pos[v]
            c = 1 if frozenset((u, v)) == st else self.BIG
            self._add(2 * i + 1, 2 * j, c)
            self._add(2 * j + 1, 2 * i, c)

    def _add(self, a: int, b: int, c: int) -> None:
        if (a, b) not in self.cap:
            self.adj[a].append(b)
            self.adj[b].append(a)
            self.cap[(a, b)] = 0
            self.cap[(b, a)] = 0
            self.orig[(a, b)] = 0
            self.orig[(b, a)] = 0
        self.cap[(a, b)] += c
        self.orig[(a, b)] += c

    def augment_upto(self, limit: int) -> int:
        flow = 0
        src, snk = 2 * self.s + 1, 2 * self.t
        while flow < limit:
            parent = {src: -1}
            queue = [src]
            found = False
            for a in queue:
                for b in sorted(self.adj[a]):
                    if b not in parent and self.cap[(a, b)] > 0:
                        parent[b] = a
                        if b == snk:
                            found = True
                            break
                        queue.append(b)
                if found:
                    break
            if not found:
                break
            b = snk
            while parent[b] != -1:
                a = parent[b]
                self.cap[(a, b)] -= 1
                self.cap[(b, a)] += 1
                b = a
            flow += 1
        return flow

    def extract_paths(self, flow: int) -> list[tuple[int, ...]]:
        """Decompose the integral flow into vertex paths (original ids)."""
        used: set[tuple[int, int]] = set()
        # flow on arc (a,b) iff residual of reverse exceeds original reverse cap
        out: list[tuple[int, ...]] = []
        for _ in range(flow):
            path = [2 * self.s + 1]
            seen = {2 * self.s + 1}
            while path[-1] != 2 * self.t:
                a = path[-1]
                nxt = -1
                for b in sorted(self.adj[a]):
                    if (a, b) in used or b in seen:
                        continue
                    if self._flow_on(a, b) > 0:
                        nxt = b
                        break
                if nxt < 0:
                    raise GraphError("flow decomposition failed")
                used.add((a, nxt))
                seen.add(nxt)
                path.append(nxt)
            verts = [self.order[node // 2] for node in path if node % 2 == 0]
            verts = [self.order[self.s]] + verts
            # collapse in/out duplicates
            dedup: list[int] = []
            for v in verts:
                if not dedup or dedup[-1] != v:
                    dedup.append(v)
            out.append(tuple(dedup))
        return out

    def _flow_on(self, a: int, b: int) -> int:
        # residual gain on the reverse arc beyond its original capacity
        # equals the flow pushed along (a, b)
        return max(0, self.cap[(b, a)] - self.orig[(b, a)])


def count_disjoint_paths(
    g: Graph, u: int, v: int, cap: int, want_paths: bool = True
) -> tuple[int, PathSet | None]:
    """min(cap, max internally vertex-disjoint u-v paths) and a witness.

    The direct edge uv, when present, counts as one path.  With
    want_paths=False only the count is computed (fast kernel path).
    """
    if u == v:
        raise SameVertex(f"u == v == {u}")
    if cap < 1:
        raise GraphError("cap must be >= 1")
    if not want_paths:
        indptr, indices, order = g.to_csr()
        pos = {x: i for i, x in enumerate(order)}
        return int(K.maxflow_vertex_capacity(indptr, indices, pos[u], pos[v], cap)), None
    net = _SplitFlow(g, u, v)
    flow = net.augment_upto(cap)
    paths = net.extract_paths(flow)
    ps = PathSet(u=u, v=v, paths=tuple(paths))
    ps.validate(g)
    return flow, ps


def local_connectivity(g: Graph, u: int, v: int, cap: int) -> int:
    c, _ = count_disjoint_paths(g, u, v, cap, want_paths=False)
    return c


def is_k_connected(g: Graph, k: int) -> bool:
    """True iff |V| > k and no vertex cut of size < k exists.

    For k <= 3 this uses articulation sweeps; beyond that it falls back to
    the standard flow reduction (flows from one fixed vertex to all
    non-neighbours plus flows between the fixed vertex's neighbours).
    """
    n = g.n
    if n <= k:
        return False
    if k <= 0:
        return True
    indptr, indices, order = g.to_csr()
    removed = np.zeros(n, dtype=np.uint8)
    if not K.is_connected(indptr, indices, removed):
        return False
    if k == 1:
        return True
    if len(K.articulation_points(indptr, indices, removed)) > 0:
        return False
    if k == 2:
        return True
    if k == 3:
        # 2-connected; a 2-cut exists iff some G-v has an articulation point
        for i in range(n):
            removed[i] = 1
            if len(K.articulation_points(indptr, indices, removed)) > 0:
                return False
            removed[i] = 0
        return True
    # general k: cuts avoiding v0 are caught by flows from v0; cuts through
    # v0 reduce to (k-1)-connectivity of g - v0
    v0 = min(g.vertices(), key=lambda x: (g.degree(x), x))
    pos = {x: i for i, x in enumerate(order)}
    nb = set(g.neighbors(v0))
    for u in g.vertices():
        if u == v0 or u in nb:
            continue
        if K.maxflow_vertex_capacity(indptr, indices, pos[v0], pos[u], k) < k:
            return False
    if g.degree(v0) < k:
        return False
    h = g.copy()
    h.remove_vertex(v0)
    return is_k_connected(h, k - 1)


# -- sparse certificates ------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class ForestDecomposition:
    """Edge-disjoint forests F1..Fk plus the remainder R.

    forests[i] are the edges assigned to forest i+1; keeping
    forests[0..k-1] preserves, for every edge xy in remainder, at least
    min(k, kappa(x, y)) internally disjoint x-y paths.
    """

    k: int
    forests: tuple[tuple[tuple[int, int], ...], ...]
    remainder: tuple[tuple[int, int], ...]

    def kept_edges(self) -> list[tuple[int, int]]:
        return [e for f in self.forests for e in f]

    def validate(self, g: Graph) -> None:
        seen: set[tuple[int, int]] = set()
        for f in self.forests:
            # acyclicity via union-find
            parent: dict[int, int] = {}

            def find(x: int) -> int:
                while parent.get(x, x) != x:
                    parent[x] = parent.get(parent[x], parent[x])
                    x = parent[x]
                return x

            for u, v in f:
                if not g.has_edge(u, v):
                    raise GraphError(f"({u},{v}) not an edge")
                if (u, v) in seen:
                    raise GraphError(f"({u},{v}) assigned twice")
                seen.add((u, v))
                ru, rv = find(u), find(v)
                if ru == rv:
                    raise GraphError(f"forest has a cycle through ({u},{v})")
                parent[ru] = rv
        for e in self.remainder:
            if e in seen:
                raise GraphError(f"{e} in both forest and remainder")
            seen.add(e)
        if seen != set(g.edges()):
            raise GraphError("decomposition does not partition E")


def sparse_certificate(g: Graph, k: int) -> ForestDecomposition:
    """Nagamochi-Ibaraki forest partition, truncated at k kept forests."""
    if k < 1:
        raise GraphError("k must be >= 1")
    edges = g.edge_list()
    eid = {e: i for i, e in enumerate(edges)}
    indptr, indices, order = g.to_csr()
    arc_edge = np.empty(len(indices), dtype=np.int64)
    a = 0
    for i, u in enumerate(order):
        for v in g.neighbors(u):
            arc_edge[a] = eid[(min(u, v), max(u, v))]
            a += 1
    forest_of = K.ni_forest_partition(indptr, indices, arc_edge)
    buckets: dict[int, list[tuple[int, int]]] = {}
    for e, f in zip(edges, forest_of):
        buckets.setdefault(int(f), []).append(e)
    forests = tuple(tuple(buckets.get(i, ())) for i in range(1, k + 1))
    remainder = tuple(
        e for f in sorted(buckets) if f > k for e in buckets[f]
    )
    return ForestDecomposition(k=k, forests=forests, remainder=remainder)


def dense_edge_deletion(
    g: Graph, c: int, protected: Iterable[int] = (), verify: bool = False
) -> list[tuple[int, int]]:
    """Deletable edge set for dense graphs: the NI remainder beyond c forests.

    Every returned edge xy keeps >= c internally disjoint x-y paths in
    g - F.  Requires average degree > 4c.  Edges touching protected
    vertices are never deleted.
    """
    if c < 10:
        raise GraphError("c must be >= 10")
    if g.n == 0 or 2 * g.m <= 4 * c * g.n:
        raise TooSparse(f"average degree {2 * g.m / max(g.n, 1):.2f} <= {4 * c}")
    prot = set(protected)
    cert = sparse_certificate(g, c)
    F = [e for e in cert.remainder if e[0] not in prot and e[1] not in prot]
    if verify:
        kept = g.copy()
        for e in F:
            kept.remove_edge(*e)
        indptr, indices, order = kept.to_csr()
        pos = {x: i for i, x in enumerate(order)}
        for u, v in F:
            got = K.maxflow_vertex_capacity(indptr, indices, pos[u], pos[v], c)
            if got < c:
                raise GraphError(f"deleted edge ({u},{v}) has only {got} paths")
    return F


# -- planarity ----------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class PlanarEmbedding:
    """Rotation system plus derived face list.

    rotation[v] lists v's neighbours in clockwise order; faces are the
    closed walks of the half-edge traversal, outer_face an arbitrary pick
    (embeddings of the sphere have no distinguished outer face).
    """

    rotation: dict[int, tuple[int, ...]]
    faces: tuple[tuple[int, ...], ...]
    outer_face: int

    def euler_check(self, g: Graph) -> bool:
        labels = _component_labels(g)
        ncomp = len(set(labels.values()))
        # each component contributes its own outer-face walk, so the Euler
        # relation n - m + f = 2 holds per component and sums to 2*ncomp
        return g.n - g.m + len(self.faces) == 2 * ncomp

    def face_sets(self) -> list[frozenset[int]]:
        return [frozenset(f) for f in self.faces]

    def to_json(self) -> dict:
        return {
            "rotation": {str(v): list(r) for v, r in self.rotation.items()},
            "faces": [list(f) for f in self.faces],
            "outer_face": self.outer_face,
        }


@dataclasses.dataclass(frozen=True)
class KuratowskiWitness:
    """A K5 or K33 subdivision: branch vertices plus subdivision paths."""

    kind: str  # "K5" | "K33"
    centers: tuple[int, ...]
    paths: tuple[tuple[int, ...], ...]

    def validate(self, g: Graph) -> None:
        if self.kind not in ("K5", "K33"):
            raise GraphError(f"bad witness kind {self.kind}")
        want_centers = 5 if self.kind == "K5" else 6
        if len(set(self.centers)) != want_centers:
            raise GraphError("wrong number of centers")
        interiors: set[int] = set()
        seen_pairs: set[frozenset[int]] = set()
        for p in self.paths:
            if p[0] not in self.centers or p[-1] not in self.centers:
                raise GraphError("path endpoints must be centers")
            for a, b in zip(p, p[1:]):
                if not g.has_edge(a, b):
                    raise GraphError(f"witness uses non-edge ({a},{b})")
            inner = set(p[1:-1])
            if inner & set(self.centers) or len(inner) != len(p) - 2:
                raise GraphError("subdivision path not internally simple")
            if interiors & inner:
                raise GraphError("subdivision paths share interior vertices")
            interiors |= inner
            seen_pairs.add(frozenset((p[0], p[-1])))
        # contracting the paths must give K5 / K33
        if self.kind == "K5":
            if len(self.paths) != 10 or len(seen_pairs) != 10:
                raise GraphError("K5 subdivision needs all 10 center pairs")
        else:
            if len(self.paths) != 9 or len(seen_pairs) != 9:
                raise GraphError("K33 subdivision needs 9 center pairs")
            deg = {c: 0 for c in self.centers}
            for p in self.paths:
                deg[p[0]] += 1
                deg[p[-1]] += 1
            if sorted(deg.values()) != [3] * 6:
                raise GraphError("K33 centers must each meet 3 paths")
            # 2-colourability of the contracted graph on centers
            colour: dict[int, int] = {}
            adjc: dict[int, set[int]] = {c: set() for c in self.centers}
            for p in self.paths:
                adjc[p[0]].add(p[-1])
                adjc[p[-1]].add(p[0])
            stack = [(self.centers[0], 0)]
            while stack:
                c, col = stack.pop()
                if c in colour:
                    if colour[c] != col:
                        raise GraphError("contracted witness is not bipartite")
                    continue
                colour[c] = col
                for d in adjc[c]:
                    stack.append((d, 1 - col))

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "centers": list(self.centers),
            "paths": [list(p) for p in self.paths],
        }


def _component_labels(g: Graph) -> dict[int, int]:
    label: dict[int, int] = {}
    nxt = 0
    for s in g.vertices():
        if s in label:
            continue
        stack = [s]
        label[s] = nxt
        while stack:
            v = stack.pop()
            for w in g.neighbors(v):
                if w not in label:
                    label[w] = nxt
                    stack.append(w)
        nxt += 1
    return label


def _faces_from_rotation(rotation: dict[int, tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Faces of the embedding: traverse each directed half-edge once."""
    index = {
        v: {w: i for i, w in enumerate(rot)} for v, rot in rotation.items()
    }
    seen: set[tuple[int, int]] = set()
    faces: list[tuple[int, ...]] = []
    for v in sorted(rotation):
        for w in rotation[v]:
            if (v, w) in seen:
                continue
            face: list[int] = []
            a, b = v, w
            while (a, b) not in seen:
                seen.add((a, b))
                face.append(a)
                # next half-edge of the face: successor of (b -> a) in b's
                # clockwise rotation gives the face on one fixed side
                rot = rotation[b]
                i = index[b][a]
                c = rot[(i + 1) % len(rot)]
                a, b = b, c
            faces.append(tuple(face))
    return faces


def planar_embedding_or_none(g: Graph) -> PlanarEmbedding | None:
    """Decision-grade planarity: the embedding, or None when non-planar.

    Skips Kuratowski witness extraction (which re-runs the planarity test
    once per edge); use planarity() when the witness matters.
    """
    ng = nx.Graph()
    ng.add_nodes_from(g.vertices())
    ng.add_edges_from(g.edges())
    ok, cert = nx.check_planarity(ng, counterexample=False)
    if not ok:
        return None
    data = cert.get_data()
    rotation = {v: tuple(data[v]) for v in g.vertices()}
    # isolated vertices each sit in their own trivial face
    faces = _faces_from_rotation({v: r for v, r in rotation.items() if r})
    faces += [(v,) for v, r in rotation.items() if not r]
    emb = PlanarEmbedding(rotation=rotation, faces=tuple(faces), outer_face=0)
    if not emb.euler_check(g):
        raise GraphError("embedding failed the Euler check")
    return emb


def planarity(g: Graph) -> PlanarEmbedding | KuratowskiWitness:
    """Planarity test: embedding (with faces) or a verified Kuratowski witness."""
    emb = planar_embedding_or_none(g)
    if emb is not None:
        return emb
    ng = nx.Graph()
    ng.add_nodes_from(g.vertices())
    ng.add_edges_from(g.edges())
    _ok, cert = nx.check_planarity(ng, counterexample=True)
    witness = _witness_from_subgraph(g, cert)
    witness.validate(g)
    return witness


def _witness_from_subgraph(g: Graph, sub: nx.Graph) -> KuratowskiWitness:
    """Shape a Kuratowski subgraph into centers + subdivision paths."""
    h = nx.Graph(sub.edges())
    # prune stray degree <= 1 vertices defensively
    changed = True
    while changed:
        changed = False
        for v in list(h.nodes()):
            if h.degree(v) <= 1:
                h.remove_node(v)
                changed = True
    deg3 = [v for v in h.nodes() if h.degree(v) == 3]
    deg4 = [v for v in h.nodes() if h.degree(v) == 4]
    if len(deg4) == 5 and all(h.degree(v) in (2, 4) for v in h.nodes()):
        kind, centers = "K5", sorted(deg4)
    elif len(deg3) == 6 and all(h.degree(v) in (2, 3) for v in h.nodes()):
        kind, centers = "K33", sorted(deg3)
    else:  # pragma: no cover - networkx returns exact subdivisions
        raise GraphError("unrecognised Kuratowski subgraph shape")
    centers_set = set(centers)
    paths: list[tuple[int, ...]] = []
    used: set[tuple[int, int]] = set()
    for c in centers:
        for w in sorted(h.neighbors(c)):
            if (c, w) in used:
                continue
            path = [c, w]
            used.add((c, w))
            used.add((w, c))
            while path[-1] not in centers_set:
                prev, cur = path[-2], path[-1]
                nbrs = [x for x in h.neighbors(cur) if x != prev]
                if len(nbrs) != 1:  # pragma: no cover
                    raise GraphError("subdivision path branches unexpectedly")
                nxt = nbrs[0]
                used.add((cur, nxt))
                used.add((nxt, cur))
                path.append(nxt)
            if path[0] < path[-1] or (path[0] == path[-1]):
                paths.append(tuple(path))
            else:
                # keep one orientation per path, smallest endpoint first
                paths.append(tuple(reversed(path)))
    # dedupe orientations
    uniq: dict[frozenset[tuple[int, int]], tuple[int, ...]] = {}
    for p in paths:
        key = frozenset((min(a, b), max(a, b)) for a, b in zip(p, p[1:]))
        uniq.setdefault(key, p)
    return KuratowskiWitness(kind=kind, centers=tuple(centers), paths=tuple(sorted(uniq.values())))
