"""Seeded graph families used by the CLI bench command and the test suite."""

from __future__ import annotations

import numpy as np

from .graph import Graph


def wheel(k: int) -> Graph:
    """Wheel W_k: a k-cycle plus a hub adjacent to every rim vertex."""
    g = Graph(range(k + 1))
    for i in range(k):
        g.add_edge(i, (i + 1) % k)
        g.add_edge(i, k)
    return g


def complete(n: int) -> Graph:
    g = Graph(range(n))
    for i in range(n):
        for j in range(i + 1, n):
            g.add_edge(i, j)
    return g


def cycle(n: int) -> Graph:
    g = Graph(range(n))
    for i in range(n):
        g.add_edge(i, (i + 1) % n)
    return g


def complete_bipartite(a: int, b: int) -> Graph:
    g = Graph(range(a + b))
    for i in range(a):
        for j in range(a, a + b):
            g.add_edge(i, j)
    return g


def prism() -> Graph:
    """Two triangles joined by a perfect matching (K3 x K2)."""
    g = Graph(range(6))
    for i in range(3):
        g.add_edge(i, (i + 1) % 3)
        g.add_edge(3 + i, 3 + (i + 1) % 3)
        g.add_edge(i, 3 + i)
    return g


def octahedron() -> Graph:
    g = complete(6)
    for i in range(3):
        g.remove_edge(2 * i, 2 * i + 1)
    return g


def random_3_connected(n: int, seed: int, extra_edge_factor: float = 0.4) -> Graph:
    """Wheel augmentation: start from W_4, then repeatedly either add a new
    vertex joined to >= 3 existing vertices or add a missing edge.

    Both steps preserve 3-connectivity, so the result is 3-connected by
    construction.
    """
    rng = np.random.default_rng(seed)
    g = wheel(4)
    while g.n < n:
        vs = g.vertices()
        if rng.random() < extra_edge_factor and g.m < g.n * (g.n - 1) // 2:
            u, v = rng.choice(vs, size=2, replace=False)
            if u != v and not g.has_edge(int(u), int(v)):
                g.add_edge(int(u), int(v))
            continue
        w = g.n
        deg = 3 if g.n < 6 else int(rng.integers(3, min(6, g.n)))
        targets = rng.choice(vs, size=deg, replace=False)
        g.add_vertex(w)
        for t in targets:
            g.add_edge(w, int(t))
    return g


def random_2_connected(n: int, seed: int) -> Graph:
    """Ear-decomposition style: a cycle plus random ears (paths or chords)."""
    rng = np.random.default_rng(seed)
    base = int(rng.integers(3, max(4, min(n, 8))))
    g = cycle(base)
    nxt = base
    while g.n < n:
        vs = g.vertices()
        u, v = (int(x) for x in rng.choice(vs, size=2, replace=False))
        ear_len = int(rng.integers(0, min(4, n - g.n) + 1))
        if ear_len == 0:
            if u != v and not g.has_edge(u, v):
                g.add_edge(u, v)
            continue
        prev = u
        for _ in range(ear_len):
            g.add_vertex(nxt)
            g.add_edge(prev, nxt)
            prev = nxt
            nxt += 1
        if prev != v:
            g.add_edge(prev, v)
    return g


def random_graph(n: int, p: float, seed: int) -> Graph:
    rng = np.random.default_rng(seed)
    g = Graph(range(n))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                g.add_edge(i, j)
    return g


def random_dense_3_connected(n: int, avg_degree: float, seed: int) -> Graph:
    """Random graph of the requested density, patched to be 3-connected."""
    p = min(1.0, avg_degree / max(n - 1, 1))
    rng = np.random.default_rng(seed)
    g = random_graph(n, p, seed)
    # splice in a wheel augmentation skeleton to guarantee 3-connectivity
    sk = random_3_connected(n, seed + 1, extra_edge_factor=0.0)
    for u, v in sk.edges():
        g.add_edge(u, v)
    _ = rng
    return g


def triangulation(n: int, seed: int) -> tuple[Graph, dict[int, list[int]]]:
    """Random maximal planar graph: Delaunay over n-3 random points plus an
    enclosing super-triangle, so every face (including the outer one) is a
    straight-line triangle.

    Returns the graph and its rotation system (counterclockwise neighbour
    order from the drawing).  Maximal planar simple graphs on >= 4 vertices
    are 3-connected.
    """
    from scipy.spatial import Delaunay

    if n < 4:
        raise ValueError("triangulation needs n >= 4")
    rng = np.random.default_rng(seed)
    while True:
        inner = rng.random((n - 3, 2))
        corners = np.array([[-9.0, -9.0], [10.0, -9.0], [0.5, 14.0]])
        pts = np.vstack([inner, corners])
        tri = Delaunay(pts)
        if tri.coplanar.size != 0:
            seed += 7919
            rng = np.random.default_rng(seed)
            continue
        g = Graph(range(n))
        for simplex in tri.simplices:
            a, b, c = (int(x) for x in simplex)
            g.add_edge(a, b)
            g.add_edge(b, c)
            g.add_edge(a, c)
        if g.m == 3 * g.n - 6:
            break
        seed += 7919
        rng = np.random.default_rng(seed)
    rotation: dict[int, list[int]] = {}
    for v in g.vertices():
        nbrs = g.neighbors(v)
        ang = np.arctan2(pts[nbrs, 1] - pts[v, 1], pts[nbrs, 0] - pts[v, 0])
        rotation[v] = [nbrs[i] for i in np.argsort(ang, kind="stable")]
    return g, rotation


def bipartite_degree3_attachment(a_size: int, b_size: int, seed: int) -> Graph:
    """Random bipartite graph: side A, plus b_size vertices picking 3 random
    A-neighbours each.  Almost surely 3-connected once b_size >> a_size."""
    rng = np.random.default_rng(seed)
    g = Graph(range(a_size + b_size))
    for j in range(b_size):
        targets = rng.choice(a_size, size=3, replace=False)
        for t in targets:
            g.add_edge(a_size + j, int(t))
    return g


def triangle_replacement_family(hubs: int, t: int) -> Graph:
    """K_{t,hubs} with every degree-`hubs` vertex replaced by a triangle.

    For hubs=3 this is the family showing that triangle contraction is
    sometimes the only 3-connectivity-preserving shrink: each of the t
    triangles has all-degree-3 vertices matched to the 3 hub vertices.
    """
    if hubs != 3:
        raise ValueError("family defined for 3 hubs")
    g = Graph(range(3))  # hubs 0,1,2
    nxt = 3
    for _ in range(t):
        a, b, c = nxt, nxt + 1, nxt + 2
        nxt += 3
        g.add_edge(a, b)
        g.add_edge(b, c)
        g.add_edge(a, c)
        g.add_edge(a, 0)
        g.add_edge(b, 1)
        g.add_edge(c, 2)
    return g


def star_of_triangles(t: int) -> Graph:
    """A central triangle with t pendant triangles glued on 2-cuts.

    Each pendant triangle shares an edge position with the centre via a
    strong 2-cut: pendant i attaches at two fresh "socket" vertices that
    are joined to the centre so each socket pair is a strong 2-cut.
    """
    # centre triangle 0,1,2; pendant i adds socket pair (u,v) forming a
    # K4-minus-edge with the centre edge, and an apex vertex making the
    # pendant triangle u,v,apex.  The pair {u,v} then carries 3 disjoint
    # paths (edge + centre route + apex route), so it is a strong 2-cut
    # cutting off the apex.
    g = Graph(range(3))
    g.add_edge(0, 1)
    g.add_edge(1, 2)
    g.add_edge(0, 2)
    nxt = 3
    for i in range(t):
        u, v, apex = nxt, nxt + 1, nxt + 2
        nxt += 3
        c0, c1 = i % 3, (i + 1) % 3
        g.add_edge(u, c0)
        g.add_edge(u, c1)
        g.add_edge(v, c0)
        g.add_edge(v, c1)
        g.add_edge(u, v)
        g.add_edge(u, apex)
        g.add_edge(v, apex)
    return g


def ladder_chain(rungs: int) -> Graph:
    """A prism-like ladder: two rails plus rungs; every interior rung pair
    is a strong 2-cut, so the strong tree is one long path."""
    g = Graph(range(2 * rungs))
    for i in range(rungs):
        g.add_edge(2 * i, 2 * i + 1)
        if i + 1 < rungs:
            g.add_edge(2 * i, 2 * i + 2)
            g.add_edge(2 * i + 1, 2 * i + 3)
    # close the ends so the graph is 2-connected
    g.add_edge(0, 1)
    return g


def apex_gadget_planar(n_base: int, apexes: int, seed: int) -> Graph:
    """3-connected planar triangulation with `apexes` degree-3 vertices
    stacked into distinct faces (disjoint degree-3 triangles candidates)."""
    g, _rot = triangulation(n_base, seed)
    from .connectivity import planarity, PlanarEmbedding

    emb = planarity(g)
    assert isinstance(emb, PlanarEmbedding)
    tri_faces = [f for f in emb.faces if len(f) == 3]
    rng = np.random.default_rng(seed + 1)
    idx = rng.permutation(len(tri_faces))
    used: set[int] = set()
    nxt = g.n
    placed = 0
    for i in idx:
        if placed >= apexes:
            break
        f = tri_faces[int(i)]
        if used.intersection(f):
            continue
        used.update(f)
        g.add_vertex(nxt)
        for v in f:
            g.add_edge(nxt, v)
        nxt += 1
        placed += 1
    return g


def circular_ladder(k: int) -> Graph:
    """CL_k: two k-cycles joined by a perfect matching; 3-regular,
    3-connected for k >= 3."""
    g = Graph(range(2 * k))
    for i in range(k):
        g.add_edge(2 * i, 2 * ((i + 1) % k))
        g.add_edge(2 * i + 1, 2 * ((i + 1) % k) + 1)
        g.add_edge(2 * i, 2 * i + 1)
    return g


def triangle_inflation(g: Graph) -> tuple[Graph, list[tuple[int, int, int]]]:
    """Replace every vertex of a cubic graph by a triangle; each original
    edge joins dedicated corners.  Contracting the triangles recovers g.

    All triangle vertices have degree 3, so the triangle set is a canonical
    3-connectivity-preserving contraction instance when g is 3-connected.
    """
    if any(g.degree(v) != 3 for v in g.vertices()):
        raise ValueError("triangle inflation needs a 3-regular graph")
    corner: dict[tuple[int, int], int] = {}
    out = Graph()
    nxt = 0
    triangles = []
    for v in g.vertices():
        ids = []
        for w in g.neighbors(v):
            corner[(v, w)] = nxt
            ids.append(nxt)
            out.add_vertex(nxt)
            nxt += 1
        out.add_edge(ids[0], ids[1])
        out.add_edge(ids[1], ids[2])
        out.add_edge(ids[0], ids[2])
        triangles.append(tuple(ids))
    for u, v in g.edges():
        out.add_edge(corner[(u, v)], corner[(v, u)])
    return out, triangles
