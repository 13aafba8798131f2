"""Fast compaction path for maximal planar (triangulation) inputs.

In a 3-connected maximal planar graph every minimal separator induces a
cycle, so a 3-cut through a matching edge xy is exactly a separating
triangle x y w, i.e. a common neighbour w whose triangle is not a face;
and no two edges of an induced matching can form a 4-cut (their four
endpoints span no cycle).  Contracting only matching edges that lie in no
separating triangle therefore preserves 3-connectivity outright, each face
stays a triangle, and the rotation system can be maintained locally: the
two face-mate copies produced by a contraction are consecutive and merge.

The pipeline step here is O(m): greedy matching, refinement, face tests,
contraction with rotation splicing.  Anything irregular falls back to the
generic machinery.
"""

from __future__ import annotations

from typing import Iterable

from .graph import Graph, Matching

Rotation = dict[int, list[int]]


def rotation_is_valid(g: Graph, rot: Rotation) -> bool:
    """Rotation lists exactly the adjacency and closes up by Euler."""
    if set(rot) != set(g.vertices()):
        return False
    for v, nbrs in rot.items():
        if sorted(nbrs) != g.neighbors(v):
            return False
    return count_faces(rot) == 2 - g.n + g.m


def count_faces(rot: Rotation) -> int:
    index = {v: {w: i for i, w in enumerate(r)} for v, r in rot.items()}
    seen: set[tuple[int, int]] = set()
    faces = 0
    for v in rot:
        for w in rot[v]:
            if (v, w) in seen:
                continue
            a, b = v, w
            while (a, b) not in seen:
                seen.add((a, b))
                r = rot[b]
                c = r[(index[b][a] + 1) % len(r)]
                a, b = b, c
            faces += 1
    return faces


def is_triangulation(g: Graph) -> bool:
    return g.n >= 4 and g.m == 3 * g.n - 6


def _face_after(rot: Rotation, index, a: int, b: int) -> int:
    """Third vertex of the face on the fixed side of the half-edge a->b."""
    r = rot[b]
    return r[(index[b][a] + 1) % len(r)]


def separating_triangle_partners(g: Graph, rot: Rotation, e: tuple[int, int]) -> list[int]:
    """Common neighbours w of edge xy whose triangle x y w is NOT a face.

    For maximal planar 3-connected hosts these are exactly the third
    vertices of 3-cuts through the edge.
    """
    x, y = e
    index = {
        x: {w: i for i, w in enumerate(rot[x])},
        y: {w: i for i, w in enumerate(rot[y])},
    }
    common = sorted(set(g.neighbors(x)) & set(g.neighbors(y)))
    face_mates = {_face_after(rot, index, x, y), _face_after(rot, index, y, x)}
    return [w for w in common if w not in face_mates]


def contract_planar_matching(
    g: Graph, rot: Rotation, mat: Matching
) -> tuple[Graph, Rotation]:
    """Contract a face-clean induced matching, splicing rotations.

    Every edge must have exactly its two face mates as common neighbours
    (no separating triangle through it).  The merged vertex keeps the
    smaller id, matching the generic contraction.
    """
    new_rot: Rotation = {v: list(r) for v, r in rot.items()}
    g2 = g.copy()
    for x, y in mat.pairs:
        s, dead = (x, y) if x < y else (y, x)
        rx = new_rot[s]
        ry = new_rot[dead]
        ix = rx.index(dead)
        iy = ry.index(s)
        merged = rx[ix + 1 :] + rx[:ix] + ry[iy + 1 :] + ry[:iy]
        # face-mate copies sit at the two seams; drop the duplicates
        dedup: list[int] = []
        for v in merged:
            if not dedup or dedup[-1] != v:
                dedup.append(v)
        if len(dedup) > 1 and dedup[0] == dedup[-1]:
            dedup.pop()
        new_rot[s] = dedup
        del new_rot[dead]
        # neighbours: replace x/y entries (merging consecutive duplicates)
        for w in set(g2.neighbors(x)) | set(g2.neighbors(y)):
            if w in (x, y):
                continue
            rw = new_rot[w]
            repl: list[int] = []
            for v in rw:
                v2 = s if v in (x, y) else v
                if repl and repl[-1] == v2 == s:
                    continue
                repl.append(v2)
            if len(repl) > 1 and repl[0] == repl[-1] == s:
                repl.pop(0)
            new_rot[w] = repl
        # graph side
        nbrs = (set(g2.neighbors(x)) | set(g2.neighbors(y))) - {x, y}
        g2.remove_vertex(dead)
        if g2.has_vertex(s):
            g2.remove_vertex(s)
        g2.add_vertex(s)
        for w in nbrs:
            g2.add_edge(s, w)
    return g2, new_rot


def planar_matching_step(
    g: Graph,
    rot: Rotation,
    matching_candidates: Matching,
) -> tuple[Matching, list[int]] | None:
    """Filter an induced matching down to edges free of separating
    triangles.  Returns (clean matching, per-edge partner counts) or None
    when nothing survives."""
    clean = []
    partner_counts = []
    for e in matching_candidates.pairs:
        partners = separating_triangle_partners(g, rot, e)
        partner_counts.append(len(partners))
        if not partners:
            clean.append(e)
    if not clean:
        return None
    return Matching.of(clean), partner_counts


def clean_induced_matching(
    g: Graph, rot: Rotation, d: int, protected: Iterable[int] = ()
) -> Matching:
    """Greedy induced matching of face-clean edges (no separating triangle
    through any chosen edge), vertices in non-decreasing degree order.

    Contracting such a matching in a 3-connected maximal planar graph is
    3-connectivity preserving: per-edge 3-cuts would be separating
    triangles, and an induced matching admits no 4-cut because minimal
    separators of maximal planar graphs induce cycles.  Edges at degree-3
    vertices are always clean, which keeps the supply alive on stacked
    hosts.
    """
    prot = set(protected)
    blocked: set[int] = set()
    pairs: list[tuple[int, int]] = []
    order = sorted(
        (v for v in g.vertices() if g.degree(v) <= d and v not in prot),
        key=lambda v: (g.degree(v), v),
    )
    eligible = set(order)
    for v in order:
        if v in blocked:
            continue
        best = None
        for w in sorted(g.neighbors(v), key=lambda w: (g.degree(w), w)):
            if w in blocked or w not in eligible:
                continue
            if separating_triangle_partners(g, rot, (v, w)):
                continue
            best = w
            break
        if best is None:
            continue
        pairs.append((min(v, best), max(v, best)))
        blocked.update((v, best))
        blocked.update(g.neighbors(v))
        blocked.update(g.neighbors(best))
    return Matching.of(pairs)
