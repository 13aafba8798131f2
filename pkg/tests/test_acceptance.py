"""Acceptance gate: seven criteria, one pass/fail line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines; sizes
follow the stated contracts (counts, tolerances, and the two timing
targets).  Every expected value here is either computed by an independent
brute-force oracle or asserted as an exact structural guarantee.
"""

import time

import numpy as np

from tricomp import generators as gen
from tricomp.compactor import (
    EDGE_SET,
    STABLE_SET,
    CompactorParams,
    compactor,
    iterative_compactor,
    sweet_end,
    is_well_behaved,
)
from tricomp.connectivity import local_connectivity, sparse_certificate
from tricomp.decomposition import (
    CYCLE,
    TRIANGLE,
    special_2cut_tree,
    strong_2cut_tree,
)
from tricomp.drp import (
    ComponentTooLarge,
    DrpInstance,
    check_ferociously_strong,
    check_strong,
    solve,
    verify_certificate,
)
from tricomp.graph import Graph, contract_groups
from tricomp.oracles import (
    bf_is_3_connected,
    bf_all_3cuts,
    bf_strong_2cuts,
    bf_two_disjoint_paths,
)


def report(criterion: str, passed: bool, detail: str) -> None:
    print(f"\n[{ 'PASS' if passed else 'FAIL' }] {criterion}: {detail}")
    assert passed, f"{criterion}: {detail}"


# -- criterion 1: 2-DRP oracle equivalence ---------------------------------------


def test_criterion_1_drp_oracle_equivalence():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20260810)
    disagreements = 0
    total_small = 0
    # random-regeneration sweep over labelled graphs with n <= 7
    for _ in range(100_000):
        n = int(rng.integers(4, 8))
        p = float(rng.uniform(0.15, 0.85))
        g = gen.random_graph(n, p, int(rng.integers(2**62)))
        vs = [int(x) for x in rng.permutation(n)[:4]]
        inst = DrpInstance(graph=g, s1=vs[0], t1=vs[1], s2=vs[2], t2=vs[3])
        cert = solve(inst)
        want = bf_two_disjoint_paths(g, *vs)
        if (cert.kind == "two_paths") != (want is not None):
            disagreements += 1
        total_small += 1
    total_mid = 0
    for _ in range(10_000):
        n = int(rng.integers(8, 15))
        p = float(rng.uniform(0.15, 0.7))
        g = gen.random_graph(n, p, int(rng.integers(2**62)))
        vs = [int(x) for x in rng.permutation(n)[:4]]
        inst = DrpInstance(graph=g, s1=vs[0], t1=vs[1], s2=vs[2], t2=vs[3])
        cert = solve(inst)
        want = bf_two_disjoint_paths(g, *vs)
        if (cert.kind == "two_paths") != (want is not None):
            disagreements += 1
        total_mid += 1
    dt = time.perf_counter() - t0
    report(
        "criterion 1 (2-DRP oracle equivalence)",
        disagreements == 0 and dt < 600,
        f"{total_small} graphs n<=7 plus {total_mid} graphs 8<=n<=14, "
        f"{disagreements} disagreements, {dt:.1f}s (< 600s)",
    )


# -- criterion 2: certificate soundness --------------------------------------------


def test_criterion_2_certificate_soundness():
    rng = np.random.default_rng(77)
    total = 0
    verified = 0
    strong_ok = 0
    planar_count = 0
    ferocity_failures = 0
    undecided = 0
    while total < 1000:
        kind = total % 3
        n = int(rng.integers(5, 13))
        if kind == 0:
            g = gen.random_graph(n, float(rng.uniform(0.2, 0.6)), int(rng.integers(2**62)))
        elif kind == 1:
            g, _rot = gen.triangulation(max(n, 5), int(rng.integers(2**62)))
            keep = sorted(
                int(x)
                for x in rng.choice(g.vertices(), size=min(g.n, n + 2), replace=False)
            )
            g = g.induced(keep)
        else:
            g = gen.random_2_connected(n, int(rng.integers(2**62)))
        if g.n < 4:
            continue
        vs = [int(x) for x in rng.permutation(g.vertices())[:4]]
        inst = DrpInstance(graph=g, s1=vs[0], t1=vs[1], s2=vs[2], t2=vs[3])
        cert = solve(inst)
        total += 1
        if verify_certificate(inst, cert):
            verified += 1
        if cert.kind == "planar_reduction":
            planar_count += 1
            if check_strong(cert.reduction, cert.embedding):
                strong_ok += 1
            try:
                ok, _w = check_ferociously_strong(cert.reduction, cert.embedding)
                if not ok:
                    ferocity_failures += 1
            except ComponentTooLarge:
                undecided += 1
    report(
        "criterion 2 (certificate soundness)",
        verified == total and strong_ok == planar_count and ferocity_failures == 0,
        f"{verified}/{total} certificates verified; "
        f"{strong_ok}/{planar_count} planar reductions strong; "
        f"ferocity: 0 false ({ferocity_failures}), {undecided} undecided",
    )


# -- criterion 3: compaction preserves 3-connectivity --------------------------------


def test_criterion_3_compaction_preservation():
    rng = np.random.default_rng(33)
    params = CompactorParams(n0=8)
    graphs_checked = 0
    steps_checked = 0
    failures = 0
    c = params.c
    while graphs_checked < 500:
        kind = graphs_checked % 4
        if kind == 0:
            n = int(rng.integers(8, 60))
            g = gen.random_3_connected(n, int(rng.integers(2**62)))
        elif kind == 1:
            n = int(rng.integers(8, 41))
            g, _ = gen.triangulation(max(n, 5), int(rng.integers(2**62)))
        elif kind == 2:
            n = int(rng.integers(44, 201))
            g = gen.random_dense_3_connected(n, avg_degree=4 * c + 4, seed=int(rng.integers(2**62)))
        else:
            n = int(rng.integers(60, 201))
            g = gen.random_3_connected(n, int(rng.integers(2**62)), extra_edge_factor=0.3)
        seq = iterative_compactor(g, C5=g.vertices()[:5], params=params, verify="off")
        h = seq.initial
        for st in seq.steps:
            from tricomp.graph import apply_minor_op

            h2, _, _ = apply_minor_op(h, st.op)
            if not bf_is_3_connected(h2):
                failures += 1
            # flow side conditions for the deletion outputs
            if st.output.tag == EDGE_SET:
                kept = h.copy()
                for e in st.output.edges:
                    kept.remove_edge(*e)
                for u, v in st.output.edges:
                    if local_connectivity(kept, u, v, c) < c:
                        failures += 1
            elif st.output.tag == STABLE_SET:
                kept = h.copy()
                for v in st.output.stable:
                    kept.remove_vertex(v)
                for v in st.output.stable:
                    nb = sorted(h.neighbors(v))
                    for i, a in enumerate(nb):
                        for b in nb[i + 1 :]:
                            if local_connectivity(kept, a, b, c) < c:
                                failures += 1
            h = h2
            steps_checked += 1
        graphs_checked += 1
    report(
        "criterion 3 (compaction preservation)",
        failures == 0 and steps_checked > 0,
        f"{graphs_checked} graphs, {steps_checked} steps oracle-checked, {failures} failures",
    )


# -- criterion 4: the three contraction-preservation suites ---------------------------


def test_criterion_4_preservation_property_suites():
    rng = np.random.default_rng(44)
    # Theorem: disjoint all-degree-3 triangles contract 3-connectedly
    tri_checked = 0
    tri_failures = 0
    while tri_checked < 1000:
        pick = tri_checked % 3
        if pick == 0:
            host = gen.circular_ladder(int(rng.integers(3, 9)))
            g, triangles = gen.triangle_inflation(host)
        elif pick == 1:
            g = gen.triangle_replacement_family(3, int(rng.integers(3, 12)))
            t = (g.n - 3) // 3
            triangles = [(3 + 3 * i, 4 + 3 * i, 5 + 3 * i) for i in range(t)]
        else:
            host = gen.random_3_connected(int(rng.integers(6, 14)), int(rng.integers(2**62)))
            if any(host.degree(v) != 3 for v in host.vertices()):
                # inflate only cubic hosts; mix in prisms otherwise
                host = gen.prism()
            g, triangles = gen.triangle_inflation(host)
        take = [t for t in triangles if rng.random() < 0.8] or triangles[:1]
        contracted, _ = contract_groups(g, take)
        if contracted.n >= 4 and not bf_is_3_connected(contracted):
            tri_failures += 1
        tri_checked += 1
    # Lemma: sweet-edge matchings contract 3-connectedly
    sweet_checked = 0
    sweet_failures = 0
    while sweet_checked < 1000:
        n = int(rng.integers(6, 22))
        g = (
            gen.wheel(n)
            if sweet_checked % 3 == 0
            else gen.random_3_connected(n, int(rng.integers(2**62)), extra_edge_factor=0.35)
        )
        used: set[int] = set()
        mat = []
        for e in g.edges():
            if used.intersection(e):
                continue
            if sweet_end(g, e) is not None:
                mat.append(e)
                used.update(e)
        if not mat or g.n < 6:
            continue
        contracted, _ = contract_groups(g, mat)
        if contracted.n >= 4 and not bf_is_3_connected(contracted):
            sweet_failures += 1
        sweet_checked += 1
    # Lemma: well-behaved edge matchings over disjoint regions contract
    # 3-connectedly
    wb_checked = 0
    wb_failures = 0
    while wb_checked < 1000:
        n = int(rng.integers(9, 16))
        g = gen.random_3_connected(n, int(rng.integers(2**62)), extra_edge_factor=0.15)
        items = []
        used = set()
        for X, U in bf_all_3cuts(g):
            region = set(X) | set(U)
            if used & region:
                continue
            got = None
            for u in sorted(U):
                for w in g.neighbors(u):
                    if w in set(U) and u < w and is_well_behaved(g, X, U, (u, w)):
                        got = (u, w)
                        break
                if got:
                    break
            if got:
                items.append(got)
                used |= region
        if not items:
            continue
        contracted, _ = contract_groups(g, items)
        if contracted.n >= 4 and not bf_is_3_connected(contracted):
            wb_failures += 1
        wb_checked += 1
    report(
        "criterion 4 (contraction preservation suites)",
        tri_failures == 0 and sweet_failures == 0 and wb_failures == 0,
        f"triangles {tri_checked}/0 fail, sweet {sweet_checked}/0 fail, "
        f"well-behaved {wb_checked}/0 fail "
        f"(counts/failures: {tri_failures},{sweet_failures},{wb_failures})",
    )


# -- criterion 5: decomposition correctness --------------------------------------------


def test_criterion_5_decomposition_correctness():
    rng = np.random.default_rng(55)
    mismatches = 0
    kind_failures = 0
    total = 0
    for _ in range(10_000):
        n = int(rng.integers(4, 10))
        g = gen.random_2_connected(n, int(rng.integers(2**62)))
        tree = strong_2cut_tree(g)
        if tree.cut_pairs() != bf_strong_2cuts(g):
            mismatches += 1
        for i in tree.graph_node_indices():
            nd = tree.nodes[i]
            piece = nd.piece
            if nd.kind == CYCLE:
                if not all(piece.degree(v) == 2 for v in piece.vertices()):
                    kind_failures += 1
            elif piece.n >= 4 and not bf_is_3_connected(piece):
                kind_failures += 1
        total += 1
    sp = special_2cut_tree(strong_2cut_tree(gen.cycle(6)))
    c6_leaves = len(sp.leaf_graph_nodes())
    c6_tris = sum(1 for i in sp.graph_node_indices() if sp.nodes[i].kind == TRIANGLE)
    report(
        "criterion 5 (decomposition correctness)",
        mismatches == 0 and kind_failures == 0 and c6_leaves == 3 and c6_tris == 4,
        f"{total} random 2-connected graphs: {mismatches} cut-pair mismatches, "
        f"{kind_failures} node-kind failures; special(C6): {c6_leaves} leaf "
        f"triangles (expected 3)",
    )


# -- criterion 6: dense shrink bound ----------------------------------------------------


def test_criterion_6_dense_edge_set_bound():
    params = CompactorParams(n0=8)
    c = params.c
    results = []
    ok = True
    for seed in (1, 2, 3):
        n = 1000 + 200 * seed
        g = gen.random_dense_3_connected(n, avg_degree=4 * c + 6, seed=seed)
        assert 2 * g.m > 4 * c * g.n
        out = compactor(g, params=params, verify="off")
        results.append((g.n, g.m, out.tag, out.payload_size))
        if out.tag != EDGE_SET or out.payload_size < g.m / 4:
            ok = False
    report(
        "criterion 6 (dense EdgeSet >= |E|/4, tolerance 0)",
        ok,
        "; ".join(f"n={n} m={m}: {tag} deleted {p} >= m/4={m/4:.0f}" for n, m, tag, p in results),
    )


# -- criterion 7: performance sanity -----------------------------------------------------


def test_criterion_7_performance_sanity():
    # engineering targets, not paper claims
    g, rot = gen.triangulation(33336, seed=11)
    assert g.m >= 100_000
    t0 = time.perf_counter()
    seq = iterative_compactor(
        g, params=CompactorParams(n0=5000), verify="off", rotation=rot
    )
    dt_compact = time.perf_counter() - t0
    ok_compact = seq.status == "Complete" and seq.final.n < 5000 and dt_compact < 60

    rng = np.random.default_rng(9)
    n = 10_000
    big = Graph(range(n))
    target = 1_000_000
    adj: dict[int, set] = {v: set() for v in range(n)}
    count = 0
    while count < target:
        us = rng.integers(0, n, size=200_000)
        vs = rng.integers(0, n, size=200_000)
        for u, v in zip(us, vs):
            if count >= target:
                break
            u, v = int(u), int(v)
            if u == v or v in adj[u]:
                continue
            adj[u].add(v)
            adj[v].add(u)
            count += 1
    big._adj = {v: sorted(adj[v]) for v in range(n)}
    big._m = count
    t0 = time.perf_counter()
    cert = sparse_certificate(big, 10)
    dt_cert = time.perf_counter() - t0
    ok_cert = dt_cert < 10 and len(cert.kept_edges()) <= 10 * (n - 1)
    report(
        "criterion 7 (performance sanity)",
        ok_compact and ok_cert,
        f"compact 10^5-edge triangulation end-to-end: {dt_compact:.2f}s (< 60s), "
        f"{len(seq.steps)} steps to n={seq.final.n}; "
        f"sparse certificate on 10^6 edges: {dt_cert:.2f}s (< 10s)",
    )
