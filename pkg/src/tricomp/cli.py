"""Command-line front end: decompose, compact, solve, bench, oracle."""

from __future__ import annotations

import json
import sys
import time

import click

from . import generators as gen
from .compactor import CompactorParams, compactor, iterative_compactor
from .decomposition import (
    Not2Connected,
    block_tree,
    special_2cut_tree,
    strong_2cut_tree,
)
from .drp import BadTerminals, DrpConfig, DrpInstance, solve, verify_certificate
from .graph import Graph, GraphError, ParseError, parse_edge_list
from .oracles import (
    bf_all_3cuts,
    bf_is_3_connected,
    bf_strong_2cuts,
    bf_two_disjoint_paths,
)

EXIT_OK = 0
EXIT_CERTIFIED_INFEASIBLE = 1
EXIT_INPUT_ERROR = 2
EXIT_VERIFICATION_FAILURE = 3


def _load_graph(path: str) -> Graph:
    try:
        with open(path) as fh:
            return parse_edge_list(fh.read())
    except (OSError, ParseError) as exc:
        raise click.exceptions.Exit(EXIT_INPUT_ERROR) from _echo_err(f"input error: {exc}")


def _echo_err(msg: str):
    click.echo(msg, err=True)
    return None


def _params_from(c: int, d: int, delta: float | None, n0: int) -> CompactorParams:
    return CompactorParams(c=c, d=d, delta=delta, n0=n0)


@click.group()
def main() -> None:
    """Graph compaction preserving 3-connectivity, and a 2-disjoint-rooted-
    paths solver with planar certificates."""


@main.command()
@click.option("--graph", "graph_path", required=True, type=click.Path())
@click.option("--kind", type=click.Choice(["block", "strong", "special"]), default="strong")
@click.option("--json", "as_json", is_flag=True)
def decompose(graph_path: str, kind: str, as_json: bool) -> None:
    """Emit the block tree or the strong/special 2-cut tree."""
    g = _load_graph(graph_path)
    t0 = time.perf_counter()
    try:
        if kind == "block":
            blocks, cuts = block_tree(g)
            payload = {"blocks": blocks, "cut_vertices": cuts}
            summary = f"{len(blocks)} blocks, {len(cuts)} cut vertices"
        else:
            tree = strong_2cut_tree(g)
            if kind == "special":
                tree = special_2cut_tree(tree)
            payload = tree.to_json()
            kinds = [n["kind"] for n in payload["nodes"] if n["type"] == "graph"]
            summary = (
                f"{len(payload['nodes'])} nodes "
                f"({sum(1 for n in payload['nodes'] if n['type'] == 'cut')} cuts), "
                f"graph nodes: {sorted(set(kinds))}"
            )
    except Not2Connected as exc:
        _echo_err(f"input error: {exc}")
        sys.exit(EXIT_INPUT_ERROR)
    dt = time.perf_counter() - t0
    report = {
        "command": f"decompose/{kind}",
        "input": {"n": g.n, "m": g.m},
        "wall_time_s": round(dt, 6),
        "tree": payload,
    }
    if as_json:
        click.echo(json.dumps(report))
    else:
        click.echo(f"decompose[{kind}] n={g.n} m={g.m}: {summary} ({dt:.3f}s)")


@main.command()
@click.option("--graph", "graph_path", required=True, type=click.Path())
@click.option("--step", "single_step", is_flag=True, help="run a single compactor call")
@click.option("--c", "c_", type=int, default=10, show_default=True)
@click.option("--d", "d_", type=int, default=1024, show_default=True)
@click.option("--delta", type=float, default=None)
@click.option("--n0", type=int, default=5000, show_default=True)
@click.option("--protect", default="", help="comma-separated protected vertices (<= 5)")
@click.option("--verify", type=click.Choice(["off", "debug", "full"]), default="debug")
@click.option("--json", "as_json", is_flag=True)
def compact(graph_path, single_step, c_, d_, delta, n0, protect, verify, as_json) -> None:
    """Iteratively compact a 3-connected graph (or one step with --step)."""
    g = _load_graph(graph_path)
    try:
        params = _params_from(c_, d_, delta, n0)
        prot = [int(x) for x in protect.split(",") if x.strip() != ""]
    except (GraphError, ValueError) as exc:
        _echo_err(f"input error: {exc}")
        sys.exit(EXIT_INPUT_ERROR)
    t0 = time.perf_counter()
    try:
        if single_step:
            out = compactor(g, prot, params, verify=verify)
            dt = time.perf_counter() - t0
            report = {
                "command": "compact/step",
                "input": {"n": g.n, "m": g.m},
                "wall_time_s": round(dt, 6),
                "output": out.to_json(),
            }
            if as_json:
                click.echo(json.dumps(report))
            else:
                click.echo(
                    f"compactor n={g.n} m={g.m}: {out.tag} payload={out.payload_size}"
                    f" verified={out.all_passed()} ({dt:.3f}s)"
                )
            sys.exit(EXIT_OK if out.all_passed() else EXIT_VERIFICATION_FAILURE)
        seq = iterative_compactor(g, prot, params, verify=verify)
    except GraphError as exc:
        _echo_err(f"error: {exc}")
        sys.exit(EXIT_INPUT_ERROR)
    dt = time.perf_counter() - t0
    report = {
        "command": "compact",
        "input": {"n": g.n, "m": g.m},
        "wall_time_s": round(dt, 6),
        "sequence": seq.to_json(),
    }
    ok = all(st.output.all_passed() for st in seq.steps)
    if as_json:
        click.echo(json.dumps(report))
    else:
        click.echo(
            f"compact n={g.n} m={g.m}: {len(seq.steps)} steps -> "
            f"n={seq.final.n} m={seq.final.m} status={seq.status} ({dt:.3f}s)"
        )
        for i, st in enumerate(seq.steps):
            click.echo(
                f"  step {i}: {st.output.tag:12s} payload={st.output.payload_size:6d} "
                f"shrink={st.shrink_ratio:.4f}"
            )
    sys.exit(EXIT_OK if ok else EXIT_VERIFICATION_FAILURE)


@main.command(name="solve")
@click.option("--graph", "graph_path", required=True, type=click.Path())
@click.option("--terminals", required=True, help="s1,t1,s2,t2")
@click.option("--certificate", "cert_path", type=click.Path(), default=None)
@click.option("--oracle-check", is_flag=True)
@click.option("--json", "as_json", is_flag=True)
def solve_cmd(graph_path, terminals, cert_path, oracle_check, as_json) -> None:
    """Two vertex-disjoint rooted paths, or a planar-reduction certificate."""
    g = _load_graph(graph_path)
    try:
        ts = [int(x) for x in terminals.split(",")]
        if len(ts) != 4:
            raise ValueError("need exactly 4 terminals")
        inst = DrpInstance(graph=g, s1=ts[0], t1=ts[1], s2=ts[2], t2=ts[3])
    except (ValueError, BadTerminals) as exc:
        _echo_err(f"input error: {exc}")
        sys.exit(EXIT_INPUT_ERROR)
    t0 = time.perf_counter()
    cert = solve(inst, DrpConfig(oracle_check=False))
    dt = time.perf_counter() - t0
    ok = verify_certificate(inst, cert)
    oracle_note = ""
    if oracle_check:
        want = bf_two_disjoint_paths(g, *ts)
        agreed = (want is not None) == (cert.kind == "two_paths")
        oracle_note = f" oracle_agrees={agreed}"
        ok = ok and agreed
    payload = cert.to_json()
    if cert_path:
        with open(cert_path, "w") as fh:
            json.dump(payload, fh)
    report = {
        "command": "solve",
        "input": {"n": g.n, "m": g.m, "terminals": ts},
        "wall_time_s": round(dt, 6),
        "verified": ok,
        "certificate": payload,
    }
    if as_json:
        click.echo(json.dumps(report))
    else:
        if cert.kind == "two_paths":
            click.echo(
                f"solve: feasible; p1={list(cert.p1)} p2={list(cert.p2)} "
                f"verified={ok}{oracle_note} ({dt:.3f}s)"
            )
        else:
            click.echo(
                f"solve: infeasible; planar reduction on {cert.reduction.kept.n} "
                f"vertices, strength={cert.strength} verified={ok}{oracle_note} ({dt:.3f}s)"
            )
    if not ok:
        sys.exit(EXIT_VERIFICATION_FAILURE)
    sys.exit(EXIT_OK if cert.kind == "two_paths" else EXIT_CERTIFIED_INFEASIBLE)


FAMILIES = {
    "triangulation": lambda n, seed: gen.triangulation(n, seed)[0],
    "random3": lambda n, seed: gen.random_3_connected(n, seed),
    "dense": lambda n, seed: gen.random_dense_3_connected(n, 44, seed),
    "bipartite3": lambda n, seed: gen.bipartite_degree3_attachment(
        max(4, round(n ** 0.8) // 4), n - max(4, round(n ** 0.8) // 4), seed
    ),
    "triangle-replacement": lambda n, seed: gen.triangle_replacement_family(
        3, max(1, (n - 3) // 3)
    ),
}


@main.command()
@click.option("--family", type=click.Choice(sorted(FAMILIES)), required=True)
@click.option("--sizes", required=True, help="comma-separated vertex counts")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--c", "c_", type=int, default=10)
@click.option("--d", "d_", type=int, default=1024)
@click.option("--n0", type=int, default=5000)
@click.option("--verify", type=click.Choice(["off", "debug", "full"]), default="off")
@click.option("--json", "as_json", is_flag=True)
def bench(family, sizes, seed, c_, d_, n0, verify, as_json) -> None:
    """Deterministic generation + timing/shrink table for a graph family."""
    try:
        size_list = [int(x) for x in sizes.split(",") if x.strip()]
    except ValueError as exc:
        _echo_err(f"input error: {exc}")
        sys.exit(EXIT_INPUT_ERROR)
    params = CompactorParams(c=c_, d=d_, n0=n0)
    rows = []
    for i, n in enumerate(size_list):
        g = FAMILIES[family](n, seed + i)
        t0 = time.perf_counter()
        seq = iterative_compactor(g, params=params, verify=verify)
        dt = time.perf_counter() - t0
        total_shrink = (seq.final.n + seq.final.m) / max(1, g.n + g.m)
        rows.append(
            {
                "n": g.n,
                "m": g.m,
                "steps": len(seq.steps),
                "status": seq.status,
                "final_n": seq.final.n,
                "final_m": seq.final.m,
                "total_shrink": round(total_shrink, 4),
                "wall_time_s": round(dt, 4),
                "tags": [st.output.tag for st in seq.steps],
            }
        )
    report = {"command": "bench", "family": family, "seed": seed, "rows": rows}
    if as_json:
        click.echo(json.dumps(report))
    else:
        click.echo(f"bench family={family} seed={seed}")
        click.echo(f"{'n':>8} {'m':>9} {'steps':>5} {'final':>13} {'shrink':>7} {'time':>8}")
        for r in rows:
            click.echo(
                f"{r['n']:>8} {r['m']:>9} {r['steps']:>5} "
                f"{str(r['final_n']) + '/' + str(r['final_m']):>13} "
                f"{r['total_shrink']:>7.4f} {r['wall_time_s']:>7.3f}s"
            )
    sys.exit(EXIT_OK)


@main.group()
def oracle() -> None:
    """Brute-force cross-checks (small graphs only)."""


@oracle.command(name="two-paths")
@click.option("--graph", "graph_path", required=True, type=click.Path())
@click.option("--terminals", required=True)
def oracle_two_paths(graph_path, terminals) -> None:
    g = _load_graph(graph_path)
    ts = [int(x) for x in terminals.split(",")]
    got = bf_two_disjoint_paths(g, *ts)
    if got is None:
        click.echo("infeasible")
        sys.exit(EXIT_CERTIFIED_INFEASIBLE)
    click.echo(f"p1={list(got[0])} p2={list(got[1])}")
    sys.exit(EXIT_OK)


@oracle.command(name="three-connected")
@click.option("--graph", "graph_path", required=True, type=click.Path())
def oracle_three_connected(graph_path) -> None:
    g = _load_graph(graph_path)
    click.echo(str(bf_is_3_connected(g)))


@oracle.command(name="strong-2cuts")
@click.option("--graph", "graph_path", required=True, type=click.Path())
def oracle_strong_2cuts(graph_path) -> None:
    g = _load_graph(graph_path)
    click.echo(json.dumps(bf_strong_2cuts(g)))


@oracle.command(name="3cuts")
@click.option("--graph", "graph_path", required=True, type=click.Path())
@click.option("--protect", default="")
def oracle_3cuts(graph_path, protect) -> None:
    g = _load_graph(graph_path)
    C = frozenset(int(x) for x in protect.split(",") if x.strip())
    out = bf_all_3cuts(g, C)
    click.echo(json.dumps([[list(x), list(u)] for x, u in out]))


if __name__ == "__main__":
    main()
