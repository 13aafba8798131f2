import json

from click.testing import CliRunner

from tricomp import generators as gen
from tricomp.cli import main
from tricomp.graph import write_edge_list


def _write(tmp_path, g, name="g.txt"):
    p = tmp_path / name
    p.write_text(write_edge_list(g))
    return str(p)


def test_decompose_c6_single_cycle_node(tmp_path):
    path = _write(tmp_path, gen.cycle(6))
    r = CliRunner().invoke(main, ["decompose", "--graph", path, "--json"])
    assert r.exit_code == 0, r.output
    report = json.loads(r.output)
    nodes = report["tree"]["nodes"]
    assert len(nodes) == 1 and nodes[0]["kind"] == "cycle"


def test_decompose_k23_one_cut_node(tmp_path):
    path = _write(tmp_path, gen.complete_bipartite(2, 3))
    r = CliRunner().invoke(main, ["decompose", "--graph", path, "--json"])
    report = json.loads(r.output)
    cuts = [n for n in report["tree"]["nodes"] if n["type"] == "cut"]
    assert len(cuts) == 1 and cuts[0]["pair"] == [0, 1]


def test_decompose_malformed_file(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("e 0 1\n")
    r = CliRunner().invoke(main, ["decompose", "--graph", str(p)])
    assert r.exit_code == 2


def test_decompose_not_2connected(tmp_path):
    from tricomp.graph import Graph

    path = _write(tmp_path, Graph.from_edges([(0, 1), (1, 2)]))
    r = CliRunner().invoke(main, ["decompose", "--graph", path])
    assert r.exit_code == 2


def test_compact_step_dense(tmp_path):
    g = gen.random_dense_3_connected(64, avg_degree=44, seed=5)
    path = _write(tmp_path, g)
    r = CliRunner().invoke(
        main,
        ["compact", "--graph", path, "--step", "--n0", "8", "--json"],
    )
    assert r.exit_code == 0, r.output
    report = json.loads(r.output)
    assert report["output"]["tag"] == "EdgeSet"


def test_compact_full_run_and_exit_codes(tmp_path):
    g = gen.random_3_connected(60, 3)
    path = _write(tmp_path, g)
    r = CliRunner().invoke(
        main, ["compact", "--graph", path, "--n0", "8", "--verify", "debug", "--json"]
    )
    assert r.exit_code == 0, r.output
    report = json.loads(r.output)
    assert report["sequence"]["final"]["n"] < 60


def test_compact_rejects_non_3_connected(tmp_path):
    path = _write(tmp_path, gen.cycle(9))
    r = CliRunner().invoke(main, ["compact", "--graph", path, "--n0", "4"])
    assert r.exit_code == 2


def test_solve_feasible_exit_0(tmp_path):
    path = _write(tmp_path, gen.complete(4))
    r = CliRunner().invoke(
        main,
        ["solve", "--graph", path, "--terminals", "0,1,2,3", "--oracle-check", "--json"],
    )
    assert r.exit_code == 0, r.output
    report = json.loads(r.output)
    assert report["certificate"]["kind"] == "two_paths"
    assert report["verified"] is True


def test_solve_infeasible_exit_1_and_certificate(tmp_path):
    from tricomp.graph import Graph

    g = Graph.from_edges([(0, 1), (1, 2), (2, 3), (3, 0)])
    path = _write(tmp_path, g)
    cert_file = tmp_path / "cert.json"
    r = CliRunner().invoke(
        main,
        [
            "solve",
            "--graph", path,
            "--terminals", "0,2,1,3",
            "--certificate", str(cert_file),
            "--json",
        ],
    )
    assert r.exit_code == 1, r.output
    saved = json.loads(cert_file.read_text())
    assert saved["kind"] == "planar_reduction"
    assert saved["strength"] in ("strong", "ferociously_strong")
    assert "rotation" in saved and "separators" in saved


def test_solve_bad_terminals(tmp_path):
    path = _write(tmp_path, gen.complete(4))
    r = CliRunner().invoke(main, ["solve", "--graph", path, "--terminals", "0,0,1,2"])
    assert r.exit_code == 2


def test_bench_deterministic(tmp_path):
    args = [
        "bench",
        "--family", "random3",
        "--sizes", "30,40",
        "--seed", "7",
        "--n0", "8",
        "--json",
    ]
    r1 = CliRunner().invoke(main, args)
    r2 = CliRunner().invoke(main, args)
    assert r1.exit_code == 0, r1.output
    a = json.loads(r1.output)
    b = json.loads(r2.output)
    for row in a["rows"]:
        row.pop("wall_time_s")
    for row in b["rows"]:
        row.pop("wall_time_s")
    assert a == b


def test_bench_empty_sizes():
    r = CliRunner().invoke(main, ["bench", "--family", "random3", "--sizes", ""])
    assert r.exit_code == 0
    assert json.loads(CliRunner().invoke(
        main, ["bench", "--family", "random3", "--sizes", "", "--json"]
    ).output)["rows"] == []


def test_oracle_subcommands(tmp_path):
    path = _write(tmp_path, gen.complete(4))
    r = CliRunner().invoke(main, ["oracle", "two-paths", "--graph", path, "--terminals", "0,1,2,3"])
    assert r.exit_code == 0 and "p1=" in r.output
    r2 = CliRunner().invoke(main, ["oracle", "three-connected", "--graph", path])
    assert r2.output.strip() == "True"
    path5 = _write(tmp_path, gen.complete_bipartite(2, 3), "k23.txt")
    r3 = CliRunner().invoke(main, ["oracle", "strong-2cuts", "--graph", path5])
    assert json.loads(r3.output) == [[0, 1]]


def test_solve_round_trips_verify(tmp_path):
    # every emitted certificate verifies (spec invariant for the CLI)
    import numpy as np

    rng = np.random.default_rng(13)
    runner = CliRunner()
    for i in range(10):
        g = gen.random_graph(int(rng.integers(4, 9)), 0.5, int(rng.integers(1e9)))
        path = _write(tmp_path, g, f"g{i}.txt")
        ts = ",".join(str(int(x)) for x in rng.permutation(g.n)[:4])
        r = runner.invoke(main, ["solve", "--graph", path, "--terminals", ts, "--json"])
        assert r.exit_code in (0, 1), r.output
        assert json.loads(r.output)["verified"] is True
