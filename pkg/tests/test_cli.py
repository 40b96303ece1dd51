import io
import json
import math

import pytest

from diffuse.cli import main
from diffuse.generators import barbell, clique, clique_edges
from diffuse.graph import write_edge_list


def run(argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, g in (("barbell", barbell(5)), ("k2", clique(2)), ("tri", clique(3))):
        p = tmp_path / f"{name}.txt"
        with open(p, "w") as fh:
            write_edge_list(g, fh)
        paths[name] = p
    p = tmp_path / "cliques.txt"
    p.write_text("".join(f"{a} {b}\n" for a, b in clique_edges(11) + clique_edges(11, 11) + [(10, 11)]))
    paths["cliques"] = p
    t = tmp_path / "truth.txt"
    t.write_text(" ".join(str(i) for i in range(11)) + "\n")
    paths["truth"] = t
    return paths


def field(text, key):
    for line in text.splitlines():
        if line.startswith(key + ":"):
            return line.split(":", 1)[1].strip()
    raise KeyError(key)


def test_cluster_barbell(files):
    code, out = run(["cluster", files["barbell"], "--seed", 0, "--method", "hk"])
    assert code == 0
    assert field(out, "conductance") == "0.0476190476"
    assert field(out, "set").split() == ["0", "1", "2", "3", "4"]
    assert field(out, "size") == "5"
    assert int(field(out, "work")) > 0 and int(field(out, "support")) == 10


def test_cluster_ppr_dump_vector(files):
    code, out = run(["cluster", files["k2"], "--seed", 0, "--method", "ppr", "--alpha", 0.5,
                     "--eps", 1e-10, "--dump-vector"])
    assert code == 0
    vec = out.split("vector:\n")[1].split()
    assert vec[0] == "0" and abs(float(vec[1]) - 2 / 3) < 1e-8
    assert vec[2] == "1" and abs(float(vec[3]) - 1 / 3) < 1e-8


@pytest.mark.parametrize("argv", [
    ["--seed", 0, "--eps", 2.0],
    ["--seed", 99],
    ["--seed", 0, "--t", -1],
    ["--seed", 0, "--method", "ppr", "--alpha", 1.5],
])
def test_cluster_errors(files, argv, capsys):
    code, _ = run(["cluster", files["barbell"], *argv])
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_missing_graph_and_usage(tmp_path):
    assert run(["cluster", tmp_path / "nope.txt", "--seed", 0])[0] == 1
    with pytest.raises(SystemExit) as exc:
        main(["cluster"])
    assert exc.value.code == 1


def test_malformed_graph(tmp_path, capsys):
    p = tmp_path / "w.txt"
    p.write_text("0 1\n1 2 0.5\n")
    assert run(["cluster", p, "--seed", 0])[0] == 1
    assert "line 2" in capsys.readouterr().err


def test_compare_outputs(files, tmp_path):
    out_csv = tmp_path / "a.csv"
    code, _ = run(["compare", files["barbell"], "--trials", 6, "--rng-seed", 7, "--out", out_csv])
    assert code == 0
    rows = out_csv.read_text().splitlines()
    assert rows[0] == "trial,seed,method,t,alpha,eps,conductance,setsize,work,work_bound,support,terminated_early"
    assert len(rows) == 13
    summary = json.loads(out_csv.with_suffix(".json").read_text())
    assert summary["rng"] == {"algorithm": "numpy.random.PCG64", "seed": 7}
    for method in ("hk", "ppr"):
        assert set(summary["percentiles"][method]["conductance"]) == {"25", "50", "75"}

    again = tmp_path / "b.csv"
    run(["compare", files["barbell"], "--trials", 6, "--rng-seed", 7, "--out", again])
    assert again.read_bytes() == out_csv.read_bytes()


def test_compare_rejects_zero_trials(files, tmp_path):
    assert run(["compare", files["barbell"], "--trials", 0, "--out", tmp_path / "x.csv"])[0] == 1


def test_compare_timings_column(files, tmp_path):
    p = tmp_path / "t.csv"
    run(["compare", files["barbell"], "--trials", 2, "--out", p, "--timings"])
    assert p.read_text().splitlines()[0].endswith(",seconds")


def parse_verify(out):
    lines = out.strip().splitlines()
    header = lines[0].split(",")
    rows = [dict(zip(header, line.split(","))) for line in lines[1:-1]]
    return rows, lines[-1]


def test_verify_triangle(files):
    code, out = run(["verify", files["tri"], "--t", 2, "--eps", 1e-5])
    assert code == 0
    rows, verdict = parse_verify(out)
    assert verdict == "PASS" and len(rows) == 3
    for r in rows:
        assert float(r["max_weighted_error"]) < 1e-5
        assert int(r["work"]) <= float(r["work_bound"])


def test_verify_k2_error_column(files):
    from diffuse.hk import HkParams, hk_relax
    code, out = run(["verify", files["k2"], "--t", 1, "--eps", 1e-6])
    rows, _ = parse_verify(out)
    x = hk_relax(clique(2), [0], HkParams(1.0, 1e-6)).x.to_dense(2)
    exact = [math.exp(-1) * math.cosh(1), math.exp(-1) * math.sinh(1)]
    independent = max(abs(exact[0] - x[0]), abs(exact[1] - x[1]))
    for r in rows:
        assert abs(float(r["max_weighted_error"]) - independent) < 1e-12


def test_verify_cap_and_samples(files):
    assert run(["verify", files["barbell"], "--oracle-cap", 5])[0] == 1
    code, out = run(["verify", files["barbell"], "--oracle-cap", 5, "--samples", 3, "--rng-seed", 1])
    assert code == 0
    assert len(parse_verify(out)[0]) == 3


def test_verify_failure_exit_code(files, monkeypatch):
    import diffuse.cli as cli
    real = cli.hk_relax

    def sloppy(g, seeds, params):
        # a solver that quits immediately cannot meet the error bound
        from diffuse.hk import HkParams
        return real(g, seeds, HkParams(params.t, params.eps, volume_cap=1e-9))

    monkeypatch.setattr(cli, "hk_relax", sloppy)
    code, out = run(["verify", files["barbell"], "--t", 5, "--eps", 1e-6, "--samples", 2])
    assert code == 2
    assert out.strip().endswith("FAIL")


def test_eval_truth(files):
    code, out = run(["eval-truth", files["cliques"], files["truth"]])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "method,f1,conductance,setsize"
    hk = lines[1].split(",")
    assert hk[0] == "hk" and float(hk[1]) == 1.0 and hk[3] == "11"
    assert lines[2].startswith("ppr,")


def test_eval_truth_missing_file(files, tmp_path):
    assert run(["eval-truth", files["cliques"], tmp_path / "none.txt"])[0] == 1


def test_cache_flag(files):
    code, _ = run(["cluster", files["barbell"], "--seed", 0, "--cache"])
    assert code == 0
    assert files["barbell"].with_name("barbell.txt.csr").exists()
    assert run(["cluster", files["barbell"], "--seed", 0, "--cache"])[0] == 0
