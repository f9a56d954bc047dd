import json

import pytest

from ease.cli import main


def run(*argv):
    return main([str(a) for a in argv])


def pipeline(d, seed=0):
    d.mkdir(parents=True, exist_ok=True)
    s = ["--seed", seed]
    assert run("generate", "--preset", "small", "--scale", 4096, "--combos", "C1,C6", "--out-dir", d / "suite", *s) == 0
    assert run("dataset", "--suite-manifest", d / "suite" / "manifest.csv", "--partitioners", "1ds,dbh,hdrf-1.0,ne",
               "--ks", "4,8", "--workloads", "pagerank,cc,synthetic-low", "--jobs", 1,
               "--out-quality", d / "q.csv", "--out-runtime", d / "r.csv", *s) == 0
    assert run("train", "--quality", d / "q.csv", "--runtime", d / "r.csv", "--grid", "fast", "--model", "auto",
               "--folds", 3, "--holdout", 0.2, "--out", d / "suite.json", *s) == 0
    g = sorted((d / "suite").glob("*.el"))[0]
    assert run("select", "--suite", d / "suite.json", "--graph", g, "--k", 4, "--algorithm", "pagerank",
               "--goal", "e2e", "--report", d / "select.json", *s) == 0
    assert run("report", "--suite", d / "suite.json", "--quality", d / "q.csv", "--runtime", d / "r.csv",
               "--out-json", d / "cmp.json", "--out", d / "table.txt", *s) == 0
    return g


@pytest.fixture(scope="module")
def smoke(tmp_path_factory):
    d = tmp_path_factory.mktemp("smoke")
    g = pipeline(d / "a")
    return d, g


def test_smoke_pipeline_artifacts(smoke):
    d, _ = smoke
    a = d / "a"
    for name in ("suite.json", "select.json", "cmp.json"):
        doc = json.loads((a / name).read_text())
        assert {"tool_version", "schema_version", "seed"} <= set(doc), name
    sel = json.loads((a / "select.json").read_text())
    assert sel["chosen"] in {"1ds", "dbh", "hdrf-1.0", "ne"}
    assert "PS/O" in (a / "table.txt").read_text()


def test_smoke_pipeline_is_byte_identical(smoke):
    d, _ = smoke
    pipeline(d / "b")
    for name in ("suite/manifest.csv", "q.csv", "r.csv", "suite.json", "select.json", "cmp.json", "table.txt"):
        assert (d / "a" / name).read_bytes() == (d / "b" / name).read_bytes(), name


def test_partition_simulate_predict(smoke, tmp_path, capsys):
    d, g = smoke
    assert run("partition", "--graph", g, "--partitioner", "hdrf-1.0", "--k", 4, "--out", tmp_path / "a.txt",
               "--metrics-out", tmp_path / "m.json") == 0
    lines = (tmp_path / "a.txt").read_text().splitlines()
    assert lines[0].startswith("# k=4")
    m = json.loads((tmp_path / "m.json").read_text())
    assert m["quality"]["rf"] >= 1.0 and m["seed"] == 0
    for engine in ("bsp", "trace"):
        assert run("simulate", "--graph", g, "--assignment", tmp_path / "a.txt", "--algorithm", "cc",
                   "--engine", engine, "--out", tmp_path / f"{engine}.json") == 0
    a = json.loads((tmp_path / "bsp.json").read_text())
    b = json.loads((tmp_path / "trace.json").read_text())
    assert a == b
    assert run("properties", "--graph", g, "--out", tmp_path / "p.json") == 0
    assert run("predict", "--suite", d / "a" / "suite.json", "--graph-properties", tmp_path / "p.json",
               "--partitioner", "ne", "--k", 8, "--algorithm", "pagerank", "--iterations", 20,
               "--out", tmp_path / "pred.json") == 0
    pred = json.loads((tmp_path / "pred.json").read_text())
    assert pred["processing_ms"] > 0 and pred["quality"]["rf"] <= 8


def test_report_renders_saved_comparison(smoke, capsys):
    d, _ = smoke
    assert run("report", "--comparison", d / "a" / "cmp.json", "--format", "csv") == 0
    out = capsys.readouterr().out
    assert out.startswith("workload,cells,S_PS_vs_S_O")


def test_train_missing_target_names_column(smoke, tmp_path, capsys):
    d, _ = smoke
    rc = run("train", "--dataset", d / "a" / "q.csv", "--target", "b_cpu", "--out", tmp_path / "m.json")
    err = capsys.readouterr().err.strip()
    assert rc != 0
    assert len(err.splitlines()) == 1 and "b_cpu" in err and err.startswith("error:")


def test_single_target_training(smoke, tmp_path):
    d, _ = smoke
    assert run("train", "--dataset", d / "a" / "q.csv", "--target", "b_edge", "--features", "basic",
               "--model", "knn", "--grid", "fast", "--folds", 3, "--out", tmp_path / "m.json") == 0
    doc = json.loads((tmp_path / "m.json").read_text())
    assert doc["target"] == "b_edge" and doc["spec"]["family"] == "knn"


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["partition", "--graph", "missing.el", "--partitioner", "ne", "--k", "2", "--out", "x"],
    ["generate", "--out-dir", "x", "--bogus-flag"],
])
def test_errors_are_single_line(argv, capsys):
    assert main(argv) != 0
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 1 and err[0].startswith("error: ")


def test_schema_mismatch_rejected(smoke, tmp_path, capsys):
    d, g = smoke
    doc = json.loads((d / "a" / "suite.json").read_text())
    doc["schema_version"] = 99
    (tmp_path / "s.json").write_text(json.dumps(doc))
    assert run("select", "--suite", tmp_path / "s.json", "--graph", g, "--k", 4, "--algorithm", "cc") != 0
    assert "schema" in capsys.readouterr().err


def test_seed_from_environment(monkeypatch, tmp_path):
    monkeypatch.setenv("EASE_SEED", "17")
    g = tmp_path / "g.el"
    g.write_text("0 1\n1 2\n2 0\n")
    assert main(["properties", "--graph", str(g), "--out", str(tmp_path / "p.json")]) == 0
    assert json.loads((tmp_path / "p.json").read_text())["seed"] == 17
    monkeypatch.setenv("EASE_SEED", "x")
    assert main(["properties", "--graph", str(g)]) != 0
