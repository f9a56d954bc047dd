import numpy as np
import pytest

from ease.dataset import (
    InMemoryGraph,
    QualityRow,
    RuntimeRow,
    SchemaError,
    SkippedCell,
    build_datasets,
    generate_suite,
    read_manifest,
    read_rows,
    rows_to_csv,
    split_graphs,
    write_rows,
)
from ease.graph import Graph, RmatConfig

from .conftest import random_graph

PIDS = ["1ds", "dbh", "hdrf-1.0", "ne"]
WL = ["pagerank", "cc", "synthetic-high"]


@pytest.fixture(scope="module")
def suite():
    rng = np.random.default_rng(3)
    return [InMemoryGraph(f"g{i}", random_graph(rng, 80, 600)) for i in range(3)]


@pytest.fixture(scope="module")
def result(suite):
    return build_datasets(suite, PIDS, (2, 4, 8), WL, seed=1, runtime_k=4)


def test_cardinality(result):
    assert len(result.quality) == 3 * len(PIDS) * 3
    assert len(result.runtime) == 3 * len(PIDS) * len(WL)
    assert not result.skipped
    assert {r.k for r in result.runtime} == {4}
    fixed = [r for r in result.runtime if r.workload == "pagerank"]
    assert all(r.target_kind == "cost_per_iteration" and r.iterations == 10 for r in fixed)
    assert all(r.target == pytest.approx(r.cost_total / 10) for r in fixed)


def test_rows_sorted_and_jobs_invariant(suite, result):
    again = build_datasets(suite, PIDS, (2, 4, 8), WL, seed=1, runtime_k=4, jobs=2)
    assert rows_to_csv(again.quality, QualityRow) == rows_to_csv(result.quality, QualityRow)
    assert rows_to_csv(again.runtime, RuntimeRow) == rows_to_csv(result.runtime, RuntimeRow)


def test_seed_changes_hash_partitions(suite, result):
    other = build_datasets(suite, ["1ds"], (8,), (), seed=2)
    a = [r.rf for r in result.quality if r.partitioner_id == "1ds" and r.k == 8]
    b = [r.rf for r in other.quality]
    assert a != b


def test_csv_round_trip(tmp_path, result):
    for rows, cls in ((result.quality, QualityRow), (result.runtime, RuntimeRow)):
        path = tmp_path / f"{cls.__name__}.csv"
        write_rows(path, rows, cls)
        back = read_rows(path, cls)
        assert back == rows
        assert rows_to_csv(back, cls) == path.read_text()


def test_csv_schema_errors(tmp_path, result):
    path = tmp_path / "q.csv"
    write_rows(path, result.quality, QualityRow)
    text = path.read_text().splitlines()
    (tmp_path / "missing.csv").write_text("\n".join([text[0].replace(",rf,", ",")] + text[1:]))
    with pytest.raises(SchemaError, match="rf"):
        read_rows(tmp_path / "missing.csv", QualityRow)
    bumped = [text[0]] + [line[: line.rfind(",")] + ",99" for line in text[1:]]
    (tmp_path / "v.csv").write_text("\n".join(bumped) + "\n")
    with pytest.raises(SchemaError):
        read_rows(tmp_path / "v.csv", QualityRow)


def test_capacity_infeasible_cells_are_skipped():
    g = Graph.from_edges([(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
    res = build_datasets([InMemoryGraph("tiny", g)], ["hdrf-1.0", "1ds"], (4,), (), alpha=1.0)
    assert [(s.partitioner_id, s.k) for s in res.skipped] == [("hdrf-1.0", 4)]
    assert [r.partitioner_id for r in res.quality] == ["1ds"]
    assert isinstance(res.skipped[0], SkippedCell)


def test_generate_and_manifest(tmp_path):
    cfgs = [RmatConfig(0.57, 0.19, 0.19, 0.05, 64, 300, seed=s, config_id=f"c{s}", combo="C0") for s in (1, 2)]
    entries = generate_suite(tmp_path / "s", configs=cfgs)
    back = read_manifest(tmp_path / "s" / "manifest.csv")
    assert [e.graph_id for e in back] == ["c1", "c2"]
    g = back[0].load()
    assert g.num_edges == 300
    assert entries[0].num_edges == 300
    # manifest paths are relative, so a moved suite still loads
    (tmp_path / "s").rename(tmp_path / "moved")
    assert read_manifest(tmp_path / "moved" / "manifest.csv")[1].load().num_edges == 300


def test_split_graphs():
    ids = [f"g{i}" for i in range(10)]
    train, held = split_graphs(ids * 2, 0.2, seed=0)
    assert len(held) == 2 and len(train) == 8
    assert not set(train) & set(held)
    assert split_graphs(ids, 0.2, seed=0) == (train, held)
    assert split_graphs(ids, 0.0, 0)[1] == []
    with pytest.raises(ValueError):
        split_graphs(ids, 1.0, 0)
