"""Command-line entry point: ``ease <subcommand> ...``.

Artifacts go to the paths given on the command line, logs to stderr. Failures
print one line ``error: <kind>: <message>`` and exit with status 2.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import SCHEMA_VERSION, __version__

log = logging.getLogger("ease")


class CliError(Exception):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("usage", message)


def _default_seed() -> int:
    raw = os.environ.get("EASE_SEED")
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise CliError("config", f"EASE_SEED must be an integer, got {raw!r}") from None


def _csv_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in _csv_list(text)]
    except ValueError:
        raise CliError("usage", f"expected a comma-separated integer list, got {text!r}") from None


def _provenance(seed: int) -> dict:
    return {"tool_version": __version__, "schema_version": SCHEMA_VERSION, "seed": seed}


def _write_json(path, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _read_json(path) -> dict:
    p = Path(path)
    if not p.is_file():
        raise CliError("io", f"file not found: {p}")
    d = json.loads(p.read_text())
    if "schema_version" in d and d["schema_version"] != SCHEMA_VERSION:
        raise CliError("schema", f"{p}: schema_version {d['schema_version']} != {SCHEMA_VERSION}")
    return d


def _require_file(path) -> Path:
    p = Path(path)
    if not p.is_file():
        raise CliError("io", f"file not found: {p}")
    return p


def _load_graph(path):
    from .graph import EdgeListError, load_edge_list

    try:
        return load_edge_list(_require_file(path), remap=True)
    except EdgeListError as e:
        raise CliError("parse", f"{path}: {e}") from None


# -- subcommands -------------------------------------------------------------------

def cmd_generate(a) -> None:
    from .dataset import generate_suite

    entries = generate_suite(a.out, a.preset, a.scale, a.seed, combos=_csv_list(a.combos) if a.combos else None)
    log.info("wrote %d graphs and %s", len(entries), Path(a.out) / "manifest.csv")


def cmd_properties(a) -> None:
    from .graph import compute_properties

    props = compute_properties(_load_graph(a.graph), a.level)
    _write_json(a.out, {**_provenance(a.seed), "graph": str(a.graph), "properties": props.to_dict()})


def _write_assignment(path, p) -> None:
    head = f"# k={p.k} partitioner={p.partitioner_id} seed={p.seed} alpha={p.alpha!r}\n"
    body = "\n".join(map(str, p.assignment.tolist()))
    Path(path).write_text(head + body + ("\n" if body else ""))


def _read_assignment(path, k_override=None):
    text = _require_file(path).read_text().splitlines()
    meta = {}
    vals = []
    for i, line in enumerate(text, start=1):
        s = line.strip()
        if not s:
            continue
        if s.startswith("#"):
            for tok in s[1:].split():
                if "=" in tok:
                    key, v = tok.split("=", 1)
                    meta[key] = v
            continue
        try:
            vals.append(int(s))
        except ValueError:
            raise CliError("parse", f"{path}:{i}: not an integer: {s!r}") from None
    arr = np.array(vals, np.int64)
    k = k_override or (int(meta["k"]) if "k" in meta else (int(arr.max()) + 1 if arr.size else 1))
    return arr, k, meta


def cmd_partition(a) -> None:
    from .partition import compute_quality, partition

    g = _load_graph(a.graph)
    p, elapsed = partition(g, a.partitioner, a.k, seed=a.seed, alpha=a.alpha)
    log.info("partitioned %s with %s k=%d in %.1f ms (wall)", a.graph, a.partitioner, a.k, elapsed * 1e3)
    _write_assignment(a.out, p)
    if a.metrics:
        q = compute_quality(g, p)
        ms = elapsed * 1e3 if a.timing == "wall" else p.modeled_ms
        _write_json(a.metrics, {
            **_provenance(a.seed),
            "partitioner_id": a.partitioner, "k": a.k, "alpha": a.alpha,
            "quality": q.to_dict(), "partition_time_ms": ms, "timing": a.timing,
        })


def cmd_simulate(a) -> None:
    from .partition import Partitioning
    from .procsim import CostModel, WorkloadSpec, run_workload, trace_workload

    g = _load_graph(a.graph)
    assignment, k, meta = _read_assignment(a.assignment, a.k)
    if assignment.size != g.num_edges:
        raise CliError("input", f"assignment has {assignment.size} entries, graph has {g.num_edges} edges")
    p = Partitioning(k, assignment, float(meta.get("alpha", 1.0)), meta.get("partitioner", "external"), a.seed)
    cm = CostModel.load(_require_file(a.cost_model)) if a.cost_model else CostModel()
    iters = a.iterations if a.iterations is not None else (10 if a.algorithm in ("pagerank", "label_propagation") else (5 if a.algorithm == "synthetic" else 0))
    w = WorkloadSpec(a.algorithm, iters, a.s, a.seed)
    if a.engine == "bsp":
        res = run_workload(g, p, w, cm)
    else:
        res = trace_workload(g, w).cost(g, p, cm)
    d = res.to_dict()
    d.pop("wall_ms")
    _write_json(a.out, {**_provenance(a.seed), "k": k, "cost_model": cm.to_dict(), "result": d})


def cmd_dataset(a) -> None:
    from .dataset import (
        QualityRow, RuntimeRow, SkippedCell, build_datasets, read_manifest, write_rows,
    )
    from .partition import registered_partitioners
    from .procsim import CostModel

    entries = read_manifest(a.suite_manifest)
    pids = _csv_list(a.partitioners) if a.partitioners else registered_partitioners()
    ks = _int_list(a.ks)
    workloads = _csv_list(a.workloads) if a.workloads else []
    cm = CostModel.load(_require_file(a.cost_model)) if a.cost_model else CostModel()
    res = build_datasets(entries, pids, ks, workloads, cm, a.seed, a.runtime_k, a.jobs, a.timing, a.alpha)
    if a.out_quality:
        write_rows(a.out_quality, res.quality, QualityRow)
    if a.out_runtime:
        write_rows(a.out_runtime, res.runtime, RuntimeRow)
    skipped = a.out_skipped or (str(Path(a.out_quality or a.out_runtime).with_suffix("")) + ".skipped.csv")
    write_rows(skipped, res.skipped, SkippedCell)
    log.info("%d quality rows, %d runtime rows, %d skipped cells", len(res.quality), len(res.runtime), len(res.skipped))


def _read_header(path) -> list[str]:
    with open(_require_file(path), newline="", encoding="utf-8") as fh:
        return next(csv.reader(fh), [])


def _read_dataset(path):
    from .dataset import QualityRow, RuntimeRow, read_rows

    header = _read_header(path)
    cls = RuntimeRow if "workload" in header else QualityRow
    return read_rows(path, cls), cls


def cmd_train(a) -> None:
    from .dataset import QualityRow, RuntimeRow, read_rows, split_graphs
    from .ml import GRIDS
    from .predict import columns_for, train_suite, train_target
    from .procsim import CostModel

    grid = GRIDS[a.grid]
    model = {"rf": "random_forest"}.get(a.model, a.model)
    if a.target:
        src = a.dataset or a.quality
        if not src:
            raise CliError("usage", "--target needs --dataset")
        header = _read_header(src)
        if a.target not in header:
            raise CliError("schema", f"missing target column {a.target!r} in {src}")
        rows, cls = _read_dataset(src)
        if cls is RuntimeRow:
            wl = sorted({r.workload for r in rows})
            if a.workload:
                rows = [r for r in rows if r.workload == a.workload]
            elif len(wl) > 1:
                raise CliError("usage", f"runtime dataset has several workloads ({', '.join(wl)}); pass --workload")
        res = train_target(rows, a.target, columns_for(a.target, a.features), a.features, grid, model, a.folds, a.seed)
        d = res.model.to_dict()
        d["cv"] = res.rows()
        _write_json(a.out, d)
        return

    qpath = a.quality or a.dataset
    if not qpath or not a.runtime:
        raise CliError("usage", "suite training needs --quality (or --dataset) and --runtime")
    for path, need in ((qpath, "rf"), (a.runtime, "target")):
        if need not in _read_header(path):
            raise CliError("schema", f"missing target column {need!r} in {path}")
    q = read_rows(qpath, QualityRow)
    r = read_rows(a.runtime, RuntimeRow)
    held: list[str] = []
    if a.holdout > 0:
        _, held = split_graphs([row.graph_id for row in q], a.holdout, a.seed)
        hs = set(held)
        q = [row for row in q if row.graph_id not in hs]
        r = [row for row in r if row.graph_id not in hs]
    cm = CostModel.load(_require_file(a.cost_model)) if a.cost_model else CostModel()
    suite = train_suite(q, r, a.features, a.seed, grid, model, a.folds, cm, a.runtime_k, grid_name=a.grid)
    suite.settings["holdout_graphs"] = held
    suite.save(a.out)
    log.info("wrote suite %s", a.out)


def _load_suite(path):
    from .predict import PredictorSuite

    _read_json(path)
    return PredictorSuite.load(path)


def _props_from_args(a):
    from .graph import GraphProperties, compute_properties

    if getattr(a, "graph_properties", None):
        d = _read_json(a.graph_properties)
        return GraphProperties.from_dict(d.get("properties", d))
    if getattr(a, "graph", None):
        return compute_properties(_load_graph(a.graph), "advanced")
    raise CliError("usage", "need --graph or --graph-properties")


def cmd_predict(a) -> None:
    from .predict import predict_partition_time, predict_processing_time, predict_quality

    suite = _load_suite(a.suite)
    props = _props_from_args(a)
    q = predict_quality(suite, props, a.partitioner, a.k)
    out = {
        **_provenance(suite.seed),
        "partitioner_id": a.partitioner,
        "k": a.k,
        "quality": q.to_dict(),
    }
    if suite.partition_time is not None:
        out["partition_time_ms"] = predict_partition_time(suite, props, a.partitioner)
    if a.algorithm:
        cost = predict_processing_time(suite, a.algorithm, props, q, a.iterations)
        out.update(algorithm=a.algorithm, iterations=a.iterations, processing_cost=cost,
                   processing_ms=suite.cost_model.to_ms(cost))
    _write_json(a.out, out)


def cmd_select(a) -> None:
    from .select import select_partitioner

    suite = _load_suite(a.suite)
    props = _props_from_args(a)
    rep = select_partitioner(suite, props, a.k, a.algorithm, a.goal, a.iterations)
    _write_json(a.report, {**_provenance(suite.seed), **rep.to_dict()})
    log.info("chosen partitioner: %s", rep.chosen)


def cmd_report(a) -> None:
    from .dataset import QualityRow, RuntimeRow, read_rows
    from .predict import props_from_row
    from .select import StrategyComparison, evaluate_from_rows, render_cells_csv, render_csv, render_table

    if a.comparison:
        cmp = StrategyComparison.from_dict(_read_json(a.comparison))
    else:
        if not (a.suite and a.quality and a.runtime):
            raise CliError("usage", "report needs --comparison, or --suite with --quality and --runtime")
        suite = _load_suite(a.suite)
        q = read_rows(a.quality, QualityRow)
        r = read_rows(a.runtime, RuntimeRow)
        held = set(suite.settings.get("holdout_graphs") or [])
        if not held:
            raise CliError("input", "suite records no held-out graphs; train with --holdout")
        props = {row.graph_id: props_from_row(row) for row in q if row.graph_id in held}
        r = [row for row in r if row.graph_id in held]
        cmp = evaluate_from_rows(suite, r, props, a.goal, seed=a.seed, random_draw=a.random_draw)
        if a.out_json:
            _write_json(a.out_json, cmp.to_dict())
    text = render_table(cmp) if a.format == "text" else render_csv(cmp)
    if a.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(a.out).write_text(text)
    if a.cells:
        Path(a.cells).write_text(render_cells_csv(cmp))


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    from .partition import DEFAULT_ALPHA
    from .procsim import ALGORITHMS

    seed = _default_seed()
    p = _Parser(prog="ease", description="Partitioner selection pipeline for vertex-cut graph processing.")
    p.add_argument("--version", action="version", version=f"ease {__version__}")
    p.add_argument("-v", "--verbose", action="count", default=0, help="more log output on stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(fn=fn)
        sp.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS)
        sp.add_argument("--seed", type=int, default=seed, help="base seed (default: $EASE_SEED or 0)")
        return sp

    g = add("generate", cmd_generate, "write an R-MAT training suite and its manifest")
    g.add_argument("--preset", choices=("small", "large"), default="small")
    g.add_argument("--scale", type=float, default=1.0, help="divide |V| and |E| by this factor")
    g.add_argument("--combos", help="restrict to parameter combos, e.g. C1,C5")
    g.add_argument("--out-dir", "--out", dest="out", required=True, help="output directory")

    g = add("properties", cmd_properties, "compute graph properties")
    g.add_argument("--graph", required=True)
    g.add_argument("--level", choices=("simple", "basic", "advanced"), default="advanced")
    g.add_argument("--out", default="-")

    g = add("partition", cmd_partition, "partition a graph")
    g.add_argument("--graph", required=True)
    g.add_argument("--partitioner", required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    g.add_argument("--out", required=True, help="assignment file, one partition id per edge")
    g.add_argument("--metrics-out", "--metrics", dest="metrics", help="write quality metrics JSON here")
    g.add_argument("--timing", choices=("model", "wall"), default="model")

    g = add("simulate", cmd_simulate, "simulate a workload on a partitioned graph")
    g.add_argument("--graph", required=True)
    g.add_argument("--assignment", required=True)
    g.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    g.add_argument("--iterations", type=int)
    g.add_argument("--s", type=int, default=1, help="synthetic vector width")
    g.add_argument("--k", type=int, help="override k from the assignment header")
    g.add_argument("--cost-model")
    g.add_argument("--engine", choices=("bsp", "trace"), default="bsp")
    g.add_argument("--out", default="-")

    g = add("dataset", cmd_dataset, "build quality and runtime datasets from a suite")
    g.add_argument("--suite-manifest", required=True)
    g.add_argument("--partitioners", help="comma list (default: all registered)")
    g.add_argument("--ks", default="4,8,16,32,64,128")
    g.add_argument("--workloads", default="pagerank,cc,sssp,kcores,synthetic-low,synthetic-high")
    g.add_argument("--runtime-k", type=int, default=4)
    g.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    g.add_argument("--cost-model")
    g.add_argument("--timing", choices=("model", "wall"), default="model",
                   help="partition_time_ms from the op-count model (reproducible) or wall clock")
    g.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    g.add_argument("--out-quality")
    g.add_argument("--out-runtime")
    g.add_argument("--out-skipped")

    g = add("train", cmd_train, "train one model or a full predictor suite")
    g.add_argument("--dataset", help="dataset CSV (single-target mode, or quality CSV for a suite)")
    g.add_argument("--quality")
    g.add_argument("--runtime")
    g.add_argument("--target")
    g.add_argument("--workload", help="runtime dataset workload for single-target mode")
    g.add_argument("--features", choices=("simple", "basic", "advanced"), default="advanced")
    g.add_argument("--model", choices=("auto", "knn", "polyridge", "rf", "random_forest", "gbt"), default="auto")
    g.add_argument("--grid", choices=("default", "fast"), default="default")
    g.add_argument("--folds", type=int, default=5)
    g.add_argument("--holdout", type=float, default=0.0, help="fraction of graphs held out for evaluation")
    g.add_argument("--runtime-k", type=int)
    g.add_argument("--cost-model")
    g.add_argument("--out", required=True)

    g = add("predict", cmd_predict, "predict quality, partitioning time and processing time")
    g.add_argument("--suite", required=True)
    g.add_argument("--graph-properties")
    g.add_argument("--graph")
    g.add_argument("--partitioner", required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--algorithm")
    g.add_argument("--iterations", type=int)
    g.add_argument("--out", default="-")

    g = add("select", cmd_select, "choose a partitioner for a graph and workload")
    g.add_argument("--suite", required=True)
    g.add_argument("--graph")
    g.add_argument("--graph-properties")
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--algorithm", required=True, help="workload name, e.g. pagerank or synthetic-high")
    g.add_argument("--iterations", type=int)
    g.add_argument("--goal", choices=("e2e", "end_to_end", "processing"), default="e2e")
    g.add_argument("--report", default="-")

    g = add("report", cmd_report, "compare selection strategies on held-out graphs")
    g.add_argument("--comparison", help="existing comparison JSON to render")
    g.add_argument("--suite")
    g.add_argument("--quality")
    g.add_argument("--runtime")
    g.add_argument("--goal", choices=("e2e", "end_to_end", "processing"), default="e2e")
    g.add_argument("--random-draw", action="store_true",
                   help="S_R is one seeded random pick per cell instead of the mean")
    g.add_argument("--format", choices=("text", "csv"), default="text")
    g.add_argument("--out-json", help="write the comparison JSON here")
    g.add_argument("--cells", help="write per-cell CSV here")
    g.add_argument("--out", default="-")
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(
            level=logging.WARNING - 10 * min(args.verbose, 2),
            format="%(asctime)s %(levelname)s %(name)s: %(message)s",
            stream=sys.stderr,
        )
        args.fn(args)
        return 0
    except CliError as e:
        kind, msg = e.kind, str(e)
    except (ValueError, KeyError, OSError) as e:
        kind, msg = type(e).__name__, str(e)
    msg = " ".join(msg.split())
    print(f"error: {kind}: {msg}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
