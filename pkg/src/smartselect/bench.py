"""Repeated-trial experiment harness and t-test ranking of methods."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import centrality, gcn
from .active import AlConfig, Oracle, al_loop
from .centrality import Measure
from .graph import Graph, load_graph_dataset, normalized_adjacency, sbm_generate
from .selection import random_select, select_all_at_once, smart_select
from .stats import welch_t

log = logging.getLogger(__name__)

MEASURES = [m.value for m in Measure]


@dataclass
class Dataset:
    name: str
    graph: Graph
    labels: np.ndarray
    features: np.ndarray
    test_mask: Optional[np.ndarray] = None

    @property
    def n_classes(self) -> int:
        return int(self.labels.max()) + 1


@dataclass
class TrialResult:
    method: str
    accuracies: list
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        acc = np.asarray(self.accuracies, dtype=np.float64)
        if acc.size and (acc.min() < 0 or acc.max() > 1):
            raise ValueError("accuracies must be fractions in [0, 1]")

    @property
    def mean(self) -> float:
        return float(np.mean(self.accuracies))

    @property
    def std(self) -> float:
        return float(np.std(self.accuracies, ddof=1)) if len(self.accuracies) > 1 else 0.0

    def to_json(self) -> dict:
        return {"method": self.method, "accuracies": [float(a) for a in self.accuracies],
                "mean": self.mean, "std": self.std, "meta": self.meta}


@dataclass
class RankTable:
    rows: list  # (method, rank, mean, std)
    significance: float
    p_values: list = field(default_factory=list)

    def ranks(self) -> dict:
        return {m: r for m, r, _, _ in self.rows}

    def to_json(self) -> dict:
        return {"significance": self.significance,
                "rows": [{"method": m, "rank": r, "mean": mu, "std": sd, "p_vs_previous": p}
                         for (m, r, mu, sd), p in zip(self.rows, self.p_values)]}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["rank", "method", "mean_pct", "std_pct", "cell"])
        for m, r, mu, sd in self.rows:
            w.writerow([r, m, f"{100 * mu:.2f}", f"{100 * sd:.2f}", f"#{r} {100 * mu:.2f}±{100 * sd:.2f}"])
        return buf.getvalue()


def ttest_rank(results, significance: float = 0.05) -> RankTable:
    """Rank methods by mean accuracy, merging adjacent ties.

    Methods are sorted by mean (descending) and each is compared with the
    one above it by Welch's t-test; a p-value at or above ``significance``
    keeps the previous rank, otherwise the rank increases by one.
    """
    if not results:
        raise ValueError("need at least one result")
    for r in results:
        if len(r.accuracies) < 2:
            raise ValueError(f"{r.method}: need at least two runs to rank")
    order = sorted(results, key=lambda r: (-r.mean, r.method))
    rows, pvals = [], []
    rank = 1
    for i, r in enumerate(order):
        p = None
        if i:
            p = welch_t(order[i - 1].accuracies, r.accuracies).p_two_sided
            if p < significance:
                rank += 1
        rows.append((r.method, rank, r.mean, r.std))
        pvals.append(p)
    return RankTable(rows, significance, pvals)


def evaluate(model: gcn.GcnModel, graph: Graph, features, labels, test_mask, train_mask=None,
             a_hat=None) -> float:
    """Argmax accuracy on ``test_mask``; equal probabilities go to the lower class."""
    test_mask = np.asarray(test_mask, dtype=bool)
    if not test_mask.any():
        raise ValueError("test mask is empty")
    if train_mask is not None and np.any(test_mask & np.asarray(train_mask, dtype=bool)):
        raise ValueError("test mask overlaps the training nodes")
    if a_hat is None:
        a_hat = normalized_adjacency(graph)
    return gcn.accuracy(gcn.predict(model, a_hat, np.asarray(features, np.float64)), labels, test_mask)


def method_id(spec: dict) -> str:
    if "id" in spec:
        return spec["id"]
    strategy = spec["strategy"]
    if strategy == "random":
        return "random"
    return f"{strategy}-{Measure.parse(spec['measure']).value}"


def full_grid() -> list:
    """Smart selection with every measure, all-at-once degree, AL per measure, random."""
    grid = [{"strategy": "smart", "measure": m} for m in MEASURES]
    grid.append({"strategy": "all", "measure": "degree"})
    grid += [{"strategy": "al", "measure": m} for m in MEASURES]
    grid.append({"strategy": "random"})
    return grid


def make_dataset(spec: dict, seed: int) -> Dataset:
    """Build a dataset from a suite entry.

    ``{"path": dir}`` loads files; ``{"sbm": {...}}`` samples a block model,
    re-drawn for every run seed unless the entry pins its own ``seed``.
    """
    if "path" in spec:
        g, y, x, mask = load_graph_dataset(spec["path"])
        return Dataset(spec.get("name", Path(spec["path"]).name), g, y, x, mask)
    if "sbm" in spec:
        p = dict(spec["sbm"])
        gseed = p.pop("seed", seed)
        g, y, x = sbm_generate(p.pop("block_sizes"), p.pop("p_in"), p.pop("p_out"), seed=gseed, **p)
        return Dataset(spec.get("name", "sbm"), g, y, x, None)
    raise ValueError("dataset spec needs 'path' or 'sbm'")


def _select(spec: dict, ds: Dataset, seed: int, hyper: gcn.Hyper, budget: int) -> list:
    strategy = spec["strategy"]
    g = ds.graph
    opts = {}
    if spec.get("alpha") is not None:
        opts["alpha"] = spec["alpha"]
    if strategy == "random":
        return random_select(g.n, budget, seed).selected
    if strategy == "all":
        m = Measure.parse(spec["measure"])
        if m is Measure.VOTERANK:
            opts["r"] = budget
        return select_all_at_once(centrality.compute(g, m, **opts), budget).selected
    if strategy == "smart":
        return smart_select(g, spec["measure"], budget, spec.get("per_round", 10), **opts).selected
    if strategy == "al":
        al = dict(spec.get("al", {}))
        cfg = AlConfig(measure=spec["measure"], budget=budget, hyper=hyper, seed=seed, **al)
        return al_loop(g, ds.features, Oracle(ds.labels), cfg, n_classes=ds.n_classes).plan.selected
    raise ValueError(f"unknown strategy {strategy!r}")


def _deterministic(spec: dict) -> bool:
    return spec["strategy"] in ("all", "smart")


def run_trials(spec: dict, dataset: dict, n_runs: int = 10, base_seed: int = 0, seeds=None,
               hyper: Optional[dict] = None, budget: int = 140, _cache=None) -> TrialResult:
    """Run one method end to end for each seed and collect test accuracies.

    Run ``i`` uses seed ``base_seed + i`` (or ``seeds[i]``) for random
    choices, GCN initialisation and dropout. Evaluation covers the test mask
    (or every node) minus the selected training nodes.
    """
    seeds = list(seeds) if seeds is not None else [base_seed + i for i in range(n_runs)]
    if len(seeds) < 2:
        raise ValueError("n_runs must be >= 2")
    budget = int(spec.get("budget", budget))
    base_hyper = gcn.Hyper.from_dict({**(hyper or {}), **spec.get("hyper", {})})
    fixed_graph = "path" in dataset or "seed" in dataset.get("sbm", {})
    cache = _cache if _cache is not None else {}
    accs = []
    for s in seeds:
        key = ("ds", json.dumps(dataset, sort_keys=True), None if fixed_graph else s)
        if key not in cache:
            cache[key] = make_dataset(dataset, s)
        ds = cache[key]
        hp = gcn.Hyper(**{**base_hyper.to_dict(), "seed": s})
        skey = ("sel", key, json.dumps(spec, sort_keys=True), budget,
                None if _deterministic(spec) else s, None if _deterministic(spec) else hp)
        if skey not in cache:
            cache[skey] = _select(spec, ds, s, hp, budget)
        chosen = cache[skey]
        train_mask = np.zeros(ds.graph.n, dtype=bool)
        train_mask[chosen] = True
        a_key = ("ahat", key)
        if a_key not in cache:
            cache[a_key] = normalized_adjacency(ds.graph)
        a_hat = cache[a_key]
        m0 = gcn.init_model(ds.features.shape[1], hp.hidden_dim, ds.n_classes, s, hp)
        model, _ = gcn.train(m0, a_hat, ds.features, ds.labels, train_mask)
        test = (ds.test_mask if ds.test_mask is not None else np.ones(ds.graph.n, bool)) & ~train_mask
        accs.append(evaluate(model, ds.graph, ds.features, ds.labels, test, train_mask, a_hat=a_hat))
    meta = {"dataset": dataset.get("name", "path" in dataset and Path(dataset["path"]).name or "sbm"),
            "seeds": seeds, "budget": budget, "hyper": base_hyper.to_dict(), "spec": spec,
            "config_hash": config_hash({"method": spec, "dataset": dataset, "budget": budget,
                                        "hyper": base_hyper.to_dict()})}
    if spec.get("measure") and Measure.parse(spec["measure"]) is Measure.PAGERANK:
        meta["alpha"] = spec.get("alpha", 0.15)
    return TrialResult(method_id(spec), accs, meta)


def config_hash(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()[:16]


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def benchmark(suite: dict, out_dir) -> Path:
    """Run every method in ``suite`` and write results under ``out_dir``.

    Suite keys: ``dataset`` (``path`` or ``sbm`` entry), ``methods`` (list of
    method specs or ``"full"``), ``n_runs`` (default 10), ``base_seed``,
    ``budget`` (default 140), ``hyper`` and ``significance``. Outputs
    ``results/<method>.json``, ``ranks.json``, ``summary.csv`` and a
    separate ``timing.json`` so the others stay reproducible byte for byte.
    """
    out = Path(out_dir)
    methods = suite.get("methods", "full")
    if methods == "full":
        methods = full_grid()
    n_runs = int(suite.get("n_runs", 10))
    base_seed = int(suite.get("base_seed", 0))
    budget = int(suite.get("budget", 140))
    cache: dict = {}
    results, timing = [], {}
    for spec in methods:
        t0 = time.perf_counter()
        res = run_trials(spec, suite["dataset"], n_runs, base_seed, hyper=suite.get("hyper"),
                         budget=budget, _cache=cache)
        timing[res.method] = time.perf_counter() - t0
        log.info("%s: %.4f ± %.4f (%.1fs)", res.method, res.mean, res.std, timing[res.method])
        _write_atomic(out / "results" / f"{res.method}.json", _dumps(res.to_json()))
        results.append(res)
    table = ttest_rank(results, float(suite.get("significance", 0.05)))
    _write_atomic(out / "ranks.json", _dumps(table.to_json()))
    _write_atomic(out / "summary.csv", table.to_csv())
    _write_atomic(out / "timing.json", _dumps(timing))
    return out
