"""Centrality-driven active learning on GCN embeddings."""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import centrality, gcn
from .centrality import Measure
from .graph import Graph, knn_graph, normalized_adjacency
from .selection import SelectionPlan, Strategy, random_select

log = logging.getLogger(__name__)


class OracleError(KeyError):
    pass


class Oracle:
    """Label source that remembers every query it answers."""

    def __init__(self, labels):
        self._labels = {int(k): int(v) for k, v in (labels.items() if isinstance(labels, dict)
                                                      else enumerate(np.asarray(labels)))}
        self.log: list = []

    def query(self, node: int) -> int:
        node = int(node)
        if node not in self._labels:
            raise OracleError(f"oracle has no label for node {node}")
        self.log.append(node)
        return self._labels[node]

    def label_array(self, nodes, n: int) -> np.ndarray:
        y = np.full(n, -1, dtype=np.int64)
        for v in nodes:
            y[v] = self.query(v)
        return y

    @property
    def n_queries(self):
        return len(self.log)


@dataclass
class AlConfig:
    seed_count: int = 10
    batch_size: int = 10
    budget: int = 140
    knn_k: int = 10
    measure: Measure = Measure.DEGREE
    hyper: gcn.Hyper = field(default_factory=gcn.Hyper)
    seed: int = 0

    def __post_init__(self):
        self.measure = Measure.parse(self.measure)
        if isinstance(self.hyper, dict):
            self.hyper = gcn.Hyper.from_dict(self.hyper)
        if not 0 < self.seed_count <= self.budget:
            raise ValueError("need 0 < seed_count <= budget")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")

    @classmethod
    def from_dict(cls, d: dict) -> "AlConfig":
        return cls(**d)

    def to_dict(self) -> dict:
        return {"seed_count": self.seed_count, "batch_size": self.batch_size,
                "budget": self.budget, "knn_k": self.knn_k, "measure": self.measure.value,
                "hyper": self.hyper.to_dict(), "seed": self.seed}


@dataclass
class AlResult:
    plan: SelectionPlan
    model: gcn.GcnModel
    trace: list
    iterations: int
    wall_time: float


def _fit(labeled, a_hat, x, y, n_classes, hyper: gcn.Hyper):
    # fresh initialisation every time; no warm start between rounds
    mask = np.zeros(x.shape[0], dtype=bool)
    mask[labeled] = True
    m0 = gcn.init_model(x.shape[1], hyper.hidden_dim, n_classes, hyper.seed, hyper)
    return gcn.train(m0, a_hat, x, y, mask)


def al_loop(graph: Graph, features, oracle: Oracle, cfg: AlConfig, n_classes: Optional[int] = None,
            test_mask=None, labels_for_eval=None,
            on_centrality: Optional[Callable] = None) -> AlResult:
    """Grow a labeled set from a random seed by querying central kNN nodes.

    Each round trains a fresh GCN on the labeled nodes, links nodes by the
    nearest neighbours of their hidden activations, ranks that kNN graph by
    ``cfg.measure`` and queries the top ``batch_size`` unlabeled nodes.
    ``on_centrality(knn, scores)`` is called every round. The trace records
    the test accuracy of each round's model when ``labels_for_eval`` and
    ``test_mask`` are given.
    """
    t0 = time.perf_counter()
    n = graph.n
    x = np.asarray(features, dtype=np.float64)
    if cfg.budget > n:
        raise ValueError(f"budget {cfg.budget} exceeds node count {n}")
    a_hat = normalized_adjacency(graph)
    labeled = list(random_select(n, cfg.seed_count, cfg.seed).selected)
    y = np.full(n, -1, dtype=np.int64)
    for v in labeled:
        y[v] = oracle.query(v)
    if n_classes is None:
        if labels_for_eval is None:
            raise ValueError("n_classes is required when labels_for_eval is not given")
        n_classes = int(np.max(labels_for_eval)) + 1
    trace = []
    iterations = 0
    while len(labeled) < cfg.budget:
        model, report = _fit(labeled, a_hat, x, y, n_classes, cfg.hyper)
        trace.append(_trace_row(iterations, labeled, model, a_hat, x, labels_for_eval, test_mask))
        emb = gcn.embeddings(model, a_hat, x)
        kg = knn_graph(emb, cfg.knn_k)
        taken = np.zeros(n, dtype=bool)
        taken[labeled] = True
        want = min(cfg.batch_size, cfg.budget - len(labeled))
        opts = {"r": min(n, len(labeled) + want)} if cfg.measure is Measure.VOTERANK else {}
        sc = centrality.compute(kg, cfg.measure, **opts)
        if on_centrality is not None:
            on_centrality(kg, sc)
        order = sc.ranking()
        batch = [int(v) for v in order[~taken[order]][:want]]
        for v in batch:
            y[v] = oracle.query(v)
        labeled.extend(batch)
        iterations += 1
        log.info("AL round %d: %d labeled", iterations, len(labeled))
    model, report = _fit(labeled, a_hat, x, y, n_classes, cfg.hyper)
    trace.append(_trace_row(iterations, labeled, model, a_hat, x, labels_for_eval, test_mask))
    plan = SelectionPlan(Strategy.ACTIVE, cfg.measure, cfg.budget, cfg.batch_size, labeled,
                         {"seed_count": cfg.seed_count, "knn_k": cfg.knn_k, "seed": cfg.seed})
    return AlResult(plan, model, trace, iterations, time.perf_counter() - t0)


def _trace_row(it, labeled, model, a_hat, x, labels, test_mask):
    row = {"iteration": it, "labeled": len(labeled), "test_accuracy": None}
    if labels is not None and test_mask is not None:
        mask = np.asarray(test_mask, dtype=bool).copy()
        mask[labeled] = False
        if mask.any():
            row["test_accuracy"] = gcn.accuracy(gcn.predict(model, a_hat, x), labels, mask)
    return row


def replay(plan: SelectionPlan, graph: Graph, features, oracle: Oracle, hyper: gcn.Hyper,
           n_classes: int) -> gcn.GcnModel:
    """Train once on the nodes of a saved plan."""
    x = np.asarray(features, dtype=np.float64)
    plan.mask(graph.n)
    y = oracle.label_array(plan.selected, graph.n)
    model, _ = _fit(list(plan.selected), normalized_adjacency(graph), x, y, n_classes, hyper)
    return model
