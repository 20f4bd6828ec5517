"""Node centrality measures: degree, closeness, betweenness, PageRank, VoteRank.

Every measure accepts an optional boolean ``active`` mask. Inactive nodes
behave as if deleted from the graph (together with their edges) and score 0.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .graph import Graph


class Measure(str, enum.Enum):
    DEGREE = "degree"
    CLOSENESS = "closeness"
    BETWEENNESS = "betweenness"
    PAGERANK = "pagerank"
    VOTERANK = "voterank"

    @classmethod
    def parse(cls, name) -> "Measure":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).lower())
        except ValueError:
            raise ValueError(f"unknown centrality measure {name!r}; "
                             f"choose from {[m.value for m in cls]}") from None


class ConvergenceError(RuntimeError):
    def __init__(self, msg, last):
        super().__init__(msg)
        self.last = last


class VoteRankUndefined(ValueError):
    pass


@dataclass
class CentralityScores:
    measure: Measure
    scores: np.ndarray
    params: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.scores)

    def ranking(self) -> np.ndarray:
        """Node ids by descending score, ties to the smaller id."""
        return np.lexsort((np.arange(len(self.scores)), -self.scores))


@dataclass
class VoteState:
    votes: np.ndarray
    ability: np.ndarray
    selected: list

    @property
    def scores(self) -> CentralityScores:
        r = len(self.selected)
        out = np.zeros(len(self.votes))
        out[self.selected] = r - np.arange(r)
        return CentralityScores(Measure.VOTERANK, out, {"r": r})


def _mask(g: Graph, active) -> np.ndarray:
    if active is None:
        return np.ones(g.n, dtype=bool)
    active = np.asarray(active, dtype=bool)
    if active.shape != (g.n,):
        raise ValueError(f"active mask has shape {active.shape}, expected ({g.n},)")
    return active


def degree_centrality(g: Graph, active=None) -> CentralityScores:
    act = _mask(g, active)
    if act.all():
        deg = g.degrees().astype(np.float64)
    else:
        deg = (g.adjacency() @ act.astype(np.float64)) * act
    return CentralityScores(Measure.DEGREE, deg)


def closeness_centrality(g: Graph, active=None) -> CentralityScores:
    """Inverse farness within each node's component.

    Scaled by ``(reached - 1) / (n - 1)`` so nodes in small components are
    not over-rated; isolated nodes score 0.
    """
    act = _mask(g, active)
    return CentralityScores(Measure.CLOSENESS, kernels.closeness(g.offsets, g.neighbors, act))


def betweenness_centrality(g: Graph, active=None) -> CentralityScores:
    """Brandes betweenness, each unordered endpoint pair counted once."""
    act = _mask(g, active)
    return CentralityScores(Measure.BETWEENNESS, kernels.betweenness(g.offsets, g.neighbors, act))


def _pagerank(g: Graph, alpha, tol, max_iter):
    n = g.n
    if n == 0:
        return np.zeros(0)
    adj = g.adjacency()
    deg = g.degrees().astype(np.float64)
    dangling = deg == 0
    inv = np.zeros(n)
    inv[~dangling] = 1.0 / deg[~dangling]
    x = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        spread = adj @ (x * inv) + x[dangling].sum() / n
        nxt = (1.0 - alpha) * spread + alpha * x.sum() / n
        nxt /= nxt.sum()
        change = np.abs(nxt - x).sum()
        x = nxt
        if change < tol:
            return x
    raise ConvergenceError(f"PageRank did not converge in {max_iter} iterations "
                           f"(last L1 change {change:.3e})", x)


def pagerank_centrality(g: Graph, alpha: float = 0.15, tol: float = 1e-10,
                        max_iter: int = 1000, active=None) -> CentralityScores:
    """Power iteration on ``(1 - alpha) A D^-1 + alpha/n * ones``.

    ``alpha`` is the teleport weight. Columns of isolated nodes are replaced
    by the uniform distribution. Scores sum to 1.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie strictly between 0 and 1")
    act = _mask(g, active)
    params = {"alpha": alpha, "tol": tol}
    if act.all():
        return CentralityScores(Measure.PAGERANK, _pagerank(g, alpha, tol, max_iter), params)
    sub, ids = g.induced(act)
    out = np.zeros(g.n)
    out[ids] = _pagerank(sub, alpha, tol, max_iter)
    return CentralityScores(Measure.PAGERANK, out, params)


def voterank(g: Graph, r: int) -> VoteState:
    """Pick ``r`` spreaders by repeated voting.

    Each round every unselected node collects the voting ability of its
    neighbours, the top node (smaller id on ties) wins, loses its own
    ability and drains ``1 / mean_degree`` from each neighbour's.
    """
    if not 1 <= r <= g.n:
        raise ValueError(f"r must be in [1, {g.n}], got {r}")
    mean_degree = 2.0 * g.edge_count / g.n
    if mean_degree == 0:
        raise VoteRankUndefined("VoteRank undefined: graph has no edges")
    order, ability = kernels.voterank(g.offsets, g.neighbors, int(r), 1.0 / mean_degree)
    selected = [int(v) for v in order]
    votes = g.adjacency() @ ability
    votes[selected] = 0.0
    return VoteState(votes, ability, selected)


def compute(g: Graph, measure, active=None, **opts) -> CentralityScores:
    """Dispatch to a measure by name.

    VoteRank ranks ``opts["r"]`` nodes (default: every active node) and
    runs on the induced subgraph when a mask is given.
    """
    m = Measure.parse(measure)
    if m is Measure.DEGREE:
        return degree_centrality(g, active)
    if m is Measure.CLOSENESS:
        return closeness_centrality(g, active)
    if m is Measure.BETWEENNESS:
        return betweenness_centrality(g, active)
    if m is Measure.PAGERANK:
        return pagerank_centrality(g, active=active, **opts)
    act = _mask(g, active)
    sub, ids = (g, np.arange(g.n)) if act.all() else g.induced(act)
    r = min(int(opts.get("r", sub.n)), sub.n)
    inner = voterank(sub, r).scores
    out = np.zeros(g.n)
    out[ids] = inner.scores
    return CentralityScores(Measure.VOTERANK, out, inner.params)
