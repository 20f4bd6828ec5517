"""Choose which nodes to label from centrality scores."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import centrality
from .centrality import CentralityScores, Measure
from .graph import Graph


class Strategy(str, enum.Enum):
    ALL_AT_ONCE = "all"
    SMART = "smart"
    RANDOM = "random"
    ACTIVE = "al"


@dataclass
class SelectionPlan:
    strategy: Strategy
    measure: Optional[Measure]
    budget: int
    per_round: Optional[int]
    selected: list
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "strategy": self.strategy.value,
            "measure": self.measure.value if self.measure else None,
            "budget": self.budget,
            "per_round": self.per_round,
            "selected": [int(v) for v in self.selected],
        }
        if self.params:
            out["params"] = self.params
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "SelectionPlan":
        measure = obj.get("measure")
        return cls(Strategy(obj["strategy"]),
                   Measure.parse(measure) if measure else None,
                   int(obj.get("budget", len(obj["selected"]))),
                   obj.get("per_round"),
                   [int(v) for v in obj["selected"]],
                   dict(obj.get("params", {})))

    def mask(self, n: int) -> np.ndarray:
        ids = np.asarray(self.selected, dtype=np.int64)
        if len(ids) and (ids.min() < 0 or ids.max() >= n):
            raise ValueError(f"plan references a node outside [0, {n})")
        m = np.zeros(n, dtype=bool)
        m[ids] = True
        return m


def _top(scores: np.ndarray, k: int, eligible=None) -> list:
    ids = np.arange(len(scores))
    if eligible is not None:
        ids = ids[eligible]
    order = np.lexsort((ids, -scores[ids]))
    return [int(v) for v in ids[order[:k]]]


def _check_budget(budget, n):
    if budget < 0:
        raise ValueError("budget must be non-negative")
    if budget > n:
        raise ValueError(f"budget {budget} exceeds node count {n}")


def select_all_at_once(scores: CentralityScores, budget: int) -> SelectionPlan:
    n = len(scores.scores)
    _check_budget(budget, n)
    return SelectionPlan(Strategy.ALL_AT_ONCE, scores.measure, budget, None,
                         _top(scores.scores, budget), dict(scores.params))


def smart_select(g: Graph, measure, budget: int, per_round: int = 10, **opts) -> SelectionPlan:
    """Iterative top-k selection with removal of the chosen nodes.

    After each round the picked nodes are masked out and the centrality is
    recomputed on what remains. VoteRank already discounts neighbours of
    its winners, so it picks the whole budget in one call.
    """
    m = Measure.parse(measure)
    _check_budget(budget, g.n)
    if per_round < 1:
        raise ValueError("per_round must be >= 1")
    if m is Measure.VOTERANK:
        chosen = centrality.voterank(g, budget).selected if budget else []
        return SelectionPlan(Strategy.SMART, m, budget, per_round, chosen)
    active = np.ones(g.n, dtype=bool)
    chosen: list = []
    while len(chosen) < budget:
        sc = centrality.compute(g, m, active=active, **opts)
        take = _top(sc.scores, min(per_round, budget - len(chosen)), eligible=active)
        chosen.extend(take)
        active[take] = False
    params = {k: v for k, v in opts.items()}
    return SelectionPlan(Strategy.SMART, m, budget, per_round, chosen, params)


def random_select(n: int, budget: int, seed: int = 0) -> SelectionPlan:
    _check_budget(budget, n)
    rng = np.random.default_rng(seed)
    chosen = rng.choice(n, size=budget, replace=False)
    return SelectionPlan(Strategy.RANDOM, None, budget, None,
                         [int(v) for v in chosen], {"seed": seed})
