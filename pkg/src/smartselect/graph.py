"""Sparse undirected graphs and the matrices derived from them.

A :class:`Graph` is stored in compressed sparse row form with sorted,
duplicate-free neighbor lists. Dense matrices are plain ``float64`` numpy
arrays and sparse matrices are :class:`scipy.sparse.csr_matrix`.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

import numpy as np
import scipy.sparse as sp
from scipy.spatial.distance import cdist

log = logging.getLogger(__name__)


class GraphError(ValueError):
    pass


class NodeOutOfRangeError(GraphError):
    pass


class DatasetError(ValueError):
    """Base class for problems found while reading a dataset directory."""


class MalformedLineError(DatasetError):
    pass


class DimensionMismatchError(DatasetError):
    pass


class NonContiguousLabelsError(DatasetError):
    pass


@dataclass(frozen=True, eq=False)
class Graph:
    n: int
    offsets: np.ndarray
    neighbors: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.offsets.setflags(write=False)
        self.neighbors.setflags(write=False)

    @property
    def edge_count(self) -> int:
        return int(self.offsets[-1]) // 2

    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    def neighbors_of(self, u: int) -> np.ndarray:
        return self.neighbors[self.offsets[u]:self.offsets[u + 1]]

    def edges(self) -> np.ndarray:
        """Undirected edges as an ``(m, 2)`` array with ``u < v``, sorted."""
        src = np.repeat(np.arange(self.n), self.degrees())
        keep = src < self.neighbors
        return np.column_stack([src[keep], self.neighbors[keep]])

    def adjacency(self) -> sp.csr_matrix:
        data = np.ones(len(self.neighbors), dtype=np.float64)
        return sp.csr_matrix((data, self.neighbors.copy(), self.offsets.copy()),
                             shape=(self.n, self.n))

    def induced(self, keep: np.ndarray) -> tuple["Graph", np.ndarray]:
        """Subgraph on the nodes where ``keep`` is true.

        Returns the subgraph and the original ids of its nodes.
        """
        keep = np.asarray(keep, dtype=bool)
        ids = np.flatnonzero(keep)
        remap = np.full(self.n, -1, dtype=np.int64)
        remap[ids] = np.arange(len(ids))
        e = self.edges()
        if len(e):
            e = e[keep[e[:, 0]] & keep[e[:, 1]]]
            e = remap[e]
        return build_graph(e, len(ids)), ids

    def check(self) -> None:
        """Raise :class:`GraphError` if any structural invariant is broken."""
        if len(self.offsets) != self.n + 1 or self.offsets[0] != 0:
            raise GraphError("bad offsets array")
        if self.offsets[-1] != len(self.neighbors) or self.offsets[-1] % 2:
            raise GraphError("offsets[n] must equal 2 * edge_count")
        for u in range(self.n):
            nb = self.neighbors_of(u)
            if len(nb) and (np.any(np.diff(nb) <= 0) or nb[0] < 0 or nb[-1] >= self.n):
                raise GraphError(f"neighbor list of {u} not strictly increasing in range")
            if np.any(nb == u):
                raise GraphError(f"self loop at {u}")
        a = self.adjacency()
        if (a != a.T).nnz:
            raise GraphError("adjacency is not symmetric")


def build_graph(edges: Iterable, n: int, meta: Optional[dict] = None) -> Graph:
    """Build a simple undirected graph from ``(u, v)`` pairs.

    Self loops are dropped; repeated and reversed pairs collapse to one edge.
    """
    n = int(n)
    if n < 0:
        raise GraphError("node count must be non-negative")
    e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                   dtype=np.int64).reshape(-1, 2)
    if len(e):
        bad = (e < 0) | (e >= n)
        if bad.any():
            u, v = e[bad.any(axis=1)][0]
            raise NodeOutOfRangeError(f"edge ({u}, {v}) references a node outside [0, {n})")
        e = e[e[:, 0] != e[:, 1]]
    both = np.concatenate([e, e[:, ::-1]]) if len(e) else e
    if len(both):
        both = np.unique(both, axis=0)
    counts = np.bincount(both[:, 0], minlength=n) if len(both) else np.zeros(n, np.int64)
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    nbrs = both[:, 1].astype(np.int64) if len(both) else np.zeros(0, np.int64)
    return Graph(n, offsets, np.ascontiguousarray(nbrs), dict(meta or {}))


def normalized_adjacency(g: Graph) -> sp.csr_matrix:
    """``D~^-1/2 (W + I) D~^-1/2`` where ``D~`` counts the added self loop."""
    w = (g.adjacency() + sp.identity(g.n, format="csr")).tocsr()
    w.sort_indices()
    d = np.diff(w.indptr).astype(np.float64)
    rows = np.repeat(np.arange(g.n), np.diff(w.indptr))
    w.data = 1.0 / np.sqrt(d[rows] * d[w.indices])
    return w


def normalized_laplacian(g: Graph) -> sp.csr_matrix:
    """``I - D^-1/2 W D^-1/2``; isolated nodes get a zero row and column."""
    deg = g.degrees().astype(np.float64)
    inv = np.zeros(g.n)
    nz = deg > 0
    inv[nz] = 1.0 / np.sqrt(deg[nz])
    s = sp.diags(inv)
    lap = sp.diags(nz.astype(np.float64)) - s @ g.adjacency() @ s
    lap = lap.tocsr()
    lap.sort_indices()
    return lap


def knn_graph(embeddings: np.ndarray, k: int, chunk: int = 1024) -> Graph:
    """Symmetrized k-nearest-neighbour graph under Euclidean distance.

    Each row links to its ``k`` closest other rows (ties go to the smaller
    id) and the directed relation is made undirected by union. A ``k`` that
    is too large is clamped to ``n - 1`` and noted in ``meta["warnings"]``.
    """
    x = np.asarray(embeddings, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 2:
        raise GraphError("knn_graph needs a 2-D array with at least two rows")
    if k < 1:
        raise GraphError("k must be >= 1")
    n = x.shape[0]
    warnings = []
    if k >= n:
        warnings.append(f"k={k} clamped to n-1={n - 1}")
        log.warning(warnings[-1])
        k = n - 1
    pairs = []
    for start in range(0, n, chunk):
        stop = min(n, start + chunk)
        d = cdist(x[start:stop], x, "sqeuclidean")
        d[np.arange(stop - start), np.arange(start, stop)] = np.inf
        # stable sort keeps the smaller id first among equal distances
        order = np.argsort(d, axis=1, kind="stable")[:, :k]
        src = np.repeat(np.arange(start, stop), k)
        pairs.append(np.column_stack([src, order.ravel()]))
    meta = {"source": "knn", "k": k}
    if warnings:
        meta["warnings"] = warnings
    return build_graph(np.concatenate(pairs), n, meta)


def sbm_generate(block_sizes, p_in: float, p_out: float, feature_dim: int = 16,
                 seed: int = 0, feature_noise: float = 1.0, mean_scale: float = 1.0):
    """Sample a stochastic block model graph with block-dependent features.

    Returns ``(graph, labels, features)``; a node's label is its block index
    and its feature row is the block mean plus isotropic Gaussian noise.
    """
    sizes = [int(b) for b in block_sizes]
    if not sizes:
        raise GraphError("block_sizes must not be empty")
    if any(b < 0 for b in sizes):
        raise GraphError("block sizes must be non-negative")
    for p in (p_in, p_out):
        if not 0.0 <= p <= 1.0:
            raise GraphError(f"probability {p} outside [0, 1]")
    rng = np.random.default_rng(seed)
    n = sum(sizes)
    starts = np.concatenate([[0], np.cumsum(sizes)])
    labels = np.repeat(np.arange(len(sizes)), sizes)
    chunks = []
    for a in range(len(sizes)):
        for b in range(a, len(sizes)):
            draw = rng.random((sizes[a], sizes[b]))
            hit = draw < (p_in if a == b else p_out)
            if a == b:
                hit = np.triu(hit, k=1)
            u, v = np.nonzero(hit)
            chunks.append(np.column_stack([u + starts[a], v + starts[b]]))
    edges = np.concatenate(chunks) if chunks else np.zeros((0, 2), np.int64)
    means = rng.normal(0.0, mean_scale, size=(len(sizes), feature_dim))
    feats = means[labels] + rng.normal(0.0, feature_noise, size=(n, feature_dim))
    return build_graph(edges, n, {"source": "sbm"}), labels, feats


def read_edge_list(path, n: Optional[int] = None) -> Graph:
    """Read a whitespace separated ``u v`` edge list; ``#`` starts a comment.

    Without ``n`` the node count is one more than the largest id seen.
    """
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise MalformedLineError(f"{path}:{lineno}: expected 'u<TAB>v', got {raw.rstrip()!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise MalformedLineError(f"{path}:{lineno}: non-integer node id in {raw.rstrip()!r}") from None
            if u < 0 or v < 0:
                raise MalformedLineError(f"{path}:{lineno}: negative node id")
            pairs.append((u, v))
    if n is None:
        n = 1 + max((max(p) for p in pairs), default=-1)
    return build_graph(pairs, n)


def read_int_column(path, what="value"):
    vals = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line:
                continue
            try:
                vals.append(int(line))
            except ValueError:
                raise MalformedLineError(f"{path}:{lineno}: expected one integer {what}, got {line!r}") from None
    return np.asarray(vals, dtype=np.int64)


def read_features(path) -> np.ndarray:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line:
                continue
            try:
                rows.append([float(t) for t in line.split(",")])
            except ValueError:
                raise MalformedLineError(f"{path}:{lineno}: non-numeric feature value") from None
            if len(rows[-1]) != len(rows[0]):
                raise DimensionMismatchError(
                    f"{path}:{lineno}: row has {len(rows[-1])} columns, expected {len(rows[0])}")
    x = np.asarray(rows, dtype=np.float64)
    if x.size and not np.all(np.isfinite(x)):
        raise MalformedLineError(f"{path}: non-finite feature value")
    return x


def load_graph_dataset(path, edges="edges.tsv", features="features.csv",
                       labels="labels.txt", test_mask="test_mask.txt"):
    """Load a dataset directory.

    Returns ``(graph, labels, features, test_mask)`` where ``test_mask`` is a
    boolean array, or ``None`` when the directory has no mask file.
    """
    root = Path(path)
    y = read_int_column(root / labels, "label")
    n = len(y)
    x = read_features(root / features)
    if x.shape[0] != n:
        raise DimensionMismatchError(f"{x.shape[0]} feature rows but {n} labels")
    if n:
        classes = np.unique(y)
        if classes[0] != 0 or classes[-1] != len(classes) - 1:
            raise NonContiguousLabelsError(
                f"class ids must be 0..C-1 without gaps, found {classes.tolist()}")
    try:
        g = read_edge_list(root / edges, n)
    except NodeOutOfRangeError as exc:
        raise DimensionMismatchError(f"edge list references more than {n} nodes: {exc}") from None
    mask = None
    if (root / test_mask).exists():
        m = read_int_column(root / test_mask, "mask flag")
        if len(m) != n:
            raise DimensionMismatchError(f"test mask has {len(m)} entries, expected {n}")
        if not np.isin(m, (0, 1)).all():
            raise MalformedLineError(f"{root / test_mask}: mask entries must be 0 or 1")
        mask = m.astype(bool)
    return g, y, x, mask
