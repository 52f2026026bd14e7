"""Edge-weighted graph model: degrees, volumes, cuts, densities, connectivity.

Vertices are integer indices 0..n-1 with optional external string labels.
Vertex subsets are passed around as validated integer index arrays; use
:func:`vertex_subset` to canonicalize caller-supplied collections.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import (
    DuplicateEdge,
    NegativeWeight,
    ParseError,
    SelfLoop,
    ZeroVolume,
)


def default_vertex_ids(n: int) -> tuple[str, ...]:
    """Generated labels v000..; zero padded so lexicographic order matches index order."""
    width = max(1, len(str(max(n - 1, 0))))
    return tuple(f"v{i:0{width}d}" for i in range(n))


def vertex_subset(indices, n: int) -> np.ndarray:
    """Validate a vertex subset and return it as a sorted integer array.

    Accepts any iterable of integers.  Rejects out-of-range entries and
    duplicates; an empty subset is fine.
    """
    idx = np.asarray(list(indices) if not isinstance(indices, np.ndarray) else indices,
                     dtype=np.intp).ravel()
    if idx.size == 0:
        return idx
    if idx.min() < 0 or idx.max() >= n:
        raise ValueError(f"vertex index out of range for n={n}")
    idx = np.sort(idx)
    if np.any(idx[1:] == idx[:-1]):
        raise ValueError("duplicate vertex index in subset")
    return idx


@dataclass(frozen=True)
class WeightedGraph:
    """Symmetric non-negative weight matrix with zero diagonal.

    The weight matrix is copied and frozen at construction; degree sums are
    cached.  All methods treat the graph as undirected.
    """

    weights: np.ndarray
    vertex_ids: tuple[str, ...] = ()
    degrees: np.ndarray = field(init=False, repr=False)
    total_volume: float = field(init=False, repr=False)

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError("weight matrix must be square")
        n = w.shape[0]
        if not np.isfinite(w).all():
            raise ValueError("weights must be finite")
        if (w < 0).any():
            raise NegativeWeight("negative edge weight in weight matrix")
        if not np.array_equal(w, w.T):
            raise ValueError("weight matrix must be symmetric")
        if n and np.diagonal(w).any():
            raise SelfLoop("nonzero diagonal entry in weight matrix")
        ids = self.vertex_ids if self.vertex_ids else default_vertex_ids(n)
        ids = tuple(str(v) for v in ids)
        if len(ids) != n:
            raise ValueError("vertex_ids length must match matrix size")
        if len(set(ids)) != n:
            raise ValueError("vertex_ids must be distinct")
        w.setflags(write=False)
        deg = w.sum(axis=1)
        deg.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "vertex_ids", ids)
        object.__setattr__(self, "degrees", deg)
        object.__setattr__(self, "total_volume", float(deg.sum()))

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    def normalize_volume(self) -> "WeightedGraph":
        """Scale all weights so the total volume (sum of degrees) equals 1."""
        if self.total_volume <= 0.0:
            raise ZeroVolume("cannot normalize a graph with zero total volume")
        return WeightedGraph(self.weights / self.total_volume, self.vertex_ids)

    def volume(self, indices) -> float:
        idx = vertex_subset(indices, self.n)
        return float(self.degrees[idx].sum())

    def weighted_cut(self, left, right) -> float:
        """Total weight between two vertex subsets; overlap pairs count once per ordered pair.

        For left == right this is twice the internal edge weight, matching the
        double sum over ordered pairs.
        """
        li = vertex_subset(left, self.n)
        ri = vertex_subset(right, self.n)
        if li.size == 0 or ri.size == 0:
            return 0.0
        return float(self.weights[np.ix_(li, ri)].sum())

    def relative_density(self, left, right) -> float:
        """Cut weight divided by the product of the two subset volumes."""
        li = vertex_subset(left, self.n)
        ri = vertex_subset(right, self.n)
        vl = float(self.degrees[li].sum()) if li.size else 0.0
        vr = float(self.degrees[ri].sum()) if ri.size else 0.0
        if vl <= 0.0 or vr <= 0.0:
            raise ZeroVolume("relative density needs both subsets to have positive volume")
        return float(self.weights[np.ix_(li, ri)].sum()) / (vl * vr)

    def _component_labels(self) -> tuple[int, np.ndarray]:
        support = csr_matrix(self.weights > 0)
        count, labels = connected_components(support, directed=False)
        return count, labels

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        count, _ = self._component_labels()
        return count == 1

    def largest_component(self) -> np.ndarray:
        """Indices of the largest connected component, ties broken by smallest index."""
        if self.n == 0:
            return np.empty(0, dtype=np.intp)
        _, labels = self._component_labels()
        sizes = np.bincount(labels)
        best_size = sizes.max()
        candidates = np.flatnonzero(sizes == best_size)
        first_seen = [int(np.argmax(labels == c)) for c in candidates]
        chosen = candidates[int(np.argmin(first_seen))]
        return np.flatnonzero(labels == chosen).astype(np.intp)

    def induced_subgraph(self, indices) -> "WeightedGraph":
        idx = vertex_subset(indices, self.n)
        sub = self.weights[np.ix_(idx, idx)]
        ids = tuple(self.vertex_ids[i] for i in idx)
        return WeightedGraph(sub, ids)


def load_edge_list(text: str) -> WeightedGraph:
    """Parse tab-separated ``u<TAB>v<TAB>w`` lines into a graph.

    Blank lines and lines starting with ``#`` are skipped.  Vertices are
    indexed in sorted label order.  Raises ParseError, SelfLoop,
    NegativeWeight, or DuplicateEdge with the offending line number.
    """
    edges: dict[tuple[str, str], float] = {}
    labels: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ParseError(f"line {lineno}: expected 3 tab-separated fields, got {len(parts)}")
        u, v, wtext = (p.strip() for p in parts)
        if not u or not v:
            raise ParseError(f"line {lineno}: empty vertex label")
        try:
            w = float(wtext)
        except ValueError:
            raise ParseError(f"line {lineno}: bad weight {wtext!r}") from None
        if not np.isfinite(w):
            raise ParseError(f"line {lineno}: weight must be finite")
        if w < 0:
            raise NegativeWeight(f"line {lineno}: negative weight {w}")
        if u == v:
            raise SelfLoop(f"line {lineno}: self loop at {u!r}")
        key = (u, v) if u < v else (v, u)
        if key in edges:
            raise DuplicateEdge(f"line {lineno}: duplicate edge {u!r} -- {v!r}")
        edges[key] = w
        labels.add(u)
        labels.add(v)
    ids = tuple(sorted(labels))
    index = {lab: i for i, lab in enumerate(ids)}
    n = len(ids)
    weights = np.zeros((n, n))
    for (u, v), w in edges.items():
        i, j = index[u], index[v]
        weights[i, j] = w
        weights[j, i] = w
    return WeightedGraph(weights, ids)


def dump_edge_list(g: WeightedGraph) -> str:
    """Serialize positive-weight edges as ``u<TAB>v<TAB>w`` lines, i < j order.

    Weights use repr so loading the output reproduces the graph exactly.
    """
    lines = []
    upper = np.triu(g.weights, k=1)
    for i, j in zip(*np.nonzero(upper)):
        lines.append(f"{g.vertex_ids[i]}\t{g.vertex_ids[j]}\t{float(g.weights[i, j])!r}")
    return "\n".join(lines) + ("\n" if lines else "")
