"""Agglomerative clustering over a precomputed dissimilarity matrix, plus k-means."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numba import njit

from .dissimilarity import DissimilarityMatrix, as_array

LINKAGES = ("single", "complete", "average")
_LINKAGE_CODE = {name: i for i, name in enumerate(LINKAGES)}


class Merge(NamedTuple):
    a: int
    b: int
    height: float
    new_id: int


@dataclass(frozen=True)
class Dendrogram:
    """Merge list of an agglomerative run.

    Leaves are ``0..n-1``; the cluster created by merge ``s`` gets id ``n + s``.
    Within a merge ``a < b``.
    """

    n: int
    merges: tuple
    linkage: str = "average"

    @property
    def heights(self) -> np.ndarray:
        return np.array([m.height for m in self.merges])

    def to_scipy(self) -> np.ndarray:
        """Linkage matrix in the ``scipy.cluster.hierarchy`` layout (for plotting)."""
        size = [1] * self.n
        Z = np.zeros((len(self.merges), 4))
        for s, m in enumerate(self.merges):
            size.append(size[m.a] + size[m.b])
            Z[s] = (m.a, m.b, m.height, size[-1])
        return Z


@dataclass(frozen=True)
class ClusterLabels:
    """Flat partition with labels ``1..k``."""

    assignments: tuple

    def __post_init__(self):
        a = tuple(int(v) for v in self.assignments)
        object.__setattr__(self, "assignments", a)
        if not a:
            raise ValueError("empty labelling")
        used = set(a)
        k = max(a)
        if min(a) < 1 or used != set(range(1, k + 1)):
            raise ValueError("labels must be 1..k with every label used")

    @classmethod
    def from_any(cls, labels) -> "ClusterLabels":
        """Renumber arbitrary hashable labels to ``1..k`` by first appearance."""
        if isinstance(labels, ClusterLabels):
            return labels
        codes: dict = {}
        out = [codes.setdefault(v, len(codes) + 1) for v in labels]
        return cls(tuple(out))

    @property
    def k(self) -> int:
        return max(self.assignments)

    @property
    def n(self) -> int:
        return len(self.assignments)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.assignments)

    def __len__(self):
        return len(self.assignments)

    def __iter__(self):
        return iter(self.assignments)


def _labels_array(labels) -> np.ndarray:
    return np.asarray(ClusterLabels.from_any(labels).assignments)


@njit(cache=True)
def _agglomerate(D, code):
    n = D.shape[0]
    dist = D.copy()
    sums = D.copy()
    size = np.ones(n)
    ids = np.arange(n)
    active = np.ones(n, dtype=np.bool_)
    out_a = np.empty(n - 1, dtype=np.int64)
    out_b = np.empty(n - 1, dtype=np.int64)
    out_h = np.empty(n - 1)
    for step in range(n - 1):
        best = np.inf
        bi = -1
        bj = -1
        lo_best = 0
        hi_best = 0
        for i in range(n):
            if not active[i]:
                continue
            for j in range(i + 1, n):
                if not active[j]:
                    continue
                d = dist[i, j]
                lo = min(ids[i], ids[j])
                hi = max(ids[i], ids[j])
                if d < best or (d == best and (lo < lo_best or (lo == lo_best and hi < hi_best))):
                    best = d
                    bi = i
                    bj = j
                    lo_best = lo
                    hi_best = hi
        out_a[step] = lo_best
        out_b[step] = hi_best
        out_h[step] = best
        # the merged cluster lives on in slot bi
        new_size = size[bi] + size[bj]
        for k in range(n):
            if not active[k] or k == bi or k == bj:
                continue
            if code == 0:
                v = min(dist[k, bi], dist[k, bj])
            elif code == 1:
                v = max(dist[k, bi], dist[k, bj])
            else:
                s = sums[k, bi] + sums[k, bj]
                sums[k, bi] = s
                sums[bi, k] = s
                v = s / (size[k] * new_size)
            dist[k, bi] = v
            dist[bi, k] = v
        active[bj] = False
        size[bi] = new_size
        ids[bi] = n + step
    return out_a, out_b, out_h


def agglomerate(matrix, linkage: str = "average") -> Dendrogram:
    """Merge the two closest clusters until one remains.

    Inter-cluster distance is the closest pair (``single``), the farthest pair
    (``complete``) or the mean over all cross pairs (``average``). Equal
    distances are resolved by the lexicographically smallest pair of cluster
    ids. A decreasing merge height triggers a ``RuntimeWarning``.
    """
    if linkage not in _LINKAGE_CODE:
        raise ValueError(f"linkage must be one of {LINKAGES}, got {linkage!r}")
    if not isinstance(matrix, DissimilarityMatrix):
        matrix = DissimilarityMatrix(np.asarray(matrix, dtype=np.float64))
    D = np.array(matrix.entries, dtype=np.float64)
    n = D.shape[0]
    if n < 1:
        raise ValueError("empty dissimilarity matrix")
    if n == 1:
        return Dendrogram(1, (), linkage)
    a, b, h = _agglomerate(D, _LINKAGE_CODE[linkage])
    merges = tuple(Merge(int(a[s]), int(b[s]), float(h[s]), n + s) for s in range(n - 1))
    if np.any(np.diff(h) < 0):
        warnings.warn(f"{linkage} linkage produced a height inversion", RuntimeWarning, stacklevel=2)
    return Dendrogram(n, merges, linkage)


def cut(dendrogram: Dendrogram, k: int) -> ClusterLabels:
    """Flat ``k``-cluster labelling obtained by undoing the last ``k - 1`` merges."""
    n = dendrogram.n
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    parent = list(range(2 * n - 1))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for m in dendrogram.merges[: n - k]:
        parent[find(m.a)] = m.new_id
        parent[find(m.b)] = m.new_id
    return ClusterLabels.from_any([find(i) for i in range(n)])


def hierarchical(matrix, k: int, linkage: str = "average") -> ClusterLabels:
    return cut(agglomerate(matrix, linkage), k)


# --------------------------------------------------------------------------
# k-means


@dataclass(frozen=True)
class KMeansResult:
    labels: ClusterLabels
    centroids: np.ndarray
    objective: float
    iterations: int
    restart: int


def _lloyd(X, centroids, max_iter):
    assign = None
    for it in range(1, max_iter + 1):
        d2 = ((X[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new = d2.argmin(axis=1)
        if assign is not None and np.array_equal(new, assign):
            return assign, centroids, it
        assign = new
        centroids = centroids.copy()
        dist_own = d2[np.arange(len(X)), assign]
        for j in range(centroids.shape[0]):
            members = assign == j
            if members.any():
                centroids[j] = X[members].mean(axis=0)
            else:
                # empty cluster: reseed from the point farthest from its centroid
                far = int(dist_own.argmax())
                centroids[j] = X[far]
                assign[far] = j
                dist_own[far] = 0.0
    return assign, centroids, max_iter


def kmeans(dataset, k: int, seed: int = 0, restarts: int = 10, max_iter: int = 300) -> KMeansResult:
    """Lloyd's algorithm on raw series, best of ``restarts`` seeded starts.

    Each start draws ``k`` distinct points uniformly as centroids. Iteration
    stops when the assignment no longer changes or after ``max_iter`` rounds.
    The kept run minimises the within-cluster sum of squared distances; ties
    go to the earliest restart.
    """
    X = as_array(dataset)
    n = X.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    rng = np.random.default_rng(seed)
    best = None
    for r in range(restarts):
        start = X[rng.choice(n, size=k, replace=False)].copy()
        assign, centroids, iters = _lloyd(X, start, max_iter)
        # the final centroids are the means of the final assignment
        for j in range(k):
            members = assign == j
            if members.any():
                centroids[j] = X[members].mean(axis=0)
        J = float(((X - centroids[assign]) ** 2).sum())
        if best is None or J < best.objective:
            best = KMeansResult(ClusterLabels.from_any(assign.tolist()), centroids, J, iters, r)
    return best


def kmeans_objective(dataset, labels) -> float:
    """Within-cluster sum of squared Euclidean distances to cluster means."""
    X = as_array(dataset)
    lab = _labels_array(labels)
    return float(sum(((X[lab == c] - X[lab == c].mean(axis=0)) ** 2).sum() for c in np.unique(lab)))
