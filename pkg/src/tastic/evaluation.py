"""External validation, elbow curves and per-group profiles."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .clustering import ClusterLabels, agglomerate, cut, hierarchical, kmeans
from .dissimilarity import (
    AlphaSpec,
    DissimilarityMatrix,
    TravelParams,
    as_array,
    best_trend_correlation,
    dissim_matrix,
)

DEFAULT_THRESHOLDS = (6.5, 7.0, 10.0)
DEFAULT_BINS = ((0.0, 6.5), (6.5, 7.0), (7.0, 8.0), (8.0, 9.0), (9.0, 10.0), (10.0, math.inf))


@dataclass(frozen=True)
class ContingencyTable:
    counts: np.ndarray
    pred_labels: tuple
    truth_labels: tuple

    @classmethod
    def build(cls, pred, truth) -> "ContingencyTable":
        p = np.asarray(list(pred))
        t = np.asarray(list(truth))
        if p.shape != t.shape:
            raise ValueError(f"label vectors differ in length: {p.size} != {t.size}")
        pu, pi = np.unique(p, return_inverse=True)
        tu, ti = np.unique(t, return_inverse=True)
        counts = np.zeros((pu.size, tu.size), dtype=np.int64)
        np.add.at(counts, (pi, ti), 1)
        return cls(counts, tuple(pu.tolist()), tuple(tu.tolist()))

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def row_sums(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def col_sums(self) -> np.ndarray:
        return self.counts.sum(axis=0)


def _comb2(v) -> int:
    return sum(int(c) * (int(c) - 1) // 2 for c in np.ravel(v))


def ari(pred, truth) -> float:
    """Adjusted Rand index from contingency counts.

    When the denominator vanishes (both partitions all-singletons or both a
    single cluster) the result is 1 for identical partitions and 0 otherwise.
    """
    table = ContingencyTable.build(pred, truth)
    n = table.n
    index = _comb2(table.counts)
    a = _comb2(table.row_sums)
    b = _comb2(table.col_sums)
    total = n * (n - 1) // 2
    expected = a * b / total if total else 0.0
    denom = 0.5 * (a + b) - expected
    if denom == 0:
        same = table.counts.shape[0] == table.counts.shape[1] == np.count_nonzero(table.counts)
        return 1.0 if same else 0.0
    return (index - expected) / denom


def accuracy(pred, truth) -> float:
    """Best fraction of points agreeing under a one-to-one label matching.

    The contingency table is padded to square and solved as an assignment
    problem; unmatched labels count as wrong.
    """
    table = ContingencyTable.build(pred, truth)
    C = table.counts
    size = max(C.shape)
    square = np.zeros((size, size), dtype=np.int64)
    square[: C.shape[0], : C.shape[1]] = C
    rows, cols = linear_sum_assignment(square, maximize=True)
    return float(square[rows, cols].sum()) / table.n


def wcd(matrix, labels) -> float:
    """Total within-cluster dissimilarity: sum over clusters of in-cluster pair sums."""
    D = np.asarray(matrix.entries if isinstance(matrix, DissimilarityMatrix) else matrix)
    lab = np.asarray(ClusterLabels.from_any(labels).assignments)
    if lab.size != D.shape[0]:
        raise ValueError("labels do not match the matrix size")
    total = 0.0
    for c in np.unique(lab):
        idx = np.flatnonzero(lab == c)
        sub = D[np.ix_(idx, idx)]
        total += float(sub[np.triu_indices(idx.size, 1)].sum())
    return total


@dataclass(frozen=True)
class ElbowCurve:
    points: tuple

    @property
    def ks(self) -> list[int]:
        return [k for k, _ in self.points]

    @property
    def values(self) -> list[float]:
        return [v for _, v in self.points]

    def drops(self) -> list[tuple[int, float]]:
        """``(k, wcd(k-1) - wcd(k))`` for every k after the first."""
        return [(k1, v0 - v1) for (_, v0), (k1, v1) in zip(self.points, self.points[1:])]


def elbow_curve(matrix, linkage: str = "average", kmin: int = 2, kmax: int = 10) -> ElbowCurve:
    """Within-cluster dissimilarity of every cut ``kmin..kmax`` of one dendrogram."""
    if not isinstance(matrix, DissimilarityMatrix):
        matrix = DissimilarityMatrix(np.asarray(matrix, dtype=np.float64))
    if not 1 <= kmin <= kmax <= matrix.n:
        raise ValueError(f"need 1 <= kmin <= kmax <= n={matrix.n}, got {kmin}, {kmax}")
    tree = agglomerate(matrix, linkage)
    return ElbowCurve(tuple((k, wcd(matrix, cut(tree, k))) for k in range(kmin, kmax + 1)))


# --------------------------------------------------------------------------
# profiles


@dataclass
class GroupProfile:
    group: int
    size: int
    mean_last3: float
    mean_max: float
    mean_argmax: float
    threshold_counts: dict = field(default_factory=dict)
    max_histogram: list = field(default_factory=list)
    last3_histogram: list = field(default_factory=list)
    mean_within_corr: float | None = None
    frac_corr_ge_half: float | None = None

    def to_dict(self, bins=DEFAULT_BINS) -> dict:
        d = {
            "group": self.group,
            "size": self.size,
            "mean_last3": self.mean_last3,
            "mean_max": self.mean_max,
            "mean_argmax": self.mean_argmax,
        }
        if self.threshold_counts:
            d["threshold_counts"] = {_fmt(t): c for t, c in self.threshold_counts.items()}
        labels = [_bin_label(b) for b in bins]
        d["max_histogram"] = dict(zip(labels, self.max_histogram))
        d["last3_histogram"] = dict(zip(labels, self.last3_histogram))
        d["mean_within_corr"] = self.mean_within_corr
        d["frac_corr_ge_half"] = self.frac_corr_ge_half
        return d


def _fmt(v: float) -> str:
    return "inf" if math.isinf(v) else f"{v:g}"


def _bin_label(b) -> str:
    return f"[{_fmt(b[0])},{_fmt(b[1])})"


def _check_bins(bins):
    bins = [tuple(map(float, b)) for b in bins]
    for lo, hi in bins:
        if not lo < hi:
            raise ValueError(f"empty bin [{lo}, {hi})")
    for (_, hi), (lo, _) in zip(bins, bins[1:]):
        if hi != lo:
            raise ValueError("bins must be contiguous and sorted")
    return bins


def _histogram(values, bins):
    return [int(np.count_nonzero((values >= lo) & (values < hi))) for lo, hi in bins]


def profile(
    dataset,
    labels,
    thresholds=DEFAULT_THRESHOLDS,
    bins=DEFAULT_BINS,
    E=(-0.075, 0.0, 0.075),
    symmetric: bool = True,
) -> list[GroupProfile]:
    """Per-group summary statistics of a labelled dataset.

    For each group: mean of the last-three-value means, mean of the maxima,
    mean 1-based position of the maximum (earliest on ties), the mean number
    of values at or above each threshold, histograms of per-member maximum
    and last-three mean over ``bins``, and over within-group pairs the mean
    best tilted correlation and the share of pairs where it reaches 0.5.
    Groups of one member have no pairs and report ``None`` for the last two.
    """
    X = as_array(dataset)
    lab = np.asarray(ClusterLabels.from_any(labels).assignments)
    if lab.size != X.shape[0]:
        raise ValueError("labels do not match the dataset size")
    thresholds = sorted(float(t) for t in thresholds)
    bins = _check_bins(bins)
    out = []
    for g in range(1, lab.max() + 1):
        G = X[lab == g]
        last3 = G[:, -3:].mean(axis=1)
        peak = G.max(axis=1)
        where = G.argmax(axis=1) + 1
        counts = {t: float((G >= t).sum(axis=1).mean()) for t in thresholds}
        corrs = [
            best_trend_correlation(G[i], G[j], E, symmetric)
            for i in range(len(G))
            for j in range(i + 1, len(G))
        ]
        out.append(GroupProfile(
            group=g,
            size=len(G),
            mean_last3=float(last3.mean()),
            mean_max=float(peak.mean()),
            mean_argmax=float(where.mean()),
            threshold_counts=counts,
            max_histogram=_histogram(peak, bins),
            last3_histogram=_histogram(last3, bins),
            mean_within_corr=float(np.mean(corrs)) if corrs else None,
            frac_corr_ge_half=float(np.mean(np.asarray(corrs) >= 0.5)) if corrs else None,
        ))
    return out


# --------------------------------------------------------------------------
# method comparison

METHODS = (
    "kmeans",
    "euclidean",
    "euclidean+TT",
    "pearson",
    "pearson+TT",
    "pearson+TT+trendT",
    "tastic-TT",
    "tastic",
)


@dataclass(frozen=True)
class MethodScore:
    method: str
    accuracy: float
    ari: float
    alpha: float | None = None


def cluster_with(method: str, dataset, k: int, params: TravelParams, alpha: AlphaSpec,
                 linkage: str = "average", seed: int = 0, threads: int | None = None):
    """Cluster ``dataset`` into ``k`` groups with one named method.

    ``tastic-TT`` is the blended measure with time traveling only. Returns the
    labels and the alpha used (``None`` for methods without one).
    """
    if method == "kmeans":
        return kmeans(dataset, k, seed=seed).labels, None
    used_alpha = None
    if method in ("tastic", "tastic-TT"):
        used_alpha = alpha.resolve(dataset)
        p = params.replace(alpha=used_alpha)
        if method == "tastic-TT":
            p = p.replace(E=(0.0,), C=0.0)
        D = dissim_matrix(dataset, p, "tastic", threads)
    elif method in METHODS:
        D = dissim_matrix(dataset, params, method, threads)
    else:
        raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    return hierarchical(D, k, linkage), used_alpha


def compare_methods(dataset, truth, methods=METHODS, params: TravelParams | None = None,
                    alpha: AlphaSpec | None = None, linkage: str = "average", seed: int = 0,
                    threads: int | None = None) -> list[MethodScore]:
    """Accuracy and ARI of each method at the true number of clusters."""
    params = params if params is not None else TravelParams()
    alpha = alpha if alpha is not None else AlphaSpec()
    truth = ClusterLabels.from_any(truth)
    rows = []
    for method in methods:
        labels, used = cluster_with(method, dataset, truth.k, params, alpha, linkage, seed, threads)
        rows.append(MethodScore(method, accuracy(labels, truth), ari(labels, truth), used))
    return rows
