"""Time- and trend-traveling dissimilarities between equal-length series.

Every candidate alignment is scored by one compiled kernel (``_candidate``),
so the scalar functions, the search over alignments and the pairwise matrix
all share a single arithmetic path. That is what makes the matrix bit-identical
to a pair-by-pair evaluation and independent of the worker count.

Conventions
-----------
* ``forward`` keeps the first ``T - l`` points of a series, ``backward`` drops
  the first ``l`` points. A tilt ``eps`` adds ``eps * t`` to the ``t``-th
  retained point (``t`` counted from 0).
* A candidate pairs ``x`` in one direction with ``y`` in the other.
* Correlation of a constant sequence: 1 if both are constant and equal,
  otherwise 0.
* The Euclidean part is the root-mean-square difference over the aligned
  window and never sees the tilt.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
from numba import njit

FORWARD = "forward"
BACKWARD = "backward"
DIRECTIONS = (BACKWARD, FORWARD)

MEASURES = (
    "tastic",
    "euclidean",
    "euclidean+TT",
    "pearson",
    "pearson+TT",
    "pearson+TT+trendT",
)

THREADS_ENV = "TASTIC_THREADS"


class ShapeError(ValueError):
    """Series lengths do not match or are too short."""


class InvalidShiftError(ValueError):
    """A shift ``l`` that is not in ``0 <= l < T``."""


class InsufficientDataError(ValueError):
    pass


@dataclass(frozen=True)
class TimeSeries:
    id: str
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1 or v.size < 2:
            raise ShapeError(f"series {self.id!r}: need a 1-D sequence of length >= 2")
        if not np.all(np.isfinite(v)):
            raise ValueError(f"series {self.id!r}: non-finite values")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.size


@dataclass(frozen=True)
class TravelParams:
    """Search space and blend of the traveled dissimilarity.

    ``L`` is the largest shift, ``E`` the tilt angles (must contain 0), ``C``
    the tilt penalty and ``alpha`` the correlation weight. With
    ``symmetric=True`` (default) the tilt may be put on either series, which
    makes ``tastic_dissim(x, y) == tastic_dissim(y, x)`` hold bitwise; with
    ``symmetric=False`` only the second series is tilted.
    """

    L: int = 3
    E: tuple = (-0.075, 0.0, 0.075)
    C: float = 0.0
    alpha: float = 1.0
    symmetric: bool = True

    def __post_init__(self):
        E = tuple(float(e) for e in self.E)
        object.__setattr__(self, "E", E)
        if int(self.L) != self.L or self.L < 0:
            raise ValueError(f"L must be a nonnegative integer, got {self.L}")
        object.__setattr__(self, "L", int(self.L))
        if not E or not all(math.isfinite(e) for e in E):
            raise ValueError("E must be a non-empty set of finite reals")
        if 0.0 not in E:
            raise ValueError("E must contain 0")
        if not (self.C >= 0 and math.isfinite(self.C)):
            raise ValueError(f"C must be >= 0, got {self.C}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")

    @classmethod
    def with_epsilon(cls, epsilon: float, **kwargs) -> "TravelParams":
        """Params with the three-point tilt set ``{-epsilon, 0, epsilon}``."""
        eps = abs(float(epsilon))
        E = (0.0,) if eps == 0 else (-eps, 0.0, eps)
        return cls(E=E, **kwargs)

    def replace(self, **changes) -> "TravelParams":
        kw = dict(L=self.L, E=self.E, C=self.C, alpha=self.alpha, symmetric=self.symmetric)
        kw.update(changes)
        return TravelParams(**kw)

    def check_length(self, T: int):
        if self.L >= T:
            raise InvalidShiftError(f"L={self.L} must be smaller than the series length T={T}")


@dataclass(frozen=True)
class AlphaSpec:
    """Either an explicit ``value`` or the data-driven default at percentile ``p``."""

    value: float | None = None
    p: float = 0.09

    def __post_init__(self):
        if self.value is not None and not 0.0 <= self.value <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.value}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")

    def resolve(self, dataset) -> float:
        if self.value is not None:
            return float(self.value)
        return default_alpha(dataset, self.p)


@dataclass(frozen=True)
class DissimilarityMatrix:
    entries: np.ndarray = field(repr=False)
    method: str = ""
    ids: tuple = ()

    def __post_init__(self):
        D = np.asarray(self.entries, dtype=np.float64)
        if D.ndim != 2 or D.shape[0] != D.shape[1]:
            raise ShapeError("dissimilarity matrix must be square")
        if not np.all(np.isfinite(D)):
            raise ValueError("dissimilarity matrix has non-finite entries")
        if np.any(D < 0):
            raise ValueError("dissimilarity matrix has negative entries")
        if not np.array_equal(D, D.T):
            raise ValueError("dissimilarity matrix is not symmetric")
        if np.any(np.diag(D) != 0):
            raise ValueError("dissimilarity matrix has a nonzero diagonal")
        D = D.copy()
        D.flags.writeable = False
        object.__setattr__(self, "entries", D)
        if not self.ids:
            object.__setattr__(self, "ids", tuple(str(i) for i in range(D.shape[0])))
        elif len(self.ids) != D.shape[0]:
            raise ShapeError("ids do not match matrix size")

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


# --------------------------------------------------------------------------
# compiled kernels


@njit(cache=True, nogil=True)
def _corr(x, ox, y, oy, m, eps):
    # Pearson correlation of x[ox:ox+m] with y[oy:oy+m] + eps * (0..m-1)
    mx = 0.0
    my = 0.0
    for t in range(m):
        mx += x[ox + t]
        my += y[oy + t] + t * eps
    mx /= m
    my /= m
    sxy = 0.0
    sxx = 0.0
    syy = 0.0
    x0 = x[ox]
    y0 = y[oy]
    const_x = True
    const_y = True
    for t in range(m):
        a = x[ox + t]
        b = y[oy + t] + t * eps
        if a != x0:
            const_x = False
        if b != y0:
            const_y = False
        da = a - mx
        db = b - my
        sxy += da * db
        sxx += da * da
        syy += db * db
    if const_x or const_y:
        if const_x and const_y and x0 == y0:
            return 1.0
        return 0.0
    prod = sxx * syy
    if prod == 0.0:
        # spread too small to represent: treated as a constant window
        return 0.0
    if math.isinf(prod):
        r = sxy / math.sqrt(sxx) / math.sqrt(syy)
    else:
        r = sxy / math.sqrt(prod)
    if r > 1.0:
        return 1.0
    if r < -1.0:
        return -1.0
    return r


@njit(cache=True, nogil=True)
def _rms(x, ox, y, oy, m):
    s = 0.0
    for t in range(m):
        d = x[ox + t] - y[oy + t]
        s += d * d
    return math.sqrt(s / m)


@njit(cache=True, nogil=True)
def _candidate(x, ox, y, oy, m, eps, C, alpha):
    # y is the tilted side; the Euclidean part ignores the tilt
    corr_part = 1.0 - math.exp(-C * abs(eps)) * _corr(x, ox, y, oy, m, eps)
    return alpha * corr_part + (1.0 - alpha) * _rms(x, ox, y, oy, m)


@njit(cache=True, nogil=True)
def _traveled(x, y, L, E, C, alpha, symmetric):
    T = x.shape[0]
    best = np.inf
    for l in range(L + 1):
        m = T - l
        # direction 0: x backward / y forward; 1: x forward / y backward
        for direction in range(2 if l > 0 else 1):
            if direction == 0:
                ox = l
                oy = 0
            else:
                ox = 0
                oy = l
            for k in range(E.shape[0]):
                eps = E[k]
                v = _candidate(x, ox, y, oy, m, eps, C, alpha)
                if v < best:
                    best = v
                if symmetric:
                    v = _candidate(y, oy, x, ox, m, eps, C, alpha)
                    if v < best:
                        best = v
    return best


@njit(cache=True, nogil=True)
def _fill_rows(X, rows, L, E, C, alpha, symmetric, out):
    n = X.shape[0]
    for r in range(rows.shape[0]):
        i = rows[r]
        for j in range(i + 1, n):
            out[i, j] = _traveled(X[i], X[j], L, E, C, alpha, symmetric)


@njit(cache=True, nogil=True)
def _pair_stats(X):
    # condensed (i<j) plain Euclidean distances and correlation dissimilarities
    n, T = X.shape
    k = 0
    eu = np.empty(n * (n - 1) // 2)
    cd = np.empty(n * (n - 1) // 2)
    for i in range(n):
        for j in range(i + 1, n):
            s = 0.0
            for t in range(T):
                d = X[i, t] - X[j, t]
                s += d * d
            eu[k] = math.sqrt(s)
            cd[k] = 1.0 - _corr(X[i], 0, X[j], 0, T, 0.0)
            k += 1
    return eu, cd


# --------------------------------------------------------------------------
# helpers


def _vec(x) -> np.ndarray:
    if isinstance(x, TimeSeries):
        return x.values
    v = np.ascontiguousarray(x, dtype=np.float64)
    if v.ndim != 1:
        raise ShapeError("expected a 1-D sequence")
    return v


def _pair(x, y, min_len=2):
    a, b = _vec(x), _vec(y)
    if a.size != b.size:
        raise ShapeError(f"length mismatch: {a.size} != {b.size}")
    if a.size < min_len:
        raise ShapeError(f"sequences must have length >= {min_len}")
    return a, b


def as_array(dataset) -> np.ndarray:
    """Stack a dataset (TimeSeries list, list of sequences or 2-D array) into ``n x T``."""
    if isinstance(dataset, np.ndarray):
        X = np.ascontiguousarray(dataset, dtype=np.float64)
        if X.ndim != 2:
            raise ShapeError("dataset array must be 2-D (n x T)")
        return X
    rows = [_vec(s) for s in dataset]
    if not rows:
        return np.empty((0, 0))
    T = rows[0].size
    for i, r in enumerate(rows):
        if r.size != T:
            raise ShapeError(f"series {i} has length {r.size}, expected {T}")
    return np.ascontiguousarray(np.vstack(rows))


def _series_ids(dataset, n):
    if isinstance(dataset, np.ndarray):
        return tuple(str(i) for i in range(n))
    return tuple(s.id if isinstance(s, TimeSeries) else str(i) for i, s in enumerate(dataset))


def _offsets(l, direction):
    if direction == BACKWARD:
        return l, 0
    if direction == FORWARD:
        return 0, l
    raise ValueError(f"direction must be {BACKWARD!r} or {FORWARD!r}, got {direction!r}")


def _check_shift(l, T):
    if int(l) != l or not 0 <= l < T:
        raise InvalidShiftError(f"shift l={l} must satisfy 0 <= l < T={T}")
    return int(l)


# --------------------------------------------------------------------------
# public scalar operations


def shift_tilt(x, l: int, direction: str, eps: float = 0.0) -> np.ndarray:
    """Shift ``x`` by ``l`` steps and add the ramp ``eps * (0, 1, ..., T-l-1)``.

    ``forward`` keeps ``x[:T-l]``, ``backward`` keeps ``x[l:]``. Returns a new
    array of length ``T - l``.
    """
    v = _vec(x)
    l = _check_shift(l, v.size)
    start, _ = _offsets(l, direction)
    m = v.size - l
    return v[start:start + m] + np.arange(m) * float(eps)


def correlation(x, y) -> float:
    """Pearson correlation with the constant-series convention."""
    a, b = _pair(x, y, min_len=1)
    return _corr(a, 0, b, 0, a.size, 0.0)


def pearson_dissim(x, y) -> float:
    """``1 - Corr(x, y)``, in ``[0, 2]``."""
    a, b = _pair(x, y)
    return 1.0 - _corr(a, 0, b, 0, a.size, 0.0)


def weighted_euclidean(x, y) -> float:
    """Root-mean-square difference of two equal-length sequences."""
    a, b = _pair(x, y, min_len=1)
    return _rms(a, 0, b, 0, a.size)


def base_dissim(x, y, l: int, direction: str, eps: float, params: TravelParams) -> float:
    """Blend of penalised correlation and RMS distance at one alignment.

    ``direction`` is the direction applied to ``x``; ``y`` is shifted the
    other way and tilted by ``eps``. The RMS term uses the untilted ``y``.
    """
    a, b = _pair(x, y)
    l = _check_shift(l, a.size)
    ox, oy = _offsets(l, direction)
    return _candidate(a, ox, b, oy, a.size - l, float(eps), float(params.C), float(params.alpha))


def tastic_dissim(x, y, params: TravelParams) -> float:
    """Minimum of :func:`base_dissim` over all shifts ``0..L``, both directions and ``E``."""
    a, b = _pair(x, y)
    params.check_length(a.size)
    E = np.asarray(params.E, dtype=np.float64)
    return _traveled(a, b, params.L, E, float(params.C), float(params.alpha), bool(params.symmetric))


def time_travel_dissim(x, y, L: int, base: str = "euclidean") -> float:
    """Best-lag Euclidean (RMS) or Pearson dissimilarity, no tilt.

    With ``base="pearson"`` this is the cross-correlation dissimilarity.
    """
    if base not in ("euclidean", "pearson"):
        raise ValueError(f"base must be 'euclidean' or 'pearson', got {base!r}")
    a, b = _pair(x, y)
    if int(L) != L or not 0 <= L < a.size:
        raise InvalidShiftError(f"L={L} must satisfy 0 <= L < T={a.size}")
    alpha = 1.0 if base == "pearson" else 0.0
    return _traveled(a, b, int(L), np.zeros(1), 0.0, alpha, False)


def trend_travel_dissim(x, y, E: Iterable[float], C: float = 0.0) -> float:
    """``min over eps in E of 1 - exp(-C|eps|) Corr(x, y + eps * ramp)``."""
    a, b = _pair(x, y)
    E = [float(e) for e in E]
    if 0.0 not in E:
        raise ValueError("E must contain 0")
    return min(1.0 - math.exp(-C * abs(e)) * _corr(a, 0, b, 0, a.size, e) for e in E)


def best_trend_correlation(x, y, E: Iterable[float], symmetric: bool = False) -> float:
    """Largest unpenalised correlation of ``x`` with ``y`` tilted by some ``eps`` in ``E``."""
    a, b = _pair(x, y)
    best = -np.inf
    for e in E:
        best = max(best, _corr(a, 0, b, 0, a.size, float(e)))
        if symmetric:
            best = max(best, _corr(b, 0, a, 0, a.size, float(e)))
    return best


def default_alpha(dataset, p: float = 0.09) -> float:
    """Data-driven correlation weight.

    ``max_eu / (Q_p(1 - Corr) + max_eu)`` where ``max_eu`` is the largest plain
    Euclidean distance between two full series and ``Q_p`` the ``p``-quantile
    (linear interpolation) of all pairwise correlation dissimilarities. A
    dataset of identical series gives 1.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    X = as_array(dataset)
    if X.shape[0] < 2:
        raise InsufficientDataError("default alpha needs at least two series")
    eu, cd = _pair_stats(X)
    max_eu = float(eu.max())
    q = float(np.quantile(cd, p, method="linear"))
    if max_eu + q == 0.0:
        return 1.0
    return max_eu / (q + max_eu)


# --------------------------------------------------------------------------
# pairwise matrix


def measure_params(measure: str, params: TravelParams) -> TravelParams:
    """Map a named measure onto the search space and blend it uses."""
    if measure == "tastic":
        return params
    if measure == "euclidean":
        return params.replace(L=0, E=(0.0,), C=0.0, alpha=0.0)
    if measure == "euclidean+TT":
        return params.replace(E=(0.0,), C=0.0, alpha=0.0)
    if measure == "pearson":
        return params.replace(L=0, E=(0.0,), C=0.0, alpha=1.0)
    if measure == "pearson+TT":
        return params.replace(E=(0.0,), C=0.0, alpha=1.0)
    if measure == "pearson+TT+trendT":
        return params.replace(alpha=1.0)
    raise ValueError(f"unknown measure {measure!r}; choose from {', '.join(MEASURES)}")


def resolve_threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV, "0") or 0) or (os.cpu_count() or 1)
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    return int(threads)


def method_tag(measure: str, params: TravelParams) -> str:
    p = measure_params(measure, params)
    E = ",".join(repr(e) for e in p.E)
    return (f"{measure}(L={p.L};E={{{E}}};C={p.C!r};alpha={p.alpha!r};"
            f"symmetric={p.symmetric})")


def dissim_matrix(
    dataset,
    params: TravelParams | None = None,
    measure: str = "tastic",
    threads: int | None = None,
) -> DissimilarityMatrix:
    """Pairwise dissimilarities over all unordered pairs.

    Rows are dealt round-robin to ``threads`` workers; each upper-triangle cell
    is written by exactly one worker, then mirrored, so the result does not
    depend on the worker count.
    """
    params = params if params is not None else TravelParams()
    X = as_array(dataset)
    n = X.shape[0]
    if n < 2:
        raise InsufficientDataError("need at least two series")
    if X.shape[1] < 2:
        raise ShapeError("series must have length >= 2")
    if not np.all(np.isfinite(X)):
        raise ValueError("dataset contains non-finite values")
    p = measure_params(measure, params)
    p.check_length(X.shape[1])
    E = np.asarray(p.E, dtype=np.float64)
    out = np.zeros((n, n))
    workers = min(resolve_threads(threads), n - 1)
    args = (p.L, E, float(p.C), float(p.alpha), bool(p.symmetric), out)
    if workers == 1:
        _fill_rows(X, np.arange(n - 1), *args)
    else:
        chunks = [np.arange(w, n - 1, workers) for w in range(workers)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda rows: _fill_rows(X, rows, *args), chunks))
    iu = np.triu_indices(n, 1)
    out[iu[1], iu[0]] = out[iu]
    return DissimilarityMatrix(out, method=method_tag(measure, params), ids=_series_ids(dataset, n))
