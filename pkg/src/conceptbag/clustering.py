"""K-means partitioning of n-gram vectors into semantic concepts."""

import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, TooFewPoints

_MAGIC = b"CBGC"
_VERSION = 1


@dataclass
class KMeansConfig:
    K: int = 300
    iterations: int = 10
    variant: str = "lloyd"  # or "minibatch"
    batch_size: int = 1024
    init: str = "kmeanspp"  # or "random_points"
    seed: int = 0


@dataclass
class Centroids:
    """K x m centroid matrix plus the seed that produced it."""

    matrix: np.ndarray
    seed: int = 0

    @property
    def K(self) -> int:
        return self.matrix.shape[0]

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]


@dataclass
class KMeansResult:
    centroids: Centroids
    labels: np.ndarray
    inertia: float
    inertia_trace: list[float] = field(default_factory=list)


def _pairwise_sq_dists(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    # expansion form; cheap for K in the hundreds, clipped against rounding
    d = X @ C.T
    d *= -2.0
    d += (X * X).sum(axis=1)[:, None]
    d += (C * C).sum(axis=1)[None, :]
    np.maximum(d, 0.0, out=d)
    return d


def _assign_all(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    labels = np.empty(X.shape[0], dtype=np.int64)
    step = max(1, int(2e7 // max(1, C.shape[0])))
    for lo in range(0, X.shape[0], step):
        chunk = X[lo : lo + step]
        labels[lo : lo + step] = np.argmin(_pairwise_sq_dists(chunk, C), axis=1)
    return labels


def _kmeanspp_init(X: np.ndarray, K: int, rng) -> np.ndarray:
    n = X.shape[0]
    centers = np.empty((K, X.shape[1]))
    first = rng.integers(n)
    centers[0] = X[first]
    closest = ((X - centers[0]) ** 2).sum(axis=1)
    for k in range(1, K):
        total = closest.sum()
        if total <= 0:
            idx = rng.integers(n)
        else:
            idx = int(np.searchsorted(np.cumsum(closest), rng.random() * total))
            idx = min(idx, n - 1)
        centers[k] = X[idx]
        closest = np.minimum(closest, ((X - centers[k]) ** 2).sum(axis=1))
    return centers


def _init_centers(X: np.ndarray, config: KMeansConfig, rng) -> np.ndarray:
    if config.init == "kmeanspp":
        return _kmeanspp_init(X, config.K, rng)
    if config.init == "random_points":
        idx = rng.choice(X.shape[0], size=config.K, replace=False)
        return X[idx].copy()
    raise ValueError(f"unknown init {config.init!r}")


def inertia(X: np.ndarray, centroids: Centroids) -> float:
    """Sum of squared distances from each row of X to its nearest centroid."""
    C = centroids.matrix
    if X.shape[1] != C.shape[1]:
        raise DimensionMismatch(f"points have dim {X.shape[1]}, centroids {C.shape[1]}")
    total = 0.0
    step = max(1, int(2e7 // max(1, C.shape[0])))
    for lo in range(0, X.shape[0], step):
        chunk = X[lo : lo + step]
        d = _pairwise_sq_dists(chunk, C)
        total += d.min(axis=1).sum()
    return float(total)


def assign(x: np.ndarray, centroids: Centroids) -> int:
    """Nearest-centroid index for a single vector; ties go to the smallest index."""
    x = np.asarray(x, dtype=np.float64)
    C = centroids.matrix
    if x.shape != (C.shape[1],):
        raise DimensionMismatch(f"query has shape {x.shape}, centroids are {C.shape}")
    d = ((C - x) ** 2).sum(axis=1)
    return int(np.argmin(d))


def kmeans_fit(X: np.ndarray, config: KMeansConfig) -> KMeansResult:
    """Lloyd's algorithm for a fixed number of iterations.

    Empty clusters are re-seeded at the point currently farthest from its
    assigned centroid. Deterministic for a given config.seed.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.shape[0] < config.K:
        raise TooFewPoints(f"{X.shape[0]} points for K={config.K}")
    rng = np.random.default_rng(config.seed)
    centers = _init_centers(X, config, rng)
    trace = []
    for _ in range(config.iterations):
        labels = _assign_all(X, centers)
        labels = _fix_empty_clusters(X, centers, labels, config.K)
        for k in range(config.K):
            members = X[labels == k]
            if len(members):
                centers[k] = members.mean(axis=0)
        trace.append(inertia(X, Centroids(centers, config.seed)))
    labels = _assign_all(X, centers)
    result = Centroids(matrix=centers, seed=config.seed)
    return KMeansResult(result, labels, inertia(X, result), trace)


def _fix_empty_clusters(X, centers, labels, K):
    counts = np.bincount(labels, minlength=K)
    for k in np.flatnonzero(counts == 0):
        dists = ((X - centers[labels]) ** 2).sum(axis=1)
        worst = int(np.argmax(dists))
        centers[k] = X[worst]
        labels[worst] = k
        counts = np.bincount(labels, minlength=K)
    return labels


def minibatch_kmeans_fit(X: np.ndarray, config: KMeansConfig) -> KMeansResult:
    """Mini-batch K-means with per-centroid learning rates.

    Each iteration samples batch_size points; a point assigned to centroid k
    moves it by (x - c) / n_k where n_k counts all points ever assigned to k.
    Labels come from one full assignment pass at the end.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.shape[0] < config.K:
        raise TooFewPoints(f"{X.shape[0]} points for K={config.K}")
    if config.batch_size > X.shape[0]:
        raise ValueError("batch_size exceeds the number of points")
    rng = np.random.default_rng(config.seed)
    centers = _init_centers(X, config, rng)
    counts = np.zeros(config.K, dtype=np.int64)
    for _ in range(config.iterations):
        if config.batch_size == X.shape[0]:
            batch = np.arange(X.shape[0])
        else:
            batch = rng.choice(X.shape[0], size=config.batch_size, replace=False)
        batch_labels = _assign_all(X[batch], centers)
        for idx, k in zip(batch, batch_labels):
            counts[k] += 1
            centers[k] += (X[idx] - centers[k]) / counts[k]
    labels = _assign_all(X, centers)
    result = Centroids(matrix=centers, seed=config.seed)
    return KMeansResult(result, labels, inertia(X, result))


def save_centroids(centroids: Centroids, path) -> None:
    """Versioned binary format: magic, version, K, m, seed, row-major float64."""
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<iiiq", _VERSION, centroids.K, centroids.dim, centroids.seed))
        fh.write(np.ascontiguousarray(centroids.matrix, dtype=np.float64).tobytes())


def load_centroids(path) -> Centroids:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _MAGIC:
            raise ValueError(f"{path}: not a centroid file (magic {magic!r})")
        version, K, m, seed = struct.unpack("<iiiq", fh.read(20))
        if version != _VERSION:
            raise ValueError(f"{path}: unsupported centroid file version {version}")
        matrix = np.frombuffer(fh.read(8 * K * m), dtype=np.float64).reshape(K, m).copy()
    return Centroids(matrix=matrix, seed=seed)


def export_centroids_text(centroids: Centroids, path) -> None:
    """Text mirror of the embedding format for inspection; rows named c<k>."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{centroids.K} {centroids.dim}\n")
        for k in range(centroids.K):
            row = " ".join(repr(float(v)) for v in centroids.matrix[k])
            fh.write(f"c{k} {row}\n")
