"""Naive-Bayes log-count ratios and bag-of-concepts document features."""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import LengthMismatch, SingleClass


@dataclass
class LogCountRatio:
    """Per-n-gram discriminativeness r with smoothed class counts p, q."""

    r: np.ndarray
    p: np.ndarray
    q: np.ndarray


def log_count_ratio(counts: sp.spmatrix, labels) -> LogCountRatio:
    """r = log((p/|p|_1) / (q/|q|_1)) with p, q the +1-smoothed class counts.

    ``counts`` holds one row per training document; ``labels`` is the aligned
    vector of +1/-1. Natural logarithm.
    """
    labels = np.asarray(labels)
    counts = sp.csr_matrix(counts)
    if counts.shape[0] != len(labels):
        raise LengthMismatch(f"{counts.shape[0]} rows vs {len(labels)} labels")
    pos = labels == 1
    neg = labels == -1
    if not pos.any() or not neg.any():
        raise SingleClass("training labels must contain both +1 and -1")
    p = 1.0 + np.asarray(counts[pos].sum(axis=0)).ravel()
    q = 1.0 + np.asarray(counts[neg].sum(axis=0)).ravel()
    r = np.log(p / p.sum()) - np.log(q / q.sum())
    return LogCountRatio(r=r, p=p, q=q)


def concept_features_nb(
    counts: sp.spmatrix, assignment: np.ndarray, ratio: LogCountRatio, K: int
) -> np.ndarray:
    """Per-cluster signed log-count ratio of maximal magnitude.

    Entry (i, k) is the r_t with the largest |r_t| over the cluster-k n-grams
    present in document i, 0 when none is present. Ties on |r_t| break toward
    the smallest n-gram index.
    """
    counts = sp.csr_matrix(counts)
    n = counts.shape[1]
    assignment = np.asarray(assignment)
    if len(assignment) != n or len(ratio.r) != n:
        raise LengthMismatch(
            f"counts have {n} columns, assignment {len(assignment)}, r {len(ratio.r)}"
        )
    coo = counts.tocoo()
    docs, grams = coo.row, coo.col
    clusters = assignment[grams]
    # sort by (doc, cluster, |r| desc, gram asc); first entry of each group wins
    order = np.lexsort((grams, -np.abs(ratio.r[grams]), clusters, docs))
    docs, grams, clusters = docs[order], grams[order], clusters[order]
    out = np.zeros((counts.shape[0], K))
    if len(docs):
        group_start = np.ones(len(docs), dtype=bool)
        group_start[1:] = (docs[1:] != docs[:-1]) | (clusters[1:] != clusters[:-1])
        sel = np.flatnonzero(group_start)
        out[docs[sel], clusters[sel]] = ratio.r[grams[sel]]
    return out


def concept_features_freq(counts: sp.spmatrix, assignment: np.ndarray, K: int) -> np.ndarray:
    """Entry (i, k) sums the document's occurrence counts over cluster k."""
    counts = sp.csr_matrix(counts)
    assignment = np.asarray(assignment)
    if len(assignment) != counts.shape[1]:
        raise LengthMismatch(
            f"counts have {counts.shape[1]} columns, assignment {len(assignment)}"
        )
    onehot = sp.csr_matrix(
        (np.ones(len(assignment)), (np.arange(len(assignment)), assignment)),
        shape=(len(assignment), K),
    )
    return np.asarray((counts @ onehot).todense(), dtype=np.float64)


def bow_nb_features(counts: sp.spmatrix, ratio: LogCountRatio) -> sp.csr_matrix:
    """Presence-binarized counts scaled per column by r (the NBSVM featurizer)."""
    counts = sp.csr_matrix(counts)
    if counts.shape[1] != len(ratio.r):
        raise LengthMismatch(
            f"counts have {counts.shape[1]} columns, r has {len(ratio.r)}"
        )
    binary = counts.copy()
    binary.data = np.ones_like(binary.data, dtype=np.float64)
    out = binary @ sp.diags(ratio.r)
    return sp.csr_matrix(out)


def export_svmlight(features, labels, path) -> None:
    """Write "<label> <index>:<value> ..." lines with 1-based ascending indices."""
    mat = sp.csr_matrix(features)
    labels = np.asarray(labels)
    if mat.shape[0] != len(labels):
        raise LengthMismatch(f"{mat.shape[0]} rows vs {len(labels)} labels")
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(mat.shape[0]):
            row = mat.getrow(i)
            cols = row.indices
            order = np.argsort(cols)
            parts = [f"{int(labels[i]):+d}"]
            parts += [f"{cols[j] + 1}:{float(row.data[j])!r}" for j in order]
            fh.write(" ".join(parts) + "\n")


def load_svmlight(path) -> tuple[sp.csr_matrix, np.ndarray]:
    """Read the format written by export_svmlight. Width is the max seen index."""
    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    labels: list[int] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            labels.append(int(parts[0]))
            for item in parts[1:]:
                idx, val = item.split(":")
                indices.append(int(idx) - 1)
                data.append(float(val))
            indptr.append(len(indices))
    width = max(indices) + 1 if indices else 0
    mat = sp.csr_matrix(
        (np.array(data), np.array(indices, dtype=np.int64), indptr),
        shape=(len(labels), width),
    )
    return mat, np.array(labels, dtype=np.int64)
