"""Average-link hierarchical agglomerative clustering over a precomputed
pairwise similarity matrix, plus the two plumbing baselines."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import Clustering

THRESHOLDS = {"tfidf": 0.035, "lda": 0.015, "svm": 0.0, "maxent": 0.45}


def default_threshold(kind: str) -> float:
    """Stopping threshold for each similarity source."""
    try:
        return THRESHOLDS[kind]
    except KeyError:
        raise ValueError(f"unknown similarity kind: {kind!r}") from None


@dataclass
class SimilaritySource:
    """Symmetric pairwise similarities over a meeting's DRDAs, in meeting order."""

    kind: str
    ids: tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self) -> None:
        n = len(self.ids)
        if self.matrix.shape != (n, n):
            raise ValueError("similarity matrix shape does not match item count")
        if n > 1 and not np.allclose(self.matrix, self.matrix.T, atol=1e-9, rtol=0.0):
            raise ValueError("similarity matrix is not symmetric")


def hac_average_link(sim: SimilaritySource, threshold: float) -> Clustering:
    """Merge the cluster pair with maximal average pairwise similarity until
    the best candidate falls below `threshold` (strict) or one cluster is left.

    Average-link similarities are maintained with the Lance-Williams update.
    Ties are broken toward the pair with the smallest member indices.
    """
    ids = sim.ids
    n = len(ids)
    if n == 0:
        raise ValueError("cannot cluster an empty item set")

    s = sim.matrix.astype(float).copy()
    alive = [True] * n
    members: list[set[int]] = [{i} for i in range(n)]
    rep = list(range(n))  # smallest original index in each cluster
    size = [1] * n

    while True:
        best: tuple[int, int] | None = None
        best_sim = -np.inf
        best_key: tuple[int, int] | None = None
        for i in range(n):
            if not alive[i]:
                continue
            for j in range(i + 1, n):
                if not alive[j]:
                    continue
                val = s[i, j]
                key = (min(rep[i], rep[j]), max(rep[i], rep[j]))
                if val > best_sim or (val == best_sim and best_key is not None and key < best_key):
                    best_sim = val
                    best = (i, j)
                    best_key = key
        if best is None or best_sim < threshold:
            break
        i, j = best
        for k in range(n):
            if not alive[k] or k in (i, j):
                continue
            merged = (size[i] * s[i, k] + size[j] * s[j, k]) / (size[i] + size[j])
            s[i, k] = s[k, i] = merged
        members[i] |= members[j]
        size[i] += size[j]
        rep[i] = min(rep[i], rep[j])
        alive[j] = False

    clusters = [
        frozenset(ids[k] for k in members[i])
        for i in sorted((i for i in range(n) if alive[i]), key=lambda i: rep[i])
    ]
    return Clustering(clusters=tuple(clusters), universe=frozenset(ids))


def baseline_all_in_one(items: Sequence[str]) -> Clustering:
    """Every item in a single cluster."""
    if not items:
        raise ValueError("cannot cluster an empty item set")
    return Clustering.from_lists([list(items)])


def baseline_contiguous(items: Sequence[str], k: int) -> Clustering:
    """k contiguous segments of the time-ordered items, sizes differing by <= 1."""
    n = len(items)
    if not 1 <= k <= n:
        raise ValueError(f"segment count {k} out of range for {n} items")
    base, extra = divmod(n, k)
    clusters = []
    start = 0
    for i in range(k):
        step = base + (1 if i < extra else 0)
        clusters.append(list(items[start : start + step]))
        start += step
    return Clustering.from_lists(clusters)
