from __future__ import annotations

import random

from decisum.corpus import Clustering


def random_partition(rng: random.Random, n_items: int, label: str = "x") -> list[set[str]]:
    """A random partition of n_items labelled items with no empty cluster."""
    items = [f"{label}{i}" for i in range(n_items)]
    k = rng.randint(1, n_items)
    clusters: list[set[str]] = [set() for _ in range(k)]
    for pos, item in enumerate(items):
        if pos < k:
            clusters[pos].add(item)
        else:
            clusters[rng.randrange(k)].add(item)
    return [c for c in clusters if c]


def as_clustering(clusters: list[set[str]]) -> Clustering:
    return Clustering.from_lists(clusters)
