"""Clustering scorers (B-cubed, pairwise, variation of information) and
ROUGE-1 summary scoring."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .corpus import Clustering
from .textproc import stem


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float
    f1: float

    @staticmethod
    def from_pr(precision: float, recall: float) -> "PRF":
        denom = precision + recall
        f1 = 0.0 if denom == 0.0 else 2.0 * precision * recall / denom
        return PRF(precision=precision, recall=recall, f1=f1)

    def as_dict(self) -> dict[str, float]:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1}


def _check_universe(system: Clustering, gold: Clustering) -> None:
    if system.universe != gold.universe:
        raise ValueError("system and gold clusterings cover different item sets")


def bcubed(system: Clustering, gold: Clustering) -> PRF:
    """Item-averaged precision/recall of cluster agreement."""
    _check_universe(system, gold)
    sys_of = system.cluster_of()
    gold_of = gold.cluster_of()
    p_sum = 0.0
    r_sum = 0.0
    # sorted so the accumulation order (and thus the last ulp) is stable
    # across processes regardless of string-hash randomization
    for item in sorted(system.universe):
        overlap = len(sys_of[item] & gold_of[item])
        p_sum += overlap / len(sys_of[item])
        r_sum += overlap / len(gold_of[item])
    n = len(system.universe)
    return PRF.from_pr(p_sum / n, r_sum / n)


def _co_clustered_pairs(clustering: Clustering) -> set[frozenset[str]]:
    pairs: set[frozenset[str]] = set()
    for cluster in clustering.clusters:
        members = sorted(cluster)
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                pairs.add(frozenset((members[i], members[j])))
    return pairs


def pairwise_score(system: Clustering, gold: Clustering) -> PRF:
    """Precision/recall over co-clustering decisions for all unordered pairs.

    An empty side is scored vacuously: with no predicted positives precision
    is 1, with no gold positives recall is 1 (so identical partitions always
    score (1, 1, 1), and a single-cluster system always has recall 1).
    """
    _check_universe(system, gold)
    if len(system.universe) < 2:
        raise ValueError("pairwise scoring needs at least two items")
    predicted = _co_clustered_pairs(system)
    actual = _co_clustered_pairs(gold)
    correct = len(predicted & actual)
    precision = correct / len(predicted) if predicted else 1.0
    recall = correct / len(actual) if actual else 1.0
    return PRF.from_pr(precision, recall)


def voi(system: Clustering, gold: Clustering, base: float = math.e) -> float:
    """Variation of information H(system|gold) + H(gold|system); lower is better."""
    _check_universe(system, gold)
    n = len(system.universe)
    if n == 0:
        return 0.0
    log = math.log
    result = 0.0
    for cs in system.clusters:
        for cg in gold.clusters:
            joint = len(cs & cg)
            if joint == 0:
                continue
            r = joint / n
            # r * [log(|cs|/joint) + log(|cg|/joint)] accumulates both
            # conditional entropies.
            result += r * (log(len(cs) / joint, base) + log(len(cg) / joint, base))
    return result


def rouge1(
    system_tokens: Sequence[str],
    reference_tokens: Sequence[str],
    use_stem: bool = False,
) -> PRF:
    """Unigram-overlap PRF with clipped counts; optionally stem both sides."""
    if not reference_tokens:
        raise ValueError("ROUGE reference must be non-empty")
    sys_toks = [stem(t) for t in system_tokens] if use_stem else list(system_tokens)
    ref_toks = [stem(t) for t in reference_tokens] if use_stem else list(reference_tokens)
    sys_counts = Counter(sys_toks)
    ref_counts = Counter(ref_toks)
    match = sum(min(c, ref_counts[t]) for t, c in sys_counts.items())
    precision = match / len(sys_toks) if sys_toks else 0.0
    recall = match / len(ref_toks)
    return PRF.from_pr(precision, recall)


def aggregate(entries: Sequence[PRF]) -> PRF:
    """Macro-average precision and recall; F1 recomputed from the averages."""
    if not entries:
        raise ValueError("cannot aggregate an empty result list")
    p = sum(e.precision for e in entries) / len(entries)
    r = sum(e.recall for e in entries) / len(entries)
    return PRF.from_pr(p, r)


def mean_f1(entries: Sequence[PRF]) -> float:
    if not entries:
        raise ValueError("cannot aggregate an empty result list")
    return sum(e.f1 for e in entries) / len(entries)
