"""Per-cluster decision summaries: longest/prototype DA selection, supervised
DA- and token-level extraction with training labels, discourse context
augmentation, and the vocabulary-overlap upper bound."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .corpus import Clustering, DecisionAbstract, DialogueAct, Meeting
from .features import FeatureExtractor
from .learn import LinearModel, decision_value, predict_prob
from .textproc import centroid, content_words, cosine, stem, tokenize


@dataclass(frozen=True)
class DecisionCluster:
    """A set of DRDAs supporting one decision, plus optional non-decision
    context DAs used for training only. Summary words never come from context."""

    core: frozenset[str]
    context: tuple[str, ...] = ()
    aligned_decision: str | None = None

    def __post_init__(self) -> None:
        if not self.core:
            raise ValueError("decision cluster core must be non-empty")
        if self.core & set(self.context):
            raise ValueError("core and context DAs overlap")


@dataclass(frozen=True)
class DecisionSummary:
    cluster: DecisionCluster
    level: str  # "da" | "token"
    selected: tuple[str, ...]  # DA ids (da level) or token surfaces (token level)
    text: str


def _core_das(cluster: DecisionCluster, meeting: Meeting) -> list[DialogueAct]:
    return sorted((meeting.da(i) for i in cluster.core), key=lambda d: d.index)


def _da_render(extractor: FeatureExtractor, da_id: str) -> str:
    return " ".join(extractor.content_tokens(da_id))


def abstract_content_stems(
    abstract: DecisionAbstract, stopwords: frozenset[str] | None = None
) -> frozenset[str]:
    return frozenset(stem(t) for t in content_words(tokenize(abstract.text), stopwords))


def _abstract_stems(extractor: FeatureExtractor, abstract: DecisionAbstract) -> frozenset[str]:
    return abstract_content_stems(abstract, extractor.config.stopwords)


def longest_da(
    cluster: DecisionCluster, meeting: Meeting, extractor: FeatureExtractor
) -> DecisionSummary:
    """The core DA with the most content words; ties go to the earliest."""
    das = _core_das(cluster, meeting)
    best = max(das, key=lambda d: (len(extractor.content_tokens(d.id)), -d.start_time, -d.index))
    return DecisionSummary(
        cluster=cluster, level="da", selected=(best.id,), text=_da_render(extractor, best.id)
    )


def prototype_da(
    cluster: DecisionCluster, meeting: Meeting, extractor: FeatureExtractor
) -> DecisionSummary:
    """The core DA closest (TF-IDF cosine) to the centroid of the core."""
    das = _core_das(cluster, meeting)
    center = centroid([extractor.vector(d.id) for d in das])
    best = max(das, key=lambda d: (cosine(extractor.vector(d.id), center), -d.start_time, -d.index))
    return DecisionSummary(
        cluster=cluster, level="da", selected=(best.id,), text=_da_render(extractor, best.id)
    )


def label_das_for_training(
    cluster: DecisionCluster,
    meeting: Meeting,
    abstract: DecisionAbstract,
    extractor: FeatureExtractor,
) -> dict[str, bool]:
    """Positive label on the single core DA with the largest stemmed
    content-word overlap with the abstract (ties and all-zero overlaps go to
    the earliest core DA); every other core and context DA is negative."""
    if cluster.aligned_decision is None:
        raise ValueError("training labels need a cluster aligned to a decision")
    target = _abstract_stems(extractor, abstract)
    das = _core_das(cluster, meeting)
    best = max(das, key=lambda d: (len(extractor.stem_set(d.id) & target), -d.start_time, -d.index))
    labels = {d.id: d.id == best.id for d in das}
    labels.update({c: False for c in cluster.context})
    return labels


def extract_das(
    model: LinearModel,
    cluster: DecisionCluster,
    meeting: Meeting,
    extractor: FeatureExtractor,
) -> DecisionSummary:
    """Keep core DAs the classifier scores positive (SVM margin > 0, MaxEnt
    probability > 0.5); if none qualifies, keep the best-scoring one. The
    selected DAs' content words are joined in time order."""
    das = _core_das(cluster, meeting)
    scores = {d.id: _score(model, extractor.da(d.id)) for d in das}
    selected = [d for d in das if scores[d.id] > _positive_cut(model)]
    if not selected:
        selected = [max(das, key=lambda d: (scores[d.id], -d.start_time, -d.index))]
    fragments = [_da_render(extractor, d.id) for d in selected]
    return DecisionSummary(
        cluster=cluster,
        level="da",
        selected=tuple(d.id for d in selected),
        text=", ".join(fragments),
    )


def _score(model: LinearModel, features: dict[str, float]) -> float:
    if model.kind == "svm":
        return decision_value(model, features)
    return predict_prob(model, features)


def _positive_cut(model: LinearModel) -> float:
    return 0.0 if model.kind == "svm" else 0.5


def label_tokens_for_training(
    cluster: DecisionCluster,
    meeting: Meeting,
    abstract: DecisionAbstract,
    extractor: FeatureExtractor,
) -> list[tuple[str, int, bool]]:
    """(da_id, content token index, label) for every content token of the
    cluster. A core token is positive iff its stem occurs in the abstract's
    content stems; context tokens are always negative."""
    if cluster.aligned_decision is None:
        raise ValueError("training labels need a cluster aligned to a decision")
    target = _abstract_stems(extractor, abstract)
    rows: list[tuple[str, int, bool]] = []
    for da in _core_das(cluster, meeting):
        for i, _surface, s in extractor.iter_content_tokens(da.id):
            rows.append((da.id, i, s in target))
    for ctx in cluster.context:
        for i, _surface, _s in extractor.iter_content_tokens(ctx):
            rows.append((ctx, i, False))
    return rows


def extract_tokens(
    model: LinearModel,
    cluster: DecisionCluster,
    meeting: Meeting,
    extractor: FeatureExtractor,
) -> DecisionSummary:
    """Keep positively classified content tokens of core DAs in original
    order; duplicates (by stem) collapse to the first occurrence."""
    seen: set[str] = set()
    surfaces: list[str] = []
    for da in _core_das(cluster, meeting):
        for i, surface, s in extractor.iter_content_tokens(da.id):
            if s in seen:
                continue
            if _score(model, extractor.token(da.id, i)) > _positive_cut(model):
                seen.add(s)
                surfaces.append(surface)
    return DecisionSummary(
        cluster=cluster, level="token", selected=tuple(surfaces), text=" ".join(surfaces)
    )


def add_context(
    cluster: DecisionCluster,
    meeting: Meeting,
    extractor: FeatureExtractor,
    n: int = 20,
) -> DecisionCluster:
    """Attach the n non-decision DAs with highest cosine to the core centroid,
    in descending similarity order."""
    if n < 0:
        raise ValueError("context size must be >= 0")
    if n == 0:
        return cluster
    center = centroid([extractor.vector(i) for i in sorted(cluster.core)])
    ranked = sorted(
        (d for d in meeting.das if not d.is_drda),
        key=lambda d: (-cosine(extractor.vector(d.id), center), d.index),
    )
    return replace(cluster, context=tuple(d.id for d in ranked[:n]))


def upper_bound_summary(
    cluster: DecisionCluster,
    meeting: Meeting,
    abstract: DecisionAbstract,
    extractor: FeatureExtractor,
) -> DecisionSummary:
    """All core-DA content words whose stem occurs in the abstract, first
    occurrence only, in original order."""
    if cluster.aligned_decision is None:
        raise ValueError("the upper bound needs a cluster aligned to a decision")
    target = _abstract_stems(extractor, abstract)
    seen: set[str] = set()
    surfaces: list[str] = []
    for da in _core_das(cluster, meeting):
        for _i, surface, s in extractor.iter_content_tokens(da.id):
            if s in target and s not in seen:
                seen.add(s)
                surfaces.append(surface)
    return DecisionSummary(
        cluster=cluster, level="token", selected=tuple(surfaces), text=" ".join(surfaces)
    )


def align_clusters_to_decisions(
    clustering: Clustering, meeting: Meeting
) -> list[str | None]:
    """Map each system cluster to the decision holding the plurality of its
    DAs' gold links; ties go to the smallest decision id."""
    out: list[str | None] = []
    for cluster in clustering.clusters:
        votes: dict[str, int] = {}
        for da_id in cluster:
            for dec in meeting.da(da_id).decisions:
                votes[dec] = votes.get(dec, 0) + 1
        if not votes:
            out.append(None)
            continue
        out.append(min(votes, key=lambda d: (-votes[d], d)))
    return out
