"""Orchestration: fold training, similarity matrices, system clusterings,
per-decision summaries, and the cross-validation report."""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, field

import numpy as np

from .cluster import SimilaritySource, baseline_all_in_one, baseline_contiguous, hac_average_link
from .config import PipelineConfig
from .corpus import Clustering, Meeting, gold_clustering, kfold_split
from .features import FeatureConfig, FeatureExtractor
from .learn import (
    Example,
    LinearModel,
    balanced_pos_weight,
    train_maxent,
    train_svm,
)
from .metrics import PRF, aggregate, bcubed, mean_f1, pairwise_score, rouge1, voi
from .summarize import (
    DecisionCluster,
    DecisionSummary,
    abstract_content_stems,
    add_context,
    align_clusters_to_decisions,
    extract_das,
    extract_tokens,
    label_das_for_training,
    label_tokens_for_training,
    longest_da,
    prototype_da,
    upper_bound_summary,
)
from .textproc import (
    Vectorizer,
    content_words,
    fit_vectorizer,
    load_stopwords,
    stem,
    tokenize,
)
from .topics import LdaModel, fold_in, train_lda

CLUSTER_METHODS = ("all_in_one", "contiguous", "tfidf", "lda", "svm", "maxent")
UNSUP_SOURCES = ("true", "system_lda", "system_svm", "no_clustering")
SUP_ROWS = ("da", "token", "da_context", "token_context")


def _fold_seed(seed: int, salt: str) -> int:
    return (seed * 2654435761 + zlib.crc32(salt.encode("utf-8"))) % (2**31 - 1)


@dataclass
class FoldModels:
    vectorizer: Vectorizer
    feature_config: FeatureConfig
    lda: LdaModel | None = None
    pair_svm: LinearModel | None = None
    pair_maxent: LinearModel | None = None
    da_plain: LinearModel | None = None
    da_context: LinearModel | None = None
    token_plain: LinearModel | None = None
    token_context: LinearModel | None = None
    _extractors: dict[str, FeatureExtractor] = field(default_factory=dict, repr=False)

    def extractor(self, meeting: Meeting) -> FeatureExtractor:
        ex = self._extractors.get(meeting.id)
        if ex is None:
            ex = FeatureExtractor(meeting, self.vectorizer, self.feature_config)
            self._extractors[meeting.id] = ex
        return ex


def feature_config_from(cfg: PipelineConfig) -> FeatureConfig:
    stops = None
    if cfg.stopwords_path is not None:
        stops = load_stopwords(cfg.stopwords_path)
    return FeatureConfig(
        feedback_lexicon=frozenset(cfg.feedback_lexicon),
        wrapup_terms=tuple(cfg.wrapup_terms),
        edge_fraction=cfg.edge_fraction,
        pairwise_context_das=cfg.pairwise_context_das,
        stopwords=stops,
    )


def drda_documents(meetings: list[Meeting], fcfg: FeatureConfig) -> tuple[list[list[str]], list[str]]:
    docs: list[list[str]] = []
    ids: list[str] = []
    for m in meetings:
        for da in m.drdas():
            docs.append(content_words(tokenize(da.text), fcfg.stopwords))
            ids.append(da.id)
    return docs, ids


def gold_decision_clusters(meeting: Meeting) -> list[DecisionCluster]:
    by_decision: dict[str, set[str]] = {}
    for da in meeting.drdas():
        by_decision.setdefault(min(da.decisions), set()).add(da.id)
    return [
        DecisionCluster(core=frozenset(by_decision[d]), aligned_decision=d)
        for d in sorted(by_decision)
    ]


# ---------------------------------------------------------------------------
# Fold training
# ---------------------------------------------------------------------------


def fit_fold(
    meetings: list[Meeting],
    cfg: PipelineConfig,
    seed: int,
    train_pairwise: bool = True,
    train_extractors: bool = True,
    train_topics: bool = True,
) -> FoldModels:
    fcfg = feature_config_from(cfg)
    docs, _ = drda_documents(meetings, fcfg)
    if not docs:
        raise ValueError("training meetings contain no decision-related DAs")
    vectorizer = fit_vectorizer(docs, smooth=cfg.lda.smooth_idf)
    models = FoldModels(vectorizer=vectorizer, feature_config=fcfg)

    trainable = [d for d in docs if d] if train_topics else []
    if trainable:
        lda, _thetas = train_lda(
            trainable,
            k=cfg.lda.topics,
            alpha=cfg.lda.resolved_alpha(),
            beta=cfg.lda.beta,
            iterations=cfg.lda.iterations,
            seed=_fold_seed(seed, "lda"),
            average_last=cfg.lda.average_last,
        )
        models.lda = lda

    if train_pairwise:
        examples = pairwise_training_examples(meetings, models)
        pw = balanced_pos_weight(examples) if cfg.trainer.balance_positives else 1.0
        models.pair_svm = train_svm(
            examples,
            lam=cfg.trainer.svm_lambda,
            epochs=cfg.trainer.svm_epochs,
            seed=_fold_seed(seed, "pair_svm"),
            pos_weight=pw,
        )
        models.pair_maxent = train_maxent(
            examples,
            l2=cfg.trainer.maxent_l2,
            epochs=cfg.trainer.maxent_epochs,
            seed=_fold_seed(seed, "pair_maxent"),
            pos_weight=pw,
        )

    if train_extractors:
        models.da_plain = train_extraction_model(meetings, models, cfg, seed, "da", context=False)
        models.da_context = train_extraction_model(meetings, models, cfg, seed, "da", context=True)
        models.token_plain = train_extraction_model(meetings, models, cfg, seed, "token", context=False)
        models.token_context = train_extraction_model(meetings, models, cfg, seed, "token", context=True)
    return models


def pairwise_training_examples(meetings: list[Meeting], models: FoldModels) -> list[Example]:
    examples: list[Example] = []
    for m in meetings:
        drdas = m.drdas()
        if len(drdas) < 2:
            continue
        ex = models.extractor(m)
        same = gold_clustering(m).cluster_of()
        for i in range(len(drdas)):
            for j in range(i + 1, len(drdas)):
                a, b = drdas[i], drdas[j]
                label = 1 if same[a.id] == same[b.id] else 0
                examples.append((ex.pairwise(a.id, b.id), label))
    return examples


def train_extraction_model(
    meetings: list[Meeting],
    models: FoldModels,
    cfg: PipelineConfig,
    seed: int,
    level: str,
    context: bool,
) -> LinearModel:
    examples: list[Example] = []
    for m in meetings:
        ex = models.extractor(m)
        for cluster in gold_decision_clusters(m):
            abstract = m.abstract(cluster.aligned_decision)
            if cfg.drop_zero_overlap_clusters:
                target = abstract_content_stems(abstract, models.feature_config.stopwords)
                if all(not (ex.stem_set(i) & target) for i in cluster.core):
                    continue
            if context:
                cluster = add_context(cluster, m, ex, n=cfg.context_das)
            if level == "da":
                labels = label_das_for_training(cluster, m, abstract, ex)
                for da_id, label in labels.items():
                    examples.append((ex.da(da_id), 1 if label else 0))
            else:
                for da_id, tok_idx, label in label_tokens_for_training(cluster, m, abstract, ex):
                    examples.append((ex.token(da_id, tok_idx), 1 if label else 0))
    pw = balanced_pos_weight(examples) if cfg.trainer.balance_positives else 1.0
    salt = f"{level}_{'ctx' if context else 'plain'}"
    if cfg.summarizer_learner == "maxent":
        return train_maxent(
            examples,
            l2=cfg.trainer.maxent_l2,
            epochs=cfg.trainer.maxent_epochs,
            seed=_fold_seed(seed, salt),
            pos_weight=pw,
        )
    return train_svm(
        examples,
        lam=cfg.trainer.svm_lambda,
        epochs=cfg.trainer.svm_epochs,
        seed=_fold_seed(seed, salt),
        pos_weight=pw,
    )


# ---------------------------------------------------------------------------
# Similarities and system clusterings
# ---------------------------------------------------------------------------


def similarity_source(
    meeting: Meeting,
    kind: str,
    models: FoldModels,
    cfg: PipelineConfig,
    seed: int,
    pair_model: LinearModel | None = None,
) -> SimilaritySource:
    drdas = meeting.drdas()
    ids = tuple(d.id for d in drdas)
    n = len(ids)
    ex = models.extractor(meeting)
    matrix = np.zeros((n, n))
    if kind == "tfidf":
        vecs = [ex.vector(i) for i in ids]
        from .textproc import cosine

        for i in range(n):
            for j in range(i + 1, n):
                matrix[i, j] = matrix[j, i] = cosine(vecs[i], vecs[j])
    elif kind == "lda":
        if models.lda is None:
            raise ValueError("no LDA model available for this corpus")
        docs = [content_words(tokenize(d.text), models.feature_config.stopwords) for d in drdas]
        thetas = fold_in(
            models.lda,
            docs,
            seed=_fold_seed(seed, f"foldin:{meeting.id}"),
            sweeps=cfg.lda.foldin_sweeps,
            doc_keys=list(ids),
        )
        matrix = thetas @ thetas.T
        np.fill_diagonal(matrix, 0.0)
    elif kind in ("svm", "maxent"):
        model = pair_model if pair_model is not None else (
            models.pair_svm if kind == "svm" else models.pair_maxent
        )
        if model is None:
            raise ValueError(f"no trained pairwise {kind} model available")
        from .learn import decision_value, predict_prob

        score = decision_value if model.kind == "svm" else predict_prob
        for i in range(n):
            for j in range(i + 1, n):
                matrix[i, j] = matrix[j, i] = score(model, ex.pairwise(ids[i], ids[j]))
    else:
        raise ValueError(f"unknown similarity kind: {kind!r}")
    return SimilaritySource(kind=kind, ids=ids, matrix=matrix)


def system_clustering(
    meeting: Meeting,
    method: str,
    models: FoldModels,
    cfg: PipelineConfig,
    seed: int,
    threshold: float | None = None,
    pair_model: LinearModel | None = None,
) -> Clustering:
    drdas = meeting.drdas()
    ids = [d.id for d in drdas]
    if method == "all_in_one":
        return baseline_all_in_one(ids)
    if method == "contiguous":
        k = cfg.contiguous_segments or max(1, round(math.sqrt(len(ids))))
        return baseline_contiguous(ids, min(k, len(ids)))
    sim = similarity_source(meeting, method, models, cfg, seed, pair_model=pair_model)
    cut = cfg.thresholds[method] if threshold is None else threshold
    return hac_average_link(sim, cut)


def clustering_as_dict(meeting: Meeting, method: str, threshold: float | None, clustering: Clustering) -> dict:
    index = {da.id: da.index for da in meeting.das}
    clusters = sorted(
        (sorted(c, key=lambda i: index[i]) for c in clustering.clusters),
        key=lambda c: index[c[0]],
    )
    return {
        "meeting_id": meeting.id,
        "method": method,
        "threshold": threshold,
        "clusters": clusters,
    }


def clustering_from_dict(obj: dict) -> tuple[str, Clustering]:
    return obj["meeting_id"], Clustering.from_lists(obj["clusters"])


# ---------------------------------------------------------------------------
# Summaries and ROUGE
# ---------------------------------------------------------------------------


def reference_tokens(meeting: Meeting, decision_id: str, cfg: PipelineConfig, fcfg: FeatureConfig) -> list[str]:
    toks = tokenize(meeting.abstract(decision_id).text)
    if cfg.rouge_strip_reference:
        toks = content_words(toks, fcfg.stopwords)
    return toks


def concatenated_reference(meeting: Meeting, cfg: PipelineConfig, fcfg: FeatureConfig) -> list[str]:
    toks: list[str] = []
    for a in meeting.abstracts:
        toks.extend(tokenize(a.text))
    if cfg.rouge_strip_reference:
        toks = content_words(toks, fcfg.stopwords)
    return toks


def summarize_cluster(
    summarizer: str,
    cluster: DecisionCluster,
    meeting: Meeting,
    ex: FeatureExtractor,
    model: LinearModel | None = None,
) -> DecisionSummary:
    if summarizer == "longest":
        return longest_da(cluster, meeting, ex)
    if summarizer == "prototype":
        return prototype_da(cluster, meeting, ex)
    if summarizer == "da":
        if model is None:
            raise ValueError("DA-level extraction needs a trained model")
        return extract_das(model, cluster, meeting, ex)
    if summarizer == "token":
        if model is None:
            raise ValueError("token-level extraction needs a trained model")
        return extract_tokens(model, cluster, meeting, ex)
    if summarizer == "upper-bound":
        if cluster.aligned_decision is None:
            raise ValueError("the upper bound needs clusters aligned to decisions")
        return upper_bound_summary(cluster, meeting, meeting.abstract(cluster.aligned_decision), ex)
    raise ValueError(f"unknown summarizer: {summarizer!r}")


def _union_texts(summaries: list[DecisionSummary]) -> str:
    """Per-decision union of several cluster summaries."""
    if not summaries:
        return ""
    if summaries[0].level == "da":
        return ", ".join(s.text for s in summaries if s.text)
    seen: set[str] = set()
    surfaces: list[str] = []
    for s in summaries:
        for surface in s.selected:
            key = stem(surface)
            if key not in seen:
                seen.add(key)
                surfaces.append(surface)
    return " ".join(surfaces)


def decision_summaries(
    meeting: Meeting,
    clusters: list[DecisionCluster],
    summarizer: str,
    ex: FeatureExtractor,
    model: LinearModel | None = None,
) -> dict[str, str]:
    """decision id -> summary text; clusters aligned to the same decision are
    unioned, decisions without a cluster get the empty summary."""
    by_decision: dict[str, list[DecisionSummary]] = {}
    order: dict[str, int] = {da.id: da.index for da in meeting.das}
    for cluster in sorted(clusters, key=lambda c: min(order[i] for i in c.core)):
        if cluster.aligned_decision is None:
            continue
        summary = summarize_cluster(summarizer, cluster, meeting, ex, model)
        by_decision.setdefault(cluster.aligned_decision, []).append(summary)
    gold_decisions = [c.aligned_decision for c in gold_decision_clusters(meeting)]
    return {d: _union_texts(by_decision.get(d, [])) for d in gold_decisions}


def system_decision_clusters(clustering: Clustering, meeting: Meeting) -> list[DecisionCluster]:
    aligned = align_clusters_to_decisions(clustering, meeting)
    return [
        DecisionCluster(core=c, aligned_decision=d)
        for c, d in zip(clustering.clusters, aligned)
    ]


def rouge_for_summaries(
    summaries: dict[str, str],
    meeting: Meeting,
    cfg: PipelineConfig,
    fcfg: FeatureConfig,
) -> list[PRF]:
    out = []
    for decision_id in sorted(summaries):
        ref = reference_tokens(meeting, decision_id, cfg, fcfg)
        out.append(rouge1(tokenize(summaries[decision_id]), ref, use_stem=cfg.rouge_stem))
    return out


# ---------------------------------------------------------------------------
# Cross-validation report
# ---------------------------------------------------------------------------


def _prf_entry(entries: list[PRF]) -> dict:
    agg = aggregate(entries)
    return {
        "precision": agg.precision,
        "recall": agg.recall,
        "f1": agg.f1,
        "f1_mean": mean_f1(entries),
        "n": len(entries),
    }


def xval_report(meetings: list[Meeting], cfg: PipelineConfig, k: int, seed: int) -> dict:
    folds = kfold_split(meetings, k, seed)
    by_id = {m.id: m for m in meetings}
    voi_base = 2.0 if cfg.voi_log_base == "2" else math.e

    cluster_bcubed: dict[str, list[PRF]] = {m: [] for m in CLUSTER_METHODS}
    cluster_pairwise: dict[str, list[PRF]] = {m: [] for m in CLUSTER_METHODS}
    cluster_voi: dict[str, list[float]] = {m: [] for m in CLUSTER_METHODS}
    unsup: dict[tuple[str, str], list[PRF]] = {}
    sup: dict[tuple[str, str], list[PRF]] = {}
    upper: list[PRF] = []

    for fold_index, (train_ids, test_ids) in enumerate(folds):
        train = [m for m in meetings if m.id in train_ids]
        test = [m for m in meetings if m.id in test_ids]
        fold_seed = _fold_seed(seed, f"fold{fold_index}")
        models = fit_fold(train, cfg, fold_seed)

        for meeting in test:
            if not meeting.drdas():
                continue
            ex = models.extractor(meeting)
            fcfg = models.feature_config
            gold = gold_clustering(meeting)

            system: dict[str, Clustering] = {}
            for method in CLUSTER_METHODS:
                clustering = system_clustering(meeting, method, models, cfg, fold_seed)
                system[method] = clustering
                cluster_bcubed[method].append(bcubed(clustering, gold))
                if len(gold.universe) >= 2:
                    cluster_pairwise[method].append(pairwise_score(clustering, gold))
                cluster_voi[method].append(voi(clustering, gold, base=voi_base))

            gold_clusters = gold_decision_clusters(meeting)
            sources: dict[str, list[DecisionCluster]] = {
                "true": gold_clusters,
                "system_lda": system_decision_clusters(system["lda"], meeting),
                "system_svm": system_decision_clusters(system["svm"], meeting),
            }

            for source, clusters in sources.items():
                for row, model in (
                    ("longest", None),
                    ("prototype", None),
                ):
                    texts = decision_summaries(meeting, clusters, row, ex, model)
                    unsup.setdefault((source, row), []).extend(
                        rouge_for_summaries(texts, meeting, cfg, fcfg)
                    )
                for row, model in (
                    ("da", models.da_plain),
                    ("token", models.token_plain),
                    ("da_context", models.da_context),
                    ("token_context", models.token_context),
                ):
                    summarizer = "da" if row.startswith("da") else "token"
                    texts = decision_summaries(meeting, clusters, summarizer, ex, model)
                    sup.setdefault((source, row), []).extend(
                        rouge_for_summaries(texts, meeting, cfg, fcfg)
                    )

            # No clustering: one cluster of every DRDA, scored against the
            # concatenation of all the meeting's decision abstracts.
            whole = DecisionCluster(core=frozenset(d.id for d in meeting.drdas()))
            ref = concatenated_reference(meeting, cfg, fcfg)
            for row, model in (
                ("longest", None),
                ("prototype", None),
            ):
                summary = summarize_cluster(row, whole, meeting, ex, model)
                unsup.setdefault(("no_clustering", row), []).append(
                    rouge1(tokenize(summary.text), ref, use_stem=cfg.rouge_stem)
                )
            for row, model in (("da", models.da_plain), ("token", models.token_plain)):
                summary = summarize_cluster(row, whole, meeting, ex, model)
                sup.setdefault(("no_clustering", row), []).append(
                    rouge1(tokenize(summary.text), ref, use_stem=cfg.rouge_stem)
                )

            texts = decision_summaries(meeting, gold_clusters, "upper-bound", ex)
            upper.extend(rouge_for_summaries(texts, meeting, cfg, fcfg))

    report = {
        "seed": seed,
        "folds": k,
        "fold_assignments": [
            {"train": sorted(tr), "test": sorted(te)} for tr, te in folds
        ],
        "corpus": {
            "meetings": [m.id for m in meetings],
            "n_drdas": sum(len(m.drdas()) for m in meetings),
        },
        "config": cfg.to_dict(),
        "clustering": {
            method: {
                "bcubed": _prf_entry(cluster_bcubed[method]),
                "pairwise": _prf_entry(cluster_pairwise[method])
                if cluster_pairwise[method]
                else None,
                "voi": sum(cluster_voi[method]) / len(cluster_voi[method]),
                "n_meetings": len(cluster_bcubed[method]),
            }
            for method in CLUSTER_METHODS
        },
        "summarization_unsupervised": {
            source: {
                row: _prf_entry(unsup[(source, row)])
                for row in ("longest", "prototype")
                if (source, row) in unsup
            }
            for source in UNSUP_SOURCES
        },
        "summarization_supervised": {
            source: {
                row: _prf_entry(sup[(source, row)])
                for row in SUP_ROWS
                if (source, row) in sup
            }
            for source in ("true", "system_lda", "system_svm", "no_clustering")
        },
        "upper_bound": _prf_entry(upper),
    }
    report["summarization_unsupervised"]["upper_bound"] = report["upper_bound"]
    return report


# ---------------------------------------------------------------------------
# Plain-text tables
# ---------------------------------------------------------------------------


def _fmt(x: float | None) -> str:
    return "   -  " if x is None else f"{x:.4f}"


def render_tables(report: dict) -> str:
    lines: list[str] = []
    lines.append("CLUSTERING (vs gold)")
    header = f"{'method':<12} {'b3-P':>7} {'b3-R':>7} {'b3-F1':>7} {'pw-P':>7} {'pw-R':>7} {'pw-F1':>7} {'VOI':>7}"
    lines.append(header)
    lines.append("-" * len(header))
    for method in CLUSTER_METHODS:
        entry = report["clustering"][method]
        b = entry["bcubed"]
        p = entry["pairwise"]
        lines.append(
            f"{method:<12} {_fmt(b['precision']):>7} {_fmt(b['recall']):>7} {_fmt(b['f1']):>7} "
            f"{_fmt(p['precision'] if p else None):>7} {_fmt(p['recall'] if p else None):>7} "
            f"{_fmt(p['f1'] if p else None):>7} {_fmt(entry['voi']):>7}"
        )
    lines.append("")
    lines.append("ROUGE-1, unsupervised summarizers")
    header = f"{'clusters':<14} {'summarizer':<12} {'P':>7} {'R':>7} {'F1':>7}"
    lines.append(header)
    lines.append("-" * len(header))
    for source in UNSUP_SOURCES:
        for row, entry in report["summarization_unsupervised"].get(source, {}).items():
            lines.append(
                f"{source:<14} {row:<12} {_fmt(entry['precision']):>7} "
                f"{_fmt(entry['recall']):>7} {_fmt(entry['f1']):>7}"
            )
    ub = report["upper_bound"]
    lines.append(
        f"{'true':<14} {'upper-bound':<12} {_fmt(ub['precision']):>7} "
        f"{_fmt(ub['recall']):>7} {_fmt(ub['f1']):>7}"
    )
    lines.append("")
    lines.append("ROUGE-1, supervised summarizers")
    lines.append(header)
    lines.append("-" * len(header))
    for source in ("true", "system_lda", "system_svm", "no_clustering"):
        for row, entry in report["summarization_supervised"].get(source, {}).items():
            lines.append(
                f"{source:<14} {row:<12} {_fmt(entry['precision']):>7} "
                f"{_fmt(entry['recall']):>7} {_fmt(entry['f1']):>7}"
            )
    return "\n".join(lines) + "\n"
