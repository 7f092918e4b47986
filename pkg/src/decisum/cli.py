"""Command-line interface.

Subcommands: validate, cluster, train-pairwise, train-da, train-token,
summarize, xval. Exit codes: 0 ok, 1 input error, 2 internal failure.
The seed falls back to the DD_SEED environment variable, then 7.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import traceback
from pathlib import Path

from . import __version__
from .config import PipelineConfig
from .corpus import CorpusError, gold_clustering, load_corpus
from .learn import load_model, save_model
from .metrics import PRF, aggregate, bcubed, mean_f1, pairwise_score, voi
from .pipeline import (
    clustering_as_dict,
    clustering_from_dict,
    decision_summaries,
    fit_fold,
    gold_decision_clusters,
    pairwise_training_examples,
    render_tables,
    rouge_for_summaries,
    system_clustering,
    system_decision_clusters,
    train_extraction_model,
    xval_report,
)
from .textproc import tokenize


class _InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors (exit 1), not internal failures
    def error(self, message):  # noqa: D102
        self.exit(1, f"{self.prog}: error: {message}\n")


def _default_seed() -> int:
    env = os.environ.get("DD_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise _InputError(f"DD_SEED must be an integer, got {env!r}") from exc
    return 7


def _load_config(args) -> PipelineConfig:
    cfg = PipelineConfig.from_json(args.config) if args.config else PipelineConfig()
    if getattr(args, "stopwords", None):
        cfg.stopwords_path = args.stopwords
    if getattr(args, "context", None) is not None:
        cfg.context_das = args.context
    if getattr(args, "stem_match", None) is not None:
        cfg.rouge_stem = args.stem_match
    if getattr(args, "voi_base", None):
        cfg.voi_log_base = args.voi_base
    if getattr(args, "learner", None):
        cfg.summarizer_learner = args.learner
    return cfg


def _write_json(path: str | None, obj) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _write_jsonl(path: str | None, objs) -> None:
    text = "".join(json.dumps(o, sort_keys=True) + "\n" for o in objs)
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_validate(args) -> int:
    meetings = load_corpus(args.corpus)
    n_drdas = sum(len(m.drdas()) for m in meetings)
    print(
        f"ok: {len(meetings)} meetings, {sum(m.n for m in meetings)} DAs, "
        f"{n_drdas} decision-related",
        file=sys.stderr,
    )
    return 0


_METHOD_ALIASES = {
    "tfidf": "tfidf",
    "lda": "lda",
    "pairwise-svm": "svm",
    "pairwise-maxent": "maxent",
    "all-in-one": "all_in_one",
    "contiguous": "contiguous",
}


def cmd_cluster(args) -> int:
    cfg = _load_config(args)
    seed = args.seed if args.seed is not None else _default_seed()
    meetings = load_corpus(args.corpus)
    method = _METHOD_ALIASES[args.method]

    pair_model = None
    if method in ("svm", "maxent"):
        if not args.model:
            raise _InputError(f"--method {args.method} requires --model")
        pair_model = load_model(args.model)
    if args.segments:
        cfg.contiguous_segments = args.segments

    models = fit_fold(
        meetings, cfg, seed,
        train_pairwise=False, train_extractors=False, train_topics=(method == "lda"),
    )
    voi_base = 2.0 if cfg.voi_log_base == "2" else math.e

    records = []
    b3, pw, vois = [], [], []
    for m in meetings:
        if not m.drdas():
            continue
        clustering = system_clustering(
            m, method, models, cfg, seed, threshold=args.threshold, pair_model=pair_model
        )
        threshold = args.threshold
        if threshold is None and method in cfg.thresholds:
            threshold = cfg.thresholds[method]
        records.append(clustering_as_dict(m, args.method, threshold, clustering))
        gold = gold_clustering(m)
        b3.append(bcubed(clustering, gold))
        if len(gold.universe) >= 2:
            pw.append(pairwise_score(clustering, gold))
        vois.append(voi(clustering, gold, base=voi_base))

    _write_jsonl(args.out_clusters, records)
    report = {
        "method": args.method,
        "seed": seed,
        "bcubed": _agg(b3),
        "pairwise": _agg(pw) if pw else None,
        "voi": sum(vois) / len(vois) if vois else None,
        "n_meetings": len(b3),
    }
    _write_json(args.out_report, report)
    return 0


def _agg(entries: list[PRF]) -> dict:
    agg = aggregate(entries)
    return {
        "precision": agg.precision,
        "recall": agg.recall,
        "f1": agg.f1,
        "f1_mean": mean_f1(entries),
    }


def _train_common(args, level: str | None) -> int:
    """Shared by train-pairwise / train-da / train-token."""
    cfg = _load_config(args)
    seed = args.seed if args.seed is not None else _default_seed()
    meetings = load_corpus(args.corpus)
    models = fit_fold(
        meetings, cfg, seed, train_pairwise=False, train_extractors=False, train_topics=False
    )
    if level is None:
        from .learn import balanced_pos_weight, train_maxent, train_svm

        examples = pairwise_training_examples(meetings, models)
        pw = balanced_pos_weight(examples) if cfg.trainer.balance_positives else 1.0
        if args.learner == "maxent":
            model = train_maxent(
                examples, l2=cfg.trainer.maxent_l2, epochs=cfg.trainer.maxent_epochs,
                seed=seed, pos_weight=pw,
            )
        else:
            model = train_svm(
                examples, lam=cfg.trainer.svm_lambda, epochs=cfg.trainer.svm_epochs,
                seed=seed, pos_weight=pw,
            )
    else:
        cfg.summarizer_learner = args.learner
        model = train_extraction_model(
            meetings, models, cfg, seed, level, context=args.context > 0
        )
    save_model(model, args.out)
    print(f"wrote {args.out} ({model.kind}, {len(model.feature_names)} features)", file=sys.stderr)
    return 0


def cmd_summarize(args) -> int:
    cfg = _load_config(args)
    seed = args.seed if args.seed is not None else _default_seed()
    meetings = load_corpus(args.corpus)
    models = fit_fold(
        meetings, cfg, seed, train_pairwise=False, train_extractors=False, train_topics=False
    )

    model = None
    if args.summarizer in ("da", "token"):
        if not args.model:
            raise _InputError(f"--summarizer {args.summarizer} requires --model")
        model = load_model(args.model)

    loaded: dict[str, list] = {}
    if args.clusters != "gold":
        with open(args.clusters, encoding="utf-8") as handle:
            for line in handle:
                if line.strip():
                    mid, clustering = clustering_from_dict(json.loads(line))
                    loaded[mid] = clustering

    records = []
    prfs: list[PRF] = []
    for m in meetings:
        if not m.drdas():
            continue
        ex = models.extractor(m)
        if args.clusters == "gold":
            clusters = gold_decision_clusters(m)
        else:
            if m.id not in loaded:
                raise _InputError(f"clusters file has no entry for meeting {m.id}")
            clusters = system_decision_clusters(loaded[m.id], m)
        texts = decision_summaries(m, clusters, args.summarizer, ex, model)
        prfs.extend(rouge_for_summaries(texts, m, cfg, models.feature_config))
        for decision_id in sorted(texts):
            records.append(
                {
                    "meeting_id": m.id,
                    "decision_id": decision_id,
                    "method": args.summarizer,
                    "context_n": cfg.context_das,
                    "text": texts[decision_id],
                    "selected": tokenize(texts[decision_id]),
                }
            )
    _write_jsonl(args.out_summaries, records)
    _write_json(args.out_report, {"summarizer": args.summarizer, "rouge1": _agg(prfs)})
    return 0


def cmd_xval(args) -> int:
    cfg = _load_config(args)
    seed = args.seed if args.seed is not None else _default_seed()
    meetings = load_corpus(args.corpus)
    report = xval_report(meetings, cfg, k=args.folds, seed=seed)
    _write_json(args.out, report)
    if args.tables:
        sys.stdout.write(render_tables(report))
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="decisum", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--corpus", required=True, help="JSONL corpus path")
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--stopwords", help="override the shipped stopword list")
        if seed:
            p.add_argument("--seed", type=int, help="RNG seed (default: DD_SEED or 7)")

    p = sub.add_parser("validate", help="load and validate a corpus")
    common(p, seed=False)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("cluster", help="cluster DRDAs and score against gold")
    common(p)
    p.add_argument("--method", required=True, choices=sorted(_METHOD_ALIASES))
    p.add_argument("--threshold", type=float, help="override the stopping threshold")
    p.add_argument("--segments", type=int, default=0, help="contiguous baseline segment count")
    p.add_argument("--model", help="pairwise model file for supervised methods")
    p.add_argument("--voi-base", choices=["e", "2"], help="VOI logarithm base")
    p.add_argument("--out-clusters", help="clusterings JSONL (default stdout)")
    p.add_argument("--out-report", help="metrics JSON (default stdout)")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("train-pairwise", help="train a same-decision pair classifier")
    common(p)
    p.add_argument("--learner", choices=["svm", "maxent"], default="svm")
    p.add_argument("--out", required=True)
    p.set_defaults(func=lambda a: _train_common(a, None))

    p = sub.add_parser("train-da", help="train a DA extraction classifier")
    common(p)
    p.add_argument("--learner", choices=["svm", "maxent"], default="svm")
    p.add_argument("--context", type=int, default=0, help="discourse context DAs (0 = none)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=lambda a: _train_common(a, "da"))

    p = sub.add_parser("train-token", help="train a token extraction classifier")
    common(p)
    p.add_argument("--learner", choices=["svm", "maxent"], default="svm")
    p.add_argument("--context", type=int, default=0, help="discourse context DAs (0 = none)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=lambda a: _train_common(a, "token"))

    p = sub.add_parser("summarize", help="summarize decision clusters and score with ROUGE-1")
    common(p)
    p.add_argument("--clusters", default="gold", help='"gold" or a clusterings JSONL file')
    p.add_argument(
        "--summarizer",
        required=True,
        choices=["longest", "prototype", "da", "token", "upper-bound"],
    )
    p.add_argument("--model", help="extraction model file for da/token")
    p.add_argument("--context", type=int, help="discourse context size")
    p.add_argument("--stem-match", action=argparse.BooleanOptionalAction, default=None,
                   help="stem both sides for ROUGE matching")
    p.add_argument("--out-summaries", help="summaries JSONL (default stdout)")
    p.add_argument("--out-report", help="ROUGE report JSON (default stdout)")
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("xval", help="full cross-validated replication report")
    common(p)
    p.add_argument("--folds", type=int, default=3)
    p.add_argument("--out", help="report JSON path (default stdout)")
    p.add_argument("--tables", action="store_true", help="also print plain-text tables")
    p.set_defaults(func=cmd_xval)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CorpusError, _InputError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception:  # pragma: no cover - internal invariant failures
        traceback.print_exc()
        return 2


if __name__ == "__main__":
    sys.exit(main())
