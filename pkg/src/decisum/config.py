"""Pipeline configuration: one dataclass tree, loadable from a JSON file and
overridable by CLI flags (flags win)."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

from .cluster import THRESHOLDS
from .features import DEFAULT_FEEDBACK_LEXICON, DEFAULT_WRAPUP_TERMS


@dataclass
class LdaSettings:
    topics: int = 15
    alpha: float | None = None  # None -> 50 / topics
    beta: float = 0.1
    iterations: int = 500
    foldin_sweeps: int = 50
    average_last: int = 0
    smooth_idf: bool = False

    def resolved_alpha(self) -> float:
        return 50.0 / self.topics if self.alpha is None else self.alpha


@dataclass
class TrainerSettings:
    maxent_l2: float = 1e-3
    maxent_epochs: int = 500
    svm_lambda: float = 0.01
    svm_epochs: int = 200
    balance_positives: bool = True  # weight positives by negatives/positives


@dataclass
class PipelineConfig:
    thresholds: dict[str, float] = field(default_factory=lambda: dict(THRESHOLDS))
    lda: LdaSettings = field(default_factory=LdaSettings)
    trainer: TrainerSettings = field(default_factory=TrainerSettings)
    context_das: int = 20               # discourse context per cluster
    pairwise_context_das: int = 5       # per-DA context for the pairwise feature
    summarizer_learner: str = "svm"     # learner for DA/token extraction in xval
    rouge_stem: bool = True
    rouge_strip_reference: bool = False  # drop function words from references too
    voi_log_base: str = "e"             # "e" | "2"
    contiguous_segments: int = 0        # 0 -> round(sqrt(n)) per meeting
    drop_zero_overlap_clusters: bool = False
    feedback_lexicon: list[str] = field(
        default_factory=lambda: sorted(DEFAULT_FEEDBACK_LEXICON)
    )
    wrapup_terms: list[str] = field(default_factory=lambda: list(DEFAULT_WRAPUP_TERMS))
    edge_fraction: float = 0.1
    stopwords_path: str | None = None

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @staticmethod
    def from_dict(obj: dict) -> "PipelineConfig":
        cfg = PipelineConfig()
        for key, value in obj.items():
            if key == "lda":
                cfg.lda = LdaSettings(**value)
            elif key == "trainer":
                cfg.trainer = TrainerSettings(**value)
            elif key == "thresholds":
                cfg.thresholds = {**cfg.thresholds, **value}
            elif hasattr(cfg, key):
                setattr(cfg, key, value)
            else:
                raise ValueError(f"unknown config key: {key!r}")
        return cfg

    @staticmethod
    def from_json(path: str | Path) -> "PipelineConfig":
        return PipelineConfig.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
