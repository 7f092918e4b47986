"""LDA via collapsed Gibbs sampling; per-document topic distributions and the
dot-product topic similarity."""

from __future__ import annotations

import json
import math
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np


@dataclass
class LdaModel:
    k: int
    alpha: float
    beta: float
    vocabulary: dict[str, int]
    topic_word: np.ndarray        # (k, V) token counts
    topic_totals: np.ndarray      # (k,)
    doc_topic: np.ndarray         # (D, k)
    doc_words: list[np.ndarray]   # word ids per training document
    assignments: list[np.ndarray]  # topic of each token, aligned with doc_words
    seed: int
    log_likelihood: list[float] = field(default_factory=list)
    _rng: np.random.Generator | None = field(default=None, repr=False)

    @property
    def n_docs(self) -> int:
        return len(self.doc_words)

    @property
    def vocab_size(self) -> int:
        return len(self.vocabulary)

    @classmethod
    def initialize(
        cls, docs: Sequence[Sequence[str]], k: int, alpha: float, beta: float, seed: int
    ) -> "LdaModel":
        if not docs:
            raise ValueError("cannot train LDA on an empty document list")
        if any(len(d) == 0 for d in docs):
            raise ValueError("LDA training documents must contain at least one token")
        if k < 2:
            raise ValueError(f"topic count must be >= 2, got {k}")
        vocab: dict[str, int] = {}
        for doc in docs:
            for w in doc:
                vocab.setdefault(w, len(vocab))
        rng = np.random.default_rng(seed)
        v = len(vocab)
        topic_word = np.zeros((k, v), dtype=np.int64)
        topic_totals = np.zeros(k, dtype=np.int64)
        doc_topic = np.zeros((len(docs), k), dtype=np.int64)
        doc_words = []
        assignments = []
        for d, doc in enumerate(docs):
            words = np.array([vocab[w] for w in doc], dtype=np.int64)
            zs = rng.integers(0, k, size=len(words))
            for w, z in zip(words, zs):
                topic_word[z, w] += 1
                topic_totals[z] += 1
                doc_topic[d, z] += 1
            doc_words.append(words)
            assignments.append(zs)
        return cls(
            k=k, alpha=alpha, beta=beta, vocabulary=vocab,
            topic_word=topic_word, topic_totals=topic_totals, doc_topic=doc_topic,
            doc_words=doc_words, assignments=assignments, seed=seed, _rng=rng,
        )

    def sweep(self) -> None:
        """One collapsed Gibbs pass over every token."""
        if self._rng is None:
            raise RuntimeError("model was loaded without sampler state; cannot resample")
        rng = self._rng
        vbeta = self.vocab_size * self.beta
        tw = self.topic_word
        tt = self.topic_totals
        for d in range(self.n_docs):
            words = self.doc_words[d]
            zs = self.assignments[d]
            dt = self.doc_topic[d]
            for pos in range(len(words)):
                w = words[pos]
                z = zs[pos]
                tw[z, w] -= 1
                tt[z] -= 1
                dt[z] -= 1
                p = (tw[:, w] + self.beta) / (tt + vbeta) * (dt + self.alpha)
                cum = np.cumsum(p)
                z = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
                zs[pos] = z
                tw[z, w] += 1
                tt[z] += 1
                dt[z] += 1
        self.log_likelihood.append(self.joint_log_likelihood())

    def joint_log_likelihood(self) -> float:
        """log p(words, assignments | alpha, beta) from the count tables."""
        lg = math.lgamma
        k, v = self.k, self.vocab_size
        ll = k * (lg(v * self.beta) - v * lg(self.beta))
        for z in range(k):
            row = self.topic_word[z]
            ll += sum(lg(c + self.beta) for c in row) - lg(self.topic_totals[z] + v * self.beta)
        ll += self.n_docs * (lg(k * self.alpha) - k * lg(self.alpha))
        for d in range(self.n_docs):
            dt = self.doc_topic[d]
            ll += sum(lg(c + self.alpha) for c in dt) - lg(len(self.doc_words[d]) + k * self.alpha)
        return ll

    def counts_consistent(self) -> bool:
        """Count tables agree with the retained token-topic assignments."""
        tw = np.zeros_like(self.topic_word)
        tt = np.zeros_like(self.topic_totals)
        dt = np.zeros_like(self.doc_topic)
        for d, (words, zs) in enumerate(zip(self.doc_words, self.assignments)):
            for w, z in zip(words, zs):
                tw[z, w] += 1
                tt[z] += 1
                dt[d, z] += 1
        return (
            bool(np.array_equal(tw, self.topic_word))
            and bool(np.array_equal(tt, self.topic_totals))
            and bool(np.array_equal(dt, self.doc_topic))
        )


def train_lda(
    docs: Sequence[Sequence[str]],
    k: int,
    alpha: float,
    beta: float,
    iterations: int,
    seed: int,
    average_last: int = 0,
) -> tuple[LdaModel, np.ndarray]:
    """Run `iterations` Gibbs sweeps; returns the model and the (D, k) theta table.

    Theta is read from the final sample; with average_last=S > 1 it is instead
    the mean of the smoothed theta over the last S sweeps.
    """
    model = LdaModel.initialize(docs, k=k, alpha=alpha, beta=beta, seed=seed)
    acc = np.zeros((model.n_docs, k), dtype=float)
    averaged = 0
    for it in range(iterations):
        model.sweep()
        if average_last > 1 and it >= iterations - average_last:
            acc += _theta_table(model)
            averaged += 1
    if averaged > 0:
        return model, acc / averaged
    return model, _theta_table(model)


def _theta_table(model: LdaModel) -> np.ndarray:
    lengths = np.array([len(w) for w in model.doc_words], dtype=float)
    return (model.doc_topic + model.alpha) / (lengths[:, None] + model.k * model.alpha)


def theta(model: LdaModel, doc_index: int) -> np.ndarray:
    """Dirichlet-smoothed topic distribution of one training document."""
    if not 0 <= doc_index < model.n_docs:
        raise IndexError(f"document index {doc_index} out of range")
    dt = model.doc_topic[doc_index].astype(float)
    length = len(model.doc_words[doc_index])
    return (dt + model.alpha) / (length + model.k * model.alpha)


def fold_in(
    model: LdaModel,
    docs: Sequence[Sequence[str]],
    seed: int,
    sweeps: int = 50,
    doc_keys: Sequence[str] | None = None,
) -> np.ndarray:
    """Theta for unseen documents: Gibbs over their tokens with model counts
    frozen. Each document samples from a private RNG stream derived from
    (seed, key), so results do not depend on processing order. Documents with
    no in-vocabulary token get a uniform distribution."""
    k = model.k
    vbeta = model.vocab_size * model.beta
    out = np.full((len(docs), k), 1.0 / k)
    phi_base = (model.topic_word + model.beta) / (model.topic_totals[:, None] + vbeta)
    for d, doc in enumerate(docs):
        words = np.array([model.vocabulary[w] for w in doc if w in model.vocabulary], dtype=np.int64)
        if len(words) == 0:
            continue
        key = doc_keys[d] if doc_keys is not None else str(d)
        rng = np.random.default_rng([seed, zlib.crc32(key.encode("utf-8"))])
        zs = rng.integers(0, k, size=len(words))
        dt = np.bincount(zs, minlength=k).astype(np.int64)
        for _ in range(sweeps):
            for pos in range(len(words)):
                w = words[pos]
                z = zs[pos]
                dt[z] -= 1
                p = phi_base[:, w] * (dt + model.alpha)
                cum = np.cumsum(p)
                z = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
                zs[pos] = z
                dt[z] += 1
        out[d] = (dt + model.alpha) / (len(words) + k * model.alpha)
    return out


def lda_similarity(a: Sequence[float], b: Sequence[float]) -> float:
    """Dot product of two topic distributions."""
    av = np.asarray(a, dtype=float)
    bv = np.asarray(b, dtype=float)
    if av.shape != bv.shape:
        raise ValueError("topic distributions have different dimensionality")
    return float(av @ bv)


def save_model(model: LdaModel, path: str | Path) -> None:
    obj = {
        "k": model.k,
        "alpha": model.alpha,
        "beta": model.beta,
        "vocabulary": model.vocabulary,
        "topic_word": model.topic_word.tolist(),
        "seed": model.seed,
    }
    Path(path).write_text(json.dumps(obj, sort_keys=True), encoding="utf-8")


def load_model(path: str | Path) -> LdaModel:
    """Load a persisted model; supports fold-in inference but not resampling."""
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    topic_word = np.array(obj["topic_word"], dtype=np.int64)
    return LdaModel(
        k=obj["k"],
        alpha=obj["alpha"],
        beta=obj["beta"],
        vocabulary=obj["vocabulary"],
        topic_word=topic_word,
        topic_totals=topic_word.sum(axis=1),
        doc_topic=np.zeros((0, obj["k"]), dtype=np.int64),
        doc_words=[],
        assignments=[],
        seed=obj["seed"],
    )
