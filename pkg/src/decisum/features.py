"""Feature extraction for supervised clustering and summarization: pairwise
DA features, DA-level features, token-level features, and the dialogue cue
predicates (positive feedback, review/closing indicators)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .corpus import DialogueAct, Meeting
from .textproc import (
    TfIdfVector,
    Vectorizer,
    content_words,
    cosine,
    default_stopwords,
    stem,
    tokenize,
    vectorize,
)

DEFAULT_FEEDBACK_LEXICON = frozenset({"yeah", "yes", "okay", "ok", "right", "exactly"})
DEFAULT_WRAPUP_TERMS = ("wrap up", "recap")


@dataclass(frozen=True)
class FeatureConfig:
    feedback_lexicon: frozenset[str] = DEFAULT_FEEDBACK_LEXICON
    wrapup_terms: tuple[str, ...] = DEFAULT_WRAPUP_TERMS
    edge_fraction: float = 0.1        # beginning/ending bucket width
    pairwise_context_das: int = 5     # non-DRDA neighbours per DA for context overlap
    stopwords: frozenset[str] | None = None


def is_positive_feedback(da: DialogueAct, lexicon: frozenset[str] = DEFAULT_FEEDBACK_LEXICON) -> bool:
    """True iff any token of the DA is in the feedback lexicon."""
    return any(t in lexicon for t in tokenize(da.text))


def _contains_wrapup(tokens: list[str], terms: tuple[str, ...]) -> bool:
    joined = " ".join(tokens)
    return any(f" {term} " in f" {joined} " for term in terms)


def wrapup_relative_position(
    da: DialogueAct, meeting: Meeting, terms: tuple[str, ...] = DEFAULT_WRAPUP_TERMS
) -> float | None:
    """|index(da) - index(nearest review/closing indicator DA)| / N, or None
    when the meeting has no indicator."""
    indicators = [
        d.index for d in meeting.das if _contains_wrapup(tokenize(d.text), terms)
    ]
    if not indicators:
        return None
    return min(abs(da.index - i) for i in indicators) / meeting.n


class FeatureExtractor:
    """Per-meeting feature computation with cached token/stem/vector tables."""

    def __init__(
        self,
        meeting: Meeting,
        vectorizer: Vectorizer,
        config: FeatureConfig = FeatureConfig(),
    ) -> None:
        self.meeting = meeting
        self.vectorizer = vectorizer
        self.config = config
        stops = config.stopwords if config.stopwords is not None else default_stopwords()
        self._tokens: dict[str, list[str]] = {}
        self._content: dict[str, list[str]] = {}
        self._content_positions: dict[str, list[int]] = {}
        self._stems: dict[str, list[str]] = {}
        self._stem_sets: dict[str, frozenset[str]] = {}
        self._vectors: dict[str, TfIdfVector] = {}
        for da in meeting.das:
            toks = tokenize(da.text)
            positions = [i for i, t in enumerate(toks) if t not in stops]
            content = [toks[i] for i in positions]
            stems = [stem(t) for t in content]
            self._tokens[da.id] = toks
            self._content_positions[da.id] = positions
            self._content[da.id] = content
            self._stems[da.id] = stems
            self._stem_sets[da.id] = frozenset(stems)
            self._vectors[da.id] = vectorize(vectorizer, content)
        self._feedback = {
            da.id: is_positive_feedback(da, config.feedback_lexicon) for da in meeting.das
        }
        self._wrapup_indices = [
            da.index for da in meeting.das
            if _contains_wrapup(self._tokens[da.id], config.wrapup_terms)
        ]
        self._ap_pairs = {
            frozenset((p.source_da, p.target_da)) for p in meeting.adjacency_pairs
        }
        self._aps_of: dict[str, list] = {}
        for p in meeting.adjacency_pairs:
            self._aps_of.setdefault(p.source_da, []).append(p)
            self._aps_of.setdefault(p.target_da, []).append(p)
        self._context_cache: dict[str, frozenset[str]] = {}

    # -- shared lookups ----------------------------------------------------

    def content_tokens(self, da_id: str) -> list[str]:
        return self._content[da_id]

    def content_stems(self, da_id: str) -> list[str]:
        return self._stems[da_id]

    def stem_set(self, da_id: str) -> frozenset[str]:
        return self._stem_sets[da_id]

    def vector(self, da_id: str) -> TfIdfVector:
        return self._vectors[da_id]

    def _next_da(self, da: DialogueAct) -> DialogueAct | None:
        if da.index + 1 < self.meeting.n:
            return self.meeting.das[da.index + 1]
        return None

    def _is_question(self, da: DialogueAct) -> bool:
        # AMI elicit-* acts encode questions; transcripts lack reliable punctuation.
        return da.da_type.startswith("el")

    def _wrapup_position(self, da: DialogueAct) -> float | None:
        if not self._wrapup_indices:
            return None
        return min(abs(da.index - i) for i in self._wrapup_indices) / self.meeting.n

    def _da_context_stems(self, da_id: str) -> frozenset[str]:
        """Stems of the n non-DRDA DAs closest (cosine) to this DA."""
        cached = self._context_cache.get(da_id)
        if cached is not None:
            return cached
        n = self.config.pairwise_context_das
        vec = self._vectors[da_id]
        ranked = sorted(
            (d for d in self.meeting.das if not d.is_drda and d.id != da_id),
            key=lambda d: (-cosine(vec, self._vectors[d.id]), d.index),
        )
        stems: set[str] = set()
        for d in ranked[:n]:
            stems |= self._stem_sets[d.id]
        result = frozenset(stems)
        self._context_cache[da_id] = result
        return result

    def _structural(self, da: DialogueAct, out: dict[str, float]) -> None:
        n = self.meeting.n
        if da.index < self.config.edge_fraction * n:
            bucket = "beginning"
        elif da.index >= n - self.config.edge_fraction * n:
            bucket = "ending"
        else:
            bucket = "middle"
        out[f"pos_bucket={bucket}"] = 1.0

        aps = self._aps_of.get(da.id, [])
        if not aps:
            return
        out["in_ap"] = 1.0
        for p in aps:
            out[f"ap_type={p.ap_type}"] = 1.0
            other_id = p.target_da if p.source_da == da.id else p.source_da
            if self.meeting.da(other_id).is_drda:
                out["ap_other_decision_related"] = 1.0
            if p.source_da == da.id:
                out["ap_source"] = 1.0
                if self._feedback[p.target_da]:
                    out["ap_source_positive_target"] = 1.0
            else:
                out["ap_target"] = 1.0
                if self._is_question(self.meeting.da(p.source_da)):
                    out["ap_target_question_source"] = 1.0

    # -- the three inventories ----------------------------------------------

    def pairwise(self, a_id: str, b_id: str) -> dict[str, float]:
        a = self.meeting.da(a_id)
        b = self.meeting.da(b_id)
        if a.id == b.id:
            raise ValueError("pairwise features need two distinct DAs")
        sa = self._stem_sets[a_id]
        sb = self._stem_sets[b_id]
        overlap = len(sa & sb)
        shorter = min(len(self._content[a_id]), len(self._content[b_id]))
        out: dict[str, float] = {
            "overlap_count": float(overlap),
            "overlap_prop": overlap / shorter if shorter else 0.0,
            "tfidf_cosine": cosine(self._vectors[a_id], self._vectors[b_id]),
            "time_gap": abs(a.start_time - b.start_time),
            "relative_position": abs(a.index - b.index) / self.meeting.n,
        }
        if frozenset((a_id, b_id)) in self._ap_pairs:
            out["in_adjacency_pair"] = 1.0
        if a.da_type == b.da_type:
            out["same_da_type"] = 1.0
        ctx_overlap = len(self._da_context_stems(a_id) & self._da_context_stems(b_id))
        out["context_overlap"] = float(ctx_overlap)
        return out

    def da(self, da_id: str) -> dict[str, float]:
        da = self.meeting.da(da_id)
        stems = self._stems[da_id]
        out: dict[str, float] = {}
        for s in stems:
            out[f"uni={s}"] = 1.0
        for s1, s2 in zip(stems, stems[1:]):
            out[f"bi={s1}_{s2}"] = 1.0
        out["da_len"] = float(len(stems))
        if any(any(ch.isdigit() for ch in t) for t in self._tokens[da_id]):
            out["has_digit"] = 1.0
        nxt = self._next_da(da)
        if nxt is not None:
            if self._stem_sets[da_id] & self._stem_sets[nxt.id]:
                out["overlaps_next"] = 1.0
            if self._feedback[nxt.id]:
                out["next_positive_feedback"] = 1.0
        self._structural(da, out)
        wp = self._wrapup_position(da)
        if wp is not None:
            out["wrapup_distance"] = wp
        out[f"da_type={da.da_type}"] = 1.0
        out[f"role={da.role}"] = 1.0
        if da.topic is not None:
            out[f"topic={da.topic}"] = 1.0
        return out

    def iter_content_tokens(self, da_id: str) -> Iterator[tuple[int, str, str]]:
        """(content position, surface, stem) for each non-function token."""
        for i, (surface, s) in enumerate(zip(self._content[da_id], self._stems[da_id])):
            yield i, surface, s

    def token(self, da_id: str, tok_index: int) -> dict[str, float]:
        """Features of the tok_index-th content token of a DA."""
        da = self.meeting.da(da_id)
        content = self._content[da_id]
        stems = self._stems[da_id]
        if not 0 <= tok_index < len(content):
            raise IndexError(f"token index {tok_index} out of range for DA {da_id}")
        out: dict[str, float] = {f"tok={stems[tok_index]}": 1.0}
        if tok_index + 1 < len(content):
            out[f"tokbi={stems[tok_index]}_{stems[tok_index + 1]}"] = 1.0
        out["da_len"] = float(len(stems))
        if any(ch.isdigit() for ch in content[tok_index]):
            out["is_digit"] = 1.0
        nxt = self._next_da(da)
        if nxt is not None:
            if stems[tok_index] in self._stem_sets[nxt.id]:
                out["in_next_da"] = 1.0
            if self._feedback[nxt.id]:
                out["next_positive_feedback"] = 1.0
        self._structural(da, out)
        ann = self._annotation_for(da, tok_index)
        if ann is not None:
            if ann.pos is not None:
                out[f"pos={ann.pos}"] = 1.0
            if ann.phrase_type is not None:
                out[f"phrase={ann.phrase_type}"] = 1.0
            if ann.dep_relation is not None:
                out[f"dep={ann.dep_relation}"] = 1.0
        out[f"role={da.role}"] = 1.0
        if da.topic is not None:
            out[f"topic={da.topic}"] = 1.0
        return out

    def _annotation_for(self, da: DialogueAct, tok_index: int):
        """Grammatical annotation of a content token, when the annotation list
        aligns with the tokenization; silently absent otherwise."""
        if da.tokens is None or len(da.tokens) != len(self._tokens[da.id]):
            return None
        return da.tokens[self._content_positions[da.id][tok_index]]


# Spec-level convenience wrappers; pipelines hold a FeatureExtractor instead.


def pairwise_features(
    a: DialogueAct,
    b: DialogueAct,
    meeting: Meeting,
    vectorizer: Vectorizer,
    config: FeatureConfig = FeatureConfig(),
) -> dict[str, float]:
    return FeatureExtractor(meeting, vectorizer, config).pairwise(a.id, b.id)


def da_features(
    da: DialogueAct,
    meeting: Meeting,
    vectorizer: Vectorizer,
    config: FeatureConfig = FeatureConfig(),
) -> dict[str, float]:
    return FeatureExtractor(meeting, vectorizer, config).da(da.id)


def token_features(
    da: DialogueAct,
    tok_index: int,
    meeting: Meeting,
    vectorizer: Vectorizer,
    config: FeatureConfig = FeatureConfig(),
) -> dict[str, float]:
    return FeatureExtractor(meeting, vectorizer, config).token(da.id, tok_index)
