"""Meeting data model, JSONL corpus loading/validation, gold clusterings,
and cross-validation folds.

JSONL schema (one meeting object per line):

    {"id": ..., "das": [{"id", "index", "speaker", "role", "start", "end",
     "da_type", "text", "topic"?, "decisions": [], "tokens"?: [{"t", "pos"?,
     "phrase"?, "dep_rel"?, "dep_head"?}]}],
     "adjacency_pairs": [{"source", "target", "type"}],
     "abstracts": [{"id", "text"}]}
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

_MARKER_RE = re.compile(r"\[[^\]]*\]")
_WS_RE = re.compile(r"\s+")


class CorpusError(Exception):
    """Raised on malformed corpus files or invariant violations."""


@dataclass(frozen=True)
class TokenAnnotation:
    surface: str
    pos: str | None = None
    phrase_type: str | None = None
    dep_relation: str | None = None
    dep_head: int | None = None


@dataclass(frozen=True)
class DecisionAbstract:
    id: str
    text: str


@dataclass(frozen=True)
class AdjacencyPair:
    source_da: str
    target_da: str
    ap_type: str


@dataclass(frozen=True)
class DialogueAct:
    id: str
    index: int
    speaker: str
    role: str
    start_time: float
    end_time: float
    da_type: str
    text: str
    topic: str | None = None
    decisions: tuple[str, ...] = ()
    tokens: tuple[TokenAnnotation, ...] | None = None

    @property
    def is_drda(self) -> bool:
        return len(self.decisions) > 0


@dataclass(frozen=True)
class Meeting:
    id: str
    das: tuple[DialogueAct, ...]
    adjacency_pairs: tuple[AdjacencyPair, ...] = ()
    abstracts: tuple[DecisionAbstract, ...] = ()

    @property
    def n(self) -> int:
        return len(self.das)

    def da(self, da_id: str) -> DialogueAct:
        return self._da_index()[da_id]

    def _da_index(self) -> dict[str, DialogueAct]:
        idx = getattr(self, "_da_map", None)
        if idx is None:
            idx = {d.id: d for d in self.das}
            object.__setattr__(self, "_da_map", idx)
        return idx

    def abstract(self, decision_id: str) -> DecisionAbstract:
        for a in self.abstracts:
            if a.id == decision_id:
                return a
        raise KeyError(decision_id)

    def drdas(self) -> list[DialogueAct]:
        return [d for d in self.das if d.is_drda]

    def non_drdas(self) -> list[DialogueAct]:
        return [d for d in self.das if not d.is_drda]


@dataclass(frozen=True)
class Clustering:
    """A partition of DA ids: disjoint non-empty clusters covering the universe."""

    clusters: tuple[frozenset[str], ...]
    universe: frozenset[str]

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for c in self.clusters:
            if not c:
                raise ValueError("clustering contains an empty cluster")
            if seen & c:
                raise ValueError("clustering contains overlapping clusters")
            seen |= c
        if seen != set(self.universe):
            raise ValueError("clusters do not partition the universe")

    @staticmethod
    def from_lists(clusters: Iterable[Iterable[str]]) -> "Clustering":
        cs = tuple(frozenset(c) for c in clusters)
        universe = frozenset(x for c in cs for x in c)
        return Clustering(clusters=cs, universe=universe)

    def cluster_of(self) -> dict[str, frozenset[str]]:
        return {x: c for c in self.clusters for x in c}


# ---------------------------------------------------------------------------
# Loading and validation
# ---------------------------------------------------------------------------


def normalize_text(text: str) -> str:
    """Strip bracketed transcript markers and collapse whitespace."""
    return _WS_RE.sub(" ", _MARKER_RE.sub(" ", text)).strip()


def _annotation_from_dict(obj: dict, meeting_id: str, da_id: str) -> TokenAnnotation:
    if "t" not in obj:
        raise CorpusError(f"meeting {meeting_id}, DA {da_id}: token annotation missing 't'")
    return TokenAnnotation(
        surface=obj["t"],
        pos=obj.get("pos"),
        phrase_type=obj.get("phrase"),
        dep_relation=obj.get("dep_rel"),
        dep_head=obj.get("dep_head"),
    )


def _da_from_dict(obj: dict, meeting_id: str) -> DialogueAct:
    try:
        da_id = obj["id"]
        tokens = None
        if obj.get("tokens") is not None:
            tokens = tuple(_annotation_from_dict(t, meeting_id, da_id) for t in obj["tokens"])
        return DialogueAct(
            id=da_id,
            index=int(obj["index"]),
            speaker=obj["speaker"],
            role=obj["role"],
            start_time=float(obj["start"]),
            end_time=float(obj["end"]),
            da_type=obj["da_type"],
            text=normalize_text(obj["text"]),
            topic=obj.get("topic"),
            decisions=tuple(obj.get("decisions", [])),
            tokens=tokens,
        )
    except KeyError as exc:
        raise CorpusError(f"meeting {meeting_id}: DA missing field {exc}") from exc


def meeting_from_dict(obj: dict) -> Meeting:
    if "id" not in obj:
        raise CorpusError("meeting object missing 'id'")
    mid = obj["id"]
    das = tuple(_da_from_dict(d, mid) for d in obj.get("das", []))
    try:
        aps = tuple(
            AdjacencyPair(source_da=p["source"], target_da=p["target"], ap_type=p["type"])
            for p in obj.get("adjacency_pairs", [])
        )
        abstracts = tuple(
            DecisionAbstract(id=a["id"], text=a["text"]) for a in obj.get("abstracts", [])
        )
    except KeyError as exc:
        raise CorpusError(f"meeting {mid}: record missing field {exc}") from exc
    meeting = Meeting(id=mid, das=das, adjacency_pairs=aps, abstracts=abstracts)
    validate_meeting(meeting)
    return meeting


def validate_meeting(meeting: Meeting) -> None:
    mid = meeting.id
    if not meeting.das:
        raise CorpusError(f"meeting {mid}: no dialogue acts")

    seen_ids: set[str] = set()
    prev_start = None
    for pos, da in enumerate(meeting.das):
        if da.id in seen_ids:
            raise CorpusError(f"meeting {mid}: duplicate DA id {da.id}")
        seen_ids.add(da.id)
        if da.index != pos:
            raise CorpusError(f"meeting {mid}, DA {da.id}: index {da.index} != position {pos}")
        if da.end_time < da.start_time:
            raise CorpusError(f"meeting {mid}, DA {da.id}: end_time before start_time")
        if prev_start is not None and da.start_time < prev_start:
            raise CorpusError(f"meeting {mid}, DA {da.id}: start times not ascending")
        prev_start = da.start_time
        if da.tokens is not None:
            for i, tok in enumerate(da.tokens):
                if tok.dep_head is not None and not (0 <= tok.dep_head < len(da.tokens)):
                    raise CorpusError(
                        f"meeting {mid}, DA {da.id}: token {i} dep_head {tok.dep_head} out of range"
                    )

    abstract_ids: set[str] = set()
    for a in meeting.abstracts:
        if a.id in abstract_ids:
            raise CorpusError(f"meeting {mid}: duplicate abstract id {a.id}")
        abstract_ids.add(a.id)
        if not a.text.strip():
            raise CorpusError(f"meeting {mid}: abstract {a.id} has empty text")

    for da in meeting.das:
        for dec in da.decisions:
            if dec not in abstract_ids:
                raise CorpusError(
                    f"meeting {mid}, DA {da.id}: references unknown decision {dec}"
                )

    for p in meeting.adjacency_pairs:
        for ref in (p.source_da, p.target_da):
            if ref not in seen_ids:
                raise CorpusError(
                    f"meeting {mid}: adjacency pair ({p.source_da} -> {p.target_da}) "
                    f"references unknown DA {ref}"
                )
        src = meeting.da(p.source_da)
        tgt = meeting.da(p.target_da)
        if src.speaker == tgt.speaker:
            raise CorpusError(
                f"meeting {mid}: adjacency pair ({p.source_da} -> {p.target_da}) "
                "has a single speaker on both sides"
            )
        if src.start_time > tgt.start_time:
            raise CorpusError(
                f"meeting {mid}: adjacency pair ({p.source_da} -> {p.target_da}) "
                "source starts after target"
            )


def load_corpus(path: str | Path) -> list[Meeting]:
    """Load and validate a JSONL corpus, one meeting per line."""
    meetings: list[Meeting] = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}: line {lineno}: invalid JSON ({exc.msg})") from exc
            try:
                meetings.append(meeting_from_dict(obj))
            except CorpusError as exc:
                raise CorpusError(f"{path}: line {lineno}: {exc}") from exc
    if not meetings:
        raise CorpusError(f"{path}: corpus contains no meetings")
    return meetings


def meeting_to_dict(meeting: Meeting) -> dict:
    das = []
    for da in meeting.das:
        obj: dict = {
            "id": da.id,
            "index": da.index,
            "speaker": da.speaker,
            "role": da.role,
            "start": da.start_time,
            "end": da.end_time,
            "da_type": da.da_type,
            "text": da.text,
            "decisions": list(da.decisions),
        }
        if da.topic is not None:
            obj["topic"] = da.topic
        if da.tokens is not None:
            toks = []
            for t in da.tokens:
                tok: dict = {"t": t.surface}
                if t.pos is not None:
                    tok["pos"] = t.pos
                if t.phrase_type is not None:
                    tok["phrase"] = t.phrase_type
                if t.dep_relation is not None:
                    tok["dep_rel"] = t.dep_relation
                if t.dep_head is not None:
                    tok["dep_head"] = t.dep_head
                toks.append(tok)
            obj["tokens"] = toks
        das.append(obj)
    return {
        "id": meeting.id,
        "das": das,
        "adjacency_pairs": [
            {"source": p.source_da, "target": p.target_da, "type": p.ap_type}
            for p in meeting.adjacency_pairs
        ],
        "abstracts": [{"id": a.id, "text": a.text} for a in meeting.abstracts],
    }


def save_corpus(meetings: Sequence[Meeting], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for m in meetings:
            handle.write(json.dumps(meeting_to_dict(m), ensure_ascii=False) + "\n")


# ---------------------------------------------------------------------------
# Gold clusterings and folds
# ---------------------------------------------------------------------------


def gold_clustering(meeting: Meeting) -> Clustering:
    """One cluster per decision; a DRDA linked to several decisions goes to
    the lexicographically smallest decision id so the result is a partition."""
    by_decision: dict[str, set[str]] = {}
    for da in meeting.drdas():
        by_decision.setdefault(min(da.decisions), set()).add(da.id)
    clusters = tuple(frozenset(by_decision[d]) for d in sorted(by_decision))
    universe = frozenset(da.id for da in meeting.drdas())
    return Clustering(clusters=clusters, universe=universe)


def kfold_split(
    meetings: Sequence[Meeting], k: int, seed: int
) -> list[tuple[frozenset[str], frozenset[str]]]:
    """Deterministic (train_ids, test_ids) folds; test sizes differ by at most one."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if k > len(meetings):
        raise ValueError(f"k={k} exceeds the number of meetings ({len(meetings)})")
    ids = sorted(m.id for m in meetings)
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate meeting ids")
    rng = random.Random(seed)
    rng.shuffle(ids)
    n = len(ids)
    base, extra = divmod(n, k)
    folds: list[tuple[frozenset[str], frozenset[str]]] = []
    start = 0
    for i in range(k):
        size = base + (1 if i < extra else 0)
        test = frozenset(ids[start : start + size])
        train = frozenset(ids[:start] + ids[start + size :])
        folds.append((train, test))
        start += size
    return folds
