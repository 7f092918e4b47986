"""Synthetic corpora with planted decision structure, for experiments and
regression checks: each decision draws its words from a theme vocabulary
disjoint from every other theme."""

from __future__ import annotations

import random
from typing import Sequence

from .config import LdaSettings, PipelineConfig
from .corpus import AdjacencyPair, DecisionAbstract, DialogueAct, Meeting, validate_meeting

_SPEAKERS = ("A", "B", "C", "D")
_ROLES = {"A": "PM", "B": "ME", "C": "UI", "D": "ID"}
_CHATTER = (
    "Yeah .",
    "Okay .",
    "Mm-hmm , moving on .",
    "Can everyone see the whiteboard ?",
    "Let me pull up the slides .",
    "Right , let's wrap up .",
)


def theme_vocabulary(theme: int, size: int = 30) -> list[str]:
    return [f"theme{theme}word{j:02d}" for j in range(size)]


def planted_documents(
    groups: int = 2,
    docs_per_group: int = 30,
    vocab_size: int = 50,
    doc_length: int = 20,
    seed: int = 0,
) -> tuple[list[list[str]], list[int]]:
    """Token lists drawn from per-group disjoint vocabularies, plus group labels."""
    rng = random.Random(seed)
    docs: list[list[str]] = []
    labels: list[int] = []
    for g in range(groups):
        vocab = [f"group{g}word{j:02d}" for j in range(vocab_size)]
        for _ in range(docs_per_group):
            docs.append([rng.choice(vocab) for _ in range(doc_length)])
            labels.append(g)
    return docs, labels


def planted_meeting(
    meeting_id: str,
    themes: Sequence[int],
    das_per_decision: int,
    rng: random.Random,
    words_per_da: tuple[int, int] = (8, 12),
    theme_vocab_size: int = 30,
) -> Meeting:
    """One meeting with a decision per theme; decision DAs are interleaved in
    time so same-decision DAs are not contiguous."""
    vocabs = {t: theme_vocabulary(t, theme_vocab_size) for t in themes}
    decision_ids = {t: f"{meeting_id}.dec{t}" for t in themes}

    slots: list[int] = []
    for _ in range(das_per_decision):
        slots.extend(themes)

    das: list[DialogueAct] = []
    start = 10.0
    for theme in slots:
        n_words = rng.randint(*words_per_da)
        words = [rng.choice(vocabs[theme]) for _ in range(n_words)]
        das.append(
            DialogueAct(
                id=f"{meeting_id}.{len(das):02d}",
                index=len(das),
                speaker=_SPEAKERS[len(das) % 4],
                role=_ROLES[_SPEAKERS[len(das) % 4]],
                start_time=start,
                end_time=start + 4.0,
                da_type="inf",
                text="so the " + " ".join(words) + " .",
                decisions=(decision_ids[theme],),
            )
        )
        start += rng.uniform(5.0, 9.0)
    for text in _CHATTER:
        das.append(
            DialogueAct(
                id=f"{meeting_id}.{len(das):02d}",
                index=len(das),
                speaker=_SPEAKERS[len(das) % 4],
                role=_ROLES[_SPEAKERS[len(das) % 4]],
                start_time=start,
                end_time=start + 2.0,
                da_type="bck" if text in ("Yeah .", "Okay .") else "inf",
                text=text,
                decisions=(),
            )
        )
        start += rng.uniform(3.0, 5.0)

    abstracts = tuple(
        DecisionAbstract(
            id=decision_ids[t],
            text="The team will use " + " ".join(rng.sample(vocabs[t], 3)) + " .",
        )
        for t in themes
    )
    ap = AdjacencyPair(das[0].id, das[1].id, "positive") if das[0].speaker != das[1].speaker else None
    meeting = Meeting(
        id=meeting_id,
        das=tuple(das),
        adjacency_pairs=(ap,) if ap else (),
        abstracts=abstracts,
    )
    validate_meeting(meeting)
    return meeting


def planted_corpus(
    n_meetings: int = 6,
    themes: int = 3,
    das_per_decision: int = 4,
    seed: int = 13,
) -> list[Meeting]:
    """Meetings that all reuse the same global themes, one decision per theme."""
    rng = random.Random(seed)
    return [
        planted_meeting(f"synth{i:02d}", range(themes), das_per_decision, rng)
        for i in range(n_meetings)
    ]


def planted_config(themes: int = 3) -> PipelineConfig:
    """Pipeline settings for the planted corpus: one topic per theme, and a
    sparse document prior so cross-theme topic dot products (about
    alpha/doc_len per stray component) land well below the 0.015 merge
    threshold."""
    cfg = PipelineConfig()
    cfg.lda = LdaSettings(topics=themes, alpha=0.05, beta=0.1, iterations=300)
    return cfg
