#!/usr/bin/env python3
"""Regenerate the bundled toy corpus (src/decisum/data/toy_corpus.jsonl).

Three small scenario meetings with gold decision links, adjacency pairs,
abstracts, and (in toy03) grammatical token annotations.
"""

from __future__ import annotations

from pathlib import Path

from decisum.corpus import (
    AdjacencyPair,
    DecisionAbstract,
    DialogueAct,
    Meeting,
    TokenAnnotation,
    save_corpus,
    validate_meeting,
)

ROLES = {"A": "PM", "B": "ME", "C": "UI", "D": "ID"}


def _da(mid, idx, speaker, start, end, da_type, text, decisions=(), topic=None, tokens=None):
    return DialogueAct(
        id=f"{mid}.{idx:02d}",
        index=idx,
        speaker=speaker,
        role=ROLES[speaker],
        start_time=start,
        end_time=end,
        da_type=da_type,
        text=text,
        topic=topic,
        decisions=tuple(decisions),
        tokens=tokens,
    )


def meeting_toy01() -> Meeting:
    mid = "toy01"
    das = (
        _da(mid, 0, "C", 12.1, 14.8, "inf", "Just spinning and not scrolling , I would say .", ["d1"], "look-and-feel"),
        _da(mid, 1, "B", 15.0, 15.4, "bck", "Yeah .", [], "look-and-feel"),
        _da(mid, 2, "C", 30.5, 39.2, "inf",
            "But if you've got a [disfmarker] if if you've got a flipped thing , effectively it's "
            "something that's curved on one side and flat on the other side , but you folded it in half .",
            ["d2"], "look-and-feel"),
        _da(mid, 3, "D", 55.0, 58.9, "inf", "the case would be rubber and the the buttons ,", ["d3"], "components"),
        _da(mid, 4, "A", 60.2, 62.0, "el.inf", "Are we going with rubber buttons ?", [], "components"),
        _da(mid, 5, "D", 63.1, 63.6, "bck", "Yeah .", [], "components"),
        _da(mid, 6, "B", 75.4, 78.8, "inf", "I think the spinning wheel is definitely very now .", ["d1"], "look-and-feel"),
        _da(mid, 7, "B", 90.0, 96.5, "inf",
            "and then make the colour of the main remote [vocalsound] the colour like vegetable colours , do you know ?",
            ["d4"], "look-and-feel"),
        _da(mid, 8, "B", 98.2, 104.0, "inf",
            "I mean I suppose vegetable colours would be orange and green and some reds and um maybe purple",
            ["d4"], "look-and-feel"),
        _da(mid, 9, "A", 110.3, 112.9, "inf", "but since LCDs seems to be uh a definite yes ,", ["d1"], "components"),
        _da(mid, 10, "A", 118.0, 119.5, "inf", "Flat on the top .", ["d2"], "look-and-feel"),
        _da(mid, 11, "D", 130.0, 132.5, "fra", "Okay , let's wrap up this discussion .", [], "closing"),
    )
    aps = (
        AdjacencyPair(f"{mid}.00", f"{mid}.01", "positive"),
        AdjacencyPair(f"{mid}.04", f"{mid}.05", "qa"),
    )
    abstracts = (
        DecisionAbstract("d1", "The remote will have an LCD and spinning wheel inside."),
        DecisionAbstract("d2", "The case will be flat on top and curved on the bottom."),
        DecisionAbstract("d3", "The remote control and its buttons will be made of rubber."),
        DecisionAbstract("d4", "The remote will resemble a vegetable and be in bright vegetable colors."),
    )
    return Meeting(id=mid, das=das, adjacency_pairs=aps, abstracts=abstracts)


def meeting_toy02() -> Meeting:
    mid = "toy02"
    das = (
        _da(mid, 0, "B", 5.0, 11.2, "inf",
            "um of course , as [disfmarker] we , we've already talked about the personal face plates in this meeting ,",
            ["a"]),
        _da(mid, 1, "A", 12.0, 12.8, "bck", "Yeah , exactly .", []),
        _da(mid, 2, "B", 14.5, 16.0, "inf", "and I'd like to stick to that .", ["a"]),
        _da(mid, 3, "C", 20.0, 21.8, "el.inf", "What about the case material ?", []),
        _da(mid, 4, "D", 22.4, 25.0, "inf", "Well , I guess plastic and coated in rubber .", ["b"]),
        _da(mid, 5, "D", 26.0, 30.1, "inf", "So the actual remote would be hard plastic and the casings rubber .", ["b"]),
        _da(mid, 6, "A", 35.2, 38.0, "fra", "Okay , to recap , face plates it is .", []),
    )
    aps = (
        AdjacencyPair(f"{mid}.00", f"{mid}.01", "positive"),
        AdjacencyPair(f"{mid}.03", f"{mid}.04", "qa"),
    )
    abstracts = (
        DecisionAbstract("a", "Will use personal face plates."),
        DecisionAbstract("b", "Case will be plastic and coated in rubber."),
    )
    return Meeting(id=mid, das=das, adjacency_pairs=aps, abstracts=abstracts)


def meeting_toy03() -> Meeting:
    mid = "toy03"
    buttons_tokens = (
        TokenAnnotation("it", pos="PRP", phrase_type="NP", dep_relation="nsubj", dep_head=1),
        TokenAnnotation("needs", pos="VBZ", phrase_type="VP", dep_relation="root"),
        TokenAnnotation("15", pos="CD", phrase_type="NP", dep_relation="num", dep_head=3),
        TokenAnnotation("buttons", pos="NNS", phrase_type="NP", dep_relation="dobj", dep_head=1),
        TokenAnnotation("and", pos="CC", phrase_type="other", dep_relation="cc", dep_head=3),
        TokenAnnotation("a", pos="DT", phrase_type="NP", dep_relation="det", dep_head=7),
        TokenAnnotation("menu", pos="NN", phrase_type="NP", dep_relation="nn", dep_head=7),
        TokenAnnotation("button", pos="NN", phrase_type="NP", dep_relation="conj", dep_head=3),
    )
    plates_tokens = (
        TokenAnnotation("so", pos="RB", phrase_type="other", dep_relation="advmod", dep_head=5),
        TokenAnnotation("the", pos="DT", phrase_type="NP", dep_relation="det", dep_head=3),
        TokenAnnotation("face", pos="NN", phrase_type="NP", dep_relation="nn", dep_head=3),
        TokenAnnotation("plates", pos="NNS", phrase_type="NP", dep_relation="nsubj", dep_head=5),
        TokenAnnotation("will", pos="MD", phrase_type="VP", dep_relation="aux", dep_head=5),
        TokenAnnotation("be", pos="VB", phrase_type="VP", dep_relation="root"),
        TokenAnnotation("in", pos="IN", phrase_type="PP", dep_relation="prep", dep_head=5),
        TokenAnnotation("bright", pos="JJ", phrase_type="NP", dep_relation="amod", dep_head=8),
        TokenAnnotation("colours", pos="NNS", phrase_type="PP", dep_relation="pobj", dep_head=6),
    )
    das = (
        _da(mid, 0, "A", 8.0, 11.5, "inf", "We talked about the buttons in the last meeting .", ["e1"], "components"),
        _da(mid, 1, "B", 12.0, 16.2, "inf", "Yeah , we talked about a menu button in that meeting too .", ["e1"], "components"),
        _da(mid, 2, "C", 20.1, 23.0, "inf", "It needs 15 buttons and a menu button .", ["e1"], "components",
            tokens=buttons_tokens),
        _da(mid, 3, "B", 23.8, 24.2, "bck", "Okay .", [], "components"),
        _da(mid, 4, "D", 30.0, 32.4, "el.inf", "What colour should the personal face plates be ?", [], "look-and-feel"),
        _da(mid, 5, "A", 33.0, 38.5, "inf",
            "We talked about bright colours for the personal face plates in the kick-off meeting .",
            ["e2"], "look-and-feel"),
        _da(mid, 6, "B", 40.0, 43.1, "inf", "Yeah , bright face plates , that's the fashion now .", ["e2"], "look-and-feel"),
        _da(mid, 7, "C", 45.5, 48.0, "inf", "So the face plates will be in bright colours .", ["e2"], "look-and-feel",
            tokens=plates_tokens),
        _da(mid, 8, "D", 52.0, 53.9, "el.ass", "Anything else about the buttons ?", [], "components"),
        _da(mid, 9, "A", 60.0, 62.2, "fra", "Let's wrap up and finish the meeting .", [], "closing"),
    )
    aps = (
        AdjacencyPair(f"{mid}.02", f"{mid}.03", "positive"),
        AdjacencyPair(f"{mid}.04", f"{mid}.05", "qa"),
    )
    abstracts = (
        DecisionAbstract("e1", "The remote will have 15 buttons and a menu button."),
        DecisionAbstract("e2", "The personal face plates will come in bright colours."),
    )
    return Meeting(id=mid, das=das, adjacency_pairs=aps, abstracts=abstracts)


def build() -> list[Meeting]:
    meetings = [meeting_toy01(), meeting_toy02(), meeting_toy03()]
    for m in meetings:
        validate_meeting(m)
    return meetings


if __name__ == "__main__":
    out = Path(__file__).resolve().parents[1] / "src" / "decisum" / "data" / "toy_corpus.jsonl"
    save_corpus(build(), out)
    print(f"wrote {out}")
