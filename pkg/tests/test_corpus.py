import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from decisum.corpus import (
    Clustering,
    CorpusError,
    gold_clustering,
    kfold_split,
    load_corpus,
    meeting_from_dict,
    meeting_to_dict,
    save_corpus,
)


def _minimal_meeting(**overrides):
    obj = {
        "id": "m1",
        "das": [
            {"id": "m1.0", "index": 0, "speaker": "A", "role": "PM", "start": 1.0,
             "end": 2.0, "da_type": "inf", "text": "we will use rubber", "decisions": ["d1"]},
            {"id": "m1.1", "index": 1, "speaker": "B", "role": "ME", "start": 3.0,
             "end": 4.0, "da_type": "bck", "text": "Yeah .", "decisions": []},
        ],
        "adjacency_pairs": [],
        "abstracts": [{"id": "d1", "text": "Use rubber."}],
    }
    obj.update(overrides)
    return obj


def test_load_toy_corpus(toy_meetings):
    assert len(toy_meetings) == 3
    for m in toy_meetings:
        assert m.n > 0
        assert all(da.index == i for i, da in enumerate(m.das))


def test_text_markers_stripped_on_load(toy_meetings):
    m2 = toy_meetings[1]
    assert "[disfmarker]" not in m2.das[0].text
    assert "  " not in m2.das[0].text


def test_roundtrip(toy_meetings, tmp_path):
    path = tmp_path / "copy.jsonl"
    save_corpus(toy_meetings, path)
    reloaded = load_corpus(path)
    assert reloaded == toy_meetings


def test_unknown_ap_reference_is_an_error():
    obj = _minimal_meeting(adjacency_pairs=[{"source": "m1.0", "target": "nope", "type": "qa"}])
    with pytest.raises(CorpusError, match="nope"):
        meeting_from_dict(obj)


def test_unknown_decision_is_an_error():
    obj = _minimal_meeting()
    obj["das"][0]["decisions"] = ["d9"]
    with pytest.raises(CorpusError, match="d9"):
        meeting_from_dict(obj)


def test_ap_same_speaker_rejected():
    obj = _minimal_meeting()
    obj["das"][1]["speaker"] = "A"
    obj["adjacency_pairs"] = [{"source": "m1.0", "target": "m1.1", "type": "qa"}]
    with pytest.raises(CorpusError, match="speaker"):
        meeting_from_dict(obj)


def test_unsorted_das_rejected():
    obj = _minimal_meeting()
    obj["das"][0]["start"] = 10.0
    obj["das"][0]["end"] = 11.0
    with pytest.raises(CorpusError, match="ascending"):
        meeting_from_dict(obj)


def test_bad_index_rejected():
    obj = _minimal_meeting()
    obj["das"][1]["index"] = 5
    with pytest.raises(CorpusError, match="index"):
        meeting_from_dict(obj)


def test_parse_error_reports_line_number(tmp_path):
    path = tmp_path / "broken.jsonl"
    path.write_text(json.dumps(_minimal_meeting()) + "\n{not json\n", encoding="utf-8")
    with pytest.raises(CorpusError, match="line 2"):
        load_corpus(path)


def test_empty_corpus_rejected(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("", encoding="utf-8")
    with pytest.raises(CorpusError):
        load_corpus(path)


def test_dep_head_out_of_range_rejected():
    obj = _minimal_meeting()
    obj["das"][0]["tokens"] = [{"t": "we", "dep_head": 9}]
    with pytest.raises(CorpusError, match="dep_head"):
        meeting_from_dict(obj)


# -- gold clusterings --------------------------------------------------------


def test_gold_clustering_table_one_sizes(toy_meetings):
    gold = gold_clustering(toy_meetings[0])
    assert sorted(len(c) for c in gold.clusters) == [1, 2, 2, 3]


def test_gold_clustering_universe_is_exactly_the_drdas(toy_meetings):
    for m in toy_meetings:
        gold = gold_clustering(m)
        assert gold.universe == {da.id for da in m.drdas()}


def test_gold_clustering_empty_meeting():
    obj = _minimal_meeting()
    obj["das"][0]["decisions"] = []
    m = meeting_from_dict(obj)
    gold = gold_clustering(m)
    assert gold.clusters == ()
    assert gold.universe == frozenset()


def test_multi_decision_da_assigned_to_smallest_id():
    obj = _minimal_meeting()
    obj["das"][0]["decisions"] = ["d2", "d1"]
    obj["abstracts"] = [{"id": "d1", "text": "one"}, {"id": "d2", "text": "two"}]
    m = meeting_from_dict(obj)
    gold = gold_clustering(m)
    assert gold.clusters == (frozenset({"m1.0"}),)


def test_clustering_invariants_enforced():
    with pytest.raises(ValueError):
        Clustering(clusters=(frozenset(),), universe=frozenset())
    with pytest.raises(ValueError):
        Clustering(clusters=(frozenset({"a"}), frozenset({"a"})), universe=frozenset({"a"}))
    with pytest.raises(ValueError):
        Clustering(clusters=(frozenset({"a"}),), universe=frozenset({"a", "b"}))


# -- folds ---------------------------------------------------------------


def _fake_meetings(n):
    return [meeting_from_dict(_minimal_meeting(id=f"m{i}", das=[
        {"id": f"m{i}.0", "index": 0, "speaker": "A", "role": "PM", "start": 0.0,
         "end": 1.0, "da_type": "inf", "text": "x", "decisions": []},
    ], abstracts=[])) for i in range(n)]


def test_kfold_balanced_partition():
    folds = kfold_split(_fake_meetings(6), k=3, seed=0)
    tests = [te for _, te in folds]
    assert all(len(t) == 2 for t in tests)
    assert frozenset().union(*tests) == {f"m{i}" for i in range(6)}
    for i in range(3):
        for j in range(i + 1, 3):
            assert not tests[i] & tests[j]
        assert not folds[i][0] & folds[i][1]


def test_kfold_deterministic():
    ms = _fake_meetings(7)
    assert kfold_split(ms, 3, seed=42) == kfold_split(ms, 3, seed=42)
    assert kfold_split(ms, 3, seed=42) != kfold_split(ms, 3, seed=43)


def test_kfold_129_meetings_gives_43_43_43():
    folds = kfold_split(_fake_meetings(129), k=3, seed=1)
    assert [len(te) for _, te in folds] == [43, 43, 43]


def test_kfold_rejects_bad_k():
    ms = _fake_meetings(3)
    with pytest.raises(ValueError):
        kfold_split(ms, k=4, seed=0)
    with pytest.raises(ValueError):
        kfold_split(ms, k=1, seed=0)


@given(st.integers(2, 12), st.integers(2, 6), st.integers(0, 10_000))
def test_kfold_properties(n, k, seed):
    if k > n:
        return
    ms = _fake_meetings(n)
    folds = kfold_split(ms, k, seed)
    tests = [te for _, te in folds]
    assert frozenset().union(*tests) == {m.id for m in ms}
    sizes = sorted(len(t) for t in tests)
    assert sizes[-1] - sizes[0] <= 1
    for train, test in folds:
        assert train | test == {m.id for m in ms}
        assert not train & test
