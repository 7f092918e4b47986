import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from decisum.textproc import (
    centroid,
    content_words,
    cosine,
    fit_vectorizer,
    stem,
    tokenize,
    vectorize,
)

# Reference pairs for the full classic algorithm (suffix stripping chains
# included, e.g. generalizations -> gener).
PORTER_VECTORS = {
    "caresses": "caress", "ponies": "poni", "ties": "ti", "caress": "caress",
    "cats": "cat", "feed": "feed", "agreed": "agre", "plastered": "plaster",
    "bled": "bled", "motoring": "motor", "sing": "sing", "sized": "size",
    "hopping": "hop", "tanned": "tan", "falling": "fall", "hissing": "hiss",
    "fizzed": "fizz", "failing": "fail", "filing": "file", "happy": "happi",
    "sky": "sky", "relational": "relat", "conditional": "condit",
    "rational": "ration", "valenci": "valenc", "hesitanci": "hesit",
    "digitizer": "digit", "conformabli": "conform", "radicalli": "radic",
    "differentli": "differ", "vileli": "vile", "analogousli": "analog",
    "vietnamization": "vietnam", "predication": "predic", "operator": "oper",
    "feudalism": "feudal", "decisiveness": "decis", "hopefulness": "hope",
    "callousness": "callous", "formaliti": "formal", "sensitiviti": "sensit",
    "sensibiliti": "sensibl", "triplicate": "triplic", "formative": "form",
    "formalize": "formal", "electriciti": "electr", "electrical": "electr",
    "hopeful": "hope", "goodness": "good", "revival": "reviv",
    "allowance": "allow", "inference": "infer", "airliner": "airlin",
    "gyroscopic": "gyroscop", "adjustable": "adjust", "defensible": "defens",
    "irritant": "irrit", "replacement": "replac", "adjustment": "adjust",
    "dependent": "depend", "adoption": "adopt", "homologou": "homolog",
    "communism": "commun", "activate": "activ", "angulariti": "angular",
    "effective": "effect", "bowdlerize": "bowdler", "probate": "probat",
    "rate": "rate", "cease": "ceas", "controll": "control", "roll": "roll",
    "generalizations": "gener", "oscillators": "oscil",
    "spinning": "spin", "rubber": "rubber", "buttons": "button",
    "casings": "case", "coated": "coat",
}


@pytest.mark.parametrize("word,expected", sorted(PORTER_VECTORS.items()))
def test_porter_reference_vectors(word, expected):
    assert stem(word) == expected


def test_stem_short_word_noop():
    assert stem("a") == "a"
    assert stem("be") == "be"
    assert stem("") == ""


def test_stem_idempotent_on_toy_vocabulary(toy_meetings, stopwords):
    vocab = set()
    for m in toy_meetings:
        for da in m.das:
            vocab.update(content_words(tokenize(da.text), stopwords))
        for a in m.abstracts:
            vocab.update(content_words(tokenize(a.text), stopwords))
    for word in sorted(vocab):
        assert stem(stem(word)) == stem(word), word


def test_tokenize_strips_punctuation():
    assert tokenize("Flat on the top .") == ["flat", "on", "the", "top"]


def test_tokenize_table_one_da_has_nine_tokens():
    toks = tokenize("the case would be rubber and the the buttons ,")
    assert len(toks) == 9
    assert toks.count("the") == 3


def test_tokenize_empty():
    assert tokenize("") == []


def test_tokenize_drops_bracketed_markers():
    assert tokenize("you've got a [disfmarker] thing") == ["you've", "got", "a", "thing"]


def test_content_words_drops_stopwords():
    assert content_words(["flat", "on", "the", "top"]) == ["flat", "top"]


def test_content_words_all_stopwords():
    assert content_words(["the", "of", "and", "um"]) == []
    assert content_words([]) == []


def test_fit_vectorizer_idf_values():
    v = fit_vectorizer([["spinning", "wheel"], ["spinning", "scroll"]])
    dim = v.vocabulary["spinning"]
    assert v.idf[dim] == 0.0
    v4 = fit_vectorizer([["rare"], ["x"], ["y"], ["z"]])
    assert v4.idf[v4.vocabulary["rare"]] == pytest.approx(math.log(4), abs=1e-12)


def test_fit_vectorizer_vocabulary_size():
    v = fit_vectorizer([["a", "b"], ["b", "c"], ["d"]])
    assert v.n_dims == 4
    assert sorted(v.vocabulary.values()) == [0, 1, 2, 3]


def test_fit_vectorizer_rejects_empty_corpus():
    with pytest.raises(ValueError):
        fit_vectorizer([])


def test_vectorize_drops_unknown_words():
    v = fit_vectorizer([["spinning", "wheel"], ["scroll"]])
    vec = vectorize(v, ["spinning", "never-seen-before"])
    assert set(vec) <= set(v.vocabulary.values())


def test_cosine_identity_and_orthogonality():
    v = fit_vectorizer([["a", "b"], ["c", "d"], ["e"]])
    va = vectorize(v, ["a", "b"])
    vc = vectorize(v, ["c", "d"])
    assert cosine(va, va) == pytest.approx(1.0)
    assert cosine(va, vc) == 0.0


def test_cosine_shared_idf_zero_term():
    # both documents share their only common term, which has idf 0
    v = fit_vectorizer([["spinning", "wheel"], ["spinning", "scroll"]])
    d1 = vectorize(v, ["spinning", "wheel"])
    d2 = vectorize(v, ["spinning", "scroll"])
    assert cosine(d1, d2) == 0.0


def test_cosine_zero_vector():
    assert cosine({}, {0: 1.0}) == 0.0


def test_centroid_mean():
    c = centroid([{0: 1.0, 1: 2.0}, {0: 3.0}])
    assert c == {0: 2.0, 1: 1.0}
    with pytest.raises(ValueError):
        centroid([])


@given(
    st.dictionaries(st.integers(0, 6), st.floats(0.0, 10.0), max_size=5),
    st.dictionaries(st.integers(0, 6), st.floats(0.0, 10.0), max_size=5),
    st.floats(0.1, 50.0),
)
def test_cosine_symmetry_range_and_scale_invariance(a, b, alpha):
    s1 = cosine(a, b)
    s2 = cosine(b, a)
    assert s1 == pytest.approx(s2, abs=1e-12)
    assert -1e-12 <= s1 <= 1.0 + 1e-12
    scaled = {k: alpha * v for k, v in a.items()}
    assert cosine(scaled, b) == pytest.approx(s1, abs=1e-9)
