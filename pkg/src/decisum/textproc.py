"""Text preprocessing: tokenization, function-word filtering, Porter stemming,
and sparse TF-IDF vectors with cosine similarity."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

# A sparse TF-IDF vector: dimension index -> weight. Zero entries are omitted.
TfIdfVector = dict[int, float]

_MARKER_RE = re.compile(r"\[[^\]]*\]")
_TOKEN_RE = re.compile(r"[a-z0-9]+(?:['\-][a-z0-9]+)*")


def tokenize(text: str) -> list[str]:
    """Lowercase word tokens; bracketed transcript markers and punctuation
    are dropped, word-internal apostrophes and hyphens are kept."""
    return _TOKEN_RE.findall(_MARKER_RE.sub(" ", text.lower()))


def default_stopwords_path() -> Path:
    return Path(str(resources.files("decisum").joinpath("data/stopwords.txt")))


def load_stopwords(path: str | Path) -> frozenset[str]:
    words = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line:
            words.append(line)
    return frozenset(words)


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    return load_stopwords(default_stopwords_path())


def content_words(tokens: Sequence[str], stopwords: frozenset[str] | None = None) -> list[str]:
    """Drop function words, preserving order."""
    stops = default_stopwords() if stopwords is None else stopwords
    return [t for t in tokens if t not in stops]


# ---------------------------------------------------------------------------
# Porter stemmer (classic 1980 rule set).
#
# Suffix rules are tried in listed order; the first suffix that matches the
# word ends the step, and its replacement is applied only when the condition
# on the remaining stem holds.
# ---------------------------------------------------------------------------

_VOWELS = "aeiou"


def _is_consonant(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        return i == 0 or not _is_consonant(word, i - 1)
    return True


def _measure(stem: str) -> int:
    """Number of vowel-consonant sequences in the stem."""
    m = 0
    prev_vowel = False
    for i in range(len(stem)):
        if _is_consonant(stem, i):
            if prev_vowel:
                m += 1
            prev_vowel = False
        else:
            prev_vowel = True
    return m


def _has_vowel(stem: str) -> bool:
    return any(not _is_consonant(stem, i) for i in range(len(stem)))


def _ends_double_consonant(word: str) -> bool:
    return len(word) >= 2 and word[-1] == word[-2] and _is_consonant(word, len(word) - 1)


def _ends_cvc(word: str) -> bool:
    if len(word) < 3:
        return False
    return (
        _is_consonant(word, len(word) - 3)
        and not _is_consonant(word, len(word) - 2)
        and _is_consonant(word, len(word) - 1)
        and word[-1] not in "wxy"
    )


def _rule_step(word: str, rules: Iterable[tuple[str, str, int]]) -> str:
    """Apply the first rule whose suffix matches; (suffix, repl, min_m)."""
    for suffix, repl, min_m in rules:
        if word.endswith(suffix):
            stem = word[: len(word) - len(suffix)]
            if _measure(stem) > min_m:
                return stem + repl
            return word
    return word


_STEP2 = [
    ("ational", "ate", 0), ("tional", "tion", 0), ("enci", "ence", 0),
    ("anci", "ance", 0), ("izer", "ize", 0), ("abli", "able", 0),
    ("alli", "al", 0), ("entli", "ent", 0), ("eli", "e", 0),
    ("ousli", "ous", 0), ("ization", "ize", 0), ("ation", "ate", 0),
    ("ator", "ate", 0), ("alism", "al", 0), ("iveness", "ive", 0),
    ("fulness", "ful", 0), ("ousness", "ous", 0), ("aliti", "al", 0),
    ("iviti", "ive", 0), ("biliti", "ble", 0),
]

_STEP3 = [
    ("icate", "ic", 0), ("ative", "", 0), ("alize", "al", 0),
    ("iciti", "ic", 0), ("ical", "ic", 0), ("ful", "", 0), ("ness", "", 0),
]

_STEP4 = [
    ("al", "", 1), ("ance", "", 1), ("ence", "", 1), ("er", "", 1),
    ("ic", "", 1), ("able", "", 1), ("ible", "", 1), ("ant", "", 1),
    ("ement", "", 1), ("ment", "", 1), ("ent", "", 1), ("ion", "", 1),
    ("ou", "", 1), ("ism", "", 1), ("ate", "", 1), ("iti", "", 1),
    ("ous", "", 1), ("ive", "", 1), ("ize", "", 1),
]


def stem(token: str) -> str:
    """Porter stem of a lowercase token."""
    word = token
    if len(word) <= 2:
        return word

    # Step 1a
    if word.endswith("sses"):
        word = word[:-2]
    elif word.endswith("ies"):
        word = word[:-2]
    elif word.endswith("ss"):
        pass
    elif word.endswith("s"):
        word = word[:-1]

    # Step 1b
    if word.endswith("eed"):
        if _measure(word[:-3]) > 0:
            word = word[:-1]
    else:
        stripped = None
        if word.endswith("ed") and _has_vowel(word[:-2]):
            stripped = word[:-2]
        elif word.endswith("ing") and _has_vowel(word[:-3]):
            stripped = word[:-3]
        if stripped is not None:
            word = stripped
            if word.endswith(("at", "bl", "iz")):
                word = word + "e"
            elif _ends_double_consonant(word) and word[-1] not in "lsz":
                word = word[:-1]
            elif _measure(word) == 1 and _ends_cvc(word):
                word = word + "e"

    # Step 1c
    if word.endswith("y") and _has_vowel(word[:-1]):
        word = word[:-1] + "i"

    word = _rule_step(word, _STEP2)
    word = _rule_step(word, _STEP3)

    # Step 4; the "ion" rule additionally requires the stem to end in s or t.
    for suffix, repl, min_m in _STEP4:
        if word.endswith(suffix):
            s = word[: len(word) - len(suffix)]
            if _measure(s) > min_m and (suffix != "ion" or s.endswith(("s", "t"))):
                word = s + repl
            break

    # Step 5a
    if word.endswith("e"):
        s = word[:-1]
        m = _measure(s)
        if m > 1 or (m == 1 and not _ends_cvc(s)):
            word = s

    # Step 5b
    if _measure(word) > 1 and _ends_double_consonant(word) and word.endswith("l"):
        word = word[:-1]

    return word


def stem_all(tokens: Sequence[str]) -> list[str]:
    return [stem(t) for t in tokens]


# ---------------------------------------------------------------------------
# TF-IDF
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Vectorizer:
    """Fixed vocabulary with idf weights, fitted on a document collection."""

    vocabulary: dict[str, int]   # word -> dense dimension in 0..L-1
    idf: tuple[float, ...]       # per-dimension ln(N/df)
    n_docs: int

    @property
    def n_dims(self) -> int:
        return len(self.vocabulary)


def fit_vectorizer(documents: Sequence[Sequence[str]], smooth: bool = False) -> Vectorizer:
    """Fit vocabulary and idf on token lists, one list per document.

    idf(w) = ln(N/df(w)); with smooth=True, ln((1+N)/(1+df(w))) instead.
    """
    if not documents:
        raise ValueError("cannot fit a vectorizer on an empty document collection")
    df: dict[str, int] = {}
    for doc in documents:
        for w in set(doc):
            df[w] = df.get(w, 0) + 1
    vocab = {w: i for i, w in enumerate(sorted(df))}
    n = len(documents)
    idf = [0.0] * len(vocab)
    for w, dim in vocab.items():
        if smooth:
            idf[dim] = math.log((1.0 + n) / (1.0 + df[w]))
        else:
            idf[dim] = math.log(n / df[w])
    return Vectorizer(vocabulary=vocab, idf=tuple(idf), n_docs=n)


def vectorize(v: Vectorizer, tokens: Sequence[str]) -> TfIdfVector:
    """tf * idf over the fitted vocabulary; out-of-vocabulary tokens are dropped."""
    counts: dict[int, int] = {}
    for t in tokens:
        dim = v.vocabulary.get(t)
        if dim is not None:
            counts[dim] = counts.get(dim, 0) + 1
    vec: TfIdfVector = {}
    for dim, tf in counts.items():
        weight = tf * v.idf[dim]
        if weight != 0.0:
            vec[dim] = weight
    return vec


def norm(a: TfIdfVector) -> float:
    return math.sqrt(sum(x * x for x in a.values()))


def dot(a: TfIdfVector, b: TfIdfVector) -> float:
    if len(b) < len(a):
        a, b = b, a
    return sum(x * b.get(dim, 0.0) for dim, x in a.items())


def cosine(a: TfIdfVector, b: TfIdfVector) -> float:
    """Cosine similarity; 0.0 when either operand has zero norm."""
    na = norm(a)
    nb = norm(b)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return dot(a, b) / (na * nb)


def centroid(vectors: Sequence[TfIdfVector]) -> TfIdfVector:
    """Dimension-wise arithmetic mean."""
    if not vectors:
        raise ValueError("centroid of an empty vector list is undefined")
    total: dict[int, float] = {}
    for vec in vectors:
        for dim, x in vec.items():
            total[dim] = total.get(dim, 0.0) + x
    k = len(vectors)
    return {dim: x / k for dim, x in total.items()}
