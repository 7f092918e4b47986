from __future__ import annotations

import pytest

from decisum.corpus import load_corpus
from decisum.textproc import default_stopwords, default_stopwords_path


@pytest.fixture(scope="session")
def toy_corpus_path():
    return default_stopwords_path().parent / "toy_corpus.jsonl"


@pytest.fixture(scope="session")
def toy_meetings(toy_corpus_path):
    return load_corpus(toy_corpus_path)


@pytest.fixture(scope="session")
def stopwords():
    return default_stopwords()
