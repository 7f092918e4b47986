import numpy as np
import pytest

from decisum.synth import planted_documents
from decisum.topics import (
    LdaModel,
    fold_in,
    lda_similarity,
    load_model,
    save_model,
    theta,
    train_lda,
)

PLANTED_SEED = 7


@pytest.fixture(scope="module")
def planted():
    docs, labels = planted_documents(
        groups=2, docs_per_group=30, vocab_size=50, doc_length=20, seed=3
    )
    model, thetas = train_lda(
        docs, k=2, alpha=0.1, beta=0.1, iterations=500, seed=PLANTED_SEED
    )
    return docs, labels, model, thetas


def test_thetas_sum_to_one(planted):
    _, _, model, thetas = planted
    assert np.allclose(thetas.sum(axis=1), 1.0, atol=1e-9)
    for d in range(model.n_docs):
        assert abs(theta(model, d).sum() - 1.0) < 1e-9


def test_planted_structure_recovered(planted):
    docs, labels, _, thetas = planted
    intra, inter = _group_similarities(thetas, labels)
    assert intra > 2 * inter


def _group_similarities(thetas, labels):
    intra, n_intra, inter, n_inter = 0.0, 0, 0.0, 0
    for i in range(len(labels)):
        for j in range(i + 1, len(labels)):
            s = lda_similarity(thetas[i], thetas[j])
            if labels[i] == labels[j]:
                intra += s
                n_intra += 1
            else:
                inter += s
                n_inter += 1
    return intra / n_intra, inter / n_inter


def test_training_is_seed_deterministic():
    docs, _ = planted_documents(groups=2, docs_per_group=5, vocab_size=10, doc_length=8, seed=1)
    _, t1 = train_lda(docs, k=3, alpha=0.5, beta=0.1, iterations=40, seed=11)
    _, t2 = train_lda(docs, k=3, alpha=0.5, beta=0.1, iterations=40, seed=11)
    assert np.array_equal(t1, t2)
    _, t3 = train_lda(docs, k=3, alpha=0.5, beta=0.1, iterations=40, seed=12)
    assert not np.array_equal(t1, t3)


def test_count_tables_consistent_after_every_sweep():
    docs, _ = planted_documents(groups=2, docs_per_group=4, vocab_size=8, doc_length=6, seed=2)
    model = LdaModel.initialize(docs, k=3, alpha=0.5, beta=0.1, seed=5)
    assert model.counts_consistent()
    for _ in range(30):
        model.sweep()
        assert model.counts_consistent()
        assert all(
            model.doc_topic[d].sum() == len(model.doc_words[d]) for d in range(model.n_docs)
        )
        assert np.array_equal(model.topic_word.sum(axis=1), model.topic_totals)


def test_loglik_window_means_nondecreasing_on_planted(planted):
    # Non-decreasing up to stationary MCMC noise: after burn-in the chain
    # fluctuates around equilibrium, so later windows are allowed to dip by a
    # small fraction of the burn-in rise. A broken sampler misses by hundreds
    # of nats.
    _, _, model, _ = planted
    ll = model.log_likelihood
    assert len(ll) == 500
    windows = [sum(ll[i * 50 : (i + 1) * 50]) / 50 for i in range(10)]
    burn_in_rise = windows[1] - windows[0]
    assert burn_in_rise > 0
    tol = 0.05 * burn_in_rise
    assert all(b >= a - tol for a, b in zip(windows, windows[1:]))
    assert windows[-1] > windows[0]


def test_theta_degenerate_counts():
    # all tokens of doc 0 on topic 2, vanishing alpha -> one-hot
    model = LdaModel(
        k=4, alpha=1e-9, beta=0.1, vocabulary={"w": 0},
        topic_word=np.zeros((4, 1), dtype=np.int64),
        topic_totals=np.zeros(4, dtype=np.int64),
        doc_topic=np.array([[0, 0, 5, 0]], dtype=np.int64),
        doc_words=[np.zeros(5, dtype=np.int64)],
        assignments=[np.full(5, 2, dtype=np.int64)],
        seed=0,
    )
    t = theta(model, 0)
    assert t[2] == pytest.approx(1.0, abs=1e-6)
    assert t[0] == pytest.approx(0.0, abs=1e-6)


def test_theta_smoothing_limit_uniform():
    model = LdaModel(
        k=4, alpha=1e9, beta=0.1, vocabulary={"w": 0},
        topic_word=np.zeros((4, 1), dtype=np.int64),
        topic_totals=np.zeros(4, dtype=np.int64),
        doc_topic=np.array([[2, 1, 1, 0]], dtype=np.int64),
        doc_words=[np.zeros(4, dtype=np.int64)],
        assignments=[np.array([0, 0, 1, 2], dtype=np.int64)],
        seed=0,
    )
    assert np.allclose(theta(model, 0), 0.25, atol=1e-6)


def test_theta_index_out_of_range(planted):
    _, _, model, _ = planted
    with pytest.raises(IndexError):
        theta(model, model.n_docs)


def test_train_rejects_bad_input():
    with pytest.raises(ValueError):
        train_lda([], k=2, alpha=0.1, beta=0.1, iterations=1, seed=0)
    with pytest.raises(ValueError):
        train_lda([["a"], []], k=2, alpha=0.1, beta=0.1, iterations=1, seed=0)
    with pytest.raises(ValueError):
        train_lda([["a"], ["b"]], k=1, alpha=0.1, beta=0.1, iterations=1, seed=0)


def test_lda_similarity_values():
    uniform = np.full(5, 0.2)
    assert lda_similarity(uniform, uniform) == pytest.approx(0.2)
    a = np.array([1.0, 0.0])
    b = np.array([0.0, 1.0])
    assert lda_similarity(a, a) == 1.0
    assert lda_similarity(a, b) == 0.0
    assert lda_similarity(a, b) == lda_similarity(b, a)
    with pytest.raises(ValueError):
        lda_similarity(np.ones(2), np.ones(3))


def test_fold_in_recovers_group_of_held_out_docs(planted):
    docs, labels, model, thetas = planted
    held_out, held_labels = planted_documents(
        groups=2, docs_per_group=3, vocab_size=50, doc_length=20, seed=77
    )
    new_thetas = fold_in(model, held_out, seed=5, sweeps=50, doc_keys=[f"h{i}" for i in range(6)])
    # centroid theta of each training group
    for i, lab in enumerate(held_labels):
        same = np.mean([lda_similarity(new_thetas[i], thetas[j])
                        for j in range(len(labels)) if labels[j] == lab])
        other = np.mean([lda_similarity(new_thetas[i], thetas[j])
                         for j in range(len(labels)) if labels[j] != lab])
        assert same > other


def test_fold_in_unknown_words_uniform(planted):
    _, _, model, _ = planted
    thetas = fold_in(model, [["zzz-unknown"]], seed=1, doc_keys=["u"])
    assert np.allclose(thetas[0], 1.0 / model.k)


def test_fold_in_order_independent(planted):
    _, _, model, _ = planted
    docs, _ = planted_documents(groups=2, docs_per_group=2, vocab_size=50, doc_length=10, seed=9)
    keys = ["a", "b", "c", "d"]
    full = fold_in(model, docs, seed=3, doc_keys=keys)
    flipped = fold_in(model, docs[::-1], seed=3, doc_keys=keys[::-1])
    assert np.allclose(full, flipped[::-1])


def test_model_roundtrip(tmp_path, planted):
    _, _, model, _ = planted
    path = tmp_path / "lda.json"
    save_model(model, path)
    loaded = load_model(path)
    assert loaded.k == model.k
    assert loaded.vocabulary == model.vocabulary
    assert np.array_equal(loaded.topic_word, model.topic_word)
    docs, _ = planted_documents(groups=2, docs_per_group=1, vocab_size=50, doc_length=10, seed=4)
    a = fold_in(model, docs, seed=2, doc_keys=["k0", "k1"])
    b = fold_in(loaded, docs, seed=2, doc_keys=["k0", "k1"])
    assert np.allclose(a, b)
