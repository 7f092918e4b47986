import math
import random

import pytest

from decisum.metrics import PRF, aggregate, bcubed, mean_f1, pairwise_score, rouge1, voi

from .helpers import as_clustering, random_partition
from .oracles import bcubed_brute, pairwise_brute, rouge1_brute, voi_brute


def _pair(sys_clusters, gold_clusters):
    return as_clustering(sys_clusters), as_clustering(gold_clusters)


# -- b-cubed -----------------------------------------------------------------


def test_bcubed_identical():
    s, g = _pair([{"a", "b"}, {"c"}], [{"a", "b"}, {"c"}])
    assert bcubed(s, g) == PRF(1.0, 1.0, 1.0)


def test_bcubed_hand_example():
    # per-item precision (2/3, 2/3, 1/3) -> 5/9; recall 1 throughout
    s, g = _pair([{"a", "b", "c"}], [{"a", "b"}, {"c"}])
    result = bcubed(s, g)
    assert result.precision == pytest.approx(5 / 9, abs=1e-12)
    assert result.recall == 1.0
    assert result.f1 == pytest.approx(5 / 7, abs=1e-12)


def test_bcubed_single_cluster_recall_is_one():
    rng = random.Random(0)
    for _ in range(20):
        gold = random_partition(rng, rng.randint(2, 10))
        items = set().union(*gold)
        system = as_clustering([items])
        assert bcubed(system, as_clustering(gold)).recall == pytest.approx(1.0)


def test_bcubed_universe_mismatch():
    s = as_clustering([{"a"}])
    g = as_clustering([{"b"}])
    with pytest.raises(ValueError):
        bcubed(s, g)


# -- pairwise ----------------------------------------------------------------


def test_pairwise_identical():
    s, g = _pair([{"a", "b"}, {"c", "d"}], [{"a", "b"}, {"c", "d"}])
    assert pairwise_score(s, g) == PRF(1.0, 1.0, 1.0)


def test_pairwise_hand_example():
    s, g = _pair([{"a", "b", "c", "d"}], [{"a", "b"}, {"c", "d"}])
    result = pairwise_score(s, g)
    assert result.precision == pytest.approx(2 / 6, abs=1e-12)
    assert result.recall == 1.0
    assert result.f1 == pytest.approx(0.5, abs=1e-12)


def test_pairwise_all_singletons_recall_zero():
    s, g = _pair([{"a"}, {"b"}, {"c"}], [{"a", "b"}, {"c"}])
    result = pairwise_score(s, g)
    assert result.recall == 0.0
    assert result.f1 == 0.0
    # vacuous precision: the system predicted no pairs at all
    assert result.precision == 1.0


def test_pairwise_identity_holds_for_every_partition():
    import random

    from .helpers import random_partition

    rng = random.Random(8)
    for _ in range(30):
        x = as_clustering(random_partition(rng, rng.randint(2, 9)))
        assert pairwise_score(x, x) == PRF(1.0, 1.0, 1.0)


def test_pairwise_single_cluster_recall_is_one():
    s, g = _pair([{"a", "b", "c"}], [{"a", "c"}, {"b"}])
    assert pairwise_score(s, g).recall == 1.0


# -- VOI ------------------------------------------------------------------


def test_voi_identical_is_zero():
    s, g = _pair([{"a", "b"}, {"c"}], [{"a", "b"}, {"c"}])
    assert voi(s, g) == pytest.approx(0.0, abs=1e-12)


def test_voi_hand_example_ln2():
    s, g = _pair([{"a", "b", "c", "d"}], [{"a", "b"}, {"c", "d"}])
    assert voi(s, g) == pytest.approx(math.log(2), abs=1e-12)


def test_voi_symmetry():
    rng = random.Random(3)
    for _ in range(20):
        n = rng.randint(2, 10)
        x = as_clustering(random_partition(rng, n))
        y= as_clustering(random_partition(rng, n))
        assert voi(x, y) == pytest.approx(voi(y, x), abs=1e-12)


def test_voi_log2_base():
    s, g = _pair([{"a", "b", "c", "d"}], [{"a", "b"}, {"c", "d"}])
    assert voi(s, g, base=2.0) == pytest.approx(1.0, abs=1e-12)


def test_voi_triangle_inequality():
    rng = random.Random(11)
    for _ in range(100):
        n = rng.randint(2, 10)
        x = as_clustering(random_partition(rng, n))
        y = as_clustering(random_partition(rng, n))
        z = as_clustering(random_partition(rng, n))
        assert voi(x, z) <= voi(x, y) + voi(y, z) + 1e-9


# -- ROUGE-1 -----------------------------------------------------------------


def test_rouge_identical():
    assert rouge1(["a", "b"], ["a", "b"]) == PRF(1.0, 1.0, 1.0)


def test_rouge_hand_example():
    ref = "remote will be plastic coated in rubber".split()
    sys = "plastic rubber remote".split()
    result = rouge1(sys, ref)
    assert result.precision == 1.0
    assert result.recall == pytest.approx(3 / 7, abs=1e-12)
    assert result.f1 == pytest.approx(0.6, abs=1e-12)


def test_rouge_empty_system():
    assert rouge1([], ["a", "b"]) == PRF(0.0, 0.0, 0.0)


def test_rouge_empty_reference_rejected():
    with pytest.raises(ValueError):
        rouge1(["a"], [])


def test_rouge_clipped_counts():
    result = rouge1(["the", "the", "the"], ["the", "the", "cat"])
    assert result.precision == pytest.approx(2 / 3, abs=1e-12)


def test_rouge_stemming_matches_inflections():
    no_stem = rouge1(["buttons"], ["button"], use_stem=False)
    stemmed = rouge1(["buttons"], ["button"], use_stem=True)
    assert no_stem.f1 == 0.0
    assert stemmed.f1 == 1.0


# -- aggregation -------------------------------------------------------------


def test_aggregate_single_entry():
    entry = PRF.from_pr(0.5, 0.25)
    assert aggregate([entry]) == entry


def test_aggregate_mean_of_pr():
    result = aggregate([PRF(1.0, 1.0, 1.0), PRF(0.0, 0.0, 0.0)])
    assert result.precision == 0.5
    assert result.recall == 0.5
    assert result.f1 == 0.5
    assert mean_f1([PRF(1.0, 1.0, 1.0), PRF(0.0, 0.0, 0.0)]) == 0.5


def test_aggregate_order_invariant():
    entries = [PRF.from_pr(0.2, 0.8), PRF.from_pr(0.9, 0.1), PRF.from_pr(0.5, 0.5)]
    assert aggregate(entries) == aggregate(list(reversed(entries)))


def test_aggregate_empty_rejected():
    with pytest.raises(ValueError):
        aggregate([])


# -- oracle equivalence --------------------------------------------------------


def test_clustering_scorers_match_oracles_on_random_partitions():
    rng = random.Random(1234)
    for _ in range(200):
        n = rng.randint(2, 12)
        system = random_partition(rng, n)
        gold = random_partition(rng, n)
        s, g = as_clustering(system), as_clustering(gold)

        bp, br, bf = bcubed_brute(system, gold)
        got = bcubed(s, g)
        assert abs(got.precision - bp) <= 1e-9
        assert abs(got.recall - br) <= 1e-9
        assert abs(got.f1 - bf) <= 1e-9

        pp, pr, pf = pairwise_brute(system, gold)
        got = pairwise_score(s, g)
        assert abs(got.precision - pp) <= 1e-9
        assert abs(got.recall - pr) <= 1e-9
        assert abs(got.f1 - pf) <= 1e-9

        assert abs(voi(s, g) - voi_brute(system, gold)) <= 1e-9

        identity = bcubed(s, s)
        assert identity == PRF(1.0, 1.0, 1.0)
        assert pairwise_score(g, g) == PRF(1.0, 1.0, 1.0)


def test_rouge_matches_oracle_on_random_texts():
    rng = random.Random(99)
    alphabet = ["the", "remote", "rubber", "case", "wheel", "lcd", "b", "c"]
    for _ in range(200):
        sys = [rng.choice(alphabet) for _ in range(rng.randint(0, 15))]
        ref = [rng.choice(alphabet) for _ in range(rng.randint(1, 15))]
        p, r, f = rouge1_brute(sys, ref)
        got = rouge1(sys, ref)
        assert abs(got.precision - p) <= 1e-9
        assert abs(got.recall - r) <= 1e-9
        assert abs(got.f1 - f) <= 1e-9
