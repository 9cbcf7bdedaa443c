import itertools

import numpy as np
import pytest

import oracles
from conftest import as_sets
from sarymsakov import classes as cl
from sarymsakov.consensus import (
    NotConsensusSet,
    decide_consensus,
    horizons,
    replay,
    semigroup_closure,
)
from sarymsakov.construct import breaker, companion, gallery, r_matrix, random_in_class
from sarymsakov.matrix import BooleanPattern, StochasticMatrix, pattern_of

CYCLE3 = BooleanPattern.from_sets([[1], [2], [0]])


def numeric_word_pattern(gens, word):
    """Support of the numeric left-product, built from 0/1 row-normalised matrices."""
    mats = [oracles.rows_to_matrix(as_sets(g)) for g in gens]
    prod = np.eye(gens[0].n)
    for i in word:
        prod = mats[i] @ prod
    return oracles.support(prod)


def positive_column(rows):
    return bool(frozenset.intersection(*rows))


def horizon_by_words(gens, pred, max_len):
    """Least h such that every word of length h..max_len satisfies pred."""
    last_bad = 0
    for k in range(1, max_len + 1):
        if not all(pred(numeric_word_pattern(gens, w)) for w in itertools.product(range(len(gens)), repeat=k)):
            last_bad = k
    assert last_bad < max_len, "horizon not reached within the enumerated lengths"
    return last_bad + 1


class TestClosure:
    def test_three_cycle(self):
        c = semigroup_closure([CYCLE3])
        assert len(c) == 3 and not c.truncated
        assert c.elements == {CYCLE3, CYCLE3 @ CYCLE3, BooleanPattern.identity(3)}

    def test_all_positive(self):
        assert len(semigroup_closure([BooleanPattern.full(3)])) == 1

    def test_w_pair_contains_product(self):
        p1, p2 = (pattern_of(m) for m in gallery("sec4_pair").matrices)
        c = semigroup_closure([p1, p2])
        assert p1 @ p2 in c.elements
        assert not cl.is_sia(p1 @ p2)

    def test_words_replay_and_are_shortest(self, rng):
        gens = [pattern_of(random_in_class("stochastic", 4, rng)) for _ in range(3)]
        c = semigroup_closure(gens)
        for p, w in c.words.items():
            assert replay(gens, w) == p
        # brute-force shortest lengths by enumerating words of increasing length
        shortest = {}
        for k in range(1, max(map(len, c.words.values())) + 1):
            for w in itertools.product(range(3), repeat=k):
                shortest.setdefault(replay(gens, w), (k, w))
        assert set(shortest) == c.elements
        for p, w in c.words.items():
            assert (len(w), w) == shortest[p]

    def test_closed_under_products(self, rng):
        gens = [pattern_of(random_in_class("stochastic", 4, rng)) for _ in range(2)]
        c = semigroup_closure(gens)
        for e in c.elements:
            for g in gens:
                assert g @ e in c.elements

    def test_replay_orientation_matches_numeric(self, rng):
        gens = [pattern_of(random_in_class("stochastic", 4, rng)) for _ in range(3)]
        for w in [(0, 1), (1, 0), (2, 0, 1), (0, 0, 2, 1)]:
            assert as_sets(replay(gens, w)) == numeric_word_pattern(gens, w)

    def test_budget_truncates(self):
        c = semigroup_closure([CYCLE3], budget=2)
        assert c.truncated and len(c) == 2


class TestDecision:
    def test_w_pair(self):
        gens = [pattern_of(m) for m in gallery("sec4_pair").matrices]
        d = decide_consensus(gallery("sec4_pair").matrices)
        assert d.is_consensus_set is False and len(d.witness_word) == 2
        assert not cl.is_sia(replay(gens, d.witness_word))
        assert d.horizons is None

    def test_patsym_pair(self):
        mats = gallery("patsym_pair").matrices
        d = decide_consensus(mats)
        assert d.is_consensus_set is False
        assert not cl.is_sia(replay([pattern_of(m) for m in mats], d.witness_word))

    def test_all_positive(self):
        d = decide_consensus([StochasticMatrix(np.full((3, 3), 1 / 3))])
        assert d.is_consensus_set and tuple(d.horizons) == (1, 1, 1)

    def test_truncated_is_unknown(self):
        d = decide_consensus([companion(5)], budget=2)
        assert d.is_consensus_set is None and d.truncated

    def test_to_dict_keys(self):
        d = decide_consensus([companion(3)]).to_dict()
        assert {"is_consensus_set", "witness_word", "nu", "mu", "alpha", "closure_size", "truncated"} <= set(d)

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_sarymsakov_sets(self, n, rng):
        for _ in range(10):
            k = int(rng.integers(1, 5))
            d = decide_consensus([random_in_class("sarymsakov", n, rng) for _ in range(k)])
            assert d.is_consensus_set is True
            assert all(h >= 1 for h in d.horizons)

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_sarymsakov_with_r_matrix(self, n, rng):
        for _ in range(5):
            mats = [random_in_class("sarymsakov", n, rng) for _ in range(3)] + [r_matrix(n)]
            assert decide_consensus(mats).is_consensus_set is True

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_breaker_pair(self, n, rng):
        for _ in range(10):
            p = random_in_class("sia_index_ge_2", n, rng)
            q = breaker(pattern_of(p)).q
            d = decide_consensus([p, q])
            assert d.is_consensus_set is False
            assert not cl.is_sia(replay([pattern_of(p), pattern_of(q)], d.witness_word))

    def test_non_sia_generator_is_its_own_witness(self):
        d = decide_consensus([companion(3), StochasticMatrix(np.eye(3))])
        assert d.is_consensus_set is False and d.witness_word == (1,)


class TestHorizons:
    @pytest.mark.parametrize("m", [StochasticMatrix(gallery("example1_p").matrix.entries), companion(4),
                                   companion(5), r_matrix(4)], ids=["index_two", "companion4", "companion5", "r4"])
    def test_single_generator_against_powers(self, m):
        g = pattern_of(m)
        h = decide_consensus([m]).horizons
        assert h.nu == horizon_by_words([g], oracles.is_scrambling_bruteforce, 30)
        assert h.mu == horizon_by_words([g], positive_column, 30)
        assert h.alpha == horizon_by_words([g], oracles.is_sarymsakov_bruteforce, 30)

    def test_two_generators_against_words(self, rng):
        checked = 0
        while checked < 6:
            gens = [pattern_of(random_in_class("sia", 3, rng)) for _ in range(2)]
            d = decide_consensus(gens)
            if not d.is_consensus_set:
                continue
            checked += 1
            h = d.horizons
            assert h.nu == horizon_by_words(gens, oracles.is_scrambling_bruteforce, 10)
            assert h.mu == horizon_by_words(gens, positive_column, 10)
            assert h.alpha == horizon_by_words(gens, oracles.is_sarymsakov_bruteforce, 10)

    def test_scrambling_generator(self):
        h = decide_consensus([random_in_class("scrambling", 4, seed=2)]).horizons
        assert h.nu == 1 and h.alpha == 1

    def test_sarymsakov_generators_alpha_1(self, rng):
        gens = [random_in_class("sarymsakov", 4, rng) for _ in range(3)]
        h = decide_consensus(gens).horizons
        assert h.alpha == 1 and h.nu <= 3

    def test_requires_consensus(self):
        with pytest.raises(NotConsensusSet):
            horizons(semigroup_closure([CYCLE3]))
