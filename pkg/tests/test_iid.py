"""Empirical-deviation identifier: thresholds, truncation, fast-path parity."""
from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from limitid import (
    Alphabet,
    EmptyList,
    FrequencyTable,
    HypothesisList,
    IidIdentifier,
    LazySequence,
    UnknownSymbol,
    make_categorical,
    make_geometric,
    passes_threshold,
    pmf_list,
    reference_step,
    repeat_infinitely,
    run_iid,
    score,
    threshold,
    trunc_set,
    truncation_bound,
)
from conftest import random_categorical

BH = Alphabet(["b", "h"])
AB = Alphabet(["a", "b"])
HALF = Fraction(1, 2)


def table_from(alphabet, indices):
    t = FrequencyTable(alphabet)
    for j in indices:
        t.add_index(j)
    return t


def coin_table(heads: int, tails: int) -> FrequencyTable:
    return table_from(BH, [2] * heads + [1] * tails)


class TestFrequencyTable:
    def test_single_add(self):
        t = FrequencyTable(AB)
        t.add("a")
        assert t.count(1) == 1 and t.n == 1

    def test_running_counts(self):
        t = table_from(AB, [1, 1, 2])
        t.add_index(2)
        assert (t.count(1), t.count(2), t.n) == (2, 2, 4)

    def test_empirical_sums_to_one(self):
        t = table_from(AB, [1, 1, 2, 2])
        emp = t.empirical()
        assert emp == {1: HALF, 2: HALF}
        assert sum(emp.values()) == 1

    def test_unknown_symbol(self):
        t = FrequencyTable(AB)
        with pytest.raises(UnknownSymbol):
            t.add_index(3)


class TestThreshold:
    def test_stage_one_is_zero(self):
        assert threshold(1) == 0.0

    def test_frozen_digits(self):
        # high-precision oracle: sqrt(ln n / n) to 20 significant digits
        assert math.isclose(threshold(100), 0.21459660262893472396,
                            rel_tol=0, abs_tol=1e-16)
        assert math.isclose(threshold(10000), 0.030348542587702927017,
                            rel_tol=0, abs_tol=1e-17)

    def test_passes_threshold_exact(self):
        assert passes_threshold(Fraction(1, 50), 100)
        assert not passes_threshold(Fraction(11, 50), 100)
        # nothing passes at n = 1 (ln 1 = 0), not even a zero score
        assert not passes_threshold(Fraction(0), 1)
        assert passes_threshold(Fraction(0), 2)

    def test_agrees_with_float_comparison_off_boundary(self):
        rng = random.Random(3)
        for _ in range(300):
            n = rng.randint(2, 10 ** 6)
            s = Fraction(rng.randint(0, 400), rng.randint(401, 1000))
            assert passes_threshold(s, n) == (float(s) ** 2 * n < math.log(n))


class TestTruncation:
    def test_geometric_example(self):
        g = make_geometric(HALF)
        # tail after 1 is 1/2 and (1/2)^2 * 4 = 1 is not < 1, so m = 2
        assert truncation_bound(g, 4) == 2
        t = FrequencyTable(g.alphabet)
        assert trunc_set(g, t, 4) == [1, 2]

    def test_finite_support_tail_hits_zero(self):
        p = make_categorical(AB, [HALF, HALF])
        t = FrequencyTable(AB)
        t.add("a")
        assert trunc_set(p, t, 100) == [1, 2]

    def test_point_mass_needs_one_symbol(self):
        p = make_categorical(AB, [Fraction(1), Fraction(0)])
        t = FrequencyTable(AB)
        assert trunc_set(p, t, 1) == [1]

    def test_seen_symbols_beyond_bound_included(self):
        g = make_geometric(HALF)
        t = table_from(g.alphabet, [9])
        assert 9 in trunc_set(g, t, 4)


class TestScore:
    def test_bern_half_at_52_of_100(self):
        q = make_categorical(BH, [HALF, HALF])
        assert score(q, coin_table(52, 48), 100) == Fraction(1, 50)

    def test_bern_three_tenths(self):
        q = make_categorical(BH, [Fraction(7, 10), Fraction(3, 10)])
        assert score(q, coin_table(52, 48), 100) == Fraction(11, 50)

    def test_empirical_match_scores_zero(self):
        q = make_categorical(BH, [Fraction(12, 25), Fraction(13, 25)])
        assert score(q, coin_table(52, 48), 100) == 0


class TestIdentifierStep:
    def coin_list(self):
        return pmf_list([
            make_categorical(BH, [Fraction(7, 10), Fraction(3, 10)]),
            make_categorical(BH, [HALF, HALF]),
        ])

    def test_worked_example(self):
        data = [2] * 52 + [1] * 48
        results = run_iid(self.coin_list(), data, BH)
        last = results[-1]
        assert last.n == 100
        assert last.guess == 2
        assert not last.fallback
        assert last.score == Fraction(1, 50)

    def test_stage_one_falls_back(self):
        results = run_iid(self.coin_list(), [2], BH)
        assert results[0].guess == 1
        assert results[0].fallback

    def test_single_true_candidate_locks_immediately(self):
        p = make_categorical(AB, [HALF, HALF])
        data = [1, 2] * 30
        results = run_iid(pmf_list([p]), data, AB)
        assert all(r.guess == 1 for r in results)
        assert all(not r.fallback for r in results[1:])

    def test_empty_list_rejected(self):
        with pytest.raises(EmptyList):
            IidIdentifier(pmf_list([]), AB)

    def test_elimination_stream_respected(self):
        base = LazySequence.of(
            make_categorical(AB, [HALF, HALF]),
            make_categorical(AB, [HALF, HALF]),
        )
        hl = HypothesisList(base, eliminations=[(1, 3)], kind="co_ce")
        data = [1, 2, 1, 2, 1, 2]
        results = run_iid(hl, data, AB)
        assert results[1].guess == 1        # before stage 3
        assert all(r.guess == 2 for r in results[2:])

    def test_repeated_list_guesses_positions(self):
        inner = pmf_list([
            make_categorical(AB, [Fraction(19, 20), Fraction(1, 20)]),
            make_categorical(AB, [HALF, HALF]),
        ])
        rep = repeat_infinitely(inner)
        data = [1, 2] * 40
        results = run_iid(rep, data, AB)
        # positions 1, 2 hold the skewed pmf; first fair copy is position 3
        assert results[-1].guess == 3

    def test_determinism(self):
        data = [2] * 52 + [1] * 48
        a = [r.guess for r in run_iid(self.coin_list(), data, BH)]
        b = [r.guess for r in run_iid(self.coin_list(), data, BH)]
        assert a == b


@given(st.integers(min_value=0, max_value=2 ** 32))
@settings(max_examples=25, deadline=None)
def test_fast_path_matches_reference(seed):
    rng = random.Random(seed)
    alphabet = Alphabet(["a", "b", "c"])
    candidates = pmf_list([random_categorical(rng, alphabet, denominator=12)
                           for _ in range(rng.randint(1, 4))])
    data = [rng.randint(1, 3) for _ in range(rng.randint(1, 60))]

    ident = IidIdentifier(candidates, alphabet)
    table = FrequencyTable(alphabet)
    for n, j in enumerate(data, start=1):
        fast = ident.step_with(j)
        table.add_index(j)
        ref_guess, ref_fallback = reference_step(candidates, table, n)
        assert fast.guess == ref_guess
        assert fast.fallback == ref_fallback
        chosen = candidates.item(fast.guess)
        assert fast.score == score(chosen, table, n)


@given(st.integers(min_value=0, max_value=2 ** 32))
@settings(max_examples=10, deadline=None)
def test_fast_path_matches_reference_unbounded(seed):
    rng = random.Random(seed)
    alphabet = Alphabet.unbounded()
    candidates = pmf_list([
        make_geometric(Fraction(1, 2)),
        make_geometric(Fraction(2, 3)),
        make_geometric(Fraction(1, 2), shift=1),
    ])
    data = [min(rng.getrandbits(k % 3 + 1) + 1, 12) for k in range(40)]

    ident = IidIdentifier(candidates, alphabet)
    table = FrequencyTable(alphabet)
    for n, j in enumerate(data, start=1):
        fast = ident.step_with(j)
        table.add_index(j)
        ref_guess, ref_fallback = reference_step(candidates, table, n)
        assert (fast.guess, fast.fallback) == (ref_guess, ref_fallback)
        assert fast.score == score(candidates.item(fast.guess), table, n)
