"""Compression-backed description-length estimators."""
from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from limitid import (
    Alphabet,
    AlphabetTooLarge,
    ConfigError,
    ESTIMATORS,
    OVERHEAD_BITS,
    SeededSource,
    UnknownSymbol,
    draw_iid,
    estimate_complexity,
    get_estimator,
    make_categorical,
    serialize_symbols,
)

AB = Alphabet(["a", "b"])
FAIR = make_categorical(AB, [Fraction(1, 2), Fraction(1, 2)])


class TestSerialize:
    def test_small_sequences(self):
        assert serialize_symbols([1, 2, 1, 2], AB) == b"\x00\x01\x00\x01"
        assert serialize_symbols([], AB) == b""
        assert serialize_symbols([1] * 64, AB) == b"\x00" * 64

    def test_unknown_index(self):
        with pytest.raises(UnknownSymbol):
            serialize_symbols([3], AB)

    def test_alphabet_cap(self):
        big = Alphabet([f"s{k}" for k in range(257)])
        with pytest.raises(AlphabetTooLarge):
            serialize_symbols([1], big)
        with pytest.raises(AlphabetTooLarge):
            serialize_symbols([1], Alphabet.unbounded())

    def test_exactly_256_fits(self):
        exact = Alphabet([f"s{k}" for k in range(256)])
        assert serialize_symbols([256], exact) == b"\xff"


class TestEstimators:
    def test_overhead_within_contract(self):
        assert OVERHEAD_BITS <= 128
        for est in ESTIMATORS.values():
            assert est.estimate(b"", 1) == OVERHEAD_BITS

    def test_frozen_values_compress_default(self):
        est = get_estimator("compress-default")
        # recorded deflate(level 6) lengths: a^64 -> 6 bytes, a^1024 -> 11
        assert est.estimate(b"\x00" * 64, 64) == 8 * 6 + OVERHEAD_BITS
        assert est.estimate(b"\x00" * 1024, 1024) == 8 * 11 + OVERHEAD_BITS

    def test_repetition_beats_noise_by_4x(self):
        est = get_estimator("compress-default")
        coin = bytes(j - 1 for j in draw_iid(FAIR, SeededSource(42), 1024))
        constant = est.estimate(b"\x00" * 1024, 1024)
        noisy = est.estimate(coin, 1024)
        assert constant < noisy / 4

    def test_compress_max_never_worse(self):
        rng = random.Random(12)
        dflt, best = get_estimator("compress-default"), get_estimator("compress-max")
        for _ in range(30):
            data = bytes(rng.getrandbits(1) for _ in range(rng.randint(0, 600)))
            assert best.estimate(data, 10 ** 6) <= dflt.estimate(data, 10 ** 6)

    def test_enum_tiny_exact_costs(self):
        est = get_estimator("enum-tiny")
        c0 = OVERHEAD_BITS
        # run opcode: 1 + gamma(count) + 8 bits, searchable while <= 18 bits
        assert est.estimate(b"\x07" * 31, 18) == 18 + c0
        assert est.estimate(b"\x07" * 31, 17) == 8 * 31 + c0   # budget too small
        assert est.estimate(b"\x07" * 32, 10 ** 9) == 8 * 32 + c0  # run too long
        assert est.estimate(b"aa", 100) == 12 + c0
        # copy bound beats the literal opcode for a 1-byte string
        assert est.estimate(b"z", 100) == 8 + c0

    def test_budget_keys(self):
        dflt = get_estimator("compress-default")
        assert dflt.budget_key(1) == dflt.budget_key(10 ** 9)
        tiny = get_estimator("enum-tiny")
        assert tiny.budget_key(5) != tiny.budget_key(6)
        assert tiny.budget_key(18) == tiny.budget_key(10 ** 9)

    def test_unknown_estimator(self):
        with pytest.raises(ConfigError):
            get_estimator("zpaq")

    def test_estimate_complexity_wrapper(self):
        bits = estimate_complexity([1] * 64, AB, 64)
        assert bits == 8 * 6 + OVERHEAD_BITS


@given(st.binary(max_size=256),
       st.integers(min_value=1, max_value=10 ** 6),
       st.integers(min_value=0, max_value=10 ** 6))
@settings(max_examples=120, deadline=None)
def test_monotone_in_budget_and_copy_bounded(data, t, extra):
    for est in ESTIMATORS.values():
        small, large = est.estimate(data, t), est.estimate(data, t + extra)
        assert large <= small
        assert large <= 8 * len(data) + OVERHEAD_BITS


def test_repetition_sensitivity_across_seeds():
    est = get_estimator("compress-default")
    for n in (256, 512, 1024):
        constant = est.estimate(b"\x00" * n, n)
        wins = 0
        for seed in range(100):
            coin = bytes(j - 1 for j in draw_iid(FAIR, SeededSource(seed), n))
            wins += constant <= est.estimate(coin, n)
        assert wins >= 95
