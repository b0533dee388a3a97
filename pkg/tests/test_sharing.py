"""Threshold sharing, detection, bounded-distance correction, oracle parity."""

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psmt.errors import InsufficientShares, MissingEntries, ParamError
from psmt.field import GF
from psmt.randomness import Randomness
from psmt.sharing import (
    CLEAN,
    CORRUPTED,
    ReceivedWord,
    SharingParams,
    correct_errors,
    detect_errors,
    oracle_decode,
    reconstruct,
    share,
)


class FixedCoeffs:
    """Randomness stub returning scripted draw values."""

    def __init__(self, values):
        self._values = list(values)

    def draw(self, n):
        return self._values.pop(0) % n, None


def test_hand_share_example():
    # f(x) = 5 + 2x over GF(7) at points 1,2,3 -> (0, 2, 4)
    spec = GF(7)
    params = SharingParams(3, 1, spec)
    cw = share(spec.element(5), params, FixedCoeffs([2]))
    assert [s.value for s in cw.shares] == [0, 2, 4]


def test_hand_reconstruct_example():
    spec = GF(7)
    params = SharingParams(3, 1, spec)
    word = ReceivedWord((spec.element(0), spec.element(2), None), params)
    assert reconstruct(word).value == 5


def test_reconstruct_threshold():
    spec = GF(7)
    params = SharingParams(3, 1, spec)
    word = ReceivedWord((spec.element(0), None, None), params)
    with pytest.raises(InsufficientShares):
        reconstruct(word)


def test_k0_shares_equal_secret():
    spec = GF(7)
    params = SharingParams(4, 0, spec)
    cw = share(spec.element(6), params, Randomness(0))
    assert all(s.value == 6 for s in cw.shares)


def test_detect_hand_examples():
    spec = GF(7)
    params = SharingParams(3, 1, spec)
    clean = ReceivedWord(tuple(spec.element(v) for v in (0, 2, 4)), params)
    dirty = ReceivedWord(tuple(spec.element(v) for v in (0, 2, 5)), params)
    assert detect_errors(clean) == CLEAN
    assert detect_errors(dirty) == CORRUPTED


def test_detect_requires_full_word():
    spec = GF(7)
    params = SharingParams(3, 1, spec)
    word = ReceivedWord((spec.element(0), None, spec.element(4)), params)
    with pytest.raises(MissingEntries):
        detect_errors(word)
    assert detect_errors(word.filled()) in (CLEAN, CORRUPTED)


def test_correct_hand_example():
    # f(x) = 3 + x over GF(7), n=5: codeword (4,5,6,0,1); corrupt slot 2
    spec = GF(7)
    params = SharingParams(5, 1, spec)
    entries = [spec.element(v) for v in (4, 5, 6, 0, 1)]
    entries[2] = spec.element(1)
    got = correct_errors(ReceivedWord(tuple(entries), params), 1)
    assert got is not None
    assert got.secret.value == 3
    assert got.error_positions == frozenset({2})


def test_correct_beyond_radius_detected():
    # two corrupted entries at radius 1 must return None, never a wrong secret
    spec = GF(7)
    params = SharingParams(5, 1, spec)
    entries = [spec.element(v) for v in (4, 5, 6, 0, 1)]
    entries[1] = spec.element(0)
    entries[3] = spec.element(2)
    assert correct_errors(ReceivedWord(tuple(entries), params), 1) is None


def test_correct_radius_bound_enforced():
    spec = GF(7)
    params = SharingParams(5, 1, spec)  # max_correct = 1
    word = ReceivedWord(tuple(spec.element(v) for v in (4, 5, 6, 0, 1)), params)
    with pytest.raises(ParamError):
        correct_errors(word, 2)


def test_params_validation():
    spec = GF(7)
    with pytest.raises(ParamError):
        SharingParams(3, 3, spec)
    with pytest.raises(ParamError):
        SharingParams(7, 1, spec)  # only 6 nonzero points in GF(7)
    p = SharingParams(5, 2, spec)
    assert p.max_detect == 2
    assert p.max_correct == 1


def test_oracle_unique_and_tie():
    spec = GF(7)
    params = SharingParams(5, 1, spec)
    entries = [spec.element(v) for v in (4, 5, 6, 0, 1)]
    entries[2] = spec.element(1)
    best = oracle_decode(ReceivedWord(tuple(entries), params))
    assert len(best) == 1
    assert [s.value for s in best[0][1]] == [4, 5, 6, 0, 1]

    # equidistant construction on n = 2k+1 = 3: the word (1,2,5) lies at
    # distance 1 from both f(x)=x -> (1,2,3) and g(x)=6+2x -> (1,3,5)
    params3 = SharingParams(3, 1, spec)
    word = ReceivedWord(
        (spec.element(1), spec.element(2), spec.element(5)), params3)
    best = oracle_decode(word)
    assert len(best) >= 2  # tie is reported, not silently resolved
    assert all(d == 1 for _, _, d in best)


def test_perfect_secrecy_k_shares_exhaustive_gf5():
    # For every secret, every single-share marginal is uniform over GF(5)
    spec = GF(5)
    params = SharingParams(3, 1, spec)
    for secret in range(5):
        for pos in range(3):
            counts = [0] * 5
            for coeff in range(5):
                cw = share(spec.element(secret), params, FixedCoeffs([coeff]))
                counts[cw.shares[pos].value] += 1
            assert counts == [1] * 5


def test_share_reconstruct_round_trip_default_field():
    spec = GF(2**16)
    params = SharingParams(7, 2, spec)
    rng = Randomness("round-trip")
    for _ in range(300):
        secret = spec.sample(rng)
        cw = share(secret, params, rng)
        assert reconstruct(ReceivedWord(cw.shares, params)) == secret


def _random_cases():
    cases = []
    master = random.Random(20260823)
    for n in range(2, 7):
        for k in range(0, n):
            cases.append((n, k, master.randrange(10**9)))
    return cases


@pytest.mark.parametrize("n,k,seed", _random_cases())
def test_decoder_matches_oracle_randomized(n, k, seed):
    spec = GF(7)
    params = SharingParams(n, k, spec)
    rng = random.Random(seed)
    rand = Randomness(seed)
    for _ in range(60):
        secret = spec.element(rng.randrange(7))
        cw = share(secret, params, rand)
        weight = rng.randrange(0, n + 1)
        positions = rng.sample(range(n), weight)
        entries = list(cw.shares)
        for pos in positions:
            entries[pos] = spec.element(
                (entries[pos].value + 1 + rng.randrange(6)) % 7)
        word = ReceivedWord(tuple(entries), params)
        actual_weight = sum(1 for a, b in zip(entries, cw.shares) if a != b)

        if 0 < actual_weight <= params.max_detect:
            assert detect_errors(word) == CORRUPTED
        if actual_weight == 0:
            assert detect_errors(word) == CLEAN

        for e in range(params.max_correct + 1):
            got = correct_errors(word, e)
            if actual_weight <= e:
                assert got is not None
                assert got.secret == secret
                assert got.error_positions == frozenset(positions)
            elif actual_weight <= params.n - params.k - e - 1:
                # simultaneous detection range: never a wrong secret
                assert got is None

        # parity with the exhaustive oracle at the full radius
        best = oracle_decode(word)
        got = correct_errors(word, params.max_correct)
        if len(best) == 1 and best[0][2] <= params.max_correct:
            assert got is not None and got.secret == best[0][0]
        if got is not None:
            assert any(got.secret == s and d <= params.max_correct
                       for s, _, d in best)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 6), st.integers(0, 10**6))
def test_property_share_then_reconstruct(secret, seed):
    spec = GF(7)
    params = SharingParams(5, 2, spec)
    cw = share(spec.element(secret), params, Randomness(seed))
    assert reconstruct(ReceivedWord(cw.shares, params)).value == secret
    assert detect_errors(ReceivedWord(cw.shares, params)) == CLEAN
