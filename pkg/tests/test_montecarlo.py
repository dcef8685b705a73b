import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from riffleguess.exact_dist import cjn_pmf, x_pmf
from riffleguess.limit_laws import tv_distance
from riffleguess.montecarlo import (McConfig, chunk_rng, packed_words, play_word_compiled,
                                    simulate_cjn, simulate_x, unpack_word)
from riffleguess.shuffle_model import ShuffleParams, Word, identity_probability, word_to_deck
from riffleguess.strategy import build_strategy_table, play_deck

P_GRID = [0.1, 0.15, 0.3, 0.5, 0.7, 0.9]


def test_config_validation():
    with pytest.raises(ValueError):
        McConfig(0, 1)
    with pytest.raises(ValueError):
        McConfig(10, -1)
    with pytest.raises(ValueError):
        McConfig(10, 1, chunk_size=0)
    assert McConfig(10, 1, chunk_size=4).chunks() == [(0, 4), (1, 4), (2, 2)]


def test_chunk_streams_are_distinct():
    a = chunk_rng(5, 0).random(4)
    assert np.array_equal(a, chunk_rng(5, 0).random(4))
    assert not np.array_equal(a, chunk_rng(5, 1).random(4))


@pytest.mark.parametrize("p", [0.5, 0.3])
@pytest.mark.parametrize("n", [1, 7, 8, 13, 100])
def test_packed_words(p, n):
    packed = packed_words(np.random.default_rng(0), 4000, n, p)
    assert packed.shape == (4000, (n + 7) // 8)
    bits = np.unpackbits(packed, axis=1)
    assert not bits[:, n:].any()
    freq = bits[:, :n].mean()
    assert abs(freq - p) < 5 * math.sqrt(p * (1 - p) / (4000 * n))
    assert len(unpack_word(packed[0], n)) == n


@settings(max_examples=300)
@given(st.data())
def test_kernel_matches_play_deck(data):
    p = data.draw(st.sampled_from(P_GRID + [0.05]))
    n = data.draw(st.integers(1, 70))
    letters = data.draw(st.text(alphabet="ab", min_size=n, max_size=n))
    table = build_strategy_table(p, n)
    expected = play_deck(word_to_deck(Word(letters)), p, table).correct_count
    assert play_word_compiled(letters, p, table) == expected


def test_kernel_on_long_random_words():
    rng = np.random.default_rng(11)
    for p in (0.1, 0.5, 0.7):
        table = build_strategy_table(p, 400)
        for _ in range(200):
            n = int(rng.integers(1, 400))
            letters = "".join(np.where(rng.random(n) < p, "a", "b"))
            expected = play_deck(word_to_deck(Word(letters)), p, table).correct_count
            assert play_word_compiled(letters, p, table) == expected


def test_single_card():
    assert simulate_x(ShuffleParams(1, 0.3), None, McConfig(1000, 1)).to_dict() == {1: 1.0}
    assert simulate_cjn(ShuffleParams(2, 0.3), McConfig(1000, 1)).to_dict() == {1: 1.0}


@pytest.mark.parametrize("p", P_GRID)
@pytest.mark.parametrize("n", [5, 12])
def test_consistency_with_exact(n, p):
    params = ShuffleParams(n, p)
    mc = simulate_x(params, build_strategy_table(p, n), McConfig(10 ** 6, 1234))
    assert tv_distance(mc, x_pmf(params)) < 0.005


def test_determinism_across_workers():
    params = ShuffleParams(40, 0.3)
    cfg = McConfig(300_000, 99, chunk_size=20_000)
    one = simulate_x(params, None, cfg, workers=1)
    eight = simulate_x(params, None, cfg, workers=8)
    assert one.offset == eight.offset and one.masses.tobytes() == eight.masses.tobytes()
    again = simulate_x(params, None, cfg, workers=1)
    assert again.masses.tobytes() == one.masses.tobytes()
    c1 = simulate_cjn(params, cfg, workers=1)
    c8 = simulate_cjn(params, cfg, workers=8)
    assert c1.masses.tobytes() == c8.masses.tobytes()


@pytest.mark.parametrize("n,p", [(10, 0.5), (10, 0.7), (6, 0.9)])
def test_full_score_frequency(n, p):
    trials = 400_000
    mc = simulate_x(ShuffleParams(n, p), None, McConfig(trials, 7))
    target = identity_probability(ShuffleParams(n, p))
    se = math.sqrt(target * (1 - target) / trials)
    assert abs(mc[n] - target) < 3 * se


@pytest.mark.parametrize("n,p", [(30, 0.5), (60, 0.15), (400, 0.75)])
def test_cjn_against_exact(n, p):
    mc = simulate_cjn(ShuffleParams(n, p), McConfig(400_000, 3))
    assert tv_distance(mc, cjn_pmf(ShuffleParams(n, p))) < 0.02


def test_strategy_mismatch_rejected():
    with pytest.raises(ValueError):
        simulate_x(ShuffleParams(10, 0.3), build_strategy_table(0.4, 10), McConfig(10, 1))
    with pytest.raises(ValueError):
        simulate_cjn(ShuffleParams(1, 0.3), McConfig(10, 1))
