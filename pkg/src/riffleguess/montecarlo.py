"""Seeded, schedule-independent Monte Carlo for ``X_n`` and ``C_{n-1-J_n, J_n}``.

Trials are split into chunks of ``chunk_size``. Chunk ``i`` draws from its own
``numpy`` generator seeded with ``SeedSequence(seed, spawn_key=(i,))`` and
produces an integer histogram; histograms are summed in chunk order, so the
result does not depend on how many workers process the chunks.

Shuffle words are bit-packed (bit set = letter ``a``). For ``p = 1/2`` the
bits are raw random bytes; otherwise they come from ``uniform < p``. The
compiled kernels play the strategy on the word directly, which is the same
as relabelling the word into a deck and calling ``play_deck`` (see tests).
In the two-color phase they use that the number of correct guesses equals
``max(m1, m2)`` plus the number of ties followed by the tie-breaking color,
which lets them skip whole bytes far from a tie.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numba import njit

from .pmf import Pmf
from .shuffle_model import ShuffleParams
from .strategy import StrategyTable, build_strategy_table

# letters generated per block inside a chunk; blocking does not change the stream
_BLOCK_LETTERS = 1 << 24
_POPCOUNT = np.array([bin(i).count("1") for i in range(256)], dtype=np.int64)


@dataclass(frozen=True)
class McConfig:
    trials: int
    seed: int
    chunk_size: int = 1 << 16

    def __post_init__(self):
        if self.trials < 1 or self.chunk_size < 1:
            raise ValueError("trials and chunk_size must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def chunks(self) -> list[tuple[int, int]]:
        """``(chunk index, trials in chunk)`` pairs."""
        full, rest = divmod(self.trials, self.chunk_size)
        sizes = [self.chunk_size] * full + ([rest] if rest else [])
        return list(enumerate(sizes))


def chunk_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def packed_words(rng: np.random.Generator, rows: int, n: int, p: float) -> np.ndarray:
    """``rows`` i.i.d. words of length ``n``, packed big-endian into ``uint8`` rows."""
    nbytes = (n + 7) // 8
    if p == 0.5:
        packed = np.frombuffer(rng.bytes(rows * nbytes), dtype=np.uint8).reshape(rows, nbytes).copy()
        if n % 8:
            packed[:, -1] &= np.uint8((0xFF << (8 - n % 8)) & 0xFF)
        return packed
    return np.packbits(rng.random((rows, n)) < p, axis=1)


def unpack_word(row: np.ndarray, n: int) -> str:
    return "".join("a" if x else "b" for x in np.unpackbits(row)[:n])


@njit(cache=True, nogil=True)
def _bit(row, i):
    return (row[i >> 3] >> (7 - (i & 7))) & 1


@njit(cache=True, nogil=True)
def _row_popcount(row, popcount):
    k = 0
    for b in range(row.shape[0]):
        k += popcount[row[b]]
    return k


@njit(cache=True, nogil=True)
def _two_color_from(row, start, stop, a_left, b_left, popcount):
    """Correct majority guesses on letters ``start..stop-1`` holding ``a_left`` a's."""
    d = a_left - b_left
    tie_hits = 0
    j = start
    while j < stop:
        if (j & 7) == 0 and j + 8 <= stop and (d > 8 or d < -8):
            d += 8 - 2 * popcount[row[j >> 3]]
            j += 8
            continue
        x = _bit(row, j)
        if d == 0 and x == 1:
            tie_hits += 1
        d += 1 - 2 * x
        j += 1
    return max(a_left, b_left) + tie_hits


@njit(cache=True, nogil=True)
def _x_counts(packed, n, first_guess, sorted_correct, popcount, hist):
    for r in range(packed.shape[0]):
        row = packed[r]
        k = _row_popcount(row, popcount)
        correct = 0
        i = 0
        while i < n:
            g = first_guess[n - i]
            if _bit(row, i) == 1:
                # letter a: the smallest remaining card
                if g == 1:
                    correct += 1
                i += 1
                continue
            if k == i:
                # only b's remain: the rest of the deck is sorted
                correct += sorted_correct[n - i]
                break
            # first b with a's still to come: card k + 1, relative label k + 1 - i
            if g == k + 1 - i:
                correct += 1
            correct += _two_color_from(row, i + 1, n, k - i, n - 1 - k, popcount)
            break
        hist[correct] += 1


@njit(cache=True, nogil=True)
def _cjn_counts(packed, m, popcount, hist, needed):
    """Two-color game on words with at least one ``a``; returns rows accepted."""
    accepted = 0
    for r in range(packed.shape[0]):
        if accepted == needed:
            break
        row = packed[r]
        k = _row_popcount(row, popcount)
        if k == 0:
            continue
        hist[_two_color_from(row, 0, m, k, m - k, popcount)] += 1
        accepted += 1
    return accepted


def _x_chunk(params, first_guess, sorted_correct, seed, index, size):
    rng = chunk_rng(seed, index)
    n = params.n
    hist = np.zeros(n + 1, dtype=np.int64)
    rows_per_block = max(1, _BLOCK_LETTERS // n)
    done = 0
    while done < size:
        rows = min(rows_per_block, size - done)
        _x_counts(packed_words(rng, rows, n, params.p), n, first_guess, sorted_correct,
                  _POPCOUNT, hist)
        done += rows
    return hist


def _cjn_chunk(params, seed, index, size):
    rng = chunk_rng(seed, index)
    m = params.n - 1
    hist = np.zeros(m + 1, dtype=np.int64)
    rows_per_block = max(1, _BLOCK_LETTERS // m)
    done = 0
    while done < size:
        rows = min(rows_per_block, size - done)
        done += _cjn_counts(packed_words(rng, rows, m, params.p), m, _POPCOUNT, hist, size - done)
    return hist


def _run(task, chunks, workers: int) -> np.ndarray:
    if workers <= 1:
        hists = [task(i, size) for i, size in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hists = list(pool.map(lambda c: task(*c), chunks))
    total = hists[0].copy()
    for h in hists[1:]:
        total += h
    return total


def simulate_x(params: ShuffleParams, strategy: StrategyTable | None, cfg: McConfig,
               workers: int = 1) -> Pmf:
    """Empirical law of ``X_n`` from ``cfg.trials`` shuffled decks."""
    if strategy is None:
        strategy = build_strategy_table(params.p, params.n)
    if strategy.p != params.p or strategy.n_max < params.n:
        raise ValueError("strategy table does not match the parameters")
    first_guess = np.ascontiguousarray(strategy.first_guess, dtype=np.int64)
    sorted_correct = np.ascontiguousarray(strategy.identity_correct(), dtype=np.int64)

    def task(index, size):
        return _x_chunk(params, first_guess, sorted_correct, cfg.seed, index, size)

    return Pmf.from_counts(_run(task, cfg.chunks(), workers))


def simulate_cjn(params: ShuffleParams, cfg: McConfig, workers: int = 1) -> Pmf:
    """Empirical law of ``C_{n-1-J_n, J_n}``.

    The last ``n - 1`` letters of a shuffle word, conditioned on containing an
    ``a``, have a positive-binomial composition and a uniform arrangement.
    """
    if params.n < 2:
        raise ValueError("needs n >= 2")

    def task(index, size):
        return _cjn_chunk(params, cfg.seed, index, size)

    return Pmf.from_counts(_run(task, cfg.chunks(), workers))


def play_word_compiled(word: str, p: float, strategy: StrategyTable | None = None) -> int:
    """Run the compiled kernel on one word; used to cross-check it against ``play_deck``."""
    n = len(word)
    if strategy is None:
        strategy = build_strategy_table(p, n)
    packed = np.packbits(np.array([c == "a" for c in word]))[None, :]
    hist = np.zeros(n + 1, dtype=np.int64)
    _x_counts(packed, n, np.ascontiguousarray(strategy.first_guess, dtype=np.int64),
              np.ascontiguousarray(strategy.identity_correct(), dtype=np.int64), _POPCOUNT, hist)
    return int(np.flatnonzero(hist)[0])
