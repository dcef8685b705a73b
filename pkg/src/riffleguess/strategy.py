"""Optimal complete-feedback guessing for a once riffle-shuffled deck.

While only successive minimum cards have been seen, the remaining deck of
size ``nu`` is again a riffle-shuffled deck, so the guess is the first-card
rule at size ``nu``: card 1 (relative) if ``event_A`` holds, otherwise the
shifted binomial mode ``kappa``. The first non-minimum card reveals the cut;
afterwards the two remaining increasing runs are guessed by majority.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from numba import njit
from scipy.special import gammaln

from .shuffle_model import Deck, ShuffleParams, first_card_pmf

# relative slack when comparing P(FC=1) with the best competitor; ties guess 1
TIE_RTOL = 1e-12
# n*p values this close below an integer are treated as that integer
FLOOR_EPS = 1e-9
_SCAN_CHUNK = 1 << 16


def _check_p(p: float) -> float:
    if not (0.0 < p < 1.0):
        raise ValueError(f"p must lie in (0, 1), got {p!r}")
    return float(p)


def threshold_n0(p: float) -> int:
    """Largest ``n`` with ``P(FC_n = 1) >= 1/2``."""
    _check_p(p)
    if p >= 0.5:
        raise ValueError("n0 is only defined for p < 1/2")
    return math.floor(math.log(0.5 - p) / math.log(1.0 - p))


def kappa(n: int, p: float) -> int:
    """Shifted mode ``1 + floor(n p)`` of the first card given a leading ``b``."""
    return 1 + math.floor(n * p + FLOOR_EPS)


def event_A(n: int, p: float) -> bool:
    """True when guessing the minimum card is at least as good as any other first guess."""
    _check_p(p)
    if p >= 0.5 or n == 1:
        return True
    fc = first_card_pmf(ShuffleParams(n, p)).masses
    return bool(fc[1:].max() <= fc[0] * (1.0 + TIE_RTOL))


def _log_mode_mass(n: np.ndarray, p: float) -> np.ndarray:
    """log of ``max_{m >= 2} P(FC_n = m)``, attained at ``m = kappa(n)``."""
    big_n = n - 1
    k = np.minimum(np.floor(n * p + FLOOR_EPS), big_n)
    return (gammaln(big_n + 1) - gammaln(k + 1) - gammaln(big_n - k + 1)
            + k * math.log(p) + (big_n - k + 1) * math.log1p(-p))


def _mode_bound_ok(n: np.ndarray, p: float) -> np.ndarray:
    """Where a bound valid for every larger ``n`` puts ``max_{m>=2} P(FC_n=m)`` below ``p``.

    Stirling's bounds give ``P(Bin(N,p)=k) <= sqrt(N/(2 pi k (N-k))) exp(1/(12N))``.
    For ``N >= 10 max(q/p, p/q)`` the mode satisfies ``k(N-k) >= 0.81 N^2 p q``,
    and the resulting bound decreases in ``N``.
    """
    q = 1.0 - p
    big_n = (n - 1).astype(float)
    valid = big_n >= 10.0 * max(q / p, p / q)
    bound = np.sqrt(1.0 / (2.0 * math.pi * 0.81 * np.maximum(big_n, 1.0) * p * q))
    bound *= np.exp(1.0 / (12.0 * np.maximum(big_n, 1.0)))
    return valid & (q * bound < p)


def _scan_A(p: float):
    """Yield ``(n, A_n)`` arrays chunk-wise from n = 1 until the tail is provably all true."""
    start = 1
    while True:
        n = np.arange(start, start + _SCAN_CHUNK)
        p1 = p + (1.0 - p) ** n
        with np.errstate(divide="ignore"):
            a = _log_mode_mass(n, p) <= np.log(p1 * (1.0 + TIE_RTOL))
        a[n == 1] = True
        stop = np.flatnonzero(_mode_bound_ok(n, p))
        if stop.size:
            cut = stop[0] + 1
            yield n[:cut], a[:cut]
            return
        yield n, a
        start += _SCAN_CHUNK


def threshold_n1(p: float) -> int:
    """Last deck size at which the first guess is not 1 (``n0`` if there is none).

    The scan stops only where the mode bound proves ``A_n`` for all larger ``n``.
    """
    n0 = threshold_n0(p)
    last_false = n0
    for n, a in _scan_A(p):
        bad = n[~a]
        if bad.size:
            last_false = max(last_false, int(bad[-1]))
    return last_false


@dataclass(frozen=True)
class StrategyTable:
    """First-guess decisions for deck sizes ``1..n_max`` at fixed ``p``.

    Arrays are indexed by deck size; index 0 is unused.
    """

    p: float
    n_max: int
    n0: int | None
    n1: int | None
    kappa: np.ndarray = field(repr=False)
    a_indicator: np.ndarray = field(repr=False)
    first_guess: np.ndarray = field(repr=False)
    non_monotone: tuple[int, ...] = ()

    def first_guess_for(self, n: int) -> int:
        self._check(n)
        return int(self.first_guess[n])

    def a_indicator_for(self, n: int) -> bool:
        self._check(n)
        return bool(self.a_indicator[n])

    def _check(self, n: int):
        if not 1 <= n <= self.n_max:
            raise ValueError(f"deck size {n} outside table range 1..{self.n_max}")

    def identity_correct(self) -> np.ndarray:
        """Correct guesses on the sorted deck of each size (cumulative count of ``A``)."""
        return np.concatenate([[0], np.cumsum(self.a_indicator[1:])])

    def rows(self) -> list[dict]:
        out = []
        for n in range(1, self.n_max + 1):
            out.append({
                "n": n,
                "n0_flag": None if self.n0 is None else int(n <= self.n0),
                "A_n": bool(self.a_indicator[n]),
                "kappa_n": int(self.kappa[n]),
                "first_guess": int(self.first_guess[n]),
            })
        return out


def build_strategy_table(p: float, n_max: int) -> StrategyTable:
    p = _check_p(p)
    if n_max < 1:
        raise ValueError("n_max must be positive")
    sizes = np.arange(n_max + 1)
    kap = np.array([0] + [kappa(n, p) for n in range(1, n_max + 1)], dtype=np.int64)
    a_ind = np.ones(n_max + 1, dtype=bool)
    n0 = n1 = None
    non_monotone: tuple[int, ...] = ()
    if p < 0.5:
        n0, n1 = threshold_n0(p), threshold_n1(p)
        a_ind[1:] = [event_A(n, p) for n in range(1, n_max + 1)]
        false_sizes = sizes[1:][~a_ind[1:]]
        if false_sizes.size:
            if false_sizes.min() <= n0 or false_sizes.max() > n1:
                raise AssertionError("first-guess switch outside (n0, n1]")
            lo, hi = false_sizes.min(), false_sizes.max()
            non_monotone = tuple(int(n) for n in range(lo, hi + 1) if a_ind[n])
        if non_monotone:
            warnings.warn(f"p={p}: first guess switches back to 1 at sizes {non_monotone}")
    guess = np.where(a_ind, 1, kap)
    guess[0] = 0
    for arr in (kap, a_ind, guess):
        arr.setflags(write=False)
    return StrategyTable(p, n_max, n0, n1, kap, a_ind, guess, non_monotone)


def two_color_guess(remaining_a: int, remaining_b: int) -> str:
    if remaining_a + remaining_b < 1:
        raise ValueError("no cards left")
    return "a" if remaining_a >= remaining_b else "b"


@dataclass(frozen=True)
class GuessTranscript:
    guesses: tuple[int, ...]
    outcomes: tuple[bool, ...]
    correct_count: int


@njit(cache=True, nogil=True)
def _play(cards, first_guess, guesses):
    """Play the strategy on ``cards`` (labels 1..n); fills ``guesses``, returns #correct."""
    n = cards.shape[0]
    correct = 0
    s = 1
    i = 0
    while i < n:
        g = s - 1 + first_guess[n - s + 1]
        c = cards[i]
        guesses[i] = g
        if c == g:
            correct += 1
        i += 1
        if c == s:
            s += 1
            continue
        # c is the first label of the second packet: runs s..c-1 and c+1..n remain
        cut = c
        seen = np.zeros(n + 2, dtype=np.bool_)
        seen[c] = True
        a_head, a_left = s, c - s
        b_head, b_left = c + 1, n - c
        while i < n:
            if a_left >= b_left:
                g = a_head
            else:
                g = b_head
            c = cards[i]
            guesses[i] = g
            if c == g:
                correct += 1
            seen[c] = True
            if c < cut:
                a_left -= 1
                while a_head < cut and seen[a_head]:
                    a_head += 1
            else:
                b_left -= 1
                while b_head <= n and seen[b_head]:
                    b_head += 1
            i += 1
    return correct


def play_deck(deck: Deck, p: float, table: StrategyTable | None = None) -> GuessTranscript:
    if not isinstance(deck, Deck):
        deck = Deck(tuple(deck))
    n = len(deck)
    if table is None or table.n_max < n:
        table = build_strategy_table(p, n)
    elif table.p != p:
        raise ValueError("strategy table was built for a different p")
    cards = np.asarray(deck.cards, dtype=np.int64)
    guesses = np.zeros(n, dtype=np.int64)
    count = _play(cards, np.asarray(table.first_guess, dtype=np.int64), guesses)
    outcomes = tuple(bool(x) for x in guesses == cards)
    return GuessTranscript(tuple(guesses.tolist()), outcomes, int(count))
