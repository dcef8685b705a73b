"""Exact laws: the two-color game, the truncated binomial and the number of correct guesses.

The law of ``X_n`` is computed by conditioning on the first letter of the
shuffle word:

* ``a`` (probability ``p``): card 1 is drawn, the rest is a riffle-shuffled
  deck of size ``n - 1``; one more correct guess if the first guess was 1;
* ``b`` followed by ``n - 1`` further ``b``'s (probability ``q**n``): the deck
  is sorted and the count is deterministic (``StrategyTable.identity_correct``);
* ``b`` followed by ``j >= 1`` letters ``a``: card ``j + 1`` is drawn, the
  guesser learns the cut and plays the two-color game on ``(j, n - 1 - j)``;
  one more correct guess if the first guess was ``j + 1``.

For ``p >= 1/2`` the sorted-deck branch reduces to the unit mass at ``n``;
for ``p < 1/2`` it is ``n`` minus the number of deck sizes at which the
strategy guesses the shifted mode. The correction in the last branch fires
at ``j = kappa_n - 1``. Both conventions are pinned by ``x_pmf_bruteforce``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .pmf import Pmf, moments  # noqa: F401  (re-exported)
from .shuffle_model import ShuffleParams, Word, binomial_pmf, word_to_deck
from .strategy import StrategyTable, build_strategy_table, play_deck

X_PMF_MAX_N = 5000
BRUTEFORCE_MAX_N = 24


class GuardError(RuntimeError):
    """A computation was refused because its size exceeds a configured guard."""


@dataclass(frozen=True)
class XnLawRequest:
    params: ShuffleParams
    strategy: StrategyTable

    def __post_init__(self):
        if self.strategy.p != self.params.p:
            raise ValueError("strategy table built for a different p")
        if self.strategy.n_max < self.params.n:
            raise ValueError("strategy table does not cover the deck size")


def c_pmf(m1: int, m2: int) -> Pmf:
    """Law of the number of correct guesses in the two-color game.

    Forward DP over ``(a_remaining, b_remaining)``, each state carrying the
    law of correct guesses so far. Majority guess, ties guess ``a``.
    """
    if m1 < 0 or m2 < 0:
        raise ValueError("color counts must be nonnegative")
    total = m1 + m2
    layer = {(m1, m2): np.eye(1, total + 1)[0]}
    for _ in range(total):
        nxt: dict[tuple[int, int], np.ndarray] = {}
        for (a, b), v in layer.items():
            guess_a = a >= b
            if a:
                w = (a / (a + b)) * (np.roll(v, 1) if guess_a else v)
                nxt[(a - 1, b)] = nxt.get((a - 1, b), 0) + w
            if b:
                w = (b / (a + b)) * (v if guess_a else np.roll(v, 1))
                nxt[(a, b - 1)] = nxt.get((a, b - 1), 0) + w
        layer = nxt
    return Pmf(0, layer[(0, 0)]).trimmed()


def c_pmf_bruteforce(m1: int, m2: int) -> Pmf:
    """Enumerate all ``C(m1+m2, m1)`` arrangements and play each one."""
    total = m1 + m2
    counts: dict[int, int] = {}
    for a_pos in itertools.combinations(range(total), m1):
        a_pos = set(a_pos)
        a, b, correct = m1, m2, 0
        for i in range(total):
            drawn_a = i in a_pos
            if drawn_a == (a >= b):
                correct += 1
            if drawn_a:
                a -= 1
            else:
                b -= 1
        counts[correct] = counts.get(correct, 0) + 1
    arrangements = math.comb(total, m1)
    return Pmf.from_dict({k: v / arrangements for k, v in counts.items()})


def truncated_binomial_pmf(n: int, p: float) -> Pmf:
    """``Bin(n - 1, p)`` conditioned to be positive, on ``1..n-1``."""
    if n < 2:
        raise ValueError("the truncated binomial needs n >= 2")
    ShuffleParams(n, p)
    positive = -math.expm1((n - 1) * math.log1p(-p))
    return Pmf(1, binomial_pmf(n - 1, p)[1:] / positive)


def _next_wrong_layer(prev: np.ndarray, m: int) -> np.ndarray:
    """Wrong-guess laws of all two-color games with ``m`` cards, from those with ``m - 1``.

    Row ``b`` holds the law for the pair ``(m - b, b)``, ``b = 0..m//2``;
    column ``r`` is the number of wrong guesses (at most ``b``).
    """
    h, hp = m // 2, (m - 1) // 2
    out = np.zeros((h + 1, h + 1))
    rows = hp + 1
    b = np.arange(rows, dtype=float)
    a = m - b
    # majority draw keeps the wrong count; minority draw adds one
    out[:rows, :hp + 1] += (a / m)[:, None] * prev
    out[1:rows, 1:hp + 1] += (b[1:] / m)[:, None] * prev[:rows - 1, :hp]
    if m % 2 == 0:
        # tie (h, h): either draw leads to (h, h - 1), wrong with probability 1/2
        out[h, :h] += 0.5 * prev[h - 1]
        out[h, 1:h + 1] += 0.5 * prev[h - 1]
    return out


def _two_color_layers(m_max: int) -> Iterator[tuple[int, np.ndarray]]:
    layer = np.ones((1, 1))
    yield 0, layer
    for m in range(1, m_max + 1):
        layer = _next_wrong_layer(layer, m)
        yield m, layer


def _check_guard(n: int):
    if n > X_PMF_MAX_N:
        raise GuardError(f"exact law requested for n={n} > {X_PMF_MAX_N}")


def x_laws(p: float, n_max: int, strategy: StrategyTable | None = None,
           ) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(n, masses of X_n on 0..n)`` for ``n = 1..n_max`` at fixed ``p``."""
    _check_guard(n_max)
    if strategy is None:
        strategy = build_strategy_table(p, n_max)
    if strategy.n_max < n_max or strategy.p != p:
        raise ValueError("strategy table does not match the request")
    q = 1.0 - p
    sorted_correct = strategy.identity_correct()
    x_prev = np.array([0.0, 1.0])
    layers = _two_color_layers(n_max - 1)
    next(layers)
    yield 1, x_prev
    for n, (_, layer) in zip(range(2, n_max + 1), layers):
        m = n - 1
        hit_first = int(strategy.a_indicator[n])
        out = np.zeros(n + 1)
        out[hit_first:hit_first + n] += p * x_prev
        out[hit_first + sorted_correct[m]] += q ** n

        w = binomial_pmf(m, p)
        w[0] = 0.0
        bonus_j = strategy.first_guess[n] - 1 if not hit_first else 0
        bonus_w = 0.0
        if 1 <= bonus_j <= m:
            bonus_w, w[bonus_j] = w[bonus_j], 0.0
        j = np.arange(m + 1)
        minority = np.minimum(j, m - j)
        row_w = np.bincount(minority, weights=w, minlength=layer.shape[0])
        wrong = row_w @ layer
        h = layer.shape[0] - 1
        out[m - h:m + 1] += q * wrong[::-1]
        if bonus_w:
            bb = min(bonus_j, m - bonus_j)
            out[m + 1 - bb:m + 2] += q * bonus_w * layer[bb, :bb + 1][::-1]
        x_prev = out
        yield n, out


def x_pmf(params: ShuffleParams, strategy: StrategyTable | None = None) -> Pmf:
    """Exact law of the number of correct guesses ``X_n``."""
    if strategy is None:
        strategy = build_strategy_table(params.p, params.n)
    XnLawRequest(params, strategy)
    for n, masses in x_laws(params.p, params.n, strategy):
        if n == params.n:
            return Pmf(0, masses).trimmed()
    raise AssertionError("unreachable")


def cjn_pmf(params: ShuffleParams) -> Pmf:
    """Law of ``C_{n-1-J_n, J_n}``: the two-color game after a truncated-binomial composition."""
    n, p = params.n, params.p
    if n < 2:
        raise ValueError("needs n >= 2")
    _check_guard(n)
    m = n - 1
    w = truncated_binomial_pmf(n, p).masses
    j = np.arange(1, m + 1)
    layer = None
    for _, layer in _two_color_layers(m):
        pass
    row_w = np.bincount(np.minimum(j, m - j), weights=w, minlength=layer.shape[0])
    wrong = row_w @ layer
    h = layer.shape[0] - 1
    return Pmf(m - h, wrong[::-1]).trimmed()


def x_pmf_bruteforce(params: ShuffleParams, strategy: StrategyTable | None = None) -> Pmf:
    """Enumerate all ``2**n`` words, play the strategy on each deck, accumulate the law."""
    n, p = params.n, params.p
    if n > BRUTEFORCE_MAX_N:
        raise GuardError(f"brute force limited to n <= {BRUTEFORCE_MAX_N}")
    if strategy is None:
        strategy = build_strategy_table(p, n)
    masses = np.zeros(n + 1)
    for letters in itertools.product("ab", repeat=n):
        word = Word("".join(letters))
        k = word.num_a
        weight = p ** k * (1.0 - p) ** (n - k)
        masses[play_deck(word_to_deck(word), p, strategy).correct_count] += weight
    return Pmf(0, masses).trimmed()
