"""The asymmetric Gilbert-Shannon-Reeds riffle shuffle.

A once-shuffled deck of ``n`` cards can be produced three equivalent ways:

* draw an i.i.d. word over ``{a, b}`` with ``P(a) = p`` and relabel the
  ``a`` positions ``1..k`` and the ``b`` positions ``k+1..n`` (``word_to_deck``);
* cut after ``k ~ Bin(n, p)`` cards and drop cards from the packets with
  probability proportional to their remaining sizes
  (``sample_deck_cut_interleave``);
* draw a permutation directly from the measure ``riffle_measure``.

Sampling goes through the word; cut-and-interleave is kept as a cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .pmf import Pmf

# below this distance from 1/2 the identity probability is summed term by term
HALF_SINGULARITY_TOL = 1e-6
# direct binomial coefficients up to this n, log-gamma above
DIRECT_BINOMIAL_MAX_N = 50


@dataclass(frozen=True)
class ShuffleParams:
    n: int
    p: float

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise ValueError(f"deck size must be a positive integer, got {self.n!r}")
        if not (0.0 < self.p < 1.0):
            raise ValueError(f"p must lie in the open interval (0, 1), got {self.p!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "p", float(self.p))

    @property
    def q(self) -> float:
        return 1.0 - self.p


@dataclass(frozen=True)
class Word:
    letters: str

    def __post_init__(self):
        if not self.letters or set(self.letters) - {"a", "b"}:
            raise ValueError(f"a word is a non-empty string over 'ab', got {self.letters!r}")

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def num_a(self) -> int:
        return self.letters.count("a")


@dataclass(frozen=True)
class Deck:
    cards: tuple[int, ...]

    def __post_init__(self):
        cards = tuple(int(c) for c in self.cards)
        if sorted(cards) != list(range(1, len(cards) + 1)):
            raise ValueError(f"deck must be a permutation of 1..n, got {self.cards!r}")
        object.__setattr__(self, "cards", cards)

    def __len__(self) -> int:
        return len(self.cards)

    @property
    def is_identity(self) -> bool:
        return all(c == i for i, c in enumerate(self.cards, start=1))


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def binomial_pmf(n: int, p: float) -> np.ndarray:
    """Masses of ``Bin(n, p)`` on ``0..n``."""
    q = 1.0 - p
    k = np.arange(n + 1)
    if n <= DIRECT_BINOMIAL_MAX_N:
        coeffs = np.array([math.comb(n, i) for i in range(n + 1)], dtype=float)
        return coeffs * p ** k * q ** (n - k)
    logc = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
    return np.exp(logc + k * math.log(p) + (n - k) * math.log1p(-p))


def binomial_mass(n: int, k: int, p: float) -> float:
    """Single mass ``P(Bin(n, p) = k)``, same precision policy as ``binomial_pmf``."""
    if k < 0 or k > n:
        return 0.0
    if n <= DIRECT_BINOMIAL_MAX_N:
        return math.comb(n, k) * p ** k * (1.0 - p) ** (n - k)
    logc = math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
    return math.exp(logc + k * math.log(p) + (n - k) * math.log1p(-p))


def cut_pmf(params: ShuffleParams) -> Pmf:
    return Pmf(0, binomial_pmf(params.n, params.p))


def sample_word(params: ShuffleParams, rng) -> Word:
    letters = _as_generator(rng).random(params.n) < params.p
    return Word("".join("a" if x else "b" for x in letters))


def word_to_deck(word: Word) -> Deck:
    next_a, next_b = 1, word.num_a + 1
    cards = []
    for letter in word.letters:
        if letter == "a":
            cards.append(next_a)
            next_a += 1
        else:
            cards.append(next_b)
            next_b += 1
    return Deck(tuple(cards))


def sample_deck_cut_interleave(params: ShuffleParams, rng) -> Deck:
    rng = _as_generator(rng)
    n = params.n
    k = int(rng.binomial(n, params.p))
    m1, m2 = k, n - k
    # the shuffled pile is built bottom-up from the bottoms of the packets
    bottom_up = []
    while m1 + m2:
        if rng.random() * (m1 + m2) < m1:
            bottom_up.append(m1)
            m1 -= 1
        else:
            bottom_up.append(k + m2)
            m2 -= 1
    return Deck(tuple(reversed(bottom_up)))


def identity_probability(params: ShuffleParams) -> float:
    n, p, q = params.n, params.p, params.q
    if abs(p - 0.5) < HALF_SINGULARITY_TOL:
        return math.fsum(p ** k * q ** (n - k) for k in range(n + 1))
    return (q ** (n + 1) - p ** (n + 1)) / (1.0 - 2.0 * p)


def riffle_cuts(deck: Deck) -> list[int]:
    """All ``k`` in ``1..n-1`` such that ``1..k`` and ``k+1..n`` both appear in increasing order."""
    n = len(deck)
    pos = [0] * (n + 1)
    for i, c in enumerate(deck.cards):
        pos[c] = i
    # head_ok[k]: 1..k in order; tail_ok[k]: k+1..n in order
    head_ok = [True] * (n + 1)
    for k in range(2, n + 1):
        head_ok[k] = head_ok[k - 1] and pos[k - 1] < pos[k]
    tail_ok = [True] * (n + 1)
    for k in range(n - 2, -1, -1):
        tail_ok[k] = tail_ok[k + 1] and pos[k + 1] < pos[k + 2]
    return [k for k in range(1, n) if head_ok[k] and tail_ok[k]]


def riffle_measure(deck: Deck, p: float) -> float:
    """Probability of ``deck`` after one asymmetric riffle shuffle of a sorted deck."""
    n = len(deck)
    if deck.is_identity:
        return identity_probability(ShuffleParams(n, p))
    cuts = riffle_cuts(deck)
    if not cuts:
        return 0.0
    assert len(cuts) == 1, f"non-identity riffle outcome with several cuts {cuts}"
    k = cuts[0]
    return p ** k * (1.0 - p) ** (n - k)


def first_card_pmf(params: ShuffleParams) -> Pmf:
    n, p, q = params.n, params.p, params.q
    masses = np.empty(n)
    masses[0] = p + q ** n
    # card m >= 2 on top <=> leading b and exactly m - 1 a's among the rest
    masses[1:] = q * binomial_pmf(n - 1, p)[1:]
    return Pmf(1, masses)
