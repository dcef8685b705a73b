"""Card guessing with complete feedback after one asymmetric riffle shuffle."""

from .exact_dist import GuardError, c_pmf, cjn_pmf, x_pmf, x_pmf_bruteforce
from .montecarlo import McConfig, simulate_cjn, simulate_x
from .pmf import Pmf, moments
from .shuffle_model import (Deck, ShuffleParams, Word, first_card_pmf, identity_probability,
                            riffle_measure, sample_word, word_to_deck)
from .strategy import StrategyTable, build_strategy_table, play_deck

__all__ = [
    "Deck", "GuardError", "McConfig", "Pmf", "ShuffleParams", "StrategyTable", "Word",
    "build_strategy_table", "c_pmf", "cjn_pmf", "first_card_pmf", "identity_probability",
    "moments", "play_deck", "riffle_measure", "sample_word", "simulate_cjn", "simulate_x",
    "word_to_deck", "x_pmf", "x_pmf_bruteforce",
]
