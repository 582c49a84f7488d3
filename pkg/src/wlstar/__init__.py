"""Weighted L* for deterministic automata over semifields."""

from .automaton import (
    StatePartition,
    Wdfsa,
    Wfsa,
    empty_automaton,
    equivalent,
    evaluate,
    is_transition_regular,
    minimal_state_count_bruteforce,
    quotient,
    random_wdfsa,
    trim,
)
from .errors import *  # noqa: F401,F403
from .hankel import HankelSystem, make_automaton
from .learner import LearnResult, LearnStats, lstar
from .oracle import bruteforce_oracle, memoize, reference_oracle
from .semifield import BOOLEAN, MINPLUS, RATIONAL, REAL, get as get_semifield

__version__ = "0.1.0"
