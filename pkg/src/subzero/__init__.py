"""Subzero tree automata and their regular emptiness problem."""

from .calculus import Derivation, Profile, RuleError, derivation_size, validate_derivation
from .core import Multiset, SubzeroAutomaton, Transition, validate_automaton
from .engine import decide_regular_emptiness, derivable, extract_witness, saturate
from .realizer import RunGraph, graph_profile, realize
from .runcheck import check_partial_run, is_accepting_run, zero_measure_exact

__version__ = "0.1.0"
