from automata.dfa import (
    AutomatonError,
    Connective,
    Dfa,
    StateLimitError,
    accepts,
    accepts_many,
    complement,
    dead_state,
    enumerate_tuples,
    equivalent,
    is_empty,
    live_states,
    minimize,
    product,
)
from automata.dfao import Dfao, MorphismError, dfao_from_morphism, preimage
from automata.io import export_dot, load_automaton, save_automaton
from automata.labeled import LabeledDfa
from automata.nfa import Nfa, determinize, project, reverse
from automata.regex import RegexError, compile_regex

__all__ = [
    "AutomatonError",
    "Connective",
    "Dfa",
    "Dfao",
    "LabeledDfa",
    "MorphismError",
    "Nfa",
    "RegexError",
    "StateLimitError",
    "accepts",
    "accepts_many",
    "compile_regex",
    "complement",
    "dead_state",
    "determinize",
    "dfao_from_morphism",
    "enumerate_tuples",
    "equivalent",
    "export_dot",
    "is_empty",
    "live_states",
    "load_automaton",
    "minimize",
    "preimage",
    "product",
    "project",
    "reverse",
    "save_automaton",
]
