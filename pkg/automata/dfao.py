"""
Automata with output (DFAO) for automatic sequences.

A uniform morphism h with |h(a)| = k for every letter, and a start letter with
h(a)[0] = a, has a fixed point whose n-th letter is computed by reading the
base-k digits of n msd-first: from state a, digit d leads to h(a)[d]. The
output of a state is its letter read as an integer, so "0->0110 1->1001"
yields Thue-Morse in base 4.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from automata.dfa import AutomatonError, Dfa, TrackSignature, alphabet_size, minimize, quotient
from numeration.digits import NumerationSystem, digits_of

logger = logging.getLogger(__name__)

_RULE_RE = re.compile(r"^\s*(\w)\s*->\s*(\w+)\s*$")


class MorphismError(AutomatonError):
    """Malformed or non-uniform morphism."""


@dataclass(frozen=True, eq=False)
class Dfao:
    signature: TrackSignature
    table: np.ndarray
    outputs: np.ndarray

    def __post_init__(self) -> None:
        table = np.array(self.table, dtype=np.int32, copy=True)
        outputs = np.array(self.outputs, dtype=np.int64, copy=True).reshape(-1)
        if table.ndim != 2 or table.shape[1] != alphabet_size(self.signature):
            raise AutomatonError("DFAO table does not match its signature")
        if outputs.size != table.shape[0]:
            raise AutomatonError("DFAO needs one output per state")
        table.setflags(write=False)
        outputs.setflags(write=False)
        object.__setattr__(self, "signature", tuple(self.signature))
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "outputs", outputs)

    @property
    def num_states(self) -> int:
        return int(self.table.shape[0])

    @property
    def system(self) -> NumerationSystem:
        if len(self.signature) != 1:
            raise AutomatonError("sequence automata read a single track")
        return self.signature[0]

    def value(self, n: int) -> int:
        state = 0
        for d in digits_of(n, self.system.base):
            state = int(self.table[state, d])
        return int(self.outputs[state])

    def values(self, ns: np.ndarray) -> np.ndarray:
        v = np.asarray(ns, dtype=np.int64).copy()
        cols: List[np.ndarray] = []
        r, base = self.system.radix, self.system.base
        while (v != 0).any():
            d = v % r
            cols.append(d)
            v = (v - d) // base
        state = np.zeros(v.size, dtype=np.int64)
        for d in reversed(cols):
            state = self.table[state, d].astype(np.int64)
        return self.outputs[state]


def minimize_dfao(dfao: Dfao) -> Dfao:
    table, outputs = quotient(dfao.table, dfao.outputs)
    return Dfao(dfao.signature, table, outputs)


def parse_morphism(text: str) -> Dict[str, str]:
    rules: Dict[str, str] = {}
    for token in re.split(r"\s+(?=\w\s*->)", text.strip()):
        m = _RULE_RE.match(token)
        if not m:
            raise MorphismError(f"cannot read morphism rule {token!r}")
        letter, image = m.group(1), m.group(2)
        if letter in rules:
            raise MorphismError(f"letter {letter!r} has two rules")
        rules[letter] = image
    if not rules:
        raise MorphismError("empty morphism")
    return rules


def _iterate(rules: Dict[str, str], times: int) -> Dict[str, str]:
    out = dict(rules)
    for _ in range(times - 1):
        out = {a: "".join(rules[c] for c in w) for a, w in out.items()}
    return out


def dfao_from_morphism(text: str, promote_width: Optional[int] = None) -> Dfao:
    """DFAO for the fixed point of a uniform morphism, reading base promote_width (default: image length)."""
    rules = parse_morphism(text)
    lengths = {len(w) for w in rules.values()}
    if len(lengths) != 1:
        raise MorphismError(f"morphism is not uniform: image lengths {sorted(lengths)}")
    k = lengths.pop()
    if k < 2:
        raise MorphismError("images must have length at least 2")
    for a, w in rules.items():
        for c in w:
            if c not in rules:
                raise MorphismError(f"letter {c!r} in h({a}) has no rule")
    width = promote_width or k
    power, acc = 1, k
    while acc < width:
        acc *= k
        power += 1
    if acc != width:
        raise MorphismError(f"width {width} is not a power of the image length {k}")
    rules = _iterate(rules, power)
    letters = list(rules)
    start = letters[0]
    if rules[start][0] != start:
        raise MorphismError(f"h({start}) must begin with {start} to have a fixed point")
    for a in letters:
        if not a.isdigit():
            raise MorphismError(f"output letter {a!r} is not a digit")
    index = {a: i for i, a in enumerate(letters)}
    table = np.array([[index[c] for c in rules[a]] for a in letters], dtype=np.int32)
    outputs = np.array([int(a) for a in letters], dtype=np.int64)
    dfao = minimize_dfao(Dfao((NumerationSystem(width),), table, outputs))
    logger.debug(f"morphism -> DFAO base {width} with {dfao.num_states} states")
    return dfao


def preimage(dfao: Dfao, value: int, negate: bool = False) -> Dfa:
    """One-track automaton accepting n with output(n) == value (or != value)."""
    accepting = dfao.outputs == value
    if negate:
        accepting = ~accepting
    return minimize(Dfa(dfao.signature, dfao.table, accepting))
