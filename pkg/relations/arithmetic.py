"""
Addition, order, constant multiplication and cross-base relations.

Carry automata are built least-significant digit first, where carries
propagate naturally, then reversed and determinized into the msd-first
automata the rest of the package reads.
"""
from __future__ import annotations

import logging
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from automata.dfa import Dfa, letter_digits, minimize
from automata.labeled import LabeledDfa, disjoin, conjoin, exists_all
from automata.nfa import determinize, reverse
from automata.regex import compile_regex
from numeration.digits import NumerationError, NumerationSystem
from relations.linear import Relop, comparison_relation, const_eq, eq_relation, sign_relation

logger = logging.getLogger(__name__)

# Factorisation used for 3412 in base 16: ("succ", m) is m+1 from m, ("times", p, q) is p*q.
BASE16_CHAIN_3412: Tuple[Tuple, ...] = (
    ("succ", 1),
    ("succ", 2),
    ("times", 2, 2),
    ("times", 3, 4),
    ("succ", 12),
    ("times", 4, 13),
    ("succ", 52),
    ("times", 4, 53),
    ("succ", 212),
    ("times", 4, 213),
    ("succ", 852),
    ("times", 4, 853),
)

Step = Callable[[object, np.ndarray], Tuple[np.ndarray, np.ndarray]]


def _lsd_automaton(signature, start, step: Step, accept: Callable[[object], bool]) -> Dfa:
    """
    Explore carry states from `start`. step(state, digits) returns, for every
    letter, a validity mask and the successor state keys (one row per letter).
    """
    digits = letter_digits(signature)
    index: Dict[object, int] = {start: 0}
    states = [start]
    rows: List[np.ndarray] = []
    dead = -1
    i = 0
    while i < len(states):
        valid, successors = step(states[i], digits)
        row = np.empty(digits.shape[0], dtype=np.int64)
        for a in range(digits.shape[0]):
            if not valid[a]:
                row[a] = dead
                continue
            key = tuple(int(v) for v in successors[a]) if np.ndim(successors[a]) else int(successors[a])
            j = index.get(key)
            if j is None:
                j = len(states)
                index[key] = j
                states.append(key)
            row[a] = j
        rows.append(row)
        i += 1
    sink = len(states)
    table = np.vstack(rows + [np.full(digits.shape[0], sink)])
    table[table < 0] = sink
    accepting = np.array([accept(s) for s in states] + [False])
    logger.debug(f"lsd carry automaton over {[s.base for s in signature]}: carries {states}")
    return Dfa(tuple(signature), table, accepting)


def _msd(lsd: Dfa) -> Dfa:
    return minimize(determinize(reverse(lsd)))


@lru_cache(maxsize=None)
def add_relation(system: NumerationSystem) -> Dfa:
    """Three tracks (x, y, z) with x + y = z."""
    r, base = system.radix, system.base

    def step(carry, digits):
        v = digits[:, 0] + digits[:, 1] + carry - digits[:, 2]
        return v % r == 0, v // base

    return _msd(_lsd_automaton((system,) * 3, 0, step, lambda c: c == 0))


@lru_cache(maxsize=None)
def lt_relation(system: NumerationSystem) -> Dfa:
    """Two tracks (x, y) with x < y; in a negative base this is "some d > 0 has x + d = y"."""
    if not system.is_negative:
        return comparison_relation([1, -1], 0, system, Relop.LT)
    add = LabeledDfa(add_relation(system), ("x", "d", "y"))
    positive = LabeledDfa(sign_relation(system, Relop.GT), ("d",))
    return exists_all([add, positive], ["d"]).reorder(("x", "y")).dfa


def _succ(mult: Dfa, system: NumerationSystem) -> Dfa:
    """From x = m*y, the relation x = (m+1)*y, as "exists z: z = m*y and y + z = x"."""
    add = LabeledDfa(add_relation(system), ("y", "z", "x"))
    times = LabeledDfa(mult, ("z", "y"))
    return exists_all([add, times], ["z"]).reorder(("x", "y")).dfa


def _times(outer: Dfa, inner: Dfa) -> Dfa:
    """From x = p*y and x = q*y, the relation x = p*q*y, as "exists z: x = p*z and z = q*y"."""
    left = LabeledDfa(outer, ("x", "z"))
    right = LabeledDfa(inner, ("z", "y"))
    return exists_all([left, right], ["z"]).reorder(("x", "y")).dfa


def multiplication_chain(c: int, system: NumerationSystem) -> Tuple[Tuple, ...]:
    """Chain of succ/times steps ending at c; base 16 uses the fixed factorisation of 3412."""
    if c == 3412 and system.base == 16:
        return BASE16_CHAIN_3412
    steps: List[Tuple] = []
    m = 1
    for bit in bin(c)[3:]:
        steps.append(("succ", 1) if m == 1 else ("times", 2, m))
        m *= 2
        if bit == "1":
            steps.append(("succ", m))
            m += 1
    return tuple(steps)


@lru_cache(maxsize=None)
def const_mult_relation(c: int, system: NumerationSystem) -> Dfa:
    """Two tracks (x, y) with x = c*y, composed from addition along a multiplication chain."""
    if c < 1:
        raise NumerationError(f"constant multiplier must be positive, got {c}")
    built: Dict[int, Dfa] = {1: eq_relation(system)}
    for step in multiplication_chain(c, system):
        if step[0] == "succ":
            m = step[1]
            built[m + 1] = _succ(built[m], system)
        else:
            p, q = step[1], step[2]
            built[p * q] = _times(built[p], built[q])
    logger.info(f"✓ mult{c} over {system.label}: {built[c].num_states} states")
    return built[c]


# -----------------------------
# Cross-base relations
# -----------------------------

def digit_copy_relation(a: int, b: int) -> Dfa:
    """(x, m) where x in base a and m in base b are the same digit word."""
    if not 2 <= a <= b:
        raise NumerationError(f"digit copy needs 2 <= a <= b, got a={a}, b={b}")
    pattern = "(" + "|".join(f"[{d},{d}]" for d in range(a)) + ")*"
    return compile_regex(pattern, (NumerationSystem(a), NumerationSystem(b)))


def power_pairs_relation(a: int, b: int) -> Dfa:
    """(a^i, b^i) for i >= 0."""
    if a < 2 or b < 2:
        raise NumerationError(f"power pairs need positive bases >= 2, got {a}, {b}")
    return compile_regex("[0,0]*[1,1][0,0]*", (NumerationSystem(a), NumerationSystem(b)))


@lru_cache(maxsize=None)
def cross_equality(k: int) -> Dfa:
    """(n, y) with n in base -k, y in base k, and n = y as integers."""
    if k < 2:
        raise NumerationError(f"k must be at least 2, got {k}")
    signature = (NumerationSystem(-k), NumerationSystem(k))

    # (-k)^i = (-1)^i k^i, so digit i of n enters a base-k carry with sign (-1)^i
    def step(state, digits):
        carry, parity = state
        v = carry + digits[:, 0] * (1 - 2 * parity) - digits[:, 1]
        nxt = np.stack([v // k, np.full(v.size, 1 - parity)], axis=1)
        return v % k == 0, nxt

    return _msd(_lsd_automaton(signature, (0, 0), step, lambda s: s[0] == 0))


@lru_cache(maxsize=None)
def neg_to_pos_max0(k: int) -> Dfa:
    """(n, y) with n in base -k, y in base k, and y = max(0, n)."""
    neg, pos = NumerationSystem(-k), NumerationSystem(k)
    cross = LabeledDfa(cross_equality(k), ("n", "y"))
    nonneg = LabeledDfa(sign_relation(neg, Relop.GE), ("n",))
    negative = LabeledDfa(sign_relation(neg, Relop.LT), ("n",))
    zero = LabeledDfa(const_eq(0, pos), ("y",))
    result = disjoin(conjoin(cross, nonneg), conjoin(negative, zero))
    logger.debug(f"max(0,n) for base -{k}/{k}: {result.num_states} states")
    return result.reorder(("n", "y")).dfa
