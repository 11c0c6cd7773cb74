"""
Multi-track deterministic automata over tuples of digits.

A Dfa reads tuple-words most-significant-digit first. Track i carries digits of
numeration system signature[i]; a letter is the mixed-radix code of one digit
per track, track 0 most significant. The transition table is a dense int32
array of shape (states, alphabet) and the initial state is always 0.

Every automaton built by this package is padding-closed: a tuple-word is
accepted iff the same word with extra leading all-zero letters is accepted.
For a minimal automaton that is simply table[0, 0] == 0.

Operations never mutate their inputs; tables are marked read-only so automata
can be shared freely between threads.

Usage:
  from automata.dfa import Dfa, product, complement, minimize, accepts, Connective
  both = product(a, b, Connective.AND)
  accepts(both, (7, 7))
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from numeration.digits import NumerationError, NumerationSystem, digits_of

logger = logging.getLogger(__name__)

TrackSignature = Tuple[NumerationSystem, ...]

DEFAULT_STATE_CAP = 1_000_000
_REFINE_CHUNK = 64
ACCEPT_CHUNK = 1 << 18


class AutomatonError(ValueError):
    """Malformed automaton, signature mismatch, or bad input word."""


class StateLimitError(RuntimeError):
    """A construction exceeded the configured state cap."""


class Connective(str, Enum):
    AND = "and"
    OR = "or"
    IMPLIES = "implies"
    IFF = "iff"
    XOR = "xor"

    def apply(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        if self is Connective.AND:
            return left & right
        if self is Connective.OR:
            return left | right
        if self is Connective.IMPLIES:
            return ~left | right
        if self is Connective.IFF:
            return left == right
        return left != right


# -----------------------------
# Letters
# -----------------------------

def radices(signature: Sequence[NumerationSystem]) -> Tuple[int, ...]:
    return tuple(s.radix for s in signature)


def alphabet_size(signature: Sequence[NumerationSystem]) -> int:
    return int(np.prod(radices(signature), dtype=np.int64)) if signature else 1


def strides(signature: Sequence[NumerationSystem]) -> Tuple[int, ...]:
    out = []
    acc = 1
    for r in reversed(radices(signature)):
        out.append(acc)
        acc *= r
    return tuple(reversed(out))


def encode_letter(signature: Sequence[NumerationSystem], digits: Sequence[int]) -> int:
    if len(digits) != len(signature):
        raise AutomatonError(f"letter has {len(digits)} digits, signature has {len(signature)} tracks")
    code = 0
    for d, s in zip(digits, signature):
        if not 0 <= d < s.radix:
            raise AutomatonError(f"digit {d} outside alphabet of {s}")
        code = code * s.radix + d
    return code


def letter_digits(signature: Sequence[NumerationSystem]) -> np.ndarray:
    """Digits of every letter, shape (alphabet, tracks)."""
    size = alphabet_size(signature)
    if not signature:
        return np.zeros((1, 0), dtype=np.int64)
    cols = np.unravel_index(np.arange(size), radices(signature))
    return np.stack(cols, axis=1).astype(np.int64)


def letter_label(signature: Sequence[NumerationSystem], letter: int) -> str:
    digits = letter_digits(signature)[letter] if signature else ()
    return "[" + ",".join(str(int(d)) for d in digits) + "]"


# -----------------------------
# Dfa
# -----------------------------

@dataclass(frozen=True, eq=False)
class Dfa:
    signature: TrackSignature
    table: np.ndarray
    accepting: np.ndarray

    def __post_init__(self) -> None:
        signature = tuple(self.signature)
        table = np.array(self.table, dtype=np.int32, copy=True)
        accepting = np.array(self.accepting, dtype=bool, copy=True).reshape(-1)
        if table.ndim != 2 or table.shape[0] == 0:
            raise AutomatonError(f"transition table must be a non-empty 2-d array, got shape {table.shape}")
        if table.shape[1] != alphabet_size(signature):
            raise AutomatonError(f"table has {table.shape[1]} letters, signature needs {alphabet_size(signature)}")
        if accepting.shape[0] != table.shape[0]:
            raise AutomatonError("accepting vector does not match the number of states")
        if table.min() < 0 or table.max() >= table.shape[0]:
            raise AutomatonError("transition target out of range")
        table.setflags(write=False)
        accepting.setflags(write=False)
        object.__setattr__(self, "signature", signature)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "accepting", accepting)

    @property
    def num_states(self) -> int:
        return int(self.table.shape[0])

    @property
    def arity(self) -> int:
        return len(self.signature)

    @property
    def alphabet_size(self) -> int:
        return int(self.table.shape[1])

    def __repr__(self) -> str:
        sig = ",".join(str(s.base) for s in self.signature)
        return f"Dfa(signature=({sig}), states={self.num_states}, accepting={int(self.accepting.sum())})"


def universal(signature: Sequence[NumerationSystem], value: bool = True) -> Dfa:
    """One-state automaton accepting everything (or nothing)."""
    return Dfa(tuple(signature), np.zeros((1, alphabet_size(signature)), dtype=np.int32), np.array([value]))


def _check_cap(count: int, cap: int, what: str) -> None:
    if count > cap:
        raise StateLimitError(f"{what} exceeded the state cap ({count} > {cap})")


# -----------------------------
# Canonical form
# -----------------------------

def _bfs_order(table: np.ndarray, start: int = 0) -> np.ndarray:
    """Reachable states in breadth-first order; each row contributes targets in order of first occurrence."""
    seen = np.full(table.shape[0], -1, dtype=np.int64)
    seen[start] = 0
    order = [np.array([start], dtype=np.int64)]
    frontier = order[0]
    count = 1
    while frontier.size:
        flat = table[frontier].reshape(-1)
        uniq, first = np.unique(flat, return_index=True)
        candidates = uniq[np.argsort(first, kind="stable")]
        fresh = candidates[seen[candidates] < 0]
        seen[fresh] = np.arange(count, count + fresh.size)
        count += fresh.size
        order.append(fresh)
        frontier = fresh
    return np.concatenate(order)


def _renumber(table: np.ndarray, labels: np.ndarray, start: int = 0) -> Tuple[np.ndarray, np.ndarray]:
    order = _bfs_order(table, start)
    index = np.full(table.shape[0], -1, dtype=np.int64)
    index[order] = np.arange(order.size)
    return index[table[order]].astype(np.int32), labels[order]


def refine_partition(table: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Coarsest partition compatible with `labels` and closed under transitions (Moore)."""
    _, classes = np.unique(labels, return_inverse=True)
    classes = classes.reshape(-1).astype(np.int64)
    count = int(classes.max()) + 1 if classes.size else 0
    sigma = table.shape[1]
    while True:
        refined = classes
        for lo in range(0, sigma, _REFINE_CHUNK):
            block = classes[table[:, lo:lo + _REFINE_CHUNK]]
            _, refined = np.unique(np.column_stack([refined, block]), axis=0, return_inverse=True)
            refined = refined.reshape(-1)
        new_count = int(refined.max()) + 1
        if new_count == count:
            return classes
        classes, count = refined.astype(np.int64), new_count


def quotient(table: np.ndarray, labels: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Minimal canonical (table, labels) for a complete automaton with per-state labels, start 0."""
    order = _bfs_order(table, 0)
    index = np.full(table.shape[0], -1, dtype=np.int64)
    index[order] = np.arange(order.size)
    reach_table = index[table[order]]
    reach_labels = labels[order]
    classes = refine_partition(reach_table, reach_labels)
    _, reps = np.unique(classes, return_index=True)
    q_table = classes[reach_table[reps]]
    q_labels = reach_labels[reps]
    return _renumber(q_table, q_labels, int(classes[0]))


def minimize(dfa: Dfa) -> Dfa:
    table, accepting = quotient(dfa.table, dfa.accepting)
    if table.shape[0] != dfa.num_states:
        logger.debug(f"minimize: {dfa.num_states} -> {table.shape[0]} states")
    return Dfa(dfa.signature, table, accepting)


def dead_state(dfa: Dfa) -> Optional[int]:
    """Index of the non-accepting sink, if any (unique in a minimal automaton)."""
    own = np.arange(dfa.num_states)[:, None]
    sinks = np.nonzero((dfa.table == own).all(axis=1) & ~dfa.accepting)[0]
    return int(sinks[0]) if sinks.size else None


def live_states(dfa: Dfa) -> int:
    """State count without the dead sink, the figure usually quoted for an automaton."""
    return dfa.num_states - (0 if dead_state(dfa) is None else 1)


def is_padding_closed(dfa: Dfa) -> bool:
    m = minimize(dfa)
    return int(m.table[0, 0]) == 0


def same_structure(x: Dfa, y: Dfa) -> bool:
    return (
        x.signature == y.signature
        and np.array_equal(x.table, y.table)
        and np.array_equal(x.accepting, y.accepting)
    )


# -----------------------------
# Boolean algebra
# -----------------------------

def complement(dfa: Dfa) -> Dfa:
    return Dfa(dfa.signature, dfa.table, ~dfa.accepting)


def product(x: Dfa, y: Dfa, op: Connective | str, state_cap: int = DEFAULT_STATE_CAP) -> Dfa:
    """Synchronous product; L(result) = op(L(x), L(y)). The result is minimized."""
    op = Connective(op)
    if x.signature != y.signature:
        raise AutomatonError(
            f"signature mismatch: {[s.base for s in x.signature]} vs {[s.base for s in y.signature]}"
        )
    ny = y.num_states
    xt = x.table.astype(np.int64)
    yt = y.table.astype(np.int64)
    index: dict[int, int] = {0: 0}
    codes = [0]
    rows: List[np.ndarray] = []
    frontier = np.array([0], dtype=np.int64)
    while frontier.size:
        fx, fy = np.divmod(frontier, ny)
        succ = xt[fx] * ny + yt[fy]
        rows.append(succ)
        fresh = [c for c in np.unique(succ).tolist() if c not in index]
        for c in fresh:
            index[c] = len(codes)
            codes.append(c)
        _check_cap(len(codes), state_cap, f"product ({op.value})")
        frontier = np.array(fresh, dtype=np.int64)
    all_codes = np.array(codes, dtype=np.int64)
    order = np.argsort(all_codes)
    raw = np.concatenate(rows)
    table = order[np.searchsorted(all_codes[order], raw)]
    ax, ay = np.divmod(all_codes, ny)
    accepting = op.apply(x.accepting[ax], y.accepting[ay])
    logger.debug(f"product ({op.value}): {x.num_states} x {y.num_states} -> {len(codes)} reachable")
    return minimize(Dfa(x.signature, table, accepting))


def conjunction(x: Dfa, y: Dfa, state_cap: int = DEFAULT_STATE_CAP) -> Dfa:
    return product(x, y, Connective.AND, state_cap)


def union(x: Dfa, y: Dfa, state_cap: int = DEFAULT_STATE_CAP) -> Dfa:
    return product(x, y, Connective.OR, state_cap)


def is_empty(dfa: Dfa) -> bool:
    order = _bfs_order(dfa.table, 0)
    return not bool(dfa.accepting[order].any())


def equivalent(x: Dfa, y: Dfa) -> bool:
    if x.signature != y.signature:
        return False
    return same_structure(minimize(x), minimize(y))


# -----------------------------
# Running words
# -----------------------------

def _column_digits(values: np.ndarray, system: NumerationSystem) -> List[np.ndarray]:
    """Digit columns, least significant first, until every value is exhausted."""
    v = values.astype(np.int64, copy=True)
    if not system.is_negative and (v < 0).any():
        raise NumerationError(f"negative value in positive base {system.base}")
    cols: List[np.ndarray] = []
    r, base = system.radix, system.base
    while (v != 0).any():
        d = v % r
        cols.append(d)
        v = (v - d) // base
    return cols


def _accepts_block(dfa: Dfa, arrays: List[np.ndarray], count: int, pad: int) -> np.ndarray:
    digit_cols = [_column_digits(a, s) for a, s in zip(arrays, dfa.signature)]
    length = max((len(c) for c in digit_cols), default=0)
    state = np.zeros(count, dtype=np.int64)
    for _ in range(pad):
        state = dfa.table[state, 0].astype(np.int64)
    sw = strides(dfa.signature)
    for pos in range(length - 1, -1, -1):
        letters = np.zeros(count, dtype=np.int64)
        for cols, stride in zip(digit_cols, sw):
            if pos < len(cols):
                letters += cols[pos] * stride
        state = dfa.table[state, letters].astype(np.int64)
    return dfa.accepting[state]


def accepts_many(dfa: Dfa, columns: Sequence[Iterable[int]], pad: int = 0) -> np.ndarray:
    """Vectorised accepts over N tuples; columns[i] holds the values of track i. `pad` adds leading zero letters."""
    if len(columns) != dfa.arity:
        raise AutomatonError(f"expected {dfa.arity} value columns, got {len(columns)}")
    arrays = [np.asarray(list(c) if not isinstance(c, np.ndarray) else c, dtype=np.int64) for c in columns]
    count = arrays[0].size if arrays else 1
    if count <= ACCEPT_CHUNK:
        return _accepts_block(dfa, arrays, count, pad)
    # digit columns cost a word per digit per tuple; bound them per block
    parts = []
    for start in range(0, count, ACCEPT_CHUNK):
        block = [a[start:start + ACCEPT_CHUNK] for a in arrays]
        parts.append(_accepts_block(dfa, block, block[0].size, pad))
    return np.concatenate(parts)


def accepts(dfa: Dfa, values: Sequence[int]) -> bool:
    """Pad all tracks to a common length and run the automaton."""
    if len(values) != dfa.arity:
        raise AutomatonError(f"expected {dfa.arity} values, got {len(values)}")
    words = [digits_of(int(v), s.base) for v, s in zip(values, dfa.signature)]
    length = max((len(w) for w in words), default=0)
    padded = [[0] * (length - len(w)) + w for w in words]
    state = 0
    for pos in range(length):
        state = int(dfa.table[state, encode_letter(dfa.signature, [w[pos] for w in padded])])
    return bool(dfa.accepting[state])


def run_word(dfa: Dfa, letters: Iterable[int]) -> int:
    state = 0
    for a in letters:
        state = int(dfa.table[state, a])
    return state


# -----------------------------
# Enumeration
# -----------------------------

def _value(digits: Sequence[int], base: int) -> int:
    acc = 0
    for d in digits:
        acc = acc * base + d
    return acc


def enumerate_tuples(dfa: Dfa, limit: int) -> List[Tuple[int, ...]]:
    """Accepted tuples whose canonical words have length <= limit, in length-lex order of tuple-words."""
    if limit < 0:
        raise AutomatonError(f"limit must be nonnegative, got {limit}")
    # live[r][s]: some accepting state is reachable from s in exactly r letters
    live = [dfa.accepting.copy()]
    for _ in range(limit):
        live.append(live[-1][dfa.table].any(axis=1))
    digits = letter_digits(dfa.signature)
    found: List[Tuple[int, List[int]]] = []

    def walk(state: int, remaining: int, word: List[int]) -> None:
        if remaining == 0:
            found.append((len(word), list(word)))
            return
        row = dfa.table[state]
        for a in range(dfa.alphabet_size):
            t = int(row[a])
            if live[remaining - 1][t]:
                word.append(a)
                walk(t, remaining - 1, word)
                word.pop()

    if live[limit][0]:
        walk(0, limit, [])

    out = []
    keyed = []
    for _, word in found:
        lead = 0
        while lead < len(word) and word[lead] == 0:
            lead += 1
        tail = word[lead:]
        values = tuple(
            _value([int(digits[a][i]) for a in tail], s.base) for i, s in enumerate(dfa.signature)
        )
        keyed.append(((len(tail), tail), values))
    keyed.sort(key=lambda kv: kv[0])
    for _, values in keyed:
        out.append(values)
    return out
