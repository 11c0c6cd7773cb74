"""
Nondeterministic automata, reversal, subset construction and projection.

An Nfa stores moves as an int32 array of shape (states, alphabet, fan) padded
with -1. Subsets are kept as sorted int32 index vectors and interned by their
bytes, so the construction never materialises a dense (alphabet x states)
matrix.

determinize(pad_start=True) builds the padding closure of the language: the
initial subset is closed under the all-zero letter and the start state loops on
it. A start subset reached again later is a different DFA state, since the loop
only holds at the beginning of the word.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence

import numpy as np

from automata.dfa import (
    DEFAULT_STATE_CAP,
    AutomatonError,
    Dfa,
    NumerationSystem,
    TrackSignature,
    _check_cap,
    alphabet_size,
    letter_digits,
    minimize,
    strides,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Nfa:
    signature: TrackSignature
    moves: np.ndarray
    initial: np.ndarray
    accepting: np.ndarray

    def __post_init__(self) -> None:
        moves = np.array(self.moves, dtype=np.int32, copy=True)
        if moves.ndim != 3:
            raise AutomatonError(f"moves must be (states, alphabet, fan), got shape {moves.shape}")
        if moves.shape[1] != alphabet_size(self.signature):
            raise AutomatonError("moves do not match the signature alphabet")
        initial = np.array(self.initial, dtype=bool).reshape(-1)
        accepting = np.array(self.accepting, dtype=bool).reshape(-1)
        if initial.size != moves.shape[0] or accepting.size != moves.shape[0]:
            raise AutomatonError("initial/accepting vectors do not match the number of states")
        for arr in (moves, initial, accepting):
            arr.setflags(write=False)
        object.__setattr__(self, "signature", tuple(self.signature))
        object.__setattr__(self, "moves", moves)
        object.__setattr__(self, "initial", initial)
        object.__setattr__(self, "accepting", accepting)

    @property
    def num_states(self) -> int:
        return int(self.moves.shape[0])


def as_nfa(dfa: Dfa) -> Nfa:
    initial = np.zeros(dfa.num_states, dtype=bool)
    initial[0] = True
    return Nfa(dfa.signature, dfa.table[:, :, None], initial, dfa.accepting)


def reverse(dfa: Dfa | Nfa) -> Nfa:
    """Automaton for the reversed language: accepting states become initial, the start becomes accepting."""
    nfa = as_nfa(dfa) if isinstance(dfa, Dfa) else dfa
    n, sigma, fan = nfa.moves.shape
    src = np.repeat(np.arange(n), sigma * fan)
    letter = np.tile(np.repeat(np.arange(sigma), fan), n)
    dst = nfa.moves.reshape(-1).astype(np.int64)
    keep = dst >= 0
    src, letter, dst = src[keep], letter[keep], dst[keep]
    key = dst * sigma + letter
    order = np.argsort(key, kind="stable")
    key, src = key[order], src[order]
    counts = np.bincount(key, minlength=n * sigma)
    width = max(int(counts.max()) if counts.size else 0, 1)
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
    rank = np.arange(key.size) - starts[key]
    moves = np.full((n * sigma, width), -1, dtype=np.int32)
    moves[key, rank] = src
    return Nfa(nfa.signature, moves.reshape(n, sigma, width), nfa.accepting.copy(), nfa.initial.copy())


# -----------------------------
# Subset construction
# -----------------------------

def _zero_closure(moves: np.ndarray, members: np.ndarray) -> np.ndarray:
    current = np.unique(members)
    while True:
        nxt = moves[current, 0, :].reshape(-1)
        merged = np.unique(np.concatenate([current, nxt[nxt >= 0]]))
        if merged.size == current.size:
            return current.astype(np.int32)
        current = merged


def _successor_rows(moves: np.ndarray, members: np.ndarray):
    sigma = moves.shape[1]
    if members.size == 0:
        return np.zeros((1, 0), dtype=np.int32), np.zeros(sigma, dtype=np.int64)
    sub = moves[members]
    flat = np.sort(np.transpose(sub, (1, 0, 2)).reshape(sigma, -1), axis=1)
    if flat.shape[1] > 1:
        dup = np.zeros(flat.shape, dtype=bool)
        dup[:, 1:] = flat[:, 1:] == flat[:, :-1]
        flat = np.sort(np.where(dup, -1, flat), axis=1)
    uniq, inverse = np.unique(flat, axis=0, return_inverse=True)
    return uniq, inverse.reshape(-1)


def determinize(nfa: Nfa, pad_start: bool = False, state_cap: int = DEFAULT_STATE_CAP) -> Dfa:
    """Subset construction followed by minimization."""
    moves = nfa.moves
    start = np.nonzero(nfa.initial)[0].astype(np.int32)
    if pad_start:
        start = _zero_closure(moves, start)
    subsets: List[np.ndarray] = [start]
    index: Dict[bytes, int] = {}
    if not pad_start:
        index[start.tobytes()] = 0
    rows: List[np.ndarray] = []
    i = 0
    while i < len(subsets):
        uniq, inverse = _successor_rows(moves, subsets[i])
        ids = np.empty(uniq.shape[0], dtype=np.int64)
        for k in range(uniq.shape[0]):
            row = uniq[k]
            members = row[row >= 0].astype(np.int32)
            key = members.tobytes()
            j = index.get(key)
            if j is None:
                j = len(subsets)
                index[key] = j
                subsets.append(members)
            ids[k] = j
        row_ids = ids[inverse]
        if i == 0 and pad_start:
            row_ids[0] = 0
        rows.append(row_ids)
        _check_cap(len(subsets), state_cap, "determinize")
        i += 1
    accepting = np.array([bool(nfa.accepting[s].any()) for s in subsets])
    logger.debug(f"determinize: {nfa.num_states} nfa states -> {len(subsets)} subsets")
    return minimize(Dfa(nfa.signature, np.stack(rows), accepting))


# -----------------------------
# Projection
# -----------------------------

def lift_table(signature: Sequence[NumerationSystem], track: int) -> np.ndarray:
    """lift[reduced_letter, d] = full letter with digit d on `track`."""
    digits = letter_digits(signature)
    reduced_sig = tuple(s for i, s in enumerate(signature) if i != track)
    rs = strides(reduced_sig)
    others = [i for i in range(len(signature)) if i != track]
    reduced = np.zeros(digits.shape[0], dtype=np.int64)
    for i, stride in zip(others, rs):
        reduced += digits[:, i] * stride
    lift = np.zeros((alphabet_size(reduced_sig), signature[track].radix), dtype=np.int64)
    lift[reduced, digits[:, track]] = np.arange(digits.shape[0])
    return lift


def project(dfa: Dfa, track: int, state_cap: int = DEFAULT_STATE_CAP) -> Dfa:
    """Existential projection of one track, closed under leading padding."""
    if not 0 <= track < dfa.arity:
        raise AutomatonError(f"track {track} out of range for arity {dfa.arity}")
    lift = lift_table(dfa.signature, track)
    reduced_sig = tuple(s for i, s in enumerate(dfa.signature) if i != track)
    initial = np.zeros(dfa.num_states, dtype=bool)
    initial[0] = True
    nfa = Nfa(reduced_sig, dfa.table[:, lift], initial, dfa.accepting)
    result = determinize(nfa, pad_start=True, state_cap=state_cap)
    logger.debug(f"project track {track}: {dfa.num_states} -> {result.num_states} states")
    return result
