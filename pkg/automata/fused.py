"""
Existential projection of an intersection, built without the product.

exists_conjunction(parts, bound) accepts the tuples over the free tracks for
which some value of the bound tracks is accepted by every part. All parts share
one signature. The underlying nondeterministic automaton has tuples of part
states as its states (mixed-radix int64 codes); they are generated on demand
by the subset construction, and tuples from which some part can no longer
accept are dropped on sight.

With no free tracks the result is the zero-track automaton for the truth value,
found by a reachability search that stops at the first accepting tuple.

Usage:
  from automata.fused import exists_conjunction
  dfa = exists_conjunction([a, b, c], bound=[1])
"""
from __future__ import annotations

import logging
from typing import Dict, List, Sequence

import numpy as np

from automata.dfa import (
    DEFAULT_STATE_CAP,
    AutomatonError,
    Connective,
    Dfa,
    NumerationSystem,
    _check_cap,
    alphabet_size,
    letter_digits,
    minimize,
    product,
    strides,
    universal,
)

logger = logging.getLogger(__name__)

_CELLS = 2_000_000
_CODE_LIMIT = 2**62


def lift_tracks(signature: Sequence[NumerationSystem], bound: Sequence[int]) -> np.ndarray:
    """lift[reduced_letter, b] = full letter whose bound tracks carry digit combination b."""
    digits = letter_digits(signature)
    free = [i for i in range(len(signature)) if i not in bound]
    free_sig = tuple(signature[i] for i in free)
    bound_sig = tuple(signature[i] for i in bound)
    reduced = digits[:, free] @ np.array(strides(free_sig), dtype=np.int64)
    combo = digits[:, list(bound)] @ np.array(strides(bound_sig), dtype=np.int64)
    lift = np.zeros((alphabet_size(free_sig), alphabet_size(bound_sig)), dtype=np.int64)
    lift[reduced, combo] = np.arange(digits.shape[0])
    return lift


def coreachable(dfa: Dfa) -> np.ndarray:
    """States from which some accepting state can be reached."""
    live = dfa.accepting.copy()
    while True:
        grown = live | live[dfa.table].any(axis=1)
        if grown.sum() == live.sum():
            return live
        live = grown


def _fit_codes(parts: List[Dfa], state_cap: int) -> List[Dfa]:
    """Merge the two smallest parts until tuple codes fit in int64."""
    parts = sorted(parts, key=lambda p: p.num_states)
    while len(parts) > 1 and np.prod([float(p.num_states) for p in parts]) >= _CODE_LIMIT:
        merged = product(parts[0], parts[1], Connective.AND, state_cap)
        parts = sorted([merged] + parts[2:], key=lambda p: p.num_states)
    return parts


class _TupleSpace:
    def __init__(self, parts: Sequence[Dfa], lift: np.ndarray):
        self.tables = [p.table.astype(np.int64) for p in parts]
        self.sizes = [p.num_states for p in parts]
        self.weights = [int(np.prod(self.sizes[i + 1:], dtype=np.int64)) for i in range(len(parts))]
        self.live = [coreachable(p) for p in parts]
        self.accepting = [p.accepting for p in parts]
        self.lift = lift

    def _states(self, codes: np.ndarray) -> List[np.ndarray]:
        return [(codes // w) % n for w, n in zip(self.weights, self.sizes)]

    def is_live(self, codes: np.ndarray) -> np.ndarray:
        ok = np.ones(codes.size, dtype=bool)
        for live, states in zip(self.live, self._states(codes)):
            ok &= live[states]
        return ok

    def accepts(self, codes: np.ndarray) -> bool:
        ok = np.ones(codes.size, dtype=bool)
        for acc, states in zip(self.accepting, self._states(codes)):
            ok &= acc[states]
        return bool(ok.any())

    def step(self, codes: np.ndarray) -> np.ndarray:
        """Successor codes, shape (len(codes), reduced letters, fan); dead tuples are -1."""
        sigma = self.lift.size
        out = np.zeros((codes.size, sigma), dtype=np.int64)
        alive = np.ones((codes.size, sigma), dtype=bool)
        for table, live, w, states in zip(self.tables, self.live, self.weights, self._states(codes)):
            nxt = table[states]
            out += nxt * w
            alive &= live[nxt]
        out = np.where(alive, out, -1)
        return out[:, self.lift]

    def chunk(self) -> int:
        return max(1, _CELLS // self.lift.size)


def _dedupe_rows(flat: np.ndarray) -> np.ndarray:
    """Sort each row, replace repeats by -1 and drop columns that became all -1."""
    flat = np.sort(flat, axis=1)
    if flat.shape[1] > 1:
        dup = np.zeros(flat.shape, dtype=bool)
        dup[:, 1:] = flat[:, 1:] == flat[:, :-1]
        flat = np.sort(np.where(dup, -1, flat), axis=1)
    width = int((flat >= 0).sum(axis=1).max()) if flat.size else 0
    return flat[:, flat.shape[1] - width:]


def _successor_rows(space: _TupleSpace, members: np.ndarray):
    reduced = space.lift.shape[0]
    merged = np.zeros((reduced, 0), dtype=np.int64)
    step = space.chunk()
    for lo in range(0, members.size, step):
        succ = space.step(members[lo:lo + step])
        block = np.transpose(succ, (1, 0, 2)).reshape(reduced, -1)
        merged = _dedupe_rows(np.concatenate([merged, block], axis=1))
    if merged.shape[1] == 0:
        return np.zeros((1, 0), dtype=np.int64), np.zeros(reduced, dtype=np.int64)
    uniq, inverse = np.unique(merged, axis=0, return_inverse=True)
    return uniq, inverse.reshape(-1)


def _zero_closure(space: _TupleSpace, members: np.ndarray, state_cap: int, stop_on_accept: bool) -> np.ndarray:
    current = np.unique(members)
    frontier = current
    step = space.chunk()
    while frontier.size:
        if stop_on_accept and space.accepts(frontier):
            return current
        found = []
        for lo in range(0, frontier.size, step):
            nxt = space.step(frontier[lo:lo + step])[:, 0, :].reshape(-1)
            found.append(np.unique(nxt[nxt >= 0]))
        reached = np.unique(np.concatenate(found))
        frontier = np.setdiff1d(reached, current, assume_unique=True)
        current = np.union1d(current, frontier)
        _check_cap(int(current.size), state_cap, "fused closure")
    return current


def exists_conjunction(
    parts: Sequence[Dfa], bound: Sequence[int], state_cap: int = DEFAULT_STATE_CAP
) -> Dfa:
    """Minimal automaton for "some value of the bound tracks satisfies every part", over the free tracks."""
    if not parts:
        raise AutomatonError("exists_conjunction needs at least one automaton")
    signature = parts[0].signature
    for p in parts[1:]:
        if p.signature != signature:
            raise AutomatonError("all parts of a fused projection must share one signature")
    bound = sorted(set(bound))
    if any(not 0 <= t < len(signature) for t in bound):
        raise AutomatonError(f"bound tracks {bound} out of range for arity {len(signature)}")
    free_sig = tuple(s for i, s in enumerate(signature) if i not in bound)

    space = _TupleSpace(_fit_codes(list(parts), state_cap), lift_tracks(signature, bound))
    origin = np.array([0], dtype=np.int64)
    start = _zero_closure(space, origin[space.is_live(origin)], state_cap, stop_on_accept=not free_sig)
    if not free_sig:
        truth = bool(start.size) and space.accepts(start)
        logger.debug(f"fused emptiness over {len(parts)} parts: {start.size} tuples visited, result {truth}")
        return universal((), truth)

    subsets: List[np.ndarray] = [start]
    index: Dict[bytes, int] = {}
    rows: List[np.ndarray] = []
    i = 0
    while i < len(subsets):
        members = subsets[i]
        if members.size == 0:
            rows.append(np.full(alphabet_size(free_sig), i, dtype=np.int64))
            i += 1
            continue
        uniq, inverse = _successor_rows(space, members)
        ids = np.empty(uniq.shape[0], dtype=np.int64)
        for k in range(uniq.shape[0]):
            row = uniq[k]
            subset = row[row >= 0]
            key = subset.tobytes()
            j = index.get(key)
            if j is None:
                j = len(subsets)
                index[key] = j
                subsets.append(subset)
            ids[k] = j
        row_ids = ids[inverse]
        if i == 0:
            row_ids[0] = 0
        rows.append(row_ids)
        _check_cap(len(subsets), state_cap, "fused projection")
        i += 1
    accepting = np.array([bool(s.size) and space.accepts(s) for s in subsets])
    logger.debug(f"fused projection over {len(parts)} parts: {len(subsets)} subsets")
    return minimize(Dfa(free_sig, np.stack(rows), accepting))
