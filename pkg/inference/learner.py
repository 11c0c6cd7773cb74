"""
Guess a synchronized automaton for n -> h(n) from a sample table.

A prefix of a word over (n, y) is a pair of integers (a, b): the values of
the digits read so far. Its residual at suffix length m is fixed by the
vector over c in [0, base_n^m) of h(a*base_n^m + c) - b*base_y^m, with values
that no m-digit y-word can reach replaced by a marker. Prefixes whose
residual vectors agree for every m up to the suffix depth are merged. Since
the vectors depend on values only, a leading (0, 0) letter never changes the
state and the hypothesis is padding closed.

Prefixes are explored in increasing order of a, so every class is
represented by the prefix with the smallest argument value reaching it, the
one the sample covers deepest. Prefixes too long for the full depth are
matched on the depths the sample does cover; when even that fails the learner
retries with a shallower suffix depth, and raises SampleTooSmall once no depth
works so that the caller grows the sample.

Usage:
  from inference.learner import guess_dfa
  hypothesis = guess_dfa(build_samples(rarefied_oracle(3, 0), (B4, B3), 16384))
"""
from __future__ import annotations

import heapq
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from automata.dfa import Dfa, letter_digits, live_states, minimize
from inference.samples import InferenceError, SampleSet, SampleTooSmall

logger = logging.getLogger(__name__)

_MISSING = np.iinfo(np.int64).min


@dataclass
class LearnerConfig:
    # None: start at default_depth and fall back to shallower depths
    suffix_depth: Optional[int] = None
    max_states: int = 2000
    seed: int = 20240607


@dataclass(frozen=True, eq=False)
class Hypothesis:
    dfa: Dfa
    sample_size: int
    classes: int
    suffix_depth: int

    @property
    def states(self) -> int:
        return live_states(self.dfa)


class _Residuals:
    def __init__(self, samples: SampleSet, depth: int):
        self.values = samples.values
        self.n_max = samples.n_max
        self.radix = samples.signature[0].radix
        self.out = samples.output_system
        self.depth = depth
        self.ranges = [self.out.length_range(m) for m in range(depth + 1)]
        self.offsets = np.cumsum([0] + [8 * self.radix**m for m in range(depth + 1)])

    def reach(self, a: int) -> int:
        """Largest m <= depth with every n of the form a*radix^m + c in the sample, or -1."""
        m, span = -1, 1
        while m < self.depth and (a + 1) * span - 1 <= self.n_max:
            m += 1
            span *= self.radix
        return m

    def vector(self, a: int, b: int, m: int) -> bytes:
        parts = []
        for k in range(m + 1):
            span = self.radix**k
            targets = self.values[a * span:(a + 1) * span] - b * self.out.base**k
            lo, hi = self.ranges[k]
            parts.append(np.where((targets >= lo) & (targets <= hi), targets, _MISSING))
        return np.concatenate(parts).astype(np.int64).tobytes()

    def key(self, vector: bytes, m: int) -> bytes:
        return vector[:self.offsets[m + 1]]


def default_depth(samples: SampleSet) -> int:
    """About half the digits of n_max, so prefixes and suffixes share the sample evenly."""
    digits = math.log(samples.n_max + 1, samples.signature[0].radix)
    return max(1, int(digits // 2))


def _guess_at_depth(samples: SampleSet, depth: int, config: LearnerConfig) -> Hypothesis:
    res = _Residuals(samples, depth)
    if res.reach(0) < depth:
        raise SampleTooSmall(f"{samples.n_max + 1} samples do not cover suffix depth {depth}")

    keys: List[Dict[bytes, int]] = [{} for _ in range(depth + 1)]
    prefixes: List[Tuple[int, int]] = []
    accepting: List[bool] = []
    rows: List[np.ndarray] = []
    digits = letter_digits(samples.signature)
    radix, base_out = res.radix, res.out.base
    # (argument value, push order, source state, letter, output value)
    frontier: List[Tuple[int, int, int, int, int]] = []
    pushed = 0

    def new_state(a: int, b: int, vector: bytes) -> int:
        nonlocal pushed
        s = len(prefixes)
        if s >= config.max_states:
            raise InferenceError(f"more than {config.max_states} residual classes; the sample does not converge")
        prefixes.append((a, b))
        accepting.append(int(samples.values[a]) == b)
        rows.append(np.full(digits.shape[0], -1, dtype=np.int32))
        for m in range(depth + 1):
            keys[m].setdefault(res.key(vector, m), s)
        for letter, (x, y) in enumerate(digits):
            heapq.heappush(frontier, (a * radix + int(x), pushed, s, letter, b * base_out + int(y)))
            pushed += 1
        return s

    new_state(0, 0, res.vector(0, 0, depth))
    while frontier:
        ca, _, s, letter, cb = heapq.heappop(frontier)
        m = res.reach(ca)
        if m < 0:
            raise SampleTooSmall(f"prefix value {ca} is beyond the sample (n <= {samples.n_max})")
        vector = res.vector(ca, cb, m)
        found = keys[m].get(res.key(vector, m))
        if found is None:
            if m < depth:
                raise SampleTooSmall(f"prefix value {ca} matches no class on the {m} suffix digits sampled")
            found = new_state(ca, cb, vector)
        rows[s][letter] = found

    dfa = minimize(Dfa(samples.signature, np.stack(rows), np.array(accepting, dtype=bool)))
    logger.info(
        f"guessed {live_states(dfa)} states from {len(prefixes)} classes (n <= {samples.n_max}, suffix depth {depth})"
    )
    return Hypothesis(dfa, samples.n_max, len(prefixes), depth)


def guess_dfa(samples: SampleSet, config: Optional[LearnerConfig] = None) -> Hypothesis:
    config = config or LearnerConfig()
    if samples.signature[0].is_negative:
        raise InferenceError("the argument track must use a positive base")
    if config.suffix_depth:
        return _guess_at_depth(samples, config.suffix_depth, config)

    failure: Optional[SampleTooSmall] = None
    for depth in range(default_depth(samples), 0, -1):
        try:
            return _guess_at_depth(samples, depth, config)
        except SampleTooSmall as e:
            logger.debug(f"suffix depth {depth}: {e}")
            failure = e
    raise failure
