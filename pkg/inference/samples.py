"""
Oracle samples for automaton inference.

An oracle is vectorised: oracle(count) returns h(0), ..., h(count-1). A
SampleSet keeps the whole table for n = 0..n_max (the learner reads it
directly) plus rejected pairs (n, y') near and far from h(n), used to check a
hypothesis before spending time on verification.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from automata.dfa import Dfa, TrackSignature, accepts_many
from numeration.digits import NumerationSystem
from numeration.sequences import ParityKind, rarefied_table

logger = logging.getLogger(__name__)

Oracle = Callable[[int], np.ndarray]

NEAR_OFFSETS = (-2, -1, 1, 2, 17)
RANDOM_NEGATIVES = 3


class InferenceError(RuntimeError):
    """Oracle values unusable for the requested tracks, or a hypothesis that cannot be built."""


class SampleTooSmall(InferenceError):
    """The sample does not reach far enough to classify a prefix."""


# -----------------------------
# Oracles
# -----------------------------

def rarefied_oracle(b: int, j: int, kind: ParityKind | str = ParityKind.ONES, sign: int = 1) -> Oracle:
    """sign * f_{b,j} (kind t) or sign * g_{b,j} (kind r) as a table oracle."""

    def oracle(count: int) -> np.ndarray:
        return sign * rarefied_table(b, j, count, kind)

    return oracle


def identity_oracle(count: int) -> np.ndarray:
    return np.arange(count, dtype=np.int64)


def zero_oracle(count: int) -> np.ndarray:
    return np.zeros(count, dtype=np.int64)


# -----------------------------
# Samples
# -----------------------------

@dataclass(frozen=True, eq=False)
class SampleSet:
    signature: TrackSignature
    values: np.ndarray
    negatives: np.ndarray

    @property
    def n_max(self) -> int:
        return int(self.values.size) - 1

    @property
    def output_system(self) -> NumerationSystem:
        return self.signature[1]

    def positives(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.arange(self.values.size, dtype=np.int64), self.values


def _representable(values: np.ndarray, system: NumerationSystem) -> np.ndarray:
    return np.ones(values.shape, dtype=bool) if system.is_negative else values >= 0


def build_samples(
    oracle: Oracle,
    signature: TrackSignature,
    n_max: int,
    seed: int = 20240607,
    near_offsets: Tuple[int, ...] = NEAR_OFFSETS,
    random_negatives: int = RANDOM_NEGATIVES,
) -> SampleSet:
    signature = tuple(signature)
    if len(signature) != 2:
        raise InferenceError(f"function automata have two tracks, got {len(signature)}")
    if n_max < 0:
        raise InferenceError(f"n_max must be nonnegative, got {n_max}")
    arg, out = signature
    if arg.is_negative:
        raise InferenceError("the argument track must use a positive base")

    values = np.asarray(oracle(n_max + 1), dtype=np.int64)
    bad = np.flatnonzero(~_representable(values, out))
    if bad.size:
        n = int(bad[0])
        raise InferenceError(f"h({n}) = {int(values[n])} is not representable in base {out.base}")

    ns = np.arange(n_max + 1, dtype=np.int64)
    spread = 3 * max(int(np.abs(values).max()), 1)
    rng = np.random.default_rng(seed)
    candidates = [values[:, None] + np.asarray(near_offsets, dtype=np.int64)[None, :], np.zeros((ns.size, 1), np.int64)]
    if random_negatives:
        candidates.append(rng.integers(-spread, spread + 1, size=(ns.size, random_negatives)))
    ys = np.concatenate(candidates, axis=1)
    keep = (ys != values[:, None]) & _representable(ys, out)
    # row-major, like np.nonzero, without the two index arrays
    negatives = np.stack([np.broadcast_to(ns[:, None], ys.shape)[keep], ys[keep]], axis=1)
    logger.debug(f"samples: n <= {n_max}, {negatives.shape[0]} negative pairs")
    return SampleSet(signature, values, negatives)


def inconsistencies(dfa: Dfa, samples: SampleSet, pads: Tuple[int, ...] = (0, 1)) -> int:
    """Number of sample words the automaton gets wrong, counted over each padding in `pads`."""
    ns, ys = samples.positives()
    wrong = 0
    for pad in pads:
        wrong += int((~accepts_many(dfa, [ns, ys], pad=pad)).sum())
        if samples.negatives.size:
            wrong += int(accepts_many(dfa, [samples.negatives[:, 0], samples.negatives[:, 1]], pad=pad).sum())
    return wrong
