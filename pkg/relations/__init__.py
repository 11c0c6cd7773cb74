"""
Arithmetic relation automata used by formula compilation.

build_relation(spec) is the memoised entry point; every constructor returns
an immutable, minimal, padding-closed Dfa, so cached values are shared freely
between threads.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Tuple

from automata.dfa import Dfa
from numeration.digits import NumerationError, NumerationSystem
from relations.arithmetic import (
    add_relation,
    const_mult_relation,
    cross_equality,
    digit_copy_relation,
    lt_relation,
    multiplication_chain,
    neg_to_pos_max0,
    power_pairs_relation,
)
from relations.linear import Relop, comparison_relation, const_eq, eq_relation, sign_relation
from relations.sequences import r_dfao_base4, tm_dfao


class RelationKind(str, Enum):
    EQ = "eq"
    LT = "lt"
    ADD = "add"
    CONST_MULT = "const_mult"
    CONST_EQ = "const_eq"
    DIGIT_COPY = "digit_copy"
    POWER_PAIRS = "power_pairs"
    NEG_TO_POS_MAX0 = "neg_to_pos_max0"


@dataclass(frozen=True)
class RelationSpec:
    kind: RelationKind
    bases: Tuple[int, ...]
    constant: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", RelationKind(self.kind))
        object.__setattr__(self, "bases", tuple(self.bases))
        if self.constant < 0:
            raise NumerationError(f"relation constants are nonnegative, got {self.constant}")
        for b in self.bases:
            NumerationSystem(b)


_cache: Dict[RelationSpec, Dfa] = {}
_lock = threading.Lock()


def _construct(spec: RelationSpec) -> Dfa:
    kind, bases = spec.kind, spec.bases
    if kind in (RelationKind.DIGIT_COPY, RelationKind.POWER_PAIRS):
        a, b = bases
        return digit_copy_relation(a, b) if kind is RelationKind.DIGIT_COPY else power_pairs_relation(a, b)
    if kind is RelationKind.NEG_TO_POS_MAX0:
        return neg_to_pos_max0(abs(bases[0]))
    (base,) = bases
    system = NumerationSystem(base)
    if kind is RelationKind.EQ:
        return eq_relation(system)
    if kind is RelationKind.LT:
        return lt_relation(system)
    if kind is RelationKind.ADD:
        return add_relation(system)
    if kind is RelationKind.CONST_MULT:
        return const_mult_relation(spec.constant, system)
    return const_eq(spec.constant, system)


def build_relation(spec: RelationSpec) -> Dfa:
    with _lock:
        cached = _cache.get(spec)
    if cached is not None:
        return cached
    dfa = _construct(spec)
    with _lock:
        return _cache.setdefault(spec, dfa)


__all__ = [
    "RelationKind",
    "RelationSpec",
    "Relop",
    "add_relation",
    "build_relation",
    "comparison_relation",
    "const_eq",
    "const_mult_relation",
    "cross_equality",
    "digit_copy_relation",
    "eq_relation",
    "lt_relation",
    "multiplication_chain",
    "neg_to_pos_max0",
    "power_pairs_relation",
    "r_dfao_base4",
    "sign_relation",
    "tm_dfao",
]
