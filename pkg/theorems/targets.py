"""
The rarefied sums that get a verified synchronized automaton.

Each target names an oracle h(n) = sign * f_{b,j}(n) (or g_{b,j}), the track
bases (n, h(n)) are read in, the sequence automaton that drives the
induction step, and the live state count the verified automaton should have.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict

import numpy as np

from inference import Oracle, identity_oracle, rarefied_oracle, zero_oracle
from numeration.digits import NumerationSystem
from numeration.sequences import ParityKind


@dataclass(frozen=True)
class Target:
    name: str
    tag: str
    b: int
    j: int
    kind: ParityKind
    sign: int
    arg_base: int
    out_base: int
    sequence: str
    states: int

    @property
    def signature(self):
        return (NumerationSystem(self.arg_base), NumerationSystem(self.out_base))

    @property
    def arg_system(self) -> NumerationSystem:
        return NumerationSystem(self.arg_base)

    @property
    def out_system(self) -> NumerationSystem:
        return NumerationSystem(self.out_base)

    @property
    def oracle(self) -> Oracle:
        return rarefied_oracle(self.b, self.j, self.kind, self.sign)

    def table(self, count: int) -> np.ndarray:
        return self.oracle(count)

    @property
    def index_term(self) -> str:
        return f"{self.b}*n" if self.j == 0 else f"{self.b}*n+{self.j}"

    @property
    def up_value(self) -> int:
        """Sequence value at index b*n+j for which h(n+1) = h(n) + 1."""
        return 0 if self.sign > 0 else 1

    @property
    def description(self) -> str:
        fn = "f" if self.kind is ParityKind.ONES else "g"
        prefix = "-" if self.sign < 0 else ""
        return f"{prefix}{fn}_{{{self.b},{self.j}}}"


TARGETS: Dict[str, Target] = {
    t.name: t
    for t in (
        Target("f30", "30", 3, 0, ParityKind.ONES, 1, 4, 3, "TM4", 16),
        Target("mf31", "31", 3, 1, ParityKind.ONES, -1, 4, 3, "TM4", 15),
        Target("mf32", "32", 3, 2, ParityKind.ONES, -1, 4, 3, "TM4", 14),
        Target("f50", "50", 5, 0, ParityKind.ONES, 1, 16, 5, "TM16", 26),
        Target("f51", "51", 5, 1, ParityKind.ONES, 1, 16, -5, "TM16", 68),
        Target("g30", "g30", 3, 0, ParityKind.ZEROS, 1, 4, 3, "R4", 18),
    )
}


@dataclass(frozen=True)
class SelfTest:
    """A trivial function used to exercise the inference loop end to end."""

    name: str
    oracle: Oracle
    base: int
    states: int
    verifier: str

    @property
    def signature(self):
        return (NumerationSystem(self.base), NumerationSystem(self.base))


SELF_TESTS: Dict[str, SelfTest] = {
    "id": SelfTest(
        "id",
        identity_oracle,
        4,
        1,
        'eval id_total "An Ey $id(n,y)":\neval id_graph "An $id(n,n)":\neval id_unique "~En,y $id(n,y) & n!=y":\n',
    ),
    "zero": SelfTest(
        "zero",
        zero_oracle,
        4,
        1,
        'eval zero_value "An $zero(n,0)":\neval zero_unique "~En,y $zero(n,y) & y!=0":\n',
    ),
}


def get_target(name: str) -> Target:
    try:
        return TARGETS[name]
    except KeyError:
        raise KeyError(f"unknown target {name!r}; expected one of {', '.join(TARGETS)}") from None
