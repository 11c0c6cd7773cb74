"""
Named automata, sequence automata and morphisms visible to formulas.

An Environment is immutable: with_* methods return a new one. Automata that
are not defined in the environment may be supplied lazily by a resolver (the
automaton store uses this to load or infer f30, f51, ...); resolved automata
are memoised per environment.
"""
from __future__ import annotations

import logging
import threading
from dataclasses import dataclass
from typing import Callable, Dict, Mapping, Optional, Tuple

from automata.dfa import Dfa
from automata.dfao import Dfao
from logic.ast import Comparison

logger = logging.getLogger(__name__)

Resolver = Callable[[str], Optional[Dfa]]


class CompileError(ValueError):
    """Unbound name, arity mismatch, mixed numeration systems, or free variables in eval."""


@dataclass(frozen=True)
class LinearDefinition:
    """A def whose body reduced to one linear equation over its parameters."""

    params: Tuple[str, ...]
    comparison: Comparison


@dataclass(frozen=True)
class Definition:
    dfa: Dfa
    linear: Optional[LinearDefinition] = None


class Environment:
    def __init__(
        self,
        automata: Optional[Mapping[str, Definition]] = None,
        dfaos: Optional[Mapping[str, Dfao]] = None,
        morphisms: Optional[Mapping[str, str]] = None,
        resolver: Optional[Resolver] = None,
    ):
        self._automata: Dict[str, Definition] = dict(automata or {})
        self._dfaos: Dict[str, Dfao] = dict(dfaos or {})
        self._morphisms: Dict[str, str] = dict(morphisms or {})
        self._resolver = resolver
        self._resolved: Dict[str, Definition] = {}
        self._lock = threading.Lock()

    def _copy(self, **changes) -> "Environment":
        fields = dict(automata=self._automata, dfaos=self._dfaos, morphisms=self._morphisms, resolver=self._resolver)
        fields.update(changes)
        return Environment(**fields)

    def _check_new(self, name: str) -> None:
        if name in self._automata or name in self._dfaos or name in self._morphisms:
            raise CompileError(f"name {name!r} is already defined")

    def with_automaton(self, name: str, dfa: Dfa, linear: Optional[LinearDefinition] = None) -> "Environment":
        self._check_new(name)
        return self._copy(automata={**self._automata, name: Definition(dfa, linear)})

    def with_dfao(self, name: str, dfao: Dfao) -> "Environment":
        self._check_new(name)
        return self._copy(dfaos={**self._dfaos, name: dfao})

    def with_morphism(self, name: str, rules: str) -> "Environment":
        self._check_new(name)
        return self._copy(morphisms={**self._morphisms, name: rules})

    def definition(self, name: str) -> Definition:
        found = self._automata.get(name)
        if found is not None:
            return found
        with self._lock:
            found = self._resolved.get(name)
        if found is not None:
            return found
        dfa = self._resolver(name) if self._resolver is not None else None
        if dfa is None:
            raise CompileError(f"unbound automaton ${name}")
        logger.debug(f"resolved ${name} from the store: {dfa!r}")
        with self._lock:
            return self._resolved.setdefault(name, Definition(dfa))

    def automaton(self, name: str) -> Dfa:
        return self.definition(name).dfa

    def dfao(self, name: str) -> Dfao:
        try:
            return self._dfaos[name]
        except KeyError:
            raise CompileError(f"unbound sequence automaton {name}") from None

    def has_dfao(self, name: str) -> bool:
        return name in self._dfaos

    def morphism(self, name: str) -> str:
        try:
            return self._morphisms[name]
        except KeyError:
            raise CompileError(f"unbound morphism {name}") from None

    def names(self) -> Tuple[str, ...]:
        return tuple(sorted({*self._automata, *self._dfaos, *self._morphisms}))
