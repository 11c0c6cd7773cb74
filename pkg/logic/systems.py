"""
Numeration-system inference for formula variables.

Every variable gets exactly one system. Evidence comes from the tracks of
called automata, the base of indexed sequence automata, and annotations: an
atom inside "?msd_k ..." puts all its variables in that system, and an
annotated argument or term does the same for its own variables. Comparisons
with no evidence at all fall back to base 10. Two different systems for one
variable is an error.

resolve_systems returns the formula with annotations removed and the system
written onto every atom and term.
"""
from __future__ import annotations

import logging
from dataclasses import replace
from typing import Dict, Optional, Tuple

from logic.ast import (
    Annotated,
    Call,
    Comparison,
    Formula,
    SeqIndex,
    Term,
    atom_terms,
)
from logic.environment import CompileError, Environment
from numeration.digits import NumerationSystem

logger = logging.getLogger(__name__)

DEFAULT_SYSTEM = NumerationSystem(10)


def _shown(variable: str) -> str:
    return variable.split("#")[0]


class _Evidence:
    def __init__(self) -> None:
        self.systems: Dict[str, NumerationSystem] = {}
        self.sources: Dict[str, str] = {}

    def add(self, variable: str, system: NumerationSystem, source: str) -> None:
        known = self.systems.get(variable)
        if known is not None and known != system:
            raise CompileError(
                f"variable {_shown(variable)} used with two numeration systems: "
                f"{known.label} ({self.sources[variable]}) and {system.label} ({source})"
            )
        self.systems[variable] = system
        self.sources.setdefault(variable, source)


def _call_signature(call: Call, env: Environment):
    signature = env.automaton(call.name).signature
    if len(signature) != len(call.args):
        raise CompileError(f"${call.name} takes {len(signature)} arguments, got {len(call.args)}")
    return signature


def _collect(f: Formula, env: Environment, annotation: Optional[NumerationSystem], ev: _Evidence) -> None:
    if isinstance(f, Comparison):
        for t in atom_terms(f):
            system = t.system or annotation
            if system is not None:
                for v in t.variables:
                    ev.add(v, system, f"annotation on {f}")
        return
    if isinstance(f, Call):
        for i, (arg, track) in enumerate(zip(f.args, _call_signature(f, env))):
            if arg.system is not None and arg.system != track:
                raise CompileError(
                    f"argument {i + 1} of ${f.name} is annotated {arg.system.label} but the track is {track.label}"
                )
            for v in arg.variables:
                ev.add(v, track, f"argument {i + 1} of ${f.name}")
        return
    if isinstance(f, SeqIndex):
        system = env.dfao(f.name).system
        if f.index.system is not None and f.index.system != system:
            raise CompileError(f"index of {f.name} is annotated {f.index.system.label} but {f.name} reads {system.label}")
        for v in f.index.variables:
            ev.add(v, system, f"index of {f.name}")
        return
    if isinstance(f, Annotated):
        _collect(f.body, env, f.system, ev)
        return
    for child in _children(f):
        _collect(child, env, annotation, ev)


def _children(f: Formula):
    if hasattr(f, "left"):
        return (f.left, f.right)
    return (f.body,)


def _comparison_system(
    f: Comparison, annotation: Optional[NumerationSystem], systems: Dict[str, NumerationSystem]
) -> NumerationSystem:
    explicit = f.left.system or f.right.system or annotation
    variables = f.left.variables | f.right.variables
    known = {systems[v] for v in variables if v in systems}
    if explicit is not None:
        system = explicit
    elif len(known) == 1:
        system = next(iter(known))
    elif not known:
        system = DEFAULT_SYSTEM
    else:
        raise CompileError(f"comparison {f} mixes numeration systems {sorted(s.label for s in known)}")
    for v in variables:
        if systems.setdefault(v, system) != system:
            raise CompileError(
                f"comparison {f} is read in {system.label} but {_shown(v)} is in {systems[v].label}"
            )
    return system


def _resolve(
    f: Formula, env: Environment, annotation: Optional[NumerationSystem], systems: Dict[str, NumerationSystem]
) -> Formula:
    if isinstance(f, Comparison):
        system = _comparison_system(f, annotation, systems)
        return Comparison(f.left.with_system(system), f.relop, f.right.with_system(system), system)
    if isinstance(f, Call):
        signature = _call_signature(f, env)
        return replace(f, args=tuple(a.with_system(s) for a, s in zip(f.args, signature)))
    if isinstance(f, SeqIndex):
        return replace(f, index=f.index.with_system(env.dfao(f.name).system))
    if isinstance(f, Annotated):
        return _resolve(f.body, env, f.system, systems)
    if hasattr(f, "left"):
        return replace(f, left=_resolve(f.left, env, annotation, systems), right=_resolve(f.right, env, annotation, systems))
    return replace(f, body=_resolve(f.body, env, annotation, systems))


def resolve_systems(f: Formula, env: Environment) -> Tuple[Formula, Dict[str, NumerationSystem]]:
    ev = _Evidence()
    _collect(f, env, None, ev)
    systems = dict(ev.systems)
    resolved = _resolve(f, env, None, systems)
    logger.debug(f"variable systems: { {_shown(v) if '#' not in v else v: s.label for v, s in systems.items()} }")
    return resolved, systems


def term_system(t: Term) -> NumerationSystem:
    if t.system is None:
        raise CompileError(f"term {t} has no numeration system")
    return t.system
