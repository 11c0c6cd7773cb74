"""
Run query scripts against an Environment.

Each command either extends the environment (def, reg, morphism, promote,
load) or reports on it (eval, save). A failing command is recorded in its
result and the script carries on with the environment unchanged.

Usage:
  from logic.script import ScriptRunner, run_script
  report = run_script(parse(text), env)
  for line in report.lines():
      print(line)
"""
from __future__ import annotations

import logging
import time
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from automata.dfa import live_states
from automata.dfao import dfao_from_morphism, parse_morphism
from automata.io import load_automaton, save_automaton, save_dfao
from automata.labeled import LabeledDfa
from automata.regex import compile_regex
from logic.compiler import CompileOptions, Compiler
from logic.environment import CompileError, Environment
from logic.parser import Command, CommandKind, QueryScript, parse
from logic.simplify import linear_definition

logger = logging.getLogger(__name__)


class CommandResult(BaseModel):
    kind: CommandKind
    name: str
    line: int = Field(..., ge=1)
    verdict: Optional[bool] = Field(None, description="eval commands only")
    states: Optional[int] = Field(None, description="live states of the stored automaton")
    variables: List[str] = Field(default_factory=list)
    linear: Optional[str] = Field(None, description="the equation a def reduced to, if any")
    error: Optional[str] = None
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.error is None

    def line_text(self) -> str:
        if self.error is not None:
            return f"{self.name}: ERROR {self.error}"
        if self.verdict is not None:
            return f"{self.name}: {'TRUE' if self.verdict else 'FALSE'}"
        if self.states is not None:
            tracks = f" ({','.join(self.variables)})" if self.variables else ""
            return f"{self.name}{tracks}: {self.states} states"
        return f"{self.name}: {self.kind.value} ok"


class ScriptReport(BaseModel):
    results: List[CommandResult] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def verdicts(self) -> Dict[str, bool]:
        return {r.name: r.verdict for r in self.results if r.verdict is not None}

    def result(self, name: str) -> CommandResult:
        for r in reversed(self.results):
            if r.name == name:
                return r
        raise KeyError(name)

    def lines(self) -> List[str]:
        return [r.line_text() for r in self.results]


class ScriptRunner:
    def __init__(
        self,
        env: Optional[Environment] = None,
        options: Optional[CompileOptions] = None,
        base_dir: Path = Path("."),
    ):
        self.env = env or Environment()
        self.options = options or CompileOptions()
        self.base_dir = Path(base_dir)
        self.defined: Dict[str, LabeledDfa] = {}

    def _path(self, text: str) -> Path:
        path = Path(text)
        return path if path.is_absolute() else self.base_dir / path

    def _def(self, command: Command, result: CommandResult) -> None:
        compiler = Compiler(self.env, self.options)
        prepared = compiler.prepare(command.formula)
        labeled = compiler.compile_prepared(prepared)
        linear = linear_definition(prepared.formula, prepared.free)
        self.env = self.env.with_automaton(command.name, labeled.dfa, linear)
        self.defined[command.name] = labeled
        result.states = live_states(labeled.dfa)
        result.variables = list(labeled.variables)
        if linear is not None:
            result.linear = str(linear.comparison)

    def _execute(self, command: Command, result: CommandResult) -> None:
        kind = command.kind
        if kind is CommandKind.EVAL:
            result.verdict = Compiler(self.env, self.options).evaluate(command.formula)
        elif kind is CommandKind.DEF:
            self._def(command, result)
        elif kind is CommandKind.REG:
            dfa = compile_regex(command.text, command.systems, self.options.state_cap)
            self.env = self.env.with_automaton(command.name, dfa)
            result.states = live_states(dfa)
        elif kind is CommandKind.MORPHISM:
            parse_morphism(command.text)
            self.env = self.env.with_morphism(command.name, command.text)
        elif kind is CommandKind.PROMOTE:
            dfao = dfao_from_morphism(self.env.morphism(command.target))
            self.env = self.env.with_dfao(command.name, dfao)
            result.states = dfao.num_states
        elif kind is CommandKind.LOAD:
            dfa = load_automaton(self._path(command.text))
            self.env = self.env.with_automaton(command.name, dfa)
            result.states = live_states(dfa)
        elif kind is CommandKind.SAVE:
            if self.env.has_dfao(command.name):
                save_dfao(self.env.dfao(command.name), self._path(command.text))
            else:
                save_automaton(self.env.automaton(command.name), self._path(command.text))
        else:
            raise CompileError(f"unsupported command {kind.value}")

    def execute(self, command: Command) -> CommandResult:
        result = CommandResult(kind=command.kind, name=command.name, line=command.line)
        started = time.perf_counter()
        try:
            self._execute(command, result)
        except (ValueError, RuntimeError, OSError) as e:
            result.error = str(e)
            logger.error(f"✗ {command.kind.value} {command.name} (line {command.line}): {e}")
        result.seconds = round(time.perf_counter() - started, 3)
        if result.ok:
            mark = "✗" if result.verdict is False else "✓"
            logger.info(f"{mark} {result.line_text()} [{result.seconds:.2f}s]")
        return result

    def run(self, script: QueryScript) -> ScriptReport:
        return ScriptReport(results=[self.execute(c) for c in script.commands])


def run_script(
    script: QueryScript, env: Optional[Environment] = None, options: Optional[CompileOptions] = None
) -> ScriptReport:
    return ScriptRunner(env, options).run(script)


def run_source(text: str, env: Optional[Environment] = None, options: Optional[CompileOptions] = None) -> ScriptReport:
    return run_script(parse(text), env, options)
