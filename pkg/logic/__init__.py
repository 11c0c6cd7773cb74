from logic.ast import Formula, Term, display
from logic.brute import evaluate, satisfying
from logic.compiler import CompileOptions, Compiler, compile_formula, eval_closed
from logic.environment import CompileError, Definition, Environment, LinearDefinition
from logic.parser import Command, CommandKind, ParseError, QueryScript, parse, parse_formula
from logic.script import CommandResult, ScriptReport, ScriptRunner, run_script, run_source

__all__ = [
    "Command",
    "CommandKind",
    "CommandResult",
    "CompileError",
    "CompileOptions",
    "Compiler",
    "Definition",
    "Environment",
    "Formula",
    "LinearDefinition",
    "ParseError",
    "QueryScript",
    "ScriptReport",
    "ScriptRunner",
    "Term",
    "compile_formula",
    "display",
    "eval_closed",
    "evaluate",
    "parse",
    "parse_formula",
    "run_script",
    "run_source",
    "satisfying",
]
