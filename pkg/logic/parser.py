"""
Parser for query scripts and formulas.

Script commands end with ':' and may span lines; '#' starts a comment.

  def NAME "formula":            open formula, saved as an automaton
  eval NAME "formula":           closed formula, TRUE/FALSE
  reg NAME msd_3 msd_4 "regex":  automaton from a tuple-digit regular expression
  morphism NAME "0->01 1->10":   uniform morphism
  promote NAME morphism:         sequence automaton from a morphism
  load NAME "path":              automaton from a text file
  save NAME "path":              write an automaton to a text file

Formula precedence, lowest first: '<=>', '=>' (right associative), '|', '&',
then the unary forms '~', quantifiers and annotations. A quantifier
("An,x ..." / "Ex ...") scopes over everything to its right up to the
enclosing parenthesis. An annotation ("?msd_4", "?msd_neg_5") at the start of
a formula is the default for all of it; anywhere else it covers the unary
formula or argument term that follows. Unary minus on a term is written '_x'.

Usage:
  from logic.parser import parse, parse_formula
  script = parse(text)
  f = parse_formula("An Ey $f30(n,y)")
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

from logic.ast import (
    And,
    Annotated,
    Call,
    Comparison,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    SeqIndex,
    Term,
)
from numeration.digits import NumerationError, NumerationSystem
from relations.linear import Relop

logger = logging.getLogger(__name__)

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_VAR_RE = re.compile(r"[a-z][A-Za-z0-9_]*")
_INT_RE = re.compile(r"\d+")
_ANNOT_RE = re.compile(r"\?msd_(neg_)?(\d+)")
_SYSTEM_RE = re.compile(r"\??msd_(neg_)?(\d+)$")
_RELOPS = ("!=", "<=", ">=", "=", "<", ">")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class CommandKind(str, Enum):
    DEF = "def"
    EVAL = "eval"
    REG = "reg"
    MORPHISM = "morphism"
    PROMOTE = "promote"
    LOAD = "load"
    SAVE = "save"


@dataclass(frozen=True)
class Command:
    kind: CommandKind
    name: str
    systems: Tuple[NumerationSystem, ...] = ()
    text: str = ""
    target: str = ""
    formula: Optional[Formula] = None
    line: int = 1
    column: int = 1


@dataclass(frozen=True)
class QueryScript:
    commands: Tuple[Command, ...] = ()

    def __len__(self) -> int:
        return len(self.commands)


def system_from_token(token: str) -> NumerationSystem:
    m = _SYSTEM_RE.match(token)
    if not m:
        raise NumerationError(f"not a numeration system: {token!r}")
    base = int(m.group(2))
    return NumerationSystem(-base if m.group(1) else base)


# -----------------------------
# Formulas
# -----------------------------

class _FormulaParser:
    def __init__(self, text: str, line: int = 1, column: int = 1):
        self.text = text
        self.pos = 0
        self.line0 = line
        self.column0 = column

    # positions -------------------------------------------------------

    def _location(self, pos: int) -> Tuple[int, int]:
        before = self.text[:pos]
        newlines = before.count("\n")
        if newlines == 0:
            return self.line0, self.column0 + pos
        return self.line0 + newlines, pos - before.rfind("\n")

    def error(self, message: str, pos: Optional[int] = None) -> ParseError:
        line, column = self._location(self.pos if pos is None else pos)
        return ParseError(message, line, column)

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self, s: str) -> bool:
        self._skip()
        return self.text.startswith(s, self.pos)

    def _accept(self, s: str) -> bool:
        if self._peek(s):
            self.pos += len(s)
            return True
        return False

    def _expect(self, s: str) -> None:
        if not self._accept(s):
            found = self.text[self.pos:self.pos + 8] or "end of formula"
            raise self.error(f"expected {s!r}, found {found!r}")

    def _match(self, pattern: re.Pattern) -> Optional[re.Match]:
        self._skip()
        m = pattern.match(self.text, self.pos)
        if m:
            self.pos = m.end()
        return m

    def _at_end(self) -> bool:
        self._skip()
        return self.pos >= len(self.text)

    # grammar ---------------------------------------------------------

    def parse(self) -> Formula:
        # a leading annotation is the default for the whole formula
        system = self._annotation() if self._peek("?") else None
        f = self.formula()
        if system is not None:
            f = Annotated(system, f)
        if not self._at_end():
            raise self.error(f"unexpected {self.text[self.pos]!r}")
        return f

    def formula(self) -> Formula:
        left = self.implication()
        while self._accept("<=>"):
            left = Iff(left, self.implication())
        return left

    def implication(self) -> Formula:
        left = self.disjunction()
        if self._accept("=>"):
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self._accept("|"):
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        while self._accept("&"):
            left = And(left, self.unary())
        return left

    def _annotation(self) -> Optional[NumerationSystem]:
        start = self.pos
        m = self._match(_ANNOT_RE)
        if not m:
            return None
        try:
            base = int(m.group(2))
            return NumerationSystem(-base if m.group(1) else base)
        except NumerationError as e:
            raise self.error(str(e), start) from e

    def _quantifier_ahead(self) -> bool:
        self._skip()
        if self.pos >= len(self.text) or self.text[self.pos] not in "AE":
            return False
        nxt = self.text[self.pos + 1:self.pos + 2]
        return nxt == "" or nxt.isspace() or nxt.islower()

    def unary(self) -> Formula:
        if self._accept("~"):
            return Not(self.unary())
        if self._peek("?"):
            system = self._annotation()
            if system is None:
                raise self.error("malformed annotation, expected ?msd_k or ?msd_neg_k")
            return Annotated(system, self.unary())
        if self._quantifier_ahead():
            kind = self.text[self.pos]
            self.pos += 1
            variables = self.variable_list()
            body = self.formula()
            return Exists(variables, body) if kind == "E" else Forall(variables, body)
        if self._peek("("):
            save = self.pos
            self._expect("(")
            try:
                inner = self.formula()
                if self._accept(")"):
                    return inner
            except ParseError:
                pass
            self.pos = save
        return self.atom()

    def variable_list(self) -> Tuple[str, ...]:
        names = []
        while True:
            m = self._match(_VAR_RE)
            if not m:
                raise self.error("expected a variable name")
            names.append(m.group(0))
            if not self._accept(","):
                return tuple(names)

    def atom(self) -> Formula:
        start = self.pos
        if self._accept("$"):
            m = self._match(_NAME_RE)
            if not m:
                raise self.error("expected an automaton name after '$'")
            self._expect("(")
            args = [self.annotated_term()]
            while self._accept(","):
                args.append(self.annotated_term())
            self._expect(")")
            return Call(m.group(0), tuple(args))
        self._skip()
        m = _NAME_RE.match(self.text, self.pos)
        if m and self.text.startswith("[", m.end()):
            self.pos = m.end() + 1
            index = self.annotated_term()
            self._expect("]")
            relop = self.relop()
            if relop not in (Relop.EQ, Relop.NE):
                raise self.error("sequence values compare with = or != only", start)
            self._expect("@")
            sign = -1 if self._accept("-") else 1
            value = self._match(_INT_RE)
            if not value:
                raise self.error("expected an output value after '@'")
            return SeqIndex(m.group(0), index, relop, sign * int(value.group(0)))
        left = self.term()
        relop = self.relop()
        right = self.term()
        return Comparison(left, relop, right)

    def relop(self) -> Relop:
        self._skip()
        for op in _RELOPS:
            if self.text.startswith(op, self.pos):
                if op == "<=" and self.text.startswith("<=>", self.pos):
                    break
                if op == "=" and self.text.startswith("=>", self.pos):
                    break
                self.pos += len(op)
                return Relop(op)
        raise self.error("expected a comparison operator")

    # terms -----------------------------------------------------------

    def annotated_term(self) -> Term:
        system = self._annotation() if self._peek("?") else None
        t = self.term()
        return t.with_system(system) if system is not None else t

    def term(self) -> Term:
        if self._accept("-"):
            t = self.factor().scaled(-1)
        else:
            t = self.factor()
        while True:
            if self._accept("+"):
                t = t.plus(self.factor())
            elif self._peek("-") and not self._peek("->"):
                self.pos += 1
                t = t.minus(self.factor())
            else:
                return t

    def factor(self) -> Term:
        if self._accept("_"):
            return self.factor().scaled(-1)
        if self._accept("("):
            t = self.annotated_term()
            self._expect(")")
            return t
        m = self._match(_INT_RE)
        if m:
            value = int(m.group(0))
            if self._accept("*"):
                return self.factor().scaled(value)
            return Term.const(value)
        m = self._match(_VAR_RE)
        if m:
            t = Term.variable(m.group(0))
            if self._accept("*"):
                k = self._match(_INT_RE)
                if not k:
                    raise self.error("only multiplication by integer constants is supported")
                t = t.scaled(int(k.group(0)))
            return t
        found = self.text[self.pos:self.pos + 8] or "end of formula"
        raise self.error(f"expected a term, found {found!r}")


def parse_formula(text: str, line: int = 1, column: int = 1) -> Formula:
    return _FormulaParser(text, line, column).parse()


# -----------------------------
# Scripts
# -----------------------------

class _ScriptScanner:
    def __init__(self, source: str):
        self.source = source
        self.pos = 0

    def location(self, pos: Optional[int] = None) -> Tuple[int, int]:
        pos = self.pos if pos is None else pos
        before = self.source[:pos]
        return before.count("\n") + 1, pos - before.rfind("\n")

    def error(self, message: str, pos: Optional[int] = None) -> ParseError:
        return ParseError(message, *self.location(pos))

    def skip(self) -> None:
        while self.pos < len(self.source):
            ch = self.source[self.pos]
            if ch.isspace():
                self.pos += 1
            elif ch == "#":
                end = self.source.find("\n", self.pos)
                self.pos = len(self.source) if end < 0 else end
            else:
                return

    def word(self) -> Tuple[str, int]:
        self.skip()
        start = self.pos
        while self.pos < len(self.source) and not self.source[self.pos].isspace() and self.source[self.pos] not in ':"':
            self.pos += 1
        return self.source[start:self.pos], start

    def quoted(self) -> Tuple[str, int]:
        self.skip()
        if not self.source.startswith('"', self.pos):
            raise self.error("expected a double-quoted string")
        end = self.source.find('"', self.pos + 1)
        if end < 0:
            raise self.error("unterminated string")
        start = self.pos + 1
        self.pos = end + 1
        return self.source[start:end], start

    def end_command(self) -> None:
        self.skip()
        if not self.source.startswith(":", self.pos):
            raise self.error("expected ':' at the end of the command")
        self.pos += 1


def _looks_like_morphism(text: str) -> bool:
    return "->" in text and not any(c in text.replace("->", "") for c in "$&|=<>")


def parse(source: str) -> QueryScript:
    """Parse a whole script; errors carry the line and column in `source`."""
    scanner = _ScriptScanner(source)
    commands: List[Command] = []
    while True:
        scanner.skip()
        if scanner.pos >= len(source):
            break
        keyword, at = scanner.word()
        line, column = scanner.location(at)
        try:
            kind = CommandKind(keyword)
        except ValueError:
            raise scanner.error(f"unknown command {keyword!r}", at) from None
        name, name_at = scanner.word()
        if not _NAME_RE.fullmatch(name or ""):
            raise scanner.error(f"expected a name after {keyword}", name_at)

        if kind in (CommandKind.DEF, CommandKind.EVAL):
            text, text_at = scanner.quoted()
            if kind is CommandKind.DEF and _looks_like_morphism(text):
                logger.warning(f"def {name} holds a morphism; treating it as 'morphism {name}'")
                command = Command(CommandKind.MORPHISM, name, text=text, line=line, column=column)
            else:
                f_line, f_col = scanner.location(text_at)
                formula = parse_formula(text, f_line, f_col)
                command = Command(kind, name, text=text, formula=formula, line=line, column=column)
        elif kind is CommandKind.REG:
            systems = []
            while True:
                scanner.skip()
                if source.startswith('"', scanner.pos):
                    break
                token, token_at = scanner.word()
                if not token:
                    raise scanner.error("expected numeration systems and a quoted expression", token_at)
                try:
                    systems.append(system_from_token(token))
                except NumerationError as e:
                    raise scanner.error(str(e), token_at) from e
            if not systems:
                raise scanner.error("reg needs at least one numeration system")
            text, _ = scanner.quoted()
            command = Command(kind, name, systems=tuple(systems), text=text, line=line, column=column)
        elif kind is CommandKind.PROMOTE:
            target, target_at = scanner.word()
            if not _NAME_RE.fullmatch(target or ""):
                raise scanner.error("promote needs a morphism name", target_at)
            command = Command(kind, name, target=target, line=line, column=column)
        else:
            text, _ = scanner.quoted()
            command = Command(kind, name, text=text, line=line, column=column)
        scanner.end_command()
        commands.append(command)
    logger.debug(f"parsed {len(commands)} commands")
    return QueryScript(tuple(commands))
