"""
Regular expressions over tuple digits.

Syntax:
  r := alt
  alt := seq ('|' seq)*          an empty branch is the empty word
  seq := post*
  post := atom ('*' | '+' | '?')*
  atom := '(' alt ')' | '[' d (',' d)* ']' | digit

A bracket holds one digit per track, so "[0,0]" is a letter for a two-track
signature, while "[12]" is the single digit twelve on a one-track signature.
Bare digits 0-9 are allowed on one-track signatures only. Whitespace is ignored.

The compiled automaton accepts the padding closure of the language: a tuple is
accepted iff one of its zero-padded words matches.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from automata.dfa import (
    DEFAULT_STATE_CAP,
    AutomatonError,
    Dfa,
    NumerationSystem,
    alphabet_size,
    encode_letter,
)
from automata.nfa import Nfa, determinize

logger = logging.getLogger(__name__)


class RegexError(AutomatonError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


# -----------------------------
# Syntax tree
# -----------------------------

@dataclass(frozen=True)
class _Letter:
    code: int


@dataclass(frozen=True)
class _Empty:
    pass


@dataclass(frozen=True)
class _Concat:
    parts: Tuple["_Node", ...]


@dataclass(frozen=True)
class _Alt:
    parts: Tuple["_Node", ...]


@dataclass(frozen=True)
class _Repeat:
    body: "_Node"
    op: str


_Node = _Letter | _Empty | _Concat | _Alt | _Repeat


class _Parser:
    def __init__(self, text: str, signature: Sequence[NumerationSystem]):
        self.text = text
        self.pos = 0
        self.signature = tuple(signature)
        self._skip()

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> Optional[str]:
        return self.text[self.pos] if self.pos < len(self.text) else None

    def _take(self) -> str:
        ch = self.text[self.pos]
        self.pos += 1
        self._skip()
        return ch

    def parse(self) -> _Node:
        node = self._alt()
        if self._peek() is not None:
            raise RegexError(f"unexpected {self._peek()!r}", self.pos)
        return node

    def _alt(self) -> _Node:
        parts = [self._seq()]
        while self._peek() == "|":
            self._take()
            parts.append(self._seq())
        return parts[0] if len(parts) == 1 else _Alt(tuple(parts))

    def _seq(self) -> _Node:
        parts: List[_Node] = []
        while self._peek() is not None and self._peek() not in "|)":
            parts.append(self._post())
        if not parts:
            return _Empty()
        return parts[0] if len(parts) == 1 else _Concat(tuple(parts))

    def _post(self) -> _Node:
        node = self._atom()
        while self._peek() is not None and self._peek() in "*+?":
            node = _Repeat(node, self._take())
        return node

    def _number(self) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise RegexError("expected a digit", start)
        value = int(self.text[start:self.pos])
        self._skip()
        return value

    def _letter(self, digits: List[int], at: int) -> _Letter:
        if len(digits) != len(self.signature):
            raise RegexError(f"letter has {len(digits)} digits but the signature has {len(self.signature)} tracks", at)
        try:
            return _Letter(encode_letter(self.signature, digits))
        except AutomatonError as e:
            raise RegexError(str(e), at) from e

    def _atom(self) -> _Node:
        at = self.pos
        ch = self._peek()
        if ch == "(":
            self._take()
            node = self._alt()
            if self._peek() != ")":
                raise RegexError("missing ')'", self.pos)
            self._take()
            return node
        if ch == "[":
            self._take()
            digits = [self._number()]
            while self._peek() == ",":
                self._take()
                digits.append(self._number())
            if self._peek() != "]":
                raise RegexError("missing ']'", self.pos)
            self._take()
            return self._letter(digits, at)
        if ch is not None and ch.isdigit():
            if len(self.signature) != 1:
                raise RegexError("bare digits need a one-track signature; use [d1,...,dk]", at)
            self._take()
            return self._letter([int(ch)], at)
        raise RegexError(f"unexpected {ch!r}" if ch else "unexpected end of expression", at)


# -----------------------------
# Thompson construction
# -----------------------------

class _Builder:
    def __init__(self) -> None:
        self.edges: List[Tuple[int, int, int]] = []  # (src, letter or -1 for epsilon, dst)
        self.count = 0

    def state(self) -> int:
        self.count += 1
        return self.count - 1

    def build(self, node: _Node) -> Tuple[int, int]:
        if isinstance(node, _Letter):
            s, t = self.state(), self.state()
            self.edges.append((s, node.code, t))
            return s, t
        if isinstance(node, _Empty):
            s = self.state()
            return s, s
        if isinstance(node, _Concat):
            first, last = self.build(node.parts[0])
            for part in node.parts[1:]:
                s, t = self.build(part)
                self.edges.append((last, -1, s))
                last = t
            return first, last
        if isinstance(node, _Alt):
            s, t = self.state(), self.state()
            for part in node.parts:
                ps, pt = self.build(part)
                self.edges.append((s, -1, ps))
                self.edges.append((pt, -1, t))
            return s, t
        s, t = self.state(), self.state()
        bs, bt = self.build(node.body)
        self.edges.append((s, -1, bs))
        self.edges.append((bt, -1, t))
        if node.op in "*?":
            self.edges.append((s, -1, t))
        if node.op in "*+":
            self.edges.append((bt, -1, bs))
        return s, t


def _epsilon_free(builder: _Builder, start: int, final: int, sigma: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = builder.count
    eps: List[List[int]] = [[] for _ in range(n)]
    moves: List[List[Tuple[int, int]]] = [[] for _ in range(n)]
    for s, a, t in builder.edges:
        if a < 0:
            eps[s].append(t)
        else:
            moves[s].append((a, t))
    closure: List[set] = []
    for s in range(n):
        seen = {s}
        stack = [s]
        while stack:
            for t in eps[stack.pop()]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        closure.append(seen)
    targets: List[List[set]] = [[set() for _ in range(sigma)] for _ in range(n)]
    for s in range(n):
        for p in closure[s]:
            for a, t in moves[p]:
                targets[s][a].update(closure[t])
    fan = max((len(x) for row in targets for x in row), default=0) or 1
    table = np.full((n, sigma, fan), -1, dtype=np.int32)
    for s in range(n):
        for a in range(sigma):
            for k, t in enumerate(sorted(targets[s][a])):
                table[s, a, k] = t
    initial = np.zeros(n, dtype=bool)
    initial[sorted(closure[start])] = True
    accepting = np.array([final in closure[s] for s in range(n)])
    return table, initial, accepting


def compile_regex(text: str, signature: Sequence[NumerationSystem], state_cap: int = DEFAULT_STATE_CAP) -> Dfa:
    """Minimal padding-closed automaton for a tuple-digit regular expression."""
    signature = tuple(signature)
    if not signature:
        raise AutomatonError("a regular expression needs at least one track")
    tree = _Parser(text, signature).parse()
    builder = _Builder()
    start, final = builder.build(tree)
    table, initial, accepting = _epsilon_free(builder, start, final, alphabet_size(signature))
    dfa = determinize(Nfa(signature, table, initial, accepting), pad_start=True, state_cap=state_cap)
    logger.debug(f"regex {text!r} over {[s.base for s in signature]}: {dfa.num_states} states")
    return dfa
