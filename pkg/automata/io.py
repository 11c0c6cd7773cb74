"""
Plain-text and DOT serialisation.

Text format:
  line 1        signed track bases, space separated ("4 3", "16 -5")
  state <id> <v>   v is 1/0 for accepting (DFA) or the output value (DFAO)
  <src> <d1,...,dk> <dst>

The initial state is 0. The dead sink of a DFA and every transition into it are
left out; load completes missing transitions with a fresh sink and minimizes,
so load(save(A)) is identical to minimize(A).
"""
from __future__ import annotations

import logging
import os
import tempfile
from pathlib import Path
from typing import Dict, List, Tuple

import graphviz
import numpy as np

from automata.dfa import (
    AutomatonError,
    Dfa,
    dead_state,
    encode_letter,
    letter_digits,
    minimize,
)
from automata.dfao import Dfao, minimize_dfao
from numeration.digits import NumerationError, NumerationSystem

logger = logging.getLogger(__name__)


# -----------------------------
# Text
# -----------------------------

def _header(signature) -> str:
    if not signature:
        raise AutomatonError("automata without tracks are not serialised")
    return " ".join(str(s.base) for s in signature)


def _body(signature, table: np.ndarray, values: np.ndarray, skip: int | None) -> List[str]:
    digits = letter_digits(signature)
    lines = []
    for s in range(table.shape[0]):
        if s != skip:
            lines.append(f"state {s} {int(values[s])}")
    for s in range(table.shape[0]):
        if s == skip:
            continue
        for a in range(table.shape[1]):
            t = int(table[s, a])
            if t == skip:
                continue
            lines.append(f"{s} {','.join(str(int(d)) for d in digits[a])} {t}")
    return lines


def dumps(dfa: Dfa) -> str:
    m = minimize(dfa)
    dead = dead_state(m)
    skip = dead if dead not in (None, 0) else None
    return "\n".join([_header(m.signature)] + _body(m.signature, m.table, m.accepting, skip)) + "\n"


def dumps_dfao(dfao: Dfao) -> str:
    m = minimize_dfao(dfao)
    return "\n".join([_header(m.signature)] + _body(m.signature, m.table, m.outputs, None)) + "\n"


def _parse(text: str) -> Tuple[tuple, Dict[int, int], List[Tuple[int, int, int]]]:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise AutomatonError("empty automaton file")
    try:
        signature = tuple(NumerationSystem(int(tok)) for tok in lines[0].split())
    except (ValueError, NumerationError) as e:
        raise AutomatonError(f"bad signature line {lines[0]!r}: {e}") from e
    values: Dict[int, int] = {}
    edges: List[Tuple[int, int, int]] = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split()
        try:
            if parts[0] == "state":
                values[int(parts[1])] = int(parts[2])
            else:
                src, letter, dst = parts
                digits = [int(d) for d in letter.split(",")]
                edges.append((int(src), encode_letter(signature, digits), int(dst)))
        except (ValueError, IndexError) as e:
            raise AutomatonError(f"line {lineno}: cannot read {line!r}") from e
    if 0 not in values:
        raise AutomatonError("initial state 0 is not declared")
    return signature, values, edges


def _assemble(signature, values: Dict[int, int], edges, sink_value: int):
    ids = sorted(values)
    index = {sid: i for i, sid in enumerate(ids)}
    sigma = int(np.prod([s.radix for s in signature]))
    sink = len(ids)
    table = np.full((len(ids) + 1, sigma), sink, dtype=np.int64)
    for src, a, dst in edges:
        if src not in index or dst not in index:
            raise AutomatonError(f"transition {src} -> {dst} uses an undeclared state")
        table[index[src], a] = index[dst]
    labels = np.array([values[sid] for sid in ids] + [sink_value])
    return table, labels


def loads(text: str) -> Dfa:
    signature, values, edges = _parse(text)
    table, labels = _assemble(signature, values, edges, 0)
    return minimize(Dfa(signature, table, labels.astype(bool)))


def loads_dfao(text: str) -> Dfao:
    signature, values, edges = _parse(text)
    table, labels = _assemble(signature, values, edges, 0)
    if (table == table.shape[0] - 1)[:-1].any():
        raise AutomatonError("DFAO transitions must be complete")
    return minimize_dfao(Dfao(signature, table[:-1], labels[:-1]))


def atomic_write(path: Path, text: str) -> None:
    """Write via a temporary file in the same directory and rename over the target."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=str(path.parent))
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def save_automaton(dfa: Dfa, path: Path) -> None:
    atomic_write(path, dumps(dfa))
    logger.debug(f"saved {dfa!r} to {path}")


def load_automaton(path: Path) -> Dfa:
    return loads(Path(path).read_text(encoding="utf-8"))


def save_dfao(dfao: Dfao, path: Path) -> None:
    atomic_write(path, dumps_dfao(dfao))


def load_dfao(path: Path) -> Dfao:
    return loads_dfao(Path(path).read_text(encoding="utf-8"))


# -----------------------------
# DOT
# -----------------------------

def _edge_label(signature, letters: List[int]) -> str:
    digits = letter_digits(signature)
    if len(signature) == 1:
        return ",".join(str(int(digits[a][0])) for a in letters)
    return ", ".join("[" + ",".join(str(int(d)) for d in digits[a]) + "]" for a in letters)


def export_dot(automaton: Dfa | Dfao, name: str = "automaton") -> str:
    """DOT source with the dead sink omitted and parallel edges merged; output is deterministic."""
    if isinstance(automaton, Dfao):
        m = minimize_dfao(automaton)
        skip = None
        labels = {s: f"{s}/{int(m.outputs[s])}" for s in range(m.num_states)}
        shapes = {s: "circle" for s in range(m.num_states)}
    else:
        m = minimize(automaton)
        dead = dead_state(m)
        skip = dead if dead not in (None, 0) else None
        labels = {s: str(s) for s in range(m.num_states)}
        shapes = {s: "doublecircle" if m.accepting[s] else "circle" for s in range(m.num_states)}

    g = graphviz.Digraph(name=name)
    g.attr(rankdir="LR")
    g.node("init", label="", shape="point")
    for s in range(m.num_states):
        if s != skip:
            g.node(str(s), label=labels[s], shape=shapes[s])
    g.edge("init", "0")
    grouped: Dict[Tuple[int, int], List[int]] = {}
    for s in range(m.num_states):
        if s == skip:
            continue
        for a in range(m.table.shape[1]):
            t = int(m.table[s, a])
            if t != skip:
                grouped.setdefault((s, t), []).append(a)
    for (s, t), letters in sorted(grouped.items()):
        g.edge(str(s), str(t), label=_edge_label(m.signature, letters))
    return g.source
