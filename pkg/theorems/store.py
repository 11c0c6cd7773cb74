"""
Automaton store: verified automata for the rarefied-sum targets, loaded from
the output directory when present, otherwise inferred, verified and saved.

The store also hands out the shared query environment: PRELUDE helpers,
conv55, the zeros-parity sequence R4, and a resolver so scripts can call
$f30, $f51, ... without defining them first.

Usage:
  from theorems.store import AutomatonStore, StoreConfig
  store = AutomatonStore(StoreConfig(directory=Path("out/automata")))
  env = store.environment()
  report = run_source('eval t "An Ey $f30(n,y)":', env)
"""
from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional

from automata.dfa import AutomatonError, Dfa, live_states
from automata.io import load_automaton, save_automaton
from graph import InferenceConfig, infer_and_verify
from logic import Environment, ScriptRunner, parse
from relations import neg_to_pos_max0, r_dfao_base4
from theorems.scripts import PRELUDE, verification_script
from theorems.targets import TARGETS, get_target

logger = logging.getLogger(__name__)


@dataclass
class StoreConfig:
    directory: Optional[Path] = Path("out") / "automata"
    inference: InferenceConfig = field(default_factory=InferenceConfig)
    infer_missing: bool = True


def prelude_environment(resolver=None) -> Environment:
    env = Environment(resolver=resolver)
    env = env.with_automaton("conv55", neg_to_pos_max0(5)).with_dfao("R4", r_dfao_base4())
    runner = ScriptRunner(env)
    report = runner.run(parse(PRELUDE))
    if not report.ok:
        raise AutomatonError("prelude failed: " + "; ".join(r.line_text() for r in report.results if not r.ok))
    return runner.env


class AutomatonStore:
    def __init__(self, config: Optional[StoreConfig] = None):
        self.config = config or StoreConfig()
        self._automata: Dict[str, Dfa] = {}
        self._locks: Dict[str, threading.Lock] = {name: threading.Lock() for name in TARGETS}
        self._prelude: Optional[Environment] = None
        self._prelude_lock = threading.Lock()

    def path(self, name: str) -> Optional[Path]:
        if self.config.directory is None:
            return None
        return Path(self.config.directory) / f"{name}.txt"

    def prelude(self) -> Environment:
        with self._prelude_lock:
            if self._prelude is None:
                self._prelude = prelude_environment()
            return self._prelude

    def put(self, name: str, dfa: Dfa, save: bool = True) -> None:
        self._automata[name] = dfa
        path = self.path(name)
        if save and path is not None:
            save_automaton(dfa, path)
            logger.info(f"saved {name} ({live_states(dfa)} states) to {path}")

    def infer(self, name: str) -> Dfa:
        target = get_target(name)
        logger.info(f"inferring {name} = {target.description}(n) over {target.arg_system.label}/{target.out_system.label}")
        return infer_and_verify(
            name,
            target.oracle,
            target.signature,
            verification_script(target),
            self.prelude(),
            self.config.inference,
        )

    def get(self, name: str) -> Dfa:
        get_target(name)
        with self._locks[name]:
            found = self._automata.get(name)
            if found is not None:
                return found
            path = self.path(name)
            if path is not None and path.exists():
                dfa = load_automaton(path)
                logger.info(f"loaded {name} ({live_states(dfa)} states) from {path}")
                self._automata[name] = dfa
                return dfa
            if not self.config.infer_missing:
                raise KeyError(f"no stored automaton for {name} and inference is disabled")
            dfa = self.infer(name)
            self.put(name, dfa)
            return dfa

    def resolve(self, name: str) -> Optional[Dfa]:
        return self.get(name) if name in TARGETS else None

    def environment(self) -> Environment:
        """Fresh environment with the prelude and store-backed $target calls."""
        return prelude_environment(resolver=self.resolve)
