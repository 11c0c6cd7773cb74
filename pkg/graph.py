"""
LangGraph orchestration for guess-then-verify automaton inference.

Flow:
  START → sample → guess → check → verify → END
                     ↑  └──────┴───────┴─→ grow ─→ (sample | END)

State (TypedDict) fields used:
  - name: automaton name the verification script refers to ($f30, $f51, ...)
  - n_max: current sample bound
  - samples: SampleSet for n <= n_max
  - hypothesis: latest guessed automaton
  - status: 'guessed' | 'consistent' | 'verified' | 'grow' | 'failed'
  - reason: why the last round did not verify
  - attempts: list of {n_max, states, outcome} per round

Usage:
  from graph import infer_and_verify
  dfa = infer_and_verify("f30", rarefied_oracle(3, 0), (B4, B3), script_text, env)

Requirements:
  langgraph>=0.2
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Literal, Optional, TypedDict

from langgraph.graph import END, START, StateGraph

from automata.dfa import Dfa, TrackSignature
from inference import (
    Hypothesis,
    LearnerConfig,
    Oracle,
    SampleSet,
    SampleTooSmall,
    build_samples,
    guess_dfa,
    inconsistencies,
)
from logic import CompileOptions, Environment, ScriptReport, ScriptRunner, parse

logger = logging.getLogger(__name__)


class VerificationFailed(RuntimeError):
    def __init__(self, name: str, n_max: int, reason: str):
        super().__init__(f"{name}: no verified automaton with samples up to n = {n_max}; last failure: {reason}")
        self.name = name
        self.n_max = n_max
        self.reason = reason


@dataclass
class InferenceConfig:
    start: int = 4096
    ceiling: int = 2**20
    growth: int = 4
    seed: int = 20240607
    learner: LearnerConfig = field(default_factory=LearnerConfig)
    compile: CompileOptions = field(default_factory=CompileOptions)


# -----------------------------
# State definition
# -----------------------------

class InferenceState(TypedDict, total=False):
    name: str
    n_max: int
    samples: SampleSet
    hypothesis: Hypothesis
    report: ScriptReport
    status: Literal["guessed", "consistent", "verified", "grow", "failed"]
    reason: str
    attempts: List[Dict[str, Any]]


def failed_checks(report: ScriptReport) -> List[str]:
    return [r.name for r in report.results if not r.ok or r.verdict is False]


# -----------------------------
# Node impls
# -----------------------------

class InferenceNodes:
    def __init__(self, oracle: Oracle, signature: TrackSignature, verifier: str, env: Environment, config: InferenceConfig):
        self.oracle = oracle
        self.signature = tuple(signature)
        self.verifier = parse(verifier)
        self.env = env
        self.config = config

    def _record(self, state: InferenceState, outcome: str) -> None:
        hypothesis = state.get("hypothesis")
        state.setdefault("attempts", []).append(
            {"n_max": state["n_max"], "states": hypothesis.states if hypothesis else None, "outcome": outcome}
        )

    def sample_node(self, state: InferenceState) -> InferenceState:
        state["samples"] = build_samples(self.oracle, self.signature, state["n_max"], seed=self.config.seed)
        state["hypothesis"] = None
        return state

    def guess_node(self, state: InferenceState) -> InferenceState:
        try:
            state["hypothesis"] = guess_dfa(state["samples"], self.config.learner)
            state["status"] = "guessed"
        except SampleTooSmall as e:
            state["status"] = "grow"
            state["reason"] = str(e)
            self._record(state, "sample too small")
        return state

    def check_node(self, state: InferenceState) -> InferenceState:
        wrong = inconsistencies(state["hypothesis"].dfa, state["samples"])
        if wrong:
            state["status"] = "grow"
            state["reason"] = f"hypothesis contradicts {wrong} sample words"
            self._record(state, "inconsistent")
        else:
            state["status"] = "consistent"
        return state

    def verify_node(self, state: InferenceState) -> InferenceState:
        name, hypothesis = state["name"], state["hypothesis"]
        runner = ScriptRunner(self.env.with_automaton(name, hypothesis.dfa), self.config.compile)
        report = runner.run(self.verifier)
        state["report"] = report
        failing = failed_checks(report)
        if failing:
            state["status"] = "grow"
            state["reason"] = f"checks failed: {', '.join(failing)}"
            logger.info(f"✗ {name}: {hypothesis.states}-state guess at n <= {state['n_max']} fails {failing}")
            self._record(state, "refuted")
        else:
            state["status"] = "verified"
            logger.info(f"✓ {name}: {hypothesis.states} states verified (n <= {state['n_max']})")
            self._record(state, "verified")
        return state

    def grow_node(self, state: InferenceState) -> InferenceState:
        grown = state["n_max"] * self.config.growth
        if grown > self.config.ceiling:
            state["status"] = "failed"
        else:
            logger.info(f"{state['name']}: growing sample to n <= {grown} ({state.get('reason', '')})")
            state["n_max"] = grown
        return state


# -----------------------------
# Graph builder
# -----------------------------

def build_inference_graph(
    oracle: Oracle, signature: TrackSignature, verifier: str, env: Environment, config: InferenceConfig
):
    nodes = InferenceNodes(oracle, signature, verifier, env, config)

    g = StateGraph(InferenceState)
    g.add_node("sample", nodes.sample_node)
    g.add_node("guess", nodes.guess_node)
    g.add_node("check", nodes.check_node)
    g.add_node("verify", nodes.verify_node)
    g.add_node("grow", nodes.grow_node)

    g.add_edge(START, "sample")
    g.add_edge("sample", "guess")

    def _after(next_node: str):
        def switch(state: InferenceState) -> str:
            return "grow" if state.get("status") == "grow" else next_node

        return switch

    g.add_conditional_edges("guess", _after("check"), {"check": "check", "grow": "grow"})
    g.add_conditional_edges("check", _after("verify"), {"verify": "verify", "grow": "grow"})
    g.add_conditional_edges("verify", _after(END), {END: END, "grow": "grow"})
    g.add_conditional_edges(
        "grow", lambda s: END if s.get("status") == "failed" else "sample", {"sample": "sample", END: END}
    )
    return g.compile()


# -----------------------------
# Helper: full inference run
# -----------------------------

def run_inference(
    name: str,
    oracle: Oracle,
    signature: TrackSignature,
    verifier: str,
    env: Optional[Environment] = None,
    config: Optional[InferenceConfig] = None,
) -> InferenceState:
    config = config or InferenceConfig()
    app = build_inference_graph(oracle, signature, verifier, env or Environment(), config)
    state: InferenceState = {"name": name, "n_max": config.start, "attempts": []}
    return app.invoke(state, {"recursion_limit": 200})


def infer_and_verify(
    name: str,
    oracle: Oracle,
    signature: TrackSignature,
    verifier: str,
    env: Optional[Environment] = None,
    config: Optional[InferenceConfig] = None,
) -> Dfa:
    """Guess, verify with the script, and grow the sample until the script passes or the ceiling is hit."""
    final = run_inference(name, oracle, signature, verifier, env, config)
    if final.get("status") != "verified":
        raise VerificationFailed(name, final["n_max"], final.get("reason", "no attempt"))
    return final["hypothesis"].dfa
