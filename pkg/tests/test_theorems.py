import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from automata.dfa import accepts, equivalent, live_states
from automata.regex import compile_regex
from inference import build_samples, guess_dfa, zero_oracle
from logic import CommandKind, eval_closed, evaluate, parse
from numeration.digits import NumerationSystem
from numeration.pseudopower import pseudopower_array
from theorems import (
    TARGETS,
    AutomatonStore,
    StoreConfig,
    TheoremContext,
    TheoremReport,
    Verdict,
    function_sweep,
    get_target,
    prelude_environment,
    run_all,
    run_theorem,
    thm_bnd,
    thm_constants,
    thm_newman,
    verify_function_automaton,
    write_report,
)
import theorems.checks as checks
from theorems.scripts import SET_REGEXES, THM_B34, THM_F31_F32, THM_G30, growth_script, verification_script

B4 = NumerationSystem(4)


@pytest.fixture
def offline_ctx() -> TheoremContext:
    store = AutomatonStore(StoreConfig(directory=None, infer_missing=False))
    return TheoremContext(store=store, bnd_n_max=5000, tightness_k=6)


# -----------------------------
# Targets and scripts
# -----------------------------

def test_target_tables():
    assert get_target("f30").table(9).tolist() == [0, 1, 2, 3, 4, 5, 6, 7, 6]
    assert get_target("mf31").table(3).tolist() == [0, 1, 2]
    assert get_target("f51").table(8)[7] == -5
    assert get_target("g30").table(4).tolist() == [0, 1, 2, 1]


def test_target_induction_terms():
    assert get_target("f30").index_term == "3*n"
    assert get_target("f51").index_term == "5*n+1"
    assert get_target("f30").up_value == 0
    assert get_target("mf31").up_value == 1


def test_unknown_target():
    with pytest.raises(KeyError, match="unknown target"):
        get_target("f99")


def test_verification_script_orientation():
    text = verification_script(get_target("mf31"))
    assert 'TM4[3*n+1]=@1) => $mf31(n+1, ?msd_3 x+1)"' in text
    assert 'TM4[3*n+1]=@0) => $mf31(n+1, ?msd_3 x-1)"' in text


def test_verification_script_negative_base():
    text = verification_script(get_target("f51"))
    assert "?msd_neg_5 x+1=0" in text
    assert "TM16[5*n+1]=@0" in text
    growth = growth_script(get_target("f51"))
    assert "test51_5" in growth and "test51_6" in growth


def test_prelude_environment():
    env = prelude_environment()
    for name in ("TM4", "TM16", "R4", "p34", "p165", "power43", "pow4", "conv55"):
        assert name in env.names()
    conv = env.automaton("conv55")
    assert accepts(conv, (7, 7))
    assert accepts(conv, (-3, 0))
    assert not accepts(conv, (-3, 3))


# -----------------------------
# Reports
# -----------------------------

def test_report_verdicts(tmp_path):
    report = TheoremReport(theorem="demo", title="demo")
    assert report.verdict is Verdict.FAIL
    report.add("a", True, "fine")
    report.info("b", "just a note")
    assert report.passed
    report.add("c", False, "broken", "n=3")
    assert report.verdict is Verdict.FAIL
    assert [c.name for c in report.failures()] == ["c"]
    text = report.to_text()
    assert text.startswith("demo: FAIL")
    assert "[n=3]" in text
    path = write_report(report, tmp_path)
    assert path.read_text() == text
    assert (tmp_path / "demo.json").exists()


def test_function_sweep_zero():
    dfa = guess_dfa(build_samples(zero_oracle, (B4, B4), 255)).dfa
    table = np.zeros(1000, dtype=np.int64)
    assert function_sweep(dfa, table, B4, 5, 1) == (0, 0, None)
    missed, _, witness = function_sweep(dfa, np.ones(10, dtype=np.int64), B4, 5, 1)
    assert missed == 10
    assert witness == "rejects (0, 1)"


# -----------------------------
# Numeric theorems
# -----------------------------

def test_pseudopower_chain(offline_ctx):
    report = thm_bnd(offline_ctx)
    assert report.passed, report.to_text()
    assert len(report.checks) == 15


def test_newman_constants(offline_ctx):
    report = thm_constants(offline_ctx)
    assert report.passed, report.to_text()
    observed = next(c for c in report.checks if c.name == "observed maximum")
    assert observed.verdict is Verdict.PASS


def test_unknown_theorem(offline_ctx):
    with pytest.raises(KeyError, match="unknown theorem"):
        run_theorem("thm99", offline_ctx)


# -----------------------------
# Verified automata
# -----------------------------

@pytest.mark.parametrize("name", list(TARGETS))
def test_function_automaton(name, theorem_ctx):
    report = verify_function_automaton(name, theorem_ctx)
    assert report.passed, report.to_text()
    assert report.automata[name] == TARGETS[name].states


def test_f30_guess_is_stable(store):
    target = get_target("f30")
    regrown = guess_dfa(build_samples(target.oracle, target.signature, 4**8)).dfa
    assert equivalent(regrown, store.get("f30"))
    assert live_states(regrown) == 16


@pytest.mark.parametrize("theorem", ["thm1", "thm3", "thm6", "thm7", "thm9", "thm11"])
def test_theorem(theorem, theorem_ctx):
    report = run_theorem(theorem, theorem_ctx)
    assert report.passed, report.to_text()


# -----------------------------
# Equality sets against the tables
# -----------------------------

def _table_set(holds: np.ndarray) -> list:
    return np.flatnonzero(holds).tolist()


def _regex_set(name: str, limit: int) -> list:
    base, regex = SET_REGEXES[name]
    dfa = compile_regex(regex, (NumerationSystem(base),))
    return [n for n in range(limit) if accepts(dfa, (n,))]


def test_eq32_upper_is_repunits():
    ns = np.arange(2000)
    m = pseudopower_array(3, 4, get_target("mf32").table(ns.size))
    found = _table_set(4 * m == 3 * ns + 1)
    assert found == [1, 5, 21, 85, 341, 1365]
    assert found == _regex_set("eq32_upper", ns.size)


def test_eqg30_one_set():
    ns = np.arange(2000)
    found = _table_set(get_target("g30").table(ns.size) == 1)
    assert found == [1, 3, 11, 43, 171, 683]
    assert found == _regex_set("eqg30_one", ns.size)


# -----------------------------
# Checks that raise
# -----------------------------

def test_raising_check_becomes_fail_report(offline_ctx):
    # thm1 needs the f30 automaton, which the offline store cannot supply
    report = run_theorem("thm1", offline_ctx)
    assert report.verdict is Verdict.FAIL
    assert "KeyError" in report.failures()[0].detail


def test_run_all_keeps_going_after_a_raising_check(offline_ctx, monkeypatch):
    monkeypatch.setattr(checks, "THEOREMS", {"thm1": thm_newman, "thm4": thm_constants})
    reports = run_all(offline_ctx)
    assert [r.theorem for r in reports] == ["thm1", "thm4"]
    assert [r.verdict for r in reports] == [Verdict.FAIL, Verdict.PASS]


# -----------------------------
# Scripts against brute force
# -----------------------------

def _evals(text: str) -> dict:
    return {c.name: c.formula for c in parse(text).commands if c.kind is CommandKind.EVAL}


def _target_evals(name: str) -> dict:
    target = get_target(name)
    return _evals(verification_script(target) + growth_script(target))


TWO_VARIABLE = [
    (name, f"test{get_target(name).tag}_{k}")
    for name in ("f30", "mf31", "mf32", "g30")
    for k in (0, 1, 3, 4, 5)
    if not (name == "mf32" and k == 5)
]


@pytest.mark.parametrize("name, check", TWO_VARIABLE)
def test_target_script_matches_brute_force(name, check, store):
    env = store.environment()
    formula = _target_evals(name)[check]
    assert eval_closed(formula, env) is True
    assert evaluate(formula, env, bound=200)


@pytest.mark.parametrize(
    "script, check",
    [
        (THM_B34, "bnd1"),
        (THM_B34, "bnd2"),
        (THM_F31_F32, "test31_bnd1"),
        (THM_F31_F32, "test31_bnd2"),
        (THM_F31_F32, "test32_bnd1"),
        (THM_G30, "testg30_bnd"),
    ],
)
def test_bound_script_matches_brute_force(script, check, store):
    env = store.environment()
    formula = _evals(script)[check]
    assert eval_closed(formula, env) is True
    assert evaluate(formula, env, bound=60)
