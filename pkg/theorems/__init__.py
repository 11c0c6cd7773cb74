from theorems.checks import (
    THEOREMS,
    TheoremContext,
    function_sweep,
    run_all,
    run_theorem,
    thm_b34,
    thm_bnd,
    thm_constants,
    thm_f5,
    thm_f31_f32,
    thm_g30,
    thm_newman,
    thm_special_values,
    verify_function_automaton,
)
from theorems.report import CheckResult, TheoremReport, Verdict, write_report
from theorems.store import AutomatonStore, StoreConfig, prelude_environment
from theorems.targets import SELF_TESTS, TARGETS, SelfTest, Target, get_target

__all__ = [
    "AutomatonStore",
    "CheckResult",
    "SELF_TESTS",
    "StoreConfig",
    "TARGETS",
    "THEOREMS",
    "SelfTest",
    "Target",
    "TheoremContext",
    "TheoremReport",
    "Verdict",
    "function_sweep",
    "get_target",
    "prelude_environment",
    "run_all",
    "run_theorem",
    "thm_b34",
    "thm_bnd",
    "thm_constants",
    "thm_f5",
    "thm_f31_f32",
    "thm_g30",
    "thm_newman",
    "thm_special_values",
    "verify_function_automaton",
    "write_report",
]
