"""
Theorem checks.

Each check runs the relevant query script through the logic engine, compares
the equality-set automata with their closed forms, and confirms every
statement by a vectorised brute-force sweep over the oracle tables.

Usage:
  from theorems.checks import TheoremContext, run_theorem
  ctx = TheoremContext(store=AutomatonStore())
  report = run_theorem("thm3", ctx)
  print(report.to_text())
"""
from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from automata.dfa import Dfa, accepts_many, equivalent, live_states
from automata.regex import compile_regex
from logic import CommandKind, Environment, ScriptReport, ScriptRunner, parse
from numeration.digits import NumerationSystem
from numeration.pseudopower import (
    check_auxiliary_inequalities,
    check_bnd_inequalities,
    check_tightness,
    exponent,
    pseudopower_array,
)
from numeration.sequences import rarefied_f
from theorems.report import TheoremReport
from theorems.scripts import (
    SET_REGEXES,
    THM_B34,
    THM_F31_F32,
    THM_F50,
    THM_F51,
    THM_G30,
    THM_SPECIAL_VALUES,
    growth_script,
    verification_script,
)
from theorems.store import AutomatonStore
from theorems.targets import get_target

logger = logging.getLogger(__name__)

REL_TOL = 1e-9
BND_PAIRS: Tuple[Tuple[int, int], ...] = ((2, 4), (3, 4), (5, 16), (3, 9), (4, 5))
LIMSUP_CONSTANT = 1.601958
LIMINF_CONSTANT = 1.1547


@dataclass
class TheoremContext:
    store: AutomatonStore = field(default_factory=AutomatonStore)
    sweep_base4: int = 4**7
    sweep_base16: int = 16**4
    constants_sweep: int = 4**8
    bnd_n_max: int = 10**5
    tightness_k: int = 10
    wrong_per_n: int = 20
    seed: int = 20240607


# -----------------------------
# Helpers
# -----------------------------

def _first_failure(ok: np.ndarray, ns: np.ndarray) -> Optional[str]:
    bad = np.flatnonzero(~ok)
    return None if bad.size == 0 else f"n={int(ns[bad[0]])}"


def _brute(report: TheoremReport, name: str, ok: np.ndarray, ns: np.ndarray, detail: str) -> None:
    report.add(name, bool(ok.all()), detail, _first_failure(ok, ns))


def _run_script(report: TheoremReport, env: Environment, text: str) -> Tuple[ScriptRunner, ScriptReport]:
    runner = ScriptRunner(env)
    result = runner.run(parse(text))
    for r in result.results:
        if not r.ok:
            report.add(r.name, False, f"{r.kind.value} failed", r.error)
        elif r.verdict is not None:
            report.add(r.name, r.verdict, "TRUE" if r.verdict else "FALSE")
        elif r.kind is CommandKind.DEF and r.states is not None:
            report.automata[r.name] = r.states
    return runner, result


def _set_check(
    report: TheoremReport,
    runner: ScriptRunner,
    name: str,
    truth: Optional[np.ndarray] = None,
    ns: Optional[np.ndarray] = None,
) -> None:
    """Compare def `name` with its closed-form regex and, when given, with the brute-force set."""
    labeled = runner.defined.get(name)
    if labeled is None:
        report.add(f"{name} set", False, "automaton was not built")
        return
    base, regex = SET_REGEXES[name]
    expected = compile_regex(regex, (NumerationSystem(base),))
    same = equivalent(labeled.dfa, expected)
    report.add(f"{name} set", same, f"language {'=' if same else '!='} {regex} ({live_states(labeled.dfa)} states)")
    if truth is not None:
        ok = accepts_many(labeled.dfa, [ns]) == truth
        _brute(report, f"{name} sweep", ok, ns, f"agrees with the oracle for n <= {int(ns[-1])}")


def _powers(scale: int, limit: int) -> np.ndarray:
    """scale * 4^i below limit, i >= 0, leaving room for the +1 some families add."""
    out = []
    p = scale
    while p + 1 < limit:
        out.append(p)
        p *= 4
    return np.array(out, dtype=np.int64)


def _family_note(report: TheoremReport, name: str, ns: np.ndarray, holds: np.ndarray, actual: str) -> None:
    """INFO record for a closed form the equality set does not follow."""
    hits = [int(n) for n in ns if holds[n]]
    report.info(name, f"holds at {len(hits)} of {ns.size} points; the set is n = {actual}", ",".join(map(str, hits)) or None)


def _within(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """left <= right up to a relative tolerance."""
    return left <= right + REL_TOL * np.maximum(1.0, np.abs(right))


def function_sweep(dfa: Dfa, table: np.ndarray, out: NumerationSystem, wrong: int, seed: int) -> Tuple[int, int, Optional[str]]:
    """(missed positives, accepted negatives, first witness) over n = 0..len(table)-1."""
    ns = np.arange(table.size, dtype=np.int64)
    pos = accepts_many(dfa, [ns, table])
    rng = np.random.default_rng(seed)
    spread = 3 * max(int(np.abs(table).max()), 1)
    shift = rng.integers(1, spread + 1, size=(ns.size, wrong)) * rng.choice([-1, 1], size=(ns.size, wrong))
    ys = table[:, None] + shift
    if not out.is_negative:
        ys = np.where(ys < 0, table[:, None] + np.abs(shift), ys)
    neg_n = np.repeat(ns, wrong)
    neg = accepts_many(dfa, [neg_n, ys.reshape(-1)])
    witness = None
    if not pos.all():
        n = int(np.flatnonzero(~pos)[0])
        witness = f"rejects ({n}, {int(table[n])})"
    elif neg.any():
        i = int(np.flatnonzero(neg)[0])
        witness = f"accepts ({int(neg_n[i])}, {int(ys.reshape(-1)[i])})"
    return int((~pos).sum()), int(neg.sum()), witness


# -----------------------------
# Function automata
# -----------------------------

def verify_function_automaton(name: str, ctx: TheoremContext) -> TheoremReport:
    target = get_target(name)
    report = TheoremReport(theorem=f"fn-{name}", title=f"{name}(n) = {target.description}(n) is synchronized")
    dfa = ctx.store.get(name)
    states = live_states(dfa)
    report.automata[name] = states
    report.add("state count", states == target.states, f"{states} live states, expected {target.states}")

    env = ctx.store.prelude().with_automaton(name, dfa)
    _run_script(report, env, verification_script(target) + growth_script(target))

    sweep = ctx.sweep_base16 if target.arg_base == 16 else ctx.sweep_base4
    missed, accepted, witness = function_sweep(dfa, target.table(sweep + 1), target.out_system, ctx.wrong_per_n, ctx.seed)
    report.add(
        "oracle sweep",
        missed == 0 and accepted == 0,
        f"n <= {sweep}: {missed} values rejected, {accepted} of {ctx.wrong_per_n} wrong values per n accepted",
        witness,
    )
    return report


# -----------------------------
# f_{3,0}
# -----------------------------

def thm_newman(ctx: TheoremContext) -> TheoremReport:
    report = TheoremReport(theorem="thm1", title="f_{3,0}(n) > 0 for n >= 1 and f_{3,0} is unbounded")
    target = get_target("f30")
    env = ctx.store.prelude().with_automaton("f30", ctx.store.get("f30"))
    _run_script(report, env, growth_script(target))
    h = target.table(ctx.sweep_base4 + 1)
    ns = np.arange(h.size)
    _brute(report, "positivity sweep", h[1:] > 0, ns[1:], f"f(n) > 0 for 1 <= n <= {ctx.sweep_base4}")
    return report


def thm_bnd(ctx: TheoremContext) -> TheoremReport:
    report = TheoremReport(theorem="thm2", title="pseudopower chain (a-1)/(b-1) n^e <= p_{a,b}(n) <= n^e")
    for a, b in BND_PAIRS:
        chain = check_bnd_inequalities(a, b, ctx.bnd_n_max)
        report.add(
            f"chain ({a},{b})",
            chain.holds,
            f"n <= {ctx.bnd_n_max}, worst margin {chain.worst_margin:.2e}, {chain.guard_retests} guard retests",
            None if chain.holds else f"n={chain.worst_n}",
        )
        tight = check_tightness(a, b, ctx.tightness_k)
        report.add(
            f"tightness ({a},{b})",
            tight.holds,
            f"p(a^k) = b^k for k <= {ctx.tightness_k}; lower gap {max(tight.lower_gaps, default=0.0):.2e}",
        )
        aux = check_auxiliary_inequalities(a, b)
        report.add(
            f"auxiliary ({a},{b})",
            aux.holds,
            ", ".join(f"{k} {v:.2e}" for k, v in aux.margins.items()),
        )
    return report


def thm_b34(ctx: TheoremContext) -> TheoremReport:
    report = TheoremReport(theorem="thm3", title="n <= p_{3,4}(f_{3,0}(n)) <= (3n-1)/2, both bounds tight infinitely often")
    runner, _ = _run_script(report, ctx.store.environment(), THM_B34)
    h = get_target("f30").table(ctx.sweep_base4 + 1)
    ns = np.arange(h.size, dtype=np.int64)
    m = pseudopower_array(3, 4, h)
    _brute(report, "lower bound sweep", ns <= m, ns, f"n <= p34(f(n)) for n <= {ctx.sweep_base4}")
    _brute(report, "upper bound sweep", 2 * m[1:] + 1 <= 3 * ns[1:], ns[1:], "2 p34(f(n)) + 1 <= 3n")
    _set_check(report, runner, "bnd3", m == ns, ns)
    _set_check(report, runner, "bnd4", 2 * m + 1 == 3 * ns, ns)
    return report


def thm_constants(ctx: TheoremContext) -> TheoremReport:
    report = TheoremReport(theorem="thm4", title="1 <= f_{3,0}(n)/n^e <= (9/4)^e, e = log 3/log 4")
    e = exponent(4, 3)
    upper = (9 / 4) ** e
    h = get_target("f30").table(ctx.constants_sweep + 1)
    ns = np.arange(1, h.size, dtype=np.int64)
    ratio = h[1:] / ns.astype(np.float64) ** e
    _brute(report, "lower constant", _within(np.ones_like(ratio), ratio), ns, f"min ratio {ratio.min():.6f} >= 1")
    _brute(report, "upper constant", _within(ratio, np.full_like(ratio, upper)), ns, f"max ratio {ratio.max():.6f} <= {upper:.4f}")
    best = int(np.argmax(ratio))
    report.add(
        "observed maximum",
        1.6019 <= ratio[best] <= 1.9016,
        f"max f(n)/n^e = {ratio[best]:.6f} for n <= {ctx.constants_sweep}",
        f"n={int(ns[best])}",
    )
    report.info("ratio at n=1", f"{ratio[0]:.6f}")
    return report


def thm_special_values(ctx: TheoremContext) -> TheoremReport:
    report = TheoremReport(theorem="thm6", title="f_{3,0}(2*4^i) = 2*3^i and f_{3,0}((260*4^i+1)/3) = 55*3^i")
    _run_script(report, ctx.store.environment(), THM_SPECIAL_VALUES)
    doubles = [rarefied_f(3, 0, 2 * 4**i) == 2 * 3**i for i in range(8)]
    report.add("f(2*4^i) = 2*3^i", all(doubles), "i <= 7", None if all(doubles) else f"i={doubles.index(False)}")
    family = [rarefied_f(3, 0, (260 * 4**i + 1) // 3) == 55 * 3**i for i in range(8)]
    report.add("f((260*4^i+1)/3) = 55*3^i", all(family), "i <= 7", None if all(family) else f"i={family.index(False)}")
    e = exponent(4, 3)
    limsup = 55 / (260 / 3) ** e
    liminf = 2 / 2**e
    report.add("limsup constant", abs(limsup - LIMSUP_CONSTANT) < 1e-5, f"55/(260/3)^e = {limsup:.6f}")
    report.add("liminf constant", abs(liminf - LIMINF_CONSTANT) < 1e-4, f"2/2^e = {liminf:.6f}")
    return report


# -----------------------------
# -f_{3,1}, -f_{3,2}
# -----------------------------

def thm_f31_f32(ctx: TheoremContext) -> TheoremReport:
    report = TheoremReport(theorem="thm7", title="bounds and equality sets for -f_{3,1} and -f_{3,2}")
    runner, _ = _run_script(report, ctx.store.environment(), THM_F31_F32)
    e = exponent(4, 3)
    ns = np.arange(ctx.sweep_base4 + 1, dtype=np.int64)
    nf = ns.astype(np.float64)

    h31 = get_target("mf31").table(ns.size)
    m31 = pseudopower_array(3, 4, h31)
    _brute(report, "mf31 lower sweep", ns <= 2 * m31, ns, "n/2 <= p34(-f31(n))")
    _brute(report, "mf31 upper sweep", 2 * m31[1:] + 1 <= 3 * ns[1:], ns[1:], "p34(-f31(n)) <= (3n-1)/2")
    _set_check(report, runner, "eq31_lower", ns == 2 * m31, ns)
    _set_check(report, runner, "eq31_upper", 2 * m31 + 1 == 3 * ns, ns)
    power = h31[1:].astype(np.float64)
    real = _within((nf[1:] / 2) ** e, power) & _within(power, ((9 * nf[1:] - 3) / 4) ** e)
    _brute(report, "mf31 real-exponent sweep", real, ns[1:], "(n/2)^e <= -f31(n) <= ((9n-3)/4)^e")

    h32 = get_target("mf32").table(ns.size)
    _brute(report, "f32 nonpositive", h32 >= 0, ns, f"f32(n) <= 0 for n <= {int(ns[-1])}")
    m32 = pseudopower_array(3, 4, h32)
    _brute(report, "mf32 upper sweep", 4 * m32 <= 3 * ns + 1, ns, "p34(-f32(n)) <= (3n+1)/4")
    _set_check(report, runner, "eq32_lower", m32 == 0, ns)
    _set_check(report, runner, "eq32_upper", 4 * m32 == 3 * ns + 1, ns)
    _family_note(report, "eq32_upper at n = 4^i", _powers(4, ns.size), 4 * m32 == 3 * ns + 1, "(4^(i+1)-1)/3")
    real = _within(h32.astype(np.float64), ((9 * nf + 3) / 8) ** e)
    _brute(report, "mf32 real-exponent sweep", real, ns, "-f32(n) <= ((9n+3)/8)^e")
    return report


# -----------------------------
# f_{5,0}, f_{5,1}
# -----------------------------

def _f50_checks(report: TheoremReport, ctx: TheoremContext, env: Environment) -> None:
    runner, _ = _run_script(report, env, THM_F50)
    e = exponent(16, 5)
    ns = np.arange(ctx.sweep_base16 + 1, dtype=np.int64)
    h = get_target("f50").table(ns.size)
    m = pseudopower_array(5, 16, h)
    big = ns >= 2
    _brute(report, "f50 lower sweep", 47 * ns[big] + 140 <= 176 * m[big], ns[big], "(47n+140)/176 <= p516(f50(n)), n >= 2")
    _brute(report, "f50 upper sweep", 4 * m[big] + 11 <= 15 * ns[big], ns[big], "p516(f50(n)) <= (15n-11)/4, n >= 2")
    _set_check(report, runner, "eq50_lower", big & (176 * m == 47 * ns + 140), ns)
    _set_check(report, runner, "eq50_upper", 4 * m + 11 == 15 * ns, ns)
    nf, hf = ns[big].astype(np.float64), h[big].astype(np.float64)
    real = _within(((47 * nf + 140) / 176) ** e, hf) & _within(hf, ((225 * nf - 165) / 16) ** e)
    _brute(report, "f50 real-exponent sweep", real, ns[big], "((47n+140)/176)^e <= f50(n) <= ((225n-165)/16)^e")


def _f51_checks(report: TheoremReport, ctx: TheoremContext, env: Environment) -> None:
    runner, _ = _run_script(report, env, THM_F51)
    ns = np.arange(ctx.sweep_base16 + 1, dtype=np.int64)
    h = get_target("f51").table(ns.size)

    neg = h < 0
    w = np.zeros_like(h)
    w[neg] = pseudopower_array(5, 16, -h[neg])
    _brute(report, "negative values sweep", 2 * w[neg] + 3 <= 5 * ns[neg], ns[neg], "p516(-f51(n)) <= (5n-3)/2")
    _set_check(report, runner, "negvalues51_match", neg & (2 * w + 3 == 5 * ns), ns)

    pos = h >= 0
    p = np.zeros_like(h)
    p[pos] = pseudopower_array(5, 16, h[pos])
    guarded = pos & (ns >= 30)
    _brute(report, "positive values sweep", 3412 * p[guarded] + 463 <= 121 * ns[guarded], ns[guarded], "p516(f51(n)) <= (121n-463)/3412, n >= 30")
    _set_check(report, runner, "f51p_equal", guarded & (3412 * p + 463 == 121 * ns), ns)
    small = pos & (ns >= 2) & (ns < 30)
    over = [int(n) for n in ns[small] if 3412 * int(p[n]) + 463 > 121 * int(n)]
    report.info("small n (2 <= n < 30)", f"bound exceeded at {len(over)} of {int(small.sum())} nonnegative values", ",".join(map(str, over)) or None)

    _set_check(report, runner, "f51eq0", h == 0, ns)


def thm_f5(ctx: TheoremContext) -> TheoremReport:
    report = TheoremReport(theorem="thm9", title="bounds and equality sets for f_{5,0} and f_{5,1}")
    env = ctx.store.environment()
    _f50_checks(report, ctx, env)
    _f51_checks(report, ctx, env)
    return report


# -----------------------------
# g_{3,0}
# -----------------------------

def thm_g30(ctx: TheoremContext) -> TheoremReport:
    report = TheoremReport(theorem="thm11", title="positivity, bounds and the value-one set for g_{3,0}")
    target = get_target("g30")
    env = ctx.store.environment()
    _run_script(report, env, growth_script(target))
    runner, _ = _run_script(report, env, THM_G30)
    for found, family in (("eqg30_upper", "famg30_upper"), ("eqg30_one", "famg30_one")):
        left, right = runner.defined.get(found), runner.defined.get(family)
        same = left is not None and right is not None and equivalent(left.dfa, right.dfa)
        report.add(f"{found} family", same, f"equals {family}")

    e = exponent(4, 3)
    ns = np.arange(ctx.sweep_base4 + 1, dtype=np.int64)
    h = target.table(ns.size)
    m = pseudopower_array(3, 4, h)
    _brute(report, "positivity sweep", h[1:] > 0, ns[1:], "g(n) > 0 for n >= 1")
    _brute(report, "upper sweep", 4 * m <= 3 * ns + 2, ns, "p34(g(n)) <= (3n+2)/4")
    _set_check(report, runner, "eqg30_upper", 4 * m == 3 * ns + 2, ns)
    real = _within(h.astype(np.float64), ((9 * ns.astype(np.float64) + 6) / 8) ** e)
    _brute(report, "real-exponent sweep", real, ns, "g(n) <= ((9n+6)/8)^e")
    _set_check(report, runner, "eqg30_one", h == 1, ns)
    _family_note(report, "eqg30_one at n = 2*4^i+1", _powers(2, ns.size) + 1, h == 1, "(2*4^i+1)/3")
    return report


# -----------------------------
# Registry
# -----------------------------

TheoremCheck = Callable[[TheoremContext], TheoremReport]


def _function_check(name: str) -> TheoremCheck:
    return lambda ctx: verify_function_automaton(name, ctx)


THEOREMS: Dict[str, TheoremCheck] = {
    **{f"fn-{name}": _function_check(name) for name in ("f30", "mf31", "mf32", "f50", "f51", "g30")},
    "thm1": thm_newman,
    "thm2": thm_bnd,
    "thm3": thm_b34,
    "thm4": thm_constants,
    "thm6": thm_special_values,
    "thm7": thm_f31_f32,
    "thm9": thm_f5,
    "thm11": thm_g30,
}


def run_theorem(theorem_id: str, ctx: TheoremContext) -> TheoremReport:
    try:
        check = THEOREMS[theorem_id]
    except KeyError:
        raise KeyError(f"unknown theorem {theorem_id!r}; expected one of {', '.join(THEOREMS)} or 'all'") from None
    started = time.perf_counter()
    try:
        report = check(ctx)
    except Exception as e:
        # a raising check becomes a FAIL report
        logger.exception(f"✗ {theorem_id} raised {type(e).__name__}")
        report = TheoremReport(theorem=theorem_id, title="check did not complete")
        report.add("run", False, f"{type(e).__name__}: {e}")
    report.seconds = round(time.perf_counter() - started, 3)
    mark = "✓" if report.passed else "✗"
    logger.info(f"{mark} {theorem_id}: {report.verdict.value} ({len(report.checks)} checks, {report.seconds:.1f}s)")
    for failure in report.failures():
        logger.info(f"  ✗ {failure.name}: {failure.detail} {failure.witness or ''}")
    return report


def run_all(ctx: TheoremContext, workers: int = 1) -> List[TheoremReport]:
    ids = list(THEOREMS)
    if workers <= 1:
        return [run_theorem(t, ctx) for t in ids]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda t: run_theorem(t, ctx), ids))
