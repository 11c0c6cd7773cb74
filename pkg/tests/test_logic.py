import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from automata.dfa import accepts, accepts_many, equivalent, is_empty, universal
from logic import (
    CommandKind,
    CompileError,
    CompileOptions,
    Environment,
    ParseError,
    ScriptRunner,
    compile_formula,
    eval_closed,
    evaluate,
    parse,
    parse_formula,
    run_source,
    satisfying,
)
from logic.ast import And, Annotated, Call, Comparison, Exists, Forall, Implies, Not, Or, Term
from numeration.digits import NumerationSystem
from numeration.pseudopower import pseudopower_array
from numeration.sequences import parity_table
from relations import Relop, comparison_relation

B3, B4, B10, B16 = (NumerationSystem(k) for k in (3, 4, 10, 16))
NEG5 = NumerationSystem(-5)

SETUP = """
reg p34 msd_3 msd_4 "([0,0]|[1,1]|[2,2])*":
morphism tm4 "0->0110 1->1001":
promote TM4 tm4:
"""


@pytest.fixture(scope="module")
def env() -> Environment:
    runner = ScriptRunner()
    report = runner.run(parse(SETUP))
    assert report.ok, report.lines()
    return runner.env.with_automaton("nat3", universal((B3,), True))


def compiled_set(text: str, env: Environment, bound: int):
    labeled = compile_formula(parse_formula(text), env)
    axes = [np.arange(bound + 1)] * len(labeled.variables)
    columns = [g.reshape(-1) for g in np.meshgrid(*axes, indexing="ij")]
    ok = accepts_many(labeled.dfa, columns)
    return {tuple(int(c[i]) for c in columns) for i in np.flatnonzero(ok)}


# -----------------------------
# Parsing
# -----------------------------

def test_parse_quantified_call():
    f = parse_formula("An Ey $f30(n,y)")
    assert f == Forall(("n",), Exists(("y",), Call("f30", (Term.variable("n"), Term.variable("y")))))


def test_parse_precedence():
    f = parse_formula("a=1 | b=1 & c=1")
    assert isinstance(f, Or) and isinstance(f.right, And)
    g = parse_formula("a=1 => b=1 => c=1")
    assert isinstance(g, Implies) and isinstance(g.right, Implies)
    h = parse_formula("~a=1 & b=1")
    assert isinstance(h, And) and isinstance(h.left, Not)


def test_annotation_scoping():
    lead = parse_formula("?msd_4 x=1 & y=2")
    assert isinstance(lead, Annotated) and lead.system == B4
    inner = parse_formula("x=1 & ?msd_3 y>0")
    assert isinstance(inner, And)
    assert isinstance(inner.left, Comparison)
    assert inner.right == Annotated(B3, Comparison(Term.variable("y"), Relop.GT, Term.const(0)))


def test_parse_annotated_arguments():
    f = parse_formula("$conv55((?msd_neg_5 _x),?msd_5 y)")
    x, y = f.args
    assert x == Term.of({"x": -1}, 0, NEG5)
    assert y.system == NumerationSystem(5)
    g = parse_formula("TM4[3*n+1]=@0")
    assert g.index == Term.of({"n": 3}, 1)


def test_parse_script_commands():
    script = parse(SETUP + 'eval t "An Ey $f30(n,y)":  # comment\n')
    assert [c.kind for c in script.commands] == [
        CommandKind.REG,
        CommandKind.MORPHISM,
        CommandKind.PROMOTE,
        CommandKind.EVAL,
    ]
    assert script.commands[0].systems == (B3, B4)
    assert script.commands[2].target == "tm4"


def test_def_holding_a_morphism_becomes_a_morphism():
    script = parse('def tm4 "0->0110 1->1001":')
    assert script.commands[0].kind is CommandKind.MORPHISM


def test_def_morphism_can_be_promoted():
    report = run_source('def tm "0->0110 1->1001":\npromote TM tm:\neval t3 "?msd_4 TM[3]=@0":\n')
    assert report.ok, report.lines()
    assert report.verdicts() == {"t3": True}


def test_def_with_comparison_stays_a_formula():
    script = parse('def gt "?msd_4 x>y":')
    assert script.commands[0].kind is CommandKind.DEF


def test_empty_input():
    assert len(parse("")) == 0
    assert len(parse("  # nothing here\n")) == 0
    assert run_source("").results == []


def test_parse_errors_carry_location():
    with pytest.raises(ParseError) as e:
        parse('def a "x=1":\neval b "x < ":')
    assert e.value.line == 2
    with pytest.raises(ParseError) as e:
        parse("frobnicate x:")
    assert (e.value.line, e.value.column) == (1, 1)
    with pytest.raises(ParseError):
        parse('eval a "x=1"')


# -----------------------------
# Compilation
# -----------------------------

def test_eval_on_naturals(env):
    assert eval_closed(parse_formula("En n<0"), env) is False
    assert eval_closed(parse_formula("An n>=0"), env) is True
    assert eval_closed(parse_formula("?msd_neg_5 Ex x<0"), env) is True


def test_contradiction_compiles_to_empty(env):
    labeled = compile_formula(parse_formula("?msd_4 n>=1 & n<1"), env)
    assert labeled.variables == ("n",)
    assert is_empty(labeled.dfa)


def test_double_negation(env):
    plain = compile_formula(parse_formula("?msd_4 x<y+2"), env)
    for options in (None, CompileOptions(simplify=False)):
        twice = compile_formula(parse_formula("?msd_4 ~~x<y+2"), env, options)
        assert equivalent(twice.dfa, plain.dfa)


def test_quantifier_order(env):
    xy = compile_formula(parse_formula("?msd_4 Ex Ey x+y=z & x<y & TM4[x]=@1"), env)
    yx = compile_formula(parse_formula("?msd_4 Ey Ex x+y=z & x<y & TM4[x]=@1"), env)
    assert equivalent(xy.dfa, yx.dfa)


def test_annotation_matches_declared_variable(env):
    annotated = compile_formula(parse_formula("?msd_3 y>0"), env)
    declared = compile_formula(parse_formula("$nat3(y) & y>0"), env)
    assert annotated.dfa.signature == (B3,)
    assert equivalent(annotated.dfa, declared.dfa)
    assert compile_formula(parse_formula("y>0"), env).dfa.signature == (B10,)


def test_def_tracks_are_sorted(env):
    labeled = compile_formula(parse_formula("$p34(y,x)"), env)
    assert labeled.variables == ("x", "y")
    assert labeled.dfa.signature == (B4, B3)


def test_compile_errors(env):
    with pytest.raises(CompileError):
        compile_formula(parse_formula("$p34(x,y) & ?msd_4 x=y"), env)
    with pytest.raises(CompileError):
        compile_formula(parse_formula("$p34(x)"), env)
    with pytest.raises(CompileError):
        compile_formula(parse_formula("$nope(x)"), env)
    with pytest.raises(CompileError):
        eval_closed(parse_formula("?msd_4 x=1"), env)


def test_sequence_index_with_term(env):
    labeled = compile_formula(parse_formula("TM4[3*n]=@0"), env)
    ns = np.arange(20_001)
    assert labeled.dfa.signature == (B4,)
    assert np.array_equal(accepts_many(labeled.dfa, [ns]), parity_table(3 * ns, "t") == 0)


def test_constant_argument(env):
    labeled = compile_formula(parse_formula("$p34(x, 4)"), env)
    assert accepts(labeled.dfa, (3,))
    assert not accepts(labeled.dfa, (4,))
    xs = np.arange(3_001)
    got = np.flatnonzero(accepts_many(labeled.dfa, [xs]))
    assert list(got) == [3]


def test_pseudopower_definition(env):
    labeled = compile_formula(parse_formula("?msd_3 Ex $p34(x,n) & x<=40"), env)
    ns = np.arange(5_001)
    expected = np.isin(ns, pseudopower_array(3, 4, np.arange(41)))
    assert np.array_equal(accepts_many(labeled.dfa, [ns]), expected)


# -----------------------------
# Linear definitions
# -----------------------------

MULT_CHAIN = """
def mult2 "?msd_16 x=2*y":
def mult3 "?msd_16 x=3*y":
def mult4 "?msd_16 Ez $mult2(x,z) & $mult2(z,y)":
def mult12 "?msd_16 Ez $mult3(x,z) & $mult4(z,y)":
def mult13 "?msd_16 Ez x=y+z & $mult12(z,y)":
def mult52 "?msd_16 Ez $mult4(x,z) & $mult13(z,y)":
def mult53 "?msd_16 Ez x=y+z & $mult52(z,y)":
def mult212 "?msd_16 Ez $mult4(x,z) & $mult53(z,y)":
def mult213 "?msd_16 Ez x=y+z & $mult212(z,y)":
def mult852 "?msd_16 Ez $mult4(x,z) & $mult213(z,y)":
def mult853 "?msd_16 Ez x=y+z & $mult852(z,y)":
def mult3412 "?msd_16 Ez $mult4(x,z) & $mult853(z,y)":
"""


def test_multiplication_chain_reduces_to_equations():
    runner = ScriptRunner()
    report = runner.run(parse(MULT_CHAIN))
    assert report.ok, report.lines()
    assert all(r.linear is not None for r in report.results)
    linear = runner.env.definition("mult3412").linear
    assert linear.params == ("x", "y")
    assert linear.comparison.linear() == ({"x": 1, "y": -3412}, 0)
    expected = comparison_relation([1, -3412], 0, B16, Relop.EQ)
    assert equivalent(runner.env.automaton("mult3412"), expected)
    assert accepts(runner.env.automaton("mult13"), (13 * 77, 77))


def test_inlined_definition_keeps_argument_domain():
    runner = ScriptRunner()
    report = runner.run(parse('def e "?msd_4 x=y":\ndef g "?msd_4 $e(x-5, y-5)":'))
    assert report.ok, report.lines()
    g = runner.env.automaton("g")
    assert accepts(g, (6, 6))
    assert not accepts(g, (3, 3))
    assert not accepts(g, (6, 7))
    lowered = compile_formula(parse_formula("?msd_4 $e(x-5, y-5)"), runner.env, CompileOptions(simplify=False))
    assert equivalent(lowered.dfa, g)


# -----------------------------
# Scripts
# -----------------------------

def test_script_report_collects_errors_and_continues():
    report = run_source(
        SETUP
        + """
eval a "?msd_4 An TM4[n]=@0 | TM4[n]=@1":
eval b "?msd_4 En TM4[n]=@0 & TM4[n]=@1":
eval bad "Ex $missing(x)":
eval open "?msd_4 x=1":
eval c "An n>=0":
"""
    )
    assert not report.ok
    assert report.verdicts() == {"a": True, "b": False, "c": True}
    assert "unbound" in report.result("bad").error
    assert "free variables" in report.result("open").error
    assert report.result("TM4").states == 2


def test_duplicate_names_are_rejected():
    report = run_source(SETUP + 'reg p34 msd_3 msd_4 "[0,0]*":')
    assert "already defined" in report.results[-1].error


def test_save_and_load(tmp_path):
    runner = ScriptRunner(base_dir=tmp_path)
    report = runner.run(
        parse(
            SETUP
            + """
save p34 "p34.txt":
load q34 "p34.txt":
save TM4 "tm4.txt":
eval same "Ax,m $p34(x,m) <=> $q34(x,m)":
"""
        )
    )
    assert report.ok, report.lines()
    assert report.verdicts() == {"same": True}
    assert (tmp_path / "p34.txt").exists()
    assert (tmp_path / "tm4.txt").exists()


def test_def_reports_live_states(env):
    runner = ScriptRunner(env)
    result = runner.execute(parse('def evens "?msd_4 Em n=2*m":').commands[0])
    assert result.ok
    assert result.variables == ["n"]
    # last digit even, and the empty word for 0
    assert result.states == 2


# -----------------------------
# Brute-force agreement
# -----------------------------

@pytest.mark.parametrize(
    "text",
    [
        "?msd_4 Ez x=y+z & TM4[z]=@0",
        "?msd_4 x<=2*y+1 & TM4[x+y]=@1",
        "?msd_4 Ex $p34(x,n) & ?msd_3 x<=m",
        "?msd_4 Ez z<=x & 2*z=y",
    ],
)
def test_compiled_matches_brute_force(env, text):
    bound = 40
    assert compiled_set(text, env, bound) == set(satisfying(parse_formula(text), env, bound))


def test_brute_force_evaluate(env):
    assert evaluate(parse_formula("?msd_4 An n>=0"), env, bound=30)
    assert not evaluate(parse_formula("?msd_4 En TM4[n]=@0 & TM4[n]=@1"), env, bound=30)
    assert evaluate(parse_formula("TM4[n]=@1"), env, {"n": 21})
