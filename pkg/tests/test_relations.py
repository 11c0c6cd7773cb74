import random
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from automata.dfa import accepts, accepts_many, equivalent
from numeration.digits import NumerationError, NumerationSystem
from numeration.pseudopower import pseudopower_array
from numeration.sequences import parity_table
from relations import (
    RelationKind,
    RelationSpec,
    Relop,
    add_relation,
    build_relation,
    comparison_relation,
    const_mult_relation,
    digit_copy_relation,
    eq_relation,
    lt_relation,
    multiplication_chain,
    neg_to_pos_max0,
    power_pairs_relation,
    r_dfao_base4,
    sign_relation,
    tm_dfao,
)
from relations.arithmetic import BASE16_CHAIN_3412

SYSTEMS = [NumerationSystem(b) for b in (4, 3, 16, 5, -5, -2)]
B4, B16, NEG2, NEG5 = (NumerationSystem(b) for b in (4, 16, -2, -5))


def value_range(system: NumerationSystem, bound: int) -> np.ndarray:
    return np.arange(-bound if system.is_negative else 0, bound + 1)


def grid(system: NumerationSystem, bound: int):
    vals = value_range(system, bound)
    xs, ys = np.meshgrid(vals, vals, indexing="ij")
    return xs.reshape(-1), ys.reshape(-1)


# -----------------------------
# Equality and order
# -----------------------------

@pytest.mark.parametrize("system", SYSTEMS, ids=lambda s: s.label)
def test_eq_and_lt_sweep(system):
    xs, ys = grid(system, 500)
    assert np.array_equal(accepts_many(eq_relation(system), [xs, ys]), xs == ys)
    assert np.array_equal(accepts_many(lt_relation(system), [xs, ys]), xs < ys)


def test_order_examples():
    assert accepts(lt_relation(B4), (3, 11))
    assert accepts(lt_relation(NEG5), (-3, 2))
    assert accepts(eq_relation(NEG5), (-3, -3))
    ns = np.arange(10_001)
    assert not accepts_many(lt_relation(B4), [ns, ns]).any()


@pytest.mark.parametrize("system", [NEG5, NEG2], ids=lambda s: s.label)
def test_negative_base_order_two_ways(system):
    # the addition-based order and the direct linear automaton agree
    assert equivalent(lt_relation(system), comparison_relation([1, -1], 0, system, Relop.LT))


def test_comparisons_match_integer_arithmetic():
    rng = random.Random(19)
    for case in range(60):
        system = SYSTEMS[case % len(SYSTEMS)]
        coefficients = [rng.randint(-7, 7) for _ in range(2)]
        constant = rng.randint(-30, 30)
        relop = rng.choice(list(Relop))
        xs, ys = grid(system, 60)
        got = accepts_many(comparison_relation(coefficients, constant, system, relop), [xs, ys])
        lhs = coefficients[0] * xs + coefficients[1] * ys
        expected = np.array([relop.holds(int(v), constant) for v in lhs])
        assert np.array_equal(got, expected), (system.label, coefficients, relop.value, constant)


def test_sign_relation():
    vals = value_range(NEG5, 300)
    assert np.array_equal(accepts_many(sign_relation(NEG5, Relop.GT), [vals]), vals > 0)
    assert np.array_equal(accepts_many(sign_relation(NEG5, Relop.LT), [vals]), vals < 0)
    assert accepts(comparison_relation([], 0, B4, Relop.LE), ())


# -----------------------------
# Addition
# -----------------------------

@pytest.mark.parametrize("system", SYSTEMS, ids=lambda s: s.label)
def test_add_sweep(system):
    xs, ys = grid(system, 200)
    add = add_relation(system)
    assert accepts_many(add, [xs, ys, xs + ys]).all()
    assert not accepts_many(add, [xs, ys, xs + ys + 1]).any()
    assert equivalent(add, comparison_relation([1, 1, -1], 0, system, Relop.EQ))


def test_add_examples():
    assert accepts(add_relation(B4), (1, 1, 2))
    assert accepts(add_relation(NEG2), (3, -1, 2))
    ns = np.arange(10_001)
    assert accepts_many(add_relation(B4), [np.zeros_like(ns), ns, ns]).all()


# -----------------------------
# Constant multiplication
# -----------------------------

def test_multiplication_chain_shapes():
    assert multiplication_chain(3412, B16) == BASE16_CHAIN_3412
    for c in (2, 3, 7, 12, 260):
        m = 1
        for step in multiplication_chain(c, B4):
            m = m + 1 if step[0] == "succ" else step[1] * step[2]
        assert m == c


@pytest.mark.parametrize("c,system", [(1, B4), (2, B4), (3, B4), (13, B4), (3, NEG5), (6, NumerationSystem(3))])
def test_const_mult_matches_direct_relation(c, system):
    mult = const_mult_relation(c, system)
    assert equivalent(mult, comparison_relation([1, -c], 0, system, Relop.EQ))
    ys = value_range(system, 100_000 // c)
    assert accepts_many(mult, [c * ys, ys]).all()


def test_const_mult_examples():
    assert equivalent(const_mult_relation(1, B4), eq_relation(B4))
    assert accepts(const_mult_relation(3, B4), (261, 87))
    assert not accepts(const_mult_relation(3, B4), (262, 87))


def test_const_mult_3412_in_base_16():
    mult = const_mult_relation(3412, B16)
    assert accepts(mult, (3412, 1))
    assert equivalent(mult, comparison_relation([1, -3412], 0, B16, Relop.EQ))


# -----------------------------
# Cross-base relations
# -----------------------------

@pytest.mark.parametrize("a,b", [(3, 4), (5, 16), (2, 3), (4, 4)])
def test_digit_copy_agrees_with_pseudopower(a, b):
    xs = np.arange(100_001)
    copy = digit_copy_relation(a, b)
    ps = pseudopower_array(a, b, xs)
    assert accepts_many(copy, [xs, ps]).all()
    assert not accepts_many(copy, [xs, ps + 1]).any()


def test_digit_copy_examples():
    assert accepts(digit_copy_relation(3, 4), (0, 0))
    assert accepts(digit_copy_relation(3, 4), (5, 6))
    assert accepts(digit_copy_relation(5, 16), (5, 16))
    with pytest.raises(NumerationError):
        digit_copy_relation(4, 3)


def test_power_pairs():
    p43 = power_pairs_relation(4, 3)
    for pair in [(1, 1), (4, 3), (16, 9)]:
        assert accepts(p43, pair)
    assert not accepts(p43, (4, 9))


@pytest.mark.parametrize("k", [5, 2, 3])
def test_neg_to_pos_max0(k):
    ns = np.arange(-10_000, 10_001)
    relation = neg_to_pos_max0(k)
    clamp = np.maximum(ns, 0)
    assert accepts_many(relation, [ns, clamp]).all()
    assert not accepts_many(relation, [ns, clamp + 1]).any()


def test_neg_to_pos_examples():
    relation = neg_to_pos_max0(5)
    assert accepts(relation, (-3, 0))
    assert accepts(relation, (15, 15))
    assert accepts(relation, (0, 0))
    assert not accepts(relation, (-3, 3))


# -----------------------------
# Sequence automata
# -----------------------------

def test_tm_dfao():
    tm4 = tm_dfao(4)
    assert tm4.value(21) == 1
    assert tm4.value(0) == 0
    ns = np.arange(100_001)
    assert np.array_equal(tm_dfao(16).values(ns), parity_table(ns, "t"))


def test_r_dfao():
    r4 = r_dfao_base4()
    assert r4.num_states == 3
    assert r4.value(0) == 0
    assert r4.value(4) == 0
    assert r4.value(2) == 1
    ns = np.arange(100_001)
    assert np.array_equal(r4.values(ns), parity_table(ns, "r"))


# -----------------------------
# Cache
# -----------------------------

def test_build_relation_is_memoised():
    spec = RelationSpec(RelationKind.CONST_MULT, (4,), 3)
    assert build_relation(spec) is build_relation(RelationSpec("const_mult", (4,), 3))
    assert accepts(build_relation(spec), (261, 87))
    assert accepts(build_relation(RelationSpec(RelationKind.NEG_TO_POS_MAX0, (-5, 5))), (15, 15))
    with pytest.raises(NumerationError):
        RelationSpec(RelationKind.CONST_EQ, (4,), -1)
