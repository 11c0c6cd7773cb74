import itertools
import random
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from automata.dfa import (
    AutomatonError,
    Connective,
    Dfa,
    accepts,
    accepts_many,
    complement,
    dead_state,
    enumerate_tuples,
    equivalent,
    is_empty,
    is_padding_closed,
    live_states,
    minimize,
    product,
    run_word,
    same_structure,
    universal,
)
import automata.dfa as dfa_module
from automata.dfao import MorphismError, dfao_from_morphism, preimage
from automata.io import dumps, export_dot, load_automaton, loads, save_automaton
from automata.labeled import LabeledDfa, conjoin, exists, negate
from automata.nfa import determinize, project, reverse
from automata.regex import RegexError, compile_regex
from numeration.digits import NumerationSystem
from numeration.sequences import thue_morse_t

B2, B3, B4, B16 = (NumerationSystem(k) for k in (2, 3, 4, 16))
NEG5 = NumerationSystem(-5)


def random_dfa(rng: random.Random, states: int, signature, padding_closed: bool = True) -> Dfa:
    sigma = int(np.prod([s.radix for s in signature]))
    table = np.array([[rng.randrange(states) for _ in range(sigma)] for _ in range(states)])
    if padding_closed:
        table[0, 0] = 0
    accepting = np.array([rng.random() < 0.4 for _ in range(states)])
    return Dfa(tuple(signature), table, accepting)


def words(sigma: int, max_len: int):
    for length in range(max_len + 1):
        yield from itertools.product(range(sigma), repeat=length)


def language(dfa: Dfa, max_len: int) -> set:
    return {w for w in words(dfa.alphabet_size, max_len) if dfa.accepting[run_word(dfa, w)]}


EQ4 = "([0,0]|[1,1]|[2,2]|[3,3])*"


# -----------------------------
# Boolean algebra
# -----------------------------

def test_product_with_complement_is_empty():
    a = compile_regex("(0|2)*1?", (B4,))
    assert is_empty(product(a, complement(a), Connective.AND))
    assert equivalent(product(a, a, Connective.OR), a)
    assert equivalent(a, product(a, universal((B4,), False), Connective.OR))


def test_disjoint_digit_languages():
    evens = compile_regex("(0|2)*", (B4,))
    ends_in_one = compile_regex("(0|1|2|3)*1", (B4,))
    both = product(evens, ends_in_one, Connective.AND)
    assert is_empty(both)
    assert not any(accepts(both, (n,)) for n in range(10_000))


def test_complement():
    a = compile_regex("(0|2)*1?", (B4,))
    assert equivalent(complement(complement(a)), a)
    everything = complement(universal((B4,), False))
    assert all(accepts(everything, (n,)) for n in range(100))
    c = complement(a)
    assert accepts(c, (3,)) and accepts(c, (21,))
    assert not accepts(c, (9,))
    assert is_empty(complement(universal((B4,))))


def test_signature_mismatch():
    with pytest.raises(AutomatonError):
        product(universal((B4,)), universal((B3,)), Connective.AND)


def test_random_languages_match_set_operations():
    rng = random.Random(7)
    for case in range(120):
        signature = (B2,) if case % 2 else (B3,)
        a = random_dfa(rng, rng.randint(1, 6), signature, padding_closed=False)
        b = random_dfa(rng, rng.randint(1, 6), signature, padding_closed=False)
        max_len = 6 if signature == (B2,) else 5
        la, lb = language(a, max_len), language(b, max_len)
        assert language(minimize(a), max_len) == la
        assert language(product(a, b, Connective.AND), max_len) == la & lb
        assert language(product(a, b, Connective.OR), max_len) == la | lb
        assert language(product(a, b, Connective.XOR), max_len) == la ^ lb
        all_words = set(words(a.alphabet_size, max_len))
        assert language(complement(a), max_len) == all_words - la


def test_minimize_is_canonical_under_state_scrambling():
    rng = random.Random(11)
    for _ in range(100):
        a = random_dfa(rng, rng.randint(2, 8), (B2, B3))
        m = minimize(a)
        perm = [0] + rng.sample(range(1, a.num_states), a.num_states - 1)
        inv = np.argsort(perm)
        scrambled = Dfa(a.signature, inv[a.table[perm]], a.accepting[perm])
        assert same_structure(minimize(scrambled), m)
        assert minimize(m).num_states == m.num_states


def test_reverse_twice_preserves_language():
    rng = random.Random(3)
    for _ in range(50):
        a = random_dfa(rng, rng.randint(1, 6), (B2,), padding_closed=False)
        back = determinize(reverse(reverse(a)))
        assert equivalent(back, a)


def test_padding_closure_of_constructions():
    rng = random.Random(5)
    for _ in range(100):
        a = random_dfa(rng, rng.randint(1, 6), (B2, B2))
        b = random_dfa(rng, rng.randint(1, 6), (B2, B2))
        assert is_padding_closed(product(a, b, Connective.AND))
        assert is_padding_closed(complement(minimize(a)))
        assert is_padding_closed(project(a, 1))


# -----------------------------
# Projection
# -----------------------------

def test_project_equality_is_universal():
    eq = compile_regex(EQ4, (B4, B4))
    assert equivalent(project(eq, 0), universal((B4,)))
    assert equivalent(project(eq, 1), universal((B4,)))
    assert is_empty(project(universal((B4, B4), False), 1))


def test_project_matches_witness_search():
    rng = random.Random(13)
    ys = np.arange(2**10)
    for _ in range(100):
        r = random_dfa(rng, 5, (B2, B2))
        p = project(r, 1)
        for n in range(32):
            brute = bool(accepts_many(r, [np.full(ys.size, n), ys]).any())
            assert accepts(p, (n,)) == brute


def test_projection_uses_witnesses_longer_than_the_free_track():
    # x = 0 and y a power of 4: the witness for x = 0 is longer than x's empty word
    r = compile_regex("[0,0]*[0,1][0,0]*", (B4, B4))
    xs = project(r, 1)
    assert accepts(xs, (0,)) and not accepts(xs, (1,))
    ys = project(r, 0)
    assert accepts(ys, (16,)) and not accepts(ys, (2,))


# -----------------------------
# Running and enumeration
# -----------------------------

def test_accepts_examples():
    eq = compile_regex(EQ4, (B4, B4))
    assert accepts(eq, (7, 7))
    assert not accepts(eq, (7, 8))
    with pytest.raises(ValueError):
        accepts(eq, (-1, 2))


def test_accepts_many_matches_accepts():
    rng = random.Random(17)
    a = random_dfa(rng, 6, (B4, NEG5))
    ns = np.arange(200)
    ys = np.array([rng.randint(-200, 200) for _ in range(200)])
    fast = accepts_many(a, [ns, ys])
    assert [bool(v) for v in fast] == [accepts(a, (int(n), int(y))) for n, y in zip(ns, ys)]
    padded = accepts_many(a, [ns, ys], pad=1)
    assert np.array_equal(padded, fast)


def test_accepts_many_in_blocks(monkeypatch):
    rng = random.Random(23)
    a = random_dfa(rng, 5, (B4, NEG5))
    ns = np.arange(100)
    ys = np.array([rng.randint(-100, 100) for _ in range(100)])
    whole = accepts_many(a, [ns, ys])
    monkeypatch.setattr(dfa_module, "ACCEPT_CHUNK", 7)
    assert np.array_equal(accepts_many(a, [ns, ys]), whole)
    assert np.array_equal(accepts_many(a, [ns, ys], pad=2), whole)


def test_enumerate():
    assert enumerate_tuples(compile_regex("2*3", (B4,)), 3) == [(3,), (11,), (43,)]
    assert enumerate_tuples(universal((B4,), False), 4) == []
    power43 = compile_regex("[0,0]*[1,1][0,0]*", (B4, B3))
    assert enumerate_tuples(power43, 3) == [(1, 1), (4, 3), (16, 9)]


def test_dead_and_live_states():
    power43 = compile_regex("[0,0]*[1,1][0,0]*", (B4, B3))
    assert power43.num_states == 3
    assert dead_state(power43) is not None
    assert live_states(power43) == 2
    assert live_states(universal((B4,))) == 1


# -----------------------------
# Regular expressions
# -----------------------------

def test_regex_examples():
    p34 = compile_regex("([0,0]|[1,1]|[2,2])*", (B3, B4))
    assert accepts(p34, (5, 6))
    assert not accepts(p34, (5, 5))
    power43 = compile_regex("[0,0]*[1,1][0,0]*", (B4, B3))
    assert accepts(power43, (16, 9))
    assert not accepts(power43, (16, 3))
    single = compile_regex("1[12]7", (B16,))
    assert enumerate_tuples(single, 3) == [(455,)]
    assert enumerate_tuples(compile_regex("1|2*3", (B4,)), 2) == [(1,), (3,), (11,)]
    assert accepts(compile_regex("(|1)", (B4,)), (0,))


def test_regex_errors():
    with pytest.raises(RegexError):
        compile_regex("([0,0]", (B3, B4))
    with pytest.raises(RegexError):
        compile_regex("[4,0]", (B3, B4))
    with pytest.raises(RegexError):
        compile_regex("01", (B3, B4))
    with pytest.raises(RegexError):
        compile_regex("[0,1,2]", (B3, B4))


# -----------------------------
# Sequences
# -----------------------------

def test_thue_morse_morphisms():
    tm4 = dfao_from_morphism("0->0110 1->1001")
    assert tm4.system == B4
    assert tm4.value(21) == 1
    assert tm4.value(0) == 0
    tm16 = dfao_from_morphism("0->0110100110010110 1->1001011001101001")
    ns = np.arange(100_001)
    expected = np.array([thue_morse_t(int(n)) for n in ns])
    assert np.array_equal(tm16.values(ns), expected)
    promoted = dfao_from_morphism("0->01 1->10", promote_width=16)
    assert np.array_equal(promoted.values(ns[:5000]), expected[:5000])


def test_morphism_errors():
    with pytest.raises(MorphismError):
        dfao_from_morphism("0->01 1->100")
    with pytest.raises(MorphismError):
        dfao_from_morphism("0->10 1->01")
    with pytest.raises(MorphismError):
        dfao_from_morphism("0->01 1->10", promote_width=8 + 1)


def test_preimage():
    tm4 = dfao_from_morphism("0->0110 1->1001")
    ones = preimage(tm4, 1)
    assert [n for n in range(30) if accepts(ones, (n,))] == [n for n in range(30) if thue_morse_t(n)]


# -----------------------------
# Labeled tracks
# -----------------------------

def test_labeled_alignment_and_quantifiers():
    eq = LabeledDfa(compile_regex(EQ4, (B4, B4)), ("x", "y"))
    eq_yz = eq.rename({"x": "y", "y": "z"})
    both = conjoin(eq, eq_yz)
    assert both.variables == ("x", "y", "z")
    xz = exists(both, "y")
    assert xz.variables == ("x", "z")
    assert accepts(xz.dfa, (9, 9)) and not accepts(xz.dfa, (9, 8))
    assert accepts(negate(xz).dfa, (9, 8))
    swapped = LabeledDfa(compile_regex("[0,0]*[1,1][0,0]*", (B4, B3)), ("b", "a")).reorder(("a", "b"))
    assert accepts(swapped.dfa, (9, 16))


def test_labeled_rejects_mixed_systems():
    x4 = LabeledDfa(universal((B4,)), ("x",))
    x3 = LabeledDfa(universal((B3,)), ("x",))
    with pytest.raises(AutomatonError):
        conjoin(x4, x3)


# -----------------------------
# Serialisation
# -----------------------------

def test_text_round_trip(tmp_path):
    rng = random.Random(23)
    for i in range(30):
        a = minimize(random_dfa(rng, rng.randint(1, 7), (B4, NEG5)))
        assert same_structure(loads(dumps(a)), a)
        path = tmp_path / f"a{i}.txt"
        save_automaton(a, path)
        assert same_structure(load_automaton(path), a)


def test_text_format_omits_dead_state():
    power43 = compile_regex("[0,0]*[1,1][0,0]*", (B4, B3))
    text = dumps(power43)
    assert text.splitlines()[0] == "4 3"
    assert sum(1 for line in text.splitlines() if line.startswith("state")) == 2


def test_dot_export():
    source = export_dot(universal((B4,)))
    assert source.count("->") == 2
    assert "0,1,2,3" in source
    p34 = compile_regex("([0,0]|[1,1]|[2,2])*", (B3, B4))
    assert export_dot(p34) == export_dot(p34)
    tm4 = dfao_from_morphism("0->0110 1->1001")
    assert "0/0" in export_dot(tm4) and "1/1" in export_dot(tm4)
