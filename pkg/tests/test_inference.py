import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from automata.dfa import accepts, accepts_many, live_states
from graph import InferenceConfig, VerificationFailed, infer_and_verify, run_inference
from inference import (
    InferenceError,
    LearnerConfig,
    SampleTooSmall,
    build_samples,
    default_depth,
    guess_dfa,
    identity_oracle,
    inconsistencies,
    rarefied_oracle,
    zero_oracle,
)
from logic import Environment
from theorems import get_target, prelude_environment
from theorems.scripts import verification_script
from numeration.digits import NumerationSystem

B3, B4, B5, B16 = (NumerationSystem(k) for k in (3, 4, 5, 16))
NEG5 = NumerationSystem(-5)

ZERO_VERIFIER = 'eval zero_value "An $zero(n,0)":\neval zero_unique "~En,y $zero(n,y) & y!=0":\n'


# -----------------------------
# Samples
# -----------------------------

def test_f30_positives():
    samples = build_samples(rarefied_oracle(3, 0), (B4, B3), 4)
    ns, ys = samples.positives()
    assert list(zip(ns.tolist(), ys.tolist())) == [(0, 0), (1, 1), (2, 2), (3, 3), (4, 4)]


def test_negated_f31_positives():
    samples = build_samples(rarefied_oracle(3, 1, sign=-1), (B4, B3), 2)
    assert samples.values.tolist() == [0, 1, 2]


def test_single_sample():
    samples = build_samples(rarefied_oracle(3, 0), (B4, B3), 0)
    assert samples.n_max == 0
    assert samples.values.tolist() == [0]


def test_negatives_exclude_true_values():
    samples = build_samples(rarefied_oracle(3, 0), (B4, B3), 200)
    n, y = samples.negatives[:, 0], samples.negatives[:, 1]
    assert (y != samples.values[n]).all()
    assert (y >= 0).all()
    assert set(n.tolist()) == set(range(201))


def test_negative_base_keeps_negative_candidates():
    samples = build_samples(rarefied_oracle(5, 1), (B16, NEG5), 100)
    assert (samples.negatives[:, 1] < 0).any()


def test_unrepresentable_value():
    with pytest.raises(InferenceError, match="not representable"):
        build_samples(rarefied_oracle(5, 1), (B16, B5), 4)


@pytest.mark.parametrize("signature", [(B4,), (B4, B3, B3), (NEG5, B3)])
def test_bad_signatures(signature):
    with pytest.raises(InferenceError):
        build_samples(identity_oracle, signature, 10)


# -----------------------------
# Learner
# -----------------------------

def test_identity_automaton():
    samples = build_samples(identity_oracle, (B4, B4), 255)
    hypothesis = guess_dfa(samples)
    assert hypothesis.states <= 2
    assert inconsistencies(hypothesis.dfa, samples) == 0
    assert accepts(hypothesis.dfa, (1000, 1000))
    assert not accepts(hypothesis.dfa, (5, 6))


def test_zero_automaton():
    samples = build_samples(zero_oracle, (B4, B4), 255)
    hypothesis = guess_dfa(samples)
    assert live_states(hypothesis.dfa) == 1
    ns = np.arange(5000)
    assert accepts_many(hypothesis.dfa, [ns, np.zeros_like(ns)]).all()
    assert not accepts_many(hypothesis.dfa, [ns, np.ones_like(ns)]).any()


def test_default_depth():
    samples = build_samples(zero_oracle, (B4, B4), 4**6 + 100)
    assert default_depth(samples) == 3


def test_depth_beyond_sample():
    samples = build_samples(zero_oracle, (B4, B4), 15)
    with pytest.raises(SampleTooSmall):
        guess_dfa(samples, LearnerConfig(suffix_depth=4))


def test_f30_hypothesis_is_consistent():
    samples = build_samples(rarefied_oracle(3, 0), (B4, B3), 4**6)
    hypothesis = guess_dfa(samples)
    assert inconsistencies(hypothesis.dfa, samples) == 0
    assert hypothesis.sample_size == 4**6


# -----------------------------
# Guess / verify loop
# -----------------------------

def test_infer_zero():
    dfa = infer_and_verify("zero", zero_oracle, (B4, B4), ZERO_VERIFIER, Environment(), InferenceConfig(start=64))
    assert live_states(dfa) == 1
    assert accepts(dfa, (123, 0))


def test_infer_identity():
    verifier = 'eval id_total "An Ey $id(n,y)":\neval id_graph "An $id(n,n)":\n'
    dfa = infer_and_verify("id", identity_oracle, (B4, B4), verifier, Environment(), InferenceConfig(start=64))
    assert accepts(dfa, (77, 77))
    assert not accepts(dfa, (77, 76))


def test_loop_grows_small_samples():
    config = InferenceConfig(start=16, learner=LearnerConfig(suffix_depth=5))
    final = run_inference("zero", zero_oracle, (B4, B4), ZERO_VERIFIER, Environment(), config)
    assert final["status"] == "verified"
    outcomes = [a["outcome"] for a in final["attempts"]]
    assert outcomes[0] == "sample too small"
    assert outcomes[-1] == "verified"
    assert final["n_max"] >= 4**5 - 1


def test_loop_reports_failed_check():
    never = 'eval never "En $zero(n,1)":\n'
    config = InferenceConfig(start=64, ceiling=256)
    with pytest.raises(VerificationFailed, match="never") as info:
        infer_and_verify("zero", zero_oracle, (B4, B4), never, Environment(), config)
    assert info.value.n_max == 256


def test_f51_verifies_within_default_ceiling():
    target = get_target("f51")
    config = InferenceConfig()
    final = run_inference("f51", target.oracle, target.signature, verification_script(target), prelude_environment(), config)
    assert final["status"] == "verified", final.get("reason")
    assert final["n_max"] <= config.ceiling == 2**20
    assert live_states(final["hypothesis"].dfa) == target.states
