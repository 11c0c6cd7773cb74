from inference.learner import Hypothesis, LearnerConfig, default_depth, guess_dfa
from inference.samples import (
    InferenceError,
    Oracle,
    SampleSet,
    SampleTooSmall,
    build_samples,
    identity_oracle,
    inconsistencies,
    rarefied_oracle,
    zero_oracle,
)

__all__ = [
    "Hypothesis",
    "InferenceError",
    "LearnerConfig",
    "Oracle",
    "SampleSet",
    "SampleTooSmall",
    "build_samples",
    "default_depth",
    "guess_dfa",
    "identity_oracle",
    "inconsistencies",
    "rarefied_oracle",
    "zero_oracle",
]
