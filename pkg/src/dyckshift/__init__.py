"""Computations on the (M, N) Dyck-Motzkin shifts."""

from .approx import co_approx
from .embeddings import (PeriodicPoint, collapse, in_B, in_K, match_position, reconstruct)
from .errors import (BudgetError, InvalidInput, NoMatchError, PreconditionError,
                     ResourceError, TransportError)
from .functions import LocallyConstantFn, constant, drift_function, indicator
from .measures import (CO, Bernoulli, Markov, Pushforward, classify_measure, cylinder_prob,
                       entropy, fully_supported, integral, spec_from_json, spec_to_json,
                       transport_condition)
from .metric import WeakStarConfig, weakstar_distance
from .optimize import degenerate_fn, lambda_markov_lower, lambda_periodic, maximizer_probe
from .paths import PathSpec, build_path, path_point, verify_path
from .symbolic import (AlphabetParams, Ambient, PeriodicClass, WordClass, classify,
                       count_words, entropy_estimate, enumerate_words, is_admissible,
                       parse_word, periodic_admissible, reduce)

__all__ = [
    "AlphabetParams", "Ambient", "Bernoulli", "BudgetError", "CO", "InvalidInput",
    "LocallyConstantFn", "Markov", "NoMatchError", "PathSpec", "PeriodicClass",
    "PeriodicPoint", "PreconditionError", "Pushforward", "ResourceError", "TransportError",
    "WeakStarConfig", "WordClass", "build_path", "classify", "classify_measure",
    "co_approx", "collapse", "constant", "count_words", "cylinder_prob", "degenerate_fn",
    "drift_function", "entropy", "entropy_estimate", "enumerate_words", "fully_supported",
    "in_B", "in_K", "indicator", "integral", "is_admissible", "lambda_markov_lower",
    "lambda_periodic", "match_position", "maximizer_probe", "parse_word", "path_point",
    "periodic_admissible", "reconstruct", "reduce", "spec_from_json", "spec_to_json",
    "transport_condition", "verify_path", "weakstar_distance",
]
