"""Target pairs, independence checking, search, pair types, lemma checks and bounds."""

from .bounds import BoundReport, TypeGraph, bound_experiment, build_type_graph
from .check import (INDEPENDENT, NOT_WITNESSED, PreconditionError, Verdict, Witness,
                    check_pattern, is_independence_set, validate_verdict, validate_witness)
from .classify import (TYPE_BOUNDS, TYPES, ClassificationError, PairTypeMatch, Prediction,
                       classify_pair, classify_t, predict_membership, prediction_experiment)
from .lemmas import LEMMAS, LemmaBudget, LemmaReport, verify_lemma
from .ramsey import FINAL_BOUND_ARGS, ramsey_upper, ramsey_upper_recursive
from .sampling import PairSampler
from .search import SearchResult, free_pair_differences, search_max
from .targets import FREE, GENERIC, MODES, RF, Block, TargetPair

__all__ = [
    "BoundReport", "TypeGraph", "bound_experiment", "build_type_graph",
    "INDEPENDENT", "NOT_WITNESSED", "PreconditionError", "Verdict", "Witness",
    "check_pattern", "is_independence_set", "validate_verdict", "validate_witness",
    "TYPE_BOUNDS", "TYPES", "ClassificationError", "PairTypeMatch", "Prediction",
    "classify_pair", "classify_t", "predict_membership", "prediction_experiment",
    "LEMMAS", "LemmaBudget", "LemmaReport", "verify_lemma",
    "FINAL_BOUND_ARGS", "ramsey_upper", "ramsey_upper_recursive",
    "PairSampler", "SearchResult", "free_pair_differences", "search_max",
    "FREE", "GENERIC", "MODES", "RF", "Block", "TargetPair",
]
