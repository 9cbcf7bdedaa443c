"""Classify stochastic matrices by zero pattern, decide consensus sets, simulate left-products."""

from .classes import (
    ClassReport,
    MaxIndexReport,
    classify,
    in_class_g,
    in_class_w,
    is_doubly_stochastic,
    is_pattern_symmetric,
    is_sarymsakov,
    is_scrambling,
    is_sia,
    max_sia_index,
    sia_index,
)
from .consensus import ConsensusDecision, decide_consensus, horizons, semigroup_closure
from .construct import BreakerResult, GalleryEntry, breaker, gallery, random_in_class
from .matrix import (
    BooleanPattern,
    DisjointPair,
    IndexSet,
    StochasticMatrix,
    bool_product,
    consequent_set,
    disjoint_pairs,
    k_consequent_set,
    load_matrix,
    pattern_of,
)
from .simulate import ConvergenceReport, ScheduleSpec, bounded_gap_schedule, dobrushin, rank_one_defect, simulate

__version__ = "0.1.0"

__all__ = [
    "ClassReport",
    "MaxIndexReport",
    "classify",
    "in_class_g",
    "in_class_w",
    "is_doubly_stochastic",
    "is_pattern_symmetric",
    "is_sarymsakov",
    "is_scrambling",
    "is_sia",
    "max_sia_index",
    "sia_index",
    "ConsensusDecision",
    "decide_consensus",
    "horizons",
    "semigroup_closure",
    "BreakerResult",
    "GalleryEntry",
    "breaker",
    "gallery",
    "random_in_class",
    "BooleanPattern",
    "DisjointPair",
    "IndexSet",
    "StochasticMatrix",
    "bool_product",
    "consequent_set",
    "disjoint_pairs",
    "k_consequent_set",
    "load_matrix",
    "pattern_of",
    "ConvergenceReport",
    "ScheduleSpec",
    "bounded_gap_schedule",
    "dobrushin",
    "rank_one_defect",
    "simulate",
]
