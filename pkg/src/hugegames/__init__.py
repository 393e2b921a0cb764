"""Exact analysis of repeated games over finite and huge horizons."""

from .criteria import DiscountedSum, LimitOfMeans, Overtaking, PayoffModel, SimpleSum, compare, evaluate, parse_criterion
from .equilibria import StrategyFamily, exhaustive_check, verify_symbolic_spe
from .game import GameForm, backward_induction, is_nash, is_spe, move, simultaneous, spe_profiles
from .nonstd import ExtReal, NonStdNum, TAU, parse_nonstd
from .repeated import RepeatedGameSpec, build_finite_repeated, hasse, lift_preferences
from .views import Cycle, FiniteHorizon, HugeHorizon, Segment, SegmentedWholeHistory, ViewKind

__all__ = [
    "Cycle",
    "DiscountedSum",
    "ExtReal",
    "FiniteHorizon",
    "GameForm",
    "HugeHorizon",
    "LimitOfMeans",
    "NonStdNum",
    "Overtaking",
    "PayoffModel",
    "RepeatedGameSpec",
    "Segment",
    "SegmentedWholeHistory",
    "SimpleSum",
    "StrategyFamily",
    "TAU",
    "ViewKind",
    "backward_induction",
    "build_finite_repeated",
    "compare",
    "evaluate",
    "exhaustive_check",
    "hasse",
    "is_nash",
    "is_spe",
    "lift_preferences",
    "move",
    "parse_criterion",
    "parse_nonstd",
    "simultaneous",
    "spe_profiles",
    "verify_symbolic_spe",
]
