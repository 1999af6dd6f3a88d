"""Metaheuristic local search over UE->AP assignments."""

from .acceptors import (LateAcceptance, LateAcceptanceState, SimAnneal,
                        SimAnnealState, StrategicOsc, StrategicOscState, Tabu,
                        TabuState, default_acceptors)
from .engine import (Budget, SearchTrace, SolveResult, TracePoint,
                     compare_acceptors, comparison_summary, solve, solve_multi)
from .exhaustive import exhaustive_optimum

__all__ = [
    "Budget", "LateAcceptance", "LateAcceptanceState", "SearchTrace",
    "SimAnneal", "SimAnnealState", "SolveResult", "StrategicOsc",
    "StrategicOscState", "Tabu", "TabuState", "TracePoint",
    "compare_acceptors", "comparison_summary", "default_acceptors",
    "exhaustive_optimum", "solve", "solve_multi",
]
