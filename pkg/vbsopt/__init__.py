"""Discrete optimization with valuation-based systems."""

from .markov_tree import Hypergraph, RootedMarkovTree, attach_valuations, build_tree, osla_order, validate_markov
from .oracle import brute_solve, joint
from .problem import Problem
from .problem_file import parse_problem, serialize_problem
from .propagation import SolveOptions, SolveResult, enumerate_optima, inward_pass, outward_pass, solve
from .valuation import (
    MAX_SUM,
    MIN_SUM,
    Configuration,
    OptimizationAlgebra,
    Sense,
    Valuation,
    Variable,
    VariableSet,
    combine,
    concat,
    eliminate,
    evaluate,
    marginalize,
    project,
    vacuous,
)

__version__ = "0.1.0"
