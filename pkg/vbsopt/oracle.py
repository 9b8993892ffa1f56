"""Exhaustive reference solver.

Builds the joint valuation and scans every configuration. No pruning: the result is ground
truth for desk-scale instances, and a hard size cap keeps it from running away.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .problem import Problem
from .valuation import (
    Configuration,
    OptimizationAlgebra,
    Sense,
    Valuation,
    Variable,
    VariableSet,
    combine,
)

logger = logging.getLogger(__name__)

DEFAULT_MAX_JOINT = 2**24


class OracleSizeError(Exception):
    """Raised when the joint frame is larger than the oracle is allowed to scan."""


@dataclass(frozen=True, eq=False)
class OracleResult:
    optimum: float
    argopt: list[Configuration]
    joint_size: int


def joint(
    factors: Sequence[Valuation], alg: OptimizationAlgebra, max_joint: int = DEFAULT_MAX_JOINT
) -> Valuation:
    if not factors:
        raise ValueError("joint() needs at least one factor")
    domain = VariableSet.union_all(f.domain for f in factors)
    if domain.frame_size > max_joint:
        raise OracleSizeError(f"joint frame of {domain} has {domain.frame_size} entries, limit is {max_joint}")
    result = factors[0]
    for factor in factors[1:]:
        result = combine(result, factor, alg)
    return result


def brute_solve(problem: Problem, max_joint: int = DEFAULT_MAX_JOINT) -> OracleResult:
    alg = problem.algebra
    table = joint(list(problem.factors.values()), alg, max_joint)
    universe = table.domain
    optimum = float(alg.reduce(table.table, axis=None))
    hits = np.argwhere(table.table == optimum)
    argopt = [Configuration(universe, tuple(row)) for row in hits]
    logger.info("oracle scanned %d configurations: optimum %s, %d optimal", table.table.size, optimum, len(argopt))
    return OracleResult(optimum=optimum, argopt=argopt, joint_size=int(table.table.size))


def random_problem(
    rng: random.Random,
    max_variables: int = 6,
    max_frame: int = 3,
    max_factors: int = 5,
    max_scope: int = 3,
    value_range: tuple[int, int] = (-9, 9),
    sense: Sense | None = None,
) -> Problem:
    """A small random instance with integer-valued tables; every variable is used."""
    n = rng.randint(1, max_variables)
    variables = tuple(
        Variable(chr(ord("A") + i), tuple(f"{chr(ord('a') + i)}{k}" for k in range(rng.randint(1, max_frame))), i)
        for i in range(n)
    )
    scopes: list[VariableSet] = []
    for _ in range(rng.randint(1, max_factors)):
        size = rng.randint(1, min(max_scope, n))
        scopes.append(VariableSet(tuple(rng.sample(variables, size))))
    covered = VariableSet.union_all(scopes)
    for variable in variables:
        if variable not in covered:
            scopes[rng.randrange(len(scopes))] |= VariableSet.of(variable)
    low, high = value_range
    factors = {}
    for i, scope in enumerate(scopes):
        values = [rng.randint(low, high) for _ in range(scope.frame_size)]
        factors[f"F{i + 1}"] = Valuation(scope, np.array(values, dtype=np.float64))
    if sense is None:
        sense = rng.choice([Sense.MINIMIZE, Sense.MAXIMIZE])
    return Problem(variables, factors, sense)
