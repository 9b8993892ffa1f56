"""Local computation on a rooted Markov tree.

The inward pass sends valuation messages rootward and stores a solution table wherever a
vertex drops one variable toward its parent; the message reaching the root is the optimum.
The outward pass sends configuration messages leafward and reads one optimal state per
eliminated variable off the stored tables. ``enumerate_optima`` branches over every tie.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .markov_tree import (
    Hypergraph,
    RootedMarkovTree,
    attach_valuations,
    build_tree,
    osla_order,
)
from .problem import Problem
from .valuation import (
    EMPTY_CONFIGURATION,
    Configuration,
    OptimizationAlgebra,
    SolutionTable,
    Valuation,
    Variable,
    VariableSet,
    combine,
    concat,
    eliminate,
    project,
    vacuous,
)

logger = logging.getLogger(__name__)

DEFAULT_MAX_OPTIMA = 1024


class SolverError(Exception):
    """Raised when propagation cannot run on the given tree."""


class EnumerationLimitError(SolverError):
    """Raised when tie enumeration would return more configurations than allowed."""


@dataclass(frozen=True)
class ValuationMessage:
    source: VariableSet
    target: VariableSet
    payload: Valuation


@dataclass(frozen=True)
class ConfigurationMessage:
    source: VariableSet
    target: VariableSet
    payload: Configuration


@dataclass(frozen=True)
class InwardStep:
    """What one vertex did during the inward pass."""

    vertex: VariableSet
    combined: Valuation
    message: ValuationMessage
    table: Optional[SolutionTable] = None


@dataclass(frozen=True)
class InwardResult:
    optimum: float
    tables: dict[VariableSet, SolutionTable]
    steps: tuple[InwardStep, ...] = ()


def inward_pass(tree: RootedMarkovTree, alg: OptimizationAlgebra) -> InwardResult:
    messages: dict[VariableSet, Valuation] = {}
    tables: dict[VariableSet, SolutionTable] = {}
    steps: list[InwardStep] = []

    for vertex in tree.postorder():
        if vertex == tree.root:
            continue
        own = tree.valuation(vertex)
        if own is None:
            raise SolverError(f"vertex {vertex} has no assigned valuation")
        parent = tree.parent(vertex)
        dropped = vertex - parent
        if len(dropped) > 1:
            raise SolverError(f"vertex {vertex} drops {len(dropped)} variables toward {parent}; expected at most one")

        combined = own
        for child in tree.children(vertex):
            combined = combine(combined, messages[child], alg)

        table: Optional[SolutionTable] = None
        if dropped:
            message, table = eliminate(combined, dropped.members[0], alg)
            tables[vertex] = table
        else:
            message = combined
        messages[vertex] = message
        steps.append(InwardStep(vertex, combined, ValuationMessage(vertex, parent, message), table))
        logger.debug("message %s -> %s over %s", vertex, parent, message.domain)

    at_root = vacuous(tree.root, alg)
    for child in tree.children(tree.root):
        at_root = combine(at_root, messages[child], alg)
    optimum = at_root.value()
    logger.info("inward pass done: optimum %s, %d solution tables", optimum, len(tables))
    return InwardResult(optimum, tables, tuple(steps))


def _needs_message(tree: RootedMarkovTree, tables: dict[VariableSet, SolutionTable]) -> set[VariableSet]:
    needed: set[VariableSet] = set()
    for vertex in tree.postorder():
        if vertex in tables or any(child in needed for child in tree.children(vertex)):
            needed.add(vertex)
    return needed


def _extend(
    tree: RootedMarkovTree,
    tables: dict[VariableSet, SolutionTable],
    vertex: VariableSet,
    incoming: Configuration,
    state: Optional[int] = None,
) -> Configuration:
    eliminated = tree.eliminated_variable(vertex)
    if eliminated is None:
        return incoming
    table = tables.get(vertex)
    if table is None:
        raise SolverError(f"no solution table stored for {eliminated.name} at {vertex}")
    if state is None:
        state = table.pick(incoming)
    return concat(incoming, Configuration(VariableSet.of(eliminated), (state,)))


def _assemble(universe: VariableSet, picks: dict[Variable, int]) -> Configuration:
    missing = [v.name for v in universe if v not in picks]
    if missing:
        raise SolverError(f"no solution recovered for variables: {', '.join(missing)}")
    return Configuration(universe, tuple(picks[v] for v in universe))


def outward_pass(
    tree: RootedMarkovTree,
    tables: dict[VariableSet, SolutionTable],
    trace: Optional[list[ConfigurationMessage]] = None,
) -> Configuration:
    """Recover one optimal configuration using the canonical pick of every solution table."""
    needed = _needs_message(tree, tables)
    picks: dict[Variable, int] = {}
    pending: list[tuple[VariableSet, VariableSet, Configuration]] = [
        (tree.root, child, EMPTY_CONFIGURATION) for child in reversed(tree.children(tree.root))
    ]
    while pending:
        source, vertex, incoming = pending.pop()
        if vertex not in needed:
            continue
        if trace is not None:
            trace.append(ConfigurationMessage(source, vertex, incoming))
        extended = _extend(tree, tables, vertex, incoming)
        eliminated = tree.eliminated_variable(vertex)
        if eliminated is not None:
            picks[eliminated] = extended.state_of(eliminated)
        for child in reversed(tree.children(vertex)):
            pending.append((vertex, child, project(extended, vertex & child)))
    return _assemble(tree.universe, picks)


def enumerate_optima(
    tree: RootedMarkovTree,
    tables: dict[VariableSet, SolutionTable],
    max_optima: int = DEFAULT_MAX_OPTIMA,
) -> list[Configuration]:
    """Every configuration reachable by branching over the tie sets of the outward pass."""
    needed = _needs_message(tree, tables)
    universe = tree.universe
    found: dict[Configuration, None] = {}
    start = tuple((child, EMPTY_CONFIGURATION) for child in tree.children(tree.root))
    stack: list[tuple[tuple[tuple[VariableSet, Configuration], ...], tuple[tuple[Variable, int], ...]]] = [
        (start, ())
    ]
    while stack:
        frontier, chosen = stack.pop()
        frontier = tuple(item for item in frontier if item[0] in needed)
        if not frontier:
            found[_assemble(universe, dict(chosen))] = None
            if len(found) > max_optima:
                raise EnumerationLimitError(f"more than {max_optima} optimal configurations")
            continue
        (vertex, incoming), rest = frontier[0], frontier[1:]
        eliminated = tree.eliminated_variable(vertex)
        if eliminated is None:
            options: Sequence[Optional[int]] = (None,)
        elif vertex in tables:
            options = tables[vertex].ties(incoming)
        else:
            raise SolverError(f"no solution table stored for {eliminated.name} at {vertex}")
        for state in reversed(options):
            extended = _extend(tree, tables, vertex, incoming, state)
            children = tuple((child, project(extended, vertex & child)) for child in tree.children(vertex))
            picked = chosen + ((eliminated, state),) if eliminated is not None else chosen
            stack.append((children + rest, picked))
    return sorted(found, key=lambda x: x.states)


# Facade ---------------------------------------------------------------
@dataclass(frozen=True)
class SolveOptions:
    order: Optional[tuple[str, ...]] = None
    all_optima: bool = False
    trace: bool = False
    max_optima: int = DEFAULT_MAX_OPTIMA


@dataclass(frozen=True)
class SolveTrace:
    inward: tuple[InwardStep, ...] = ()
    outward: tuple[ConfigurationMessage, ...] = ()


@dataclass(frozen=True, eq=False)
class SolveResult:
    optimum: float
    solution: Configuration
    order: tuple[Variable, ...]
    tree: RootedMarkovTree
    all_optima: Optional[list[Configuration]] = None
    trace: Optional[SolveTrace] = None
    tables: dict[VariableSet, SolutionTable] = field(default_factory=dict)


def solve(problem: Problem, options: SolveOptions = SolveOptions()) -> SolveResult:
    alg = problem.algebra
    hypergraph = Hypergraph.from_scopes(problem.scopes())
    if options.order is not None:
        order = problem.order(options.order)
    else:
        order = osla_order(hypergraph)
    tree = attach_valuations(build_tree(hypergraph, order), problem.factors.values(), alg)

    inward = inward_pass(tree, alg)
    outward_trace: Optional[list[ConfigurationMessage]] = [] if options.trace else None
    solution = outward_pass(tree, inward.tables, trace=outward_trace)
    optima = enumerate_optima(tree, inward.tables, options.max_optima) if options.all_optima else None

    trace = None
    if options.trace:
        trace = SolveTrace(inward.steps, tuple(outward_trace or ()))
    logger.info("solved %s problem: optimum %s at %s", problem.sense.value, inward.optimum, solution)
    return SolveResult(
        optimum=inward.optimum,
        solution=solution,
        order=order,
        tree=tree,
        all_optima=optima,
        trace=trace,
        tables=inward.tables,
    )
