"""Problem file format and text renderers.

    # comment
    objective min
    variable A a ~a
    valuation F1 A C E
    a c e 1
    ~a c ~e inf
    end

Rows list states in the scope order written on the ``valuation`` line; missing rows take
the combination identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .problem import Problem, ProblemError
from .propagation import SolveResult
from .valuation import (
    Sense,
    SolutionTable,
    Valuation,
    ValuationError,
    Variable,
    VariableSet,
    algebra_for,
    describe,
    format_value,
)

BOM = "\ufeff"


class ProblemParseError(Exception):
    """Raised when a problem file is malformed."""

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(message)
        self.message = message
        self.line = line

    def __str__(self) -> str:
        if self.line is None:
            return self.message
        return f"line {self.line}: {self.message}"


@dataclass
class _Block:
    name: str
    scope: list[Variable]
    line: int
    rows: dict[tuple[str, ...], float] = field(default_factory=dict)


def _strip(raw: str) -> list[str]:
    return raw.split("#", 1)[0].split()


def _parse_value(token: str, line: int) -> float:
    try:
        value = float(token)
    except ValueError as exc:
        raise ProblemParseError(f"bad value {token!r}", line) from exc
    if math.isnan(value):
        raise ProblemParseError("NaN is not a value", line)
    return value


def parse_problem(text: str) -> Problem:
    if text.startswith(BOM):
        text = text[len(BOM):]
    sense: Optional[Sense] = None
    variables: dict[str, Variable] = {}
    declared_at: dict[str, int] = {}
    blocks: list[_Block] = []
    block: Optional[_Block] = None

    for number, raw in enumerate(text.splitlines(), start=1):
        tokens = _strip(raw)
        if not tokens:
            continue
        if block is not None:
            if tokens == ["end"]:
                blocks.append(block)
                block = None
                continue
            if len(tokens) != len(block.scope) + 1:
                raise ProblemParseError(
                    f"row of valuation {block.name} needs {len(block.scope)} states and a value, got {len(tokens)} tokens",
                    number,
                )
            labels = tokens[:-1]
            for variable, label in zip(block.scope, labels):
                if label not in variable.frame:
                    raise ProblemParseError(f"unknown state {label!r} for variable {variable.name}", number)
            key = tuple(labels)
            if key in block.rows:
                raise ProblemParseError(f"duplicate row {' '.join(labels)} in valuation {block.name}", number)
            block.rows[key] = _parse_value(tokens[-1], number)
            continue

        keyword, args = tokens[0], tokens[1:]
        if keyword == "objective":
            if sense is not None:
                raise ProblemParseError("objective declared twice", number)
            if len(args) != 1 or args[0] not in ("min", "max"):
                raise ProblemParseError("objective must be 'min' or 'max'", number)
            sense = Sense(args[0])
        elif keyword == "variable":
            if not args:
                raise ProblemParseError("variable needs a name", number)
            name, states = args[0], args[1:]
            if name in variables:
                raise ProblemParseError(f"variable {name} declared twice", number)
            if not states:
                raise ProblemParseError(f"variable {name} has an empty frame", number)
            try:
                variables[name] = Variable(name, tuple(states), len(variables))
            except ValuationError as exc:
                raise ProblemParseError(str(exc), number) from exc
            declared_at[name] = number
        elif keyword == "valuation":
            if len(args) < 2:
                raise ProblemParseError("valuation needs a name and at least one variable", number)
            name, scope_names = args[0], args[1:]
            if any(b.name == name for b in blocks):
                raise ProblemParseError(f"valuation {name} declared twice", number)
            unknown = [n for n in scope_names if n not in variables]
            if unknown:
                raise ProblemParseError(f"unknown variable {unknown[0]}", number)
            if len(set(scope_names)) != len(scope_names):
                raise ProblemParseError(f"valuation {name} repeats a variable", number)
            block = _Block(name, [variables[n] for n in scope_names], number)
        else:
            raise ProblemParseError(f"unknown declaration {keyword!r}", number)

    if block is not None:
        raise ProblemParseError(f"valuation {block.name} is missing 'end'", block.line)
    if not blocks:
        raise ProblemParseError("no valuations declared")

    used = {v.name for b in blocks for v in b.scope}
    for name, line in declared_at.items():
        if name not in used:
            raise ProblemParseError(f"variable {name} is not used by any valuation", line)

    sense = sense or Sense.MINIMIZE
    identity = algebra_for(sense).identity
    factors: dict[str, Valuation] = {}
    for b in blocks:
        domain = VariableSet(tuple(b.scope))
        positions = [b.scope.index(v) for v in domain]
        rows = {tuple(key[p] for p in positions): value for key, value in b.rows.items()}
        factors[b.name] = Valuation.from_rows(domain, rows, default=identity)
    try:
        return Problem(tuple(variables.values()), factors, sense)
    except ProblemError as exc:
        raise ProblemParseError(str(exc)) from exc


def serialize_problem(problem: Problem) -> str:
    lines = [f"objective {problem.sense.value}"]
    for variable in problem.variables:
        lines.append(" ".join(("variable", variable.name) + variable.frame))
    for name, factor in problem.factors.items():
        lines.append(" ".join(("valuation", name) + factor.domain.names))
        lines.extend(describe(factor))
        lines.append("end")
    return "\n".join(lines) + "\n"


# Renderers ------------------------------------------------------------
def _tie_labels(table: SolutionTable, ties: tuple[int, ...]) -> str:
    return " or ".join(table.variable.frame[i] for i in ties)


def format_solution_table(message: Valuation, table: SolutionTable) -> list[str]:
    lines = []
    for c, value in message.items():
        labels = " ".join(c.labels()) if c.domain else "<>"
        lines.append(f"  {labels}  {format_value(value)}  {_tie_labels(table, table.ties(c))}")
    return lines


def format_trace(result: SolveResult) -> str:
    """Inward tables and solutions, then outward configuration messages."""
    if result.trace is None:
        return ""
    lines: list[str] = []
    for step in result.trace.inward:
        lines.append(f"combined at {step.vertex}")
        lines.extend("  " + row for row in describe(step.combined))
        message = step.message
        header = f"message {message.source} -> {message.target}"
        if step.table is not None:
            lines.append(f"{header}  solution for {step.table.variable.name}")
            lines.extend(format_solution_table(message.payload, step.table))
        else:
            lines.append(header)
            lines.extend("  " + (row if message.payload.domain else "<> " + row) for row in describe(message.payload))
    for message in result.trace.outward:
        lines.append(f"configuration {message.source} -> {message.target}  {message.payload}")
    return "\n".join(lines) + "\n"


def format_result(result: SolveResult, problem: Problem) -> str:
    lines = [
        f"objective: {problem.sense.value}",
        f"order: {','.join(v.name for v in result.order)}",
        f"optimum: {format_value(result.optimum)}",
        f"variables: {' '.join(problem.universe.names)}",
        f"solution: {result.solution}",
    ]
    if result.all_optima is not None:
        lines.append(f"optima: {len(result.all_optima)}")
        lines.extend(f"  {x}" for x in result.all_optima)
    return "\n".join(lines) + "\n"
