from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .valuation import (
    Configuration,
    OptimizationAlgebra,
    Sense,
    Valuation,
    Variable,
    VariableSet,
    algebra_for,
)


class ProblemError(Exception):
    """Raised when a problem's variables and factors do not fit together."""


@dataclass(frozen=True, eq=False)
class Problem:
    """Variables with frames, named factor valuations and an objective sense."""

    variables: tuple[Variable, ...]
    factors: Mapping[str, Valuation]
    sense: Sense = Sense.MINIMIZE
    _by_name: dict[str, Variable] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "factors", dict(self.factors))
        object.__setattr__(self, "sense", Sense(self.sense))
        by_name = {v.name: v for v in self.variables}
        if len(by_name) != len(self.variables):
            raise ProblemError("duplicate variable names")
        object.__setattr__(self, "_by_name", by_name)
        if not self.factors:
            raise ProblemError("a problem needs at least one valuation")
        for name, factor in self.factors.items():
            if not factor.domain:
                raise ProblemError(f"valuation {name} has an empty scope")
            for variable in factor.domain:
                if by_name.get(variable.name) != variable:
                    raise ProblemError(f"valuation {name} uses undeclared variable {variable.name}")
        scoped = VariableSet.union_all(f.domain for f in self.factors.values())
        unused = [v.name for v in self.variables if v not in scoped]
        if unused:
            raise ProblemError(f"variables not used by any valuation: {', '.join(unused)}")

    @property
    def algebra(self) -> OptimizationAlgebra:
        return algebra_for(self.sense)

    @property
    def universe(self) -> VariableSet:
        return VariableSet(self.variables)

    def variable(self, name: str) -> Variable:
        try:
            return self._by_name[name]
        except KeyError as exc:
            raise ProblemError(f"unknown variable {name!r}") from exc

    def order(self, names: Sequence[str]) -> tuple[Variable, ...]:
        return tuple(self.variable(n) for n in names)

    def scopes(self) -> list[VariableSet]:
        return [f.domain for f in self.factors.values()]

    def configuration(self, labels: Mapping[str, str] | Sequence[str]) -> Configuration:
        """A configuration of the universe from ``{name: label}`` or labels in declaration order."""
        if not isinstance(labels, Mapping):
            labels = dict(zip((v.name for v in self.variables), labels))
        return Configuration.from_labels(self.universe, labels)

    def evaluate(self, x: Configuration) -> float:
        """The joint objective at ``x``, without building the joint table."""
        alg = self.algebra
        total = alg.identity
        for factor in self.factors.values():
            total = float(alg.combine_values(total, factor.at(x)))
        return total

    def with_sense(self, sense: Sense | str) -> "Problem":
        return Problem(self.variables, self.factors, Sense(sense))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Problem):
            return NotImplemented
        return (
            self.variables == other.variables
            and self.sense == other.sense
            and list(self.factors) == list(other.factors)
            and all(self.factors[n] == other.factors[n] for n in self.factors)
        )

    __hash__ = None  # type: ignore[assignment]
