"""Valuations over finite frames and the operations that make local computation work.

A valuation is a dense float64 table with one axis per variable of its domain, axes laid
out in the problem's declaration order (so the flattened table is row-major with the last
declared variable varying fastest). Valuations are immutable; every operation returns a
new one.

Ties are detected with exact equality of stored values. Integer-valued inputs are exact;
inputs whose sums round may under-report ties.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence

import numpy as np

logger = logging.getLogger(__name__)


class ValuationError(Exception):
    """Raised when a valuation operation gets inconsistent domains or values."""


class Sense(str, Enum):
    MINIMIZE = "min"
    MAXIMIZE = "max"


@dataclass(frozen=True)
class OptimizationAlgebra:
    """A combination operator with its identity and the sense of marginalization."""

    name: str
    combine_op: np.ufunc
    identity: float
    sense: Sense

    def better(self, u: float, v: float) -> float:
        if self.sense is Sense.MINIMIZE:
            return min(u, v)
        return max(u, v)

    def reduce(self, table: np.ndarray, axis) -> np.ndarray:
        if self.sense is Sense.MINIMIZE:
            return np.min(table, axis=axis)
        return np.max(table, axis=axis)

    def arg_best(self, table: np.ndarray, axis: int) -> np.ndarray:
        # numpy returns the first occurrence, i.e. the smallest frame index.
        if self.sense is Sense.MINIMIZE:
            return np.argmin(table, axis=axis)
        return np.argmax(table, axis=axis)

    def combine_values(self, u, v):
        try:
            with np.errstate(over="raise", invalid="raise"):
                return self.combine_op(u, v)
        except FloatingPointError as exc:
            raise ValuationError(f"{self.name}: cannot combine values ({exc})") from exc


MIN_SUM = OptimizationAlgebra(name="min-sum", combine_op=np.add, identity=0.0, sense=Sense.MINIMIZE)
MAX_SUM = OptimizationAlgebra(name="max-sum", combine_op=np.add, identity=0.0, sense=Sense.MAXIMIZE)

ALGEBRAS: dict[Sense, OptimizationAlgebra] = {Sense.MINIMIZE: MIN_SUM, Sense.MAXIMIZE: MAX_SUM}


def algebra_for(sense: Sense | str) -> OptimizationAlgebra:
    try:
        return ALGEBRAS[Sense(sense)]
    except ValueError as exc:
        raise ValuationError(f"unknown objective sense: {sense!r}") from exc


# Variables and sets ---------------------------------------------------
@dataclass(frozen=True)
class Variable:
    name: str
    frame: tuple[str, ...]
    index: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "frame", tuple(self.frame))
        if not self.frame:
            raise ValuationError(f"variable {self.name} has an empty frame")
        if len(set(self.frame)) != len(self.frame):
            raise ValuationError(f"variable {self.name} has duplicate states")

    @property
    def size(self) -> int:
        return len(self.frame)

    def state_index(self, label: str) -> int:
        try:
            return self.frame.index(label)
        except ValueError as exc:
            raise ValuationError(f"unknown state {label!r} for variable {self.name}") from exc

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class VariableSet:
    """A set of variables kept in canonical (declaration) order."""

    members: tuple[Variable, ...] = ()

    def __post_init__(self) -> None:
        ordered = tuple(sorted(set(self.members), key=lambda v: (v.index, v.name)))
        if len({v.name for v in ordered}) != len(ordered):
            raise ValuationError("variable set holds two variables with the same name")
        object.__setattr__(self, "members", ordered)

    @classmethod
    def of(cls, *variables: Variable) -> "VariableSet":
        return cls(tuple(variables))

    @classmethod
    def union_all(cls, sets: Iterable["VariableSet"]) -> "VariableSet":
        merged: list[Variable] = []
        for s in sets:
            merged.extend(s.members)
        return cls(tuple(merged))

    def __iter__(self) -> Iterator[Variable]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, variable: object) -> bool:
        return variable in self.members

    def __or__(self, other: "VariableSet") -> "VariableSet":
        return VariableSet(self.members + other.members)

    def __and__(self, other: "VariableSet") -> "VariableSet":
        return VariableSet(tuple(v for v in self.members if v in other))

    def __sub__(self, other: "VariableSet") -> "VariableSet":
        return VariableSet(tuple(v for v in self.members if v not in other))

    def __le__(self, other: "VariableSet") -> bool:
        return all(v in other for v in self.members)

    def isdisjoint(self, other: "VariableSet") -> bool:
        return not any(v in other for v in self.members)

    def position(self, variable: Variable) -> int:
        return self.members.index(variable)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(v.size for v in self.members)

    @property
    def frame_size(self) -> int:
        return math.prod(self.shape)

    @property
    def sort_key(self) -> tuple[int, ...]:
        return tuple(v.index for v in self.members)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.members)

    def label(self) -> str:
        return "{" + ",".join(self.names) + "}"

    def __str__(self) -> str:
        return self.label()


EMPTY_SET = VariableSet()


# Configurations -------------------------------------------------------
@dataclass(frozen=True)
class Configuration:
    domain: VariableSet
    states: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", tuple(int(s) for s in self.states))
        if len(self.states) != len(self.domain):
            raise ValuationError(
                f"configuration of {self.domain} needs {len(self.domain)} states, got {len(self.states)}"
            )
        for variable, state in zip(self.domain, self.states):
            if not 0 <= state < variable.size:
                raise ValuationError(f"state index {state} out of range for variable {variable.name}")

    @classmethod
    def from_labels(cls, domain: VariableSet, labels: Mapping[str, str]) -> "Configuration":
        return cls(domain, tuple(v.state_index(labels[v.name]) for v in domain))

    def state_of(self, variable: Variable) -> int:
        return self.states[self.domain.position(variable)]

    def labels(self) -> tuple[str, ...]:
        return tuple(v.frame[s] for v, s in zip(self.domain, self.states))

    def as_dict(self) -> dict[str, str]:
        return dict(zip(self.domain.names, self.labels()))

    def __str__(self) -> str:
        if not self.domain:
            return "<>"
        return "(" + ", ".join(self.labels()) + ")"


EMPTY_CONFIGURATION = Configuration(EMPTY_SET, ())


def project(x: Configuration, h: VariableSet) -> Configuration:
    if not h <= x.domain:
        raise ValuationError(f"cannot project a configuration of {x.domain} to {h}")
    return Configuration(h, tuple(x.state_of(v) for v in h))


def concat(x: Configuration, y: Configuration) -> Configuration:
    if not x.domain.isdisjoint(y.domain):
        raise ValuationError(f"cannot concatenate configurations of {x.domain} and {y.domain}")
    domain = x.domain | y.domain
    states = {**dict(zip(x.domain, x.states)), **dict(zip(y.domain, y.states))}
    return Configuration(domain, tuple(states[v] for v in domain))


def configurations(domain: VariableSet) -> Iterator[Configuration]:
    """All configurations of a domain in row-major order."""
    for states in np.ndindex(*domain.shape):
        yield Configuration(domain, states)


# Valuations -----------------------------------------------------------
@dataclass(frozen=True, eq=False)
class Valuation:
    domain: VariableSet
    table: np.ndarray

    def __post_init__(self) -> None:
        table = np.array(self.table, dtype=np.float64)
        if table.size != self.domain.frame_size:
            raise ValuationError(
                f"valuation for {self.domain} needs {self.domain.frame_size} entries, got {table.size}"
            )
        if np.isnan(table).any():
            raise ValuationError(f"valuation for {self.domain} holds NaN entries")
        table = table.reshape(self.domain.shape)
        table.flags.writeable = False
        object.__setattr__(self, "table", table)

    @classmethod
    def from_rows(
        cls,
        domain: VariableSet,
        rows: Mapping[tuple[str, ...], float],
        default: float = 0.0,
    ) -> "Valuation":
        """Build a table from label rows keyed in canonical variable order."""
        table = np.full(domain.shape, default, dtype=np.float64)
        for labels, value in rows.items():
            idx = tuple(v.state_index(label) for v, label in zip(domain, labels))
            table[idx] = value
        return cls(domain, table)

    @property
    def flat(self) -> np.ndarray:
        return self.table.ravel()

    def at(self, x: Configuration) -> float:
        if x.domain != self.domain:
            x = project(x, self.domain)
        return float(self.table[x.states])

    def value(self) -> float:
        """The single entry of a valuation for the empty set."""
        if self.domain:
            raise ValuationError(f"valuation for {self.domain} has more than one value")
        return float(self.table[()])

    def items(self) -> Iterator[tuple[Configuration, float]]:
        for x in configurations(self.domain):
            yield x, float(self.table[x.states])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Valuation):
            return NotImplemented
        return self.domain == other.domain and np.array_equal(self.table, other.table)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Valuation({self.domain}, {self.flat.tolist()})"


def _expand(valuation: Valuation, domain: VariableSet) -> np.ndarray:
    shape = tuple(v.size if v in valuation.domain else 1 for v in domain)
    return valuation.table.reshape(shape)


def combine(g: Valuation, h: Valuation, alg: OptimizationAlgebra) -> Valuation:
    domain = g.domain | h.domain
    table = alg.combine_values(_expand(g, domain), _expand(h, domain))
    return Valuation(domain, table)


def combine_all(valuations: Sequence[Valuation], alg: OptimizationAlgebra) -> Valuation:
    if not valuations:
        return vacuous(EMPTY_SET, alg)
    result = valuations[0]
    for valuation in valuations[1:]:
        result = combine(result, valuation, alg)
    return result


def marginalize(g: Valuation, h: VariableSet, alg: OptimizationAlgebra) -> Valuation:
    if not h <= g.domain:
        raise ValuationError(f"cannot marginalize a valuation for {g.domain} to {h}")
    axes = tuple(i for i, v in enumerate(g.domain) if v not in h)
    if not axes:
        return g
    return Valuation(h, alg.reduce(g.table, axis=axes))


@dataclass(frozen=True, eq=False)
class SolutionTable:
    """Optimizing states of an eliminated variable, per configuration of the rest.

    ``picks`` holds the canonical pick (smallest frame index among the optimal states) with
    one axis per variable of ``domain``. ``tie_mask`` adds a trailing axis over the
    eliminated variable's frame marking every optimal state.
    """

    variable: Variable
    domain: VariableSet
    picks: np.ndarray
    tie_mask: np.ndarray

    def pick(self, c: Configuration) -> int:
        if c.domain != self.domain:
            c = project(c, self.domain)
        return int(self.picks[c.states])

    def ties(self, c: Configuration) -> tuple[int, ...]:
        if c.domain != self.domain:
            c = project(c, self.domain)
        return tuple(int(i) for i in np.flatnonzero(self.tie_mask[c.states]))

    def pick_configuration(self, c: Configuration) -> Configuration:
        return Configuration(VariableSet.of(self.variable), (self.pick(c),))


def eliminate(
    g: Valuation, variable: Variable, alg: OptimizationAlgebra
) -> tuple[Valuation, SolutionTable]:
    if variable not in g.domain:
        raise ValuationError(f"variable {variable.name} is not in {g.domain}")
    axis = g.domain.position(variable)
    rest = g.domain - VariableSet.of(variable)
    best = np.asarray(alg.reduce(g.table, axis=axis))
    picks = np.asarray(alg.arg_best(g.table, axis=axis))
    tie_mask = np.moveaxis(g.table == np.expand_dims(best, axis), axis, -1)
    tie_mask.flags.writeable = False
    picks.flags.writeable = False
    logger.debug("eliminated %s from %s", variable.name, g.domain)
    return Valuation(rest, best), SolutionTable(variable, rest, picks, tie_mask)


def vacuous(h: VariableSet, alg: OptimizationAlgebra) -> Valuation:
    return Valuation(h, np.full(h.shape, alg.identity, dtype=np.float64))


def evaluate(g: Valuation, x: Configuration) -> float:
    if not g.domain <= x.domain:
        raise ValuationError(f"configuration of {x.domain} does not cover {g.domain}")
    return g.at(x)


ValueFormatter = Callable[[float], str]


def format_value(value: float) -> str:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


def describe(valuation: Valuation, formatter: Optional[ValueFormatter] = None) -> list[str]:
    """One ``labels value`` line per configuration, in table order."""
    fmt = formatter or format_value
    return [" ".join(x.labels() + (fmt(v),)) for x, v in valuation.items()]
