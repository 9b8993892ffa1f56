"""Hypothesis strategies for small integer-valued valuations."""

import numpy as np
from hypothesis import strategies as st

from vbsopt.valuation import Valuation, Variable, VariableSet


@st.composite
def universes(draw, max_variables: int = 5, max_frame: int = 3) -> tuple[Variable, ...]:
    n = draw(st.integers(1, max_variables))
    return tuple(
        Variable(
            chr(ord("A") + i),
            tuple(f"{chr(ord('a') + i)}{k}" for k in range(draw(st.integers(1, max_frame)))),
            i,
        )
        for i in range(n)
    )


def subsets(members, min_size: int = 0):
    members = tuple(members)
    return st.lists(
        st.sampled_from(members) if members else st.nothing(),
        unique=True,
        min_size=min_size,
        max_size=len(members),
    ).map(lambda chosen: VariableSet(tuple(chosen)))


def valuations(domain: VariableSet, low: int = -20, high: int = 20):
    size = domain.frame_size
    return st.lists(st.integers(low, high), min_size=size, max_size=size).map(
        lambda values: Valuation(domain, np.array(values, dtype=np.float64))
    )


@st.composite
def valuation_in(draw, universe, min_size: int = 0):
    domain = draw(subsets(universe, min_size=min_size))
    return draw(valuations(domain))
