import os

import pytest

from vbsopt.markov_tree import Hypergraph, attach_valuations, build_tree
from vbsopt.problem_file import parse_problem
from vbsopt.valuation import VariableSet

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")
EXAMPLE_ORDER = ("C", "D", "E", "B", "A")


@pytest.fixture
def example_path() -> str:
    return os.path.join(FIXTURES, "example.vbs")


@pytest.fixture
def example(example_path):
    with open(example_path, encoding="utf-8") as fh:
        return parse_problem(fh.read())


@pytest.fixture
def vs(example):
    """Variable sets of the example problem by letters, e.g. ``vs("ACE")``."""

    def build(letters: str) -> VariableSet:
        return VariableSet(tuple(example.variable(letter) for letter in letters))

    return build


@pytest.fixture
def example_tree(example):
    hypergraph = Hypergraph.from_scopes(example.scopes())
    tree = build_tree(hypergraph, example.order(EXAMPLE_ORDER))
    return attach_valuations(tree, example.factors.values(), example.algebra)
