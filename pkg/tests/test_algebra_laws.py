"""Randomized checks of the laws local computation relies on."""

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from strategies import subsets, universes, valuation_in, valuations
from vbsopt.valuation import (
    MAX_SUM,
    MIN_SUM,
    Configuration,
    VariableSet,
    combine,
    concat,
    configurations,
    eliminate,
    evaluate,
    marginalize,
    project,
    vacuous,
)

LAWS = settings(max_examples=1000, deadline=None, suppress_health_check=list(HealthCheck))
SAMPLED = settings(max_examples=300, deadline=None, suppress_health_check=list(HealthCheck))
algebras = st.sampled_from([MIN_SUM, MAX_SUM])
values = st.integers(-10**6, 10**6).map(float)


@LAWS
@given(values, values, values, algebras)
def test_value_combination_commutes_and_associates(u, v, w, alg):
    op = alg.combine_values
    assert op(u, v) == op(v, u)
    assert op(u, op(v, w)) == op(op(u, v), w)
    assert op(u, alg.identity) == u


@LAWS
@given(values, values, values, algebras)
def test_combination_distributes_over_better_of(u, v, w, alg):
    op = alg.combine_values
    assert op(u, alg.better(v, w)) == alg.better(op(u, v), op(u, w))


@st.composite
def nested_marginals(draw):
    universe = draw(universes())
    g = draw(subsets(universe))
    h = draw(subsets(g.members))
    k = draw(subsets(h.members))
    return draw(valuations(g)), h, k


@LAWS
@given(nested_marginals(), algebras)
def test_marginalization_is_consonant(case, alg):
    G, h, k = case
    assert marginalize(marginalize(G, h, alg), k, alg) == marginalize(G, k, alg)


@st.composite
def valuation_pairs(draw):
    universe = draw(universes())
    return draw(valuation_in(universe)), draw(valuation_in(universe))


@LAWS
@given(valuation_pairs(), algebras)
def test_marginalization_distributes_over_combination(pair, alg):
    G, H = pair
    g, h = G.domain, H.domain
    lhs = marginalize(combine(G, H, alg), g, alg)
    rhs = combine(G, marginalize(H, g & h, alg), alg)
    assert lhs == rhs


@LAWS
@given(valuation_pairs(), algebras)
def test_combination_domain_law(pair, alg):
    G, H = pair
    combined = combine(G, H, alg)
    assert combined.domain == G.domain | H.domain
    assert combined.table.size == (G.domain | H.domain).frame_size


@st.composite
def valuation_with_variable(draw):
    universe = draw(universes())
    G = draw(valuation_in(universe, min_size=1))
    X = draw(st.sampled_from(G.domain.members))
    return G, X


@SAMPLED
@given(valuation_with_variable(), algebras)
def test_elimination_is_consistent_with_marginal(case, alg):
    G, X = case
    marginal, psi = eliminate(G, X, alg)
    assert marginal == marginalize(G, G.domain - VariableSet.of(X), alg)
    for c in configurations(psi.domain):
        assert evaluate(G, concat(c, psi.pick_configuration(c))) == marginal.at(c)
        assert psi.pick(c) in psi.ties(c)
        assert psi.pick(c) == min(psi.ties(c))
        for state in psi.ties(c):
            assert evaluate(G, concat(c, Configuration(VariableSet.of(X), (state,)))) == marginal.at(c)


@SAMPLED
@given(valuation_with_variable(), algebras)
def test_ties_survive_combination_with_vacuous(case, alg):
    G, X = case
    _, plain = eliminate(G, X, alg)
    _, padded = eliminate(combine(G, vacuous(G.domain, alg), alg), X, alg)
    assert np.array_equal(plain.tie_mask, padded.tie_mask)


@st.composite
def nested_projections(draw):
    universe = draw(universes())
    g = draw(subsets(universe))
    h = draw(subsets(g.members))
    k = draw(subsets(h.members))
    states = tuple(draw(st.integers(0, v.size - 1)) for v in g)
    return Configuration(g, states), h, k


@SAMPLED
@given(nested_projections())
def test_projection_composes(case):
    x, h, k = case
    assert project(project(x, h), k) == project(x, k)
