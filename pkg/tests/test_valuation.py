import math

import numpy as np
import pytest

from vbsopt.valuation import (
    EMPTY_CONFIGURATION,
    EMPTY_SET,
    MAX_SUM,
    MIN_SUM,
    Configuration,
    Valuation,
    ValuationError,
    Variable,
    VariableSet,
    algebra_for,
    combine,
    concat,
    configurations,
    eliminate,
    evaluate,
    format_value,
    marginalize,
    project,
    vacuous,
)


def config(domain, *labels):
    return Configuration(domain, tuple(v.state_index(label) for v, label in zip(domain, labels)))


# Variables, sets, configurations -------------------------------------
def test_variable_rejects_empty_and_duplicate_frames():
    with pytest.raises(ValuationError):
        Variable("A", ())
    with pytest.raises(ValuationError):
        Variable("A", ("a", "a"))


def test_variable_set_keeps_declaration_order(vs):
    assert vs("ECA") == vs("ACE")
    assert vs("ECA").names == ("A", "C", "E")
    assert vs("ACE").frame_size == 8
    assert EMPTY_SET.frame_size == 1
    assert (vs("ACE") | vs("AB")).names == ("A", "B", "C", "E")
    assert (vs("ACE") & vs("BE")).names == ("E",)
    assert (vs("ACE") - vs("A")).names == ("C", "E")
    assert vs("AE") <= vs("ACE")
    assert not vs("AB") <= vs("ACE")


def test_configuration_state_bounds(vs):
    with pytest.raises(ValuationError):
        Configuration(vs("A"), (2,))
    with pytest.raises(ValuationError):
        Configuration(vs("AB"), (0,))


def test_project_drops_extra_coordinates(example, vs):
    x = example.configuration(["~a", "b", "~c", "d", "e"])
    assert project(x, vs("ACE")).labels() == ("~a", "~c", "e")


def test_project_identity_and_empty(vs):
    x = config(vs("AB"), "a", "b")
    assert project(x, vs("AB")) == x
    assert project(config(vs("ACE"), "a", "c", "e"), EMPTY_SET) == EMPTY_CONFIGURATION


def test_project_outside_domain_is_an_error(vs):
    with pytest.raises(ValuationError):
        project(config(vs("AB"), "a", "b"), vs("AC"))


def test_concat_merges_in_canonical_order(vs):
    x = config(vs("AE"), "~a", "e")
    y = config(vs("B"), "b")
    merged = concat(x, y)
    assert merged.domain == vs("ABE")
    assert merged.labels() == ("~a", "b", "e")
    assert project(merged, vs("AE")) == x
    assert project(merged, vs("B")) == y


def test_concat_with_empty_configuration(vs):
    x = config(vs("ACE"), "a", "c", "e")
    assert concat(x, EMPTY_CONFIGURATION) == x
    assert concat(EMPTY_CONFIGURATION, EMPTY_CONFIGURATION) == EMPTY_CONFIGURATION


def test_concat_rejects_overlap(vs):
    with pytest.raises(ValuationError):
        concat(config(vs("AB"), "a", "b"), config(vs("B"), "b"))


def test_configurations_are_row_major(vs):
    labels = [x.labels() for x in configurations(vs("AE"))]
    assert labels == [("a", "e"), ("a", "~e"), ("~a", "e"), ("~a", "~e")]
    assert list(configurations(EMPTY_SET)) == [EMPTY_CONFIGURATION]


# Valuations -----------------------------------------------------------
def test_valuation_table_size_is_checked(vs):
    with pytest.raises(ValuationError):
        Valuation(vs("AB"), np.zeros(3))


def test_valuation_is_immutable(example):
    f1 = example.factors["F1"]
    with pytest.raises(ValueError):
        f1.table[0, 0, 0] = 99


def test_marginalize_matches_the_worked_example(example, vs):
    f1_ae = marginalize(example.factors["F1"], vs("AE"), MIN_SUM)
    f3_be = marginalize(example.factors["F3"], vs("BE"), MIN_SUM)
    assert f1_ae.flat.tolist() == [1, 3, 2, 4]
    assert f3_be.flat.tolist() == [0, 3, 4, 1]


def test_marginalize_to_own_domain_is_identity(example, vs):
    f2 = example.factors["F2"]
    assert marginalize(f2, vs("AB"), MIN_SUM) == f2


def test_marginalize_outside_domain_is_an_error(example, vs):
    with pytest.raises(ValuationError):
        marginalize(example.factors["F2"], vs("AC"), MIN_SUM)


def test_combine_matches_the_worked_example(example, vs):
    f1_ae = marginalize(example.factors["F1"], vs("AE"), MIN_SUM)
    f3_be = marginalize(example.factors["F3"], vs("BE"), MIN_SUM)
    combined = combine(f1_ae, f3_be, MIN_SUM)
    assert combined.domain == vs("ABE")
    assert combined.at(config(vs("ABE"), "a", "b", "e")) == 1
    assert combined.at(config(vs("ABE"), "~a", "~b", "~e")) == 5
    assert combined.flat.tolist() == [1, 6, 5, 4, 2, 7, 6, 5]


def test_combine_with_vacuous_is_pointwise_identity(example, vs):
    f1 = example.factors["F1"]
    assert combine(f1, vacuous(vs("ACE"), MIN_SUM), MIN_SUM) == f1
    assert combine(f1, vacuous(vs("A"), MIN_SUM), MIN_SUM) == f1


def test_vacuous_tables(vs):
    assert vacuous(vs("AE"), MIN_SUM).flat.tolist() == [0, 0, 0, 0]
    assert vacuous(EMPTY_SET, MIN_SUM).value() == 0


def test_eliminate_records_solution_for_c(example, vs):
    marginal, psi = eliminate(example.factors["F1"], example.variable("C"), MIN_SUM)
    assert marginal == marginalize(example.factors["F1"], vs("AE"), MIN_SUM)
    assert psi.variable == example.variable("C")
    assert psi.domain == vs("AE")
    c = example.variable("C")
    pick = lambda *labels: c.frame[psi.pick(config(vs("AE"), *labels))]  # noqa: E731
    assert pick("a", "e") == "c"
    assert pick("a", "~e") == "c"
    assert pick("~a", "~e") == "~c"
    assert pick("~a", "e") == "c"
    assert psi.ties(config(vs("AE"), "~a", "e")) == (0, 1)
    assert psi.ties(config(vs("AE"), "a", "e")) == (0,)


def test_eliminate_records_solution_for_d(example, vs):
    _, psi = eliminate(example.factors["F3"], example.variable("D"), MIN_SUM)
    d = example.variable("D")
    assert d.frame[psi.pick(config(vs("BE"), "b", "e"))] == "d"
    assert d.frame[psi.pick(config(vs("BE"), "b", "~e"))] == "~d"
    assert d.frame[psi.pick(config(vs("BE"), "~b", "e"))] == "~d"
    assert d.frame[psi.pick(config(vs("BE"), "~b", "~e"))] == "d"


def test_eliminate_last_variable_gives_empty_domain(example, vs):
    a_only = marginalize(example.factors["F2"], vs("A"), MIN_SUM)
    marginal, psi = eliminate(a_only, example.variable("A"), MIN_SUM)
    assert marginal.domain == EMPTY_SET
    assert marginal.value() == 0
    assert example.variable("A").frame[psi.pick(EMPTY_CONFIGURATION)] == "~a"


def test_eliminate_unknown_variable_is_an_error(example):
    with pytest.raises(ValuationError):
        eliminate(example.factors["F2"], example.variable("C"), MIN_SUM)


def test_eliminate_under_maximization(example, vs):
    marginal, psi = eliminate(example.factors["F2"], example.variable("B"), MAX_SUM)
    assert marginal.flat.tolist() == [8, 5]
    assert psi.pick(config(vs("A"), "a")) == 1


def test_evaluate_projects_the_configuration(example, vs):
    assert evaluate(example.factors["F2"], config(vs("AB"), "a", "b")) == 4
    assert evaluate(example.factors["F1"], example.configuration(["~a", "b", "c", "d", "e"])) == 2
    assert evaluate(vacuous(vs("AB"), MIN_SUM), example.configuration(["a", "b", "c", "d", "e"])) == 0


def test_evaluate_needs_covering_configuration(example, vs):
    with pytest.raises(ValuationError):
        evaluate(example.factors["F1"], config(vs("AB"), "a", "b"))


def test_infinite_entries_are_forbidden_configurations(vs):
    forbidden = Valuation(vs("A"), np.array([math.inf, 1.0]))
    other = Valuation(vs("AB"), np.array([0.0, 1.0, 2.0, 3.0]))
    combined = combine(forbidden, other, MIN_SUM)
    assert combined.flat.tolist()[:2] == [math.inf, math.inf]
    assert marginalize(combined, EMPTY_SET, MIN_SUM).value() == 3


def test_mixed_infinities_are_rejected(vs):
    plus = Valuation(vs("A"), np.array([math.inf, 0.0]))
    minus = Valuation(vs("A"), np.array([-math.inf, 0.0]))
    with pytest.raises(ValuationError):
        combine(plus, minus, MIN_SUM)


def test_finite_overflow_is_rejected(vs):
    big = Valuation(vs("A"), np.array([1e308, 0.0]))
    with pytest.raises(ValuationError):
        combine(big, big, MIN_SUM)


def test_nan_is_not_a_value(vs):
    with pytest.raises(ValuationError):
        Valuation(vs("A"), np.array([math.nan, 0.0]))


def test_algebra_lookup():
    assert algebra_for("min") is MIN_SUM
    assert algebra_for("max") is MAX_SUM
    with pytest.raises(ValuationError):
        algebra_for("median")


def test_format_value():
    assert format_value(2.0) == "2"
    assert format_value(-3.0) == "-3"
    assert format_value(0.5) == "0.5"
    assert format_value(math.inf) == "inf"
    assert format_value(-math.inf) == "-inf"
