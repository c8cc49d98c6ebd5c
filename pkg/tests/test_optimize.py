from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dyckshift.embeddings import PeriodicPoint
from dyckshift.errors import InvalidInput, ResourceError
from dyckshift.functions import LocallyConstantFn, constant, drift_function, indicator
from dyckshift.measures import CO, Bernoulli, Pushforward, integral
from dyckshift.optimize import (cyclic_mean, degenerate_fn, lambda_markov_lower,
                                lambda_periodic, maximizer_probe)
from dyckshift.symbolic import AlphabetParams, enumerate_words

from oracles import brute_lambda, cyclic_mean as ref_mean, periodic_words

P21 = AlphabetParams(2, 1)
KA = Pushforward("alpha", Bernoulli.uniform(P21, "alpha"))


def pt(text):
    return PeriodicPoint.of(text, 2, 1)


def brute(f, p):
    return brute_lambda(f.table, f.default, f.width, 2, 1, p)


def test_examples():
    r = lambda_periodic(indicator(("U1",), P21), 4)
    assert r.lower_bound == 1 and r.argmax_orbits == (pt("U1"),)
    for p in (2, 3, 4, 5, 6):
        r = lambda_periodic(indicator(("A1", "B1"), P21), p)
        assert r.lower_bound == Fraction(1, 2) and r.argmax_orbits == (pt("A1 B1"),)
    r = lambda_periodic(drift_function(P21), 4)
    assert r.lower_bound == 1
    assert pt("A1") in r.argmax_orbits and pt("A2") in r.argmax_orbits
    assert all(set(o.cycle) <= {"A1", "A2"} for o in r.argmax_orbits)


def test_result_invariants():
    f = indicator(("A1", "U1"), P21)
    r = lambda_periodic(f, 6)
    assert r.lower_bound <= r.upper_bound == f.max_value()
    for o in r.argmax_orbits:
        assert integral(CO(o), f) == r.lower_bound


def test_monotone_and_matches_brute_force():
    for w in [("A1",), ("B2",), ("A1", "B1"), ("U1", "A2"), ("B1", "A1", "B1")]:
        f = indicator(w, P21)
        r = lambda_periodic(f, 5)
        prev = None
        for p in range(1, 6):
            best = max(v for n, v in r.best_by_length.items() if n <= p)
            assert best == brute(f, p)
            assert prev is None or best >= prev
            prev = best


values = st.fractions(min_value=-3, max_value=3, max_denominator=5)


@given(st.dictionaries(st.sampled_from(["A1", "A2", "U1", "B1", "B2"]), values, min_size=1),
       values)
@settings(max_examples=25, deadline=None)
def test_random_radius0_functions(table, default):
    f = LocallyConstantFn(P21, 0, {(k,): v for k, v in table.items()}, default)
    assert lambda_periodic(f, 4).lower_bound == brute(f, 4)


@given(st.lists(st.sampled_from(list(enumerate_words(P21, 3))), min_size=1, max_size=6, unique=True),
       values)
@settings(max_examples=10, deadline=None)
def test_random_radius1_functions(keys, v):
    f = LocallyConstantFn(P21, 1, {k: v for k in keys}, Fraction(0))
    assert lambda_periodic(f, 4).lower_bound == brute(f, 4)


def test_rotation_invariance_of_mean():
    f = indicator(("A1", "B1"), P21)
    w = ("A1", "B1", "U1", "A2", "B2")
    for s in range(len(w)):
        assert cyclic_mean(f, w[s:] + w[:s]) == cyclic_mean(f, w) == ref_mean(
            f.table, f.default, f.width, w)


def test_probe_examples():
    f = indicator(("A1", "B1"), P21)
    probe = maximizer_probe(f, 6)
    assert not probe.multiple and probe.witnesses == (CO(pt("A1 B1")),)
    zero = maximizer_probe(constant(P21, 0), 2)
    n_orbits = len({PeriodicPoint(w, P21).cycle for w in periodic_words(2, 1, 2)})
    assert len(zero.witnesses) == n_orbits
    loose = maximizer_probe(f, 5, Fraction(1, 10))
    assert all(integral(mu, f) >= Fraction(1, 2) - Fraction(1, 10) for mu in loose.witnesses)
    assert CO(pt("A1 B1")) in loose.witnesses and loose.multiple
    with pytest.raises(InvalidInput):
        maximizer_probe(f, 3, -1)


def test_degenerate_examples():
    f = degenerate_fn([pt("A1"), pt("A2")], 0)
    assert f.table == {("A1",): 0, ("A2",): 0} and f.default == -1
    r = lambda_periodic(f, 4)
    assert r.lower_bound == 0 and {pt("A1"), pt("A2")} <= set(r.argmax_orbits)
    assert maximizer_probe(f, 4, result=r).multiple
    g = degenerate_fn([pt("A1 B1")], 1)
    r = lambda_periodic(g, 6)
    assert r.lower_bound == 0 and r.argmax_orbits == (pt("A1 B1"),)
    h = degenerate_fn([pt("U1")], 0)
    assert lambda_periodic(h, 3).lower_bound == 0
    with pytest.raises(InvalidInput):
        degenerate_fn([], 0)


@given(st.lists(st.sampled_from(["A1 B1", "A1", "U1", "A2 B2 U1", "B1 B2", "A1 A2 B2"]),
                min_size=1, max_size=3, unique=True), st.integers(0, 1))
@settings(max_examples=15, deadline=None)
def test_degenerate_orbits_are_maximizing(texts, r):
    orbits = [pt(t) for t in texts]
    f = degenerate_fn(orbits, r)
    res = lambda_periodic(f, 3)
    assert res.lower_bound == 0
    for o in orbits:
        assert integral(CO(o), f) == 0
        if o.period <= 3:
            assert o in res.argmax_orbits


def test_markov_lower_bound_sandwich():
    f = indicator(("A1",), P21)
    low = lambda_markov_lower(f, KA)
    assert low == Fraction(1, 4)
    r = lambda_periodic(f, 4)
    assert low <= r.lower_bound == 1 <= r.upper_bound
    assert lambda_markov_lower(constant(P21, Fraction(2, 3)), KA) == Fraction(2, 3)
    bad = LocallyConstantFn(P21, 0, {}, Fraction(0))
    assert lambda_markov_lower(indicator(("A1", "B1"), P21), CO(pt("A2 B2"))) == 0
    assert lambda_markov_lower(bad, KA) == 0


def test_resource_cap_reports_partial():
    with pytest.raises(ResourceError) as info:
        lambda_periodic(indicator(("A1", "B1"), P21), 10, max_states=3000)
    partial = info.value.partial
    assert partial is not None and partial.partial and partial.lower_bound == Fraction(1, 2)


def test_depth_cap_under_approximates():
    f = indicator(("A1", "A1"), P21)
    full = lambda_periodic(f, 4)
    capped = lambda_periodic(f, 4, d_max=0)
    assert capped.lower_bound <= full.lower_bound
