import itertools
import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dyckshift.errors import InvalidInput, TransportError
from dyckshift.functions import LocallyConstantFn, constant, drift_function, indicator
from dyckshift.measures import (CO, Bernoulli, CylinderQuery, Markov, Pushforward,
                                block_entropy, classify_measure, cylinder_prob, entropy,
                                entropy_increment, fully_supported, integral, markov_entropy_bounds,
                                spec_from_json, spec_to_json, transport_condition)
from dyckshift.sampling import sample, sample_many
from dyckshift.symbolic import AlphabetParams, PeriodicClass, is_admissible

from oracles import cyclic_frequency

P21 = AlphabetParams(2, 1)
UA = Bernoulli.uniform(P21, "alpha")
UB = Bernoulli.uniform(P21, "beta")
KA = Pushforward("alpha", UA)
KB = Pushforward("beta", UB)


def words_of(alphabet, k):
    return itertools.product(alphabet.symbols, repeat=k)


def test_cylinder_examples():
    assert CO.of("A1 B1", 2, 1).cylinder(("A1",)) == Fraction(1, 2)
    assert KA.cylinder(("A1", "B1")) == Fraction(1, 16)
    assert KA.cylinder(("A1", "B2")) == 0
    assert KA.cylinder(("B1",)) == Fraction(1, 8)
    assert cylinder_prob(KA, CylinderQuery(("A1",), anchor=7)) == Fraction(1, 4)
    assert KA.cylinder(("A2", "B1")) == 0


def test_integral_examples():
    assert integral(KA, indicator(("A1",), P21)) == Fraction(1, 4)
    for mu in (KA, KB, CO.of("A1 B1", 2, 1)):
        assert integral(mu, constant(P21, Fraction(3, 7))) == Fraction(3, 7)
    assert integral(CO.of("A1 B1", 2, 1), indicator(("U1",), P21)) == 0
    with pytest.raises(InvalidInput):
        integral(UA, indicator(("A1",), P21))


def test_entropy_examples():
    assert entropy(UA) == pytest.approx(math.log(4))
    assert entropy(CO.of("A1 A2 B2", 2, 1)) == 0
    for M, N in ((2, 0), (2, 1), (3, 2)):
        p = AlphabetParams(M, N)
        assert entropy(Pushforward("alpha", Bernoulli.uniform(p, "alpha"))) == pytest.approx(
            math.log(M + N + 1))


def test_transport_condition_examples():
    assert transport_condition(UA, "alpha") == Fraction(5, 4)
    assert transport_condition(CO.of("B*", 2, 1, "alpha"), "alpha") == 0
    nu = Bernoulli(P21, "alpha", {"A1": Fraction(1, 5), "A2": Fraction(1, 10),
                                  "U1": Fraction(1, 5), "B*": Fraction(1, 2)})
    assert transport_condition(nu, "alpha") == 2 * Fraction(3, 10) + Fraction(1, 5)


def test_pushforward_rejects_weak_transport():
    with pytest.raises(TransportError):
        Pushforward("alpha", CO.of("B*", 2, 1, "alpha"))
    edge = Bernoulli(P21, "alpha", {"A1": Fraction(1, 4), "A2": Fraction(1, 4), "B*": Fraction(1, 2)})
    assert transport_condition(edge, "alpha") == 1
    with pytest.raises(TransportError):
        Pushforward("alpha", edge)
    with pytest.raises(TransportError):
        Pushforward("alpha", CO.of("A1 B*", 2, 1, "alpha"))
    with pytest.raises(InvalidInput):
        Pushforward("alpha", UB)


def test_classify_examples():
    assert classify_measure(CO.of("A1 B1", 2, 1)) is PeriodicClass.CLASS0
    assert classify_measure(KA) is PeriodicClass.CLASS_ALPHA
    assert classify_measure(CO.of("B1", 2, 1)) is PeriodicClass.CLASS_BETA
    assert classify_measure(KB) is PeriodicClass.CLASS_BETA


def test_krieger_transports_differ_on_A1():
    for M, N in ((2, 0), (2, 1), (3, 2)):
        p = AlphabetParams(M, N)
        a = Pushforward("alpha", Bernoulli.uniform(p, "alpha"))
        b = Pushforward("beta", Bernoulli.uniform(p, "beta"))
        assert a.cylinder(("A1",)) == Fraction(1, M + N + 1)
        assert b.cylinder(("A1",)) == Fraction(1, M * (M + N + 1))


SPECS = [
    UA, UB, KA, KB, CO.of("A1 A2 B2 U1", 2, 1), CO.of("A1 B*", 2, 1, "alpha"),
    Pushforward("alpha", Bernoulli(P21, "alpha", {"A1": Fraction(1, 2), "A2": Fraction(1, 6),
                                                  "U1": Fraction(1, 12), "B*": Fraction(1, 4)})),
    Pushforward("beta", Bernoulli(P21, "beta", {"B1": Fraction(1, 3), "B2": Fraction(1, 3),
                                                "U1": Fraction(1, 6), "A*": Fraction(1, 6)})),
]


@pytest.mark.parametrize("mu", SPECS, ids=lambda m: type(m).__name__)
def test_normalization_and_consistency(mu):
    alphabet = mu.alphabet
    for k in range(1, 4):
        assert sum(mu.cylinder(w) for w in words_of(alphabet, k)) == 1
    for w in itertools.product(alphabet.symbols, repeat=2):
        v = mu.cylinder(w)
        assert sum(mu.cylinder(w + (s,)) for s in alphabet.symbols) == v
        assert sum(mu.cylinder((s,) + w) for s in alphabet.symbols) == v


@pytest.mark.parametrize("mu", [KA, KB, SPECS[6], SPECS[7]], ids=str)
def test_pushforward_inadmissible_cylinders_vanish(mu):
    for w in words_of(mu.alphabet, 3):
        if not is_admissible(w):
            assert mu.cylinder(w) == 0


@pytest.mark.parametrize("mu", [SPECS[6], SPECS[7]], ids=["alpha", "beta"])
def test_markov_route_matches_closed_form(mu):
    via_chain = Pushforward(mu.gamma, mu.inner.as_markov())
    for k in (1, 2, 3):
        for w in words_of(mu.alphabet, k):
            assert float(via_chain.cylinder(w)) == pytest.approx(float(mu.cylinder(w)), abs=1e-12)


def test_hidden_markov_pushforward_against_sampling():
    K = np.array([[0.1, 0.5, 0.1, 0.3], [0.3, 0.1, 0.2, 0.4], [0.2, 0.2, 0.2, 0.4],
                  [0.4, 0.3, 0.2, 0.1]])
    nu = Markov(P21, "alpha", K)
    mu = Pushforward("alpha", nu)
    n = 20000
    wins = sample_many(mu, 2, n, seed=3)
    for w in (("B1",), ("A1", "B1"), ("B2",), ("U1", "B2")):
        p = float(mu.cylinder(w))
        freq = sum(1 for x in wins if x[: len(w)] == w) / n
        assert abs(freq - p) <= 4 * math.sqrt(p * (1 - p) / n) + 1e-9


def test_co_cylinders_match_frequency_oracle():
    mu = CO.of("A1 A2 B2 U1 A1 B1", 2, 1)
    for k in (1, 2, 3):
        for w in words_of(mu.alphabet, k):
            assert mu.cylinder(w) == cyclic_frequency(mu.point.cycle, w)


def test_markov_validation():
    with pytest.raises(InvalidInput):
        Markov(P21, "alpha", np.eye(4))
    with pytest.raises(InvalidInput):
        Markov(P21, "alpha", np.full((4, 4), 0.3))
    with pytest.raises(InvalidInput):
        Markov(P21, "SigmaD", np.full((5, 5), 0.2))
    with pytest.raises(InvalidInput):
        Markov(P21, "alpha", np.full((4, 4), 0.25), stationary=[1, 0, 0, 0])
    m = Markov(P21, "alpha", np.full((4, 4), 0.25))
    assert entropy(m) == pytest.approx(math.log(4))


def test_hidden_markov_entropy_bounds():
    K = np.full((6, 6), 1 / 6)
    m = Markov(P21, "alpha", K, labels=("A1", "A1", "A2", "U1", "B*", "B*"))
    lo, hi = markov_entropy_bounds(m)
    true = -(2 * (1 / 3) * math.log(1 / 3) + 2 * (1 / 6) * math.log(1 / 6))
    assert lo <= true + 1e-9 <= hi + 2e-9


def test_block_entropy_approaches_declared_value():
    incs = [entropy_increment(KA, k) for k in range(1, 7)]
    assert all(b <= a + 1e-12 for a, b in zip(incs, incs[1:]))
    assert abs(incs[-1] - entropy(KA)) <= 0.1
    assert block_entropy(KA, 1) == pytest.approx(incs[0])


def test_drift_function_and_full_support():
    assert integral(KA, drift_function(P21)) == Fraction(1, 4)
    assert fully_supported(KA, 2)
    assert not fully_supported(CO.of("A1 B1", 2, 1), 2)


@pytest.mark.parametrize("mu", SPECS, ids=lambda m: type(m).__name__)
def test_json_round_trip(mu):
    back = spec_from_json(json.dumps(spec_to_json(mu)))
    for w in words_of(mu.alphabet, 2):
        assert back.cylinder(w) == mu.cylinder(w)


def test_json_errors():
    with pytest.raises(InvalidInput):
        spec_from_json({"kind": "co"})
    with pytest.raises(InvalidInput):
        spec_from_json({"type": "bernoulli", "M": 2, "N": 1})
    with pytest.raises(InvalidInput):
        spec_from_json({"type": "nope", "M": 2, "N": 1})


def test_function_json_round_trip():
    f = indicator(("A1", "B1"), P21)
    g = LocallyConstantFn.from_json(json.dumps(f.to_json()))
    assert g.table == f.table and g.radius == f.radius


def test_sampling_examples():
    assert sample(CO.of("A1 B1", 2, 1), 4, seed=0) == ("A1", "B1", "A1", "B1")
    assert sample(KA, 50, seed=9) == sample(KA, 50, seed=9)
    n = 100_000
    s = sample(UA, n, seed=1)
    assert abs(s.count("A1") / n - 0.25) <= 3 * math.sqrt(0.25 * 0.75 / n)
    s = sample(KA, n, seed=2)
    assert is_admissible(s)
    # a single path is correlated; allow a generous band around 1/8
    assert abs(s.count("B1") / n - 0.125) <= 0.01


@given(st.lists(st.integers(1, 9), min_size=4, max_size=4))
@settings(max_examples=40, deadline=None)
def test_random_bernoulli_pushforward_normalized(ws):
    total = sum(ws)
    weights = {s: Fraction(w, total) for s, w in zip(UA.alphabet.symbols, ws)}
    nu = Bernoulli(P21, "alpha", weights)
    if transport_condition(nu, "alpha") <= 1:
        with pytest.raises(TransportError):
            Pushforward("alpha", nu)
        return
    mu = Pushforward("alpha", nu)
    assert sum(mu.cylinder(w) for w in words_of(mu.alphabet, 2)) == 1
