import random
from fractions import Fraction

import pytest

from dyckshift.approx import co_approx
from dyckshift.errors import InvalidInput
from dyckshift.measures import CO, Bernoulli, Pushforward
from dyckshift.metric import (WeakStarConfig, cylinder_family, truncation_bound,
                              weakstar_distance)
from dyckshift.symbolic import AlphabetParams, Ambient

from oracles import same_orbit

P20, P21 = AlphabetParams(2, 0), AlphabetParams(2, 1)
KA = Pushforward("alpha", Bernoulli.uniform(P21, "alpha"))


def test_metric_examples():
    a, b = CO.of("A1", 2, 0), CO.of("A2", 2, 0)
    assert weakstar_distance(a, a)[0] == 0
    d, bound = weakstar_distance(a, b, WeakStarConfig(1))
    assert d == Fraction(3, 4) and bound == Fraction(1, 16)
    assert weakstar_distance(a, b, WeakStarConfig(2))[1] == truncation_bound(4 + 16)


def test_cylinder_family_order():
    fam = cylinder_family(P20.alphabet(Ambient.SIGMA_D), 2)
    assert fam[:4] == [("A1",), ("A2",), ("B1",), ("B2",)]
    assert fam[4] == ("A1", "A1") and len(fam) == 20


def test_metric_rejects_mixed_shifts():
    with pytest.raises(InvalidInput):
        weakstar_distance(CO.of("A1", 2, 1), CO.of("A1", 2, 1, "alpha"))
    with pytest.raises(InvalidInput):
        WeakStarConfig(0)


def test_co_approx_examples():
    got = co_approx(CO.of("A1 B1", 2, 1), 5)
    assert same_orbit(got.point.cycle, ("A1", "B1", "A1", "B1", "A1"))
    ref = CO.of("A1 B1 A1 B1 A1", 2, 1)
    assert weakstar_distance(got, CO.of("A1 B1", 2, 1))[0] <= weakstar_distance(
        ref, CO.of("A1 B1", 2, 1))[0]
    assert co_approx(CO.of("A1", 2, 1), 3) == CO.of("A1", 2, 1)
    beta = co_approx(CO.of("A1 B1", 2, 1), 5, gamma="beta")
    assert beta.point.drift < 0


def test_co_approx_class_beta_target():
    target = Pushforward("beta", Bernoulli.uniform(P21, "beta"))
    got = co_approx(target, 20, seed=1)
    assert got.point.drift < 0


def test_co_approx_improves_with_budget():
    cfg = WeakStarConfig(2)
    d10 = weakstar_distance(co_approx(KA, 10, seed=0, cfg=cfg), KA, cfg)[0]
    d40 = weakstar_distance(co_approx(KA, 40, seed=0, cfg=cfg), KA, cfg)[0]
    assert d40 < d10


def test_co_approx_is_deterministic():
    assert co_approx(KA, 30, seed=5) == co_approx(KA, 30, seed=5)


def test_co_approx_exclusion():
    first = co_approx(KA, 20, seed=0)
    second = co_approx(KA, 20, seed=0, exclude={first})
    assert second != first


def _random_exact_measure(rng):
    if rng.random() < 0.4:
        # random admissible periodic point
        while True:
            w = [rng.choice(["A1", "A2", "U1", "B1", "B2"]) for _ in range(rng.randint(1, 6))]
            try:
                return CO.of(" ".join(w), 2, 1)
            except InvalidInput:
                continue
    gamma = rng.choice(["alpha", "beta"])
    syms = Bernoulli.uniform(P21, gamma).alphabet.symbols
    while True:
        raw = [rng.randint(0, 6) for _ in syms]
        if sum(raw) == 0:
            continue
        nu = Bernoulli(P21, gamma, {s: Fraction(r, sum(raw)) for s, r in zip(syms, raw)})
        try:
            return Pushforward(gamma, nu)
        except ValueError:
            continue


def test_metric_axioms_exact():
    rng = random.Random(11)
    cfg = WeakStarConfig(2)
    for _ in range(30):
        a, b, c = (_random_exact_measure(rng) for _ in range(3))
        ab, ba = weakstar_distance(a, b, cfg)[0], weakstar_distance(b, a, cfg)[0]
        assert isinstance(ab, Fraction) and ab == ba
        assert ab <= weakstar_distance(a, c, cfg)[0] + weakstar_distance(c, b, cfg)[0]
        assert weakstar_distance(a, a, cfg)[0] == 0
