import json
from fractions import Fraction

import numpy as np
import pytest

from dyckshift.errors import InvalidInput, TransportError
from dyckshift.measures import (CO, Bernoulli, Markov, Pushforward, classify_measure, entropy,
                                fully_supported)
from dyckshift.metric import WeakStarConfig, cylinder_vector, distance_from_vectors, weakstar_distance
from dyckshift.paths import (PathSpec, build_path, collapsed_measure, interior_ok, is_knot,
                             path_point, refinement_check, sigmund_kernel, sigmund_segment,
                             transport_segment, verify_path)
from dyckshift.symbolic import AlphabetParams, PeriodicClass

P21 = AlphabetParams(2, 1)
KA = Pushforward("alpha", Bernoulli.uniform(P21, "alpha"))
a1 = CO.of("A1", 2, 1, "alpha")
a2 = CO.of("A2", 2, 1, "alpha")


def dist(mu, nu, L=2):
    return float(weakstar_distance(mu, nu, WeakStarConfig(L))[0])


@pytest.fixture(scope="module")
def co_path():
    return build_path(CO.of("A1", 2, 1), CO.of("A2", 2, 1))


@pytest.fixture(scope="module")
def mixed_path():
    return build_path(KA, CO.of("A1 B1", 2, 1), seed=4)


def test_segment_endpoints_and_interior():
    assert sigmund_segment(a1, a2, 0) == a1
    assert sigmund_segment(a1, a2, 1) == a2
    mid = sigmund_segment(a1, a2, 0.5)
    assert isinstance(mid, Markov) and mid.strictly_positive()
    assert entropy(mid) > 0
    K, labels = sigmund_kernel(a1, a2, 0.3)
    assert np.allclose(K.sum(axis=1), 1) and (K > 0).all() and len(labels) == 6
    with pytest.raises(InvalidInput):
        sigmund_segment(a1, a1, 0.5)


def test_segment_continuity():
    for t in np.linspace(0.001, 0.99, 15):
        assert dist(sigmund_segment(a1, a2, t), sigmund_segment(a1, a2, t + 1e-3)) <= 1e-2


def test_segment_near_endpoints():
    assert dist(sigmund_segment(a1, a2, 1e-6), a1) < 1e-4
    assert dist(sigmund_segment(a1, a2, 1 - 1e-6), a2) < 1e-4


def test_transport_examples():
    mu = transport_segment(Bernoulli.uniform(P21, "alpha"), "alpha")
    assert mu.cylinder(("A1", "B1")) == Fraction(1, 16) and mu.cylinder(("A1", "B2")) == 0
    assert fully_supported(mu, 2)
    assert transport_segment(CO.of("A1 B*", 2, 1, "alpha"), "alpha") == CO.of("A1 B1", 2, 1)
    with pytest.raises(TransportError):
        transport_segment(CO.of("B*", 2, 1, "alpha"), "alpha")


def test_transported_segment_interior_is_fully_supported():
    mu = transport_segment(sigmund_segment(a1, a2, 0.4), "alpha")
    assert interior_ok(mu, "alpha")


def test_collapsed_measure():
    assert collapsed_measure(CO.of("A2 B2", 2, 1), "alpha") == CO.of("A2 B*", 2, 1, "alpha")
    assert collapsed_measure(KA, "alpha") == KA.inner
    with pytest.raises(InvalidInput):
        collapsed_measure(KA, "beta")


def test_path_endpoints(co_path):
    assert path_point(co_path, 0) == CO.of("A1", 2, 1)
    assert path_point(co_path, 1) == CO.of("A2", 2, 1)
    assert is_knot(co_path, 0) and is_knot(co_path, Fraction(1, 4))
    with pytest.raises(InvalidInput):
        path_point(co_path, Fraction(5, 4))


def test_central_chain_points(co_path):
    for t in (Fraction(3, 8), Fraction(1, 2) + Fraction(1, 100)):
        mu = path_point(co_path, t)
        assert classify_measure(mu) is PeriodicClass.CLASS_ALPHA
        if not is_knot(co_path, t):
            assert interior_ok(mu, "alpha")
    # t = 1/2 is a chain node when the chain has an even number of segments
    k = len(co_path.chain_nodes) - 1
    mid = path_point(co_path, Fraction(1, 2))
    if k % 2 == 0:
        assert isinstance(mid, CO)


def test_approximation_rate(co_path, mixed_path):
    cfg = WeakStarConfig(2)
    for p in (co_path, mixed_path):
        for side, target in (("plus", p.plus), ("minus", p.minus)):
            seq = p.plus_approx if side == "plus" else p.minus_approx
            base = collapsed_measure(target, "alpha")
            for n, mu in enumerate(seq, start=1):
                d = distance_from_vectors(cylinder_vector(collapsed_measure(mu, "alpha"), cfg),
                                          cylinder_vector(base, cfg))
                assert float(d) < 1 / (n + p.q)
            assert len(set(seq)) == len(seq)
            assert all(classify_measure(mu) is PeriodicClass.CLASS_ALPHA for mu in seq)


def test_continuity_at_knots(mixed_path):
    for n in range(1, 5):
        knot = Fraction(1, 2 ** (n + 1))
        here = path_point(mixed_path, knot)
        for eps in (Fraction(1, 10 ** 7),):
            assert dist(path_point(mixed_path, knot - eps), here) < 1e-3
            assert dist(path_point(mixed_path, knot + eps), here) < 1e-3
    for t in (Fraction(1, 4), Fraction(3, 4)):
        here = path_point(mixed_path, t)
        assert dist(path_point(mixed_path, t + Fraction(1, 10 ** 7)), here) < 1e-3
        assert dist(path_point(mixed_path, t - Fraction(1, 10 ** 7)), here) < 1e-3


def test_mixed_path_structure(mixed_path):
    rep = verify_path(mixed_path, 33)
    assert rep.endpoint_exact and rep.interior_structure and rep.pairwise_distinct
    interior = [r for r in rep.rows if not r["knot"] and 0 < r["t"] < 1]
    assert interior and all(r["fully_supported"] and r["entropy"] > 0 for r in interior)


def test_co_path_report(co_path):
    rep = verify_path(co_path, 65)
    assert rep.endpoint_exact and rep.interior_structure
    assert all(r["fully_supported"] for r in rep.rows if not r["knot"])
    csv = rep.to_csv().splitlines()
    assert csv[0] == "t,class,entropy,integral_of_probe_f,gap_to_prev,fully_supported"
    assert len(csv) == 66
    coarse, fine, ok = refinement_check(co_path, 33)
    assert ok and fine < coarse


def test_pathspec_json_round_trip(mixed_path):
    back = PathSpec.from_json(json.dumps(mixed_path.to_json()))
    assert back == mixed_path
    for t in (Fraction(1, 3), Fraction(1, 10), Fraction(9, 10)):
        assert dist(path_point(back, t), path_point(mixed_path, t)) == 0


def test_build_path_preconditions():
    with pytest.raises(InvalidInput):
        build_path(CO.of("A1", 2, 1), CO.of("A1", 2, 1))
    with pytest.raises(InvalidInput):
        build_path(CO.of("B1", 2, 1), CO.of("A1", 2, 1))
    with pytest.raises(InvalidInput):
        build_path(CO.of("B*", 2, 1, "alpha"), CO.of("A1", 2, 1))
