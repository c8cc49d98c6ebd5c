"""Paths of ergodic measures on Sigma_D with fully supported interiors.

A path is assembled on the collapsed full shift Sigma_gamma and carried
back through the reconstruction map:

* t in [2^-(n+2), 2^-(n+1)]      segment n of the plus side, from
                                  mu_n^+ (at the right end) to mu_{n+1}^+;
* t in [1/4, 3/4]                 central chain mu_1^+ -> nu_1 -> ... -> mu_1^-;
* t in [1-2^-(n+1), 1-2^-(n+2)]   segment n of the minus side;
* t = 0, 1                        the targets themselves.

Each segment interpolates between two CO-measures with a hidden-state
Markov chain whose kernel is strictly positive for t in (0, 1).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .approx import co_approx
from .embeddings import PeriodicPoint, collapse, in_K, reconstruct
from .errors import BudgetError, InvalidInput, TransportError
from .functions import LocallyConstantFn, indicator
from .measures import (
    CO,
    Markov,
    MeasureSpec,
    Pushforward,
    classify_measure,
    entropy,
    fully_supported,
    integral,
    spec_from_json,
    spec_to_json,
    transport_condition,
)
from .metric import WeakStarConfig, cylinder_vector, distance_from_vectors, weights
from .symbolic import (
    Ambient,
    PeriodicClass,
    format_word,
    gamma_ambient,
    left,
    minimum_rotation,
    parse_word,
    right,
)


# --------------------------------------------------------------------------
# segments


def sigmund_kernel(nu0: CO, nu1: CO, t: float):
    """(kernel, labels) of the interpolating chain at t in (0, 1).

    Hidden states: the positions of orbit 0, the positions of orbit 1, and
    one state per alphabet symbol.  P_t = normalize[(1-t) Q0 + t Q1 + t(1-t) U]
    with Q_i the cyclic shift on orbit i (zero elsewhere) and U uniform.
    """
    alphabet = nu0.alphabet
    c0, c1 = nu0.point.cycle, nu1.point.cycle
    labels = c0 + c1 + alphabet.symbols
    n = len(labels)
    p0, p1 = len(c0), len(c1)
    K = np.full((n, n), t * (1 - t) / n)
    for i in range(p0):
        K[i, (i + 1) % p0] += 1 - t
    for i in range(p1):
        K[p0 + i, p0 + (i + 1) % p1] += t
    K /= K.sum(axis=1, keepdims=True)
    return K, labels


def sigmund_segment(nu0: CO, nu1: CO, t) -> MeasureSpec:
    if not (isinstance(nu0, CO) and isinstance(nu1, CO)):
        raise InvalidInput("segment endpoints must be CO-measures")
    if nu0.params != nu1.params or nu0.ambient is not nu1.ambient:
        raise InvalidInput("segment endpoints live on different shifts")
    if nu0 == nu1:
        raise InvalidInput("segment endpoints must differ")
    if not 0 <= t <= 1:
        raise InvalidInput(f"t={t} outside [0, 1]")
    if t == 0:
        return nu0
    if t == 1:
        return nu1
    K, labels = sigmund_kernel(nu0, nu1, float(t))
    return Markov(nu0.params, nu0.ambient, K, labels)


def transport_segment(nu: MeasureSpec, gamma: str) -> MeasureSpec:
    """Carry a measure on Sigma_gamma to Sigma_D.

    CO-measures on K_gamma map exactly to CO-measures; anything else must
    satisfy the strict transport condition and becomes a Pushforward.
    """
    if isinstance(nu, CO) and nu.ambient is gamma_ambient(gamma) and in_K(nu.point, gamma):
        return CO(reconstruct(nu.point, gamma))
    if transport_condition(nu, gamma) <= 1:
        raise TransportError(f"transport condition fails for {nu!r}")
    return Pushforward(gamma, nu)


def collapsed_measure(mu: MeasureSpec, gamma: str) -> MeasureSpec:
    """mu composed with the inverse of the collapse map, on Sigma_gamma."""
    if isinstance(mu, CO):
        return CO(collapse(mu.point, gamma))
    if isinstance(mu, Pushforward) and mu.gamma == gamma:
        return mu.inner
    raise InvalidInput(f"cannot collapse {mu!r} along {gamma}")


# --------------------------------------------------------------------------
# path spec


@dataclass(frozen=True)
class PathSpec:
    plus: MeasureSpec
    minus: MeasureSpec
    gamma: str
    plus_approx: tuple   # CO-measures mu_1^+, ..., mu_{levels+1}^+ on Sigma_D
    minus_approx: tuple
    chain: tuple         # CO-measures nu_1..nu_{k-1} on Sigma_gamma
    q: int = 1

    @property
    def levels(self) -> int:
        return len(self.plus_approx) - 1

    @property
    def chain_nodes(self) -> tuple:
        return ((collapsed_measure(self.plus_approx[0], self.gamma),) + self.chain
                + (collapsed_measure(self.minus_approx[0], self.gamma),))

    def to_json(self) -> dict:
        return {
            "gamma": self.gamma, "q": self.q,
            "plus": spec_to_json(self.plus), "minus": spec_to_json(self.minus),
            "plus_approx": [format_word(m.point.cycle) for m in self.plus_approx],
            "minus_approx": [format_word(m.point.cycle) for m in self.minus_approx],
            "chain": [format_word(m.point.cycle) for m in self.chain],
        }

    @classmethod
    def from_json(cls, obj) -> "PathSpec":
        if isinstance(obj, str):
            obj = json.loads(obj)
        plus = spec_from_json(obj["plus"])
        minus = spec_from_json(obj["minus"])
        params = plus.params
        d = lambda w: CO(PeriodicPoint(parse_word(w), params, Ambient.SIGMA_D))  # noqa: E731
        g = lambda w: CO(PeriodicPoint(parse_word(w), params, gamma_ambient(obj["gamma"])))  # noqa: E731
        return cls(plus, minus, obj["gamma"], tuple(d(w) for w in obj["plus_approx"]),
                   tuple(d(w) for w in obj["minus_approx"]), tuple(g(w) for w in obj["chain"]),
                   int(obj.get("q", 1)))


def _collapsed_distance(a: MeasureSpec, b: MeasureSpec, gamma: str, cfg: WeakStarConfig) -> float:
    u = cylinder_vector(collapsed_measure(a, gamma), cfg)
    v = cylinder_vector(collapsed_measure(b, gamma), cfg)
    return float(distance_from_vectors(u, v))


def _co_target_sequence(target: CO, gamma: str, count: int, q: int, cfg, exclude=frozenset()):
    """Distinct class-gamma CO-measures converging to a CO target.

    Class-gamma target with block w: (w')^m c, w' the rotation of w without
    unmatched brackets of the wrong side, c an extra bracket of side gamma.
    Class-0 target: (w')^{2m} alpha_1 (beta_1 for gamma = beta).
    """
    params = target.params
    cycle = target.point.cycle
    cls = classify_measure(target)
    if gamma == "alpha":
        base = minimum_rotation(cycle)
        extras = [left(k) for k in range(1, params.M + 1)]
    else:
        base = tuple(reversed(minimum_rotation(tuple(reversed(cycle)))))
        extras = [right(k) for k in range(1, params.M + 1)]
    out = []
    m = 0
    n = 1
    while len(out) < count:
        m += 1
        if m > 100000:
            raise BudgetError("could not meet the approximation rate")
        reps = 2 * m if cls is PeriodicClass.CLASS0 else m
        for c in (extras if cls is not PeriodicClass.CLASS0 else extras[:1]):
            word = base * reps + (c,)
            cand = CO(PeriodicPoint(word, params, Ambient.SIGMA_D))
            if cand.point.period != len(word) or cand in exclude or (out and cand == out[-1]):
                continue
            if _collapsed_distance(cand, target, gamma, cfg) < 1 / (n + q):
                out.append(cand)
                n += 1
            break
    return out


def _sampled_target_sequence(target: MeasureSpec, gamma: str, count: int, q: int, cfg,
                             seed: int, base_budget: int, max_budget: int, exclude=frozenset()):
    out = []
    budget = base_budget
    n = 1
    while len(out) < count:
        if budget > max_budget:
            raise BudgetError(f"approximant {n} needs a period budget above {max_budget}")
        try:
            cand = co_approx(target, budget, seed=seed, cfg=cfg, gamma=gamma,
                             exclude=frozenset(out) | exclude)
        except BudgetError:
            budget += max(1, budget // 4)
            continue
        ok = (classify_measure(cand) is not PeriodicClass.CLASS0
              and _collapsed_distance(cand, target, gamma, cfg) < 1 / (n + q))
        if ok:
            out.append(cand)
            n += 1
        budget += max(1, budget // 4)
    return out


def approximants(target: MeasureSpec, gamma: str, count: int, q: int = 1,
                 cfg: WeakStarConfig = WeakStarConfig(), seed: int = 0,
                 base_budget: int = 8, max_budget: int = 400, exclude=frozenset()) -> list:
    """mu_1, ..., mu_count: distinct class-gamma CO-measures with
    d(collapsed mu_n, collapsed target) < 1/(n+q), avoiding `exclude`."""
    if isinstance(target, CO):
        return _co_target_sequence(target, gamma, count, q, cfg, frozenset(exclude))
    return _sampled_target_sequence(target, gamma, count, q, cfg, seed, base_budget, max_budget,
                                    frozenset(exclude))


def _chain(a: CO, b: CO, k: int) -> tuple:
    """Intermediate CO-measures a^(k-i) b^i, i = 1..k-1, on Sigma_gamma."""
    out = []
    prev = a
    for i in range(1, k):
        word = a.point.cycle * (k - i) + b.point.cycle * i
        nu = CO(PeriodicPoint(word, a.params, a.ambient))
        if nu != prev and nu != b:
            out.append(nu)
            prev = nu
    return tuple(out)


def build_path(plus: MeasureSpec, minus: MeasureSpec, gamma: str = "alpha",
               levels: int = 8, chain_length: int = 4, q: int = 1,
               cfg: WeakStarConfig = WeakStarConfig(), seed: int = 0,
               base_budget: int = 8, max_budget: int = 400) -> PathSpec:
    for mu in (plus, minus):
        if mu.ambient is not Ambient.SIGMA_D:
            raise InvalidInput("path endpoints must be measures on Sigma_D")
        allowed = (PeriodicClass.CLASS0,
                   PeriodicClass.CLASS_ALPHA if gamma == "alpha" else PeriodicClass.CLASS_BETA)
        if classify_measure(mu) not in allowed:
            raise InvalidInput(f"endpoint {mu!r} is not in class 0 or class {gamma}")
    if plus == minus:
        raise InvalidInput("path endpoints must differ")
    plus_seq = approximants(plus, gamma, levels + 1, q, cfg, seed, base_budget, max_budget)
    minus_seq = approximants(minus, gamma, levels + 1, q, cfg, seed + 1, base_budget, max_budget,
                             exclude=plus_seq)
    if plus_seq[0] == minus_seq[0]:
        raise BudgetError("first approximants of both endpoints coincide")
    a = collapsed_measure(plus_seq[0], gamma)
    b = collapsed_measure(minus_seq[0], gamma)
    return PathSpec(plus, minus, gamma, tuple(plus_seq), tuple(minus_seq),
                    _chain(a, b, chain_length), q)


# --------------------------------------------------------------------------
# evaluation


def _locate(t: Fraction, levels: int):
    """('plus'|'minus', n, u) or ('chain', None, s) or ('end', side, None)."""
    if t == 0:
        return "end", "plus", None
    if t == 1:
        return "end", "minus", None
    if Fraction(1, 4) <= t <= Fraction(3, 4):
        return "chain", None, 2 * (t - Fraction(1, 4))
    side = "plus" if t < Fraction(1, 4) else "minus"
    x = t if side == "plus" else 1 - t
    n = 1
    while x < Fraction(1, 2 ** (n + 2)):
        n += 1
    u = 2 ** (n + 2) * (Fraction(1, 2 ** (n + 1)) - x)
    return side, n, u


def is_knot(p: PathSpec, t) -> bool:
    kind, n, u = _locate(Fraction(t), p.levels)
    if kind == "end":
        return True
    if kind == "chain":
        k = len(p.chain_nodes) - 1
        return (u * k).denominator == 1
    return u in (0, 1) or n > p.levels


def path_point(p: PathSpec, t) -> MeasureSpec:
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise InvalidInput(f"t={t} outside [0, 1]")
    kind, n, u = _locate(t, p.levels)
    if kind == "end":
        return p.plus if n == "plus" else p.minus
    if kind == "chain":
        nodes = p.chain_nodes
        k = len(nodes) - 1
        j = min(int(u * k), k - 1)
        local = u * k - j
        return transport_segment(sigmund_segment(nodes[j], nodes[j + 1], float(local))
                                 if 0 < local < 1 else nodes[j + int(local)], p.gamma)
    seq = p.plus_approx if kind == "plus" else p.minus_approx
    if n > p.levels:
        # beyond the stored levels: clamp to the last approximant
        return seq[-1]
    if u == 0:
        return seq[n - 1]
    if u == 1:
        return seq[n]
    a = collapsed_measure(seq[n - 1], p.gamma)
    b = collapsed_measure(seq[n], p.gamma)
    return transport_segment(sigmund_segment(a, b, float(u)), p.gamma)


# --------------------------------------------------------------------------
# verification


@dataclass
class PathReport:
    rows: list = field(default_factory=list)
    max_gap: float = 0.0
    endpoint_exact: bool = False
    interior_structure: bool = False
    min_pairwise: float = 0.0
    pairwise_distinct: bool = False
    distance_matrix: np.ndarray | None = None

    def to_csv(self, precision: int = 6) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "class", "entropy", "integral_of_probe_f", "gap_to_prev", "fully_supported"])
        for r in self.rows:
            w.writerow([f"{r['t']:.{precision}f}", r["class"], f"{r['entropy']:.{precision}f}",
                        f"{r['integral']:.{precision}f}",
                        "" if r["gap"] is None else f"{r['gap']:.{precision}e}",
                        int(r["fully_supported"])])
        return buf.getvalue()

    def summary(self) -> dict:
        return {"max_gap": self.max_gap, "endpoint_exact": self.endpoint_exact,
                "interior_structure": self.interior_structure,
                "min_pairwise_distance": self.min_pairwise,
                "pairwise_distinct": self.pairwise_distinct}


DISTINCT_TOL = 1e-12


def interior_ok(mu: MeasureSpec, gamma: str) -> bool:
    """Pushforward of a strictly positive Markov kernel, fully supported to length 2."""
    return (isinstance(mu, Pushforward) and mu.gamma == gamma and isinstance(mu.inner, Markov)
            and mu.inner.strictly_positive() and fully_supported(mu, 2))


def verify_path(p: PathSpec, grid: int = 65, cfg: WeakStarConfig = WeakStarConfig(),
                probe: LocallyConstantFn | None = None) -> PathReport:
    if grid < 2:
        raise InvalidInput("grid needs at least two points")
    if probe is None:
        probe = indicator((left(1),), p.plus.params)
    ts = [Fraction(i, grid - 1) for i in range(grid)]
    points = []
    for t in ts:
        try:
            points.append(path_point(p, t))
        except TransportError as exc:
            raise TransportError(f"t={t}: {exc}") from None
    vecs = np.array([[float(x) for x in cylinder_vector(mu, cfg)] for mu in points])
    w = weights(vecs.shape[1])
    report = PathReport()
    report.endpoint_exact = points[0] == p.plus and points[-1] == p.minus
    structure = True
    prev = None
    for t, mu, v in zip(ts, points, vecs):
        knot = is_knot(p, t)
        supported = fully_supported(mu, 2)
        if not knot and 0 < t < 1:
            structure = structure and interior_ok(mu, p.gamma)
        gap = None if prev is None else float(np.sum(np.abs(v - prev) * w))
        prev = v
        report.rows.append({"t": float(t), "class": classify_measure(mu).value,
                            "entropy": entropy(mu), "integral": float(integral(mu, probe)),
                            "gap": gap, "fully_supported": supported, "knot": knot})
    report.interior_structure = structure
    gaps = [r["gap"] for r in report.rows[1:]]
    report.max_gap = max(gaps)
    D = np.abs(vecs[:, None, :] - vecs[None, :, :]) @ w
    report.distance_matrix = D
    off = D[~np.eye(len(points), dtype=bool)]
    report.min_pairwise = float(off.min())
    report.pairwise_distinct = report.min_pairwise > DISTINCT_TOL
    return report


def refinement_check(p: PathSpec, grid: int = 65, cfg: WeakStarConfig = WeakStarConfig()):
    """(max gap on grid, max gap on 2*grid - 1, strictly smaller?)."""
    coarse = verify_path(p, grid, cfg).max_gap
    fine = verify_path(p, 2 * grid - 1, cfg).max_gap
    return coarse, fine, fine < coarse
