"""Approximation of ergodic measures on Sigma_D by CO-measures.

A long orbit segment of the target is sampled once per seed.  Candidate
periodic words are its windows of length <= budget that repeat admissibly
inside the target's class: negative windows for class-alpha targets,
positive ones for class-beta, and omega^{2k} alpha_1 (resp. beta_1) built
from neutral windows omega for class-0 targets.  The candidate closest to
the target in the truncated weak* metric wins.  Since the candidate pool
only grows with the budget, the attained distance is non-increasing in it.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .embeddings import PeriodicPoint, reconstruct
from .errors import BudgetError, InvalidInput
from .measures import CO, MeasureSpec, Pushforward, classify_measure
from .metric import WeakStarConfig, cylinder_vector, weights
from .sampling import sample
from .symbolic import Ambient, PeriodicClass, left, right, step

DEFAULT_SAMPLE_LEN = 4096


@dataclass(frozen=True)
class Approximation:
    measure: CO
    distance: float
    budget: int


def _target_sequence(target: MeasureSpec, budget: int, seed: int, sample_len: int) -> tuple:
    if isinstance(target, Pushforward) and isinstance(target.inner, CO):
        target = CO(reconstruct(target.inner.point, target.gamma))
    if isinstance(target, CO):
        cyc = target.point.cycle
        reps = (budget + 2 * len(cyc)) // len(cyc) + 1
        return cyc * reps
    if isinstance(target, Pushforward):
        return sample(target, sample_len, seed)
    raise InvalidInput("co_approx targets are CO measures or pushforwards")


class _Scorer:
    """Distances from cyclic words to a fixed target, vectorized over windows."""

    def __init__(self, target: MeasureSpec, cfg: WeakStarConfig):
        self.alphabet = target.alphabet
        self.A = self.alphabet.size
        self.L = cfg.max_len
        self.t = np.asarray(cylinder_vector(target, cfg), dtype=float)
        self.w = weights(len(self.t))
        self.offsets = [sum(self.A ** i for i in range(1, l)) for l in range(1, self.L + 1)]

    def vector_of(self, cycle) -> np.ndarray:
        codes = [self.alphabet.order(s) for s in cycle]
        m = len(codes)
        v = np.zeros(len(self.t))
        for l in range(1, self.L + 1):
            counts = Counter()
            for i in range(m):
                c = 0
                for j in range(l):
                    c = c * self.A + codes[(i + j) % m]
                counts[c] += 1
            for c, k in counts.items():
                v[self.offsets[l - 1] + c] = k / m
        return v

    def score(self, cycle) -> float:
        return float(np.sum(np.abs(self.vector_of(cycle) - self.t) * self.w))

    def score_windows(self, codes: np.ndarray, m: int, starts: np.ndarray) -> np.ndarray:
        """Distances for the cyclic words codes[l:l+m], l in starts."""
        A = self.A
        freq = np.zeros((len(starts), len(self.t)))
        rows = np.arange(len(starts))
        for l in range(1, self.L + 1):
            off = self.offsets[l - 1]
            # every gram of the cyclic word, as positions (start + (i + j) mod m)
            for i in range(m):
                c = np.zeros(len(starts), dtype=np.int64)
                for j in range(l):
                    c = c * A + codes[starts + (i + j) % m]
                np.add.at(freq, (rows, off + c), 1.0)
        freq /= m
        return np.sum(np.abs(freq - self.t[None, :]) * self.w[None, :], axis=1)


def _candidates(seq, budget: int, cls: PeriodicClass):
    """Yield (kind, data) candidate descriptions from the target sequence."""
    h = np.concatenate([[0], np.cumsum([step(s) for s in seq])])
    S = len(seq)
    for m in range(1, min(budget, S) + 1):
        starts = np.arange(0, S - m + 1)
        # min / max of the height walk over [l, l+m], relative to H_l
        if m == 1:
            lo = np.minimum(h[starts], h[starts + 1])
            hi = np.maximum(h[starts], h[starts + 1])
        else:
            lo = np.minimum(lo[: len(starts)], h[starts + m])
            hi = np.maximum(hi[: len(starts)], h[starts + m])
        rel_end = h[starts + m] - h[starts]
        rel_lo = lo - h[starts]
        rel_hi = hi - h[starts]
        if cls is PeriodicClass.CLASS_ALPHA:
            yield "window", m, starts[(rel_lo >= 0) & (rel_end > 0)]
        elif cls is PeriodicClass.CLASS_BETA:
            yield "window", m, starts[(rel_hi <= 0) & (rel_end < 0)]
        else:
            yield "neutral", m, starts[(rel_lo >= 0) & (rel_end == 0)]


def co_approx(target: MeasureSpec, budget: int, seed: int = 0,
              cfg: WeakStarConfig = WeakStarConfig(), gamma: str = "alpha",
              sample_len: int = DEFAULT_SAMPLE_LEN, with_distance: bool = False,
              exclude=frozenset()):
    """CO-measure of period <= budget approximating `target`.

    For class-0 targets the construction yields a class-`gamma` measure.
    `exclude` holds CO-measures that may not be returned.
    """
    if target.ambient is not Ambient.SIGMA_D:
        raise InvalidInput("co_approx expects a measure on Sigma_D")
    if budget < 1:
        raise InvalidInput("budget must be >= 1")
    cls = classify_measure(target)
    seq = _target_sequence(target, budget, seed, sample_len)
    alphabet = target.alphabet
    codes = np.array([alphabet.order(s) for s in seq], dtype=np.int64)
    scorer = _Scorer(target, cfg)
    tail = left(1) if gamma == "alpha" else right(1)

    best = None  # (distance, period, sort key, cycle)

    def consider(d, cycle):
        nonlocal best
        key = (round(float(d), 13), len(cycle), alphabet.sort_key(cycle))
        if best is None or key < best[0]:
            best = (key, cycle)

    banned = {mu.point.cycle for mu in exclude}

    def canon(cycle):
        return PeriodicPoint(cycle, target.params, Ambient.SIGMA_D).cycle

    seen_neutral = set()
    for kind, m, starts in _candidates(seq, budget, cls):
        if len(starts) == 0:
            continue
        if kind == "window":
            d = scorer.score_windows(codes, m, starts)
            for i in np.argsort(d, kind="stable"):
                cycle = tuple(seq[starts[i]: starts[i] + m])
                if not banned or canon(cycle) not in banned:
                    consider(d[i], cycle)
                    break
            continue
        for l in starts:
            omega = tuple(seq[l: l + m])
            if omega in seen_neutral:
                continue
            seen_neutral.add(omega)
            k = 1
            while 2 * k * m + 1 <= budget:
                cycle = omega * (2 * k) + (tail,)
                if not banned or canon(cycle) not in banned:
                    consider(scorer.score(cycle), cycle)
                k += 1
    if best is None:
        raise BudgetError(f"no admissible periodic word of length <= {budget} found")
    cycle = best[1]
    result = CO(PeriodicPoint(cycle, target.params, Ambient.SIGMA_D))
    if with_distance:
        return Approximation(result, best[0][0], budget)
    return result
