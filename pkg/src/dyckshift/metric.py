"""Truncated weak* distance built from cylinder indicators."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InvalidInput
from .measures import MeasureSpec
from .numbers import is_exact


@dataclass(frozen=True)
class WeakStarConfig:
    """Cylinders of length 1..max_len, ordered by (length, lex)."""

    max_len: int = 2

    def __post_init__(self):
        if self.max_len < 1:
            raise InvalidInput("max_len must be >= 1")


def cylinder_family(alphabet, max_len: int) -> list[tuple]:
    out = []
    for n in range(1, max_len + 1):
        out.extend(itertools.product(alphabet.symbols, repeat=n))
    return out


def cylinder_vector(mu: MeasureSpec, cfg: WeakStarConfig) -> list:
    return [mu.cylinder(w) for w in cylinder_family(mu.alphabet, cfg.max_len)]


def truncation_bound(n_terms: int) -> Fraction:
    return Fraction(1, 2 ** n_terms)


def distance_from_vectors(u: Sequence, v: Sequence):
    """sum_n |u_n - v_n| / 2^n, n starting at 1; exact when both are exact."""
    if all(is_exact(x) for x in u) and all(is_exact(x) for x in v):
        total = Fraction(0)
        scale = Fraction(1, 2)
        for a, b in zip(u, v):
            total += abs(a - b) * scale
            scale /= 2
        return total
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return float(np.sum(np.abs(u - v) * weights(len(u))))


def weights(n: int) -> np.ndarray:
    return 0.5 ** np.arange(1, n + 1)


def weakstar_distance(mu: MeasureSpec, nu: MeasureSpec, cfg: WeakStarConfig = WeakStarConfig()):
    """(truncated d(mu, nu), bound on the omitted tail)."""
    if mu.params != nu.params or mu.ambient is not nu.ambient:
        raise InvalidInput("weak* distance needs measures on the same shift")
    u = cylinder_vector(mu, cfg)
    v = cylinder_vector(nu, cfg)
    return distance_from_vectors(u, v), truncation_bound(len(u))

