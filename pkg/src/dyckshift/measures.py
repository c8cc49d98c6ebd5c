"""Invariant measures: Bernoulli, (hidden-state) Markov, CO and pushforward.

Cylinder probabilities are exact Fractions whenever the inputs are exact:
Bernoulli weights, CO measures, pushforwards of either, and Markov kernels
given as Fractions.  Pushforwards of Markov chains are evaluated with the
first-passage matrix of the bracket-depth walk (floating point, ~1e-13).
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components

from .embeddings import PeriodicPoint, collapse_word, reconstruct
from .errors import InvalidInput, ResourceError, TransportError
from .functions import LocallyConstantFn
from .numbers import format_number, is_exact, parse_number
from .symbolic import (
    COLLAPSED_LEFT,
    COLLAPSED_RIGHT,
    AlphabetParams,
    Ambient,
    PeriodicClass,
    bracket_index,
    format_word,
    gamma_ambient,
    left,
    parse_word,
    reduce,
    right,
    role,
)

STOCHASTIC_TOL = 1e-12
STATIONARY_TOL = 1e-10


class MeasureSpec:
    """Base class; subclasses define `params`, `ambient` and `cylinder`."""

    params: AlphabetParams
    ambient: Ambient

    @property
    def alphabet(self):
        return self.params.alphabet(self.ambient)

    def cylinder(self, word: Sequence[str]):
        raise NotImplementedError

    @property
    def exact(self) -> bool:
        return False


@dataclass(frozen=True)
class CylinderQuery:
    word: tuple
    anchor: int = 0


def _collapsed_only(ambient: Ambient, what: str):
    if ambient is Ambient.SIGMA_D:
        raise InvalidInput(f"{what} measures live on the full shifts Sigma_alpha / Sigma_beta")


# --------------------------------------------------------------------------
# Bernoulli


@dataclass(frozen=True)
class Bernoulli(MeasureSpec):
    params: AlphabetParams
    ambient: Ambient
    weights: tuple  # ((token, weight), ...) in canonical order

    def __init__(self, params: AlphabetParams, ambient, weights):
        ambient = Ambient.parse(ambient)
        _collapsed_only(ambient, "Bernoulli")
        alphabet = params.alphabet(ambient)
        weights = dict(weights)
        alphabet.check(weights)
        ws = tuple((s, weights.get(s, Fraction(0))) for s in alphabet.symbols)
        if any(w < 0 for _, w in ws):
            raise InvalidInput("negative Bernoulli weight")
        if abs(sum(w for _, w in ws) - 1) > STOCHASTIC_TOL:
            raise InvalidInput("Bernoulli weights must sum to 1")
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "weights", ws)

    @classmethod
    def uniform(cls, params: AlphabetParams, ambient) -> "Bernoulli":
        symbols = params.alphabet(Ambient.parse(ambient)).symbols
        return cls(params, ambient, {s: Fraction(1, len(symbols)) for s in symbols})

    @cached_property
    def weight(self) -> dict:
        return dict(self.weights)

    @property
    def exact(self) -> bool:
        return all(is_exact(w) for _, w in self.weights)

    def cylinder(self, word):
        word = self.alphabet.check(word)
        p = Fraction(1) if self.exact else 1.0
        for s in word:
            p *= self.weight[s]
        return p

    def as_markov(self) -> "Markov":
        row = [w for _, w in self.weights]
        n = len(row)
        kernel = np.array([row] * n, dtype=object if self.exact else float)
        return Markov(self.params, self.ambient, kernel)


# --------------------------------------------------------------------------
# Markov


def gth_stationary(P) -> np.ndarray:
    """Stationary vector of an irreducible row-stochastic matrix (GTH).

    Subtraction free, so it is exact on object arrays of Fractions and
    numerically stable on floats.
    """
    A = np.array(P, dtype=object if P.dtype == object else float, copy=True)
    n = A.shape[0]
    for k in range(n - 1, 0, -1):
        s = A[k, :k].sum()
        A[:k, k] = A[:k, k] / s
        A[:k, :k] = A[:k, :k] + np.outer(A[:k, k], A[k, :k])
    pi = np.empty(n, dtype=A.dtype)
    pi[0] = Fraction(1) if A.dtype == object else 1.0
    for k in range(1, n):
        pi[k] = pi[:k] @ A[:k, k]
    return pi / pi.sum()


class Markov(MeasureSpec):
    """Stationary Markov chain on hidden states, each state emitting a label.

    With the default labels (one state per alphabet symbol) this is an
    ordinary first-order Markov measure.  Several states may share a label;
    the measure is then a function of a Markov chain.
    """

    def __init__(self, params: AlphabetParams, ambient, kernel, labels=None,
                 stationary=None):
        ambient = Ambient.parse(ambient)
        _collapsed_only(ambient, "Markov")
        alphabet = params.alphabet(ambient)
        kernel = np.asarray(kernel)
        exact = kernel.dtype == object
        if not exact:
            kernel = kernel.astype(float)
        n = kernel.shape[0]
        if kernel.ndim != 2 or kernel.shape[1] != n:
            raise InvalidInput("kernel must be square")
        labels = tuple(alphabet.symbols if labels is None else labels)
        if len(labels) != n:
            raise InvalidInput(f"{len(labels)} labels for {n} states")
        alphabet.check(labels)
        if (kernel < 0).any():
            raise InvalidInput("negative kernel entry")
        rows = kernel.sum(axis=1)
        if any(abs(r - 1) > STOCHASTIC_TOL for r in rows):
            raise InvalidInput("kernel rows must sum to 1")
        ncomp, _ = connected_components((kernel > 0).astype(int), directed=True,
                                        connection="strong")
        if ncomp != 1:
            raise InvalidInput("kernel is not irreducible")
        pi = gth_stationary(kernel)
        if stationary is not None:
            given = np.asarray(stationary, dtype=object if exact else float)
            if np.max(np.abs((given - pi).astype(float))) > STATIONARY_TOL:
                raise InvalidInput("given stationary vector does not satisfy pi P = pi")
        self.params = params
        self.ambient = ambient
        self.kernel = kernel
        self.labels = labels
        self.stationary = pi

    @property
    def exact(self) -> bool:
        return self.kernel.dtype == object

    @property
    def n_states(self) -> int:
        return len(self.labels)

    @property
    def plain(self) -> bool:
        return len(set(self.labels)) == len(self.labels)

    def __eq__(self, other):
        return (isinstance(other, Markov) and self.params == other.params
                and self.ambient is other.ambient and self.labels == other.labels
                and self.kernel.shape == other.kernel.shape
                and bool((self.kernel == other.kernel).all()))

    def __hash__(self):
        return hash((self.params, self.ambient, self.labels))

    def __repr__(self):
        return f"Markov({self.ambient.value}, {self.n_states} states)"

    @cached_property
    def masks(self) -> dict:
        return {s: np.array([lab == s for lab in self.labels]) for s in self.alphabet.symbols}

    @cached_property
    def float_kernel(self) -> np.ndarray:
        return self.kernel.astype(float)

    @cached_property
    def float_stationary(self) -> np.ndarray:
        return self.stationary.astype(float)

    @cached_property
    def reversed_kernel(self) -> np.ndarray:
        pi = self.float_stationary
        return (self.float_kernel.T * pi[None, :]) / pi[:, None]

    def strictly_positive(self) -> bool:
        return bool((self.kernel > 0).all())

    def backward_vector(self, word):
        """b_s = P(state at 0 is s emits word_0, then word_1.. follow | s)."""
        P = self.kernel
        one = Fraction(1) if self.exact else 1.0
        b = np.array([one] * self.n_states, dtype=P.dtype)
        for tok in reversed(word[1:]):
            b = P @ np.where(self.masks[tok], b, 0 * one)
        return np.where(self.masks[word[0]], b, 0 * one)

    def cylinder(self, word):
        word = self.alphabet.check(word)
        if not word:
            return Fraction(1) if self.exact else 1.0
        return self.stationary @ self.backward_vector(word)


# --------------------------------------------------------------------------
# CO


@dataclass(frozen=True)
class CO(MeasureSpec):
    """Equidistribution on the orbit of one periodic point."""

    point: PeriodicPoint

    @property
    def params(self):
        return self.point.params

    @property
    def ambient(self):
        return self.point.ambient

    @property
    def exact(self) -> bool:
        return True

    @classmethod
    def of(cls, text: str, M: int, N: int, ambient="SigmaD") -> "CO":
        return cls(PeriodicPoint.of(text, M, N, ambient))

    def cylinder(self, word):
        word = self.alphabet.check(word)
        cyc = self.point.cycle
        p = len(cyc)
        if not word:
            return Fraction(1)
        hits = sum(1 for i in range(p)
                   if all(cyc[(i + j) % p] == word[j] for j in range(len(word))))
        return Fraction(hits, p)


# --------------------------------------------------------------------------
# transport condition and pushforward


def transport_condition(nu: MeasureSpec, gamma: str):
    """Integral of E_gamma = 2 * 1[indexed bracket of side gamma] + 1[unit]."""
    if nu.ambient is not gamma_ambient(gamma):
        raise InvalidInput(f"transport condition for {gamma} needs a measure on "
                           f"{gamma_ambient(gamma).value}, got {nu.ambient.value}")
    M, N = nu.params.M, nu.params.N
    brackets = [left(k) if gamma == "alpha" else right(k) for k in range(1, M + 1)]
    units = [f"U{l}" for l in range(1, N + 1)]
    return 2 * sum(nu.cylinder((s,)) for s in brackets) + sum(nu.cylinder((s,)) for s in units)


class Pushforward(MeasureSpec):
    """The image of a measure on Sigma_gamma under the reconstruction map."""

    def __init__(self, gamma: str, inner: MeasureSpec):
        if gamma not in ("alpha", "beta"):
            raise InvalidInput(f"gamma must be 'alpha' or 'beta', got {gamma!r}")
        if inner.ambient is not gamma_ambient(gamma):
            raise InvalidInput(f"inner measure must live on {gamma_ambient(gamma).value}")
        value = transport_condition(inner, gamma)
        if not value > 1:
            raise TransportError(
                f"transport condition fails: integral of E_{gamma} = {value} <= 1")
        self.gamma = gamma
        self.inner = inner
        self.params = inner.params
        self.ambient = Ambient.SIGMA_D

    def __eq__(self, other):
        return isinstance(other, Pushforward) and self.gamma == other.gamma and self.inner == other.inner

    def __hash__(self):
        return hash(("pushforward", self.gamma, self.inner))

    def __repr__(self):
        return f"Pushforward({self.gamma}, {self.inner!r})"

    @property
    def exact(self) -> bool:
        return isinstance(self.inner, (Bernoulli, CO)) and self.inner.exact

    @cached_property
    def first_passage(self) -> np.ndarray:
        return first_passage_matrix(self.inner, self.gamma)

    def cylinder(self, word):
        word = self.alphabet.check(word)
        if not word:
            return Fraction(1) if self.exact else 1.0
        inner = self.inner
        if isinstance(inner, CO):
            return CO(reconstruct(inner.point, self.gamma)).cylinder(word)
        red = reduce(word)
        if red.zero:
            return Fraction(0) if self.exact else 0.0
        collapsed = collapse_word(word, self.gamma)
        # indices the out-of-window partners must carry, in scan order
        required = red.rights if self.gamma == "alpha" else tuple(reversed(red.lefts))
        if isinstance(inner, Bernoulli):
            side = [left(k) if self.gamma == "alpha" else right(k)
                    for k in range(1, self.params.M + 1)]
            total = sum(inner.weight[s] for s in side)
            p = inner.cylinder(collapsed)
            for k in required:
                s = left(k) if self.gamma == "alpha" else right(k)
                p *= inner.weight[s] / total
            return p
        if isinstance(inner, Markov):
            return _markov_pushforward_cylinder(inner, self.gamma, collapsed, required,
                                                self.first_passage)
        raise InvalidInput(f"unsupported inner measure {inner!r}")


def first_passage_matrix(inner: "Markov", gamma: str, tol: float = 1e-15,
                         max_iter: int = 100000) -> np.ndarray:
    """G[s, s'] = P(the walk away from state s first closes one level at s').

    For gamma=alpha the walk runs leftwards (time-reversed chain): an indexed
    left bracket closes a level, B* opens one.  For gamma=beta it runs
    rightwards with the roles of the sides exchanged.  G is the minimal
    nonnegative solution of G = C + U G + O G G.
    """
    if not isinstance(inner, Markov):
        inner = inner.as_markov()
    T = inner.reversed_kernel if gamma == "alpha" else inner.float_kernel
    closing = np.array([role(l) == ("left" if gamma == "alpha" else "right")
                        and bracket_index(l) is not None for l in inner.labels])
    opening = np.array([l == (COLLAPSED_RIGHT if gamma == "alpha" else COLLAPSED_LEFT)
                        for l in inner.labels])
    neutral = ~(closing | opening)
    C = T * closing[None, :]
    U = T * neutral[None, :]
    O = T * opening[None, :]
    eye = np.eye(len(inner.labels))
    G = np.zeros_like(T)
    for _ in range(max_iter):
        G_new = np.linalg.solve(eye - U - O @ G, C)
        if np.max(np.abs(G_new - G)) < tol:
            return G_new
        G = G_new
    raise ResourceError("first-passage iteration did not converge")


def _markov_pushforward_cylinder(inner: Markov, gamma, collapsed, required, G) -> float:
    masks = {s: m.astype(float) for s, m in inner.masks.items()}
    tail = np.ones(inner.n_states)
    for k in reversed(required):
        s = left(k) if gamma == "alpha" else right(k)
        tail = G @ (masks[s] * tail)
    P = inner.float_kernel
    if gamma == "alpha":
        b = np.ones(inner.n_states)
        for tok in reversed(collapsed[1:]):
            b = P @ (masks[tok] * b)
        b = masks[collapsed[0]] * b
        return float(inner.float_stationary @ (b * tail))
    f = inner.float_stationary * masks[collapsed[0]]
    for tok in collapsed[1:]:
        f = (f @ P) * masks[tok]
    return float(f @ tail)


# --------------------------------------------------------------------------
# evaluation


def cylinder_prob(mu: MeasureSpec, q):
    """mu([word]); shift invariance makes the anchor irrelevant."""
    word = q.word if isinstance(q, CylinderQuery) else tuple(q)
    return mu.cylinder(word)


def integral(mu: MeasureSpec, f: LocallyConstantFn):
    if f.params != mu.params or f.ambient is not mu.ambient:
        raise InvalidInput("function and measure live on different shifts")
    listed_mass = 0
    total = 0
    for w, v in f.table.items():
        p = mu.cylinder(w)
        listed_mass += p
        total += v * p
    return total + f.default * (1 - listed_mass)


def _plogp(p) -> float:
    p = float(p)
    return p * math.log(p) if p > 0 else 0.0


def entropy(mu: MeasureSpec) -> float:
    """Metric entropy.  For hidden-state Markov specs: certified lower bound."""
    if isinstance(mu, Bernoulli):
        return -sum(_plogp(w) for _, w in mu.weights)
    if isinstance(mu, CO):
        return 0.0
    if isinstance(mu, Pushforward):
        return entropy(mu.inner)
    if isinstance(mu, Markov):
        if mu.plain:
            pi = mu.float_stationary
            P = mu.float_kernel
            return -float(sum(pi[a] * _plogp(P[a, b]) for a in range(len(pi))
                              for b in range(len(pi))))
        return markov_entropy_bounds(mu)[0]
    raise InvalidInput(f"unsupported measure {mu!r}")


def markov_entropy_bounds(mu: Markov, k: int = 3) -> tuple[float, float]:
    """(H(Y_k | Y_1..Y_{k-1}, S_1), H(Y_k | Y_1..Y_{k-1})) for a hidden chain.

    Both bracket the entropy rate of the emitted process and converge to it.
    """
    P = mu.float_kernel
    pi = mu.float_stationary
    masks = {s: m.astype(float) for s, m in mu.masks.items()}
    symbols = mu.alphabet.symbols

    def joint(length):
        # rows: start state; entries: probability of emitted word (start included)
        out = {}
        frontier = {(): np.diag(pi)}
        for _ in range(length):
            new = {}
            for w, mat in frontier.items():
                step_mat = mat if not w else mat @ P
                for s in symbols:
                    m = step_mat * masks[s][None, :]
                    if m.any():
                        new[w + (s,)] = m
            frontier = new
        for w, mat in frontier.items():
            out[w] = mat.sum(axis=1)
        return out

    def h_block(length, with_state):
        if length == 0:
            return -sum(_plogp(x) for x in pi) if with_state else 0.0
        dist = joint(length)
        if with_state:
            return -sum(_plogp(x) for v in dist.values() for x in v)
        return -sum(_plogp(v.sum()) for v in dist.values())

    lower = h_block(k, True) - h_block(k - 1, True)
    upper = h_block(k, False) - h_block(k - 1, False)
    return lower, upper


def block_entropy(mu: MeasureSpec, k: int) -> float:
    """H_k = -sum over words of length k of p log p."""
    symbols = mu.alphabet.symbols
    return -sum(_plogp(mu.cylinder(w)) for w in itertools.product(symbols, repeat=k))


def entropy_increment(mu: MeasureSpec, k: int) -> float:
    """H_k - H_{k-1}: decreases to the entropy of mu."""
    if k < 1:
        raise InvalidInput("k must be >= 1")
    return block_entropy(mu, k) - (block_entropy(mu, k - 1) if k > 1 else 0.0)


def drift_of(mu: MeasureSpec):
    """Mean height increment: mass of left brackets minus mass of right brackets."""
    if isinstance(mu, Pushforward):
        inner = mu.inner
        M = mu.params.M
        if mu.gamma == "alpha":
            return sum(inner.cylinder((left(k),)) for k in range(1, M + 1)) - inner.cylinder((COLLAPSED_RIGHT,))
        return inner.cylinder((COLLAPSED_LEFT,)) - sum(inner.cylinder((right(k),)) for k in range(1, M + 1))
    total = 0
    for s in mu.alphabet.symbols:
        r = role(s)
        if r == "left":
            total += mu.cylinder((s,))
        elif r == "right":
            total -= mu.cylinder((s,))
    return total


def classify_measure(mu: MeasureSpec, tol: float = 1e-12) -> PeriodicClass:
    if mu.ambient is not Ambient.SIGMA_D:
        raise InvalidInput("classify_measure expects a measure on Sigma_D")
    d = drift_of(mu)
    if not is_exact(d) and abs(d) <= tol:
        d = 0
    if d > 0:
        return PeriodicClass.CLASS_ALPHA
    if d < 0:
        return PeriodicClass.CLASS_BETA
    return PeriodicClass.CLASS0


def fully_supported(mu: MeasureSpec, max_len: int = 2) -> bool:
    """Positive mass on every admissible cylinder of length <= max_len."""
    import itertools
    from .symbolic import is_admissible
    symbols = mu.alphabet.symbols
    for n in range(1, max_len + 1):
        for w in itertools.product(symbols, repeat=n):
            if mu.ambient is Ambient.SIGMA_D and not is_admissible(w):
                continue
            if not mu.cylinder(w) > 0:
                return False
    return True


# --------------------------------------------------------------------------
# serialization


def spec_to_json(mu: MeasureSpec) -> dict:
    if isinstance(mu, Bernoulli):
        return {"type": "bernoulli", "M": mu.params.M, "N": mu.params.N,
                "ambient": mu.ambient.value,
                "weights": {s: format_number(w) for s, w in mu.weights}}
    if isinstance(mu, Markov):
        return {"type": "markov", "M": mu.params.M, "N": mu.params.N,
                "ambient": mu.ambient.value, "labels": list(mu.labels),
                "kernel": [[format_number(x) for x in row] for row in mu.kernel]}
    if isinstance(mu, CO):
        return {"type": "co", **mu.point.to_json()}
    if isinstance(mu, Pushforward):
        return {"type": "pushforward", "gamma": mu.gamma, "inner": spec_to_json(mu.inner)}
    raise InvalidInput(f"cannot serialize {mu!r}")


def spec_from_json(obj, M: int | None = None, N: int | None = None) -> MeasureSpec:
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "type" not in obj:
        raise InvalidInput("measure JSON needs a 'type' field")
    kind = str(obj["type"]).lower()
    if kind == "pushforward":
        if "gamma" not in obj or "inner" not in obj:
            raise InvalidInput("pushforward JSON needs 'gamma' and 'inner'")
        return Pushforward(obj["gamma"], spec_from_json(obj["inner"], M, N))
    M = obj.get("M", M)
    N = obj.get("N", N)
    if M is None or N is None:
        raise InvalidInput("measure JSON needs M and N")
    params = AlphabetParams(int(M), int(N))
    try:
        if kind == "bernoulli":
            weights = {s: parse_number(w) for s, w in obj["weights"].items()}
            return Bernoulli(params, obj["ambient"], weights)
        if kind == "markov":
            rows = [[parse_number(x) for x in row] for row in obj["kernel"]]
            exact = all(isinstance(x, Fraction) for row in rows for x in row)
            kernel = np.array(rows, dtype=object if exact else float)
            return Markov(params, obj["ambient"], kernel, obj.get("labels"), obj.get("stationary"))
        if kind == "co":
            return CO(PeriodicPoint(parse_word(obj["cycle"]), params,
                                    Ambient.parse(obj.get("ambient", "SigmaD"))))
    except KeyError as exc:
        raise InvalidInput(f"measure JSON missing field {exc}") from None
    raise InvalidInput(f"unknown measure type {obj['type']!r}")


def describe(mu: MeasureSpec) -> str:
    if isinstance(mu, CO):
        return f"CO{mu.point}"
    if isinstance(mu, Pushforward):
        return f"psi_{mu.gamma}*({describe(mu.inner)})"
    if isinstance(mu, Bernoulli):
        return "Bernoulli(" + ", ".join(f"{s}:{w}" for s, w in mu.weights) + ")"
    return repr(mu)


__all__ = [
    "Bernoulli", "CO", "CylinderQuery", "Markov", "MeasureSpec", "Pushforward",
    "block_entropy", "classify_measure", "entropy_increment", "cylinder_prob", "describe", "drift_of",
    "entropy", "first_passage_matrix", "fully_supported", "gth_stationary", "integral",
    "markov_entropy_bounds", "spec_from_json", "spec_to_json", "transport_condition",
    "format_word",
]
