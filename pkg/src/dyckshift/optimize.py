"""Ergodic optimization of locally constant functions over periodic orbits.

Every cyclically admissible word has a rotation of one of two shapes:
  * no unmatched right bracket (drift >= 0, rotate to the first height minimum);
  * no unmatched left bracket (drift <= 0, the mirror statement).
Both shapes are recognised left to right by a bracket stack: in the first,
a right bracket must close the top of the stack; in the second, a right
bracket at an empty stack is allowed and the stack must be empty at the end.
The search walks these stacks, carrying the first and last m-1 symbols
(m = window width of f) so the windows wrapping around the cycle can be
scored when the cycle closes.  Values are scaled to integers, so means are
exact.  Cycles shorter than the window are scored by direct enumeration.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .embeddings import PeriodicPoint
from .errors import InvalidInput, ResourceError
from .functions import LocallyConstantFn
from .measures import CO, MeasureSpec, integral
from .numbers import format_number
from .symbolic import (Ambient, bracket_index, format_word, periodic_admissible, role)

DEFAULT_MAX_STATES = 3_000_000
DEFAULT_MAX_WITNESSES = 64


@dataclass(frozen=True)
class OptimizationResult:
    lower_bound: Fraction
    argmax_orbits: tuple
    period_budget: int
    upper_bound: Fraction
    best_by_length: dict = field(default_factory=dict, compare=False)
    partial: bool = False
    witnesses_truncated: bool = False

    def to_json(self) -> dict:
        return {
            "lower_bound": format_number(self.lower_bound),
            "upper_bound": format_number(self.upper_bound),
            "period_budget": self.period_budget,
            "argmax_orbits": [format_word(o.cycle) for o in self.argmax_orbits],
            "best_by_length": {str(n): format_number(v) for n, v in sorted(self.best_by_length.items())},
            "partial": self.partial,
            "witnesses_truncated": self.witnesses_truncated,
        }


@dataclass(frozen=True)
class MaximizerProbe:
    tolerance: Fraction
    bound: Fraction
    witnesses: tuple
    truncated: bool = False

    @property
    def multiple(self) -> bool:
        return len(self.witnesses) >= 2

    def to_json(self) -> dict:
        return {"tolerance": format_number(self.tolerance), "bound": format_number(self.bound),
                "witnesses": [format_word(mu.point.cycle) for mu in self.witnesses],
                "multiple": self.multiple, "truncated": self.truncated}


def cyclic_mean(f: LocallyConstantFn, cycle) -> Fraction:
    n = len(cycle)
    m = f.width
    total = sum(Fraction(f(tuple(cycle[(i + j) % n] for j in range(m)))) for i in range(n))
    return total / n


def _scaled_table(f: LocallyConstantFn):
    values = [Fraction(v) for v in f.table.values()] + [Fraction(f.default)]
    scale = 1
    for v in values:
        scale = scale * v.denominator // math.gcd(scale, v.denominator)
    table = {w: int(Fraction(v) * scale) for w, v in f.table.items()}
    return table, int(Fraction(f.default) * scale), scale


def _short_cycles(f: LocallyConstantFn, upto: int):
    """All cyclically admissible words of length n <= upto, by brute force."""
    symbols = f.params.alphabet(Ambient.SIGMA_D).symbols
    for n in range(1, upto + 1):
        for w in itertools.product(symbols, repeat=n):
            if periodic_admissible(w):
                yield w


class _Search:
    def __init__(self, f: LocallyConstantFn, p: int, d_max: int, max_states: int):
        self.f = f
        self.p = p
        self.d_max = d_max
        self.max_states = max_states
        self.m = f.width
        self.table, self.default, self.scale = _scaled_table(f)
        self.symbols = f.params.alphabet(Ambient.SIGMA_D).symbols
        self.best = {}        # n -> best scaled total
        self.closers = {}     # n -> list of (mode, layer state) achieving best
        self.layers = {"neg": [], "pos": []}
        self.states_seen = 0
        self.done = 0

    def value(self, window) -> int:
        return self.table.get(window, self.default)

    def _step(self, stack, s, mode):
        r = role(s)
        if r == "left":
            if len(stack) >= self.d_max:
                return None
            return stack + (bracket_index(s),)
        if r == "right":
            if stack:
                return stack[:-1] if stack[-1] == bracket_index(s) else None
            return stack if mode == "pos" else None
        return stack

    def _close(self, mode, n, layer):
        m = self.m
        for state, (val, _) in layer.items():
            stack, head, tail = state
            if mode == "pos" and stack:
                continue
            total = val
            for j in range(1, m):
                total += self.value(tail[len(tail) - j:] + head[: m - j])
            cur = self.best.get(n)
            if cur is None or total > cur:
                self.best[n] = total
                self.closers[n] = [(mode, state)]
            elif total == cur:
                self.closers[n].append((mode, state))

    def run(self):
        m = self.m
        for n, w in ((len(w), w) for w in _short_cycles(self.f, min(m - 1, self.p))):
            total = sum(self.value(tuple(w[(i + j) % n] for j in range(m))) for i in range(n))
            cur = self.best.get(n)
            if cur is None or total > cur:
                self.best[n], self.closers[n] = total, [("word", w)]
            elif total == cur:
                self.closers[n].append(("word", w))
        if self.p < m:
            return
        for mode in ("neg", "pos"):
            self.layers[mode].append({((), (), ()): (0, [])})
        # both shapes advance together so every finished length is final
        for i in range(self.p):
            for mode in ("neg", "pos"):
                layer = self._extend(self.layers[mode][-1], mode)
                self.states_seen += len(layer)
                if self.states_seen > self.max_states:
                    raise ResourceError(f"search exceeded {self.max_states} states at step {i + 1}")
                self.layers[mode].append(layer)
            self.done = i + 1
            if i + 1 >= m:
                for mode in ("neg", "pos"):
                    self._close(mode, i + 1, self.layers[mode][-1])

    def _extend(self, layer, mode):
        m = self.m
        nxt = {}
        for state, (val, _) in layer.items():
            stack, head, tail = state
            for s in self.symbols:
                st = self._step(stack, s, mode)
                if st is None:
                    continue
                v = val
                if len(tail) == m - 1:
                    v += self.value(tail + (s,))
                nh = head + (s,) if len(head) < m - 1 else head
                nt = (tail + (s,))[-(m - 1):] if m > 1 else ()
                key = (st, nh, nt)
                cur = nxt.get(key)
                if cur is None or v > cur[0]:
                    nxt[key] = (v, [(state, s)])
                elif v == cur[0]:
                    cur[1].append((state, s))
        return nxt

    def words(self, mode, n, state, limit):
        """Words of length n ending in `state` along optimal predecessors."""
        if mode == "word":
            yield state
            return
        layers = self.layers[mode]
        count = 0

        def back(k, st, suffix):
            nonlocal count
            if count >= limit:
                return
            if k == 0:
                count += 1
                yield tuple(reversed(suffix))
                return
            for prev, s in layers[k][st][1]:
                suffix.append(s)
                yield from back(k - 1, prev, suffix)
                suffix.pop()

        yield from back(n, state, [])


def _result(search: _Search, p: int, max_witnesses: int, partial: bool, upper) -> OptimizationResult:
    if not search.best:
        raise ResourceError("no cycle completed within the search budget")
    means = {n: Fraction(v, n * search.scale) for n, v in search.best.items()}
    top = max(means.values())
    orbits = {}
    truncated = False
    for n in sorted(means):
        if means[n] != top:
            continue
        for mode, state in search.closers[n]:
            for w in search.words(mode, n, state, max_witnesses + 1):
                pt = PeriodicPoint(w, search.f.params, Ambient.SIGMA_D)
                orbits.setdefault(pt.cycle, pt)
                if len(orbits) > max_witnesses:
                    truncated = True
                    break
            if truncated:
                break
        if truncated:
            break
    alphabet = search.f.params.alphabet(Ambient.SIGMA_D)
    ordered = sorted(orbits.values(), key=lambda o: (len(o.cycle), alphabet.sort_key(o.cycle)))
    return OptimizationResult(top, tuple(ordered[:max_witnesses]), p, upper, means, partial, truncated)


def lambda_periodic(f: LocallyConstantFn, p: int, d_max: int | None = None,
                    max_witnesses: int = DEFAULT_MAX_WITNESSES,
                    max_states: int = DEFAULT_MAX_STATES) -> OptimizationResult:
    """Best cyclic mean of f over cyclically admissible words of length <= p.

    Cycles whose stack depth exceeds d_max (default p, i.e. no restriction)
    are skipped.  Exceeding max_states raises ResourceError whose `partial`
    attribute holds the result over the lengths finished so far.
    """
    if f.ambient is not Ambient.SIGMA_D:
        raise InvalidInput("lambda_periodic expects a function on Sigma_D")
    if p < 1:
        raise InvalidInput("period budget must be >= 1")
    d_max = p if d_max is None else d_max
    if d_max < 0:
        raise InvalidInput("depth cap must be >= 0")
    upper = Fraction(f.max_value())
    search = _Search(f, p, d_max, max_states)
    try:
        search.run()
    except ResourceError as exc:
        try:
            exc.partial = _result(search, p, max_witnesses, True, upper)
        except ResourceError:
            exc.partial = None
        raise
    return _result(search, p, max_witnesses, False, upper)


def _cycles_upto(params, p: int):
    """Canonical cyclically admissible words of length <= p (DFS, both shapes)."""
    symbols = params.alphabet(Ambient.SIGMA_D).symbols
    seen = set()
    for n in range(1, p + 1):
        for w in itertools.product(symbols, repeat=n):
            if not periodic_admissible(w):
                continue
            c = PeriodicPoint(w, params, Ambient.SIGMA_D)
            if c.cycle not in seen:
                seen.add(c.cycle)
                yield c


def maximizer_probe(f: LocallyConstantFn, p: int, tol=Fraction(0),
                    result: OptimizationResult | None = None,
                    max_witnesses: int = DEFAULT_MAX_WITNESSES) -> MaximizerProbe:
    """CO-measures of period <= p whose f-integral is within tol of the bound."""
    tol = Fraction(tol)
    if tol < 0:
        raise InvalidInput("tolerance must be >= 0")
    if result is None:
        result = lambda_periodic(f, p, max_witnesses=max_witnesses)
    if tol == 0:
        return MaximizerProbe(tol, result.lower_bound,
                              tuple(CO(o) for o in result.argmax_orbits), result.witnesses_truncated)
    out = []
    truncated = False
    for pt in _cycles_upto(f.params, p):
        if cyclic_mean(f, pt.cycle) >= result.lower_bound - tol:
            if len(out) == max_witnesses:
                truncated = True
                break
            out.append(CO(pt))
    return MaximizerProbe(tol, result.lower_bound, tuple(out), truncated)


def degenerate_fn(orbits, r: int) -> LocallyConstantFn:
    """0 on every window seen along a listed orbit, -1 elsewhere.

    f <= 0 everywhere and each listed CO-measure integrates to 0, so every
    one of them is maximizing.
    """
    orbits = list(orbits)
    if not orbits:
        raise InvalidInput("degenerate_fn needs at least one orbit")
    if r < 0:
        raise InvalidInput("radius must be >= 0")
    params = orbits[0].params
    m = 2 * r + 1
    table = {}
    for o in orbits:
        if o.params != params or o.ambient is not Ambient.SIGMA_D:
            raise InvalidInput("orbits must be periodic points of one Sigma_D")
        n = len(o.cycle)
        for i in range(n):
            table[tuple(o.cycle[(i + j) % n] for j in range(m))] = Fraction(0)
    return LocallyConstantFn(params, r, table, Fraction(-1))


def lambda_markov_lower(f: LocallyConstantFn, mu: MeasureSpec):
    """integral of f against an invariant measure: a lower bound for Lambda(f)."""
    if mu.ambient is not Ambient.SIGMA_D:
        raise InvalidInput("lambda_markov_lower expects a measure on Sigma_D")
    return integral(mu, f)


__all__ = [
    "MaximizerProbe", "OptimizationResult", "cyclic_mean", "degenerate_fn",
    "lambda_markov_lower", "lambda_periodic", "maximizer_probe",
]
