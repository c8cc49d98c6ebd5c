"""Seeded sampling of finite windows from measure specs."""

from __future__ import annotations

import bisect

import numpy as np

from .embeddings import reconstruct
from .errors import InvalidInput, ResourceError
from .measures import CO, Bernoulli, Markov, MeasureSpec, Pushforward
from .symbolic import COLLAPSED_LEFT, COLLAPSED_RIGHT, bracket_index, left, right, role


class _Stream:
    """Draws a window of the inner measure and extends it on either side."""

    def __init__(self, mu: MeasureSpec, rng: np.random.Generator):
        self.rng = rng
        if isinstance(mu, Bernoulli):
            mu = mu.as_markov()
        if not isinstance(mu, Markov):
            raise InvalidInput(f"cannot stream {mu!r}")
        self.labels = mu.labels
        self.fwd = np.cumsum(mu.float_kernel, axis=1).tolist()
        self.bwd = np.cumsum(mu.reversed_kernel, axis=1).tolist()
        self.start = np.cumsum(mu.float_stationary).tolist()
        self._buf = []

    def _pick(self, cdf) -> int:
        # uniforms drawn in blocks; per-call generator overhead dominates otherwise
        if not self._buf:
            self._buf = self.rng.random(4096).tolist()[::-1]
        return min(bisect.bisect_right(cdf, self._buf.pop()), len(cdf) - 1)

    def window(self, n: int):
        s = self._pick(self.start)
        states = [s]
        for _ in range(n - 1):
            s = self._pick(self.fwd[s])
            states.append(s)
        return states

    def walk(self, s: int, forward: bool):
        table = self.fwd if forward else self.bwd
        while True:
            s = self._pick(table[s])
            yield s


def _resolve(stream: _Stream, states, gamma, max_extension):
    """Reconstruct the Sigma_D window from a window of inner states."""
    labels = stream.labels
    toks = [labels[s] for s in states]
    opener, closer_role = ("left", "right") if gamma == "alpha" else ("right", "left")
    collapsed = COLLAPSED_RIGHT if gamma == "alpha" else COLLAPSED_LEFT
    order = range(len(toks)) if gamma == "alpha" else range(len(toks) - 1, -1, -1)
    # stack pass in the direction where partners precede the collapsed bracket
    stack = []
    unmatched = []
    out = list(toks)
    for i in order:
        t = toks[i]
        if t == collapsed:
            if stack:
                k = stack.pop()
                out[i] = right(k) if gamma == "alpha" else left(k)
            else:
                unmatched.append(i)
        elif role(t) == opener and bracket_index(t) is not None:
            stack.append(bracket_index(t))
    if not unmatched:
        return tuple(out)
    edge = states[0] if gamma == "alpha" else states[-1]
    extra = 0
    pending = list(unmatched)
    for used, s in enumerate(stream.walk(edge, forward=(gamma == "beta"))):
        if used >= max_extension:
            return None
        t = labels[s]
        if t == collapsed:
            extra += 1
        elif role(t) == opener and bracket_index(t) is not None:
            if extra:
                extra -= 1
            else:
                i = pending.pop(0)
                k = bracket_index(t)
                out[i] = right(k) if gamma == "alpha" else left(k)
                if not pending:
                    return tuple(out)


def _sample(mu: MeasureSpec, n: int, rng, max_extension: int, retries: int,
            stream: _Stream | None = None) -> tuple:
    if isinstance(mu, CO):
        cyc = mu.point.cycle
        return tuple(cyc[i % len(cyc)] for i in range(n))
    if isinstance(mu, Pushforward):
        if isinstance(mu.inner, CO):
            return _sample(CO(reconstruct(mu.inner.point, mu.gamma)), n, rng, max_extension, retries)
        stream = stream or _Stream(mu.inner, rng)
        for _ in range(retries + 1):
            out = _resolve(stream, stream.window(n), mu.gamma, max_extension)
            if out is not None:
                return out
        raise ResourceError(f"partner search exceeded {max_extension} symbols {retries + 1} times")
    stream = stream or _Stream(mu, rng)
    return tuple(stream.labels[s] for s in stream.window(n))


def sample(mu: MeasureSpec, n: int, seed: int, max_extension: int = 1_000_000,
           retries: int = 10) -> tuple:
    """A window of length n; CO measures are read from phase 0."""
    if n < 1:
        raise InvalidInput("sample length must be >= 1")
    return _sample(mu, n, np.random.default_rng(seed), max_extension, retries)


def sample_many(mu: MeasureSpec, n: int, count: int, seed: int,
                max_extension: int = 1_000_000, retries: int = 10) -> list[tuple]:
    """`count` independent windows of length n from one seeded generator."""
    if n < 1:
        raise InvalidInput("sample length must be >= 1")
    rng = np.random.default_rng(seed)
    if isinstance(mu, CO):
        cyc = mu.point.cycle
        phases = rng.integers(0, len(cyc), size=count)
        return [tuple(cyc[(p + i) % len(cyc)] for i in range(n)) for p in phases]
    if isinstance(mu, Pushforward) and isinstance(mu.inner, CO):
        return [_sample(mu, n, rng, max_extension, retries) for _ in range(count)]
    stream = _Stream(mu.inner if isinstance(mu, Pushforward) else mu, rng)
    return [_sample(mu, n, rng, max_extension, retries, stream) for _ in range(count)]
