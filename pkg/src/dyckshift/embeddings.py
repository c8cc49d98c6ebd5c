"""Collapse and reconstruction maps between Sigma_D and the two full shifts.

Everything here acts on periodic points, where the bracket matching of the
bi-infinite sequence is exactly computable from one period.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import InvalidInput, NoMatchError, PreconditionError
from .symbolic import (
    COLLAPSED_LEFT,
    COLLAPSED_RIGHT,
    AlphabetParams,
    Ambient,
    bracket_index,
    canonical_rotation,
    drift,
    format_word,
    gamma_ambient,
    left,
    parse_word,
    periodic_admissible,
    right,
    role,
    step,
)


@dataclass(frozen=True)
class PeriodicPoint:
    """A periodic sequence stored as its canonical block.

    The block is the least rotation of the primitive root, so two points are
    equal iff they lie on the same orbit.  Position 0 of the stored block is
    the phase convention for index-based queries.
    """

    cycle: tuple
    params: AlphabetParams
    ambient: Ambient = Ambient.SIGMA_D

    def __post_init__(self):
        ambient = Ambient.parse(self.ambient)
        alphabet = self.params.alphabet(ambient)
        cycle = alphabet.check(self.cycle)
        if not cycle:
            raise InvalidInput("periodic point needs a nonempty cycle")
        if ambient is Ambient.SIGMA_D and not periodic_admissible(cycle):
            raise InvalidInput(f"({format_word(cycle)})^inf is not a point of Sigma_D")
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "cycle", canonical_rotation(cycle, alphabet))

    @classmethod
    def of(cls, text: str, M: int, N: int, ambient="SigmaD") -> "PeriodicPoint":
        return cls(parse_word(text), AlphabetParams(M, N), Ambient.parse(ambient))

    @property
    def period(self) -> int:
        return len(self.cycle)

    @property
    def drift(self) -> int:
        return drift(self.cycle)

    def symbol(self, i: int) -> str:
        return self.cycle[i % len(self.cycle)]

    def to_json(self) -> dict:
        return {"ambient": self.ambient.value, "M": self.params.M, "N": self.params.N,
                "cycle": format_word(self.cycle)}

    @classmethod
    def from_json(cls, obj, M: int | None = None, N: int | None = None) -> "PeriodicPoint":
        if isinstance(obj, str):
            obj = json.loads(obj)
        M = obj.get("M", M)
        N = obj.get("N", N)
        if M is None or N is None:
            raise InvalidInput("periodic point JSON needs M and N")
        return cls(parse_word(obj["cycle"]), AlphabetParams(int(M), int(N)),
                   Ambient.parse(obj.get("ambient", "SigmaD")))

    def __str__(self) -> str:
        return f"({format_word(self.cycle)})^inf"


@dataclass(frozen=True)
class MatchResult:
    position: int
    partner: int
    partner_symbol: str


def _require(x: PeriodicPoint, ambient: Ambient):
    if x.ambient is not ambient:
        raise PreconditionError(f"expected a point of {ambient.value}, got {x.ambient.value}")


def collapse_word(word, gamma: str) -> tuple:
    """Symbolwise collapse: forget right (gamma=alpha) or left (beta) indices."""
    if gamma == "alpha":
        return tuple(COLLAPSED_RIGHT if role(t) == "right" else t for t in word)
    if gamma == "beta":
        return tuple(COLLAPSED_LEFT if role(t) == "left" else t for t in word)
    raise InvalidInput(f"gamma must be 'alpha' or 'beta', got {gamma!r}")


def collapse(x: PeriodicPoint, gamma: str) -> PeriodicPoint:
    _require(x, Ambient.SIGMA_D)
    return PeriodicPoint(collapse_word(x.cycle, gamma), x.params, gamma_ambient(gamma))


def in_B(x: PeriodicPoint, gamma: str) -> bool:
    """All right (alpha) / left (beta) brackets of x are closed."""
    _require(x, Ambient.SIGMA_D)
    if gamma == "alpha":
        return x.drift >= 0
    if gamma == "beta":
        return x.drift <= 0
    raise InvalidInput(f"gamma must be 'alpha' or 'beta', got {gamma!r}")


def in_K(y: PeriodicPoint, gamma: str) -> bool:
    _require(y, gamma_ambient(gamma))
    return y.drift >= 0 if gamma == "alpha" else y.drift <= 0


def match_position(y, i: int) -> MatchResult:
    """Partner of the collapsed bracket at index i of y.

    `y` is a PeriodicPoint or a raw block (read in its own phase).  On
    Sigma_alpha a collapsed right bracket at i is closed by the left bracket
    at max{j <= i : H_j = H_{i+1}}.  On Sigma_beta a collapsed left bracket
    at i is closed by the right bracket at j - 1 where j = min{j > i : H_j = H_i}.
    """
    if isinstance(y, PeriodicPoint):
        block, ambient = y.cycle, y.ambient
    else:
        block = tuple(y)
        if COLLAPSED_RIGHT in block:
            ambient = Ambient.SIGMA_ALPHA
        elif COLLAPSED_LEFT in block:
            ambient = Ambient.SIGMA_BETA
        else:
            raise PreconditionError("block has no collapsed bracket")
    n = len(block)
    tok = block[i % n]
    limit = n * (2 + abs(drift(block)))
    if ambient is Ambient.SIGMA_ALPHA:
        if tok != COLLAPSED_RIGHT:
            raise PreconditionError(f"symbol at {i} is {tok}, not {COLLAPSED_RIGHT}")
        rel = 0
        for j in range(i, i - limit - 1, -1):
            rel -= step(block[j % n])
            if rel == 0:
                return MatchResult(i, j, block[j % n])
    elif ambient is Ambient.SIGMA_BETA:
        if tok != COLLAPSED_LEFT:
            raise PreconditionError(f"symbol at {i} is {tok}, not {COLLAPSED_LEFT}")
        rel = 0
        for j in range(i, i + limit + 1):
            rel += step(block[j % n])
            if rel == 0:
                return MatchResult(i, j, block[j % n])
    else:
        raise PreconditionError("match_position needs a point of Sigma_alpha or Sigma_beta")
    raise NoMatchError(f"bracket at {i} of ({format_word(block)})^inf is never closed")


def reconstruct(y: PeriodicPoint, gamma: str) -> PeriodicPoint:
    """Inverse of collapse on K_gamma: re-index every collapsed bracket."""
    _require(y, gamma_ambient(gamma))
    if not in_K(y, gamma):
        raise PreconditionError(f"{y} is not in K_{gamma}")
    target = COLLAPSED_RIGHT if gamma == "alpha" else COLLAPSED_LEFT
    out = []
    for i, tok in enumerate(y.cycle):
        if tok == target:
            k = bracket_index(match_position(y, i).partner_symbol)
            out.append(right(k) if gamma == "alpha" else left(k))
        else:
            out.append(tok)
    return PeriodicPoint(tuple(out), y.params, Ambient.SIGMA_D)


def rotate(x: PeriodicPoint, s: int) -> tuple:
    """Block of sigma^s x starting at phase 0 (not canonicalized)."""
    s %= x.period
    return x.cycle[s:] + x.cycle[:s]
