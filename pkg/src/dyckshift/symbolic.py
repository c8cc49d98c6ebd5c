"""Alphabets, words and the bracket monoid of the (M, N) Dyck-Motzkin shift.

Symbols are plain string tokens:

    "A1".."AM"   left brackets  (alpha_k)
    "B1".."BM"   right brackets (beta_k)
    "U1".."UN"   units          (1_l)
    "A*"         collapsed left bracket  (alphabet of Sigma_beta)
    "B*"         collapsed right bracket (alphabet of Sigma_alpha)

A word is a tuple of tokens.  Canonical order inside an alphabet is
lefts < units < rights, each block sorted by index.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import InvalidInput, PreconditionError, ResourceError

COLLAPSED_LEFT = "A*"
COLLAPSED_RIGHT = "B*"

Word = tuple


def left(k: int) -> str:
    return f"A{k}"


def right(k: int) -> str:
    return f"B{k}"


def unit(l: int) -> str:
    return f"U{l}"


def role(tok: str) -> str:
    """Return 'left', 'right' or 'unit'."""
    head = tok[:1]
    if head == "A":
        return "left"
    if head == "B":
        return "right"
    if head == "U":
        return "unit"
    raise InvalidInput(f"unknown symbol {tok!r}")


def bracket_index(tok: str) -> int | None:
    """Index k of an indexed bracket/unit; None for collapsed symbols."""
    tail = tok[1:]
    if tail == "*":
        return None
    return int(tail)


def step(tok: str) -> int:
    """Height increment G of one symbol: +1 left, 0 unit, -1 right."""
    r = role(tok)
    return 1 if r == "left" else (-1 if r == "right" else 0)


class Ambient(enum.Enum):
    SIGMA_D = "SigmaD"
    SIGMA_ALPHA = "SigmaAlpha"
    SIGMA_BETA = "SigmaBeta"

    @classmethod
    def parse(cls, value) -> "Ambient":
        if isinstance(value, Ambient):
            return value
        aliases = {"d": cls.SIGMA_D, "alpha": cls.SIGMA_ALPHA, "beta": cls.SIGMA_BETA}
        key = str(value)
        if key.lower() in aliases:
            return aliases[key.lower()]
        try:
            return cls(key)
        except ValueError:
            raise InvalidInput(f"unknown ambient {value!r}") from None


def gamma_ambient(gamma: str) -> Ambient:
    if gamma == "alpha":
        return Ambient.SIGMA_ALPHA
    if gamma == "beta":
        return Ambient.SIGMA_BETA
    raise InvalidInput(f"gamma must be 'alpha' or 'beta', got {gamma!r}")


@dataclass(frozen=True)
class AlphabetParams:
    M: int
    N: int

    def __post_init__(self):
        if not isinstance(self.M, int) or not isinstance(self.N, int):
            raise InvalidInput("M and N must be integers")
        if self.M < 2 or self.N < 0:
            raise InvalidInput(f"need M >= 2 and N >= 0, got M={self.M}, N={self.N}")

    def alphabet(self, ambient: Ambient | str = Ambient.SIGMA_D) -> "Alphabet":
        return _alphabet(self.M, self.N, Ambient.parse(ambient))


@dataclass(frozen=True)
class Alphabet:
    params: AlphabetParams
    ambient: Ambient
    symbols: tuple

    @property
    def size(self) -> int:
        return len(self.symbols)

    def order(self, tok: str) -> int:
        return _order(self)[tok]

    def __contains__(self, tok) -> bool:
        return tok in _order(self)

    def check(self, word: Iterable[str]) -> tuple:
        word = tuple(word)
        table = _order(self)
        for tok in word:
            if tok not in table:
                raise InvalidInput(f"symbol {tok!r} not in {self.ambient.value} alphabet "
                                   f"(M={self.params.M}, N={self.params.N})")
        return word

    def sort_key(self, word: Sequence[str]) -> tuple:
        table = _order(self)
        return tuple(table[t] for t in word)


@lru_cache(maxsize=None)
def _alphabet(M: int, N: int, ambient: Ambient) -> Alphabet:
    lefts = [left(k) for k in range(1, M + 1)]
    units = [unit(l) for l in range(1, N + 1)]
    rights = [right(k) for k in range(1, M + 1)]
    if ambient is Ambient.SIGMA_ALPHA:
        rights = [COLLAPSED_RIGHT]
    elif ambient is Ambient.SIGMA_BETA:
        lefts = [COLLAPSED_LEFT]
    return Alphabet(AlphabetParams(M, N), ambient, tuple(lefts + units + rights))


@lru_cache(maxsize=None)
def _order(alphabet: Alphabet) -> dict:
    return {tok: i for i, tok in enumerate(alphabet.symbols)}


def parse_word(text: str, alphabet: Alphabet | None = None) -> tuple:
    tokens = tuple(text.split())
    for tok in tokens:
        role(tok)
        tail = tok[1:]
        if tail != "*" and not (tail.isdigit() and int(tail) >= 1):
            raise InvalidInput(f"malformed token {tok!r}")
        if tail == "*" and tok[0] == "U":
            raise InvalidInput(f"malformed token {tok!r}")
    if alphabet is not None:
        alphabet.check(tokens)
    return tokens


def format_word(word: Sequence[str]) -> str:
    return " ".join(word)


# --------------------------------------------------------------------------
# monoid reduction


@dataclass(frozen=True)
class ReducedForm:
    """Normal form beta_{i1}..beta_{ip} alpha_{j1}..alpha_{jq}, or zero."""

    zero: bool
    rights: tuple = ()
    lefts: tuple = ()

    @property
    def is_identity(self) -> bool:
        return not self.zero and not self.rights and not self.lefts

    def as_word(self) -> tuple:
        if self.zero:
            raise PreconditionError("the zero element has no word form")
        return tuple(right(k) for k in self.rights) + tuple(left(k) for k in self.lefts)

    def __str__(self) -> str:
        if self.zero:
            return "ZERO"
        if self.is_identity:
            return "IDENTITY"
        rs = " ".join(right(k) for k in self.rights)
        ls = " ".join(left(k) for k in self.lefts)
        return f"{rs} | {ls}".strip()


ZERO = ReducedForm(True)


def _check_dyck(word, params: AlphabetParams | None) -> tuple:
    word = tuple(word)
    if params is not None:
        return params.alphabet(Ambient.SIGMA_D).check(word)
    for tok in word:
        if role(tok) != "unit" and bracket_index(tok) is None:
            raise InvalidInput(f"collapsed symbol {tok!r} has no monoid image")
    return word


def reduce(word: Sequence[str], params: AlphabetParams | None = None) -> ReducedForm:
    """Image of `word` in the bracket monoid, in normal form."""
    word = _check_dyck(word, params)
    stack: list[int] = []
    rights: list[int] = []
    for tok in word:
        r = role(tok)
        if r == "unit":
            continue
        k = bracket_index(tok)
        if r == "left":
            stack.append(k)
        elif stack:
            if stack.pop() != k:
                return ZERO
        else:
            rights.append(k)
    return ReducedForm(False, tuple(rights), tuple(stack))


def is_admissible(word: Sequence[str], params: AlphabetParams | None = None) -> bool:
    return not reduce(word, params).zero


class WordClass(enum.Enum):
    NEUTRAL = "neutral"
    NEGATIVE = "negative"
    POSITIVE = "positive"
    MIXED = "mixed"
    INADMISSIBLE = "inadmissible"


def classify(word: Sequence[str], params: AlphabetParams | None = None) -> WordClass:
    red = reduce(word, params)
    if red.zero:
        return WordClass.INADMISSIBLE
    if red.rights and red.lefts:
        return WordClass.MIXED
    if red.lefts:
        return WordClass.NEGATIVE
    if red.rights:
        return WordClass.POSITIVE
    return WordClass.NEUTRAL


def height_profile(word: Sequence[str]) -> list[int]:
    """[H_0, ..., H_n] with H_0 = 0; works on all three alphabets."""
    out = [0]
    for tok in word:
        out.append(out[-1] + step(tok))
    return out


def drift(word: Sequence[str]) -> int:
    return sum(step(t) for t in word)


# --------------------------------------------------------------------------
# language counting


def count_words(params: AlphabetParams, n: int) -> int:
    """|L_n(Sigma_D)|, exact.

    DP over the height above the running minimum.  An up-step always
    carries a factor M (it fixes the bracket index of its pair); a
    down-step carries M only when it sets a new minimum (unmatched right);
    a flat step carries N.
    """
    if n < 0:
        raise InvalidInput("n must be non-negative")
    M, N = params.M, params.N
    dist = [1] + [0] * n
    for _ in range(n):
        new = [0] * (n + 1)
        for h, c in enumerate(dist):
            if not c:
                continue
            if h + 1 <= n:
                new[h + 1] += c * M
            new[h] += c * N
            if h > 0:
                new[h - 1] += c
            else:
                new[0] += c * M
        dist = new
    return sum(dist)


def enumerate_words(params: AlphabetParams, n: int, cap: int = 12) -> Iterator[tuple]:
    """Admissible words of length n in lexicographic canonical order."""
    if n < 0:
        raise InvalidInput("n must be non-negative")
    if n > cap:
        raise ResourceError(f"enumeration length {n} exceeds cap {cap}")
    symbols = params.alphabet(Ambient.SIGMA_D).symbols
    prefix: list[str] = []

    def walk(stack: tuple) -> Iterator[tuple]:
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for tok in symbols:
            r = role(tok)
            if r == "left":
                nxt = stack + (bracket_index(tok),)
            elif r == "unit":
                nxt = stack
            elif not stack:
                # unmatched right brackets only occur before any open left
                nxt = stack
            elif stack[-1] == bracket_index(tok):
                nxt = stack[:-1]
            else:
                continue
            prefix.append(tok)
            yield from walk(nxt)
            prefix.pop()

    yield from walk(())


def entropy_estimate(params: AlphabetParams, n: int) -> float:
    if n < 1:
        raise InvalidInput("n must be >= 1")
    return math.log(count_words(params, n)) / n


# --------------------------------------------------------------------------
# periodic words


class PeriodicClass(enum.Enum):
    CLASS0 = "class0"
    CLASS_ALPHA = "classAlpha"
    CLASS_BETA = "classBeta"


def periodic_admissible(word: Sequence[str], params: AlphabetParams | None = None,
                        certificate: bool = False):
    """Whether the bi-infinite repetition of `word` lies in Sigma_D.

    Decided by red(w w) != 0.  With certificate=True returns
    (answer, reduced form of w w).
    """
    word = _check_dyck(word, params)
    if not word:
        raise InvalidInput("periodic word must be nonempty")
    red = reduce(word + word)
    return (not red.zero, red) if certificate else not red.zero


def periodic_class(word: Sequence[str], params: AlphabetParams | None = None) -> PeriodicClass:
    if not periodic_admissible(word, params):
        raise PreconditionError(f"{format_word(word)!r} does not repeat admissibly")
    d = drift(word)
    if d > 0:
        return PeriodicClass.CLASS_ALPHA
    if d < 0:
        return PeriodicClass.CLASS_BETA
    return PeriodicClass.CLASS0


def minimal_period(word: Sequence[str]) -> int:
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and all(word[i] == word[i % p] for i in range(n)):
            return p
    return n


def canonical_rotation(word: Sequence[str], alphabet: Alphabet) -> tuple:
    """Least rotation (canonical order) of the primitive root of `word`."""
    word = tuple(word)
    if not word:
        raise InvalidInput("empty cycle")
    root = word[: minimal_period(word)]
    keys = alphabet.sort_key(root)
    n = len(root)
    best = min(range(n), key=lambda i: keys[i:] + keys[:i])
    return root[best:] + root[:best]


def minimum_rotation(word: Sequence[str]) -> tuple:
    """Rotation starting at the first global minimum of the height walk.

    For a cyclically admissible word with drift >= 0 the result has no
    unmatched right bracket (it is negative or neutral).
    """
    h = height_profile(word)[:-1]
    i = h.index(min(h))
    word = tuple(word)
    return word[i:] + word[:i]
