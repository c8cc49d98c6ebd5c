"""Locally constant functions given by a value table on symbol windows."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidInput
from .numbers import format_number, parse_number
from .symbolic import AlphabetParams, Ambient, format_word, is_admissible, parse_word


@dataclass(frozen=True)
class LocallyConstantFn:
    """f(x) = table[x_{-r} .. x_r], or `default` for windows not listed."""

    params: AlphabetParams
    radius: int
    table: dict = field(hash=False)
    default: object = Fraction(0)
    ambient: Ambient = Ambient.SIGMA_D

    def __post_init__(self):
        if self.radius < 0:
            raise InvalidInput("radius must be >= 0")
        alphabet = self.params.alphabet(self.ambient)
        width = 2 * self.radius + 1
        clean = {}
        for w, v in self.table.items():
            w = alphabet.check(w)
            if len(w) != width:
                raise InvalidInput(f"table key {format_word(w)!r} has length {len(w)}, need {width}")
            clean[w] = v
        object.__setattr__(self, "table", clean)

    @property
    def width(self) -> int:
        return 2 * self.radius + 1

    def __call__(self, window) -> object:
        return self.table.get(tuple(window), self.default)

    def windows(self):
        """All windows of the ambient language (admissible ones on Sigma_D)."""
        symbols = self.params.alphabet(self.ambient).symbols
        for w in itertools.product(symbols, repeat=self.width):
            if self.ambient is not Ambient.SIGMA_D or is_admissible(w):
                yield w

    def max_value(self):
        """max of f over windows that actually occur."""
        return max(self(w) for w in self.windows())

    def to_json(self) -> dict:
        return {"M": self.params.M, "N": self.params.N, "ambient": self.ambient.value,
                "radius": self.radius,
                "entries": [{"word": format_word(w), "value": format_number(v)}
                            for w, v in self.table.items()],
                "default": format_number(self.default)}

    @classmethod
    def from_json(cls, obj, M: int | None = None, N: int | None = None) -> "LocallyConstantFn":
        if isinstance(obj, str):
            obj = json.loads(obj)
        if not isinstance(obj, dict) or "radius" not in obj:
            raise InvalidInput("function JSON needs 'radius', 'entries', 'default'")
        M = obj.get("M", M)
        N = obj.get("N", N)
        if M is None or N is None:
            raise InvalidInput("function JSON needs M and N")
        table = {parse_word(e["word"]): parse_number(e["value"]) for e in obj.get("entries", [])}
        return cls(AlphabetParams(int(M), int(N)), int(obj["radius"]), table,
                   parse_number(obj.get("default", 0)), Ambient.parse(obj.get("ambient", "SigmaD")))


def constant(params: AlphabetParams, c, ambient=Ambient.SIGMA_D) -> LocallyConstantFn:
    return LocallyConstantFn(params, 0, {}, c, Ambient.parse(ambient))


def indicator(word, params: AlphabetParams, ambient=Ambient.SIGMA_D) -> LocallyConstantFn:
    """Indicator of the cylinder [word] anchored at coordinate 0."""
    ambient = Ambient.parse(ambient)
    word = params.alphabet(ambient).check(tuple(word))
    if not word:
        raise InvalidInput("indicator needs a nonempty word")
    r = len(word) - 1
    probe = LocallyConstantFn(params, r, {}, Fraction(0), ambient)
    table = {w: Fraction(1) for w in probe.windows() if w[r:r + len(word)] == word}
    return LocallyConstantFn(params, r, table, Fraction(0), ambient)


def drift_function(params: AlphabetParams) -> LocallyConstantFn:
    """G_0: +1 on left brackets, 0 on units, -1 on right brackets."""
    from .symbolic import step
    symbols = params.alphabet(Ambient.SIGMA_D).symbols
    return LocallyConstantFn(params, 0, {(s,): Fraction(step(s)) for s in symbols}, Fraction(0))
