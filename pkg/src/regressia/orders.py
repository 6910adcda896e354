"""Strict orders on tuple spaces."""
from __future__ import annotations

from typing import Iterable, Optional

from .core import leq_c
from .errors import PreconditionError


class StrictOrder:
    kind = "abstract"

    def lt(self, x: tuple, y: tuple) -> bool:
        raise NotImplementedError

    def gt(self, x: tuple, y: tuple) -> bool:
        return self.lt(y, x)

    def to_dict(self) -> dict:
        return {"kind": self.kind}

    def __repr__(self):
        return f"{type(self).__name__}()"


class SupNormOrder(StrictOrder):
    """``x < y`` iff ``|x| < |y|``."""

    kind = "sup"

    def lt(self, x, y):
        return max(x) < max(y)


class LexOrder(StrictOrder):
    kind = "lex"

    def lt(self, x, y):
        return x < y


class ExplicitOrder(StrictOrder):
    """A relation given by its pairs over a bounded ground.

    Irreflexivity and transitivity are checked on construction.
    """

    kind = "explicit"

    def __init__(self, pairs: Iterable, ground: Optional[Iterable[tuple]] = None):
        self.pairs = frozenset((tuple(a), tuple(b)) for a, b in pairs)
        if ground is None:
            ground = {t for pair in self.pairs for t in pair}
        self.ground = frozenset(tuple(g) for g in ground)
        for a, b in self.pairs:
            if a not in self.ground or b not in self.ground:
                raise PreconditionError(f"pair {(a, b)} leaves the declared ground")
            if a == b:
                raise PreconditionError(f"relation is not irreflexive at {a}")
        succ: dict = {}
        for a, b in self.pairs:
            succ.setdefault(a, set()).add(b)
        for a, b in self.pairs:
            for c in succ.get(b, ()):
                if (a, c) not in self.pairs:
                    raise PreconditionError(f"relation is not transitive: {a} < {b} < {c}")

    def lt(self, x, y):
        return (x, y) in self.pairs

    def to_dict(self):
        return {"kind": self.kind, "pairs": sorted([list(a), list(b)] for a, b in self.pairs)}


SUP = SupNormOrder()
LEX = LexOrder()


def order_from_name(name: str) -> StrictOrder:
    try:
        return {"sup": SUP, "lex": LEX}[name]
    except KeyError:
        raise PreconditionError(f"unknown order {name!r}; expected 'sup' or 'lex'") from None


def is_upward(order: StrictOrder, ground: Iterable[tuple]) -> bool:
    """No pair with ``x <=_c y`` has ``y < x``."""
    ground = list(ground)
    for x in ground:
        for y in ground:
            if leq_c(x, y) and order.lt(y, x):
                return False
    return True


def minimal_element(A: Iterable[tuple], order: StrictOrder) -> tuple:
    """A ``<``-minimal element found by descending chains."""
    A = sorted(A)
    if not A:
        raise PreconditionError("empty set has no minimal element")
    x = A[0]
    while True:
        below = [y for y in A if order.lt(y, x)]
        if not below:
            return x
        x = below[0]


def minimal_first_enumeration(B: Iterable[tuple], order: StrictOrder) -> list:
    """Enumerate B so that no earlier element is above a later one."""
    rest = set(B)
    out = []
    while rest:
        x = minimal_element(rest, order)
        out.append(x)
        rest.remove(x)
    return out


def is_downward_closed_in(A: frozenset, B: frozenset, order: StrictOrder) -> bool:
    """``A ⊆_< B``."""
    if not A <= B:
        return False
    return not any(order.lt(y, x) for x in A for y in B - A)
