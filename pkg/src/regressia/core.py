"""Tuples, order types, regressive values, closed sets and finite Ramsey search.

Tuples are plain Python tuples of non-negative ints.  Tuple sets are
frozensets of such tuples, index sets are sorted tuples of ints.  Maps
(``TupleMap``) are either a ``Mapping`` or a callable; values are tuples or
scalar ints, and a scalar ``v`` is treated as the 1-tuple ``(v,)`` whenever a
norm is needed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Any, Callable, Iterable, Mapping, Optional, Sequence, Union

from .errors import BudgetError, MissingKeyError, PreconditionError

Tuple = tuple
Value = Union[int, tuple]
TupleMap = Union[Mapping[Any, Any], Callable[[Any], Any]]


@dataclass(frozen=True)
class Caps:
    """Hard limits; exceeding any of them raises ``BudgetError``."""

    max_ot_arity: int = 8
    max_ramsey_exhaustive: int = 20
    max_ramsey_arity: int = 3
    max_ground: int = 12
    max_ground_pairs: int = 8
    max_closure: int = 200_000
    max_field_invariance: int = 8
    max_fspace: int = 2_000_000
    max_completion_domain: int = 12
    max_completion_ground: int = 5
    greedy_ramsey_nodes: int = 200_000

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


DEFAULT_CAPS = Caps()


@dataclass
class Verdict:
    """Outcome of a property check.

    ``counterexample`` is a plain dict so it can be emitted as JSON and fed
    back into the defining condition.
    """

    holds: bool
    counterexample: Optional[dict] = None
    vacuous: bool = False
    checked: int = 0
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "counterexample": to_jsonable(self.counterexample),
            "vacuous": self.vacuous,
            "checked": self.checked,
            "details": to_jsonable(self.details),
        }


def to_jsonable(obj):
    """Recursively convert tuples/frozensets into sorted lists."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (frozenset, set)):
        return [to_jsonable(v) for v in sorted(obj, key=_sort_key)]
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def _sort_key(v):
    if isinstance(v, (frozenset, set)):
        return (1, tuple(sorted(v)))
    if isinstance(v, tuple):
        return (1, v)
    return (0, v)


# -- tuple vocabulary --------------------------------------------------------

def as_tuple(v: Value) -> tuple:
    return v if isinstance(v, tuple) else (v,)


def sup(v: Value) -> int:
    """Sup norm ``|x|``; a scalar is its own norm."""
    return max(v) if isinstance(v, tuple) else v


def tmin(x: tuple) -> int:
    return min(x)


def check_tuple(x) -> tuple:
    x = tuple(x)
    if not x:
        raise PreconditionError("tuples must have length >= 1")
    for c in x:
        if not isinstance(c, int) or isinstance(c, bool) or c < 0:
            raise PreconditionError(f"coordinates must be naturals, got {x!r}")
    return x


def diag(i: int, k: int) -> tuple:
    """``i*k``: the k-tuple all of whose coordinates are i."""
    return (i,) * k


def fld(tuples: Iterable[tuple]) -> frozenset:
    """Set of all coordinates occurring in a collection of tuples."""
    return frozenset(c for x in tuples for c in x)


def graph_field(graph: Mapping) -> frozenset:
    """Field of a finite partial map: coordinates of keys and of values."""
    out = set()
    for x, v in graph.items():
        out.update(x)
        out.update(as_tuple(v))
    return frozenset(out)


def cube(elements: Iterable[int], k: int) -> frozenset:
    return frozenset(product(sorted(set(elements)), repeat=k))


def leq_c(x: tuple, y: tuple) -> bool:
    return all(a <= b for a, b in zip(x, y))


def coord_subset(x: tuple, y: tuple) -> bool:
    """``x ⊆ y``: every coordinate of x is a coordinate of y."""
    return set(x) <= set(y)


# -- order types -------------------------------------------------------------

def order_type(x: Sequence[int]) -> tuple:
    ranks = {v: i for i, v in enumerate(sorted(set(x)))}
    return tuple(ranks[v] for v in x)


def same_order_type(x: Sequence[int], y: Sequence[int]) -> bool:
    """The defining relation, evaluated directly rather than via codes."""
    if len(x) != len(y):
        return False
    n = len(x)
    return all((x[i] < x[j]) == (y[i] < y[j]) for i in range(n) for j in range(n))


def ot(k: int, caps: Caps = DEFAULT_CAPS) -> int:
    """Number of order types in dimension k, by enumerating codes in [k]^k."""
    if k < 1:
        raise PreconditionError("ot(k) needs k >= 1")
    if k > caps.max_ot_arity:
        raise BudgetError(f"ot({k}) exceeds the arity cap {caps.max_ot_arity}")
    seen = set()
    for x in product(range(k), repeat=k):
        seen.add(order_type(x))
    return len(seen)


def ot_surjection_sum(k: int) -> int:
    """Independent count: sum over i of the number of surjections [k] -> [i]."""
    total = 0
    for i in range(1, k + 1):
        total += sum((-1) ** j * math.comb(i, j) * (i - j) ** k for j in range(i + 1))
    return total


# -- regressive values -------------------------------------------------------

def lookup(F: TupleMap, x, what="map"):
    if callable(F) and not isinstance(F, Mapping):
        return F(x)
    try:
        return F[x]
    except KeyError:
        raise MissingKeyError(x, what) from None


def regressive_values(F: TupleMap, B: Iterable[tuple]) -> frozenset:
    """``{F(x) : x in B, |F(x)| < min(x)}``."""
    out = set()
    for x in B:
        y = lookup(F, x)
        if sup(y) < min(x):
            out.add(y)
    return frozenset(out)


def count_regressive_on(F: TupleMap, E: Sequence[int], k: int) -> int:
    return len(regressive_values(F, product(E, repeat=k)))


# -- closed sets -------------------------------------------------------------

def is_closed(A: Iterable[tuple]) -> bool:
    A = frozenset(A)
    for y in A:
        k = len(y)
        for x in product(sorted(set(y)), repeat=k):
            if x not in A:
                return False
    return True


def closure(A: Iterable[tuple], caps: Caps = DEFAULT_CAPS) -> frozenset:
    A = frozenset(A)
    if not A:
        return A
    k = len(next(iter(A)))
    bound = len(fld(A)) ** k
    if bound > caps.max_closure:
        raise BudgetError(f"closure may reach {bound} tuples (cap {caps.max_closure})")
    out = set()
    for coords in {frozenset(y) for y in A}:
        out.update(product(sorted(coords), repeat=k))
    return frozenset(out)


# -- Ramsey ------------------------------------------------------------------

@dataclass
class HomogeneousResult:
    subset: Optional[tuple]
    exhaustive: bool
    incomplete: bool = False
    nodes: int = 0


def _color(coloring: TupleMap, s: tuple):
    try:
        return lookup(coloring, s, "coloring")
    except MissingKeyError:
        raise
    except KeyError:
        raise MissingKeyError(s, "coloring") from None


def ramsey_homogeneous(coloring: TupleMap, E: Sequence[int], k: int, p: int,
                       caps: Caps = DEFAULT_CAPS) -> HomogeneousResult:
    """Lexicographically least p-subset of E on whose k-subsets the coloring is constant.

    The coloring is keyed by sorted k-tuples.  Exhaustive (depth-first in lex
    order, so the first hit is the least) when ``|E|`` and ``k`` are within the
    caps; otherwise the same search runs under a node budget and a miss is
    flagged ``incomplete``.
    """
    E = tuple(sorted(set(E)))
    if isinstance(coloring, Mapping):
        for s in combinations(E, k):
            if s not in coloring:
                raise MissingKeyError(s, "coloring")
    exhaustive = len(E) <= caps.max_ramsey_exhaustive and k <= caps.max_ramsey_arity
    limit = None if exhaustive else caps.greedy_ramsey_nodes
    if p < k or p == 0:
        sub = E[:p] if len(E) >= p else None
        return HomogeneousResult(sub, exhaustive, False, 0)
    nodes = 0
    chosen: list = []
    colour = [None]

    def extend(start: int) -> bool:
        nonlocal nodes
        if len(chosen) == p:
            return True
        for idx in range(start, len(E) - (p - len(chosen)) + 1):
            nodes += 1
            if limit is not None and nodes > limit:
                raise _OutOfNodes
            e = E[idx]
            ok = True
            set_here = False
            if len(chosen) >= k - 1:
                for rest in combinations(chosen, k - 1):
                    c = _color(coloring, rest + (e,))
                    if colour[0] is None:
                        colour[0] = c
                        set_here = True
                    elif c != colour[0]:
                        ok = False
                        break
            if ok:
                chosen.append(e)
                if extend(idx + 1):
                    return True
                chosen.pop()
            if set_here:
                colour[0] = None
        return False

    try:
        found = extend(0)
    except _OutOfNodes:
        return HomogeneousResult(None, False, True, nodes)
    return HomogeneousResult(tuple(chosen) if found else None, exhaustive, False, nodes)


class _OutOfNodes(Exception):
    pass


def type_homogeneous(g: TupleMap, E: Sequence[int], k: int, p: int,
                     limit: Optional[int] = None) -> HomogeneousResult:
    """Lex-least p-subset E' of E such that g is constant on each order type within E'^k.

    ``g`` is keyed by arbitrary k-tuples.  With ``limit`` set, the depth-first
    search stops after that many nodes and reports ``incomplete``.
    """
    E = tuple(sorted(set(E)))
    chosen: list = []
    colour: dict = {}
    nodes = 0

    def extend(start):
        nonlocal nodes
        if len(chosen) == p:
            return True
        for idx in range(start, len(E) - (p - len(chosen)) + 1):
            nodes += 1
            if limit is not None and nodes > limit:
                raise _OutOfNodes
            e = E[idx]
            pool = chosen + [e]
            added = []
            ok = True
            for x in product(pool, repeat=k):
                if e not in x:
                    continue
                ty = order_type(x)
                v = lookup(g, x)
                if ty in colour:
                    if colour[ty] != v:
                        ok = False
                        break
                else:
                    colour[ty] = v
                    added.append(ty)
            if ok:
                chosen.append(e)
                if extend(idx + 1):
                    return True
                chosen.pop()
            for ty in added:
                del colour[ty]
        return False

    try:
        found = extend(0)
    except _OutOfNodes:
        return HomogeneousResult(None, False, True, nodes)
    return HomogeneousResult(tuple(chosen) if found else None, limit is None, False, nodes)


def min_homogeneous_check(F: TupleMap, E: Sequence[int], k: int) -> Verdict:
    """Do k-subsets of E with equal minima always get equal F-values?"""
    E = tuple(sorted(set(E)))
    if len(E) < k:
        return Verdict(True, vacuous=True)
    first: dict = {}
    checked = 0
    for s in combinations(E, k):
        checked += 1
        v = lookup(F, s)
        m = s[0]
        if m not in first:
            first[m] = (s, v)
        elif first[m][1] != v:
            return Verdict(False, {"x": first[m][0], "y": s,
                                   "F(x)": first[m][1], "F(y)": v}, checked=checked)
    return Verdict(True, checked=checked)
