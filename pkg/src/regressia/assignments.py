"""Function assignments and the #-decreasing / *-decreasing / end-preserving calculus.

A function assignment sends every subset A of a bounded ground of k-tuples to
an endomorphism of A, represented as a plain ``dict`` mapping each member of A
to a member of A.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from itertools import combinations, product
from typing import Callable, Iterable, Iterator, Mapping, Optional

from .core import DEFAULT_CAPS, Caps, Verdict, sup, type_homogeneous
from .errors import BudgetError, PreconditionError
from .orders import SUP, StrictOrder, is_downward_closed_in

Endo = dict


def subsets(ground: Iterable[tuple]) -> Iterator[frozenset]:
    """All subsets, smallest first, lexicographic within a size."""
    items = sorted(ground)
    for r in range(len(items) + 1):
        for c in combinations(items, r):
            yield frozenset(c)


def is_subgraph(f: Mapping, g: Mapping) -> bool:
    return all(x in g and g[x] == v for x, v in f.items())


def canonical_subset(A: Iterable[tuple]) -> tuple:
    return tuple(sorted(A))


class FunctionAssignment:
    """``U(A): A -> A`` for every A contained in ``ground``.

    ``rule`` receives a frozenset and returns a dict; results are cached and
    checked to be endomorphisms of exactly A.
    """

    def __init__(self, arity: int, ground: Iterable[tuple], rule: Callable[[frozenset], Mapping],
                 *, kind: str = "rule", name: Optional[str] = None, params: Optional[dict] = None):
        self.arity = arity
        self.ground = frozenset(tuple(x) for x in ground)
        for x in self.ground:
            if len(x) != arity:
                raise PreconditionError(f"ground tuple {x} does not have arity {arity}")
        self.rule = rule
        self.kind = kind
        self.name = name
        self.params = params or {}
        self._cache: dict = {}

    def __call__(self, A: Iterable[tuple]) -> Endo:
        A = frozenset(A)
        hit = self._cache.get(A)
        if hit is not None:
            return hit
        if not A <= self.ground:
            raise PreconditionError(f"{sorted(A - self.ground)[:3]} outside the assignment's ground")
        g = dict(self.rule(A))
        if set(g) != set(A):
            raise PreconditionError(f"U({canonical_subset(A)}) has carrier {sorted(g)}")
        for x, y in g.items():
            if y not in A:
                raise PreconditionError(f"U({canonical_subset(A)}) sends {x} to {y} outside A")
        self._cache[A] = g
        return g

    def __repr__(self):
        label = self.name or self.kind
        return f"FunctionAssignment({label}, arity={self.arity}, |ground|={len(self.ground)})"

    # -- constructors ---------------------------------------------------

    @classmethod
    def table(cls, arity: int, ground: Iterable[tuple], table: Mapping) -> "FunctionAssignment":
        ground = frozenset(tuple(x) for x in ground)
        tab = {frozenset(A): dict(g) for A, g in table.items()}
        missing = [A for A in subsets(ground) if A not in tab]
        if missing:
            raise PreconditionError(f"table misses subset {canonical_subset(missing[0])}")
        return cls(arity, ground, tab.__getitem__, kind="table")

    @classmethod
    def identity(cls, ground: Iterable[tuple]) -> "FunctionAssignment":
        ground = frozenset(ground)
        k = _arity_of(ground)
        return cls(k, ground, lambda A: {x: x for x in A}, kind="builtin", name="identity")

    @classmethod
    def min_collapse(cls, ground: Iterable[tuple]) -> "FunctionAssignment":
        """Everything goes to the (lexicographically) least element of A."""
        ground = frozenset(ground)
        k = _arity_of(ground)

        def rule(A):
            if not A:
                return {}
            m = min(A)
            return {x: m for x in A}

        return cls(k, ground, rule, kind="builtin", name="min-collapse")

    # -- serialization --------------------------------------------------

    def to_dict(self, caps: Caps = DEFAULT_CAPS) -> dict:
        doc = {"arity": self.arity, "ground": [list(x) for x in sorted(self.ground)]}
        if self.kind == "builtin":
            doc["kind"] = "builtin"
            doc["builtin"] = {"name": self.name, "params": self.params}
            return doc
        if len(self.ground) > caps.max_ground:
            raise BudgetError("ground too large to materialize as a table")
        doc["kind"] = "table"
        doc["table"] = [
            {"subset": [list(x) for x in canonical_subset(A)],
             "graph": [[list(x), list(self(A)[x])] for x in canonical_subset(A)]}
            for A in subsets(self.ground)
        ]
        return doc

    def materialize(self, caps: Caps = DEFAULT_CAPS) -> "FunctionAssignment":
        if len(self.ground) > caps.max_ground:
            raise BudgetError("ground too large to materialize as a table")
        return FunctionAssignment.table(self.arity, self.ground, {A: self(A) for A in subsets(self.ground)})


def _arity_of(ground: frozenset) -> int:
    if not ground:
        raise PreconditionError("ground must be nonempty")
    return len(next(iter(ground)))


def from_dict(doc: Mapping) -> FunctionAssignment:
    kind = doc.get("kind")
    arity = int(doc["arity"])
    ground = [tuple(x) for x in doc["ground"]]
    if kind == "table":
        table = {}
        for entry in doc["table"]:
            A = frozenset(tuple(x) for x in entry["subset"])
            table[A] = {tuple(x): tuple(y) for x, y in entry["graph"]}
        return FunctionAssignment.table(arity, ground, table)
    if kind == "builtin":
        spec = doc["builtin"]
        return builtin(spec["name"], ground, **spec.get("params", {}))
    raise PreconditionError(f"unknown assignment kind {kind!r}")


def builtin(name: str, ground: Iterable[tuple], **params) -> FunctionAssignment:
    if name == "identity":
        return FunctionAssignment.identity(ground)
    if name == "min-collapse":
        return FunctionAssignment.min_collapse(ground)
    if name == "dfnl-derived":
        from .inductive import dfnl_from_params, lemma_5_2_assignment
        ground = frozenset(tuple(x) for x in ground)
        H = dfnl_from_params(params)
        return lemma_5_2_assignment(H, _arity_of(ground), ground)
    raise PreconditionError(f"unknown builtin {name!r}")


def dumps(U: FunctionAssignment) -> str:
    return json.dumps(U.to_dict(), sort_keys=True, separators=(",", ":"))


def loads(text: str) -> FunctionAssignment:
    return from_dict(json.loads(text))


# -- raw definitions ---------------------------------------------------------

def sharp_condition(U: FunctionAssignment, o1: StrictOrder, o2: StrictOrder,
                    A: frozenset, x: tuple) -> bool:
    """Either U(A) ⊆ U(A ∪ {x}) or some y >1 x in A has U(A)(y) >2 U(A ∪ {x})(y)."""
    fa = U(A)
    fb = U(A | {x})
    if is_subgraph(fa, fb):
        return True
    return any(o1.gt(y, x) and o2.gt(fa[y], fb[y]) for y in fa)


def star_relation(f: Mapping, g: Mapping, o1: StrictOrder, o2: StrictOrder):
    """``f (<1,<2)* g``; returns ``(True, None)`` or ``(False, x)`` for the failing point."""
    for x in sorted(f):
        if x not in g:
            continue
        agree = all(y in g and g[y] == f[y] for y in f if o1.lt(y, x))
        if agree and not (f[x] == g[x] or o2.gt(f[x], g[x])):
            return False, x
    return True, None


# -- checkers ----------------------------------------------------------------

def _single_scope(U, caps):
    if len(U.ground) > caps.max_ground:
        raise BudgetError(f"|ground| = {len(U.ground)} exceeds {caps.max_ground}; supply a sampled scope")
    for A in subsets(U.ground):
        for x in sorted(U.ground - A):
            yield A, x


def _pair_scope(U, caps):
    if len(U.ground) > caps.max_ground_pairs:
        raise BudgetError(f"|ground| = {len(U.ground)} exceeds {caps.max_ground_pairs} for pair scopes; "
                          "supply a sampled scope")
    subs = list(subsets(U.ground))
    for A in subs:
        for B in subs:
            yield A, B


def check_sharp_decreasing(U: FunctionAssignment, o1: StrictOrder = SUP, o2: StrictOrder = SUP,
                           scope: Optional[Iterable] = None, caps: Caps = DEFAULT_CAPS) -> Verdict:
    if scope is None:
        scope = _single_scope(U, caps)
    n = 0
    for A, x in scope:
        A = frozenset(A)
        n += 1
        if not sharp_condition(U, o1, o2, A, x):
            return Verdict(False, {"A": A, "x": x, "U(A)": U(A), "U(A+x)": U(A | {x})}, checked=n)
    return Verdict(True, checked=n)


def check_star_decreasing(U: FunctionAssignment, o1: StrictOrder = SUP, o2: StrictOrder = SUP,
                          scope: Optional[Iterable] = None, caps: Caps = DEFAULT_CAPS) -> Verdict:
    if scope is None:
        scope = _pair_scope(U, caps)
    n = 0
    for A, B in scope:
        n += 1
        ok, x = star_relation(U(A), U(B), o1, o2)
        if not ok:
            return Verdict(False, {"A": frozenset(A), "B": frozenset(B), "x": x,
                                   "U(A)": U(A), "U(B)": U(B)}, checked=n)
    return Verdict(True, checked=n)


def end_preserving_scope(U: FunctionAssignment, o1: StrictOrder, caps: Caps = DEFAULT_CAPS):
    if len(U.ground) > caps.max_ground_pairs:
        raise BudgetError(f"|ground| = {len(U.ground)} exceeds {caps.max_ground_pairs}; supply a scope")
    for B in subsets(U.ground):
        for A in subsets(B):
            if is_downward_closed_in(A, B, o1):
                yield A, B


def check_end_preserving(U: FunctionAssignment, o1: StrictOrder = SUP,
                         scope: Optional[Iterable] = None, caps: Caps = DEFAULT_CAPS) -> Verdict:
    """U(A) ⊆ U(B) whenever A is downward closed in B under o1.

    Pairs in a caller-supplied scope that are not downward closed are skipped.
    """
    if scope is None:
        scope = end_preserving_scope(U, o1, caps)
    n = 0
    for A, B in scope:
        A, B = frozenset(A), frozenset(B)
        if not is_downward_closed_in(A, B, o1):
            continue
        n += 1
        if not is_subgraph(U(A), U(B)):
            return Verdict(False, {"A": A, "B": B, "U(A)": U(A), "U(B)": U(B)}, checked=n)
    return Verdict(True, checked=n)


def sampled_single_scope(ground, n_samples: int, rng: random.Random):
    items = sorted(ground)
    for _ in range(n_samples):
        A = frozenset(x for x in items if rng.random() < 0.5)
        yield A, rng.choice(items)


def sampled_pair_scope(ground, n_samples: int, rng: random.Random):
    items = sorted(ground)
    for _ in range(n_samples):
        yield (frozenset(x for x in items if rng.random() < 0.5),
               frozenset(x for x in items if rng.random() < 0.5))


# -- constructions -----------------------------------------------------------

def is_lifted(z: tuple) -> bool:
    return len(z) >= 2 and z[0] == max(z[1:])


def lift(x: tuple) -> tuple:
    return (max(x),) + tuple(x)


def lex_lift(U: FunctionAssignment, extra: Iterable[tuple] = ()) -> FunctionAssignment:
    """Arity k+1 assignment V with V(A)(|x|, x) = (|U(A')(x)|, U(A')(x)), identity elsewhere."""
    extra = frozenset(tuple(z) for z in extra)
    for z in extra:
        if len(z) != U.arity + 1:
            raise PreconditionError(f"extra tuple {z} must have arity {U.arity + 1}")
        if is_lifted(z) and z[1:] not in U.ground:
            raise PreconditionError(f"extra tuple {z} is a lift of a point outside U's ground")
    ground = frozenset(lift(x) for x in U.ground) | extra

    def rule(A):
        A_prime = frozenset(z[1:] for z in A if is_lifted(z))
        base = U(A_prime)
        out = {}
        for z in A:
            out[z] = lift(base[z[1:]]) if is_lifted(z) else z
        return out

    return FunctionAssignment(U.arity + 1, ground, rule, kind="rule", name="lex-lift",
                              params={"base": U.name or U.kind})


@dataclass
class RamseyReduction:
    subset: Optional[tuple]
    sentinel: object
    count: Optional[int]
    failed: bool
    explored: int


RESERVED = "<non-regressive>"


def ramsey_reduce(U: FunctionAssignment, A: Iterable[tuple], E: Iterable[int], p: int) -> RamseyReduction:
    """Shrink E to p elements on which U(A)'s regressive behaviour depends only on order type."""
    A = frozenset(A)
    E = tuple(sorted(set(E)))
    k = U.arity
    points = list(product(E, repeat=k))
    for x in points:
        if x not in A:
            raise PreconditionError(f"E^k is not contained in A: {x} missing")
    if len(E) < p:
        raise PreconditionError(f"|E| = {len(E)} < p = {p}")
    fa = U(A)
    regressive = {fa[x] for x in points if sup(fa[x]) < min(x)}
    others = sorted({fa[x] for x in points} - regressive)
    t = others[0] if others else RESERVED
    g = {x: (fa[x] if sup(fa[x]) < min(x) else t) for x in points}

    res = type_homogeneous(g, E, k, p)
    if res.subset is not None:
        sub = res.subset
        count = len({fa[x] for x in product(sub, repeat=k) if sup(fa[x]) < min(x)})
        return RamseyReduction(sub, t, count, False, res.nodes)
    return RamseyReduction(None, t, None, True, res.nodes)


# -- samplers used by audits -------------------------------------------------

def random_table(ground: Iterable[tuple], rng: random.Random) -> FunctionAssignment:
    ground = frozenset(ground)
    table = {}
    for A in subsets(ground):
        items = sorted(A)
        table[A] = {x: rng.choice(items) for x in items}
    return FunctionAssignment.table(_arity_of(ground), ground, table)


def random_local_rule(ground: Iterable[tuple], rng: random.Random, order: StrictOrder = SUP) -> FunctionAssignment:
    """Table whose value at x depends only on x and the part of A strictly below x.

    Such assignments are end-preserving by construction and are #-decreasing
    far more often than uniform random tables, so they keep both verdicts
    populated in audits.
    """
    ground = frozenset(ground)
    memo: dict = {}
    table = {}
    for A in subsets(ground):
        g = {}
        for x in sorted(A):
            below = frozenset(y for y in A if order.lt(y, x))
            key = (x, below)
            if key not in memo:
                options = sorted(below | {x})
                memo[key] = rng.choice(options)
            g[x] = memo[key]
        table[A] = g
    return FunctionAssignment.table(_arity_of(ground), ground, table)


def perturb(U: FunctionAssignment, rng: random.Random) -> FunctionAssignment:
    """Copy of U's table with one value changed at one random nonempty subset."""
    table = {A: dict(U(A)) for A in subsets(U.ground)}
    nonempty = [A for A in table if A]
    A = rng.choice(sorted(nonempty, key=canonical_subset))
    x = rng.choice(sorted(A))
    table[A][x] = rng.choice(sorted(A))
    return FunctionAssignment.table(U.arity, U.ground, table)
