"""Decreasing functionals, recursion on the sup norm, Df fixpoints and regularity checks.

Scalar maps are dicts from k-tuples to naturals.  A decreasing functional
``H(f, x)`` must be non-increasing as ``f`` grows and must return a member of
``fld(f)`` or a coordinate of ``x``.
"""
from __future__ import annotations

import random
from collections import defaultdict
from itertools import combinations, product
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .assignments import FunctionAssignment
from .bef import BefFormula, eval_bef, parse_bef
from .core import (DEFAULT_CAPS, Caps, Verdict, cube, diag, graph_field, is_closed,
                   order_type, ot, sup)
from . import oracle
from .errors import BudgetError, ContractViolation, PreconditionError
from .report import SearchBudget, SearchReport


class Dfnl:
    kind = "abstract"

    def __call__(self, f: Mapping, x: tuple) -> int:
        raise NotImplementedError

    def params(self) -> dict:
        raise NotImplementedError


class MinFieldDfnl(Dfnl):
    """``H(f, x) = min(fld(f) ∪ coords(x))``."""

    kind = "min-field"

    def __call__(self, f, x):
        return min(graph_field(f) | set(x))

    def params(self):
        return {"dfnl": "min-field"}

    def __repr__(self):
        return "MinFieldDfnl()"


class BefDfnl(Dfnl):
    """Least j in fld(f) ∪ coords(x) with j = |x| or B(x, j) true in f."""

    kind = "bef"

    def __init__(self, B: BefFormula):
        if B.q != B.r + 1:
            raise PreconditionError(f"need q = r + 1 for a functional, got q={B.q}, r={B.r}")
        self.B = B

    def __call__(self, f, x):
        top = max(x)
        for j in sorted(graph_field(f) | set(x)):
            if j == top or eval_bef(self.B, f, x + (j,)):
                return j
        return top  # unreachable: top is a candidate

    def params(self):
        return {"dfnl": "bef", "formula": str(self.B)}

    def __repr__(self):
        return f"BefDfnl({self.B})"


class CallableDfnl(Dfnl):
    kind = "callable"

    def __init__(self, fn: Callable, name: str = "callable"):
        self.fn = fn
        self.name = name

    def __call__(self, f, x):
        return self.fn(f, x)

    def params(self):
        return {"dfnl": "callable", "name": self.name}


class RestrictedDfnl(Dfnl):
    """``H'(f, x) = H(f restricted to {y in dom(f)' : |y| < |x|}, x)``.

    ``dom(f)'`` keeps the points whose coordinate-subset tuples all lie in dom(f).
    """

    kind = "restricted"

    def __init__(self, H: Dfnl):
        self.H = H

    def __call__(self, f, x):
        dom = frozenset(f)
        top = max(x)
        keep = {y: v for y, v in f.items() if max(y) < top and _all_subtuples_in(y, dom)}
        return self.H(keep, x)

    def params(self):
        return {"dfnl": "restricted", "base": self.H.params()}


def dfnl_from_bef(B: Union[BefFormula, str]) -> BefDfnl:
    if isinstance(B, str):
        B = parse_bef(B)
    return BefDfnl(B)


def dfnl_from_params(params: Mapping) -> Dfnl:
    kind = params.get("dfnl", "min-field")
    if kind == "min-field":
        return MinFieldDfnl()
    if kind == "bef":
        return dfnl_from_bef(params["formula"])
    raise PreconditionError(f"cannot rebuild functional of kind {kind!r}")


def validate_dfnl(H: Dfnl, k: int, rng: random.Random, samples: int = 200, width: int = 5) -> Verdict:
    """Spot-check both contract clauses on random chains f ⊆ g ⊆ h."""
    space = list(product(range(width), repeat=k))
    for n in range(samples):
        pts = rng.sample(space, min(len(space), rng.randint(0, 6)))
        h = {y: rng.randrange(width) for y in pts}
        cut1, cut2 = sorted(rng.randint(0, len(pts)) for _ in range(2))
        f = {y: h[y] for y in pts[:cut1]}
        g = {y: h[y] for y in pts[:cut2]}
        x = tuple(rng.randrange(width) for _ in range(k))
        vals = [H(m, x) for m in (f, g, h)]
        for m, v in zip((f, g, h), vals):
            if v not in graph_field(m) | set(x):
                return Verdict(False, {"clause": "ii", "f": m, "x": x, "H": v}, checked=n + 1)
        if not vals[0] >= vals[1] >= vals[2]:
            return Verdict(False, {"clause": "i", "f": f, "g": g, "h": h, "x": x, "values": vals},
                           checked=n + 1)
    return Verdict(True, checked=samples)


# -- recursion ---------------------------------------------------------------

def _levels(A: Iterable[tuple]):
    by = defaultdict(list)
    for x in A:
        by[max(x)].append(x)
    return [sorted(by[s]) for s in sorted(by)]


def _all_subtuples_in(x: tuple, A: frozenset) -> bool:
    return all(y in A for y in product(sorted(set(x)), repeat=len(x)))


def rcn(A: Iterable[tuple], H: Dfnl, rng: Optional[random.Random] = None) -> dict:
    """The unique F: A -> fld(A) with F(x) = H(F restricted below |x|, x).

    ``rng`` shuffles the processing order inside each sup level; the result
    must not depend on it.
    """
    A = frozenset(A)
    F: dict = {}
    for level in _levels(A):
        below = dict(F)
        field = graph_field(below)
        if rng is not None:
            level = list(level)
            rng.shuffle(level)
        for x in level:
            v = H(below, x)
            if v not in field and v not in x:
                raise ContractViolation(f"H({sorted(below.items())}, {x}) = {v} is neither in fld(f) "
                                        "nor a coordinate of x")
            F[x] = v
    return F


def closed_part(A: frozenset) -> frozenset:
    """``A' = {x in A : every y ⊆ x is in A}``."""
    return frozenset(x for x in A if _all_subtuples_in(x, A))


def hat_part(A: frozenset) -> frozenset:
    """``A^ = {x in A : every y ⊆ x with |y| < |x| is in A}``."""
    out = set()
    for x in A:
        top = max(x)
        if all(y in A for y in product(sorted(set(x)), repeat=len(x)) if max(y) < top):
            out.add(x)
    return frozenset(out)


def mrcn(A: Iterable[tuple], H: Dfnl) -> dict:
    """Like :func:`rcn` but H only sees earlier points of ``A'``."""
    A = frozenset(A)
    Ap = closed_part(A)
    F: dict = {}
    for level in _levels(A):
        below = {y: v for y, v in F.items() if y in Ap}
        field = graph_field(below)
        for x in level:
            v = H(below, x)
            if v not in field and v not in x:
                raise ContractViolation(f"H at {x} returned {v} outside fld(f) ∪ coords(x)")
            F[x] = v
    return F


def lemma_5_2_assignment(H: Dfnl, k: int, ground: Iterable[tuple]) -> FunctionAssignment:
    """The #-decreasing assignment built from an inductive function system.

    V(A)(x) is the diagonal tuple MRCN(A, H)(x)*k when x ∈ A^ and that value
    is below |x|; otherwise x is fixed.
    """
    ground = frozenset(tuple(x) for x in ground)

    def rule(A):
        F = mrcn(A, H)
        hat = hat_part(A)
        out = {}
        for x in A:
            m = F[x]
            out[x] = diag(m, k) if x in hat and m < max(x) else x
        return out

    return FunctionAssignment(k, ground, rule, kind="builtin", name="dfnl-derived", params=H.params())


# -- Df ----------------------------------------------------------------------

def df(B: Union[BefFormula, str], A: Iterable[tuple]) -> dict:
    """``f(x) = min{j in fld(A) : j = |x| or B(x, j) true in f}`` on a closed A."""
    if isinstance(B, str):
        B = parse_bef(B)
    A = frozenset(A)
    if not is_closed(A):
        raise PreconditionError("Df is only defined here for closed sets")
    field = sorted({c for x in A for c in x})
    f: dict = {}
    # the quantifier bound max(y) < max(x, j) <= |x| keeps same-level entries out of reach
    for x in sorted(A, key=lambda z: (max(z), z)):
        top = max(x)
        for j in field:
            if j == top or eval_bef(B, f, x + (j,)):
                f[x] = j
                break
    return f


def df_fixpoint_violations(B: BefFormula, A: Iterable[tuple], f: Mapping) -> list:
    """Points where the defining min, evaluated against the completed f, disagrees."""
    A = frozenset(A)
    field = sorted({c for x in A for c in x})
    bad = []
    for x in sorted(A):
        top = max(x)
        want = min(j for j in field if j == top or eval_bef(B, f, x + (j,)))
        if f[x] != want:
            bad.append((x, f[x], want))
    return bad


def slice_map(f: Mapping, r: int) -> dict:
    """``f/r(x) = f(x, |x|*(k-r))`` on ``A/r``."""
    if not f:
        return {}
    k = len(next(iter(f)))
    if not 0 < r < k:
        raise PreconditionError(f"need 0 < r < k, got r={r}, k={k}")
    out = {}
    for z, v in f.items():
        x = z[:r]
        if z[r:] == diag(max(x), k - r):
            out[x] = v
    return out


def slice_set(A: Iterable[tuple], r: int) -> frozenset:
    A = frozenset(A)
    if not A:
        return A
    k = len(next(iter(A)))
    if not 0 < r < k:
        raise PreconditionError(f"need 0 < r < k, got r={r}, k={k}")
    return frozenset(z[:r] for z in A if z[r:] == diag(max(z[:r]), k - r))


# -- regularity --------------------------------------------------------------

def is_regressively_regular(f: Mapping, E: Sequence[int], k: Optional[int] = None) -> Verdict:
    """Regressive values on E^k depend only on order type and stay below the min."""
    E = tuple(sorted(set(E)))
    if k is None:
        if not f:
            raise PreconditionError("cannot infer arity from an empty map")
        k = len(next(iter(f)))
    for x in product(E, repeat=k):
        if x not in f:
            return Verdict(False, {"clause": "i", "missing": x})
    members = defaultdict(list)
    for x in product(E, repeat=k):
        members[order_type(x)].append(x)
    checked = 0
    for ty, xs in members.items():
        reg = [x for x in xs if sup(f[x]) < min(x)]
        if not reg:
            continue
        x0 = reg[0]
        for y in xs:
            checked += 1
            if not (sup(f[y]) < min(y) and f[y] == f[x0]):
                return Verdict(False, {"clause": "ii", "x": x0, "y": y, "f(x)": f[x0], "f(y)": f[y]},
                               checked=checked)
    return Verdict(True, checked=checked)


def j_related(x: Sequence[int], y: Sequence[int], j: int) -> bool:
    x, y = tuple(x), tuple(y)
    if len(x) != len(y) or order_type(x) != order_type(y):
        return False
    top = max(x)
    for a, b in zip(x, y):
        if a <= j and b != a:
            return False
        if a > j and not b > top:
            return False
    return True


def _system_clauses(E, f, r) -> Optional[Verdict]:
    """Clauses shared by (t, r)-regularity and (t, r)-SOI: f maps a closed A ⊆ N^r into fld(A), E^r ⊆ A."""
    A = frozenset(f)
    for x in A:
        if len(x) != r:
            return Verdict(False, {"clause": "ii", "reason": "arity", "x": x})
    if not is_closed(A):
        return Verdict(False, {"clause": "ii", "reason": "domain not closed"})
    field = {c for x in A for c in x}
    for x, v in f.items():
        if v not in field:
            return Verdict(False, {"clause": "ii", "reason": "value outside fld(A)", "x": x, "value": v})
    for x in product(sorted(E), repeat=r):
        if x not in A:
            return Verdict(False, {"clause": "iii", "missing": x})
    return None


def _check_shape(C: BefFormula, q: int, t: int, r: int):
    if (C.q, C.t, C.r) != (q, t, r):
        raise PreconditionError(f"formula {C} has shape BEF({C.q},{C.t},{C.r}); expected BEF({q},{t},{r})")


def tr_regular_check(E: Sequence[int], f: Mapping, formulas: Sequence[BefFormula], t: int, r: int) -> Verdict:
    """(t, r)-regularity of f over E, quantifying over the supplied BEF(2t, t, r) formulas only."""
    for C in formulas:
        _check_shape(C, 2 * t, t, r)
    E = tuple(sorted(set(E)))
    bad = _system_clauses(E, f, r)
    if bad is not None:
        return bad
    field = sorted({c for x in f for c in x})
    classes = defaultdict(list)
    for x in product(E, repeat=t):
        classes[order_type(x)].append(x)
    checked = 0
    for C in formulas:
        for ty, xs in classes.items():
            # w that work for every member of the class
            good_w = None
            for x in xs:
                checked += 1
                us = [u for u in product([c for c in field if c < min(x)], repeat=t)
                      if eval_bef(C, f, x + u)]
                if not us:
                    continue
                if good_w is None:
                    good_w = [w for w in product(field, repeat=t)
                              if all(eval_bef(C, f, y + w) for y in xs)]
                if not good_w:
                    return Verdict(False, {"clause": "iv", "formula": str(C), "x": x, "u": us[0]},
                                   checked=checked)
    return Verdict(True, checked=checked)


def soi_check(E: Sequence[int], f: Mapping, formulas: Sequence[BefFormula], t: int, r: int) -> Verdict:
    """(t, r)-SOI property of E for f, over the supplied BEF(3t, t, r) formulas only."""
    for C in formulas:
        _check_shape(C, 3 * t, t, r)
    E = tuple(sorted(set(E)))
    bad = _system_clauses(E, f, r)
    if bad is not None:
        return bad
    values = sorted({f[x] for x in product(E, repeat=r)})
    classes = defaultdict(list)
    for x in product(E, repeat=t):
        classes[order_type(x)].append(x)
    checked = 0
    for C in formulas:
        for z in product(E, repeat=t):
            for w in product(values, repeat=t):
                bound = max(z + w)
                for ty, xs in classes.items():
                    seen = None
                    for x in xs:
                        if min(x) <= bound:
                            continue
                        checked += 1
                        val = eval_bef(C, f, x + z + w)
                        if seen is None:
                            seen = (x, val)
                        elif val != seen[1]:
                            return Verdict(False, {"clause": "iv", "formula": str(C), "x": seen[0], "y": x,
                                                   "z": z, "w": w}, checked=checked)
    return Verdict(True, checked=checked)


# -- search ------------------------------------------------------------------

def _seed_sets(n_max: int, p: int):
    """Coordinate sets S ⊆ [n_max] with |S| >= p, ordered by max then lexicographically."""
    for top in range(n_max):
        rest = range(top)
        for size in range(max(p - 1, 0), top + 1):
            for c in combinations(rest, size):
                yield c + (top,)


def search_regular(source: Union[Dfnl, BefFormula, str], k: int, p: int, budget: SearchBudget,
                   n_max: int = 6, caps: Caps = DEFAULT_CAPS) -> SearchReport:
    """Find closed A = S^k and E ⊆ S, |E| = p, with the induced map regressively regular over E."""
    if isinstance(source, str):
        source = parse_bef(source)
    if isinstance(source, BefFormula):
        B = source
        if B.r != k or B.q != k + 1:
            raise PreconditionError(f"need a BEF({k + 1}, t, {k}) formula, got {B}")
        build = lambda A: df(B, A)
        statement = "Lemma 5.3"
        label = {"bef": str(B)}
    else:
        H = source
        build = lambda A: rcn(A, H)
        statement = "Lemma 5.2"
        label = H.params()
    target = ot(k, caps)
    params = {"k": k, "p": p, "n_max": n_max, **label}
    rng = random.Random(budget.seed)

    if budget.strategy == "random-restart":
        def candidates():
            for _ in range(budget.max_candidates):
                size = rng.randint(p, n_max)
                S = tuple(sorted(rng.sample(range(n_max), size)))
                yield S, tuple(sorted(rng.sample(S, p)))
    else:
        total = sum(1 for S in _seed_sets(n_max, p) for _ in combinations(S, p))
        if budget.strategy == "exhaustive" and total > budget.max_candidates:
            raise BudgetError(f"{total} candidates exceed max_candidates={budget.max_candidates}")

        def candidates():
            for S in _seed_sets(n_max, p):
                for E in combinations(S, p):
                    yield S, E

    explored = 0
    cache: dict = {}
    for S, E in candidates():
        explored += 1
        if explored > budget.max_candidates:
            break
        if S not in cache:
            A = cube(S, k)
            if len(A) > caps.max_closure:
                raise BudgetError("candidate set exceeds the closure cap")
            cache = {S: build(A)}
        F = cache[S]
        if is_regressively_regular(F, E, k):
            count = len({F[x] for x in product(E, repeat=k) if F[x] < min(x)})
            recount = oracle.recount_graph(F, E, k)
            regular_again = is_regressively_regular(F, E, k).holds
            verified = recount == count and count <= target and regular_again
            witness = {"A": sorted(cube(S, k)), "A_field": S, "E": E}
            return SearchReport(statement, params, witness, count, target, verified, explored,
                                budget.seed, vacuous=target >= p ** k, strategy=budget.strategy)
    return SearchReport(statement, params, None, None, target, False, explored, budget.seed,
                        vacuous=target >= p ** k, strategy=budget.strategy)
