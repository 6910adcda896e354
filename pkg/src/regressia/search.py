"""Witness searches, the reduction gadgets and exact micro-scale thresholds.

Throughout, ``[n]`` is ``{0, ..., n-1}`` and k-subsets are sorted tuples.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from itertools import combinations, product
from typing import Callable, Iterable, Mapping, Optional, Sequence

from . import oracle
from .assignments import FunctionAssignment, canonical_subset, ramsey_reduce
from .core import (DEFAULT_CAPS, Caps, Verdict, cube, fld, lookup, min_homogeneous_check,
                   ot, sup, type_homogeneous)
from .errors import BudgetError, MissingKeyError, PreconditionError
from .report import SearchBudget, SearchReport


def _count(F, E, k) -> int:
    vals = set()
    for x in product(E, repeat=k):
        y = lookup(F, x)
        if sup(y) < min(x):
            vals.add(y)
    return len(vals)


def _check_total(F, n, k):
    if isinstance(F, Mapping):
        for x in product(range(n), repeat=k):
            if x not in F:
                raise MissingKeyError(x, "F")


# -- few regressive values on S_p[n] ---------------------------------------

def find_witness_04(F, n: int, k: int, r: int, p: int, budget: SearchBudget = SearchBudget(),
                    caps: Caps = DEFAULT_CAPS) -> SearchReport:
    """Look for E in S_p[n] on which F has at most (k^k)p regressive values.

    Exhaustive mode scans every p-subset and keeps the lex-least one of
    minimal count.  ``greedy-ramsey`` looks for an E on which regressive
    behaviour depends only on order type (so at most ot(k) values);
    ``random-restart`` samples p-subsets.
    """
    _check_total(F, n, k)
    if p < 1:
        raise PreconditionError("p must be positive")
    target = k ** k * p
    params = {"n": n, "k": k, "r": r, "p": p}
    vacuous = target >= p ** k
    rng = random.Random(budget.seed)
    best = None
    explored = 0
    extra = {}

    if p > n:
        pass
    elif budget.strategy == "exhaustive":
        total = math.comb(n, p)
        if total > budget.max_candidates:
            raise BudgetError(f"C({n},{p}) = {total} candidates exceed max_candidates={budget.max_candidates}")
        for E in combinations(range(n), p):
            explored += 1
            c = _count(F, E, k)
            if best is None or c < best[0]:
                best = (c, E)
                if c == 0:
                    break
    elif budget.strategy == "greedy-ramsey":
        def g(x):
            y = lookup(F, x)
            return y if sup(y) < min(x) else None

        res = type_homogeneous(g, range(n), k, p, limit=budget.max_candidates)
        explored = res.nodes
        extra["incomplete"] = res.incomplete
        if res.subset is not None:
            best = (_count(F, res.subset, k), res.subset)
    else:
        for _ in range(budget.max_candidates):
            explored += 1
            E = tuple(sorted(rng.sample(range(n), p)))
            c = _count(F, E, k)
            if best is None or (c, E) < best:
                best = (c, E)

    if best is None:
        return SearchReport("Theorem 0.4", params, None, None, target, False, explored, budget.seed,
                            vacuous, budget.strategy, extra)
    count, E = best
    recount = oracle.recount(lambda x: lookup(F, x), E, k)
    verified = recount == count and count <= target
    extra["ot_bound"] = ot(k, caps)
    return SearchReport("Theorem 0.4", params, {"E": E}, count, target, verified, explored, budget.seed,
                        vacuous, budget.strategy, extra)


# -- witnesses inside an assignment -----------------------------------------

def cube_family(U: FunctionAssignment) -> list:
    """Every cube S^k contained in U's ground, smallest first."""
    k = U.arity
    field_ = sorted(fld(U.ground))
    out = []
    for size in range(1, len(field_) + 1):
        for S in combinations(field_, size):
            A = cube(S, k)
            if A <= U.ground:
                out.append(A)
    return out


def find_witness_A(U: FunctionAssignment, p: int, budget: SearchBudget = SearchBudget(),
                   family: Optional[Iterable[Iterable[tuple]]] = None,
                   caps: Caps = DEFAULT_CAPS) -> SearchReport:
    """Look for A and E with |E| = p, E^k ⊆ A, and U(A) having at most ot(k) regressive values on E^k.

    ``family`` lists the candidate sets A; it defaults to the cubes S^k inside
    the ground (these are closed, which is what dfnl-derived rules need).
    """
    k = U.arity
    target = ot(k, caps)
    fam = [frozenset(A) for A in (family if family is not None else cube_family(U))]
    fam.sort(key=lambda A: (len(A), canonical_subset(A)))
    params = {"k": k, "p": p, "assignment": U.name or U.kind, "family_size": len(fam)}
    extra = {"kk_bound": k ** k}
    vacuous = target >= p ** k
    rng = random.Random(budget.seed)

    def pairs_of(A):
        S = sorted(fld(A))
        for E in combinations(S, p):
            if all(x in A for x in product(E, repeat=k)):
                yield E

    best = None
    explored = 0
    if budget.strategy == "exhaustive":
        total = sum(math.comb(len(fld(A)), p) for A in fam)
        if total > budget.max_candidates:
            raise BudgetError(f"{total} (A, E) candidates exceed max_candidates={budget.max_candidates}")
        for A in fam:
            fa = U(A)
            for E in pairs_of(A):
                explored += 1
                key = (_count(fa, E, k), canonical_subset(A), E)
                if best is None or key < best:
                    best = key
    elif budget.strategy == "greedy-ramsey":
        A = fam[-1] if fam else None
        if A is not None and len(fld(A)) >= p:
            red = ramsey_reduce(U, A, sorted(fld(A)), p)
            explored = red.explored
            if red.subset is not None:
                best = (red.count, canonical_subset(A), red.subset)
    else:
        cands = [A for A in fam if len(fld(A)) >= p]
        for _ in range(budget.max_candidates if cands else 0):
            explored += 1
            A = rng.choice(cands)
            E = tuple(sorted(rng.sample(sorted(fld(A)), p)))
            if not all(x in A for x in product(E, repeat=k)):
                continue
            key = (_count(U(A), E, k), canonical_subset(A), E)
            if best is None or key < best:
                best = key

    if best is None:
        return SearchReport("Proposition A", params, None, None, target, False, explored, budget.seed,
                            vacuous, budget.strategy, extra)
    count, A_key, E = best
    A = frozenset(A_key)
    fa = U(A)
    recount = oracle.recount_graph(fa, E, k)
    verified = recount == count and count <= target
    return SearchReport("Proposition A", params, {"A": A_key, "E": E}, count, target, verified, explored,
                        budget.seed, vacuous, budget.strategy, extra)


# -- gadgets -----------------------------------------------------------------

def _ksets(n, k):
    return combinations(range(n), k)


def check_regressive(F, n: int, k: int) -> None:
    """Raise unless F(x) < min(x) for every k-subset x of [n] with min(x) > 0."""
    for s in _ksets(n, k):
        v = lookup(F, s)
        if s[0] > 0 and not v < s[0]:
            raise PreconditionError(f"F is not regressive at {s}: F = {v}")


def gadget_lemma_1_3(F, n: int, k: int) -> dict:
    """The three-case map used to pass from min-homogeneity to spread-out sets."""
    if k < 2:
        raise PreconditionError("the case ladder reads A_2, so k >= 2 is required")
    check_regressive(F, n, k)
    G = {}
    for s in _ksets(n, k):
        a1, a2 = s[0], s[1]
        if a2 - a1 < a1:
            G[s] = a2 - a1
        elif a1 > 0 and 2 ** (a1 - 1) > a2:
            # 2^j grows with j, so the greatest admissible j is a1 - 1
            G[s] = a1 - 1
        else:
            G[s] = lookup(F, s)
    return G


def gadget_lemma_1_5(F, n: int, k: int) -> dict:
    """G(x) = (F(rng x), |min(x) - 1|) on strictly increasing x, (0, 0) elsewhere."""
    check_regressive(F, n, k)
    G = {}
    for x in product(range(n), repeat=k):
        if all(a < b for a, b in zip(x, x[1:])):
            G[x] = (lookup(F, x), abs(x[0] - 1))
        else:
            G[x] = (0, 0)
    return G


def spread_ok(E: Sequence[int]) -> bool:
    E = sorted(set(E))
    return all(2 ** a < b for a, b in zip(E, E[1:]))


def theorem_IV_check(F, E: Sequence[int], k: int) -> Verdict:
    E = tuple(sorted(set(E)))
    for a, b in zip(E, E[1:]):
        if not 2 ** a < b:
            return Verdict(False, {"clause": "spread", "x": a, "y": b})
    v = min_homogeneous_check(F, E, k)
    if not v.holds:
        return Verdict(False, {"clause": "min-homogeneous", **v.counterexample}, checked=v.checked)
    return Verdict(True, vacuous=v.vacuous, checked=v.checked)


# -- thresholds --------------------------------------------------------------

STATEMENTS = ("0.3", "0.4", "I")


@dataclass
class ThresholdResult:
    statement: str
    params: dict
    table: list
    H: Optional[int]
    explored: int = 0

    def to_dict(self) -> dict:
        from .core import to_jsonable
        return {"statement": self.statement, "params": self.params, "table": to_jsonable(self.table),
                "H": self.H, "explored": self.explored}


def _value_choices(statement, n, k, r):
    """Domain points and, for each, the values the adversary may pick."""
    if statement == "I":
        doms = list(_ksets(n, k))
        return doms, [list(range(s[0])) if s[0] > 0 else list(range(n)) for s in doms]
    doms = list(product(range(n), repeat=k))
    if statement == "0.4":
        vals = list(product(range(n), repeat=r))
        return doms, [vals] * len(doms)
    return doms, [[v for v in product(range(n), repeat=r) if max(v) <= min(x)] for x in doms]


def _holds_for(statement, F, n, k, p, target) -> bool:
    for E in combinations(range(n), p):
        if statement == "I":
            if min_homogeneous_check(F, E, k).holds:
                return True
        elif statement == "0.4":
            if _count(F, E, k) <= target:
                return True
        else:
            if len({F[x] for x in product(E, repeat=k)}) <= target:
                return True
    return False


def threshold_H(statement: str, k: int, r: int, p: int, n_max: int, caps: Caps = DEFAULT_CAPS,
                progress: Optional[Callable[[int], None]] = None) -> ThresholdResult:
    """Exact per-n verdicts against every adversary F, and the least n from which all hold.

    No sampling: if any n needs more than ``caps.max_fspace`` adversaries the
    whole computation is refused.
    """
    if statement not in STATEMENTS:
        raise PreconditionError(f"unknown statement {statement!r}; expected one of {STATEMENTS}")
    if min(k, r, p) < 1:
        raise PreconditionError("k, r, p must be positive")
    target = k ** k * p
    sizes = []
    for n in range(1, n_max + 1):
        _, choices = _value_choices(statement, n, k, r)
        size = math.prod(len(c) for c in choices)
        if size > caps.max_fspace:
            raise BudgetError(f"n={n}: {size} adversaries exceed max_fspace={caps.max_fspace}")
        sizes.append(size)
    table = []
    explored = 0
    for n in range(1, n_max + 1):
        if progress:
            progress(n)
        doms, choices = _value_choices(statement, n, k, r)
        row = {"n": n, "holds": True, "adversaries": sizes[n - 1], "counterexample": None}
        if p > n:
            row["holds"] = False
            row["reason"] = "p > n: no E of size p"
        else:
            for vals in product(*choices):
                explored += 1
                F = dict(zip(doms, vals))
                if not _holds_for(statement, F, n, k, p, target):
                    row["holds"] = False
                    row["counterexample"] = sorted(F.items())
                    break
        table.append(row)
    H = None
    for row in reversed(table):
        if not row["holds"]:
            break
        H = row["n"]
    params = {"k": k, "r": r, "p": p, "n_max": n_max, "bound": target}
    return ThresholdResult(statement, params, table, H, explored)
