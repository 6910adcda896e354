"""Restriction codes, order invariance, transfer between grounds, and greedy completion."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Optional, Sequence

from .assignments import FunctionAssignment, canonical_subset, is_subgraph, subsets
from .core import DEFAULT_CAPS, Caps, Verdict, cube, fld, sup
from .errors import BudgetError, PreconditionError


# -- shapes ------------------------------------------------------------------

def shape(A: Iterable[tuple], g: Optional[Mapping] = None) -> tuple:
    """Rank-encoding of a tuple set (and optionally an endomorphism of it).

    Two sets are order isomorphic iff their shapes agree; the unique
    isomorphism is the increasing bijection between their fields.
    """
    A = frozenset(A)
    ranks = {c: i for i, c in enumerate(sorted(fld(A)))}
    enc = lambda x: tuple(ranks[c] for c in x)
    pts = tuple(sorted(enc(x) for x in A))
    if g is None:
        return (len(ranks), pts)
    return (len(ranks), pts, tuple(sorted((enc(x), enc(g[x])) for x in A)))


def relabel(x: tuple, h: Mapping[int, int]) -> tuple:
    return tuple(h[c] for c in x)


def increasing_map(src: Sequence[int], dst: Sequence[int]) -> dict:
    src, dst = sorted(src), sorted(dst)
    if len(src) != len(dst):
        raise PreconditionError("order isomorphism needs fields of equal size")
    return dict(zip(src, dst))


@dataclass(frozen=True)
class RestrictionCode:
    size: int
    endo_codes: tuple

    def to_dict(self):
        return {"size": self.size, "endo_codes": [list(map(list, c)) for c in self.endo_codes]}


def restriction_code(U: FunctionAssignment, S: Sequence[int], caps: Caps = DEFAULT_CAPS) -> RestrictionCode:
    """Index-graph description of U on every A ⊆ S^k, positions 1-based within S."""
    S = tuple(sorted(set(S)))
    box = cube(S, U.arity)
    if not box <= U.ground:
        raise PreconditionError(f"S^k is not inside the ground for S = {S}")
    if len(box) > caps.max_ground:
        raise BudgetError(f"|S^k| = {len(box)} exceeds {caps.max_ground}")
    pos = {c: i + 1 for i, c in enumerate(S)}
    codes = set()
    for A in subsets(box):
        g = U(A)
        codes.add(tuple(sorted((relabel(x, pos), relabel(g[x], pos)) for x in A)))
    return RestrictionCode(len(S), tuple(sorted(codes)))


def _coded_sets(U: FunctionAssignment, size: int):
    for S in combinations(sorted(fld(U.ground)), size):
        if cube(S, U.arity) <= U.ground:
            yield S


def is_p_uniform(U: FunctionAssignment, p: int, caps: Caps = DEFAULT_CAPS) -> Verdict:
    """All same-size S (|S| <= p, S^k inside the ground) share a restriction code."""
    checked = 0
    for size in range(1, p + 1):
        first = None
        for S in _coded_sets(U, size):
            checked += 1
            code = restriction_code(U, S, caps)
            if first is None:
                first = (S, code)
            elif code != first[1]:
                return Verdict(False, {"S": first[0], "T": S}, checked=checked)
    return Verdict(True, checked=checked)


def is_order_invariant(U: FunctionAssignment, scope: Optional[Iterable] = None,
                       max_field_size: Optional[int] = None, caps: Caps = DEFAULT_CAPS) -> Verdict:
    """Order-isomorphic A, B always get order-isomorphic U(A), U(B).

    The default scope compares every subset of the ground with the first
    subset of the same shape; ``max_field_size`` limits it to |fld(A)| <= that.
    """
    if scope is None:
        if len(fld(U.ground)) > caps.max_field_invariance:
            raise BudgetError(f"ground field exceeds {caps.max_field_invariance}; supply a scope")
        if len(U.ground) > caps.max_ground:
            raise BudgetError(f"|ground| exceeds {caps.max_ground}; supply a scope")
        reps: dict = {}
        pairs = []
        for A in subsets(U.ground):
            if not A or (max_field_size is not None and len(fld(A)) > max_field_size):
                continue
            key = shape(A)
            if key in reps:
                pairs.append((reps[key], A))
            else:
                reps[key] = A
        scope = pairs
    n = 0
    for A, B in scope:
        A, B = frozenset(A), frozenset(B)
        if shape(A) != shape(B):
            continue
        n += 1
        if shape(A, U(A)) != shape(B, U(B)):
            return Verdict(False, {"A": A, "B": B, "U(A)": U(A), "U(B)": U(B)}, checked=n)
    return Verdict(True, checked=n)


# -- transfer ----------------------------------------------------------------

def _embeddings(A: frozenset, U: FunctionAssignment):
    """Order-isomorphic copies of A inside U's ground, as (B, h) with h: fld(A) -> fld(B)."""
    src = sorted(fld(A))
    for T in combinations(sorted(fld(U.ground)), len(src)):
        h = dict(zip(src, T))
        B = frozenset(relabel(x, h) for x in A)
        if B <= U.ground:
            yield B, h


def transfer(U: FunctionAssignment, m: int, p: int, caps: Caps = DEFAULT_CAPS) -> FunctionAssignment:
    """The assignment on [m]^k order isomorphic to U on every A with |fld(A)| <= p.

    Each value is computed from two different copies of A inside U's ground
    (the first and last in lex order); they must agree.
    """
    inv = is_order_invariant(U, max_field_size=p, caps=caps)
    if not inv.holds:
        raise PreconditionError(f"U is not order invariant: A={canonical_subset(inv.counterexample['A'])}, "
                                f"B={canonical_subset(inv.counterexample['B'])}")
    k = U.arity
    ground = cube(range(m), k)

    def rule(A):
        if not A:
            return {}
        if len(fld(A)) > p:
            raise PreconditionError(f"transfer is only defined for |fld(A)| <= {p}")
        copies = list(_embeddings(A, U))
        if not copies:
            raise PreconditionError(f"no copy of {canonical_subset(A)} inside U's ground")
        results = []
        for B, h in (copies[0], copies[-1]):
            back = {v: c for c, v in h.items()}
            gb = U(B)
            results.append({x: relabel(gb[relabel(x, h)], back) for x in A})
        if results[0] != results[1]:
            raise PreconditionError(f"two copies of {canonical_subset(A)} disagree")
        return results[0]

    return FunctionAssignment(k, ground, rule, kind="rule", name="transfer",
                              params={"source": U.name or U.kind, "m": m, "p": p})


@dataclass
class Uniformization:
    E: Optional[tuple]
    V: Optional[FunctionAssignment]
    explored: int
    uniform: Optional[Verdict] = None


def uniformize(U: FunctionAssignment, p: int, m: int, max_candidates: int = 100_000,
               caps: Caps = DEFAULT_CAPS) -> Uniformization:
    """Lex-first E ⊆ fld(ground), |E| = m, whose same-size subsets (size <= p) share a code.

    V is U carried over to [m]^k along the increasing bijection [m] -> E.
    """
    k = U.arity
    field_ = sorted(fld(U.ground))
    total = math.comb(len(field_), m)
    if total > max_candidates:
        raise BudgetError(f"C({len(field_)},{m}) = {total} candidates exceed {max_candidates}")
    code_cache: dict = {}

    def code(S):
        if S not in code_cache:
            code_cache[S] = restriction_code(U, S, caps)
        return code_cache[S]

    explored = 0
    for E in combinations(field_, m):
        explored += 1
        if not cube(E, k) <= U.ground:
            continue
        ok = True
        for size in range(1, min(p, m) + 1):
            subs = combinations(E, size)
            first = code(next(subs))
            if any(code(S) != first for S in subs):
                ok = False
                break
        if ok:
            phi = dict(zip(range(m), E))
            back = {v: c for c, v in phi.items()}

            def rule(A, phi=phi, back=back):
                g = U(frozenset(relabel(x, phi) for x in A))
                return {x: relabel(g[relabel(x, phi)], back) for x in A}

            V = FunctionAssignment(k, cube(range(m), k), rule, kind="rule", name="uniformized",
                                   params={"E": list(E), "p": p})
            return Uniformization(E, V, explored, is_order_invariant(V, max_field_size=p, caps=caps))
    return Uniformization(None, None, explored)


# -- greedy completion -------------------------------------------------------

POLICIES = ("lex-least", "lex-greatest")


@dataclass
class GreedyCompletion:
    f: dict
    complete: bool
    matches_direct: bool
    special_ok: bool
    diagnosis: Optional[str] = None
    steps: list = field(default_factory=list)


def direct_completion_greedy(U: FunctionAssignment, policy: str = "lex-least", level_order: str = "lex",
                             check_special: bool = True, caps: Caps = DEFAULT_CAPS) -> GreedyCompletion:
    """Build f point by point: the next x has least sup outside dom(f) and gets a
    least-sup value among {U(A ∪ {x})(x) : A ⊆ dom(f), U(A) ⊆ f}.

    On a finite ground the answer must be U(ground); a mismatch or an empty
    candidate set means U was not #-decreasing.
    """
    if policy not in POLICIES:
        raise PreconditionError(f"unknown policy {policy!r}; expected one of {POLICIES}")
    if level_order not in ("lex", "reverse"):
        raise PreconditionError("level_order must be 'lex' or 'reverse'")
    X = fld(U.ground)
    if U.ground != cube(X, U.arity):
        raise PreconditionError("greedy completion needs a ground of the form X^k")
    if len(U.ground) - 1 > caps.max_completion_domain:
        raise BudgetError(f"|dom(f)| would reach {len(U.ground) - 1} (cap {caps.max_completion_domain})")
    order = sorted(U.ground, key=lambda x: (sup(x), x if level_order == "lex" else tuple(-c for c in x)))
    f: dict = {}
    special_ok = True
    steps = []
    for x in order:
        dom = frozenset(f)
        cands = set()
        for A in subsets(dom):
            if is_subgraph(U(A), f):
                cands.add(U(A | {x})[x])
        if not cands:
            return GreedyCompletion(f, False, False, special_ok,
                                    f"no admissible A at {x}: U is not #-decreasing", steps)
        least = min(sup(y) for y in cands)
        tied = sorted(y for y in cands if sup(y) == least)
        f[x] = tied[0] if policy == "lex-least" else tied[-1]
        steps.append({"x": x, "candidates": sorted(cands), "chosen": f[x]})
        if check_special and f != U(frozenset(f)):
            # f is special exactly when f = U(dom f): take A = dom(f)
            special_ok = False
    direct = U(U.ground)
    matches = f == direct
    diagnosis = None if matches and special_ok else "result differs from U(X^k)" if not matches \
        else "an intermediate map was not special"
    return GreedyCompletion(f, True, matches, special_ok, diagnosis, steps)


# -- completions -------------------------------------------------------------

def is_completion(f: Mapping, U: FunctionAssignment, caps: Caps = DEFAULT_CAPS) -> Verdict:
    """Every B ⊆ dom(f) lies in some C ⊆ dom(f) with f|C order isomorphic to some U(A)."""
    Y = sorted(f)
    n = len(Y)
    if len(fld(Y)) > caps.max_completion_ground or n > caps.max_completion_domain:
        raise BudgetError("completion check is exhaustive; the domain is over the cap")
    if len(U.ground) > caps.max_ground:
        raise BudgetError(f"|ground| exceeds {caps.max_ground}")
    shapes = {shape(A, U(A)) for A in subsets(U.ground)}
    size = 1 << n
    good = [False] * size
    for mask in range(size):
        C = [Y[i] for i in range(n) if mask >> i & 1]
        Cs = frozenset(C)
        if all(f[x] in Cs for x in C):
            good[mask] = shape(Cs, f) in shapes
    covered = good[:]
    for mask in range(size - 1, -1, -1):
        if covered[mask]:
            continue
        for i in range(n):
            if not mask >> i & 1 and covered[mask | 1 << i]:
                covered[mask] = True
                break
    for mask in range(size):
        if not covered[mask]:
            B = frozenset(Y[i] for i in range(n) if mask >> i & 1)
            return Verdict(False, {"B": B}, checked=mask + 1)
    return Verdict(True, checked=size)
