import random
from itertools import product

import pytest
from hypothesis import given, strategies as st

from regressia import assignments as asg
from regressia.bef import parse_bef
from regressia.core import closure, cube, fld, is_closed, order_type
from regressia.errors import ContractViolation, PreconditionError
from regressia import inductive as ind
from regressia.report import SearchBudget

NEVER = "bef q=2 t=1 r=1 : x1 < x1"
ALWAYS = "bef q=2 t=1 r=1 : x1 = x1"
BELOW = "bef q=2 t=1 r=1 : f1 < x1"
DROP = "bef q=2 t=1 r=1 : f1 > x2 & y1 < x1"
SAMPLE_FORMULAS = [BELOW, DROP, "bef q=2 t=1 r=1 : y1 = x2 | f1 > x1", "bef q=2 t=2 r=1 : f1 < f2 & y2 = x2"]


def random_closed(rng, k, width=6):
    seeds = [tuple(rng.randrange(width) for _ in range(k)) for _ in range(rng.randint(1, 3))]
    return closure(seeds)


def test_bef_functional_needs_q_equal_r_plus_1():
    with pytest.raises(PreconditionError):
        ind.dfnl_from_bef("bef q=3 t=1 r=1 : x1 < x2")


def test_bef_functional_extremes():
    never, always = ind.dfnl_from_bef(NEVER), ind.dfnl_from_bef(ALWAYS)
    f = {(1,): 7}
    assert never(f, (4,)) == 4
    assert always(f, (4,)) == 1


def test_bef_functional_golden_chain():
    H = ind.dfnl_from_bef(BELOW)
    f0, f1, f2 = {}, {(0,): 0}, {(0,): 0, (2,): 1}
    # only |x| is available when f is empty; once f(0) = 0 < 3 the witness y = 0 makes j = 0 admissible
    assert [H(f, (3,)) for f in (f0, f1, f2)] == [3, 0, 0]
    # j = 0 would need some f(y) < 1 with y below 1; f(0) = 1 fails, so H falls back to |x|
    assert H({(0,): 1}, (1,)) == 1


@pytest.mark.parametrize("text", [BELOW, DROP, SAMPLE_FORMULAS[2]])
def test_validate_dfnl_on_samples(text):
    assert ind.validate_dfnl(ind.dfnl_from_bef(text), 1, random.Random(3)).holds
    assert ind.validate_dfnl(ind.MinFieldDfnl(), 2, random.Random(3)).holds


def test_rcn_examples():
    H = ind.MinFieldDfnl()
    assert ind.rcn({(0,), (2,), (5,)}, H) == {(0,): 0, (2,): 0, (5,): 0}
    assert ind.rcn({(4, 2)}, H)[(4, 2)] in (4, 2)


def test_rcn_contract_violation():
    H = ind.CallableDfnl(lambda f, x: 99, "bad")
    with pytest.raises(ContractViolation):
        ind.rcn({(1,)}, H)


@pytest.mark.parametrize("seed", range(20))
def test_rcn_values_in_field_and_order_independent(seed):
    rng = random.Random(seed)
    k = rng.choice((1, 2))
    A = frozenset(tuple(rng.randrange(6) for _ in range(k)) for _ in range(rng.randint(1, 12)))
    H = ind.dfnl_from_bef(rng.choice(SAMPLE_FORMULAS[:3])) if k == 1 else ind.MinFieldDfnl()
    F = ind.rcn(A, H)
    assert set(F.values()) <= fld(A)
    assert all(ind.rcn(A, H, rng=random.Random(s)) == F for s in range(3))


@pytest.mark.parametrize("seed", range(20))
def test_mrcn_extends_rcn_on_closed_part(seed):
    rng = random.Random(seed)
    A = frozenset(tuple(rng.randrange(5) for _ in range(2)) for _ in range(rng.randint(1, 14)))
    H = ind.MinFieldDfnl()
    M = ind.mrcn(A, H)
    R = ind.rcn(ind.closed_part(A), H)
    assert all(M[x] == v for x, v in R.items())
    assert M == ind.rcn(A, ind.RestrictedDfnl(H))


def test_dfnl_assignment_min_field():
    V = ind.lemma_5_2_assignment(ind.MinFieldDfnl(), 2, cube(range(3), 2))
    assert asg.check_sharp_decreasing(V).holds
    A = frozenset({(1, 2)})  # (1, 1) is missing, so (1, 2) is not in A^
    assert V(A) == {(1, 2): (1, 2)}


@pytest.mark.parametrize("text", SAMPLE_FORMULAS[:3])
def test_dfnl_assignment_bef(text):
    V = ind.lemma_5_2_assignment(ind.dfnl_from_bef(text), 1, cube(range(5), 1))
    assert asg.check_sharp_decreasing(V).holds


def test_df_needs_closed_set():
    with pytest.raises(PreconditionError):
        ind.df(BELOW, {(0, 1)})


def test_df_extremes():
    A = closure({(1, 3), (2, 2)})
    assert ind.df(NEVER.replace("q=2 t=1 r=1", "q=3 t=1 r=2"), A) == {x: max(x) for x in A}
    low = min(fld(A))
    assert ind.df(ALWAYS.replace("q=2 t=1 r=1", "q=3 t=1 r=2"), A) == \
        {x: low if low <= max(x) else max(x) for x in A}


def test_df_golden_table():
    # f(0) = 0 as |x|; f(1) = 1 since no earlier value exceeds 0; f(3) = 0 via y = 1 with f(1) = 1 > 0
    A = closure({(0,), (1,), (3,)})
    assert ind.df(DROP, A) == {(0,): 0, (1,): 1, (3,): 0}


@pytest.mark.parametrize("seed", range(15))
def test_df_equals_rcn_and_is_a_fixpoint(seed):
    rng = random.Random(seed)
    B = parse_bef(rng.choice(SAMPLE_FORMULAS))
    A = random_closed(rng, 1)
    f = ind.df(B, A)
    assert f == ind.rcn(A, ind.dfnl_from_bef(B))
    assert ind.df_fixpoint_violations(B, A, f) == []


def test_slice():
    f = {x: x[0] + x[1] for x in product(range(3), repeat=2)}
    assert ind.slice_map(f, 1) == {(0,): 0, (1,): 2, (2,): 4}
    A = closure({(0, 3), (2, 2)})
    S = ind.slice_set(A, 1)
    assert is_closed(S) and fld(S) == fld(A)
    with pytest.raises(PreconditionError):
        ind.slice_map(f, 2)


@pytest.mark.parametrize("seed", range(10))
def test_slice_keeps_regular(seed):
    rng = random.Random(seed)
    E = sorted(rng.sample(range(1, 8), 3))
    A = cube(range(8), 3)
    by_type = {}
    f = {}
    for x in A:
        ty = order_type(x)
        if ty not in by_type:
            by_type[ty] = rng.choice([0, None])
        f[x] = by_type[ty] if by_type[ty] is not None and min(x) > 0 else max(x)
    assert ind.is_regressively_regular(f, E).holds
    assert ind.is_regressively_regular(ind.slice_map(f, 2), E).holds
    assert ind.is_regressively_regular(ind.slice_map(f, 1), E).holds


def test_regressive_regularity_examples():
    E = (1, 2, 3)
    A = cube(range(4), 2)
    assert ind.is_regressively_regular({x: 9 for x in A}, E).holds
    assert ind.is_regressively_regular({x: min(x) for x in A}, E).holds
    assert ind.is_regressively_regular({x: 0 for x in A}, E).holds
    v = ind.is_regressively_regular({(1, 1): 0}, E, 2)
    assert not v.holds and v.counterexample["clause"] == "i"
    bad = {x: (0 if x == (2, 2) else 5) for x in A}
    v = ind.is_regressively_regular(bad, E)
    assert not v.holds and v.counterexample["clause"] == "ii"


def test_j_related():
    assert not ind.j_related((1, 5), (1, 5), 0)
    assert ind.j_related((1, 5), (1, 9), 1)
    assert not ind.j_related((1, 5), (9, 1), 1)


@given(st.lists(st.integers(0, 9), min_size=1, max_size=4).map(tuple), st.integers(0, 9))
def test_j_related_reflexive_case(x, j):
    assert ind.j_related(x, x, j) == (not any(j < c <= max(x) for c in x))


def test_soi_and_regular_vacuous_on_empty_lists():
    f = {(i,): 0 for i in range(5)}
    assert ind.soi_check((1, 2), f, [], 1, 1).holds
    assert ind.tr_regular_check((1, 2), f, [], 1, 1).holds
    v = ind.soi_check((1, 7), f, [], 1, 1)
    assert not v.holds and v.counterexample["clause"] == "iii"


def test_shape_mismatch():
    with pytest.raises(PreconditionError):
        ind.soi_check((1,), {(0,): 0, (1,): 0}, [parse_bef(BELOW)], 1, 1)


def test_soi_failure():
    f = {(i,): 0 for i in range(6)}
    f[(2,)] = 3
    C = parse_bef("bef q=3 t=1 r=1 : f1 = x1")
    v = ind.soi_check((0, 3, 4), f, [C], 1, 1)
    assert not v.holds and (v.counterexample["x"], v.counterexample["y"]) == ((3,), (4,))


def test_tr_regular_failure_and_success():
    f = {(i,): 0 for i in range(5)}
    f[(0,)] = 3
    C = parse_bef("bef q=2 t=1 r=1 : f1 = x1 & y1 = x2")
    assert not ind.tr_regular_check((3, 4), f, [C], 1, 1).holds
    g = {(i,): 0 for i in range(5)}
    assert ind.tr_regular_check((3, 4), g, [C], 1, 1).holds


def test_search_regular_min_field():
    rep = ind.search_regular(ind.MinFieldDfnl(), 1, 3, SearchBudget())
    assert rep.verified
    f = ind.rcn(frozenset(tuple(x) for x in rep.witness["A"]), ind.MinFieldDfnl())
    assert ind.is_regressively_regular(f, rep.witness["E"]).holds


def test_search_regular_never_true_formula():
    rep = ind.search_regular(parse_bef(NEVER), 1, 3, SearchBudget())
    assert rep.verified and rep.count == 0 and rep.explored == 1


def test_search_regular_k2_bef():
    B = parse_bef("bef q=3 t=1 r=2 : f1 < x1 & y2 > y1")
    rep = ind.search_regular(B, 2, 3, SearchBudget(max_candidates=5000), n_max=6)
    assert rep.inconclusive or rep.verified
