"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line."""
import json
import math
import random
import time
from itertools import combinations, product

import pytest

from regressia import assignments as asg
from regressia import cli
from regressia import completions as comp
from regressia import inductive as ind
from regressia.bef import parse_bef
from regressia.core import Caps, closure, cube, ot, ot_surjection_sum, ramsey_homogeneous, regressive_values

from battery import BATTERY, SEARCHES, recheck, run


@pytest.fixture
def report(capsys):
    started = time.perf_counter()

    def emit(n, ok, detail=""):
        took = time.perf_counter() - started
        with capsys.disabled():
            print(f"\nCRITERION {n}: {'PASS' if ok else 'FAIL'} ({detail}; {took:.2f}s)")
        return took

    return emit


def test_criterion_01_ot_table(report):
    values = [ot(k) for k in range(1, 7)]
    oracle = [ot_surjection_sum(k) for k in range(1, 7)]
    bounds = all(v <= min(k ** k, 2 ** k * math.factorial(k))
                 for k, v in zip(range(1, 7), values))
    ok = values == oracle == [1, 3, 13, 75, 541, 4683] and bounds
    took = report(1, ok, f"ot(1..6) = {values}")
    assert ok and took < 1.0


def test_criterion_02_intro_example(report):
    pts = [2 ** i for i in range(11)]
    vals = regressive_values(lambda x: (x[0] - x[1]) ** 2, product(pts, repeat=2))
    ok = vals == {0}
    took = report(2, ok, f"values = {sorted(vals)}")
    assert ok and took < 1.0


def test_criterion_03_sharp_star_audit(report):
    res = cli.audit_3_10(1000, seed=310, max_ground=5)
    ok = res["agree"] == res["samples"] == res["sharp_implies_end"] == 1000
    took = report(3, ok, f"{res['agree']}/1000 agree, sharp held on {res['sharp_true']}, "
                         f"sharp => end-preserving {res['sharp_implies_end']}/1000")
    assert ok and took < 120


FORMULAS_K1 = ["bef q=2 t=1 r=1 : f1 < x1",
               "bef q=2 t=1 r=1 : f1 > x2 & y1 < x1",
               "bef q=2 t=1 r=1 : y1 = x2 | f1 > x1",
               "bef q=2 t=2 r=1 : f1 < f2 & y2 = x2"]
FORMULAS_K2 = ["bef q=3 t=1 r=2 : f1 < x1",
               "bef q=3 t=1 r=2 : f1 < x1 & y2 > y1",
               "bef q=3 t=1 r=2 : y1 = x3 | f1 > x2"]
GROUND_K2 = frozenset({(0, 0), (0, 1), (1, 0), (1, 1), (1, 2)})


def lemma_5_2_family():
    out = []
    for H in [ind.MinFieldDfnl()] + [ind.dfnl_from_bef(t) for t in FORMULAS_K1]:
        out.append(ind.lemma_5_2_assignment(H, 1, cube(range(5), 1)))
    for H in [ind.MinFieldDfnl()] + [ind.dfnl_from_bef(t) for t in FORMULAS_K2]:
        out.append(ind.lemma_5_2_assignment(H, 2, GROUND_K2))
    return out


def test_criterion_04_dfnl_generator(report):
    family = lemma_5_2_family()
    verdicts = [asg.check_sharp_decreasing(V) for V in family]
    passed = sum(v.holds for v in verdicts)
    ok = passed == len(family) and all(v.checked >= 32 for v in verdicts)
    took = report(4, ok, f"{passed}/{len(family)} functionals give #-decreasing V on 5-tuple grounds")
    assert ok and took < 120


def test_criterion_05_lex_lift(report):
    family = [V for V in lemma_5_2_family() if asg.check_sharp_decreasing(V).holds]
    sharp = transfer_ok = transfer_checked = 0
    for i, V in enumerate(family):
        res = cli.lift_audit(V, samples=60, seed=i)
        sharp += res["lex_sharp"]["verdict"] == "holds"
        transfer_ok += res["transfer_ok"]
        transfer_checked += res["transfer_checked"]
    ok = sharp == len(family) and transfer_ok == transfer_checked > 0
    report(5, ok, f"lex-#-decreasing {sharp}/{len(family)}, transfer {transfer_ok}/{transfer_checked}")
    assert ok


def sharp_samples(rng, X, k, count):
    ground = cube(range(X), k)
    out, tries = [], 0
    while len(out) < count and tries < 200:
        tries += 1
        U = asg.random_local_rule(ground, rng)
        if asg.check_sharp_decreasing(U).holds:
            out.append(U)
    return out


def test_criterion_06_greedy_completion(report):
    rng = random.Random(48)
    caps = Caps(max_completion_domain=16)
    samples = []
    for X in (1, 2, 3, 4):
        samples += sharp_samples(rng, X, 1, 6)
    samples += sharp_samples(rng, 2, 2, 5)
    samples += sharp_samples(rng, 3, 2, 2)
    for X in (3, 4):
        for H in (ind.MinFieldDfnl(), ind.dfnl_from_bef(FORMULAS_K2[0])):
            samples.append(ind.lemma_5_2_assignment(H, 2, cube(range(X), 2)))
    good = 0
    for U in samples:
        runs = [comp.direct_completion_greedy(U, pol, caps=caps) for pol in comp.POLICIES]
        direct = U(U.ground)
        if all(r.f == direct and r.matches_direct for r in runs):
            good += 1
    ok = good == len(samples) and len(samples) >= 30
    took = report(6, ok, f"{good}/{len(samples)} greedy completions equal U(X^k) under both policies")
    assert ok and took < 60


def test_criterion_07_ramsey_threshold(report):
    pairs6 = list(combinations(range(6), 2))
    all_found = True
    for bits in range(1 << len(pairs6)):
        col = {s: bits >> i & 1 for i, s in enumerate(pairs6)}
        if ramsey_homogeneous(col, range(6), 2, 3).subset is None:
            all_found = False
            break
    c5 = ramsey_homogeneous(cli.c5_coloring(), range(5), 2, 3)
    ok = all_found and c5.subset is None and c5.exhaustive
    took = report(7, ok, f"all 2^15 colourings of S_2[6] homogeneous: {all_found}; "
                         f"pentagon colouring of S_2[5] has none: {c5.subset is None}")
    assert ok and took < 60


def random_formula(rng, k):
    q, r = k + 1, k
    t = rng.choice((1, 2)) if k == 1 else 1
    terms = [f"x{i}" for i in range(1, q + 1)] + [f"y{i}" for i in range(1, t * r + 1)] + \
        [f"f{i}" for i in range(1, t + 1)]

    def lit():
        a, b = rng.sample(terms, 2)
        atom = f"{a} {rng.choice('<=>')} {b}"
        return f"!({atom})" if rng.random() < 0.2 else atom

    conjs = ["(" + " & ".join(lit() for _ in range(rng.randint(1, 2))) + ")"
             for _ in range(rng.randint(1, 2))]
    return f"bef q={q} t={t} r={r} : " + " | ".join(conjs)


def test_criterion_08_df_equals_rcn(report):
    rng = random.Random(53)
    pairs = equal = clean = 0
    while pairs < 60:
        k = rng.choice((1, 2))
        B = parse_bef(random_formula(rng, k))
        width = 7 if k == 1 else 6
        seed_pts = [tuple(rng.randrange(width) for _ in range(k)) for _ in range(rng.randint(1, 3))]
        A = closure(seed_pts)
        if len({c for x in A for c in x}) > 6:
            continue
        pairs += 1
        f = ind.df(B, A)
        equal += f == ind.rcn(A, ind.dfnl_from_bef(B))
        clean += not ind.df_fixpoint_violations(B, A, f)
    ok = equal == clean == pairs
    report(8, ok, f"Df = RCN on {equal}/{pairs} pairs, fixpoint re-validated on {clean}/{pairs}")
    assert ok


def test_criterion_09_search_soundness(report):
    sound = verified = 0
    failures = []
    for argv in SEARCHES:
        code, rep, err = run(argv)
        assert rep is not None, err
        if rep.get("verified") or rep.get("subset") is not None:
            verified += 1
        if recheck(argv, rep):
            sound += 1
        else:
            failures.append(argv)
    ok = sound == len(SEARCHES)
    report(9, ok, f"{sound}/{len(SEARCHES)} reports sound; witness success rate {verified}/{len(SEARCHES)}")
    assert ok, failures


def test_criterion_10_determinism(report):
    def battery():
        return [json.dumps(cli.strip_timing(run(argv)[1]), sort_keys=True) for argv in BATTERY]

    first, second = battery(), battery()
    same = sum(a == b for a, b in zip(first, second))
    ok = same == len(BATTERY)
    report(10, ok, f"{same}/{len(BATTERY)} reports byte-identical apart from timing")
    assert ok
