"""Seeded CLI battery shared by the CLI and acceptance tests, with independent rechecks."""
import io
import json
import random
from itertools import combinations

from regressia import cli, oracle
from regressia import inductive as ind
from regressia.bef import parse_bef
from regressia.core import cube

SEARCHES = [
    ["search-04", "--example", "square", "--n", "12", "--k", "2", "--p", "5"],
    ["search-04", "--example", "random", "--n", "9", "--k", "2", "--p", "4", "--seed", "3"],
    ["search-04", "--example", "random", "--n", "10", "--k", "2", "--p", "4", "--seed", "5",
     "--strategy", "greedy-ramsey"],
    ["search-04", "--example", "random", "--n", "10", "--k", "2", "--p", "4", "--seed", "7",
     "--strategy", "random-restart", "--max-candidates", "50"],
    ["search-04", "--example", "identity", "--n", "8", "--k", "2", "--r", "2", "--p", "3"],
    ["search-04", "--example", "constant", "--n", "8", "--k", "1", "--p", "3"],
    ["search-A", "--builtin", "min-collapse", "--n", "4", "--k", "1", "--p", "3"],
    ["search-A", "--builtin", "identity", "--n", "3", "--k", "2", "--p", "2"],
    ["search-A", "--builtin", "dfnl-derived", "--n", "4", "--k", "1", "--p", "3"],
    ["search-A", "--builtin", "dfnl-derived", "--n", "3", "--k", "2", "--p", "2",
     "--formula", "bef q=3 t=1 r=2 : f1 < x1"],
    ["search-A", "--builtin", "min-collapse", "--n", "5", "--k", "1", "--p", "3",
     "--strategy", "random-restart", "--max-candidates", "40", "--seed", "11"],
    ["search-A", "--builtin", "min-collapse", "--n", "5", "--k", "1", "--p", "3",
     "--strategy", "greedy-ramsey"],
    ["search-regular", "--k", "1", "--p", "3", "--n-max", "5"],
    ["search-regular", "--k", "1", "--p", "3", "--n-max", "5", "--strategy", "random-restart",
     "--max-candidates", "30", "--seed", "2"],
    ["search-regular", "--formula", "bef q=2 t=1 r=1 : f1 < x1", "--k", "1", "--p", "3", "--n-max", "5"],
    ["ramsey", "--example", "c5", "--p", "3"],
    ["ramsey", "--example", "random", "--n", "7", "--k", "2", "--p", "3", "--seed", "4"],
]

OTHERS = [
    ["ot", "4"],
    ["order-type", "5", "2", "5"],
    ["regressive-values", "--example", "intro"],
    ["check-assignment", "--builtin", "identity", "--prop", "sharp"],
    ["check-assignment", "--builtin", "min-collapse", "--n", "3", "--prop", "star", "--o1", "lex"],
    ["audit-3-10", "--samples", "60", "--seed", "9"],
    ["lex-lift", "--builtin", "min-collapse", "--n", "3", "--samples", "30"],
    ["threshold-H", "--statement", "0.4", "--k", "1", "--p", "2", "--n-max", "4"],
    ["uniformize", "--n", "8", "--k", "1", "--p", "2", "--m", "3", "--seed", "1"],
    ["transfer", "--builtin", "min-collapse", "--n", "3", "--m", "5", "--p", "3"],
    ["complete", "--builtin", "dfnl-derived", "--n", "3", "--k", "1"],
    ["rcn", "--n", "4", "--k", "1"],
    ["rcn", "--n", "3", "--k", "2", "--restricted"],
    ["df", "--formula", "bef q=2 t=1 r=1 : f1 < x1", "--n", "4"],
    ["bef-eval", "--formula", "bef q=2 t=1 r=1 : f1 < x1", "--map", "[[0, 0], [1, 0]]", "--args", "1,2"],
    ["check-regular", "--n", "5", "--E", "1,2,3"],
    ["soi-check", "--n", "5", "--E", "1,2,3", "--soi", "bef q=3 t=1 r=1 : f1 < x1"],
]

BATTERY = SEARCHES + OTHERS


def run(argv, env_seed=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    code = cli.dispatch(list(argv) + ["--format", "json"], out, err)
    text = out.getvalue()
    return code, (json.loads(text) if text.strip() else None), err.getvalue()


def _args(argv):
    return cli.build_parser().parse_args(argv)


def recheck(argv, rep) -> bool:
    """Independent check of a verified witness; True when it holds up."""
    cmd = argv[0]
    args = _args(argv)
    if cmd == "ramsey":
        S = rep["subset"]
        if S is None:
            return True
        col = cli.c5_coloring() if args.example == "c5" else None
        if col is None:
            rng = random.Random(rep["seed"])
            col = {s: rng.randrange(args.colors) for s in combinations(range(args.n), args.k)}
        return len({col[s] for s in combinations(S, args.k)}) == 1 and len(S) == args.p
    if not rep.get("verified"):
        return True
    w = rep["witness"]
    E = w["E"]
    if cmd == "search-04":
        F = cli._example_F(args.example, args.n, args.k, args.r, random.Random(rep["seed"]))
        look = lambda x: F[x]
        k = args.k
    elif cmd == "search-A":
        U = cli._assignment(args)
        g = U(frozenset(tuple(x) for x in w["A"]))
        look = g.__getitem__
        k = U.arity
    else:
        k = args.k
        A = cube(w["A_field"], k)
        F = ind.df(parse_bef(args.formula), A) if args.formula else ind.rcn(A, ind.MinFieldDfnl())
        look = F.__getitem__
    count = oracle.recount(look, E, k)
    return count == rep["count"] and count <= rep["target"] and len(E) == args.p
