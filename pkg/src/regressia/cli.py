"""Command-line front end.

Exit codes: 0 success, 1 property failure (counterexample emitted),
2 budget exceeded or search inconclusive, 3 bad input.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import random
import sys
import time
from itertools import combinations, product
from typing import Optional

from . import __version__
from . import assignments as asg
from . import completions as comp
from . import inductive as ind
from . import search
from .bef import eval_bef, parse_bef
from .core import (Caps, closure, cube, fld, is_closed, order_type, ot, ot_surjection_sum,
                   ramsey_homogeneous, regressive_values, to_jsonable)
from .errors import BefSyntaxError, BudgetError, MissingKeyError, PreconditionError, RegressiaError
from .orders import LEX, SUP, order_from_name
from .report import STRATEGIES, SearchBudget

EXIT_OK, EXIT_FAIL, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3
TIMING_FIELDS = ("elapsed_s",)


class InputError(RegressiaError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


# -- instance loading --------------------------------------------------------

def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}") from None


def _json_arg(text, what):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what}: invalid JSON ({exc.msg})") from None


def _key(v):
    return tuple(v) if isinstance(v, list) else (v,)


def _val(v):
    return tuple(v) if isinstance(v, list) else v


def _map_from_pairs(pairs):
    return {_key(x): _val(y) for x, y in pairs}


def _tuples(items):
    return frozenset(_key(x) for x in items)


def _assignment(args) -> asg.FunctionAssignment:
    if getattr(args, "instance", None):
        doc = _load_json(args.instance)
        if "assignment" in doc:
            doc = doc["assignment"]
        try:
            return asg.from_dict(doc)
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed assignment document: {exc}") from None
    ground = cube(range(args.n), args.k)
    params = {}
    if args.builtin == "dfnl-derived":
        params = {"dfnl": "bef", "formula": args.formula} if args.formula else {"dfnl": "min-field"}
    return asg.builtin(args.builtin, ground, **params)


def _dfnl(args):
    if getattr(args, "formula", None):
        return ind.dfnl_from_bef(args.formula)
    return ind.MinFieldDfnl()


def _tuple_set(args):
    if args.set:
        return _tuples(_json_arg(args.set, "--set"))
    return cube(range(args.n), args.k)


# -- reports -----------------------------------------------------------------

def _seed(args) -> int:
    env = os.environ.get("REGRESSIA_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"REGRESSIA_SEED must be an integer, got {env!r}") from None
    return args.seed


def _caps(args) -> Caps:
    over = {}
    for item in args.cap or ():
        name, _, value = item.partition("=")
        if name not in Caps.__dataclass_fields__ or not value.isdigit():
            raise InputError(f"bad --cap {item!r}; expected NAME=INT with NAME in {sorted(Caps.__dataclass_fields__)}")
        over[name] = int(value)
    return Caps(**over)


def _budget(args) -> SearchBudget:
    return SearchBudget(args.max_candidates, args.strategy, args.seed)


def _emit(report: dict, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(report, sort_keys=True) + "\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["field", "value"])
        for key in sorted(report):
            v = report[key]
            w.writerow([key, v if isinstance(v, (str, int, float)) and not isinstance(v, bool)
                        else json.dumps(v, sort_keys=True)])
    else:
        text = report.get("text")
        if text is None:
            text = json.dumps({k: v for k, v in report.items() if k not in ("caps", "version", "argv")},
                              sort_keys=True)
        out.write(text + "\n")


def _verdict_block(v):
    d = v.to_dict()
    block = {"verdict": "holds" if v.holds else "fails", "checked": d["checked"], "vacuous": d["vacuous"]}
    if not v.holds:
        block["counterexample"] = d["counterexample"]
    return block


def _from_search(rep) -> tuple:
    d = rep.to_dict()
    if rep.witness is None:
        code = EXIT_BUDGET
        text = f"no witness within budget ({rep.explored} candidates explored); inconclusive"
    elif rep.verified:
        code = EXIT_OK
        text = f"witness {json.dumps(d['witness'])} count={rep.count} target={rep.target} verified"
    else:
        code = EXIT_FAIL
        text = f"witness {json.dumps(d['witness'])} count={rep.count} exceeds target={rep.target} or failed recount"
    d["text"] = text
    return d, code


# -- subcommands -------------------------------------------------------------
# each returns (statement id, params, body, exit code)

def cmd_ot(args, ctx):
    value = ot(args.k, ctx["caps"])
    oracle = ot_surjection_sum(args.k)
    body = {"value": value, "surjection_sum": oracle, "text": str(value)}
    return "ot(k)", {"k": args.k}, body, EXIT_OK if value == oracle else EXIT_FAIL


def cmd_order_type(args, ctx):
    code = order_type(args.coords)
    return "order type", {"x": args.coords}, {"value": list(code), "text": str(tuple(code))}, EXIT_OK


def cmd_regressive_values(args, ctx):
    if args.example == "intro":
        pts = [2 ** i for i in range(11)]
        F = lambda x: (x[0] - x[1]) ** 2
        B = list(product(pts, repeat=2))
        params = {"example": "intro", "F": "(x-y)^2", "B": "{2^0..2^10}^2"}
    elif args.instance:
        doc = _load_json(args.instance)
        F = _map_from_pairs(doc["map"])
        B = sorted(_tuples(doc["B"]))
        params = {"instance": os.path.basename(args.instance)}
    else:
        raise InputError("give --example intro or --instance FILE")
    vals = regressive_values(F, B)
    shown = "{" + ", ".join(str(v) for v in sorted(vals, key=str)) + "}"
    return "regressive values", params, {"value": vals, "text": shown}, EXIT_OK


def _orders(args):
    return order_from_name(args.o1), order_from_name(args.o2)


def cmd_check_assignment(args, ctx):
    U = _assignment(args)
    o1, o2 = _orders(args)
    caps = ctx["caps"]
    if args.prop == "sharp":
        v = asg.check_sharp_decreasing(U, o1, o2, caps=caps)
    elif args.prop == "star":
        v = asg.check_star_decreasing(U, o1, o2, caps=caps)
    else:
        v = asg.check_end_preserving(U, o1, caps=caps)
    block = _verdict_block(v)
    block["text"] = f"{args.prop}: {block['verdict']}"
    if not v.holds:
        block["text"] += " " + json.dumps(block["counterexample"])
    params = {"assignment": U.name or U.kind, "prop": args.prop, "o1": args.o1, "o2": args.o2,
              "ground_size": len(U.ground)}
    statement = {"sharp": "#-decreasing", "star": "*-decreasing", "end": "end-preserving"}[args.prop]
    return statement, params, block, EXIT_OK if v.holds else EXIT_FAIL


def audit_3_10(samples: int, seed: int, max_ground: int = 5, caps: Caps = Caps()) -> dict:
    """Sharp and star verdicts on a seeded mix of small assignments; sharp must imply end-preserving."""
    rng = random.Random(seed)
    order_pairs = [(SUP, SUP), (SUP, LEX), (LEX, SUP), (LEX, LEX)]
    agree = sharp_true = implication_ok = 0
    disagreements = []
    for i in range(samples):
        k = rng.choice((1, 2))
        size = rng.randint(1, max_ground)
        space = sorted(product(range(3 if k == 2 else 6), repeat=k))
        ground = rng.sample(space, size)
        o1, o2 = order_pairs[i % 4]
        kind = rng.random()
        if kind < 0.4:
            U = asg.random_local_rule(ground, rng, o1)
        elif kind < 0.7:
            U = asg.random_table(ground, rng)
        else:
            U = asg.perturb(asg.random_local_rule(ground, rng, o1), rng)
        s = asg.check_sharp_decreasing(U, o1, o2, caps=caps).holds
        t = asg.check_star_decreasing(U, o1, o2, caps=caps).holds
        if s == t:
            agree += 1
        elif len(disagreements) < 5:
            disagreements.append({"sample": i, "table": asg.dumps(U), "o1": o1.kind, "o2": o2.kind,
                                  "sharp": s, "star": t})
        if s:
            sharp_true += 1
            if asg.check_end_preserving(U, o1, caps=caps).holds:
                implication_ok += 1
        else:
            implication_ok += 1
    return {"samples": samples, "agree": agree, "sharp_true": sharp_true,
            "sharp_implies_end": implication_ok, "disagreements": disagreements}


def cmd_audit_3_10(args, ctx):
    res = audit_3_10(args.samples, ctx["seed"], args.max_ground, ctx["caps"])
    ok = res["agree"] == res["samples"] == res["sharp_implies_end"]
    res["verdict"] = "holds" if ok else "fails"
    res["text"] = (f"{res['agree']}/{res['samples']} agree; sharp held on {res['sharp_true']}; "
                   f"sharp => end-preserving on {res['sharp_implies_end']}/{res['samples']}")
    params = {"samples": args.samples, "max_ground": args.max_ground}
    return "Theorem 3.10", params, res, EXIT_OK if ok else EXIT_FAIL


def lift_audit(U: asg.FunctionAssignment, samples: int, seed: int, caps: Caps = Caps()) -> dict:
    """Lex-#-decreasing check of the lifted assignment plus the regressive-value transfer."""
    rng = random.Random(seed)
    V = asg.lex_lift(U)
    lifted = sorted(V.ground)
    field_ = sorted(fld(U.ground))
    k = U.arity
    # the transfer property reads V(A) on all of E^(k+1), so that copy of V carries the full cube
    V_full = asg.lex_lift(U, extra=[z for z in cube(field_, k + 1)
                                    if not asg.is_lifted(z) or z[1:] in U.ground])
    if len(lifted) <= caps.max_ground:
        scope = None
    else:
        scope = list(asg.sampled_single_scope(lifted, samples, rng))
    sharp = asg.check_sharp_decreasing(V, LEX, LEX, scope=scope, caps=caps)
    transfer_ok = 0
    transfer_checked = 0
    failure = None
    for _ in range(samples):
        size = rng.randint(1, len(field_))
        E = tuple(sorted(rng.sample(field_, size)))
        Ek = set(product(E, repeat=k))
        if not Ek <= U.ground:
            continue
        A_prime = frozenset(x for x in U.ground if rng.random() < 0.5) | Ek
        A = frozenset(asg.lift(x) for x in A_prime) | cube(E, k + 1)
        transfer_checked += 1
        base = regressive_values(U(A_prime), Ek)
        top = regressive_values(V_full(A), product(E, repeat=k + 1))
        if all(asg.lift(y) in top for y in base):
            transfer_ok += 1
        elif failure is None:
            failure = {"A'": A_prime, "E": E}
    return {"lex_sharp": _verdict_block(sharp), "transfer_checked": transfer_checked,
            "transfer_ok": transfer_ok, "transfer_failure": to_jsonable(failure)}


def cmd_lex_lift(args, ctx):
    U = _assignment(args)
    res = lift_audit(U, args.samples, ctx["seed"], ctx["caps"])
    ok = res["lex_sharp"]["verdict"] == "holds" and res["transfer_ok"] == res["transfer_checked"]
    res["verdict"] = "holds" if ok else "fails"
    res["text"] = (f"lex #-decreasing: {res['lex_sharp']['verdict']}; transfer "
                   f"{res['transfer_ok']}/{res['transfer_checked']}")
    return "Lemma 3.13", {"assignment": U.name or U.kind, "samples": args.samples}, res, \
        EXIT_OK if ok else EXIT_FAIL


def c5_coloring():
    """2-colouring of pairs from [5] with no monochromatic triangle (pentagon vs pentagram)."""
    return {(i, j): int((j - i) in (1, 4)) for i, j in combinations(range(5), 2)}


def cmd_ramsey(args, ctx):
    if args.example == "c5":
        coloring, E, k = c5_coloring(), range(5), 2
    elif args.example == "random":
        rng = random.Random(ctx["seed"])
        E, k = range(args.n), args.k
        coloring = {s: rng.randrange(args.colors) for s in combinations(E, k)}
    elif args.instance:
        doc = _load_json(args.instance)
        coloring = _map_from_pairs(doc["coloring"])
        E = doc["E"]
        k = len(next(iter(coloring)))
    else:
        raise InputError("give --example c5|random or --instance FILE")
    res = ramsey_homogeneous(coloring, E, k, args.p, ctx["caps"])
    body = {"subset": res.subset, "exhaustive": res.exhaustive, "incomplete": res.incomplete,
            "explored": res.nodes}
    if res.subset is not None:
        body["text"] = f"homogeneous {res.subset}"
        code = EXIT_OK
    elif res.incomplete:
        body["text"] = "no homogeneous set found within the node budget; inconclusive"
        code = EXIT_BUDGET
    else:
        body["text"] = "none: no homogeneous subset exists"
        code = EXIT_OK
    params = {"k": k, "p": args.p, "E": sorted(E), "example": args.example}
    return "Finite Ramsey", params, body, code


def _example_F(name, n, k, r, rng):
    if name == "square":
        return {x: min((x[0] - x[-1]) ** 2, n - 1) for x in product(range(n), repeat=k)}
    if name == "constant":
        return {x: (n - 1,) * r if r > 1 else n - 1 for x in product(range(n), repeat=k)}
    if name == "identity":
        return {x: x for x in product(range(n), repeat=k)}
    if name == "random":
        return {x: tuple(rng.randrange(n) for _ in range(r)) if r > 1 else rng.randrange(n)
                for x in product(range(n), repeat=k)}
    raise InputError(f"unknown example {name!r}")


def cmd_search_04(args, ctx):
    if args.instance:
        doc = _load_json(args.instance)
        F = _map_from_pairs(doc["map"])
        n, k, r = doc["n"], doc["k"], doc.get("r", 1)
    else:
        n, k, r = args.n, args.k, args.r
        F = _example_F(args.example, n, k, r, random.Random(ctx["seed"]))
    rep = search.find_witness_04(F, n, k, r, args.p, ctx["budget"], ctx["caps"])
    body, code = _from_search(rep)
    body["params"]["example"] = args.example if not args.instance else None
    return rep.statement, body.pop("params"), body, code


def cmd_search_A(args, ctx):
    U = _assignment(args)
    rep = search.find_witness_A(U, args.p, ctx["budget"], caps=ctx["caps"])
    body, code = _from_search(rep)
    return rep.statement, body.pop("params"), body, code


def cmd_threshold_H(args, ctx):
    res = search.threshold_H(args.statement, args.k, args.r, args.p, args.n_max, ctx["caps"])
    d = res.to_dict()
    rows = ", ".join(f"n={row['n']}:{'holds' if row['holds'] else 'fails'}" for row in res.table)
    d["text"] = f"H = {res.H if res.H is not None else 'not reached by n_max'} [{rows}]"
    d["params"]["statement"] = args.statement
    return f"Threshold {args.statement}", d.pop("params"), d, EXIT_OK if res.H is not None else EXIT_BUDGET


def _random_table_assignment(n, k, seed):
    return asg.random_table(cube(range(n), k), random.Random(seed))


def cmd_uniformize(args, ctx):
    if args.instance or args.builtin:
        U = _assignment(args)
    else:
        U = _random_table_assignment(args.n, args.k, ctx["seed"])
    res = comp.uniformize(U, args.p, args.m, args.max_candidates, ctx["caps"])
    params = {"p": args.p, "m": args.m, "assignment": U.name or U.kind, "ground_size": len(U.ground)}
    if res.E is None:
        body = {"E": None, "explored": res.explored, "text": "no uniform E at this size; inconclusive"}
        return "Theorem 4.2", params, body, EXIT_BUDGET
    body = {"E": res.E, "explored": res.explored, "V_order_invariant": _verdict_block(res.uniform),
            "text": f"E = {res.E}; V order invariant on sizes <= {args.p}: {res.uniform.holds}"}
    return "Theorem 4.2", params, body, EXIT_OK if res.uniform.holds else EXIT_FAIL


def cmd_transfer(args, ctx):
    U = _assignment(args)
    params = {"assignment": U.name or U.kind, "m": args.m, "p": args.p}
    inv = comp.is_order_invariant(U, max_field_size=args.p, caps=ctx["caps"])
    if not inv.holds:
        body = _verdict_block(inv)
        body["text"] = "refused: U is not order invariant " + json.dumps(body["counterexample"])
        return "Lemma 4.6", params, body, EXIT_FAIL
    V = comp.transfer(U, args.m, args.p, ctx["caps"])
    entries = []
    for size in range(1, args.p + 1):
        for S in combinations(range(args.m), size):
            if len(entries) >= args.show:
                break
            A = cube(S, U.arity)
            if len(A) <= ctx["caps"].max_ground:
                g = V(A)
                entries.append({"subset": sorted(A), "graph": sorted(g.items())})
    body = {"entries": entries, "text": f"transferred to [{args.m}]^{U.arity}; {len(entries)} sample entries"}
    return "Lemma 4.6", params, body, EXIT_OK


def cmd_complete(args, ctx):
    U = _assignment(args)
    results = {}
    for policy in comp.POLICIES:
        results[policy] = comp.direct_completion_greedy(U, policy, caps=ctx["caps"])
    a, b = results["lex-least"], results["lex-greatest"]
    ok = a.matches_direct and b.matches_direct and a.f == b.f and a.special_ok and b.special_ok
    body = {"f": sorted(a.f.items()), "matches_direct": a.matches_direct and b.matches_direct,
            "policies_agree": a.f == b.f, "special_ok": a.special_ok and b.special_ok,
            "diagnosis": a.diagnosis or b.diagnosis}
    body["text"] = ("greedy completion equals U(X^k) under both policies" if ok
                    else f"precondition diagnosis: {body['diagnosis'] or 'policies disagree'}")
    return "Theorem 4.8", {"assignment": U.name or U.kind, "ground_size": len(U.ground)}, body, \
        EXIT_OK if ok else EXIT_FAIL


def _show_map(f):
    return ", ".join(f"{x}->{v}" for x, v in sorted(f.items()))


def cmd_rcn(args, ctx):
    H = _dfnl(args)
    A = _tuple_set(args)
    F = ind.mrcn(A, H) if args.restricted else ind.rcn(A, H)
    params = {"dfnl": H.params(), "A_size": len(A), "restricted": args.restricted}
    return "RCN" if not args.restricted else "MRCN", params, \
        {"value": sorted(F.items()), "text": _show_map(F)}, EXIT_OK


def cmd_df(args, ctx):
    B = parse_bef(args.formula)
    A = _tuple_set(args)
    if args.close:
        A = closure(A, ctx["caps"])
    if not is_closed(A):
        raise PreconditionError("Df needs a closed set; pass --close to take the closure")
    f = ind.df(B, A)
    bad = ind.df_fixpoint_violations(B, A, f)
    agrees = f == ind.rcn(A, ind.dfnl_from_bef(B))
    body = {"value": sorted(f.items()), "fixpoint_violations": bad, "equals_rcn": agrees,
            "text": _show_map(f)}
    return "Lemma 5.3", {"formula": str(B), "A_size": len(A)}, body, \
        EXIT_OK if agrees and not bad else EXIT_FAIL


def cmd_bef_eval(args, ctx):
    B = parse_bef(args.formula)
    f = _map_from_pairs(_json_arg(args.map, "--map")) if args.map else {}
    val = eval_bef(B, f, args.args)
    return "BEF evaluation", {"formula": str(B), "args": args.args}, \
        {"value": val, "canonical": str(B), "text": str(val).lower()}, EXIT_OK


def _system_map(args):
    if args.map:
        return _map_from_pairs(_json_arg(args.map, "--map"))
    A = _tuple_set(args)
    if args.formula:
        return ind.df(parse_bef(args.formula), A)
    return ind.rcn(A, ind.MinFieldDfnl())


def cmd_check_regular(args, ctx):
    f = _system_map(args)
    if args.tr:
        formulas = [parse_bef(t) for t in args.tr]
        v = ind.tr_regular_check(args.E, f, formulas, args.t, args.r)
        statement = "(t,r)-regular"
    else:
        v = ind.is_regressively_regular(f, args.E)
        statement = "regressively regular"
    block = _verdict_block(v)
    block["text"] = f"{statement}: {block['verdict']}"
    return statement, {"E": args.E, "formulas": args.tr or []}, block, EXIT_OK if v.holds else EXIT_FAIL


def cmd_soi_check(args, ctx):
    f = _system_map(args)
    formulas = [parse_bef(t) for t in args.soi or ()]
    v = ind.soi_check(args.E, f, formulas, args.t, args.r)
    block = _verdict_block(v)
    block["text"] = f"(t,r)-SOI: {block['verdict']}"
    return "(t,r)-SOI", {"E": args.E, "t": args.t, "r": args.r, "formulas": args.soi or []}, block, \
        EXIT_OK if v.holds else EXIT_FAIL


def cmd_search_regular(args, ctx):
    source = parse_bef(args.formula) if args.formula else ind.MinFieldDfnl()
    rep = ind.search_regular(source, args.k, args.p, ctx["budget"], args.n_max, ctx["caps"])
    body, code = _from_search(rep)
    return rep.statement, body.pop("params"), body, code


# -- parser ------------------------------------------------------------------

def _common(p):
    p.add_argument("--seed", type=int, default=0, help="RNG seed (REGRESSIA_SEED overrides)")
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.add_argument("--jobs", type=int, default=1, help="worker cap (runs are sequential at this scale)")
    p.add_argument("--max-candidates", type=int, default=100_000)
    p.add_argument("--strategy", choices=STRATEGIES, default="exhaustive")
    p.add_argument("--cap", action="append", metavar="NAME=INT", help="override a hard cap")


def _assignment_opts(p, default_n=3):
    p.add_argument("--builtin", choices=("identity", "min-collapse", "dfnl-derived"))
    p.add_argument("--instance", help="JSON assignment document")
    p.add_argument("--n", type=int, default=default_n, help="ground is [n]^k for builtins")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--formula", help="BEF text for dfnl-derived builtins")


def _set_opts(p):
    p.add_argument("--set", help="JSON list of tuples")
    p.add_argument("--n", type=int, default=4, help="otherwise A = [n]^k")
    p.add_argument("--k", type=int, default=1)


def _ints(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="regressia", description="Regressive values and decreasing function assignments.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        _common(p)
        p.set_defaults(func=fn)
        return p

    p = add("ot", cmd_ot, "number of order types in dimension k")
    p.add_argument("k", type=int)
    p = add("order-type", cmd_order_type, "rank pattern of a tuple")
    p.add_argument("coords", type=int, nargs="+")
    p = add("regressive-values", cmd_regressive_values, "regressive values of a map on a set")
    p.add_argument("--example", choices=("intro",))
    p.add_argument("--instance")
    p = add("check-assignment", cmd_check_assignment, "check #-, *-decreasing or end-preserving")
    _assignment_opts(p)
    p.add_argument("--prop", choices=("sharp", "star", "end"), default="sharp")
    p.add_argument("--o1", default="sup")
    p.add_argument("--o2", default="sup")
    p = add("audit-3-10", cmd_audit_3_10, "sharp vs star agreement on random assignments")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--max-ground", type=int, default=5)
    p = add("lex-lift", cmd_lex_lift, "lift an assignment one dimension up and audit it")
    _assignment_opts(p)
    p.add_argument("--samples", type=int, default=200)
    p = add("ramsey", cmd_ramsey, "homogeneous subset for a colouring")
    p.add_argument("--example", choices=("c5", "random"))
    p.add_argument("--instance")
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--colors", type=int, default=2)
    p = add("search-04", cmd_search_04, "E with at most (k^k)p regressive values")
    p.add_argument("--example", choices=("square", "constant", "identity", "random"), default="square")
    p.add_argument("--instance")
    p.add_argument("--n", type=int, default=12)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--p", type=int, default=5)
    p = add("search-A", cmd_search_A, "A, E with at most ot(k) regressive values of U(A)")
    _assignment_opts(p)
    p.add_argument("--p", type=int, default=3)
    p = add("threshold-H", cmd_threshold_H, "exact micro-scale threshold table")
    p.add_argument("--statement", choices=search.STATEMENTS, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--n-max", type=int, default=4)
    p = add("uniformize", cmd_uniformize, "find a uniform E and the induced assignment")
    _assignment_opts(p, default_n=8)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--m", type=int, default=3)
    p = add("transfer", cmd_transfer, "carry an order-invariant assignment to [m]^k")
    _assignment_opts(p)
    p.add_argument("--m", type=int, default=6)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--show", type=int, default=20)
    p = add("complete", cmd_complete, "greedy direct completion under two tiebreaks")
    _assignment_opts(p)
    p = add("rcn", cmd_rcn, "recursion on the sup norm")
    _set_opts(p)
    p.add_argument("--formula", help="BEF text; default functional is min-field")
    p.add_argument("--restricted", action="store_true", help="compute MRCN instead")
    p = add("df", cmd_df, "Df(B; A) with fixpoint and RCN cross-checks")
    _set_opts(p)
    p.add_argument("--formula", required=True)
    p.add_argument("--close", action="store_true", help="replace A by its closure")
    p = add("bef-eval", cmd_bef_eval, "evaluate a BEF formula in a finite map")
    p.add_argument("--formula", required=True)
    p.add_argument("--map", help="JSON list of [key, value] pairs")
    p.add_argument("--args", type=_ints, required=True, help="comma-separated naturals")
    for name, fn, help_ in (("check-regular", cmd_check_regular, "regressive or (t,r)-regularity over E"),
                            ("soi-check", cmd_soi_check, "(t,r)-SOI property of E")):
        p = add(name, fn, help_)
        _set_opts(p)
        p.add_argument("--map", help="JSON list of [key, value] pairs")
        p.add_argument("--formula", help="build the map as Df of this BEF text")
        p.add_argument("--E", type=_ints, required=True)
        p.add_argument("--t", type=int, default=1)
        p.add_argument("--r", type=int, default=1)
        if name == "check-regular":
            p.add_argument("--tr", action="append", help="BEF(2t,t,r) formula; switches to (t,r)-regularity")
        else:
            p.add_argument("--soi", action="append", help="BEF(3t,t,r) formula")
    p = add("search-regular", cmd_search_regular, "closed A and E with a regressively regular system")
    p.add_argument("--formula", help="BEF text (Df); default is RCN with min-field")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--n-max", type=int, default=6)
    return parser


def dispatch(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except InputError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    started = time.perf_counter()
    try:
        args.seed = _seed(args)
        caps = _caps(args)
        ctx = {"seed": args.seed, "caps": caps, "budget": _budget(args)}
        statement, params, body, code = args.func(args, ctx)
    except BudgetError as exc:
        err.write(f"budget: {exc}\n")
        return EXIT_BUDGET
    except (InputError, PreconditionError, BefSyntaxError, MissingKeyError, KeyError, TypeError,
            ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    except RegressiaError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_FAIL
    report = {"statement": statement, "params": to_jsonable(params), "seed": args.seed,
              "version": __version__, "caps": caps.as_dict(), "jobs": args.jobs,
              "command": args.command, "argv": list(argv),
              "elapsed_s": round(time.perf_counter() - started, 6)}
    for key, v in body.items():
        report[key] = to_jsonable(v)
    _emit(report, args.format, out)
    return code


def strip_timing(report: dict) -> dict:
    return {k: v for k, v in report.items() if k not in TIMING_FIELDS}


def main(argv: Optional[list] = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    return dispatch(argv)


def _entry():
    sys.exit(main())


if __name__ == "__main__":
    _entry()
