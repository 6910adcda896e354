"""Bounded existential formulas: concrete syntax, printer and evaluator.

Grammar::

    formula := "bef" "q=" NAT "t=" NAT "r=" NAT ":" dnf
    dnf     := conj { "|" conj }        conj := lit { "&" lit }
    lit     := [ "!" ] atom             atom := term ("<" | "=" | ">") term
    term    := "x" NAT | "y" NAT | "f" NAT

Parentheses are accepted around a conjunction and around a single atom.  The
printer emits one canonical form: conjunctions of more than one literal are
parenthesised when there is more than one disjunct, and negated atoms are
written ``!(a < b)``.  Canonical text round-trips byte for byte.

A formula ``B`` in BEF(q, t, r) is read as::

    B(x) = exists y in dom(f)^t with |y| < |x| such that D(x, y, f(y))

where ``y`` is r*t naturals split into t consecutive r-blocks and ``f_j`` is
``f`` applied to block j.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Mapping, Sequence

from .errors import BefSyntaxError, NestedApplicationError, PreconditionError


@dataclass(frozen=True)
class Term:
    kind: str  # "x", "y" or "f"
    index: int

    def __str__(self):
        return f"{self.kind}{self.index}"


@dataclass(frozen=True)
class Atom:
    left: Term
    op: str
    right: Term

    def __str__(self):
        return f"{self.left} {self.op} {self.right}"


@dataclass(frozen=True)
class Literal:
    atom: Atom
    negated: bool = False

    def __str__(self):
        return f"!({self.atom})" if self.negated else str(self.atom)


@dataclass(frozen=True)
class BefFormula:
    q: int
    t: int
    r: int
    dnf: tuple  # tuple of conjunctions, each a tuple of Literals

    def __str__(self):
        return to_text(self)

    def terms(self):
        for conj in self.dnf:
            for lit in conj:
                yield lit.atom.left
                yield lit.atom.right

    def negates_f(self) -> bool:
        return any(lit.negated and "f" in (lit.atom.left.kind, lit.atom.right.kind)
                   for conj in self.dnf for lit in conj)


def to_text(B: BefFormula) -> str:
    multi = len(B.dnf) > 1
    parts = []
    for conj in B.dnf:
        body = " & ".join(str(lit) for lit in conj)
        parts.append(f"({body})" if multi and len(conj) > 1 else body)
    return f"bef q={B.q} t={B.t} r={B.r} : " + " | ".join(parts)


# -- lexer -------------------------------------------------------------------

_SINGLE = {"(", ")", "|", "&", "!", "<", "=", ">", ":"}


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list:
    toks = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch in _SINGLE:
            toks.append(_Tok(ch, ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isalpha():
            j = i
            while j < n and text[j].isalpha():
                j += 1
            k = j
            while k < n and text[k].isdigit():
                k += 1
            toks.append(_Tok("word", text[i:k], line, col))
            col += k - i
            i = k
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(_Tok("nat", text[i:j], line, col))
            col += j - i
            i = j
            continue
        raise BefSyntaxError(f"unexpected character {ch!r}", line, col)
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.pos = 0

    @property
    def cur(self):
        return self.toks[self.pos]

    def advance(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind, what=None):
        tok = self.cur
        if tok.kind != kind:
            raise BefSyntaxError(f"expected {what or kind!r}, found {tok.text or 'end of input'!r}",
                                 tok.line, tok.col)
        return self.advance()

    def header_param(self, name):
        tok = self.expect("word", f"{name}=")
        if tok.text != name:
            raise BefSyntaxError(f"expected {name}=, found {tok.text!r}", tok.line, tok.col)
        self.expect("=", "=")
        return int(self.expect("nat", "a natural number").text), tok

    def formula(self):
        tok = self.expect("word", "bef")
        if tok.text != "bef":
            raise BefSyntaxError(f"formula must start with 'bef', found {tok.text!r}", tok.line, tok.col)
        q, qtok = self.header_param("q")
        t, ttok = self.header_param("t")
        r, rtok = self.header_param("r")
        for val, name, at in ((q, "q", qtok), (t, "t", ttok), (r, "r", rtok)):
            if val < 1:
                raise BefSyntaxError(f"{name} must be at least 1", at.line, at.col)
        self.expect(":", ":")
        self.bounds = {"x": q, "y": r * t, "f": t}
        dnf = self.dnf()
        end = self.cur
        if end.kind != "eof":
            raise BefSyntaxError(f"unexpected {end.text!r}", end.line, end.col)
        return BefFormula(q, t, r, dnf)

    def dnf(self):
        conjs = [self.conj()]
        while self.cur.kind == "|":
            self.advance()
            conjs.append(self.conj())
        return tuple(conjs)

    def conj(self):
        lits = list(self.group())
        while self.cur.kind == "&":
            self.advance()
            lits.extend(self.group())
        return tuple(lits)

    def group(self):
        # "(" may open either a parenthesised conjunction or a parenthesised atom
        if self.cur.kind == "(":
            self.advance()
            lits = [self.literal()]
            while self.cur.kind == "&":
                self.advance()
                lits.append(self.literal())
            self.expect(")", ")")
            return lits
        return [self.literal()]

    def literal(self):
        if self.cur.kind == "!":
            self.advance()
            if self.cur.kind == "(":
                self.advance()
                atom = self.atom()
                self.expect(")", ")")
            else:
                atom = self.atom()
            return Literal(atom, True)
        return Literal(self.atom(), False)

    def atom(self):
        left = self.term()
        tok = self.cur
        if tok.kind not in ("<", "=", ">"):
            raise BefSyntaxError(f"expected a comparison, found {tok.text or 'end of input'!r}",
                                 tok.line, tok.col)
        self.advance()
        right = self.term()
        return Atom(left, tok.kind, right)

    def term(self):
        tok = self.expect("word", "a term")
        kind, digits = tok.text[:1], tok.text[1:]
        if kind not in ("x", "y", "f") or not digits.isdigit() or len(tok.text) != 1 + len(digits):
            raise BefSyntaxError(f"bad term {tok.text!r}; expected x<n>, y<n> or f<n>", tok.line, tok.col)
        index = int(digits)
        if not 1 <= index <= self.bounds[kind]:
            raise BefSyntaxError(f"{tok.text} out of range: {kind}-indices run 1..{self.bounds[kind]}",
                                 tok.line, tok.col)
        if kind == "f" and self.cur.kind == "(":
            raise NestedApplicationError("the function symbol takes no explicit arguments; "
                                         "nested applications are not allowed", self.cur.line, self.cur.col)
        return Term(kind, index)


def parse_bef(text: str) -> BefFormula:
    return _Parser(text).formula()


# -- evaluation --------------------------------------------------------------

def _term_value(term: Term, args, ys, fs):
    if term.kind == "x":
        return args[term.index - 1]
    if term.kind == "y":
        return ys[term.index - 1]
    return fs[term.index - 1]


def matrix_holds(B: BefFormula, args, ys, fs) -> bool:
    for conj in B.dnf:
        ok = True
        for lit in conj:
            a = _term_value(lit.atom.left, args, ys, fs)
            b = _term_value(lit.atom.right, args, ys, fs)
            op = lit.atom.op
            val = a < b if op == "<" else a == b if op == "=" else a > b
            if val == lit.negated:
                ok = False
                break
        if ok:
            return True
    return False


def eval_bef(B: BefFormula, f: Mapping, args: Sequence[int]) -> bool:
    """Is B(args) true in the finite partial map f (r-tuples to naturals)?"""
    args = tuple(args)
    if len(args) != B.q:
        raise PreconditionError(f"formula has q={B.q} free variables, got {len(args)} arguments")
    bound = max(args)
    blocks = sorted(y for y in f if len(y) == B.r and max(y) < bound)
    if not blocks:
        return False
    for choice in product(blocks, repeat=B.t):
        ys = tuple(c for block in choice for c in block)
        fs = tuple(f[block] for block in choice)
        if matrix_holds(B, args, ys, fs):
            return True
    return False
