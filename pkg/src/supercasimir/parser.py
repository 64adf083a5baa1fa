"""Operator mini-language.

    expr      = term { ("+" | "-") term } ;
    term      = [ "+" | "-" ] product ;
    product   = power { [ "*" ] power } ;
    power     = atom [ "^" integer ] ;
    atom      = number | invariant | generator | "(" expr ")" ;
    generator = label [ "(" laurent ")" ] ;
    label     = ident [ "[" integer { "," integer } "]" ] { "'" } ;
    invariant = "Omega" [ "(" laurent ";" laurent ")" ] | "OmegaC"
              | "T" "[" integer "]" [ "(" laurent { ";" laurent } ")" ]
              | "S" "[" integer "]" | "D" "[" integer "]" ;
    laurent   = lterm { ("+" | "-") lterm } ;       (same shape as expr)
    latom     = number | "t" | "p" integer | "(" laurent ")" ;
    lpower    = latom [ "^" [ "-" ] integer ] ;
    number    = integer [ "/" integer ] ;

A parenthesis right after a generator label is always its Laurent argument.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

from .algebra import SuperAlgebra
from .errors import ParseError, PreconditionError
from .exact import ONE, LaurentPoly, fraction_str
from .invariants import InvariantSpec
from .uea import Enveloping, UEAElement

INVARIANT_HEADS = {"T", "S", "D"}


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Sym:
    """``t`` or a bound Lagrange name ``p<i>`` inside a Laurent argument."""

    name: str
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Gen:
    label: str
    arg: "Node | None" = None
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Inv:
    kind: str  # Omega | OmegaC | T | S | D
    k: int | None = None
    args: tuple = ()
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Sum:
    terms: tuple  # of (sign, node)


@dataclass(frozen=True)
class Prod:
    factors: tuple


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exp: int


Node = Union[Num, Sym, Gen, Inv, Sum, Prod, Pow]

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^/()\[\],;']))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out, pos = [], 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    # token helpers
    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, msg: str, pos: int | None = None):
        raise ParseError(msg, self.text, self.tok[2] if pos is None else pos)

    def at(self, value: str) -> bool:
        return self.tok[0] == "op" and self.tok[1] == value

    def take(self, value: str) -> None:
        if not self.at(value):
            found = self.tok[1] or "end of input"
            self.error(f"expected {value!r}, found {found!r}")
        self.i += 1

    def integer(self) -> int:
        kind, val, _ = self.tok
        if kind != "num":
            self.error("expected an integer")
        self.i += 1
        return int(val)

    def number(self) -> Num:
        n = self.integer()
        if self.at("/"):
            self.i += 1
            pos = self.tok[2]
            d = self.integer()
            if d == 0:
                self.error("zero denominator", pos)
            return Num(Fraction(n, d))
        return Num(Fraction(n))

    def starts_atom(self) -> bool:
        kind, val, _ = self.tok
        return kind in ("num", "ident") or (kind == "op" and val == "(")

    # grammar, parameterised by the atom rule
    def sum(self, laurent: bool) -> Node:
        terms = []
        sign = 1
        if self.at("+") or self.at("-"):
            sign = -1 if self.tok[1] == "-" else 1
            self.i += 1
        terms.append((sign, self.product(laurent)))
        while self.at("+") or self.at("-"):
            sign = -1 if self.tok[1] == "-" else 1
            self.i += 1
            terms.append((sign, self.product(laurent)))
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        return Sum(tuple(terms))

    def product(self, laurent: bool) -> Node:
        factors = [self.power(laurent)]
        while True:
            if self.at("*"):
                self.i += 1
                factors.append(self.power(laurent))
            elif self.starts_atom():
                factors.append(self.power(laurent))
            else:
                break
        return factors[0] if len(factors) == 1 else Prod(tuple(factors))

    def power(self, laurent: bool) -> Node:
        base = self.latom() if laurent else self.atom()
        if self.at("^"):
            self.i += 1
            neg = False
            if self.at("-"):
                if not laurent:
                    self.error("negative powers are only allowed inside Laurent arguments")
                neg = True
                self.i += 1
            elif self.at("("):
                # t^(-1) style
                self.i += 1
                if self.at("-"):
                    if not laurent:
                        self.error("negative powers are only allowed inside Laurent arguments")
                    neg = True
                    self.i += 1
                n = self.integer()
                self.take(")")
                return Pow(base, -n if neg else n)
            n = self.integer()
            return Pow(base, -n if neg else n)
        return base

    def paren(self, laurent: bool) -> Node:
        open_pos = self.tok[2]
        self.take("(")
        inner = self.sum(laurent)
        if not self.at(")"):
            self.error("unbalanced parenthesis: '(' is never closed", open_pos)
        self.i += 1
        return inner

    def latom(self) -> Node:
        kind, val, pos = self.tok
        if kind == "num":
            return self.number()
        if kind == "ident":
            if val == "t" or re.fullmatch(r"p[1-9]\d*", val):
                self.i += 1
                return Sym(val, pos)
            self.error(f"malformed Laurent argument: unknown name {val!r} (use t or p1, p2, ...)")
        if self.at("("):
            return self.paren(True)
        self.error(f"malformed Laurent argument at {val or 'end of input'!r}")

    def laurent_args(self) -> tuple:
        self.take("(")
        args = [self.sum(True)]
        while self.at(";"):
            self.i += 1
            args.append(self.sum(True))
        if self.at(","):
            self.error("Laurent arguments are separated by ';'")
        self.take(")")
        return tuple(args)

    def atom(self) -> Node:
        kind, val, pos = self.tok
        if kind == "num":
            return self.number()
        if self.at("("):
            return self.paren(False)
        if kind != "ident":
            self.error(f"unexpected {val or 'end of input'!r}")
        self.i += 1
        if val in ("Omega", "OmegaC"):
            args = self.laurent_args() if self.at("(") and val == "Omega" else ()
            if val == "Omega" and args:
                if len(args) != 2:
                    self.error(f"Omega takes 2 Laurent arguments, got {len(args)}", pos)
                return Inv("Omega", None, args, pos)
            return Inv(val, None, (), pos)
        indices: list[int] = []
        if self.at("["):
            self.i += 1
            indices.append(self.integer())
            while self.at(","):
                self.i += 1
                indices.append(self.integer())
            self.take("]")
        if val in INVARIANT_HEADS and len(indices) == 1 and not self.at("'"):
            k = indices[0]
            if k < 1:
                self.error(f"{val}[k] needs k >= 1", pos)
            args = ()
            if self.at("("):
                if val != "T":
                    self.error(f"{val}[{k}] takes no Laurent arguments")
                args = self.laurent_args()
            return Inv(val, k, args, pos)
        label = val + (f"[{','.join(map(str, indices))}]" if indices else "")
        while self.at("'"):
            self.i += 1
            label += "'"
        arg = None
        if self.at("("):
            self.i += 1
            arg = self.sum(True)
            self.take(")")
        return Gen(label, arg, pos)


def parse_expr(text: str) -> Node:
    p = _Parser(text)
    if p.tok[0] == "end":
        p.error("empty expression")
    node = p.sum(False)
    if p.tok[0] != "end":
        if p.at(")"):
            p.error("unbalanced parenthesis: unexpected ')'")
        p.error(f"unexpected {p.tok[1]!r}")
    return node


def parse_laurent(text: str) -> Node:
    p = _Parser(text)
    node = p.sum(True)
    if p.tok[0] != "end":
        p.error(f"unexpected {p.tok[1]!r}")
    return node


# -- printing ---------------------------------------------------------------------

def to_text(node: Node) -> str:
    """Canonical text; ``parse_expr(to_text(n)) == n``."""
    if isinstance(node, Num):
        return fraction_str(node.value)
    if isinstance(node, Sym):
        return node.name
    if isinstance(node, Gen):
        return node.label + (f"({to_text(node.arg)})" if node.arg is not None else "")
    if isinstance(node, Inv):
        head = node.kind if node.k is None else f"{node.kind}[{node.k}]"
        if node.args:
            head += "(" + "; ".join(to_text(a) for a in node.args) + ")"
        return head
    if isinstance(node, Sum):
        parts = []
        for n, (sign, t) in enumerate(node.terms):
            s = _wrap(t, (Sum,))
            if n == 0:
                parts.append("-" + s if sign < 0 else s)
            else:
                parts.append(("- " if sign < 0 else "+ ") + s)
        return " ".join(parts)
    if isinstance(node, Prod):
        return "*".join(_wrap(f, (Sum, Prod)) for f in node.factors)
    if isinstance(node, Pow):
        base = _wrap(node.base, (Sum, Prod, Pow))
        if isinstance(node.base, Num) and node.base.value.denominator != 1:
            base = f"({base})"
        return f"{base}^{node.exp}"
    raise TypeError(f"not an expression node: {node!r}")


def _wrap(node: Node, kinds) -> str:
    s = to_text(node)
    return f"({s})" if isinstance(node, kinds) else s


# -- evaluation ---------------------------------------------------------------------

def eval_laurent(node: Node, bindings: Mapping[str, LaurentPoly] | None = None, text: str = "") -> LaurentPoly:
    bindings = bindings or {}
    if isinstance(node, Num):
        return LaurentPoly.constant(node.value)
    if isinstance(node, Sym):
        if node.name == "t":
            return LaurentPoly.monomial(1)
        if node.name not in bindings:
            raise ParseError(f"unbound name {node.name!r} (pass evaluation points to define p1..pn)", text, node.pos)
        return bindings[node.name]
    if isinstance(node, Sum):
        out = LaurentPoly()
        for sign, t in node.terms:
            v = eval_laurent(t, bindings, text)
            out = out + v if sign > 0 else out - v
        return out
    if isinstance(node, Prod):
        out = ONE
        for f in node.factors:
            out = out * eval_laurent(f, bindings, text)
        return out
    if isinstance(node, Pow):
        base = eval_laurent(node.base, bindings, text)
        try:
            return base ** node.exp
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"cannot raise to {node.exp}: {exc}", text) from None
    raise ParseError(f"{type(node).__name__} is not allowed in a Laurent argument", text)


def eval_expr(
    expr: Node | str,
    A: SuperAlgebra,
    bindings: Mapping[str, LaurentPoly] | None = None,
    allow_small: bool = False,
) -> UEAElement:
    """Evaluate an expression (or its text) to a normal-form enveloping-algebra element."""
    text = ""
    if isinstance(expr, str):
        text, expr = expr, parse_expr(expr)
    env = Enveloping.of(A)

    def ev(node: Node) -> UEAElement:
        if isinstance(node, Num):
            return env.scalar(node.value)
        if isinstance(node, Gen):
            try:
                i = A.index(node.label)
            except KeyError:
                raise ParseError(f"unknown generator label {node.label!r} in {A.name}", text, node.pos) from None
            if node.arg is None:
                return env.gen(i)
            poly = eval_laurent(node.arg, bindings, text)
            return env.gen(i, poly)
        if isinstance(node, Inv):
            args = tuple(eval_laurent(a, bindings, text) for a in node.args)
            if node.kind == "T" and args and len(args) != node.k:
                raise ParseError(f"T[{node.k}] takes {node.k} Laurent arguments, got {len(args)}", text, node.pos)
            kind = "GeneralizedOmega" if node.kind == "Omega" and args else node.kind
            try:
                return InvariantSpec(kind, node.k, args).build(A, allow_small=allow_small)
            except PreconditionError as exc:
                raise PreconditionError(f"{exc} (at {to_text(node)})") from None
        if isinstance(node, Sum):
            out = env.zero()
            for sign, t in node.terms:
                v = ev(t)
                out = out + v if sign > 0 else out - v
            return out
        if isinstance(node, Prod):
            out = ev(node.factors[0])
            for f in node.factors[1:]:
                out = out * ev(f)
            return out
        if isinstance(node, Pow):
            return ev(node.base) ** node.exp
        if isinstance(node, Sym):
            raise ParseError(f"{node.name!r} may only appear inside a Laurent argument", text, node.pos)
        raise TypeError(f"not an expression node: {node!r}")

    return ev(expr)


def lagrange_bindings(polys) -> dict[str, LaurentPoly]:
    return {f"p{i + 1}": p for i, p in enumerate(polys)}
