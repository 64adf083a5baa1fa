from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from supercasimir.algebra import builtin
from supercasimir.errors import ParseError
from supercasimir.exact import T, lagrange_basis
from supercasimir.invariants import build_casimir, build_gelfand, build_generalized_casimir
from supercasimir.parser import Gen, Inv, Num, Pow, Prod, Sum, Sym, eval_expr, lagrange_bindings, parse_expr, to_text
from supercasimir.uea import Enveloping

SL2 = builtin("sl2")
GL21 = builtin("gl:2,1")

CORPUS = [
    "Omega", "OmegaC", "Omega(t; t^-1)", "T[2](1; t)", "T[3]", "S[2]", "D[1]",
    "f(t)*e(t^-1) + h(1)", "2 e f - 1/2 h^2", "-(e + f)^3", "E[1,3](t^(-2)) E[3,1]",
    "e'*f'(3*t - 1/2*t^-1)", "T[2](p1; p2) - T[2](p2; p1)", "(1/2)^2*h",
]


def test_direct_mappings():
    assert parse_expr("Omega(t; t^-1)") == Inv("Omega", None, (Sym("t"), Pow(Sym("t"), -1)))
    assert parse_expr("T[2](1; t)") == Inv("T", 2, (Num(1), Sym("t")))
    assert parse_expr("E[1,3]") == Gen("E[1,3]")


@pytest.mark.parametrize("text", CORPUS)
def test_round_trip(text):
    ast = parse_expr(text)
    assert parse_expr(to_text(ast)) == ast


def test_eval_examples():
    assert str(eval_expr("Omega", SL2)) == "h + 2*f*e + 1/2*h^2"
    env = Enveloping.of(SL2)
    u = eval_expr("f(t)*e(t^-1) + h(1)", SL2)
    assert u == env.gen("f", T) * env.gen("e", T ** -1) + env.gen("h")
    assert u == env.gen("e", T ** -1) * env.gen("f", T)
    assert eval_expr("OmegaC", SL2) == eval_expr("Omega", SL2)
    assert eval_expr("Omega(t; t^-1)", SL2) == build_generalized_casimir(SL2, T, T ** -1)
    binds = lagrange_bindings(lagrange_basis([1, 2]))
    assert eval_expr("T[2](p1; p2)", GL21, binds) == build_gelfand(GL21, 2, [binds["p1"], binds["p2"]])


def test_d2_expansion_count():
    from supercasimir.invariants import _cyclic_words, _anti_sign

    assert len(_cyclic_words(GL21, 2, _anti_sign, None)) == 9
    assert eval_expr("D[2]", GL21).parity == 0


@pytest.mark.parametrize("text, where", [
    ("e +* f", (1, 4)),
    ("(e + f", (1, 1)),
    ("e + f)", (1, 6)),
    ("e(x)", (1, 3)),
    ("T[2](1, t)", (1, 7)),
    ("e\n + ?", (2, 4)),
])
def test_syntax_errors_carry_position(text, where):
    with pytest.raises(ParseError) as info:
        eval_expr(text, SL2)
    assert (info.value.line, info.value.column) == where


def test_semantic_errors():
    with pytest.raises(ParseError, match="unknown generator"):
        eval_expr("e + q", SL2)
    with pytest.raises(ParseError, match="takes 2"):
        eval_expr("T[2](t)", GL21)
    with pytest.raises(ParseError, match="unbound"):
        eval_expr("T[1](p3)", GL21, lagrange_bindings(lagrange_basis([1, 2])))


atoms = st.sampled_from(["e", "f", "h", "e(t)", "f(t^-1)", "2", "1/3"])


@st.composite
def expressions(draw, depth=2):
    if depth == 0:
        return draw(atoms)
    a = draw(expressions(depth=depth - 1))
    b = draw(expressions(depth=depth - 1))
    if draw(st.booleans()):
        # a parenthesis right after a label is its Laurent argument, so groups need an operator
        return f"({a}){draw(st.sampled_from([' + ', ' - ', '*']))}({b})"
    op = draw(st.sampled_from([" + ", " - ", "*", " "]))
    if op == " " and b.startswith("("):
        op = "*"
    return f"{a}{op}{b}"


@settings(max_examples=40, deadline=None)
@given(expressions(), expressions())
def test_compositional(p, q):
    assert eval_expr(f"({p})*({q})", SL2) == eval_expr(p, SL2) * eval_expr(q, SL2)
    ast = parse_expr(p)
    assert parse_expr(to_text(ast)) == ast
