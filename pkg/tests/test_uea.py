from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_normal_form
from supercasimir.algebra import builtin
from supercasimir.errors import ParityError
from supercasimir.exact import T
from supercasimir.uea import Enveloping, naive_normal_form

ALGS = {name: builtin(name) for name in ["sl2", "gl11", "osp12", "gl:2,1"]}


def env(name):
    return Enveloping.of(ALGS[name])


def test_loop_bracket_examples():
    E = env("sl2")
    A = E.algebra
    e, f, h = A.index("e"), A.index("f"), A.index("h")
    assert E.loop_bracket((e, 1), (f, -1)) == (((h, 0), Fraction(1)),)
    G = env("gl11")
    B = G.algebra
    got = dict(G.loop_bracket((B.index("e"), 1), (B.index("f"), 1)))
    assert got == {(B.index("h1"), 2): 1, (B.index("h2"), 2): 1}
    assert G.loop_bracket((B.index("h1"), 3), (B.index("h2"), -1)) == ()


def test_normal_form_examples():
    E = env("sl2")
    assert str(E.gen("e") * E.gen("f")) == "h + f*e"
    assert str(E.gen("e", T ** -1) * E.gen("f", T)) == "h + f(t)*e(t^-1)"
    O = env("osp12")
    assert O.gen("e") * O.gen("e") == O.gen("e'") * 2
    G = env("gl11")
    assert not (G.gen("e") * G.gen("e"))


def test_unit_and_associativity_instance():
    E = env("sl2")
    e, f, h = E.gen("e"), E.gen("f"), E.gen("h")
    assert e * E.one() == e
    assert (f * e) * h == f * (e * h)


def test_ad_examples():
    E = env("sl2")
    e, f, h = E.gen("e"), E.gen("f"), E.gen("h")
    assert E.ad(h, e) == e * 2
    assert E.ad(e, f) == h
    assert not E.ad(e, E.one())
    assert not E.ad(h, f * e)
    assert E.ad_prime(h, f * e * e) == E.ad(h, f * e * e)


def test_mixed_parity_rejected():
    O = env("osp12")
    with pytest.raises(ParityError):
        O.supercommutator(O.gen("e") + O.gen("h"), O.gen("f"))


def words(name, max_len=4, exps=(-1, 0, 1)):
    A = ALGS[name]
    gen = st.tuples(st.integers(0, A.dim - 1), st.sampled_from(exps))
    return st.lists(gen, min_size=0, max_size=max_len).map(tuple)


@pytest.mark.parametrize("name", list(ALGS))
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_confluence_against_oracle(name, data):
    w = data.draw(words(name))
    E = env(name)
    fast = E.from_words({w: 1}).terms
    assert fast == brute_normal_form(E.algebra, {w: 1})
    assert fast == naive_normal_form(E, {w: 1}, strategy="rightmost")
    assert all(len(x) <= len(w) for x in fast)
    assert all(E.is_normal(x) for x in fast)


def homogeneous(name, max_len=2):
    E = env(name)
    return words(name, max_len).map(lambda w: E.from_words({w: 1})).filter(lambda u: u.parity is not None)


@pytest.mark.parametrize("name", ["osp12", "gl:2,1"])
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_super_jacobi_in_enveloping_algebra(name, data):
    E = env(name)
    u, v, w = (data.draw(homogeneous(name)) for _ in range(3))
    lhs = E.supercommutator(E.supercommutator(u, v), w)
    sign = -1 if u.parity and v.parity else 1
    rhs = E.supercommutator(u, E.supercommutator(v, w)) - E.supercommutator(v, E.supercommutator(u, w)) * sign
    assert lhs == rhs


def test_printing_and_json():
    E = env("sl2")
    u = E.gen("h") + E.gen("f") * E.gen("e") * 2 + E.gen("h") * E.gen("h") * Fraction(1, 2)
    assert str(u) == "h + 2*f*e + 1/2*h^2"
    js = u.to_json()
    assert js["text"] == str(u)
    assert js["terms"][0] == {"coeff": "1", "word": [["h", 0]]}


def test_pickle_round_trip():
    import pickle

    E = env("gl:2,1")
    u = E.gen("E[1,3]") * E.gen("E[3,1]", T)
    v = pickle.loads(pickle.dumps(u))
    assert v.terms == u.terms
