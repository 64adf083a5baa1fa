from __future__ import annotations

import copy
import itertools
import json
from fractions import Fraction

import pytest

from supercasimir.algebra import (
    build_gl,
    builtin,
    check_dual_pairing_identity,
    chevalley_automorphism,
    compute_h_rho,
    load_algebra,
    rho_shift_residuals,
    root_decomposition,
    validate_algebra,
)
from supercasimir.errors import AlgebraValidationError, SchemaError

BUILTINS = ["sl2", "gl11", "osp12", "gl:2,1", "gl:2,2", "gl:3,1", "gl:1,1"]


@pytest.mark.parametrize("spec", BUILTINS)
def test_builtins_validate(spec):
    rep = validate_algebra(builtin(spec))
    assert rep.passed, rep.violations[:3]


@pytest.mark.parametrize("spec", BUILTINS)
def test_json_round_trip_keeps_fingerprint(spec):
    A = builtin(spec)
    B = load_algebra(json.loads(A.to_json()))
    assert B == A
    assert B.fingerprint() == A.fingerprint()


def test_corrupted_jacobi_names_witness():
    doc = builtin("sl2").to_dict()
    # [h, e] = 2e becomes 3e: breaks Jacobi but keeps antisymmetry
    for entry in doc["brackets"]:
        if entry[:2] == [1, 2]:
            entry[2] = [[2, "3"]]
    with pytest.raises(AlgebraValidationError) as info:
        load_algebra(doc)
    axioms = {v.axiom for v in info.value.report.violations}
    assert axioms & {"jacobi", "form_invariant"}


def test_corrupted_form_symmetry():
    doc = builtin("gl11").to_dict()
    doc["form"] = [e for e in doc["form"] if e[:2] != [3, 2]] + [[3, 2, "5"]]
    with pytest.raises(AlgebraValidationError) as info:
        load_algebra(doc)
    assert any(v.axiom.startswith("form") for v in info.value.report.violations)


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("basis"),
    lambda d: d["form"].append([0, 0, "1.5"]),
    lambda d: d["brackets"].append([0, 99]),
])
def test_schema_errors(mutate):
    doc = copy.deepcopy(builtin("sl2").to_dict())
    mutate(doc)
    with pytest.raises(SchemaError):
        load_algebra(doc)


def test_supertrace_form_on_matrix_units():
    A = build_gl(2, 1)
    p = {1: 0, 2: 0, 3: 1}
    for i, j, k, l in itertools.product(range(1, 4), repeat=4):
        x = {A.index(f"E[{i},{j}]"): Fraction(1)}
        y = {A.index(f"E[{k},{l}]"): Fraction(1)}
        expect = (-1) ** p[i] if (j == k and i == l) else 0
        assert A.form(x, y) == expect


def test_gl21_positive_roots():
    A = builtin("gl:2,1")
    R = root_decomposition(A)
    names = sorted(R.root_name(A, a) for a in R.positive_roots)
    assert names == ["alpha[1,2]", "alpha[1,3]", "alpha[2,3]"]
    simple = sorted(R.root_name(A, a) for a in R.simple_roots)
    assert simple == ["alpha[1,2]", "alpha[2,3]"]
    odd = sorted(R.root_name(A, a) for a in R.positive_roots if R.parities[a])
    assert odd == ["alpha[1,3]", "alpha[2,3]"]


@pytest.mark.parametrize("spec", BUILTINS)
def test_rho_shift(spec):
    A = builtin(spec)
    R = root_decomposition(A)
    assert all(v == 0 for v in rho_shift_residuals(A, R).values())


def test_h_rho_rank_one():
    # sl2 and osp(1,2): 2 h_rho = h; gl(1,1): h_rho = -h/2
    for spec, want in [("sl2", {"h": Fraction(1)}), ("osp12", {"h": Fraction(1)}),
                       ("gl11", {"h1": Fraction(-1), "h2": Fraction(-1)})]:
        A = builtin(spec)
        hr = compute_h_rho(A, root_decomposition(A))
        got = {A.labels[k]: 2 * c for k, c in hr.items()}
        assert got == want, spec


def _dual_pairing_cases(A):
    R = root_decomposition(A)
    for alpha, beta in itertools.product(R.positive_roots, repeat=2):
        diff = tuple(y - x for x, y in zip(alpha, beta))
        if all(d == 0 for d in diff):
            zs = list(A.cartan)
        else:
            zs = R.root_spaces.get(diff, [])
        for z in zs:
            yield R, alpha, beta, {z: Fraction(1)}


@pytest.mark.parametrize("spec", ["sl2", "gl11", "osp12", "gl:2,1"])
def test_dual_pairing_identity(spec):
    A = builtin(spec)
    n = 0
    for R, alpha, beta, z in _dual_pairing_cases(A):
        rep = check_dual_pairing_identity(A, R, alpha, beta, z)
        assert rep.passed, rep.to_json()
        n += 1
    assert n > 0


@pytest.mark.parametrize("spec", ["sl2", "osp12", "gl:2,1", "gl:2,2"])
def test_chevalley_automorphism(spec):
    A = builtin(spec)
    w = chevalley_automorphism(A)
    for h in A.cartan:
        assert w.apply({h: Fraction(1)}) == {h: Fraction(-1)}
    assert w.order() in (2, 4)
