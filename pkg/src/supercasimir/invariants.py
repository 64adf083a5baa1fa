"""Casimir-type operators and the verifiers that check them.

Builders return normal-form :class:`~supercasimir.uea.UEAElement` values.
Verifiers return a :class:`~supercasimir.report.VerificationReport` holding
every residual; they never assume the answer.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import SuperAlgebra, full_dual_basis, gl_label, root_decomposition
from .errors import PreconditionError
from .exact import ONE, LaurentPoly
from .report import VerificationReport
from .uea import Enveloping, Gen, UEAElement, Word

WORKERS_ENV = "SUPERCASIMIR_WORKERS"


# -- Casimir operators --------------------------------------------------------

def build_casimir(A: SuperAlgebra) -> UEAElement:
    """2 h_rho + sum_i h_i h^i + sum_{alpha > 0} 2 sum_i f_alpha^i e_alpha^i."""
    env = Enveloping.of(A)
    R = root_decomposition(A)
    out = env.loop_vec(R.h_rho) * 2
    for j, hj in enumerate(R.cartan_dual):
        out = out + env.gen(A.cartan[j]) * env.loop_vec(hj)
    for alpha in R.positive_roots:
        for e, f in zip(*R.dual_pairs[alpha]):
            out = out + (env.loop_vec(f) * env.loop_vec(e)) * 2
    return out


def build_casimir_c(A: SuperAlgebra) -> UEAElement:
    """sum_i (-1)^{|x_i|} x_i y_i over the basis x_i and its dual y_i."""
    env = Enveloping.of(A)
    duals = full_dual_basis(A)
    out = env.zero()
    for i, y in enumerate(duals):
        sign = -1 if A.parity[i] else 1
        out = out + env.gen(i) * env.loop_vec(y) * sign
    return out


def build_generalized_casimir(A: SuperAlgebra, a: LaurentPoly, b: LaurentPoly) -> UEAElement:
    """Omega(a, b) on the loop algebra, expanded bilinearly over monomials of a and b."""
    if not a or not b:
        raise PreconditionError("Laurent arguments must be nonzero")
    env = Enveloping.of(A)
    R = root_decomposition(A)
    out = env.loop_vec(R.h_rho, a * b) * 2
    for j, hj in enumerate(R.cartan_dual):
        out = out + env.loop_vec({A.cartan[j]: Fraction(1)}, a) * env.loop_vec(hj, b)
    for alpha in R.positive_roots:
        for e, f in zip(*R.dual_pairs[alpha]):
            out = out + env.loop_vec(f, a) * env.loop_vec(e, b)
            out = out + env.loop_vec(f, b) * env.loop_vec(e, a)
    return out


# -- gl(M,N) invariants ---------------------------------------------------------

def _gl_data(A: SuperAlgebra) -> tuple[int, int, dict[tuple[int, int], int], dict[int, int]]:
    if not A.gl_shape:
        raise PreconditionError(f"{A.name} is not a gl(M,N) algebra")
    M, N = A.gl_shape
    n = M + N
    idx = {(i, j): A.index(gl_label(i, j)) for i in range(1, n + 1) for j in range(1, n + 1)}
    p = {i: 0 if i <= M else 1 for i in range(1, n + 1)}
    return M, N, idx, p


def _cyclic_words(A: SuperAlgebra, k: int, sign_of, args: Sequence[LaurentPoly] | None) -> dict[Word, Fraction]:
    """sum over (i_1..i_k) of sign * E_{i1 i2}(a_1) E_{i2 i3}(a_2) ... E_{ik i1}(a_k) as raw words."""
    if k < 1:
        raise PreconditionError("k must be >= 1")
    M, N, idx, p = _gl_data(A)
    args = list(args) if args is not None else [ONE] * k
    if len(args) != k:
        raise PreconditionError(f"expected {k} Laurent arguments, got {len(args)}")
    if any(not a for a in args):
        raise PreconditionError("Laurent arguments must be nonzero")
    monos = [list(a.items()) for a in args]
    words: dict[Word, Fraction] = {}
    for tup in itertools.product(range(1, M + N + 1), repeat=k):
        sign = sign_of(tup, p)
        letters = [idx[(tup[r], tup[(r + 1) % k])] for r in range(k)]
        for choice in itertools.product(*monos):
            coeff = Fraction(sign)
            word = []
            for letter, (n, c) in zip(letters, choice):
                coeff *= c
                word.append((letter, n))
            w = tuple(word)
            words[w] = words.get(w, Fraction(0)) + coeff
    return {w: c for w, c in words.items() if c}


def _gelfand_sign(tup, p) -> int:
    return -1 if sum(p[i] for i in tup[1:]) % 2 else 1


def _anti_sign(tup, p) -> int:
    return -1 if sum(p[i] for i in tup) % 2 else 1


def gelfand_tensor(A: SuperAlgebra, k: int, args: Sequence[LaurentPoly] | None = None) -> dict[Word, Fraction]:
    """The tensor-algebra element before projection to the enveloping algebra."""
    return _cyclic_words(A, k, _gelfand_sign, args)


def build_gelfand(A: SuperAlgebra, k: int, args: Sequence[LaurentPoly] | None = None) -> UEAElement:
    """T_k(a_1, ..., a_k); all arguments default to 1, giving the classical T_k."""
    return Enveloping.of(A).from_words(gelfand_tensor(A, k, args))


def build_even_gelfand(A: SuperAlgebra, k: int) -> UEAElement:
    """S_k = sum E_{i1 i2} E_{i2 i3} ... E_{ik i1} with no signs."""
    return Enveloping.of(A).from_words(_cyclic_words(A, k, lambda tup, p: 1, None))


def build_anti_invariant(A: SuperAlgebra, l: int, allow_small: bool = False) -> UEAElement:
    """D_l = sum (-1)^{p(i1)+...+p(il)} E_{i1 i2} ... E_{il i1}.

    Defined for M + N >= 3; ``allow_small`` lifts the restriction for
    experiments on gl(1,1).
    """
    if A.gl_shape and sum(A.gl_shape) < 3 and not allow_small:
        raise PreconditionError("anti-invariants D_l are defined for gl(M,N) with M+N >= 3")
    return Enveloping.of(A).from_words(_cyclic_words(A, l, _anti_sign, None))


def tensor_ad(A: SuperAlgebra, x: int, tensor: dict[Word, Fraction]) -> dict[Word, Fraction]:
    """ad x on the tensor algebra: derivation with Koszul signs, no reordering."""
    env = Enveloping.of(A)
    px = A.parity[x]
    out: dict[Word, Fraction] = {}
    for w, c in tensor.items():
        passed = 0
        for r, y in enumerate(w):
            sign = -1 if px and passed % 2 else 1
            for g, k in env.loop_bracket((x, 0), y):
                nw = w[:r] + (g,) + w[r + 1:]
                v = out.get(nw, Fraction(0)) + sign * c * k
                if v:
                    out[nw] = v
                else:
                    out.pop(nw, None)
            passed += A.parity[y[0]]
    return out


def verify_tensor_invariance(A: SuperAlgebra, tensor: dict[Word, Fraction]) -> VerificationReport:
    env = Enveloping.of(A)
    residuals = {}
    for x in range(A.dim):
        res = tensor_ad(A, x, tensor)
        residuals[A.labels[x]] = {
            " (x) ".join(env.format_gen(g) for g in w): c for w, c in sorted(res.items())
        }
    return VerificationReport(list(A.labels), residuals, title="tensor-algebra invariance")


# -- spec objects for the CLI / parser ------------------------------------------

@dataclass(frozen=True)
class InvariantSpec:
    kind: str  # Omega | OmegaC | GeneralizedOmega | T | S | D
    k: int | None = None
    args: tuple = field(default_factory=tuple)

    def build(self, A: SuperAlgebra, allow_small: bool = False) -> UEAElement:
        if self.kind == "Omega":
            return build_casimir(A)
        if self.kind == "OmegaC":
            return build_casimir_c(A)
        if self.kind == "GeneralizedOmega":
            a, b = self.args
            return build_generalized_casimir(A, a, b)
        if self.kind == "T":
            return build_gelfand(A, self.k, list(self.args) if self.args else None)
        if self.kind == "S":
            return build_even_gelfand(A, self.k)
        if self.kind == "D":
            return build_anti_invariant(A, self.k, allow_small=allow_small)
        raise ValueError(f"unknown invariant kind {self.kind!r}")


# -- verifiers ------------------------------------------------------------------

def _residual_task(job):
    mode, u, g = job
    env = u.env
    ge = env.gen(g[0], g[1])
    if mode == "central":
        return env.supercommutator(u, ge)
    return env.ad_prime(ge, u)


def _compute(mode: str, u: UEAElement, gens: Sequence[Gen]) -> list[UEAElement]:
    workers = int(os.environ.get(WORKERS_ENV, "1") or 1)
    jobs = [(mode, u, g) for g in gens]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_residual_task, jobs))
        # rebind to the caller's engine so results compare and combine locally
        return [u.env.element(r.terms) for r in results]
    return [_residual_task(j) for j in jobs]


def _gens(A: SuperAlgebra, generators: Iterable | None) -> list[Gen]:
    if generators is None:
        return [(i, 0) for i in range(A.dim)]
    out = []
    for g in generators:
        if isinstance(g, str):
            out.append((A.index(g), 0))
        elif isinstance(g, int):
            out.append((g, 0))
        else:
            out.append((int(g[0]), int(g[1])))
    return out


def verify_central(u: UEAElement, A: SuperAlgebra | None = None, generators: Iterable | None = None) -> VerificationReport:
    """Residuals [u, x] for x in ``generators`` (default: every basis element of g)."""
    A = A or u.env.algebra
    u.require_parity()
    gens = _gens(A, generators)
    env = u.env
    residuals = dict(zip((env.format_gen(g) for g in gens), _compute("central", u, gens)))
    return VerificationReport([env.format_gen(g) for g in gens], residuals, title="centrality")


def verify_even_central(u: UEAElement, A: SuperAlgebra | None = None) -> VerificationReport:
    """Pass/fail on the even part of g; odd residuals are reported for information."""
    A = A or u.env.algebra
    u.require_parity()
    env = u.env
    even = [(i, 0) for i in range(A.dim) if not A.parity[i]]
    odd = [(i, 0) for i in range(A.dim) if A.parity[i]]
    res_even = _compute("central", u, even)
    res_odd = _compute("central", u, odd)
    return VerificationReport(
        [env.format_gen(g) for g in even],
        dict(zip((env.format_gen(g) for g in even), res_even)),
        informational=dict(zip((env.format_gen(g) for g in odd), res_odd)),
        title="even centrality",
    )


def verify_anti_invariant(u: UEAElement, A: SuperAlgebra | None = None, generators: Iterable | None = None) -> VerificationReport:
    """Residuals ad'x.u = x u - (-1)^{|x|(|u|+1)} u x for every generator x."""
    A = A or u.env.algebra
    u.require_parity()
    gens = _gens(A, generators)
    env = u.env
    residuals = dict(zip((env.format_gen(g) for g in gens), _compute("anti", u, gens)))
    return VerificationReport([env.format_gen(g) for g in gens], residuals, title="anti-invariance")


def lemma52_residual(g: UEAElement, m1: UEAElement, m2: UEAElement) -> UEAElement:
    """ad'g.(m1 m2) - (ad'g.m1) m2 - (-1)^{|g|(|m1|+1)} m1 (ad g.m2); zero when the
    twisted action is a correct skew derivation."""
    env = g.env
    pg, p1 = g.require_parity(), m1.require_parity()
    m2.require_parity()
    sign = -1 if pg * (p1 + 1) % 2 else 1
    lhs = env.ad_prime(g, m1 * m2)
    rhs = env.ad_prime(g, m1) * m2 + (m1 * env.ad(g, m2)) * sign
    return lhs - rhs
