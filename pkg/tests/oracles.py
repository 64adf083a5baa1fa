"""Independent reference computations used to cross-check the package.

Nothing here touches the memoised PBW engine.  Words are tuples of
(basis index, loop exponent) and are reduced by brute-force rewriting that
reads only the structure constants of the algebra.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def _add(d, key, c):
    v = d.get(key, Fraction(0)) + c
    if v:
        d[key] = v
    else:
        d.pop(key, None)


def brute_normal_form(A, words):
    """Reduce a dict word -> coefficient to PBW normal form.

    Order letters by (index, exponent); an odd letter may not repeat.  Each
    step rewrites the rightmost offending pair, the opposite choice to the
    package's left-insertion scheme.
    """
    pending = {}
    for w, c in words.items():
        _add(pending, tuple(w), Fraction(c))
    done = {}
    while pending:
        w = max(pending, key=len)
        c = pending.pop(w)
        hit = None
        for i in range(len(w) - 2, -1, -1):
            a, b = w[i], w[i + 1]
            if a > b or (a == b and A.parity[a[0]]):
                hit = i
                break
        if hit is None:
            _add(done, w, c)
            continue
        a, b = w[hit], w[hit + 1]
        pre, post = w[:hit], w[hit + 2:]
        n = a[1] + b[1]
        bracket = [(k, Fraction(v)) for k, v in A.bracket_basis(a[0], b[0])]
        if a == b:
            for k, v in bracket:
                _add(pending, pre + ((k, n),) + post, c * v / 2)
        else:
            sign = -1 if A.parity[a[0]] and A.parity[b[0]] else 1
            _add(pending, pre + (b, a) + post, c * sign)
            for k, v in bracket:
                _add(pending, pre + ((k, n),) + post, c * v)
    return done


def word_mul(u, v):
    """Concatenation product of two raw word dicts."""
    out = {}
    for (a, x), (b, y) in itertools.product(u.items(), v.items()):
        _add(out, a + b, x * y)
    return out


def gl_cyclic_words(A, k, signed):
    """sum over index tuples of sign * E_{i1 i2} ... E_{ik i1}, signed by `signed(tuple, p)`."""
    M, N = A.gl_shape
    n = M + N
    p = {i: int(i > M) for i in range(1, n + 1)}
    out = {}
    for tup in itertools.product(range(1, n + 1), repeat=k):
        word = tuple((A.index(f"E[{tup[r]},{tup[(r + 1) % k]}]"), 0) for r in range(k))
        _add(out, word, Fraction(signed(tup, p)))
    return out


def anti_sign(tup, p):
    return (-1) ** sum(p[i] for i in tup)


def gelfand_sign(tup, p):
    return (-1) ** sum(p[i] for i in tup[1:])


def unsigned(tup, p):
    return 1


def word_parity(A, words):
    ps = {sum(A.parity[g[0]] for g in w) % 2 for w in words}
    assert len(ps) == 1
    return ps.pop()


def brute_ad_prime(A, x, words):
    """x u - (-1)^{|x|(|u|+1)} u x for homogeneous u, fully reduced."""
    pu = word_parity(A, words)
    px = A.parity[x]
    sign = -1 if px * (pu + 1) % 2 else 1
    letter = {((x, 0),): Fraction(1)}
    raw = word_mul(letter, words)
    for w, c in word_mul(words, letter).items():
        _add(raw, w, -sign * c)
    return brute_normal_form(A, raw)


def brute_commutator(A, x, words):
    """[u, x] = u x - (-1)^{|u||x|} x u, fully reduced."""
    pu = word_parity(A, words)
    sign = -1 if pu and A.parity[x] else 1
    letter = {((x, 0),): Fraction(1)}
    raw = word_mul(words, letter)
    for w, c in word_mul(letter, words).items():
        _add(raw, w, -sign * c)
    return brute_normal_form(A, raw)


def matrix_of_word(module_mats, word, dim):
    """Product of letter matrices, computed with plain loops."""
    out = [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
    for g in word:
        m = module_mats(g)
        out = [[sum(out[i][k] * m[k][j] for k in range(dim)) for j in range(dim)] for i in range(dim)]
    return out
