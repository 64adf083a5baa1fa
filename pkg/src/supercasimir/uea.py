"""PBW normal form in the enveloping algebra U(g (x) Q[t, t^-1]).

A loop generator ``x (x) t^n`` is the pair ``(basis_index, n)``; pairs are
ordered by basis index first and exponent second, and a word is in normal
form when its letters are weakly increasing with no odd letter repeated.
Reordering uses

    x y = (-1)^{|x||y|} y x + [x, y]     (x > y)
    x x = 1/2 [x, x]                      (x odd)

Normal forms are built by left-inserting letters into already-normal words,
with the insertion memoised per algebra.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

from .algebra import GVec, SuperAlgebra
from .errors import ParityError
from .exact import LaurentPoly, Scalar, as_fraction, fraction_str

Gen = tuple[int, int]
Word = tuple[Gen, ...]

_ZERO = Fraction(0)
_HALF = Fraction(1, 2)


def _acc(out: dict, word: Word, c: Fraction) -> None:
    v = out.get(word, _ZERO) + c
    if v:
        out[word] = v
    else:
        out.pop(word, None)


class Enveloping:
    """Rewriting engine and element factory for one algebra."""

    def __init__(self, algebra: SuperAlgebra):
        self.algebra = algebra
        self.parity = algebra.parity
        self._insert_cache: dict[tuple[Gen, Word], dict[Word, Fraction]] = {}
        self._bracket_cache: dict[tuple[Gen, Gen], tuple[tuple[Gen, Fraction], ...]] = {}

    @classmethod
    def of(cls, algebra: SuperAlgebra) -> "Enveloping":
        env = algebra._cache.get("enveloping")
        if env is None:
            env = algebra._cache["enveloping"] = cls(algebra)
        return env

    def __getstate__(self):
        return {"algebra": self.algebra}

    def __setstate__(self, state):
        self.__init__(state["algebra"])

    def __repr__(self) -> str:
        return f"Enveloping({self.algebra.name})"

    # -- generators ----------------------------------------------------------

    def gen_parity(self, g: Gen) -> int:
        return self.parity[g[0]]

    def word_parity(self, w: Word) -> int:
        return sum(self.parity[g[0]] for g in w) % 2

    def loop_bracket(self, x: Gen, y: Gen) -> tuple[tuple[Gen, Fraction], ...]:
        """[x (x) t^m, y (x) t^n] = [x, y] (x) t^(m+n)."""
        key = (x, y)
        hit = self._bracket_cache.get(key)
        if hit is None:
            n = x[1] + y[1]
            hit = tuple(((k, n), c) for k, c in self.algebra.bracket_basis(x[0], y[0]))
            self._bracket_cache[key] = hit
        return hit

    def is_normal(self, w: Word) -> bool:
        for a, b in zip(w, w[1:]):
            if a > b or (a == b and self.parity[a[0]]):
                return False
        return True

    # -- elements ------------------------------------------------------------

    def element(self, terms: Mapping[Word, Fraction]) -> "UEAElement":
        """Wrap terms that are already in normal form."""
        return UEAElement(self, {w: c for w, c in terms.items() if c})

    def zero(self) -> "UEAElement":
        return UEAElement(self, {})

    def one(self) -> "UEAElement":
        return self.scalar(1)

    def scalar(self, c: Scalar) -> "UEAElement":
        c = as_fraction(c)
        return UEAElement(self, {(): c} if c else {})

    def gen(self, which: Union[int, str], arg: Union[int, LaurentPoly] = 0) -> "UEAElement":
        """A loop generator ``x (x) t^n``, or ``x (x) p`` for a Laurent polynomial p."""
        i = which if isinstance(which, int) else self.algebra.index(which)
        if isinstance(arg, LaurentPoly):
            return self.element({((i, n),): c for n, c in arg.items()})
        return UEAElement(self, {((i, arg),): Fraction(1)})

    def loop_vec(self, vec: Mapping[int, Fraction], poly: LaurentPoly | None = None) -> "UEAElement":
        """The degree-one element ``v (x) p`` for a vector v of g."""
        if poly is None:
            return self.element({((k, 0),): c for k, c in vec.items()})
        out: dict[Word, Fraction] = {}
        for k, c in vec.items():
            for n, d in poly.items():
                _acc(out, ((k, n),), c * d)
        return UEAElement(self, out)

    def from_words(self, words: Mapping[Word, Scalar] | Iterable[tuple[Word, Scalar]]) -> "UEAElement":
        """Normal form of an arbitrary linear combination of words."""
        items = words.items() if isinstance(words, Mapping) else words
        out: dict[Word, Fraction] = {}
        for w, c in items:
            c = as_fraction(c)
            if not c:
                continue
            for w2, c2 in self.normal_form_word(tuple(w)).items():
                _acc(out, w2, c * c2)
        return UEAElement(self, out)

    # -- rewriting -------------------------------------------------------------

    def normal_form_word(self, w: Word) -> dict[Word, Fraction]:
        cur: dict[Word, Fraction] = {(): Fraction(1)}
        for x in reversed(w):
            nxt: dict[Word, Fraction] = {}
            for word, c in cur.items():
                for w2, c2 in self._insert(x, word).items():
                    _acc(nxt, w2, c * c2)
            cur = nxt
        return cur

    def _insert(self, x: Gen, w: Word) -> dict[Word, Fraction]:
        """Normal form of the letter x times the normal word w."""
        key = (x, w)
        hit = self._insert_cache.get(key)
        if hit is not None:
            return hit
        if not w or x < w[0]:
            res = {(x,) + w: Fraction(1)}
        elif x == w[0]:
            if self.parity[x[0]]:
                res = {}
                rest = w[1:]
                for g, c in self.loop_bracket(x, x):
                    for w2, c2 in self._insert(g, rest).items():
                        _acc(res, w2, _HALF * c * c2)
            else:
                res = {(x,) + w: Fraction(1)}
        else:
            y, rest = w[0], w[1:]
            sign = -1 if self.parity[x[0]] and self.parity[y[0]] else 1
            res = {}
            for w1, c1 in self._insert(x, rest).items():
                for w2, c2 in self._insert(y, w1).items():
                    _acc(res, w2, sign * c1 * c2)
            for g, c in self.loop_bracket(x, y):
                for w2, c2 in self._insert(g, rest).items():
                    _acc(res, w2, c * c2)
        self._insert_cache[key] = res
        return res

    def _mul_terms(self, a: Mapping[Word, Fraction], b: Mapping[Word, Fraction]) -> dict[Word, Fraction]:
        out: dict[Word, Fraction] = {}
        for wb, cb in b.items():
            for wa, ca in a.items():
                cur: dict[Word, Fraction] = {wb: Fraction(1)}
                for x in reversed(wa):
                    nxt: dict[Word, Fraction] = {}
                    for word, c in cur.items():
                        for w2, c2 in self._insert(x, word).items():
                            _acc(nxt, w2, c * c2)
                    cur = nxt
                k = ca * cb
                for w, c in cur.items():
                    _acc(out, w, k * c)
        return out

    # -- operations ------------------------------------------------------------

    def mul(self, u: "UEAElement", v: "UEAElement") -> "UEAElement":
        return UEAElement(self, self._mul_terms(u.terms, v.terms))

    def supercommutator(self, u: "UEAElement", v: "UEAElement") -> "UEAElement":
        pu, pv = u.require_parity(), v.require_parity()
        sign = -1 if pu and pv else 1
        return u * v - (v * u) * sign

    def ad(self, g: Union[Gen, "UEAElement"], u: "UEAElement") -> "UEAElement":
        return self.supercommutator(self._as_element(g), u)

    def ad_prime(self, g: Union[Gen, "UEAElement"], u: "UEAElement") -> "UEAElement":
        """Twisted action g u - (-1)^{|g|(|u|+1)} u g."""
        g = self._as_element(g)
        pg, pu = g.require_parity(), u.require_parity()
        sign = -1 if pg * (pu + 1) % 2 else 1
        return g * u - (u * g) * sign

    def _as_element(self, g) -> "UEAElement":
        if isinstance(g, UEAElement):
            return g
        return UEAElement(self, {(tuple(g),): Fraction(1)})

    def format_gen(self, g: Gen) -> str:
        lab = self.algebra.labels[g[0]]
        n = g[1]
        if n == 0:
            return lab
        return f"{lab}(t)" if n == 1 else f"{lab}(t^{n})"

    def cache_size(self) -> int:
        return len(self._insert_cache)


class UEAElement:
    """Immutable linear combination of normal-form words."""

    __slots__ = ("env", "terms")

    def __init__(self, env: Enveloping, terms: dict[Word, Fraction]):
        self.env = env
        self.terms = terms

    # -- structure ---------------------------------------------------------

    @property
    def parity(self) -> int | None:
        """0 or 1 for homogeneous elements (zero counts as even), None if mixed."""
        ps = {self.env.word_parity(w) for w in self.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def require_parity(self) -> int:
        p = self.parity
        if p is None:
            raise ParityError("operation requires an element of homogeneous parity")
        return p

    def homogeneous_parts(self) -> dict[int, "UEAElement"]:
        parts: dict[int, dict[Word, Fraction]] = {}
        for w, c in self.terms.items():
            parts.setdefault(self.env.word_parity(w), {})[w] = c
        return {p: UEAElement(self.env, t) for p, t in sorted(parts.items())}

    @property
    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def coefficient(self, word: Iterable[Gen]) -> Fraction:
        return self.terms.get(tuple(tuple(g) for g in word), _ZERO)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "UEAElement":
        if isinstance(other, UEAElement):
            if other.env.algebra is not self.env.algebra and other.env.algebra != self.env.algebra:
                raise ValueError("elements belong to different algebras")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.env.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for w, c in other.terms.items():
            _acc(out, w, c)
        return UEAElement(self.env, out)

    __radd__ = __add__

    def __neg__(self) -> "UEAElement":
        return UEAElement(self.env, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            c = Fraction(other)
            return UEAElement(self.env, {w: c * v for w, v in self.terms.items()} if c else {})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.env.mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self * other
        return NotImplemented

    def __pow__(self, n: int) -> "UEAElement":
        if n < 0:
            raise ValueError("negative powers are not defined")
        out = self.env.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = self.env.scalar(other)
        if not isinstance(other, UEAElement):
            return NotImplemented
        same = self.env.algebra is other.env.algebra or self.env.algebra == other.env.algebra
        return same and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    # -- display ------------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Word, Fraction]]:
        return sorted(self.terms.items(), key=lambda wc: (len(wc[0]), wc[0]))

    def format_word(self, w: Word) -> str:
        parts = []
        i = 0
        while i < len(w):
            j = i
            while j < len(w) and w[j] == w[i]:
                j += 1
            s = self.env.format_gen(w[i])
            parts.append(s if j - i == 1 else f"{s}^{j - i}")
            i = j
        return "*".join(parts)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = ""
        for n, (w, c) in enumerate(self.sorted_terms()):
            mag = abs(c)
            body = self.format_word(w)
            if not body:
                body = fraction_str(mag)
            elif mag != 1:
                body = f"{fraction_str(mag)}*{body}"
            if n == 0:
                out = ("-" if c < 0 else "") + body
            else:
                out += (" - " if c < 0 else " + ") + body
        return out

    def __repr__(self) -> str:
        return f"UEAElement({self})"

    def to_json(self) -> dict:
        labels = self.env.algebra.labels
        return {
            "text": str(self),
            "terms": [
                {"coeff": fraction_str(c), "word": [[labels[i], n] for i, n in w]}
                for w, c in self.sorted_terms()
            ],
        }


def naive_normal_form(env: Enveloping, words: Mapping[Word, Scalar], strategy: str = "leftmost") -> dict[Word, Fraction]:
    """Reduce by repeatedly rewriting one out-of-order adjacent pair.

    Uses no memoisation and a selectable redex (``leftmost`` or
    ``rightmost``); the result must agree with :meth:`Enveloping.from_words`.
    """
    if strategy not in ("leftmost", "rightmost"):
        raise ValueError("strategy must be 'leftmost' or 'rightmost'")
    par = env.parity
    pending: dict[Word, Fraction] = {}
    for w, c in words.items():
        _acc(pending, tuple(w), as_fraction(c))
    done: dict[Word, Fraction] = {}
    while pending:
        w, c = pending.popitem()
        positions = range(len(w) - 1) if strategy == "leftmost" else range(len(w) - 2, -1, -1)
        hit = None
        for i in positions:
            a, b = w[i], w[i + 1]
            if a > b or (a == b and par[a[0]]):
                hit = i
                break
        if hit is None:
            _acc(done, w, c)
            continue
        a, b = w[hit], w[hit + 1]
        pre, post = w[:hit], w[hit + 2:]
        if a == b:
            for g, k in env.loop_bracket(a, a):
                _acc(pending, pre + (g,) + post, c * k * _HALF)
        else:
            sign = -1 if par[a[0]] and par[b[0]] else 1
            _acc(pending, pre + (b, a) + post, c * sign)
            for g, k in env.loop_bracket(a, b):
                _acc(pending, pre + (g,) + post, c * k)
    return done
