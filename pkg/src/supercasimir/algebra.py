"""Finite-dimensional Lie superalgebras given by structure constants.

An algebra is a basis with parities, a bracket table c_ij^k, the Gram matrix
of an even super-symmetric invariant form, and a list of basis indices that
span a Cartan subalgebra acting diagonally on the basis.  The declared basis
order is also the PBW order used by :mod:`supercasimir.uea`.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

import jsonschema

from . import linalg
from .errors import (
    AlgebraValidationError,
    PreconditionError,
    SchemaError,
    UnsupportedBasisError,
)
from .exact import Scalar, as_fraction, fraction_str
from .report import ValidationReport, VerificationReport

GVec = dict[int, Fraction]
Weight = tuple[Fraction, ...]

EVEN, ODD = 0, 1


def _clean(vec: Mapping[int, Fraction]) -> GVec:
    return {k: c for k, c in sorted(vec.items()) if c}


def vec_add(*terms: tuple[Scalar, Mapping[int, Fraction]]) -> GVec:
    out: dict[int, Fraction] = {}
    for coeff, vec in terms:
        c = as_fraction(coeff)
        for k, v in vec.items():
            out[k] = out.get(k, Fraction(0)) + c * v
    return _clean(out)


class SuperAlgebra:
    """A validated-on-demand structure-constant table.

    ``brackets`` maps ordered index pairs to ``{k: c_ij^k}``.  A pair whose
    mirror is absent is completed by super-antisymmetry, so tables may be
    given on ``i <= j`` only.
    """

    def __init__(
        self,
        name: str,
        labels: Sequence[str],
        parity: Sequence[int],
        brackets: Mapping[tuple[int, int], Mapping[int, Scalar]],
        form: Mapping[tuple[int, int], Scalar],
        cartan: Sequence[int],
        chevalley: Mapping[str, Sequence[int]] | None = None,
        gl_shape: tuple[int, int] | None = None,
    ):
        self.name = name
        self.labels = tuple(labels)
        self.parity = tuple(int(p) for p in parity)
        self.dim = len(self.labels)
        if len(set(self.labels)) != self.dim:
            raise SchemaError("basis labels must be distinct")
        if len(self.parity) != self.dim or any(p not in (0, 1) for p in self.parity):
            raise SchemaError("parity must give 0/1 (even/odd) for every basis element")
        table: dict[tuple[int, int], GVec] = {}
        for (i, j), out in brackets.items():
            self._check_index(i), self._check_index(j)
            for k in out:
                self._check_index(k)
            table[(i, j)] = _clean({k: as_fraction(c) for k, c in out.items()})
        for (i, j), out in list(table.items()):
            if (j, i) not in table:
                sign = 1 if self.parity[i] * self.parity[j] else -1
                table[(j, i)] = {k: sign * c for k, c in out.items()}
        self._table = [[tuple(table.get((i, j), {}).items()) for j in range(self.dim)] for i in range(self.dim)]
        self.form_entries: dict[tuple[int, int], Fraction] = {}
        for (i, j), c in form.items():
            self._check_index(i), self._check_index(j)
            c = as_fraction(c)
            if c:
                self.form_entries[(i, j)] = c
        self.cartan = tuple(cartan)
        for i in self.cartan:
            self._check_index(i)
        if len(set(self.cartan)) != len(self.cartan) or not self.cartan:
            raise SchemaError("cartan must list distinct basis indices")
        self.chevalley = (
            {"e": tuple(chevalley["e"]), "f": tuple(chevalley["f"])} if chevalley else None
        )
        self.gl_shape = tuple(gl_shape) if gl_shape else None
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        self._cache: dict[str, Any] = {}

    def _check_index(self, i: int) -> None:
        if not isinstance(i, int) or not 0 <= i < len(self.labels):
            raise SchemaError(f"basis index {i!r} out of range")

    def __repr__(self) -> str:
        return f"SuperAlgebra({self.name!r}, dim={self.dim})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SuperAlgebra):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __hash__(self) -> int:
        return hash(self.fingerprint())

    def __getstate__(self):
        state = self.__dict__.copy()
        state["_cache"] = {}
        return state

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown basis label {label!r} in {self.name}") from None

    def bracket_basis(self, i: int, j: int) -> tuple[tuple[int, Fraction], ...]:
        return self._table[i][j]

    def bracket(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> GVec:
        out: dict[int, Fraction] = {}
        for i, a in x.items():
            row = self._table[i]
            for j, b in y.items():
                for k, c in row[j]:
                    out[k] = out.get(k, Fraction(0)) + a * b * c
        return _clean(out)

    def form(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> Fraction:
        total = Fraction(0)
        for i, a in x.items():
            for j, b in y.items():
                c = self.form_entries.get((i, j))
                if c:
                    total += a * b * c
        return total

    def basis_vec(self, i: int) -> GVec:
        return {i: Fraction(1)}

    def vec_parity(self, v: Mapping[int, Fraction]) -> int | None:
        """Parity of a homogeneous vector, None for mixed; zero counts as even."""
        ps = {self.parity[k] for k, c in v.items() if c}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else EVEN

    def format_vec(self, v: Mapping[int, Fraction]) -> str:
        if not v:
            return "0"
        parts = []
        for k, c in sorted(v.items()):
            lab = self.labels[k]
            parts.append(lab if c == 1 else f"-{lab}" if c == -1 else f"{fraction_str(c)}*{lab}")
        return " + ".join(parts).replace("+ -", "- ")

    # -- serialisation ---------------------------------------------------

    def to_dict(self) -> dict:
        brackets = []
        for i in range(self.dim):
            for j in range(i, self.dim):
                out = self._table[i][j]
                if out:
                    brackets.append([i, j, [[k, fraction_str(c)] for k, c in out]])
                if i != j:
                    # keep a mirror entry only when it is not the derived one
                    sign = 1 if self.parity[i] * self.parity[j] else -1
                    mirror = self._table[j][i]
                    if mirror != tuple((k, sign * c) for k, c in out):
                        brackets.append([j, i, [[k, fraction_str(c)] for k, c in mirror]])
        doc = {
            "name": self.name,
            "basis": [
                {"label": lab, "parity": "odd" if p else "even"}
                for lab, p in zip(self.labels, self.parity)
            ],
            "brackets": brackets,
            "form": [[i, j, fraction_str(c)] for (i, j), c in sorted(self.form_entries.items())],
            "cartan": list(self.cartan),
        }
        if self.chevalley:
            doc["chevalley"] = {"e": list(self.chevalley["e"]), "f": list(self.chevalley["f"])}
        if self.gl_shape:
            doc["gl"] = list(self.gl_shape)
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def fingerprint(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()[:16]


# -- JSON loading -----------------------------------------------------------

_FRACTION = {"type": "string", "pattern": r"^\s*[-+]?\d+(\s*/\s*\d+)?\s*$"}
_INDEX = {"type": "integer", "minimum": 0}

ALGEBRA_SCHEMA = {
    "type": "object",
    "required": ["name", "basis", "brackets", "form", "cartan"],
    "properties": {
        "name": {"type": "string"},
        "basis": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["label", "parity"],
                "properties": {
                    "label": {"type": "string", "minLength": 1},
                    "parity": {"enum": ["even", "odd", 0, 1]},
                },
            },
        },
        "brackets": {
            "type": "array",
            "items": {
                "type": "array",
                "minItems": 3,
                "maxItems": 3,
                "items": [_INDEX, _INDEX, {"type": "array", "items": {
                    "type": "array", "minItems": 2, "maxItems": 2, "items": [_INDEX, _FRACTION]}}],
            },
        },
        "form": {
            "type": "array",
            "items": {"type": "array", "minItems": 3, "maxItems": 3, "items": [_INDEX, _INDEX, _FRACTION]},
        },
        "cartan": {"type": "array", "minItems": 1, "items": _INDEX},
        "chevalley": {
            "type": "object",
            "required": ["e", "f"],
            "properties": {"e": {"type": "array", "items": _INDEX}, "f": {"type": "array", "items": _INDEX}},
        },
        "gl": {"type": "array", "minItems": 2, "maxItems": 2, "items": {"type": "integer", "minimum": 1}},
    },
}


def algebra_from_dict(doc: Mapping) -> SuperAlgebra:
    """Parse a document without running the structural validation."""
    try:
        jsonschema.Draft7Validator(ALGEBRA_SCHEMA).validate(doc)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"algebra schema violation at {where}: {exc.message}") from None
    parity = [1 if b["parity"] in ("odd", 1) else 0 for b in doc["basis"]]
    brackets: dict[tuple[int, int], dict[int, Fraction]] = {}
    for i, j, out in doc["brackets"]:
        if (i, j) in brackets:
            raise SchemaError(f"duplicate bracket entry for pair ({i}, {j})")
        brackets[(i, j)] = {}
        for k, c in out:
            brackets[(i, j)][k] = brackets[(i, j)].get(k, Fraction(0)) + Fraction(c.replace(" ", ""))
    form = {}
    for i, j, c in doc["form"]:
        if (i, j) in form:
            raise SchemaError(f"duplicate form entry for pair ({i}, {j})")
        form[(i, j)] = Fraction(c.replace(" ", ""))
    gl = doc.get("gl")
    return SuperAlgebra(
        doc["name"],
        [b["label"] for b in doc["basis"]],
        parity,
        brackets,
        form,
        doc["cartan"],
        chevalley=doc.get("chevalley"),
        gl_shape=tuple(gl) if gl else None,
    )


def load_algebra(document: Mapping | str) -> SuperAlgebra:
    """Load a JSON document (dict or JSON text) and validate every axiom.

    Raises SchemaError for malformed documents and AlgebraValidationError,
    carrying the full report with witnesses, for structural failures.
    """
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from None
    alg = algebra_from_dict(document)
    report = validate_algebra(alg)
    if not report.passed:
        raise AlgebraValidationError(report)
    return alg


# -- built-in algebras --------------------------------------------------------

def gl_label(i: int, j: int) -> str:
    return f"E[{i},{j}]"


def build_gl(M: int, N: int) -> SuperAlgebra:
    """gl(M,N) on matrix units with the supertrace form.

    Basis order: E_ii, then E_ij with i > j, then E_ij with i < j, each in
    lexicographic (i, j) order.  Indices are 1-based in labels.
    """
    if M < 1 or N < 1:
        raise ValueError("gl(M,N) needs M, N >= 1")
    n = M + N
    p = {i: 0 if i <= M else 1 for i in range(1, n + 1)}
    pairs = [(i, i) for i in range(1, n + 1)]
    pairs += [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i > j]
    pairs += [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i < j]
    idx = {pair: k for k, pair in enumerate(pairs)}
    parity = [(p[i] + p[j]) % 2 for i, j in pairs]
    brackets = {}
    for a, (i, j) in enumerate(pairs):
        for b, (k, l) in enumerate(pairs):
            out: dict[int, Fraction] = {}
            if j == k:
                out[idx[(i, l)]] = out.get(idx[(i, l)], Fraction(0)) + 1
            if l == i:
                sign = -1 if parity[a] * parity[b] else 1
                out[idx[(k, j)]] = out.get(idx[(k, j)], Fraction(0)) - sign
            brackets[(a, b)] = out
    form = {}
    for a, (i, j) in enumerate(pairs):
        form[(a, idx[(j, i)])] = Fraction((-1) ** p[i])
    chev = {
        "e": [idx[(i, i + 1)] for i in range(1, n)],
        "f": [idx[(i + 1, i)] for i in range(1, n)],
    }
    return SuperAlgebra(
        f"gl({M},{N})",
        [gl_label(i, j) for i, j in pairs],
        parity,
        brackets,
        form,
        [idx[(i, i)] for i in range(1, n + 1)],
        chevalley=chev,
        gl_shape=(M, N),
    )


def _table(labels: Sequence[str], rows: Mapping[tuple[str, str], Mapping[str, Scalar]]):
    ix = {lab: i for i, lab in enumerate(labels)}
    return {(ix[a], ix[b]): {ix[k]: c for k, c in out.items()} for (a, b), out in rows.items()}


def build_rank1(kind: str) -> SuperAlgebra:
    """The three rank-one algebras: ``sl2``, ``gl11`` and ``osp12``."""
    if kind == "sl2":
        labels = ["f", "h", "e"]
        rows = {
            ("e", "f"): {"h": 1},
            ("h", "e"): {"e": 2},
            ("h", "f"): {"f": -2},
        }
        form = {("h", "h"): 2, ("e", "f"): 1, ("f", "e"): 1}
        parity, cartan, chev = [0, 0, 0], ["h"], ("e", "f")
    elif kind == "gl11":
        labels = ["h1", "h2", "f", "e"]
        rows = {
            ("e", "f"): {"h1": 1, "h2": 1},
            ("h1", "e"): {"e": 1},
            ("h2", "e"): {"e": -1},
            ("h1", "f"): {"f": -1},
            ("h2", "f"): {"f": 1},
        }
        form = {("e", "f"): 1, ("f", "e"): -1, ("h1", "h1"): 1, ("h2", "h2"): -1}
        parity, cartan, chev = [0, 0, 1, 1], ["h1", "h2"], ("e", "f")
    elif kind == "osp12":
        labels = ["f'", "f", "h", "e", "e'"]
        # rows of the rank-one bracket table, first argument on the left
        rows = {
            ("h", "e'"): {"e'": 4},
            ("h", "f'"): {"f'": -4},
            ("h", "e"): {"e": 2},
            ("h", "f"): {"f": -2},
            ("e'", "f'"): {"h": Fraction(1, 2)},
            ("e'", "f"): {"e": -1},
            ("f'", "e"): {"f": -1},
            ("e", "e"): {"e'": 4},
            ("e", "f"): {"h": 1},
            ("f", "f"): {"f'": -4},
            ("e", "e'"): {},
            ("f", "f'"): {},
        }
        form = {("e", "f"): 1, ("f", "e"): -1, ("h", "h"): 2,
                ("e'", "f'"): Fraction(1, 4), ("f'", "e'"): Fraction(1, 4)}
        parity, cartan, chev = [0, 1, 0, 1, 0], ["h"], ("e", "f")
    else:
        raise ValueError(f"unknown rank-one algebra {kind!r}; expected sl2, gl11 or osp12")
    ix = {lab: i for i, lab in enumerate(labels)}
    return SuperAlgebra(
        kind,
        labels,
        parity,
        _table(labels, rows),
        {(ix[a], ix[b]): c for (a, b), c in form.items()},
        [ix[c] for c in cartan],
        chevalley={"e": [ix[chev[0]]], "f": [ix[chev[1]]]},
    )


def builtin(spec: str) -> SuperAlgebra:
    """Resolve ``sl2``, ``gl11``, ``osp12`` or ``gl:M,N``."""
    spec = spec.strip()
    if spec.startswith("gl:"):
        try:
            m, n = (int(x) for x in spec[3:].split(","))
        except ValueError:
            raise SchemaError(f"bad gl spec {spec!r}; expected gl:M,N") from None
        if m < 1 or n < 1:
            raise SchemaError("gl:M,N needs M, N >= 1")
        return build_gl(m, n)
    try:
        return build_rank1(spec)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


# -- validation ---------------------------------------------------------------

def _sign(p: int, q: int) -> int:
    return -1 if p * q % 2 else 1


def validate_algebra(A: SuperAlgebra) -> ValidationReport:
    """Check the super Lie axioms and the five form axioms on basis elements."""
    rep = ValidationReport()
    n, par = A.dim, A.parity
    basis = [A.basis_vec(i) for i in range(n)]

    rep.checks_run.append("parity_additive")
    for i, j in itertools.product(range(n), repeat=2):
        for k, c in A.bracket_basis(i, j):
            if par[k] != (par[i] + par[j]) % 2:
                rep.add("parity_additive", (i, j, k), f"[{A.labels[i]},{A.labels[j]}] has a {A.labels[k]} component")

    rep.checks_run.append("super_antisymmetry")
    for i in range(n):
        for j in range(i, n):
            lhs = dict(A.bracket_basis(j, i))
            rhs = {k: -_sign(par[i], par[j]) * c for k, c in A.bracket_basis(i, j)}
            if lhs != rhs:
                rep.add("super_antisymmetry", (i, j), f"[{A.labels[j]},{A.labels[i]}] != -(-1)^(|x||y|)[{A.labels[i]},{A.labels[j]}]")

    rep.checks_run.append("jacobi")
    ad = [[A.bracket(basis[i], basis[j]) for j in range(n)] for i in range(n)]
    for i, j, k in itertools.product(range(n), repeat=3):
        lhs = A.bracket(ad[i][j], basis[k])
        rhs = vec_add((1, A.bracket(basis[i], ad[j][k])), (-_sign(par[i], par[j]), A.bracket(basis[j], ad[i][k])))
        diff = vec_add((1, lhs), (-1, rhs))
        if diff:
            rep.add("jacobi", (i, j, k), f"defect {A.format_vec(diff)}")

    rep.checks_run.append("form_even")
    for (i, j), c in A.form_entries.items():
        if par[i] != par[j]:
            rep.add("form_even", (i, j), f"({A.labels[i]},{A.labels[j]}) = {fraction_str(c)} pairs even with odd")

    rep.checks_run.append("form_supersymmetric")
    for i in range(n):
        for j in range(i, n):
            a = A.form_entries.get((i, j), Fraction(0))
            b = A.form_entries.get((j, i), Fraction(0))
            if a != _sign(par[i], par[j]) * b:
                rep.add("form_supersymmetric", (i, j), f"({A.labels[i]},{A.labels[j]})={fraction_str(a)}, ({A.labels[j]},{A.labels[i]})={fraction_str(b)}")

    rep.checks_run.append("form_invariant")
    for i, j, k in itertools.product(range(n), repeat=3):
        lhs = A.form(ad[i][j], basis[k])
        rhs = A.form(basis[i], ad[j][k])
        if lhs != rhs:
            rep.add("form_invariant", (i, j, k), f"([x,y],z)={fraction_str(lhs)} but (x,[y,z])={fraction_str(rhs)}")

    rep.checks_run.append("cartan_abelian")
    for a, b in itertools.combinations(A.cartan, 2):
        if A.bracket_basis(a, b):
            rep.add("cartan_abelian", (a, b), "Cartan elements do not commute")
    for a in A.cartan:
        if par[a]:
            rep.add("cartan_abelian", (a,), "Cartan element is odd")

    rep.checks_run.append("cartan_nondegenerate")
    gram = [[A.form_entries.get((a, b), Fraction(0)) for b in A.cartan] for a in A.cartan]
    if linalg.rank(gram) < len(A.cartan):
        rep.add("cartan_nondegenerate", tuple(A.cartan), "form restricted to the Cartan is singular")

    rep.checks_run.append("cartan_diagonal")
    try:
        weights = basis_weights(A)
    except UnsupportedBasisError as exc:
        rep.add("cartan_diagonal", exc.args[1] if len(exc.args) > 1 else (), str(exc.args[0]))
        return rep

    rep.checks_run.append("root_orthogonality")
    for (i, j), c in A.form_entries.items():
        s = tuple(x + y for x, y in zip(weights[i], weights[j]))
        if any(s):
            rep.add("root_orthogonality", (i, j), f"({A.labels[i]},{A.labels[j]}) != 0 but weights do not sum to 0")

    rep.checks_run.append("root_pairing_nondegenerate")
    spaces = _group_by_weight(A, weights)
    for w, idxs in spaces.items():
        if not any(w):
            continue
        neg = tuple(-x for x in w)
        opp = spaces.get(neg, [])
        block = [[A.form_entries.get((a, b), Fraction(0)) for b in opp] for a in idxs]
        if len(opp) != len(idxs) or linalg.rank(block) < len(idxs):
            rep.add("root_pairing_nondegenerate", tuple(idxs), f"pairing of root space {weight_str(w)} with its negative is degenerate")
    return rep


# -- roots --------------------------------------------------------------------

def weight_str(w: Weight) -> str:
    return "(" + ",".join(fraction_str(x) for x in w) + ")"


def basis_weights(A: SuperAlgebra) -> list[Weight]:
    """Eigenvalues of ad h (h in the Cartan list) on each basis element."""
    if "weights" in A._cache:
        return A._cache["weights"]
    weights = []
    for j in range(A.dim):
        w = []
        for h in A.cartan:
            out = dict(A.bracket_basis(h, j))
            extra = [k for k in out if k != j]
            if extra:
                raise UnsupportedBasisError(
                    f"ad {A.labels[h]} is not diagonal on {A.labels[j]}", (h, j))
            w.append(out.get(j, Fraction(0)))
        weights.append(tuple(w))
    A._cache["weights"] = weights
    return weights


def _group_by_weight(A: SuperAlgebra, weights: Sequence[Weight]) -> dict[Weight, list[int]]:
    groups: dict[Weight, list[int]] = {}
    for j, w in enumerate(weights):
        groups.setdefault(w, []).append(j)
    return groups


def is_positive(w: Weight) -> bool:
    """Positivity convention: first nonzero coordinate is positive."""
    for x in w:
        if x:
            return x > 0
    return False


@dataclass
class RootDatum:
    weights: list[Weight]
    roots: list[Weight]
    root_spaces: dict[Weight, list[int]]
    positive_roots: list[Weight]
    simple_roots: list[Weight]
    parities: dict[Weight, int]
    multiplicities: dict[Weight, int]
    cartan_gram: list[list[Fraction]]
    # basis {e_alpha^i} of g_alpha and dual {f_alpha^i} of g_-alpha, (e^i, f^j) = delta_ij
    dual_pairs: dict[Weight, tuple[list[GVec], list[GVec]]]
    # h^j with (h_i, h^j) = delta_ij for the Cartan basis elements h_i
    cartan_dual: list[GVec]
    h_alpha: dict[Weight, GVec]
    h_rho: GVec = field(default_factory=dict)

    def root_pairing(self, A: SuperAlgebra, a: Weight, b: Weight) -> Fraction:
        """(alpha, beta) on h*, as (h_alpha, h_beta)."""
        return A.form(self.h_alpha_of(A, a), self.h_alpha_of(A, b))

    def h_alpha_of(self, A: SuperAlgebra, w: Weight) -> GVec:
        if w in self.h_alpha:
            return self.h_alpha[w]
        return _h_of_weight(A, self.cartan_gram, w)

    def root_name(self, A: SuperAlgebra, w: Weight) -> str:
        idxs = self.root_spaces.get(w)
        if A.gl_shape and idxs and len(idxs) == 1:
            lab = A.labels[idxs[0]]
            return "alpha" + lab[1:]
        if idxs:
            return "root<" + ",".join(A.labels[i] for i in idxs) + ">"
        return weight_str(w)


def _h_of_weight(A: SuperAlgebra, gram: list[list[Fraction]], w: Weight) -> GVec:
    # solve sum_k y_k (h_k, h_j) = w(h_j)
    inv = linalg.inverse(gram)
    y = [sum((inv[k][j] * w[j] for j in range(len(w))), Fraction(0)) for k in range(len(w))]
    return _clean({A.cartan[k]: y[k] for k in range(len(w))})


def root_decomposition(A: SuperAlgebra) -> RootDatum:
    """Roots, positive/simple roots, dual pairs, h_alpha and h_rho (cached)."""
    if "roots" in A._cache:
        return A._cache["roots"]
    weights = basis_weights(A)
    groups = _group_by_weight(A, weights)
    zero = tuple(Fraction(0) for _ in A.cartan)
    if sorted(groups.get(zero, [])) != sorted(A.cartan):
        raise UnsupportedBasisError("the zero weight space must coincide with the declared Cartan subalgebra")
    roots = sorted(w for w in groups if w != zero)
    parities = {}
    for w in roots:
        ps = {A.parity[j] for j in groups[w]}
        if len(ps) != 1:
            raise UnsupportedBasisError(f"root space {weight_str(w)} is not homogeneous")
        parities[w] = ps.pop()
    positive = [w for w in roots if is_positive(w)]
    posset = set(positive)
    sums = {tuple(x + y for x, y in zip(a, b)) for a in positive for b in positive}
    simple = [w for w in positive if w not in sums]

    gram = [[A.form_entries.get((a, b), Fraction(0)) for b in A.cartan] for a in A.cartan]
    try:
        inv = linalg.inverse(gram)
    except ZeroDivisionError:
        raise UnsupportedBasisError("form is degenerate on the Cartan subalgebra") from None
    cartan_dual = [
        _clean({A.cartan[k]: inv[k][j] for k in range(len(A.cartan))}) for j in range(len(A.cartan))
    ]

    dual_pairs = {}
    for w in positive:
        es = groups[w]
        neg = tuple(-x for x in w)
        fs = groups.get(neg, [])
        pairing = [[A.form_entries.get((e, f), Fraction(0)) for f in fs] for e in es]
        if len(fs) != len(es):
            raise UnsupportedBasisError(f"root {weight_str(w)} has no matching negative root space")
        try:
            pinv = linalg.inverse(pairing)
        except ZeroDivisionError:
            raise UnsupportedBasisError(f"pairing on root space {weight_str(w)} is singular") from None
        # f^j = sum_k C_jk g_k with P C^T = I, i.e. C^T = P^-1
        e_vecs = [{e: Fraction(1)} for e in es]
        f_vecs = [_clean({fs[k]: pinv[k][j] for k in range(len(fs))}) for j in range(len(es))]
        dual_pairs[w] = (e_vecs, f_vecs)

    h_alpha = {w: _h_of_weight(A, gram, w) for w in roots}
    datum = RootDatum(
        weights=weights,
        roots=roots,
        root_spaces={w: groups[w] for w in roots},
        positive_roots=positive,
        simple_roots=simple,
        parities=parities,
        multiplicities={w: len(groups[w]) for w in roots},
        cartan_gram=gram,
        dual_pairs=dual_pairs,
        cartan_dual=cartan_dual,
        h_alpha=h_alpha,
    )
    datum.h_rho = compute_h_rho(A, datum)
    A._cache["roots"] = datum
    return datum


def compute_h_rho(A: SuperAlgebra, R: RootDatum) -> GVec:
    """h_rho for rho = rho_even - rho_odd (half-sums over positive roots)."""
    terms = []
    for w in R.positive_roots:
        sign = -1 if R.parities[w] else 1
        terms.append((Fraction(sign, 2), R.h_alpha[w]))
    return vec_add(*terms)


def rho_shift_residuals(A: SuperAlgebra, R: RootDatum) -> dict[Weight, Fraction]:
    """2(rho, alpha_i) - (alpha_i, alpha_i) for every simple root."""
    out = {}
    for w in R.simple_roots:
        h = R.h_alpha[w]
        out[w] = 2 * A.form(R.h_rho, h) - A.form(h, h)
    return out


def dual_basis(A: SuperAlgebra, R: RootDatum | None = None):
    R = R or root_decomposition(A)
    return R.dual_pairs, R.cartan_dual


def full_dual_basis(A: SuperAlgebra) -> list[GVec]:
    """y_j with (x_i, y_j) = delta_ij for the whole basis x_i."""
    gram = [[A.form_entries.get((i, j), Fraction(0)) for j in range(A.dim)] for i in range(A.dim)]
    z = linalg.inverse(gram)
    return [_clean({k: z[k][j] for k in range(A.dim)}) for j in range(A.dim)]


# -- dual pairing identity ----------------------------------------------------

def _weight_of_vec(A: SuperAlgebra, v: Mapping[int, Fraction]) -> set[Weight]:
    weights = basis_weights(A)
    return {weights[k] for k, c in v.items() if c}


def check_dual_pairing_identity(
    A: SuperAlgebra,
    R: RootDatum,
    alpha: Weight,
    beta: Weight,
    z: Mapping[int, Fraction],
    a=None,
    b=None,
) -> VerificationReport:
    """sum_i [v_i, z] (x) u_i  vs  (-1)^|z| sum_i y_i (x) [z, x_i].

    Here {x_i} spans g_alpha with dual {y_i} in g_-alpha and {u_i} spans
    g_beta with dual {v_i}.  With Laurent polynomials ``a`` and ``b`` the
    enveloping-algebra form sum [v_i(a), z] u_i(b) is checked as well.
    """
    z = _clean(dict(z))
    if alpha not in R.dual_pairs or beta not in R.dual_pairs:
        raise PreconditionError("alpha and beta must be positive roots")
    target = tuple(y - x for x, y in zip(alpha, beta))
    if z:
        ws = _weight_of_vec(A, z)
        if ws != {target}:
            raise PreconditionError(f"z is not in the root space of beta - alpha = {weight_str(target)}")
    zpar = A.vec_parity(z)
    if zpar is None:
        raise PreconditionError("z must be homogeneous")
    xs, ys = R.dual_pairs[alpha]
    us, vs = R.dual_pairs[beta]
    sign = -1 if zpar else 1

    diff: dict[tuple[int, int], Fraction] = {}

    def acc(left: GVec, right: GVec, c: int) -> None:
        for i, p in left.items():
            for j, q in right.items():
                diff[(i, j)] = diff.get((i, j), Fraction(0)) + c * p * q

    for u, v in zip(us, vs):
        acc(A.bracket(v, z), u, 1)
    for x, y in zip(xs, ys):
        acc(y, A.bracket(z, x), -sign)
    tensor_residual = {f"{A.labels[i]} (x) {A.labels[j]}": c for (i, j), c in sorted(diff.items()) if c}
    residuals: dict[str, Any] = {"tensor": tensor_residual}

    if a is not None and b is not None:
        from .uea import Enveloping

        env = Enveloping.of(A)
        zero_exp = env.loop_vec(z)
        lhs = env.zero()
        for u, v in zip(us, vs):
            lhs = lhs + env.supercommutator(env.loop_vec(v, a), zero_exp) * env.loop_vec(u, b)
        rhs = env.zero()
        for x, y in zip(xs, ys):
            rhs = rhs + env.loop_vec(y, a) * env.supercommutator(zero_exp, env.loop_vec(x, b))
        residuals["enveloping"] = lhs - rhs * sign
    return VerificationReport(
        checked_against=[f"alpha={weight_str(alpha)}", f"beta={weight_str(beta)}", f"z={A.format_vec(z)}"],
        residuals=residuals,
        title="dual pairing identity",
    )


# -- Chevalley automorphism -------------------------------------------------

@dataclass
class Automorphism:
    algebra: SuperAlgebra
    images: list[GVec]  # image of each basis element

    def apply(self, v: Mapping[int, Fraction]) -> GVec:
        return vec_add(*((c, self.images[k]) for k, c in v.items()))

    def matrix(self) -> list[list[Fraction]]:
        """Column k holds the image of basis element k."""
        n = self.algebra.dim
        return [[self.images[k].get(r, Fraction(0)) for k in range(n)] for r in range(n)]

    def power(self, m: int) -> "Automorphism":
        imgs = [self.algebra.basis_vec(k) for k in range(self.algebra.dim)]
        for _ in range(m):
            imgs = [self.apply(v) for v in imgs]
        return Automorphism(self.algebra, imgs)

    def is_identity(self) -> bool:
        return all(img == {k: 1} for k, img in enumerate(self.images))

    def order(self, limit: int = 24) -> int:
        imgs = [self.algebra.basis_vec(k) for k in range(self.algebra.dim)]
        for m in range(1, limit + 1):
            imgs = [self.apply(v) for v in imgs]
            if all(img == {k: 1} for k, img in enumerate(imgs)):
                return m
        raise ValueError("automorphism order exceeds limit")


def chevalley_automorphism(A: SuperAlgebra) -> Automorphism:
    """omega(e_i) = -f_i, omega(f_i) = -(-1)^|alpha_i| e_i, extended by brackets.

    On the Cartan subalgebra omega acts by -1; this is forced by
    omega([e_i, f_i]) = [omega e_i, omega f_i].
    """
    if not A.chevalley:
        raise PreconditionError(f"{A.name} carries no Chevalley generator data")
    pairs: list[tuple[GVec, GVec]] = [({h: Fraction(1)}, {h: Fraction(-1)}) for h in A.cartan]
    gens = []
    for e, f in zip(A.chevalley["e"], A.chevalley["f"]):
        gens.append(({e: Fraction(1)}, {f: Fraction(-1)}))
        gens.append(({f: Fraction(1)}, {e: Fraction(1 if A.parity[e] else -1)}))
    pairs += gens
    spanned = [list(_dense(A, v)) for v, _ in pairs]
    frontier = list(gens)
    while frontier and linalg.rank(spanned) < A.dim:
        nxt = []
        for gv, gw in gens:
            for pv, pw in frontier:
                v, w = A.bracket(gv, pv), A.bracket(gw, pw)
                if not v:
                    continue
                pairs.append((v, w))
                row = _dense(A, v)
                if linalg.rank(spanned + [row]) > linalg.rank(spanned):
                    spanned.append(row)
                    nxt.append((v, w))
        frontier = nxt
    if linalg.rank(spanned) < A.dim:
        raise PreconditionError("Chevalley generators and Cartan do not generate the algebra")
    # choose independent pairs and solve V * Omega = W
    chosen_v, chosen_w = [], []
    for v, w in pairs:
        row = _dense(A, v)
        if linalg.rank(chosen_v + [row]) > len(chosen_v):
            chosen_v.append(row)
            chosen_w.append(_dense(A, w))
        if len(chosen_v) == A.dim:
            break
    omega = linalg.matmul(linalg.inverse(chosen_v), chosen_w)
    images = [_clean({j: omega[k][j] for j in range(A.dim)}) for k in range(A.dim)]
    aut = Automorphism(A, images)
    for v, w in pairs:
        if aut.apply(v) != _clean(w):
            raise PreconditionError(f"generator data is inconsistent at {A.format_vec(v)}")
    for i, j in itertools.product(range(A.dim), repeat=2):
        lhs = aut.apply(A.bracket({i: Fraction(1)}, {j: Fraction(1)}))
        rhs = A.bracket(images[i], images[j])
        if lhs != rhs:
            raise PreconditionError(f"extension is not an automorphism at ({A.labels[i]}, {A.labels[j]})")
    return aut


def _dense(A: SuperAlgebra, v: Mapping[int, Fraction]) -> list[Fraction]:
    return [v.get(k, Fraction(0)) for k in range(A.dim)]
