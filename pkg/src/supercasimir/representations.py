"""Exact-matrix modules, Koszul tensor products and evaluation modules.

Vectors of a tensor product are indexed by tuples of factor basis indices in
lexicographic order.  An odd operator passing an odd tensor factor picks up
a sign, and in an evaluation module the k-th factor additionally sees
``x (x) t^m`` as ``d_k^m x``.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import jsonschema

from . import linalg
from .algebra import SuperAlgebra, Weight, gl_label, is_positive, root_decomposition, weight_str
from .errors import RepresentationError, SchemaError, UnsupportedBasisError
from .exact import LaurentPoly, Scalar, as_fraction, check_points, fraction_str, lagrange_basis
from .linalg import Matrix
from .report import ValidationReport, VerificationReport
from .uea import UEAElement


class Representation:
    """A finite-dimensional module: one exact matrix per basis element of g."""

    def __init__(self, algebra: SuperAlgebra, parity: Sequence[int], actions: Mapping[int, Matrix], name: str = ""):
        self.algebra = algebra
        self.parity = tuple(int(p) for p in parity)
        self.dimension = len(self.parity)
        self.name = name
        self._actions: dict[int, Matrix] = {}
        for i, mat in actions.items():
            if len(mat) != self.dimension or any(len(r) != self.dimension for r in mat):
                raise RepresentationError(f"action of {algebra.labels[i]} is not {self.dimension}x{self.dimension}")
            self._actions[i] = [[Fraction(x) for x in row] for row in mat]

    def __repr__(self) -> str:
        return f"Representation({self.name or '?'}, dim={self.dimension})"

    def matrix(self, i: int) -> Matrix:
        mat = self._actions.get(i)
        return mat if mat is not None else linalg.zeros(self.dimension, self.dimension)

    def action(self, i: int, m: int = 0) -> Matrix:
        if m != 0:
            raise RepresentationError("a plain module has no loop action; wrap it in an EvaluationModule")
        return self.matrix(i)

    def validate(self) -> ValidationReport:
        """Parity compatibility and action([x,y]) = [action x, action y] for all basis pairs."""
        A = self.algebra
        rep = ValidationReport(checks_run=["parity", "bracket_compatibility"])
        for i in range(A.dim):
            mat = self.matrix(i)
            for r, row in enumerate(mat):
                for c, x in enumerate(row):
                    if x and (self.parity[r] - self.parity[c] - A.parity[i]) % 2:
                        rep.add("parity", (i, r, c), f"{A.labels[i]} maps v{c} to v{r} with the wrong parity")
        for i, j in itertools.product(range(A.dim), repeat=2):
            xi, xj = self.matrix(i), self.matrix(j)
            sign = -1 if A.parity[i] and A.parity[j] else 1
            comm = linalg.matadd(linalg.matmul(xi, xj), linalg.matmul(xj, xi), Fraction(-sign))
            target = linalg.zeros(self.dimension, self.dimension)
            for k, c in A.bracket_basis(i, j):
                target = linalg.matadd(target, self.matrix(k), c)
            if comm != target:
                rep.add("bracket_compatibility", (i, j), f"action of [{A.labels[i]},{A.labels[j]}] is not the supercommutator")
        return rep

    def to_dict(self) -> dict:
        actions = {}
        for i in sorted(self._actions):
            trip = [[r, c, fraction_str(x)] for r, row in enumerate(self._actions[i]) for c, x in enumerate(row) if x]
            if trip:
                actions[self.algebra.labels[i]] = trip
        return {
            "dimension": self.dimension,
            "parity": ["odd" if p else "even" for p in self.parity],
            "actions": actions,
        }


REPRESENTATION_SCHEMA = {
    "type": "object",
    "required": ["dimension", "parity", "actions"],
    "properties": {
        "dimension": {"type": "integer", "minimum": 1},
        "parity": {"type": "array", "items": {"enum": ["even", "odd", 0, 1]}},
        "actions": {
            "type": "object",
            "additionalProperties": {
                "type": "array",
                "items": {"type": "array", "minItems": 3, "maxItems": 3, "items": [
                    {"type": "integer", "minimum": 0},
                    {"type": "integer", "minimum": 0},
                    {"type": "string", "pattern": r"^\s*[-+]?\d+(\s*/\s*\d+)?\s*$"},
                ]},
            },
        },
    },
}


def load_representation(document: Mapping | str, algebra: SuperAlgebra, name: str = "") -> Representation:
    """Load a sparse-triplet module document and check bracket compatibility."""
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from None
    try:
        jsonschema.Draft7Validator(REPRESENTATION_SCHEMA).validate(document)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"representation schema violation at {where}: {exc.message}") from None
    dim = document["dimension"]
    if len(document["parity"]) != dim:
        raise SchemaError("parity list length differs from dimension")
    actions = {}
    for label, trip in document["actions"].items():
        try:
            i = algebra.index(label)
        except KeyError as exc:
            raise SchemaError(str(exc.args[0])) from None
        mat = linalg.zeros(dim, dim)
        for r, c, x in trip:
            if r >= dim or c >= dim:
                raise SchemaError(f"entry ({r},{c}) of {label} is outside a {dim}-dimensional module")
            mat[r][c] += Fraction(x.replace(" ", ""))
        actions[i] = mat
    parity = [1 if p in ("odd", 1) else 0 for p in document["parity"]]
    rep = Representation(algebra, parity, actions, name=name)
    report = rep.validate()
    if not report.passed:
        v = report.violations[0]
        raise RepresentationError(f"module fails {v.axiom} at {v.witness}: {v.detail}")
    return rep


def natural_module(A: SuperAlgebra) -> Representation:
    """C^{M|N} with E_ij acting as a matrix unit; v_1..v_M even, the rest odd."""
    if not A.gl_shape:
        raise RepresentationError(f"{A.name} has no natural module (not gl(M,N))")
    M, N = A.gl_shape
    n = M + N
    actions = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            mat = linalg.zeros(n, n)
            mat[i - 1][j - 1] = Fraction(1)
            actions[A.index(gl_label(i, j))] = mat
    return Representation(A, [0] * M + [1] * N, actions, name="natural")


def adjoint_module(A: SuperAlgebra) -> Representation:
    """The adjoint module built from the structure constants."""
    actions = {}
    for i in range(A.dim):
        mat = linalg.zeros(A.dim, A.dim)
        for j in range(A.dim):
            for k, c in A.bracket_basis(i, j):
                mat[k][j] += c
        actions[i] = mat
    return Representation(A, A.parity, actions, name="adjoint")


def _koszul_action(factors: Sequence[Representation], x: int, scalars: Sequence[Fraction]) -> Matrix:
    basis = list(itertools.product(*(range(f.dimension) for f in factors)))
    pos = {b: n for n, b in enumerate(basis)}
    dim = len(basis)
    px = factors[0].algebra.parity[x]
    out = linalg.zeros(dim, dim)
    mats = [f.matrix(x) for f in factors]
    for col, b in enumerate(basis):
        passed = 0
        for k, w in enumerate(b):
            sign = -1 if px and passed % 2 else 1
            s = scalars[k]
            if s:
                mat = mats[k]
                for r in range(factors[k].dimension):
                    v = mat[r][w]
                    if v:
                        target = b[:k] + (r,) + b[k + 1:]
                        out[pos[target]][col] += sign * s * v
            passed += factors[k].parity[w]
    return out


def tensor_product(reps: Sequence[Representation]) -> Representation:
    """Koszul-signed action on V_1 (x) ... (x) V_k."""
    if not reps:
        raise RepresentationError("empty tensor product")
    A = reps[0].algebra
    if any(r.algebra is not A and r.algebra != A for r in reps):
        raise RepresentationError("factors belong to different algebras")
    ones = [Fraction(1)] * len(reps)
    parity = [sum(reps[k].parity[w] for k, w in enumerate(b)) % 2
              for b in itertools.product(*(range(f.dimension) for f in reps))]
    actions = {x: _koszul_action(reps, x, ones) for x in range(A.dim)}
    return Representation(A, parity, actions, name="(x)".join(r.name or "?" for r in reps))


class EvaluationModule:
    """V_1 (x) ... (x) V_n as a loop-algebra module through evaluation at d_1..d_n."""

    def __init__(self, factors: Sequence[Representation], points: Iterable[Scalar]):
        self.factors = list(factors)
        try:
            self.points = check_points(points)
        except (ValueError, TypeError) as exc:
            raise RepresentationError(str(exc)) from None
        if len(self.points) != len(self.factors):
            raise RepresentationError(f"{len(self.factors)} factors need {len(self.factors)} evaluation points, got {len(self.points)}")
        self.algebra = self.factors[0].algebra
        if any(f.algebra is not self.algebra and f.algebra != self.algebra for f in self.factors):
            raise RepresentationError("factors belong to different algebras")
        self.basis = list(itertools.product(*(range(f.dimension) for f in self.factors)))
        self.dimension = len(self.basis)
        self.parity = tuple(sum(self.factors[k].parity[w] for k, w in enumerate(b)) % 2 for b in self.basis)
        self._cache: dict[tuple[int, int], Matrix] = {}

    def __repr__(self) -> str:
        pts = ",".join(fraction_str(d) for d in self.points)
        return f"EvaluationModule({'(x)'.join(f.name or '?' for f in self.factors)} @ {pts})"

    @property
    def lagrange(self) -> list[LaurentPoly]:
        return lagrange_basis(self.points)

    def basis_label(self, n: int) -> str:
        return "(x)".join(f"v{w + 1}" for w in self.basis[n])

    def action(self, x: int, m: int = 0) -> Matrix:
        key = (x, m)
        if key not in self._cache:
            self._cache[key] = _koszul_action(self.factors, x, [d ** m for d in self.points])
        return self._cache[key]

    def poly_action(self, x: int, p: LaurentPoly) -> Matrix:
        """Matrix of x (x) p(t)."""
        out = linalg.zeros(self.dimension, self.dimension)
        for n, c in p.items():
            out = linalg.matadd(out, self.action(x, n), c)
        return out

    def as_representation(self) -> Representation:
        return Representation(self.algebra, self.parity, {x: self.action(x, 0) for x in range(self.algebra.dim)},
                              name="(x)".join(f.name or "?" for f in self.factors))


def evaluation_action(x: int, m: int, module: EvaluationModule) -> Matrix:
    return module.action(x, m)


def act_uea(u: UEAElement, module) -> Matrix:
    """Matrix of an enveloping-algebra element: words act as products of letter matrices."""
    dim = module.dimension
    out = linalg.zeros(dim, dim)
    for word, c in u.terms.items():
        mat = None
        for i, n in word:
            letter = module.action(i, n)
            mat = letter if mat is None else linalg.matmul(mat, letter)
        if mat is None:
            mat = linalg.identity(dim)
        out = linalg.matadd(out, mat, c)
    return out


# -- weights and highest weight vectors ----------------------------------------

def weight_spaces(module) -> dict[Weight, list[int]]:
    """Partition of the basis by joint Cartan eigenvalue, weights sorted."""
    A = module.algebra
    mats = [module.action(h, 0) for h in A.cartan]
    spaces: dict[Weight, list[int]] = {}
    for n in range(module.dimension):
        for mat in mats:
            if any(mat[r][n] for r in range(module.dimension) if r != n):
                raise UnsupportedBasisError("Cartan subalgebra does not act diagonally on the module basis")
        w = tuple(mat[n][n] for mat in mats)
        spaces.setdefault(w, []).append(n)
    return dict(sorted(spaces.items()))


def _positive_generators(A: SuperAlgebra, even_only: bool = False) -> list[int]:
    R = root_decomposition(A)
    out = []
    for w in R.positive_roots:
        if even_only and R.parities[w]:
            continue
        out.extend(R.root_spaces[w])
    return sorted(out)


def _kernel_in_space(module, idxs: list[int], gens: list[int]) -> list[list[Fraction]]:
    dim = module.dimension
    rows = []
    for x in gens:
        mat = module.action(x, 0)
        for r in range(dim):
            row = [mat[r][c] for c in idxs]
            if any(row):
                rows.append(row)
    local = linalg.nullspace(rows, len(idxs)) if rows else [
        [Fraction(int(a == b)) for b in range(len(idxs))] for a in range(len(idxs))]
    full = []
    for v in local:
        vec = [Fraction(0)] * dim
        for c, x in zip(idxs, v):
            vec[c] = x
        full.append(vec)
    reduced, _ = linalg.rref(full) if full else ([], [])
    return reduced


def find_hwv(module, mu: Sequence[Scalar]) -> list[list[Fraction]]:
    """Basis (reduced row echelon form) of weight-mu vectors killed by every positive root vector."""
    mu = tuple(as_fraction(x) for x in mu)
    spaces = weight_spaces(module)
    if mu not in spaces:
        return []
    return _kernel_in_space(module, spaces[mu], _positive_generators(module.algebra))


def all_hwv(module) -> dict[Weight, list[list[Fraction]]]:
    gens = _positive_generators(module.algebra)
    out = {}
    for mu, idxs in weight_spaces(module).items():
        basis = _kernel_in_space(module, idxs, gens)
        if basis:
            out[mu] = basis
    return out


def restrict(op: Matrix, basis: list[list[Fraction]]) -> tuple[list[list[Fraction]] | None, list[list[Fraction]]]:
    """Matrix of op on span(basis) in basis coordinates, plus images that leave the span."""
    cols, escaping = [], []
    for v in basis:
        img = linalg.matvec(op, v)
        coords = linalg.solve_in_basis(basis, img)
        if coords is None:
            escaping.append(img)
        else:
            cols.append(coords)
    if escaping:
        return None, escaping
    return linalg.transpose(cols) if cols else [], []


def check_operator_stability(op: Matrix, module, title: str = "highest-weight stability") -> VerificationReport:
    """Does op map every nonzero V_mu^+ into itself?  Escaping images are the residuals."""
    residuals, info = {}, {}
    hw = all_hwv(module)
    for mu, basis in hw.items():
        restricted, escaping = restrict(op, basis)
        residuals[weight_str(mu)] = escaping
        if restricted is not None:
            info[weight_str(mu)] = {"basis": basis, "operator": restricted}
    return VerificationReport([weight_str(mu) for mu in hw], residuals, informational=info, title=title)


def gelfand_operator(module: EvaluationModule, k: int, tuple_: Sequence[int]) -> Matrix:
    """act(T_k(p_{j1}, ..., p_{jk})) with 1-based indices into the evaluation points."""
    from .invariants import build_gelfand

    if len(tuple_) != k:
        raise RepresentationError(f"tuple {tuple(tuple_)} must have length k={k}")
    ps = module.lagrange
    if any(not 1 <= j <= len(ps) for j in tuple_):
        raise RepresentationError(f"tuple entries must lie in 1..{len(ps)}")
    return act_uea(build_gelfand(module.algebra, k, [ps[j - 1] for j in tuple_]), module)


def check_hwv_stability(k: int, tuple_: Sequence[int], module: EvaluationModule) -> VerificationReport:
    op = gelfand_operator(module, k, tuple_)
    rep = check_operator_stability(op, module)
    rep.title = f"T_{k}{tuple(tuple_)} preserves highest weight vectors"
    return rep


def _matrix_diff(a: Matrix, b: Matrix) -> dict[str, Fraction]:
    return {f"({r},{c})": x - y for r, (ra, rb) in enumerate(zip(a, b))
            for c, (x, y) in enumerate(zip(ra, rb)) if x != y}


def check_gelfand_sum(k: int, module: EvaluationModule) -> VerificationReport:
    """act(T_k) against the sum of act(T_k(j_1..j_k)) over all tuples."""
    from .invariants import build_gelfand

    total = act_uea(build_gelfand(module.algebra, k), module)
    acc = linalg.zeros(module.dimension, module.dimension)
    tuples = list(itertools.product(range(1, len(module.points) + 1), repeat=k))
    for tup in tuples:
        acc = linalg.matadd(acc, gelfand_operator(module, k, tup))
    return VerificationReport(
        [f"T_{k}"], {f"T_{k}": _matrix_diff(total, acc)},
        informational={"tuples": [list(t) for t in tuples]},
        title=f"T_{k} equals the sum of its Lagrange components",
    )


def find_even_hwv(module, ks: Sequence[int] = (1, 2)) -> dict[Weight, dict]:
    """Highest weight vectors for the even subalgebra, with S_k restricted to each space."""
    from .invariants import build_even_gelfand

    A = module.algebra
    gens = _positive_generators(A, even_only=True)
    s_mats = {}
    if A.gl_shape:
        s_mats = {k: act_uea(build_even_gelfand(A, k), module) for k in ks}
    out = {}
    for mu, idxs in weight_spaces(module).items():
        basis = _kernel_in_space(module, idxs, gens)
        if not basis:
            continue
        entry: dict = {"basis": basis, "S": {}}
        for k, mat in s_mats.items():
            restricted, escaping = restrict(mat, basis)
            entry["S"][k] = restricted if restricted is not None else {"escaping": escaping}
        out[mu] = entry
    return out
