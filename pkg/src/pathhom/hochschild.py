"""Hochschild homology of pointed submodules of finite-dimensional algebras.

An algebra is given by structure constants on a basis whose first vector is
the unit.  The normalised Hochschild complex has ``N_n = M ⊗ (Λ/K)^{⊗n}``;
its basis is ``M``'s basis times words in the non-unit algebra basis.  A
pointed submodule ``V ∋ 1`` picks out ``M ⊗ V̄^{⊗n}`` and the graded-pair
machinery returns the largest subcomplex inside it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product as iproduct
from typing import Sequence

from .errors import (
    InvariantBreach,
    NotAssociative,
    NotMutuallyInverse,
    NotUnital,
    ParseError,
    UnitMissing,
    ValidationError,
)
from .exactalg import Echelon, ExactMatrix, Ring, echelon_rows, kernel_rows
from .gradedpairs import BoundedComplex, GradedPair, omega, tensor_complex
from .picomb import enumerate_shuffles

# structure constants: table[(i, j)] = {k: coeff}


def _acc(out: dict, key, value) -> None:
    v = out.get(key, 0) + value
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def _combine(u: dict, v: dict, table: dict, ring: Ring) -> dict:
    """Bilinear extension of a structure-constant table to sparse vectors."""
    out: dict = {}
    for i, a in u.items():
        for j, b in v.items():
            for k, c in table.get((i, j), {}).items():
                _acc(out, k, ring(a * b * c))
    return {k: ring(v) for k, v in out.items() if ring(v)}


@dataclass
class AlgebraPresentation:
    """A finite-dimensional associative unital algebra.

    ``mult[(i, j)]`` is the sparse product ``b_i · b_j``.  After validation
    the first basis vector is the unit; if the input unit is some other
    vector, the basis is changed so that it comes first.
    """

    labels: list[str]
    mult: dict
    ring: Ring

    def __post_init__(self):
        d = len(self.labels)
        if d < 1:
            raise ValidationError("an algebra needs at least one basis vector")
        self.mult = {k: {c: self.ring(x) for c, x in v.items() if self.ring(x)} for k, v in self.mult.items()}
        for (i, j), v in self.mult.items():
            if not (0 <= i < d and 0 <= j < d) or any(not 0 <= k < d for k in v):
                raise ValidationError(f"structure constant index out of range at {(i, j)}")
        for i, j, k in iproduct(range(d), repeat=3):
            left = _combine(self.product_basis(i, j), {k: 1}, self.mult, self.ring)
            right = _combine({i: 1}, self.product_basis(j, k), self.mult, self.ring)
            if left != right:
                raise NotAssociative(f"({self.labels[i]}·{self.labels[j]})·{self.labels[k]} differs "
                                     f"from {self.labels[i]}·({self.labels[j]}·{self.labels[k]})")
        unit = self._find_unit()
        if unit != {0: 1}:
            self._move_unit_first(unit)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def product_basis(self, i: int, j: int) -> dict:
        return self.mult.get((i, j), {})

    def multiply(self, u: dict, v: dict) -> dict:
        return _combine(u, v, self.mult, self.ring)

    def _find_unit(self) -> dict:
        """Solve ``u·b_j = b_j = b_j·u`` for all ``j`` as a linear system in ``u``."""
        d, ring = self.dim, self.ring
        rows = []
        for j in range(d):
            for side in (0, 1):
                for k in range(d):
                    coeffs = []
                    for i in range(d):
                        t = self.product_basis(i, j) if side == 0 else self.product_basis(j, i)
                        coeffs.append(t.get(k, 0))
                    rows.append(coeffs + [ring(-int(k == j))])
        ker = kernel_rows(rows, ring, d + 1)
        for v in ker:
            if v[d]:
                try:
                    scale = ring.div(ring(1), v[d])
                except ArithmeticError:
                    continue
                u = {i: ring(scale * v[i]) for i in range(d) if ring(scale * v[i])}
                return u
        raise NotUnital("the algebra has no two-sided unit")

    def _move_unit_first(self, unit: dict) -> None:
        """Replace the pivot basis vector of ``unit`` with ``unit`` and move it to the front."""
        ring = self.ring
        p = min(unit)
        d = self.dim
        order = [p] + [i for i in range(d) if i != p]
        # new basis: c_0 = unit, c_t = b_{order[t]} for t >= 1
        def to_new(vec: dict) -> dict:
            out: dict = {}
            coef_p = vec.get(p, 0)
            if coef_p:
                f = ring.div(coef_p, unit[p])
                _acc(out, 0, f)
                for i, c in unit.items():
                    if i != p:
                        _acc(out, order.index(i), ring(-f * c))
            for i, c in vec.items():
                if i != p:
                    _acc(out, order.index(i), c)
            return {k: ring(v) for k, v in out.items() if ring(v)}

        def from_new(t: int) -> dict:
            return dict(unit) if t == 0 else {order[t]: 1}

        mult = {}
        for s, t in iproduct(range(d), repeat=2):
            prod = to_new(self.multiply(from_new(s), from_new(t)))
            if prod:
                mult[(s, t)] = prod
        label_u = "+".join(f"{c}*{self.labels[i]}" if c != 1 else self.labels[i] for i, c in sorted(unit.items()))
        self.labels = [label_u] + [self.labels[i] for i in order[1:]]
        self.mult = mult
        self.change_of_basis = to_new

    def to_new_basis(self, vec: dict) -> dict:
        f = getattr(self, "change_of_basis", None)
        return vec if f is None else f(vec)

    @classmethod
    def from_json(cls, data: dict, ring: Ring) -> "AlgebraPresentation":
        labels, mult = _parse_basis_and_table(data, "mult")
        return cls(labels, mult, ring)

    def tensor(self, other: "AlgebraPresentation") -> "AlgebraPresentation":
        d2 = other.dim
        mult = {}
        for (i, j), u in self.mult.items():
            for (i2, j2), v in other.mult.items():
                out = {}
                for k, a in u.items():
                    for k2, b in v.items():
                        _acc(out, k * d2 + k2, self.ring(a * b))
                if out:
                    mult[(i * d2 + i2, j * d2 + j2)] = out
        labels = [f"{a}⊗{b}" for a in self.labels for b in other.labels]
        return AlgebraPresentation(labels, mult, self.ring)


def _parse_basis_and_table(data: dict, key: str) -> tuple[list[str], dict]:
    if "basis" not in data or key not in data:
        raise ParseError(f"algebra JSON needs 'basis' and '{key}'")
    labels = [str(b) for b in data["basis"]]
    table: dict = {}
    for entry in data[key]:
        if len(entry) != 4:
            raise ParseError(f"'{key}' entries are [i, j, k, coeff], got {entry!r}")
        i, j, k, c = entry
        idx = [_basis_index(x, labels) for x in (i, j, k)]
        table.setdefault((idx[0], idx[1]), {})
        _acc(table[(idx[0], idx[1])], idx[2], _number(c))
    return labels, table


def _basis_index(x, labels: Sequence[str]) -> int:
    if isinstance(x, int) and 0 <= x < len(labels):
        return x
    if isinstance(x, str) and x in labels:
        return labels.index(x)
    raise ParseError(f"unknown basis element {x!r}")


def _number(c):
    from fractions import Fraction

    if isinstance(c, (int, float)) and float(c).is_integer():
        return int(c)
    if isinstance(c, str):
        return Fraction(c)
    raise ParseError(f"structure constants must be integers or fraction strings, got {c!r}")


@dataclass
class BimodulePresentation:
    """A bimodule over an algebra: ``left[(i, s)] = b_i·e_s``, ``right[(s, i)] = e_s·b_i``."""

    algebra: AlgebraPresentation
    labels: list[str]
    left: dict
    right: dict

    def __post_init__(self):
        A, ring = self.algebra, self.algebra.ring
        m, d = self.dim, A.dim
        self.left = {k: {c: ring(x) for c, x in v.items() if ring(x)} for k, v in self.left.items()}
        self.right = {k: {c: ring(x) for c, x in v.items() if ring(x)} for k, v in self.right.items()}
        for s in range(m):
            e = {s: 1}
            if self.act_left({0: 1}, e) != e or self.act_right(e, {0: 1}) != e:
                raise NotUnital(f"the unit does not act trivially on {self.labels[s]}")
            for i, j in iproduct(range(d), repeat=2):
                bi, bj = {i: 1}, {j: 1}
                if self.act_left(A.multiply(bi, bj), e) != self.act_left(bi, self.act_left(bj, e)):
                    raise NotAssociative(f"left action is not associative at ({i}, {j}, {s})")
                if self.act_right(e, A.multiply(bi, bj)) != self.act_right(self.act_right(e, bi), bj):
                    raise NotAssociative(f"right action is not associative at ({s}, {i}, {j})")
                if self.act_right(self.act_left(bi, e), bj) != self.act_left(bi, self.act_right(e, bj)):
                    raise NotAssociative(f"left and right actions do not commute at ({i}, {s}, {j})")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def act_left(self, a: dict, x: dict) -> dict:
        return _combine(a, x, self.left, self.algebra.ring)

    def act_right(self, x: dict, a: dict) -> dict:
        return _combine(x, a, self.right, self.algebra.ring)

    @classmethod
    def regular(cls, A: AlgebraPresentation) -> "BimodulePresentation":
        return cls(A, list(A.labels), dict(A.mult), dict(A.mult))

    @classmethod
    def from_json(cls, A: AlgebraPresentation, data: dict) -> "BimodulePresentation":
        if "basis" not in data or "left" not in data or "right" not in data:
            raise ParseError("bimodule JSON needs 'basis', 'left' and 'right'")
        labels = [str(b) for b in data["basis"]]
        left: dict = {}
        for entry in data["left"]:
            i, s, t, c = entry
            i = A.labels.index(i) if isinstance(i, str) else i
            s, t = _basis_index(s, labels), _basis_index(t, labels)
            _acc(left.setdefault((i, s), {}), t, _number(c))
        right: dict = {}
        for entry in data["right"]:
            s, i, t, c = entry
            i = A.labels.index(i) if isinstance(i, str) else i
            s, t = _basis_index(s, labels), _basis_index(t, labels)
            _acc(right.setdefault((s, i), {}), t, _number(c))
        return cls(A, labels, left, right)

    def tensor(self, other: "BimodulePresentation", algebra: AlgebraPresentation) -> "BimodulePresentation":
        d2, m2 = other.algebra.dim, other.dim
        ring = algebra.ring

        def tens(t1: dict, t2: dict, first_is_algebra: bool) -> dict:
            out = {}
            for (a, b), u in t1.items():
                for (a2, b2), v in t2.items():
                    if first_is_algebra:
                        key = (a * d2 + a2, b * m2 + b2)
                    else:
                        key = (a * m2 + a2, b * d2 + b2)
                    entry = {}
                    for k, x in u.items():
                        for k2, y in v.items():
                            _acc(entry, k * m2 + k2, ring(x * y))
                    if entry:
                        out[key] = entry
            return out

        labels = [f"{a}⊗{b}" for a in self.labels for b in other.labels]
        return BimodulePresentation(algebra, labels, tens(self.left, other.left, True),
                                    tens(self.right, other.right, False))


@dataclass
class PointedSubmodule:
    """A subspace ``V ⊆ Λ`` containing the unit, given by spanning vectors."""

    algebra: AlgebraPresentation
    vectors: list[dict]

    def __post_init__(self):
        A, ring = self.algebra, self.algebra.ring
        vecs = [A.to_new_basis({i: ring(c) for i, c in v.items() if ring(c)}) for v in self.vectors]
        dense = [[v.get(i, 0) for i in range(A.dim)] for v in vecs if v]
        r = len(echelon_rows(dense, ring, A.dim)[0]) if dense else 0
        r1 = len(echelon_rows(dense + [[1] + [0] * (A.dim - 1)], ring, A.dim)[0])
        if r1 != r:
            raise UnitMissing("a pointed submodule must contain the unit")
        self.vectors = vecs
        bar = [[v.get(i, 0) for i in range(1, A.dim)] for v in vecs]
        self.reduced = echelon_rows(bar, ring, A.dim - 1)[0] if A.dim > 1 else []

    @classmethod
    def whole(cls, A: AlgebraPresentation) -> "PointedSubmodule":
        return cls(A, [{i: 1} for i in range(A.dim)])

    @classmethod
    def unit_only(cls, A: AlgebraPresentation) -> "PointedSubmodule":
        return cls(A, [{0: 1}])


# ---------------------------------------------------------------------------
# the normalised complex


class NormalisedComplex:
    """Index bookkeeping for ``N_n = M ⊗ (Λ/K)^{⊗n}``.

    A basis tensor is ``(s, (λ_1, ..., λ_n))`` with ``s`` a bimodule index
    and ``λ_t ∈ {1, ..., d-1}``.
    """

    def __init__(self, A: AlgebraPresentation, M: BimodulePresentation):
        self.A, self.M = A, M
        self.bar = A.dim - 1

    def dim(self, n: int) -> int:
        return self.M.dim * self.bar ** n

    def index(self, s: int, word: Sequence[int]) -> int:
        idx = s
        for lam in word:
            idx = idx * self.bar + (lam - 1)
        return idx

    def key(self, n: int, idx: int) -> tuple[int, tuple[int, ...]]:
        word = []
        for _ in range(n):
            idx, r = divmod(idx, self.bar)
            word.append(r + 1)
        return idx, tuple(reversed(word))

    def face(self, i: int, s: int, word: tuple) -> dict:
        """``d_i`` of a basis tensor, as a sparse dict of ``(s, word)`` keys (units allowed)."""
        A, M = self.A, self.M
        n = len(word)
        out: dict = {}
        if i == 0:
            for t, c in M.act_right({s: 1}, {word[0]: 1}).items():
                _acc(out, (t, word[1:]), c)
        elif i == n:
            for t, c in M.act_left({word[-1]: 1}, {s: 1}).items():
                _acc(out, (t, word[:-1]), c)
        else:
            for k, c in A.product_basis(word[i - 1], word[i]).items():
                _acc(out, (s, word[: i - 1] + (k,) + word[i + 1:]), c)
        return out

    def boundary_matrix(self, n: int) -> ExactMatrix:
        ring = self.A.ring
        cols = []
        for idx in range(self.dim(n)):
            s, word = self.key(n, idx)
            col: dict = {}
            for i in range(n + 1):
                sign = -1 if i % 2 else 1
                for (t, w), c in self.face(i, s, word).items():
                    if 0 not in w:
                        _acc(col, self.index(t, w), ring(sign * c))
            cols.append(col)
        return ExactMatrix.from_sparse_columns(cols, ring, self.dim(n - 1))

    def complex(self, n_max: int) -> BoundedComplex:
        ring = self.A.ring
        dims = [self.dim(n) for n in range(n_max + 1)]
        bounds = {n: self.boundary_matrix(n) for n in range(1, n_max + 1)}
        cx = BoundedComplex(ring, n_max, dims, bounds)
        cx.check_d2()
        return cx


def hochschild_pair(A: AlgebraPresentation, V: PointedSubmodule, M: BimodulePresentation, ring: Ring,
                    n_max: int) -> GradedPair:
    """The pair ``(N A(Λ, M), M ⊗ V̄^{⊗n})`` truncated at ``n_max``."""
    ring.require_field("Hochschild pairs")
    if A.ring != ring or V.algebra is not A or M.algebra is not A:
        raise ValidationError("algebra, submodule and bimodule must share the algebra and the field")
    N = NormalisedComplex(A, M)
    cx = N.complex(n_max)
    subs = []
    for n in range(n_max + 1):
        cols = []
        for s in range(M.dim):
            for vs in iproduct(V.reduced, repeat=n):
                col: dict = {}
                for word in iproduct(range(1, A.dim), repeat=n):
                    c = 1
                    for v, lam in zip(vs, word):
                        c *= v[lam - 1]
                        if not c:
                            break
                    if c:
                        col[N.index(s, word)] = ring(c)
                cols.append(col)
        subs.append(ExactMatrix.from_sparse_columns(cols, ring, N.dim(n)))
    pair = GradedPair(cx, subs)
    pair.normalised = N
    return pair


def hochschild_homology(pair: GradedPair) -> list[int]:
    return omega(pair).betti()


# ---------------------------------------------------------------------------
# Eilenberg-Zilber for algebras


@dataclass
class HochschildEZReport:
    dims: list[int]
    tensor_dims: list[int]
    betti: list[int]
    tensor_betti: list[int]


def tensor_data(A: AlgebraPresentation, V: PointedSubmodule, M: BimodulePresentation,
                A2: AlgebraPresentation, V2: PointedSubmodule, M2: BimodulePresentation):
    """``(Λ⊗Λ', V⊗K + K⊗V', M⊗M')``."""
    AT = A.tensor(A2)
    MT = M.tensor(M2, AT)
    d2 = A2.dim
    vecs = []
    for v in V.vectors:
        vecs.append({i * d2: c for i, c in v.items()})
    for v in V2.vectors:
        vecs.append({j: c for j, c in v.items()})
    return AT, PointedSubmodule(AT, vecs), MT


def _ez_word(x: tuple, y: tuple, d2: int) -> list[tuple[tuple, int]]:
    """Signed shuffles of algebra words into the tensor algebra (unit index 0)."""
    k, l = len(x), len(y)
    out = []
    for sh, sign in enumerate_shuffles(l, k):
        nu = set(sh.nu)
        i = j = 0
        word = []
        for pos in range(k + l):
            if pos in nu:
                word.append(x[i] * d2)
                i += 1
            else:
                word.append(y[j])
                j += 1
        out.append((tuple(word), sign))
    return out


def _front(M: BimodulePresentation, s_vec: dict, word: tuple, k: int) -> dict:
    """Apply the last faces until ``k`` letters remain: ``(λ_{k+1}⋯λ_n)·m ⊗ λ_1..λ_k``."""
    vec = dict(s_vec)
    for lam in reversed(word[k:]):
        vec = M.act_left({lam: 1}, vec)
    return {(s, word[:k]): c for s, c in vec.items()}


def _back(M: BimodulePresentation, s_vec: dict, word: tuple, k: int) -> dict:
    """Apply the first face ``k`` times: ``m·λ_1⋯λ_k ⊗ λ_{k+1}..λ_n``."""
    vec = dict(s_vec)
    for lam in word[:k]:
        vec = M.act_right(vec, {lam: 1})
    return {(s, word[k:]): c for s, c in vec.items()}


def hochschild_ez_check(data: tuple, data2: tuple, ring: Ring, n_max: int) -> HochschildEZReport:
    """Shuffle and Alexander-Whitney maps between ``Ω ⊗ Ω'`` and the tensor pair, checked inverse.

    ``data`` and ``data2`` are ``(algebra, submodule, bimodule)`` triples.
    """
    A, V, M = data
    A2, V2, M2 = data2
    p1 = hochschild_pair(A, V, M, ring, n_max)
    p2 = hochschild_pair(A2, V2, M2, ring, n_max)
    AT, VT, MT = tensor_data(A, V, M, A2, V2, M2)
    pT = hochschild_pair(AT, VT, MT, ring, n_max)
    O1, O2, OT = omega(p1), omega(p2), omega(pT)
    T, index = tensor_complex(O1, O2)
    N1, N2, NT = p1.normalised, p2.normalised, pT.normalised
    d2, m2 = A2.dim, M2.dim

    def echelon_of(O: BoundedComplex, n: int) -> Echelon:
        return Echelon([{i: x for i, x in enumerate(col) if x} for col in O.embedding[n].columns()], ring)

    E1 = [echelon_of(O1, n) for n in range(n_max + 1)]
    E2 = [echelon_of(O2, n) for n in range(n_max + 1)]
    ET = [echelon_of(OT, n) for n in range(n_max + 1)]

    eps, alp = [], []
    for n in range(n_max + 1):
        pos = {t: q for q, t in enumerate(index[n])}
        cols = []
        for (k, a, b) in index[n]:
            x = {i: c for i, c in enumerate(O1.embedding[k].column(a)) if c}
            y = {j: c for j, c in enumerate(O2.embedding[n - k].column(b)) if c}
            chain: dict = {}
            for i, c in x.items():
                s, wx = N1.key(k, i)
                for j, c2 in y.items():
                    s2, wy = N2.key(n - k, j)
                    for w, sign in _ez_word(wx, wy, d2):
                        _acc(chain, NT.index(s * m2 + s2, w), ring(sign * c * c2))
            coords = ET[n].coordinates(chain)
            if coords is None:
                raise NotMutuallyInverse(f"shuffle image leaves Ω in degree {n}")
            cols.append(coords)
        eps.append(ExactMatrix.from_sparse_columns(cols, ring, OT.dims[n]))
        cols = []
        for b in range(OT.dims[n]):
            z = {i: c for i, c in enumerate(OT.embedding[n].column(b)) if c}
            col: dict = {}
            for k in range(n + 1):
                split: dict = {}
                for idx, c in z.items():
                    s, w = NT.key(n, idx)
                    s1, s2 = divmod(s, m2)
                    w1 = tuple(a // d2 for a in w)
                    w2 = tuple(a % d2 for a in w)
                    for (t1, u1), f1 in _front(M, {s1: 1}, w1, k).items():
                        if 0 in u1:
                            continue
                        for (t2, u2), f2 in _back(M2, {s2: 1}, w2, k).items():
                            if 0 in u2:
                                continue
                            _acc(split, (N1.index(t1, u1), N2.index(t2, u2)), ring(c * f1 * f2))
                coords = _solve_split(E1[k], E2[n - k], split)
                if coords is None:
                    raise NotMutuallyInverse(f"Alexander-Whitney image leaves Ω ⊗ Ω' in degree {n}")
                for (a, bb), v in coords.items():
                    _acc(col, pos[(k, a, bb)], v)
            cols.append(col)
        alp.append(ExactMatrix.from_sparse_columns(cols, ring, T.dims[n]))
    for n in range(n_max + 1):
        if (alp[n] @ eps[n] != ExactMatrix.identity(ring, T.dims[n])
                or eps[n] @ alp[n] != ExactMatrix.identity(ring, OT.dims[n])):
            raise NotMutuallyInverse(f"shuffle and Alexander-Whitney maps are not inverse in degree {n}")
        if n >= 1 and OT.boundaries[n] @ eps[n] != eps[n - 1] @ T.boundaries[n]:
            raise InvariantBreach(f"the shuffle map is not a chain map in degree {n}")
    prod = [sum(O1.dims[i] * O2.dims[n - i] for i in range(n + 1)) for n in range(n_max + 1)]
    if prod != OT.dims:
        raise InvariantBreach(f"dimension product law fails: {OT.dims} vs {prod}")
    return HochschildEZReport(OT.dims, T.dims, OT.betti(), T.betti())


def _solve_split(E1: Echelon, E2: Echelon, chain: dict) -> dict | None:
    by_second: dict = {}
    for (i, j), c in chain.items():
        by_second.setdefault(j, {})[i] = c
    partial: dict = {}
    for j, col in by_second.items():
        c = E1.coordinates(col)
        if c is None:
            return None
        for a, x in c.items():
            partial.setdefault(a, {})[j] = x
    out = {}
    for a, row in partial.items():
        c = E2.coordinates(row)
        if c is None:
            return None
        for b, x in c.items():
            out[(a, b)] = x
    return out


def load_algebra(text: str, ring: Ring, source: str = "<algebra>"):
    """Parse the algebra JSON format; returns ``(algebra, bimodule)`` (regular if absent)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, line=e.lineno, column=e.colno, source=source) from None
    A = AlgebraPresentation.from_json(data, ring)
    if "bimodule" in data:
        if getattr(A, "change_of_basis", None) is not None:
            raise ValidationError("bimodule data requires the unit to be the first basis vector")
        M = BimodulePresentation.from_json(A, data["bimodule"])
    else:
        M = BimodulePresentation.regular(A)
    return A, M
