"""The nerve engine for quivers embedded in a category.

A quiver ``Q`` sits inside an ambient (possibly linear) category that is
known only through a *composition oracle*.  The Moore complex of the nerve is
spanned by non-degenerate composable tuples; ``Ω`` is the largest subcomplex
inside the span of tuples of ``Q``-arrows.  Only the ``Q``-tuples and their
one-composition faces are ever built, never the full ambient nerve.

Conventions
-----------
Tuples are read left to right: ``(γ1, ..., γn)`` with ``head(γi) = tail(γi+1)``.
The interior face ``d̃_i`` replaces ``(γi, γi+1)`` by ``oracle.compose(γi, γi+1)``
("first, then second").  The exterior faces drop the first or last entry and
are multiplied by ``oracle.exterior_scale``.  Faces whose new entry is an
identity vanish (Moore normalisation).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import product as iproduct
from typing import Callable, Hashable, Protocol, Sequence

from .errors import (
    InfiniteAmbient,
    InvariantBreach,
    NonComposable,
    NotMutuallyInverse,
    NotNatural,
    RingMismatch,
    UnequalInducedMaps,
    UnsupportedCombination,
    ValidationError,
)
from .exactalg import Echelon, ExactMatrix, HomologyGroup, Ring, kernel_rows
from .gradedpairs import BoundedComplex, GradedPair, maps_agree_on_homology, psi
from .tokens import Identity, label_str, sort_key, sorted_tokens


class Kind(Enum):
    IDENTITY = "identity"
    IN_Q = "in_q"
    OTHER = "other"


# ---------------------------------------------------------------------------
# quivers


@dataclass
class Quiver:
    """A finite quiver; stored arrows are the non-degenerate ones.

    ``arrows`` maps a label to ``(tail, head)``.  Degenerate loops are
    implicit and represented, when needed, by :class:`Identity` tokens.
    """

    vertices: list
    arrows: dict

    def __post_init__(self):
        verts = sorted_tokens(dict.fromkeys(self.vertices))
        if len(verts) != len(self.vertices):
            raise ValidationError("duplicate vertex labels")
        self.vertices = verts
        vset = set(verts)
        for label, (t, h) in self.arrows.items():
            if isinstance(label, Identity):
                raise ValidationError("degenerate loops are implicit and cannot be stored")
            if t not in vset or h not in vset:
                raise ValidationError(f"arrow {label_str(label)} has an endpoint outside the vertex set")
        self.arrows = {a: self.arrows[a] for a in sorted_tokens(self.arrows)}

    def tail(self, arrow) -> Hashable:
        if isinstance(arrow, Identity):
            return arrow.vertex
        return self.arrows[arrow][0]

    def head(self, arrow) -> Hashable:
        if isinstance(arrow, Identity):
            return arrow.vertex
        return self.arrows[arrow][1]

    def out_arrows(self) -> dict:
        out: dict = {v: [] for v in self.vertices}
        for a, (t, _) in self.arrows.items():
            out[t].append(a)
        return out

    def power(self) -> int:
        counts: dict = {}
        for t, h in self.arrows.values():
            counts[(t, h)] = counts.get((t, h), 0) + 1
        return max(counts.values(), default=0)

    def hom(self, v, u) -> list:
        return [a for a, (t, h) in self.arrows.items() if t == v and h == u]


def moore_basis(Q: Quiver, n: int) -> list[tuple]:
    """Composable tuples of ``n`` non-degenerate arrows (vertices when ``n = 0``).

    Ordered lexicographically by arrow labels.
    """
    if n < 0:
        raise ValidationError("degree must be nonnegative")
    if n == 0:
        return list(Q.vertices)
    outs = Q.out_arrows()
    layer = [(a,) for a in Q.arrows]
    for _ in range(n - 1):
        layer = [t + (b,) for t in layer for b in outs[Q.head(t[-1])]]
    return sorted(layer, key=sort_key)


# ---------------------------------------------------------------------------
# composition oracles


class CompositionOracle(Protocol):
    exterior_scale: int

    def compose(self, first, second) -> dict: ...

    def classify(self, token) -> Kind: ...

    def tail(self, token) -> Hashable: ...

    def head(self, token) -> Hashable: ...


@dataclass(frozen=True)
class Formal:
    """A fresh formal morphism ``tag`` from ``tail`` to ``head``."""

    tag: str
    tail: Hashable
    head: Hashable
    extra: Hashable = None

    def sort_key(self):
        return (self.tag, sort_key(self.tail), sort_key(self.head), sort_key(self.extra))

    def __repr__(self) -> str:
        suffix = "" if self.extra is None else f",{label_str(self.extra)}"
        return f"{self.tag}[{label_str(self.tail)},{label_str(self.head)}{suffix}]"


class _QuiverOracle:
    """Shared endpoint bookkeeping for oracles built on a quiver."""

    exterior_scale = 1
    ideal_shortcut = False

    def __init__(self, Q: Quiver):
        self.Q = Q

    def tail(self, token):
        if isinstance(token, Identity):
            return token.vertex
        if isinstance(token, Formal):
            return token.tail
        return self.Q.arrows[token][0]

    def head(self, token):
        if isinstance(token, Identity):
            return token.vertex
        if isinstance(token, Formal):
            return token.head
        return self.Q.arrows[token][1]

    def classify(self, token) -> Kind:
        if isinstance(token, Identity):
            return Kind.IDENTITY
        if token in self.Q.arrows:
            return Kind.IN_Q
        return Kind.OTHER

    def ambient_arrows(self) -> list:
        raise InfiniteAmbient(f"{type(self).__name__} does not enumerate its ambient category")


class SquareCommutativeOracle(_QuiverOracle):
    """The category where every two-fold composite ``v -> u`` is one fresh arrow ``z[v,u]``."""

    ideal_shortcut = True

    def compose(self, first, second) -> dict:
        if isinstance(first, Identity):
            return {second: 1}
        if isinstance(second, Identity):
            return {first: 1}
        return {Formal("z", self.tail(first), self.head(second)): 1}

    def ambient_arrows(self) -> list:
        Q = self.Q
        outs = Q.out_arrows()
        two_step = set()
        for v in Q.vertices:
            for a in outs[v]:
                for b in outs[Q.head(a)]:
                    two_step.add(Formal("z", v, Q.head(b)))
        # composites of longer paths reach the same targets transitively
        changed = True
        while changed:
            changed = False
            for z in list(two_step):
                for a in outs[z.head]:
                    w = Formal("z", z.tail, Q.head(a))
                    if w not in two_step:
                        two_step.add(w)
                        changed = True
        return list(Q.arrows) + sorted_tokens(two_step)


class CompleteDigraphOracle(_QuiverOracle):
    """The indiscrete category on the vertices: exactly one morphism ``(v, w)`` for each pair."""

    def compose(self, first, second) -> dict:
        if isinstance(first, Identity):
            return {second: 1}
        if isinstance(second, Identity):
            return {first: 1}
        v, w = self.tail(first), self.head(second)
        if v == w:
            return {Identity(v): 1}
        return {(v, w): 1}

    def tail(self, token):
        if isinstance(token, Identity):
            return token.vertex
        return token[0]

    def head(self, token):
        if isinstance(token, Identity):
            return token.vertex
        return token[1]

    def ambient_arrows(self) -> list:
        V = self.Q.vertices
        return [(v, w) for v in V for w in V if v != w]


class FreeCategoryOracle(_QuiverOracle):
    """The free category on ``Q``: composites are fresh paths, all distinct."""

    ideal_shortcut = True

    def compose(self, first, second) -> dict:
        if isinstance(first, Identity):
            return {second: 1}
        if isinstance(second, Identity):
            return {first: 1}
        return {Formal("path", self.tail(first), self.head(second), (first, second)): 1}


class KPowerOracle(_QuiverOracle):
    """The linear category with ``k`` parallel arrows between any two vertices.

    Composition sums all ``k`` ambient arrows between the endpoints (the
    integral form of the averaged composition); exterior faces carry a
    factor ``k``.  The arrows of ``Q`` keep their labels; the remaining
    ambient arrows ``v -> w`` are ``Formal("a", v, w, i)``.
    """

    def __init__(self, Q: Quiver, k: int):
        super().__init__(Q)
        if k < 1:
            raise ValidationError("k must be a positive integer")
        if Q.power() > k:
            from .errors import PowerExceeded

            raise PowerExceeded(f"quiver has {Q.power()} parallel arrows, more than k = {k}")
        self.k = k
        self.exterior_scale = k
        self._hom: dict = {}
        for a, (t, h) in Q.arrows.items():
            self._hom.setdefault((t, h), []).append(a)

    def parallel(self, v, w) -> list:
        own = self._hom.get((v, w), [])
        return own + [Formal("a", v, w, i) for i in range(len(own) + 1, self.k + 1)]

    def compose(self, first, second) -> dict:
        if isinstance(first, Identity):
            return {second: 1}
        if isinstance(second, Identity):
            return {first: 1}
        return {a: 1 for a in self.parallel(self.tail(first), self.head(second))}

    def ambient_arrows(self) -> list:
        V = self.Q.vertices
        return [a for v in V for w in V for a in self.parallel(v, w)]


class ProductOracle:
    """The product of two ambient categories, with identities as units.

    Tokens are pairs.  A pair is an arrow of the box product quiver when one
    side is an identity and the other a ``Q``-arrow.
    """

    ideal_shortcut = False
    exterior_scale = 1

    def __init__(self, left, right):
        if left.exterior_scale != 1 or right.exterior_scale != 1:
            raise UnsupportedCombination("box products need unscaled exterior faces")
        self.left = left
        self.right = right

    @staticmethod
    def _normalise(oracle, token, vertex):
        if isinstance(token, Identity):
            return token
        if oracle.classify(token) is Kind.IDENTITY:
            return Identity(vertex)
        return token

    def _side(self, oracle, a, b) -> dict:
        if isinstance(a, Identity):
            return {b: 1}
        if isinstance(b, Identity):
            return {a: 1}
        start = oracle.tail(a)
        return {self._normalise(oracle, t, start): c for t, c in oracle.compose(a, b).items()}

    def compose(self, first, second) -> dict:
        left = self._side(self.left, first[0], second[0])
        right = self._side(self.right, first[1], second[1])
        out: dict = {}
        for (a, x), (b, y) in iproduct(left.items(), right.items()):
            out[(a, b)] = out.get((a, b), 0) + x * y
        return {t: c for t, c in out.items() if c}

    def classify(self, token) -> Kind:
        a, b = token
        ka = Kind.IDENTITY if isinstance(a, Identity) else self.left.classify(a)
        kb = Kind.IDENTITY if isinstance(b, Identity) else self.right.classify(b)
        if ka is Kind.IDENTITY and kb is Kind.IDENTITY:
            return Kind.IDENTITY
        if (ka is Kind.IDENTITY and kb is Kind.IN_Q) or (kb is Kind.IDENTITY and ka is Kind.IN_Q):
            return Kind.IN_Q
        return Kind.OTHER

    def tail(self, token):
        return (self.left.tail(token[0]), self.right.tail(token[1]))

    def head(self, token):
        return (self.left.head(token[0]), self.right.head(token[1]))

    def ambient_arrows(self) -> list:
        raise InfiniteAmbient("the product oracle does not enumerate its ambient category")


def box_quiver(Q: Quiver, R: Quiver) -> Quiver:
    """Box product: arrows ``(a, id)`` and ``(id, b)`` over the vertex grid."""
    verts = [(v, w) for v in Q.vertices for w in R.vertices]
    arrows = {}
    for a, (t, h) in Q.arrows.items():
        for w in R.vertices:
            arrows[(a, Identity(w))] = ((t, w), (h, w))
    for b, (t, h) in R.arrows.items():
        for v in Q.vertices:
            arrows[(Identity(v), b)] = ((v, t), (v, h))
    return Quiver(verts, arrows)


# ---------------------------------------------------------------------------
# the engine


def _union_find_blocks(columns: Sequence[dict], is_constraint: Callable[[Hashable], bool]):
    """Group column indices linked through shared constraint rows."""
    parent = list(range(len(columns)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner: dict = {}
    for j, col in enumerate(columns):
        for row in col:
            if is_constraint(row):
                if row in owner:
                    a, b = find(owner[row]), find(j)
                    if a != b:
                        parent[max(a, b)] = min(a, b)
                else:
                    owner[row] = j
    blocks: dict = {}
    for j in range(len(columns)):
        blocks.setdefault(find(j), []).append(j)
    return [blocks[k] for k in sorted(blocks)]


def constrained_kernel(columns: Sequence[dict], is_constraint: Callable[[Hashable], bool],
                       ring: Ring) -> list[dict]:
    """Echelon basis of ``{c : Σ c_j columns[j] has no constraint rows}``.

    Solved block by block on the connected components of the column/row
    incidence graph; over Z each block kernel is saturated, so the union is
    a direct summand.
    """
    out: list[dict] = []
    for block in _union_find_blocks(columns, is_constraint):
        rows = sorted({r for j in block for r in columns[j] if is_constraint(r)}, key=sort_key)
        if not rows:
            out.extend({j: 1} for j in block)
            continue
        pos = {r: i for i, r in enumerate(rows)}
        M = [[0] * len(block) for _ in rows]
        for local, j in enumerate(block):
            for r, x in columns[j].items():
                if r in pos:
                    M[pos[r]][local] = x
        for v in kernel_rows(M, ring, len(block)):
            out.append({block[i]: x for i, x in enumerate(v) if x})
    return out


@dataclass
class OmegaComplex:
    """``Ω`` with each basis vector expressed in non-degenerate tuples.

    ``generators[n]`` lists the tuples spanning the ambient degree ``n``
    (the ``D_n`` of the underlying graded pair) and ``vectors[n]`` holds the
    ``Ω_n`` basis as sparse ``{generator index: coefficient}`` maps in
    echelon form.
    """

    ring: Ring
    n_max: int
    generators: list[list]
    vectors: list[list[dict]]
    complex: BoundedComplex
    oracle: object = None
    quiver: Quiver | None = None
    _echelon: list[Echelon] = field(default_factory=list, repr=False)
    _index: list[dict] = field(default_factory=list, repr=False)

    def __post_init__(self):
        self._echelon = [Echelon(v, self.ring) for v in self.vectors]
        self._index = [{g: i for i, g in enumerate(gens)} for gens in self.generators]

    @property
    def dims(self) -> list[int]:
        return list(self.complex.dims)

    @property
    def certified_max(self) -> int:
        return self.complex.certified_max

    def homology(self, n: int) -> HomologyGroup:
        return self.complex.homology(n)

    def homology_all(self) -> list[HomologyGroup]:
        return self.complex.homology_all()

    def betti(self) -> list[int]:
        return self.complex.betti()

    def generator_index(self, n: int) -> dict:
        return self._index[n]

    def coordinates(self, n: int, chain: dict) -> dict | None:
        """Express a chain ``{tuple: coef}`` in the ``Ω_n`` basis (``None`` if outside)."""
        index = self._index[n]
        vec = {}
        for t, c in chain.items():
            c = self.ring(c)
            if not c:
                continue
            if t not in index:
                return None
            vec[index[t]] = c
        return self._echelon[n].coordinates(vec)

    def chain(self, n: int, i: int) -> dict:
        """The ``i``-th basis vector of ``Ω_n`` as ``{tuple: coef}``."""
        gens = self.generators[n]
        return {gens[j]: c for j, c in self._echelon[n].rows[i].items()}

    def basis_chains(self, n: int) -> list[dict]:
        return [self.chain(n, i) for i in range(len(self.vectors[n]))]


def _add_into(acc: dict, key, coef) -> None:
    v = acc.get(key, 0) + coef
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


def tuple_faces(oracle, t: tuple, n: int, interior: bool = True, exterior: bool = True) -> dict:
    """``Σ (-1)^i d̃_i`` of one tuple as ``{target: coefficient}`` (targets may leave ``Q``)."""
    out: dict = {}
    scale = oracle.exterior_scale
    if n == 1:
        if exterior:
            _add_into(out, oracle.head(t[0]), scale)
            _add_into(out, oracle.tail(t[0]), -scale)
        return out
    if exterior:
        _add_into(out, t[1:], scale)
        _add_into(out, t[:-1], (-1) ** n * scale)
    if interior:
        for i in range(1, n):
            first, second = t[i - 1], t[i]
            if oracle.head(first) != oracle.tail(second):
                raise NonComposable(f"entries {i - 1}, {i} of {t!r} are not composable")
            sign = -1 if i % 2 else 1
            for token, c in oracle.compose(first, second).items():
                if oracle.classify(token) is Kind.IDENTITY:
                    continue
                _add_into(out, t[: i - 1] + (token,) + t[i + 1:], sign * c)
    return out


def interior_face(oracle, t: tuple, i: int) -> dict:
    """The single interior face ``d̃_i`` (no sign)."""
    out: dict = {}
    for token, c in oracle.compose(t[i - 1], t[i]).items():
        if oracle.classify(token) is not Kind.IDENTITY:
            _add_into(out, t[: i - 1] + (token,) + t[i + 1:], c)
    return out


def boundary_into_span(oracle, Q: Quiver, n: int, ring: Ring | None = None):
    """Matrix of ``∂`` on ``span(NQ_n)`` into the face span, with in-``NQ`` flags.

    Returns ``(matrix, targets, flags)``: ``targets`` lists the degree
    ``n-1`` tuples hit by faces (``NQ_{n-1}`` first, then the rest), and
    ``flags[i]`` is ``True`` when ``targets[i]`` is a tuple of ``Q``-arrows.
    """
    ring = ring or Ring.integers()
    if n < 1:
        raise ValidationError("boundary_into_span needs n >= 1")
    gens = moore_basis(Q, n)
    inside = moore_basis(Q, n - 1)
    in_set = set(inside)
    cols = [tuple_faces(oracle, t, n) for t in gens]
    outside = sorted_tokens({r for c in cols for r in c if r not in in_set})
    targets = inside + outside
    pos = {r: i for i, r in enumerate(targets)}
    M = ExactMatrix.from_sparse_columns([{pos[r]: ring(x) for r, x in c.items()} for c in cols], ring,
                                        len(targets))
    return M, targets, [r in in_set for r in targets]


def build_omega(ring: Ring, n_max: int, basis_fn: Callable[[int], list],
                faces_fn: Callable[[Hashable, int], dict], allowed_fn: Callable[[Hashable, int], bool] | None = None,
                kernel_faces_fn: Callable[[Hashable, int], dict] | None = None,
                restricted_faces_fn: Callable[[Hashable, int], dict] | None = None) -> tuple:
    """Generic ``ω`` of the pair (face complex, span of ``basis_fn``).

    ``faces_fn(x, n)`` is the boundary of a degree-``n`` generator.  By
    default ``Ω_n`` is the kernel of the rows not in ``basis_fn(n-1)``.  With
    ``kernel_faces_fn``, ``Ω_n`` is instead the kernel of all rows of
    ``kernel_faces_fn`` and the boundary on ``Ω`` is computed through
    ``restricted_faces_fn``.
    """
    gens = [list(basis_fn(n)) for n in range(n_max + 1)]
    index = [{g: i for i, g in enumerate(gs)} for gs in gens]
    vectors: list[list[dict]] = [[{i: 1} for i in range(len(gens[0]))]]
    boundaries = {}
    for n in range(1, n_max + 1):
        prev = index[n - 1]
        if not vectors[n - 1]:
            vectors.extend([] for _ in range(n, n_max + 1))
            for m in range(n, n_max + 1):
                boundaries[m] = ExactMatrix.zeros(ring, len(vectors[m - 1]), 0)
            break
        if kernel_faces_fn is not None:
            cols = [{k: ring(c) for k, c in kernel_faces_fn(g, n).items()} for g in gens[n]]
            vecs = constrained_kernel(cols, lambda r: True, ring)
            bd_cols = [{k: ring(c) for k, c in restricted_faces_fn(g, n).items()} for g in gens[n]]
        else:
            cols = [{k: ring(c) for k, c in faces_fn(g, n).items()} for g in gens[n]]
            if allowed_fn is None:
                vecs = constrained_kernel(cols, lambda r: r not in prev, ring)
            else:
                vecs = constrained_kernel(cols, lambda r: not allowed_fn(r, n - 1), ring)
            bd_cols = cols
        vecs = [{k: ring(v) for k, v in vec.items() if ring(v)} for vec in vecs]
        vecs = sorted((v for v in vecs if v), key=min)
        vectors.append(vecs)
        ech = Echelon(vectors[n - 1], ring)
        mat_cols = []
        for vec in vecs:
            image: dict = {}
            for j, c in vec.items():
                for r, x in bd_cols[j].items():
                    _add_into(image, r, c * x)
            image = {k: ring(v) for k, v in image.items() if ring(v)}
            local = {}
            for r, x in image.items():
                if r not in prev:
                    raise InvariantBreach(f"boundary of an Ω_{n} vector leaves the allowed span at {r!r}")
                local[prev[r]] = x
            coords = ech.coordinates(local)
            if coords is None:
                raise InvariantBreach(f"boundary of an Ω_{n} vector is not in Ω_{n - 1}")
            mat_cols.append(coords)
        boundaries[n] = ExactMatrix.from_sparse_columns(mat_cols, ring, len(vectors[n - 1]))
    dims = [len(v) for v in vectors]
    cx = BoundedComplex(ring, n_max, dims, boundaries)
    cx.check_d2()
    return gens, vectors, cx


def _check_vanishing(dims: Sequence[int]) -> None:
    for n, d in enumerate(dims):
        if d == 0 and any(dims[n + 1:]):
            raise InvariantBreach(f"Ω_{n} = 0 but a higher degree is nonzero: {list(dims)}")


def omega_complex(oracle, Q: Quiver, n_max: int, ring: Ring | None = None, method: str = "kernel",
                  check: bool = True) -> OmegaComplex:
    """``Ω`` of the embedded quiver ``(oracle, Q)`` in degrees ``0..n_max``.

    ``method="kernel"`` solves ``∂x ∈ span(NQ_{n-1})``; ``method="ideal"``
    (for oracles whose composites never return to ``Q``) intersects the
    kernels of the interior faces instead.
    """
    ring = ring or Ring.integers()
    if n_max < 1:
        raise ValidationError("n_max must be at least 1")
    basis_fn = lambda n: moore_basis(Q, n)  # noqa: E731
    if method == "kernel":
        gens, vectors, cx = build_omega(ring, n_max, basis_fn, lambda t, n: tuple_faces(oracle, t, n))
    elif method == "ideal":
        if not getattr(oracle, "ideal_shortcut", False):
            raise UnsupportedCombination("the interior-face shortcut needs composites outside Q")

        def interior_only(t, n):
            return tuple_faces(oracle, t, n, exterior=False) if n >= 2 else {}

        def exterior_only(t, n):
            return tuple_faces(oracle, t, n, interior=False)

        gens, vectors, cx = build_omega(ring, n_max, basis_fn, None, kernel_faces_fn=interior_only,
                                        restricted_faces_fn=exterior_only)
    else:
        raise ValidationError(f"unknown method {method!r}")
    out = OmegaComplex(ring, n_max, gens, vectors, cx, oracle, Q)
    if check:
        _check_low_degrees(out, oracle, Q)
        _check_vanishing(out.dims)
    return out


def _check_low_degrees(om: OmegaComplex, oracle, Q: Quiver) -> None:
    if om.dims[0] != len(Q.vertices):
        raise InvariantBreach("Ω_0 must be spanned by the vertices")
    if om.n_max >= 1 and om.dims[1] != len(Q.arrows):
        raise InvariantBreach("Ω_1 must be spanned by the arrows")
    if om.n_max >= 2:
        gens = om.generators[2]
        inside = set(om.generators[1])
        cols = [{k: om.ring(c) for k, c in interior_face(oracle, t, 1).items()} for t in gens]
        vecs = constrained_kernel(cols, lambda r: r not in inside, om.ring)
        if len(vecs) != om.dims[2]:
            raise InvariantBreach("Ω_2 differs from the preimage of NQ_1 under the middle face")


# ---------------------------------------------------------------------------
# the quotient complex for finite ambient categories


def ambient_nerve(oracle, vertices: Sequence, n_max: int, ring: Ring) -> tuple[BoundedComplex, list[list]]:
    """Moore complex of the nerve of a finite ambient category (degrees ``0..n_max``)."""
    arrows = list(oracle.ambient_arrows())
    outs: dict = {v: [] for v in vertices}
    for a in arrows:
        outs[oracle.tail(a)].append(a)
    gens = [list(vertices)]
    layer = [(a,) for a in arrows]
    for n in range(1, n_max + 1):
        if n > 1:
            layer = [t + (b,) for t in layer for b in outs[oracle.head(t[-1])]]
        gens.append(sorted(layer, key=sort_key))
    index = [{g: i for i, g in enumerate(gs)} for gs in gens]
    boundaries = {}
    for n in range(1, n_max + 1):
        cols = []
        for t in gens[n]:
            col = {}
            for r, x in tuple_faces(oracle, t, n).items():
                if r not in index[n - 1]:
                    raise InvariantBreach(f"ambient arrow set is not closed under composition: {r!r}")
                col[index[n - 1][r]] = ring(x)
            cols.append(col)
        boundaries[n] = ExactMatrix.from_sparse_columns(cols, ring, len(gens[n - 1]))
    cx = BoundedComplex(ring, n_max, [len(g) for g in gens], boundaries, [list(g) for g in gens])
    cx.check_d2()
    return cx, gens


def psi_complex(oracle, Q: Quiver, n_max: int, ring: Ring) -> BoundedComplex:
    """``Ψ = N𝒞 / ω'``, the quotient complex, for finite ambient categories (field only)."""
    ring.require_field("the quotient complex")
    cx, gens = ambient_nerve(oracle, Q.vertices, n_max, ring)
    subs = []
    for n in range(n_max + 1):
        idx = {g: i for i, g in enumerate(gens[n])}
        cols = []
        for t in moore_basis(Q, n):
            col = [0] * len(gens[n])
            col[idx[t]] = 1
            cols.append(col)
        subs.append(ExactMatrix.from_columns(cols, ring, len(gens[n])))
    return psi(GradedPair(cx, subs))


# ---------------------------------------------------------------------------
# Eilenberg-Zilber and Alexander-Whitney


def _start(oracle, t: tuple):
    return oracle.tail(t[0])


def eilenberg_zilber_tuple(left, right, x, k: int, y, l: int) -> dict:
    """Shuffle map on generators: ``x`` of degree ``k`` (a vertex when ``k = 0``)."""
    from .picomb import enumerate_shuffles

    v0 = x if k == 0 else left.tail(x[0])
    w0 = y if l == 0 else right.tail(y[0])
    if k == 0 and l == 0:
        return {(v0, w0): 1}
    out: dict = {}
    for sh, sign in enumerate_shuffles(l, k):
        nu = set(sh.nu)
        v, w = v0, w0
        i = j = 0
        entries = []
        for pos in range(k + l):
            if pos in nu:
                a = x[i]
                i += 1
                entries.append((a, Identity(w)))
                v = left.head(a)
            else:
                b = y[j]
                j += 1
                entries.append((Identity(v), b))
                w = right.head(b)
        _add_into(out, tuple(entries), sign)
    return out


def alexander_whitney_tuple(left, right, z, n: int) -> dict:
    """``Σ_k front_k(first coordinates) ⊗ back_{n-k}(second coordinates)``."""
    out: dict = {}
    if n == 0:
        return {(0, z[0], z[1]): 1}
    firsts = [e[0] for e in z]
    seconds = [e[1] for e in z]
    for k in range(n + 1):
        front = tuple(firsts[:k])
        back = tuple(seconds[k:])
        if any(isinstance(a, Identity) for a in front) or any(isinstance(b, Identity) for b in back):
            continue
        if k == 0:
            front_token = left.tail(firsts[0]) if not isinstance(firsts[0], Identity) else firsts[0].vertex
        else:
            front_token = front
        if k == n:
            last = seconds[-1]
            back_token = last.vertex if isinstance(last, Identity) else right.head(last)
        else:
            back_token = back
        _add_into(out, (k, front_token, back_token), 1)
    return out


@dataclass
class EZResult:
    """Degreewise matrices of the shuffle map and its inverse on ``Ω`` bases.

    ``tensor_index[n]`` lists ``(k, i, j)``: basis vector ``i`` of ``Ω_k`` of
    the left factor tensored with vector ``j`` of ``Ω_{n-k}`` on the right.
    """

    epsilon: list[ExactMatrix]
    alpha: list[ExactMatrix]
    tensor_index: list[list[tuple[int, int, int]]]
    box: OmegaComplex


def _solve_tensor(E: OmegaComplex, F: OmegaComplex, k: int, l: int, chain: dict) -> dict | None:
    """Coordinates of ``Σ c (s ⊗ t)`` in the basis ``Ω_k(E) ⊗ Ω_l(F)``."""
    by_t: dict = {}
    for (s, t), c in chain.items():
        by_t.setdefault(t, {})[s] = c
    # columnwise: for each t, solve in Ω_k(E)
    partial: dict = {}
    for t, col in by_t.items():
        c = E.coordinates(k, col)
        if c is None:
            return None
        for i, x in c.items():
            partial.setdefault(i, {})[t] = x
    out = {}
    for i, row in partial.items():
        c = F.coordinates(l, row)
        if c is None:
            return None
        for j, x in c.items():
            out[(i, j)] = x
    return out


def ez_aw(E: OmegaComplex, F: OmegaComplex, n_max: int | None = None, box: OmegaComplex | None = None) -> EZResult:
    """Shuffle map ``Ω(E) ⊗ Ω(F) -> Ω(E □ F)`` and its inverse, checked mutually inverse."""
    if E.ring != F.ring:
        raise RingMismatch(f"{E.ring} vs {F.ring}")
    ring = E.ring
    N = min(E.n_max, F.n_max) if n_max is None else n_max
    left, right = E.oracle, F.oracle
    if box is None:
        box = omega_complex(ProductOracle(left, right), box_quiver(E.quiver, F.quiver), N, ring)
    tensor_index = []
    eps, alp = [], []
    for n in range(N + 1):
        idx = [(k, i, j) for k in range(n + 1) for i in range(E.dims[k]) for j in range(F.dims[n - k])]
        tensor_index.append(idx)
        pos = {t: p for p, t in enumerate(idx)}
        cols = []
        for (k, i, j) in idx:
            chain: dict = {}
            for s, a in E.chain(k, i).items():
                for t, b in F.chain(n - k, j).items():
                    for z, c in eilenberg_zilber_tuple(left, right, s, k, t, n - k).items():
                        _add_into(chain, z, a * b * c)
            coords = box.coordinates(n, chain)
            if coords is None:
                raise NotMutuallyInverse(f"shuffle image leaves Ω in degree {n}")
            cols.append(coords)
        eps.append(ExactMatrix.from_sparse_columns(cols, ring, box.dims[n]))
        cols = []
        for b in range(box.dims[n]):
            split: dict = {}
            for z, a in box.chain(n, b).items():
                for (k, s, t), c in alexander_whitney_tuple(left, right, z, n).items():
                    split.setdefault(k, {})
                    _add_into(split[k], (s, t), a * c)
            col = {}
            for k, chain in split.items():
                coords = _solve_tensor(E, F, k, n - k, chain)
                if coords is None:
                    raise NotMutuallyInverse(f"front/back split leaves Ω ⊗ Ω in degree {n}")
                for (i, j), x in coords.items():
                    col[pos[(k, i, j)]] = x
            cols.append(col)
        alp.append(ExactMatrix.from_sparse_columns(cols, ring, len(idx)))
        if (alp[n] @ eps[n]) != ExactMatrix.identity(ring, len(idx)):
            raise NotMutuallyInverse(f"α'ε' is not the identity in degree {n}")
        if (eps[n] @ alp[n]) != ExactMatrix.identity(ring, box.dims[n]):
            raise NotMutuallyInverse(f"ε'α' is not the identity in degree {n}")
    return EZResult(eps, alp, tensor_index, box)


# ---------------------------------------------------------------------------
# morphisms and homotopies


@dataclass
class QuiverMorphism:
    """Vertex and arrow assignments; an arrow may go to ``Identity(v)``."""

    vertex_map: dict
    arrow_map: dict

    def validate(self, Q: Quiver, Qp: Quiver) -> None:
        for v in Q.vertices:
            if self.vertex_map.get(v) not in set(Qp.vertices):
                raise ValidationError(f"vertex {label_str(v)} has no valid image")
        for a, (t, h) in Q.arrows.items():
            if a not in self.arrow_map:
                raise ValidationError(f"arrow {label_str(a)} has no image")
            b = self.arrow_map[a]
            ft, fh = self.vertex_map[t], self.vertex_map[h]
            if isinstance(b, Identity):
                if not (b.vertex == ft == fh):
                    raise ValidationError(f"arrow {label_str(a)} collapses onto a mismatched vertex")
            elif b not in Qp.arrows or Qp.arrows[b] != (ft, fh):
                raise ValidationError(f"image of arrow {label_str(a)} does not match its endpoints")

    def on_tuple(self, t, n: int):
        if n == 0:
            return self.vertex_map[t]
        image = tuple(self.arrow_map[a] for a in t)
        if any(isinstance(b, Identity) for b in image):
            return None
        return image


def induced_chain_map(f: QuiverMorphism, E: OmegaComplex, F: OmegaComplex) -> list[ExactMatrix]:
    """Matrices of ``Ω(E) -> Ω(F)``; raises if the image leaves ``Ω``."""
    ring = E.ring
    out = []
    for n in range(min(E.n_max, F.n_max) + 1):
        cols = []
        for chain in E.basis_chains(n):
            image: dict = {}
            for t, c in chain.items():
                u = f.on_tuple(t, n)
                if u is not None:
                    _add_into(image, u, c)
            coords = F.coordinates(n, image)
            if coords is None:
                raise ValidationError(f"the morphism does not map Ω_{n} into Ω_{n}")
            cols.append(coords)
        out.append(ExactMatrix.from_sparse_columns(cols, ring, F.dims[n]))
    N = len(out) - 1
    for n in range(1, N + 1):
        if (F.complex.boundaries[n] @ out[n]) != (out[n - 1] @ E.complex.boundaries[n]):
            raise InvariantBreach(f"induced map is not a chain map in degree {n}")
    return out


def _compose_tokens(oracle, first, second) -> dict:
    if isinstance(first, Identity):
        return {second: 1}
    if isinstance(second, Identity):
        return {first: 1}
    out = {}
    for t, c in oracle.compose(first, second).items():
        if oracle.classify(t) is Kind.IDENTITY and not isinstance(t, Identity):
            t = Identity(oracle.tail(first))
        out[t] = c
    return out


def check_natural(f: QuiverMorphism, g: QuiverMorphism, phi: dict, Q: Quiver, target_oracle, Qp: Quiver) -> None:
    """Naturality of ``φ: f -> g`` with components ``φ_v : f(v) -> g(v)`` in ``Q'`` or identities."""
    for v in Q.vertices:
        p = phi.get(v)
        if p is None:
            raise NotNatural(f"no component at vertex {label_str(v)}")
        fv, gv = f.vertex_map[v], g.vertex_map[v]
        if isinstance(p, Identity):
            if not (p.vertex == fv == gv):
                raise NotNatural(f"identity component at {label_str(v)} needs f(v) = g(v)")
        elif p not in Qp.arrows or Qp.arrows[p] != (fv, gv):
            raise NotNatural(f"component at {label_str(v)} is not an arrow f(v) -> g(v) of the target quiver")
    for a, (t, h) in Q.arrows.items():
        lhs = _compose_tokens(target_oracle, f.arrow_map[a], phi[h])
        rhs = _compose_tokens(target_oracle, phi[t], g.arrow_map[a])
        if lhs != rhs:
            raise NotNatural(f"naturality square fails at arrow {label_str(a)}: "
                             f"{label_str(list(lhs))} vs {label_str(list(rhs))}")


@dataclass
class HomotopyReport:
    natural: bool
    degrees: list[int]
    equal_on_homology: bool


def verify_homotopy(f: QuiverMorphism, g: QuiverMorphism, phi: dict, E: OmegaComplex, F: OmegaComplex) -> HomotopyReport:
    """Check a natural transformation ``f -> g`` and the equality of induced maps on homology.

    A chain of one-step certificates is checked by calling this once per step.
    """
    f.validate(E.quiver, F.quiver)
    g.validate(E.quiver, F.quiver)
    check_natural(f, g, phi, E.quiver, F.oracle, F.quiver)
    Fm = induced_chain_map(f, E, F)
    Gm = induced_chain_map(g, E, F)
    degrees = list(range(min(E.certified_max, F.certified_max) + 1))
    if not maps_agree_on_homology(E.complex, F.complex, Fm, Gm, degrees):
        raise UnequalInducedMaps("naturally related morphisms induce different maps on homology")
    return HomotopyReport(True, degrees, True)


# ---------------------------------------------------------------------------
# the diagonal and the cup product


def diagonal_tuple(oracle, x, n: int, k: int) -> tuple:
    """``ν_{k, n-k}`` on a generator: ``(front, back)`` with vertices at the ends."""
    if n == 0:
        return (x, x)
    front = oracle.tail(x[0]) if k == 0 else tuple(x[:k])
    back = oracle.head(x[-1]) if k == n else tuple(x[k:])
    return (front, back)


def diagonal_matrix(om: OmegaComplex, k: int, l: int) -> ExactMatrix:
    """``ν_{k,l}: Ω_{k+l} -> Ω_k ⊗ Ω_l`` with rows ordered ``(i, j)`` lexicographically."""
    rows = om.dims[k] * om.dims[l]
    cols = []
    for chain in om.basis_chains(k + l):
        split: dict = {}
        for t, c in chain.items():
            _add_into(split, diagonal_tuple(om.oracle, t, k + l, k), c)
        coords = _solve_tensor(om, om, k, l, split)
        if coords is None:
            raise InvariantBreach(f"ν_{k},{l} leaves Ω_{k} ⊗ Ω_{l}")
        cols.append({i * om.dims[l] + j: x for (i, j), x in coords.items()})
    return ExactMatrix.from_sparse_columns(cols, om.ring, rows)
