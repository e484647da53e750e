"""Homology theories of digraphs, quivers and path complexes.

Each theory is an embedded quiver handed to the nerve engine:

* ``glmy``: a digraph inside the indiscrete category on its vertices;
* ``sc``: square-commutative homology, composites are fresh formal arrows;
* ``kpower``: the linear category with ``k`` parallel arrows everywhere;
* ``free_cat``: the free category;
* ``path_complex_omega``: arbitrary regular path complexes.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .errors import InvariantBreach, NotClosed, NotField, ValidationError
from .exactalg import ExactMatrix, HomologyGroup, Ring, echelon_rows, kernel_rows, rank
from .nerve import (
    CompleteDigraphOracle,
    FreeCategoryOracle,
    KPowerOracle,
    OmegaComplex,
    Quiver,
    SquareCommutativeOracle,
    box_quiver,
    build_omega,
    diagonal_matrix,
    omega_complex,
    tuple_faces,
)
from .tokens import label_str, sort_key, sorted_tokens

# ---------------------------------------------------------------------------
# digraphs


@dataclass
class Digraph:
    """A digraph without stored loops and with at most one edge per ordered pair."""

    vertices: list
    edges: list

    def __post_init__(self):
        verts = sorted_tokens(dict.fromkeys(self.vertices))
        if len(verts) != len(self.vertices):
            raise ValidationError("duplicate vertex labels")
        self.vertices = verts
        vset = set(verts)
        seen = set()
        for e in self.edges:
            u, v = e
            if u not in vset or v not in vset:
                raise ValidationError(f"edge {label_str(u)} -> {label_str(v)} has an endpoint outside the vertex set")
            if u == v:
                raise ValidationError(f"loop at {label_str(u)}: degenerate loops are implicit")
            if (u, v) in seen:
                raise ValidationError(f"repeated edge {label_str(u)} -> {label_str(v)}")
            seen.add((u, v))
        self.edges = sorted_tokens(seen)

    def to_quiver(self) -> Quiver:
        return Quiver(list(self.vertices), {e: e for e in self.edges})

    def triangles(self) -> list[tuple]:
        """Non-degenerate directed triangles ``a -> b -> c`` with the chord ``a -> c``."""
        E = set(self.edges)
        return [(a, b, c) for (a, b) in self.edges for (b2, c) in self.edges
                if b2 == b and c != a and (a, c) in E]

    def two_cycles(self) -> list[tuple]:
        E = set(self.edges)
        return [(a, b) for (a, b) in self.edges if (b, a) in E and sort_key(a) < sort_key(b)]


def _as_quiver(G) -> Quiver:
    return G.to_quiver() if isinstance(G, Digraph) else G


def glmy(G: Digraph, ring: Ring, n_max: int) -> OmegaComplex:
    """Path homology of a digraph through the indiscrete ambient category."""
    Q = G.to_quiver()
    return omega_complex(CompleteDigraphOracle(Q), Q, n_max, ring)


def sc(Q, ring: Ring, n_max: int, method: str = "kernel") -> OmegaComplex:
    """Square-commutative homology of a quiver (or digraph)."""
    Q = _as_quiver(Q)
    return omega_complex(SquareCommutativeOracle(Q), Q, n_max, ring, method=method)


def kpower(Q, k: int, ring: Ring, n_max: int) -> OmegaComplex:
    """``k``-power homology with integral differentials (exterior faces times ``k``)."""
    Q = _as_quiver(Q)
    oracle = KPowerOracle(Q, k)
    if not ring.is_unit(k):
        warnings.warn(f"k = {k} is not invertible in {ring}; homotopy invariance is not guaranteed",
                      stacklevel=2)
    return omega_complex(oracle, Q, n_max, ring)


def free_cat(Q, ring: Ring, n_max: int) -> OmegaComplex:
    """Homology of a quiver inside its free category."""
    Q = _as_quiver(Q)
    return omega_complex(FreeCategoryOracle(Q), Q, n_max, ring)


def graph_homology(Q, ring: Ring) -> list[HomologyGroup]:
    """Homology of the quiver as a 1-dimensional cell complex."""
    Q = _as_quiver(Q)
    idx = {v: i for i, v in enumerate(Q.vertices)}
    cols = []
    for a, (t, h) in Q.arrows.items():
        col = [0] * len(Q.vertices)
        col[idx[h]] += 1
        col[idx[t]] -= 1
        cols.append(col)
    from .exactalg import homology_at

    d1 = ExactMatrix.from_columns(cols, ring, len(Q.vertices))
    d0 = ExactMatrix.zeros(ring, 0, len(Q.vertices))
    d2 = ExactMatrix.zeros(ring, len(cols), 0)
    return [homology_at(d0, d1, ring), homology_at(d1, d2, ring)]


# ---------------------------------------------------------------------------
# path complexes


@dataclass
class PathComplexInput:
    """A path complex given by its allowed paths ``P_n`` (tuples of vertices)."""

    vertices: list
    paths: dict
    regular: bool = True

    def __post_init__(self):
        self.vertices = sorted_tokens(dict.fromkeys(self.vertices))
        vset = set(self.vertices)
        paths = {}
        for n, ps in self.paths.items():
            clean = set()
            for p in ps:
                p = tuple(p)
                if len(p) != n + 1:
                    raise ValidationError(f"path {label_str(p)} listed in degree {n} has length {len(p)}")
                if any(v not in vset for v in p):
                    raise ValidationError(f"path {label_str(p)} uses an unknown vertex")
                if self.regular and any(p[i] == p[i + 1] for i in range(n)):
                    raise ValidationError(f"path {label_str(p)} is not regular")
                clean.add(p)
            paths[n] = clean
        paths.setdefault(0, {(v,) for v in self.vertices})
        self.paths = paths
        for n in sorted(paths):
            if n == 0:
                continue
            below = paths.get(n - 1, set())
            for p in paths[n]:
                if p[1:] not in below or p[:-1] not in below:
                    raise NotClosed(f"path {label_str(p)} is allowed but a truncation is not")

    @classmethod
    def from_digraph(cls, G: Digraph, n_max: int) -> "PathComplexInput":
        E = set(G.edges)
        layers = {0: {(v,) for v in G.vertices}}
        for n in range(1, n_max + 1):
            layers[n] = {p + (w,) for p in layers[n - 1] for w in G.vertices if (p[-1], w) in E}
        return cls(list(G.vertices), layers)

    def allowed(self, n: int) -> list[tuple]:
        return sorted(self.paths.get(n, ()), key=sort_key)


def _regular_boundary(p: tuple, n: int) -> dict:
    out: dict = {}
    for i in range(n + 1):
        q = p[:i] + p[i + 1:]
        if any(q[j] == q[j + 1] for j in range(len(q) - 1)):
            continue
        out[q] = out.get(q, 0) + (-1) ** i
    return {k: v for k, v in out.items() if v}


def path_complex_omega(P: PathComplexInput, ring: Ring, n_max: int, route: str = "regular") -> OmegaComplex:
    """``Ω`` of a regular path complex inside the complex of regular paths.

    ``route="regular"`` deletes vertices directly; ``route="nerve"`` encodes
    paths as edge tuples of the indiscrete category and uses the nerve
    engine's faces.  Both give identical matrices.
    """
    if not P.regular:
        raise ValidationError("only regular path complexes are supported")
    if route == "regular":
        gens, vectors, cx = build_omega(ring, n_max, lambda n: [p if n else p[0] for p in P.allowed(n)],
                                        lambda p, n: _vertex_faces(_regular_boundary(p, n)))
        out = OmegaComplex(ring, n_max, gens, vectors, cx)
    elif route == "nerve":
        Q = Quiver(list(P.vertices), {})  # tokens are vertex pairs, decoded by the oracle
        oracle = CompleteDigraphOracle(Q)

        def basis(n):
            if n == 0:
                return [p[0] for p in P.allowed(0)]
            return [tuple((p[i], p[i + 1]) for i in range(n)) for p in P.allowed(n)]

        gens, vectors, cx = build_omega(ring, n_max, basis, lambda t, n: tuple_faces(oracle, t, n))
        # report generators as vertex paths
        gens = [[g if n == 0 else (g[0][0],) + tuple(e[1] for e in g) for g in gs] for n, gs in enumerate(gens)]
        out = OmegaComplex(ring, n_max, gens, vectors, cx)
    else:
        raise ValidationError(f"unknown route {route!r}")
    return out


def _vertex_faces(chain: dict) -> dict:
    """Degree-0 targets are bare vertices, matching the degree-0 generators."""
    return {(k[0] if len(k) == 1 else k): v for k, v in chain.items()}


# ---------------------------------------------------------------------------
# simplicial complexes


@dataclass
class SimplicialComplexInput:
    facets: list

    def __post_init__(self):
        if not self.facets:
            raise ValidationError("a simplicial complex needs at least one facet")
        clean = []
        for f in self.facets:
            s = frozenset(f)
            if not s:
                raise ValidationError("empty facet")
            clean.append(s)
        self.facets = clean

    def simplices(self) -> list[frozenset]:
        out = set()
        for f in self.facets:
            items = sorted_tokens(f)
            for r in range(1, len(items) + 1):
                out.update(frozenset(c) for c in combinations(items, r))
        return sorted(out, key=lambda s: (len(s), sort_key(tuple(sorted_tokens(s)))))


def simplicial_digraph(S: SimplicialComplexInput, variant: str = "G") -> Digraph:
    """Digraph on the simplices: ``σ -> τ`` for codimension-one faces (``G``) or all proper faces (``G2``)."""
    simplices = S.simplices()
    sset = set(simplices)
    edges = []
    for s in simplices:
        if variant == "G":
            if len(s) > 1:
                edges.extend((s, s - {v}) for v in s)
        elif variant == "G2":
            items = sorted_tokens(s)
            for r in range(1, len(items)):
                edges.extend((s, frozenset(c)) for c in combinations(items, r))
        else:
            raise ValidationError(f"unknown variant {variant!r}; use G or G2")
    assert all(t in sset for _, t in edges)
    return Digraph(simplices, edges)


# ---------------------------------------------------------------------------
# box products


def box(A, B):
    """Box product of two quivers or two digraphs."""
    if isinstance(A, Digraph) and isinstance(B, Digraph):
        verts = [(v, w) for v in A.vertices for w in B.vertices]
        edges = [((a, w), (b, w)) for (a, b) in A.edges for w in B.vertices]
        edges += [((v, a), (v, b)) for v in A.vertices for (a, b) in B.edges]
        return Digraph(verts, edges)
    if isinstance(A, Quiver) and isinstance(B, Quiver):
        return box_quiver(A, B)
    raise ValidationError("box needs two quivers or two digraphs")


# ---------------------------------------------------------------------------
# comparison of square-commutative and path homology


def _to_field(ring: Ring) -> Ring:
    return ring if ring.is_field else Ring.rationals()


def _recast(M: ExactMatrix, ring: Ring) -> ExactMatrix:
    return ExactMatrix(M.to_lists(), ring, M.cols)


def induced_homology_rank(src: OmegaComplex, tgt: OmegaComplex, F: ExactMatrix, n: int) -> int:
    """Rank over a field of the map ``H_n(src) -> H_n(tgt)`` induced by ``F``."""
    field_ring = _to_field(src.ring)
    d_out = _recast(src.complex.boundary(n), field_ring)
    cycles = kernel_rows(d_out.to_lists(), field_ring, src.dims[n]) if d_out.rows else \
        [[int(i == j) for i in range(src.dims[n])] for j in range(src.dims[n])]
    Fq = _recast(F, field_ring)
    images = [Fq.apply(z) for z in cycles]
    bounds = _recast(tgt.complex.boundary(n + 1), field_ring).columns()

    def span_rank(vs):
        vs = [v for v in vs if any(v)]
        return len(echelon_rows(vs, field_ring, tgt.dims[n])[1]) if vs else 0

    return span_rank(images + bounds) - span_rank(bounds)


@dataclass
class ComparisonReport:
    """Degreewise comparison ``Ω^sc -> Ω^GLMY`` of a digraph."""

    sc_dims: list[int]
    glmy_dims: list[int]
    maps: list[ExactMatrix]
    isomorphic_degrees: list[bool]
    homology_ranks: list[int]
    sc_homology: list[HomologyGroup]
    glmy_homology: list[HomologyGroup]
    triangle_free: bool
    two_cycle_free: bool

    @property
    def isomorphic(self) -> bool:
        return all(self.isomorphic_degrees)


def compare_sc_glmy(G: Digraph, ring: Ring, n_max: int) -> ComparisonReport:
    """Build the comparison map and assert isomorphism when the digraph has no triangles.

    The assertion additionally needs the absence of 2-cycles ``a -> b -> a``:
    for such a bigon the square-commutative side keeps the 1-cycle while the
    path side fills it.
    """
    A = sc(G, ring, n_max)
    B = glmy(G, ring, n_max)
    maps, iso = [], []
    for n in range(n_max + 1):
        cols = []
        for chain in A.basis_chains(n):
            c = B.coordinates(n, chain)
            if c is None:
                raise InvariantBreach(f"square-commutative chains leave the path complex in degree {n}")
            cols.append(c)
        M = ExactMatrix.from_sparse_columns(cols, ring, B.dims[n])
        maps.append(M)
        iso.append(A.vectors[n] == B.vectors[n])
    ranks = [induced_homology_rank(A, B, maps[n], n) for n in range(A.certified_max + 1)]
    tri_free = not G.triangles()
    cyc_free = not G.two_cycles()
    report = ComparisonReport(A.dims, B.dims, maps, iso, ranks, A.homology_all(), B.homology_all(),
                              tri_free, cyc_free)
    if tri_free and cyc_free and not report.isomorphic:
        raise InvariantBreach("triangle-free digraph without 2-cycles but the comparison map is not an isomorphism")
    return report


# ---------------------------------------------------------------------------
# cohomology


@dataclass
class CohomologyRing:
    """Cochains ``Ω^n = Hom(Ω_n, K)`` with the cup product dual to the diagonal ``ν``."""

    omega: OmegaComplex
    diagonals: dict = field(default_factory=dict)

    @property
    def ring(self) -> Ring:
        return self.omega.ring

    def dims(self) -> list[int]:
        return self.omega.dims

    def coboundary(self, n: int) -> ExactMatrix:
        """``δ^n: Ω^n -> Ω^{n+1}``, the transpose of ``∂_{n+1}``."""
        return self.omega.complex.boundary(n + 1).T

    def cup(self, phi: Sequence, psi: Sequence, k: int, l: int) -> list:
        nu = self.diagonals[(k, l)]
        dl = self.omega.dims[l]
        out = []
        for m in range(nu.cols):
            s = 0
            for i, a in enumerate(phi):
                if not a:
                    continue
                for j, b in enumerate(psi):
                    if b:
                        x = nu[i * dl + j, m]
                        if x:
                            s += a * b * x
            out.append(self.ring(s))
        return out

    def cohomology_dims(self) -> list[int]:
        om = self.omega
        out = []
        for n in range(om.certified_max + 1):
            d_next = self.coboundary(n)
            d_prev = self.coboundary(n - 1) if n >= 1 else ExactMatrix.zeros(self.ring, om.dims[0], 0)
            out.append(om.dims[n] - rank(d_next) - rank(d_prev))
        return out


def cohomology_ring(E: OmegaComplex, field_ring: Ring | None = None) -> CohomologyRing:
    """Cup-product structure on ``(Ω)^∨`` with the structural checks.

    Checks: every ``ν_{k,l}`` restricted to ``Ω`` is injective (hence
    ``dim Ω_{k+l} <= dim Ω_k · dim Ω_l``), and ``δ`` is a derivation:
    ``δ(φ ∪ ψ) = δφ ∪ ψ + (-1)^k φ ∪ δψ`` on basis cochains.
    """
    ring = field_ring or E.ring
    if not ring.is_field:
        raise NotField(f"cohomology rings are computed over a field (got {ring})")
    if ring != E.ring:
        raise ValidationError(f"complex is over {E.ring}, requested {ring}")
    cr = CohomologyRing(E)
    N = E.n_max
    for total in range(N + 1):
        for k in range(total + 1):
            nu = diagonal_matrix(E, k, total - k)
            cr.diagonals[(k, total - k)] = nu
            if E.dims[total] > E.dims[k] * E.dims[total - k]:
                raise InvariantBreach(f"dim Ω_{total} exceeds dim Ω_{k} · dim Ω_{total - k}")
            if rank(nu) != E.dims[total]:
                raise InvariantBreach(f"ν_{k},{total - k} is not injective on Ω_{total}")
    _check_leibniz(cr)
    return cr


def _unit(i: int, n: int) -> list[int]:
    return [int(j == i) for j in range(n)]


def _check_leibniz(cr: CohomologyRing) -> None:
    E = cr.omega
    ring = cr.ring
    N = E.n_max
    for k in range(N):
        for l in range(N - k):
            if k + l + 1 > N:
                continue
            dk, dl = cr.coboundary(k), cr.coboundary(l)
            dkl = cr.coboundary(k + l)
            for i in range(E.dims[k]):
                phi = _unit(i, E.dims[k])
                dphi = dk.apply(phi)
                for j in range(E.dims[l]):
                    psi_ = _unit(j, E.dims[l])
                    lhs = dkl.apply(cr.cup(phi, psi_, k, l))
                    a = cr.cup(dphi, psi_, k + 1, l)
                    b = cr.cup(phi, dl.apply(psi_), k, l + 1)
                    sign = -1 if k % 2 else 1
                    rhs = [ring(x + sign * y) for x, y in zip(a, b)]
                    if lhs != rhs:
                        raise InvariantBreach(f"δ is not a derivation of the cup product in degrees ({k},{l})")
