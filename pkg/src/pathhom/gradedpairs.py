"""Chain complexes with a graded submodule.

For a bounded complex ``C`` and a graded submodule ``D`` (not necessarily a
subcomplex) this module builds

* ``omega``: the largest subcomplex inside ``D``, ``D_n ∩ ∂^{-1}(D_{n-1})``;
* ``omega_prime``: the smallest subcomplex containing ``D``, ``D_n + ∂D_{n+1}``;
* ``psi``: the quotient ``C / omega_prime``;

and checks the long exact sequence relating them, field duality and tensor
products of pairs.

Truncation: complexes carry ``n_max``.  Homology is certified for degrees
``<= n_max - 1`` because ``omega`` needs the boundary out of degree ``n+1``
and ``omega_prime``/``psi`` need ``D_{n+1}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import CompositionNotZero, InvariantBreach, NotExact, RingMismatch, UnequalInducedMaps, UnsupportedCombination, ValidationError
from .exactalg import (
    Echelon,
    ExactMatrix,
    HomologyGroup,
    Ring,
    echelon_rows,
    homology_at,
    kernel_rows,
    left_annihilator,
    rank,
    saturate,
)


def _dense(vec: dict, n: int) -> list:
    out = [0] * n
    for i, x in vec.items():
        out[i] = x
    return out


def _sparse(vec: Sequence) -> dict:
    return {i: x for i, x in enumerate(vec) if x}


@dataclass
class BoundedComplex:
    """A chain complex concentrated in degrees ``0..n_max``.

    ``boundaries[n]`` is the matrix of ``∂_n : C_n -> C_{n-1}`` for
    ``1 <= n <= n_max``.  ``embedding[n]``, when present, records the basis
    of ``C_n`` as columns in some ambient complex.
    """

    ring: Ring
    n_max: int
    dims: list[int]
    boundaries: dict[int, ExactMatrix]
    basis_labels: list[list] | None = None
    embedding: list[ExactMatrix] | None = None
    certified_max: int | None = None

    def __post_init__(self):
        if len(self.dims) != self.n_max + 1:
            raise ValidationError("dims must cover degrees 0..n_max")
        for n in range(1, self.n_max + 1):
            d = self.boundaries.get(n)
            if d is None:
                d = ExactMatrix.zeros(self.ring, self.dims[n - 1], self.dims[n])
                self.boundaries[n] = d
            if d.shape != (self.dims[n - 1], self.dims[n]):
                raise ValidationError(f"boundary {n} has shape {d.shape}, expected "
                                      f"{(self.dims[n - 1], self.dims[n])}")
        if self.certified_max is None:
            self.certified_max = self.n_max - 1

    def boundary(self, n: int) -> ExactMatrix:
        """``∂_n``; zero out of degree 0 and, by truncation, into degree ``n_max``."""
        if n <= 0:
            return ExactMatrix.zeros(self.ring, 0, self.dims[0] if self.dims else 0)
        if n > self.n_max:
            return ExactMatrix.zeros(self.ring, self.dims[self.n_max], 0)
        return self.boundaries[n]

    def check_d2(self) -> None:
        for n in range(2, self.n_max + 1):
            prod = self.boundaries[n - 1] @ self.boundaries[n]
            if not prod.is_zero():
                raise CompositionNotZero(f"∂_{n - 1}∂_{n} is not zero")

    def homology(self, n: int) -> HomologyGroup:
        return homology_at(self.boundary(n), self.boundary(n + 1), self.ring)

    def homology_all(self) -> list[HomologyGroup]:
        return [self.homology(n) for n in range(self.certified_max + 1)]

    def betti(self) -> list[int]:
        return [h.rank for h in self.homology_all()]


def _complex_from_bases(ambient: BoundedComplex, bases: list[list[list]], top: int | None = None,
                        certified_max: int | None = None) -> BoundedComplex:
    """Subcomplex spanned by echelon bases (dense rows in ambient coordinates)."""
    ring = ambient.ring
    n_max = ambient.n_max if top is None else top
    dims = [len(b) for b in bases[: n_max + 1]]
    ech = [Echelon([_sparse(v) for v in b], ring) for b in bases[: n_max + 1]]
    order = [[_dense(r, ambient.dims[n]) for r in ech[n].rows] for n in range(n_max + 1)]
    boundaries = {}
    for n in range(1, n_max + 1):
        d = ambient.boundaries[n]
        cols = []
        for v in order[n]:
            image = _sparse(d.apply(v))
            c = ech[n - 1].coordinates(image)
            if c is None:
                raise InvariantBreach(f"boundary of a degree-{n} basis vector leaves the subcomplex")
            cols.append(c)
        boundaries[n] = ExactMatrix.from_sparse_columns(cols, ring, dims[n - 1])
    embedding = [ExactMatrix.from_columns(order[n], ring, ambient.dims[n]) for n in range(n_max + 1)]
    return BoundedComplex(ring, n_max, dims, boundaries, None, embedding, certified_max)


@dataclass
class GradedPair:
    """A bounded complex with a per-degree submodule ``D_n ⊆ C_n``.

    ``sub_basis[n]`` holds columns spanning ``D_n``.  Over Z the span is
    saturated on construction so that ``D_n`` is a direct summand.
    """

    ambient: BoundedComplex
    sub_basis: list[ExactMatrix]
    _rows: list[list[list]] = field(init=False, repr=False)

    def __post_init__(self):
        amb = self.ambient
        if len(self.sub_basis) != amb.n_max + 1:
            raise ValidationError("sub_basis must cover degrees 0..n_max")
        rows = []
        for n, D in enumerate(self.sub_basis):
            if D.rows != amb.dims[n]:
                raise ValidationError(f"sub_basis[{n}] has {D.rows} rows, expected {amb.dims[n]}")
            rows.append(saturate(D.columns(), amb.ring, amb.dims[n]))
        self._rows = rows
        self.sub_basis = [ExactMatrix.from_columns(r, amb.ring, amb.dims[n]) for n, r in enumerate(rows)]

    @property
    def ring(self) -> Ring:
        return self.ambient.ring

    @property
    def n_max(self) -> int:
        return self.ambient.n_max

    def sub_rows(self, n: int) -> list[list]:
        return self._rows[n]


def _matmul_rows(rows: list[list], M: ExactMatrix) -> list[list]:
    """``rows · M`` for a list of row vectors."""
    cols = M.columns()
    ring = M.ring
    return [[ring(sum(a * b for a, b in zip(r, c) if a and b)) for c in cols] for r in rows]


def omega_bases(p: GradedPair) -> list[list[list]]:
    ring = p.ring
    amb = p.ambient
    out = [p.sub_rows(0)]
    for n in range(1, p.n_max + 1):
        D = p.sub_rows(n)
        if not D:
            out.append([])
            continue
        ann = left_annihilator(p.sub_rows(n - 1), ring, amb.dims[n - 1])
        # condition on coefficient vectors c: ann · ∂ · (Σ c_i D_i) = 0
        dD = [amb.boundaries[n].apply(v) for v in D]  # ∂ of each generator
        if ann:
            M = [[ring(sum(a * b for a, b in zip(row, col) if a and b)) for col in dD] for row in ann]
            coeffs = kernel_rows(M, ring, len(D))
        else:
            coeffs = kernel_rows([], ring, len(D))
        vecs = [[ring(sum(c[i] * D[i][j] for i in range(len(D)) if c[i])) for j in range(amb.dims[n])]
                for c in coeffs]
        out.append(echelon_rows(vecs, ring, amb.dims[n])[0] if vecs else [])
    return out


def omega(p: GradedPair) -> BoundedComplex:
    """The largest subcomplex contained in ``D``, with its inclusion."""
    return _complex_from_bases(p.ambient, omega_bases(p))


def omega_prime_bases(p: GradedPair) -> list[list[list]]:
    ring = p.ring
    amb = p.ambient
    out = []
    for n in range(p.n_max + 1):
        gens = [list(v) for v in p.sub_rows(n)]
        if n < p.n_max:
            gens += [amb.boundaries[n + 1].apply(v) for v in p.sub_rows(n + 1)]
        gens = [g for g in gens if any(g)]
        out.append(echelon_rows(gens, ring, amb.dims[n])[0] if gens else [])
    return out


def omega_prime(p: GradedPair) -> BoundedComplex:
    """The smallest subcomplex containing ``D``; degree ``n_max`` is only ``D``."""
    return _complex_from_bases(p.ambient, omega_prime_bases(p))


def _require_field(ring: Ring, what: str) -> None:
    if not ring.is_field:
        raise UnsupportedCombination(f"{what} is computed over a field only (got {ring})")


def psi(p: GradedPair) -> BoundedComplex:
    """The quotient complex ``C / omega_prime`` (field coefficients)."""
    ring = p.ring
    _require_field(ring, "the quotient complex psi")
    amb = p.ambient
    wp = omega_prime_bases(p)
    ech = [Echelon([_sparse(v) for v in b], ring) for b in wp]
    keep = []
    for n in range(p.n_max + 1):
        piv = set(ech[n].pivots)
        keep.append([i for i in range(amb.dims[n]) if i not in piv])

    def reduce(vec: dict, n: int) -> dict:
        y = dict(vec)
        for pv, row in zip(ech[n].pivots, ech[n].rows):
            a = y.get(pv)
            if a:
                c = ring.div(a, row[pv])
                for k, v in row.items():
                    nv = ring(y.get(k, 0) - c * v)
                    if nv:
                        y[k] = nv
                    else:
                        y.pop(k, None)
        return y

    dims = [len(k) for k in keep]
    boundaries = {}
    for n in range(1, p.n_max + 1):
        pos = {c: i for i, c in enumerate(keep[n - 1])}
        cols = []
        for q in keep[n]:
            image = reduce(_sparse(amb.boundaries[n].column(q)), n - 1)
            cols.append({pos[k]: v for k, v in image.items()})
        boundaries[n] = ExactMatrix.from_sparse_columns(cols, ring, dims[n - 1])
    labels = None
    if amb.basis_labels is not None:
        labels = [[amb.basis_labels[n][i] for i in keep[n]] for n in range(p.n_max + 1)]
    out = BoundedComplex(ring, p.n_max, dims, boundaries, labels)
    out.quotient_keep = keep  # type: ignore[attr-defined]
    return out


# ---------------------------------------------------------------------------
# long exact sequence


def _span_rank(vectors: list[list], ring: Ring, n: int) -> int:
    vectors = [v for v in vectors if any(v)]
    if not vectors:
        return 0
    return len(echelon_rows(vectors, ring, n)[1])


@dataclass
class LESReport:
    """Dimensions and ranks around the long exact sequence, degree by degree.

    ``nodes[n] = (dim H_n(ω'), dim H_n(C), dim H^a_n)`` and
    ``maps[n] = (rank i_*, rank p_*, rank δ_n)``, where ``δ_n`` goes from
    ``H^a_n`` to ``H_{n-1}(ω')``.
    """

    degrees: list[int]
    nodes: dict[int, tuple[int, int, int]]
    maps: dict[int, tuple[int, int, int]]
    omega_dims: dict[int, int]
    psi_from_quotient: dict[int, int]
    inclusion_rank: dict[int, int]
    exact: bool


def verify_les(p: GradedPair, field_ring: Ring | None = None) -> LESReport:
    """Build ``0 -> ω' -> C -> ψ -> 0`` and check exactness of its homology sequence."""
    ring = field_ring or p.ring
    if ring != p.ring:
        raise RingMismatch(f"pair is over {p.ring}, requested {ring}")
    _require_field(ring, "the long exact sequence check")
    amb = p.ambient
    wp = omega_prime_bases(p)
    top = p.n_max - 1
    degrees = list(range(top + 1))

    def boundary_images(n: int, vecs: list[list]) -> list[list]:
        if n == 0:
            return []
        return [amb.boundaries[n].apply(v) for v in vecs]

    def cycles_in(n: int, vecs: list[list]) -> list[list]:
        """Vectors of span(vecs) whose boundary vanishes."""
        if not vecs:
            return []
        if n == 0:
            return vecs
        imgs = boundary_images(n, vecs)
        rows = [[imgs[j][i] for j in range(len(vecs))] for i in range(amb.dims[n - 1])]
        coeffs = kernel_rows(rows, ring, len(vecs))
        return [[ring(sum(c[j] * vecs[j][i] for j in range(len(vecs)) if c[j])) for i in range(amb.dims[n])]
                for c in coeffs]

    def full(n: int) -> list[list]:
        return [[int(i == j) for i in range(amb.dims[n])] for j in range(amb.dims[n])]

    def relative_cycles(n: int) -> list[list]:
        """``{x in C_n : ∂x in ω'_{n-1}}``."""
        if n == 0:
            return full(0)
        d = amb.dims[n]
        ann = left_annihilator(wp[n - 1], ring, amb.dims[n - 1])
        if not ann:
            return full(n)
        M = _matmul_rows(ann, amb.boundaries[n])
        return kernel_rows(M, ring, d)

    nodes, maps, omega_dims, psi_q, inclusion_rank = {}, {}, {}, {}, {}
    quotient = psi(p)
    om = omega(p)
    for n in degrees:
        dn = amb.dims[n]
        Bw = boundary_images(n + 1, wp[n + 1]) if n + 1 <= p.n_max else []
        Zw = cycles_in(n, wp[n])
        ZC = cycles_in(n, full(n))
        BC = boundary_images(n + 1, full(n + 1))
        Zpsi = relative_cycles(n)
        rB_w = _span_rank(Bw, ring, dn)
        rB_C = _span_rank(BC, ring, dn)
        r_BC_w = _span_rank(BC + wp[n], ring, dn)
        h_w = _span_rank(Zw, ring, dn) - rB_w
        h_C = _span_rank(ZC, ring, dn) - rB_C
        h_psi = _span_rank(Zpsi, ring, dn) - r_BC_w
        i_star = _span_rank(Zw + BC, ring, dn) - rB_C
        p_star = _span_rank(ZC + BC + wp[n], ring, dn) - r_BC_w
        if n >= 1:
            prev = amb.dims[n - 1]
            Bw_prev = boundary_images(n, wp[n])
            delta = _span_rank(boundary_images(n, Zpsi) + Bw_prev, ring, prev) - _span_rank(Bw_prev, ring, prev)
        else:
            delta = 0
        nodes[n] = (h_w, h_C, h_psi)
        maps[n] = (i_star, p_star, delta)
        omega_dims[n] = om.homology(n).rank
        # rank of H_n(ω) -> H_n(ω'): cycles of ω modulo boundaries of ω'
        Zom = cycles_in(n, [om.embedding[n].column(j) for j in range(om.dims[n])])
        inclusion_rank[n] = _span_rank(Zom + Bw, ring, dn) - rB_w
        psi_q[n] = quotient.homology(n).rank

    exact = True
    failure = None
    for n in degrees:
        h_w, h_C, h_psi = nodes[n]
        i_star, p_star, delta = maps[n]
        delta_up = maps[n + 1][2] if n + 1 in maps else None
        checks = [("H(C)", h_C, i_star + p_star), ("H^a", h_psi, p_star + delta)]
        if delta_up is not None:
            checks.append(("H(omega')", h_w, delta_up + i_star))
        for name, dim, total in checks:
            if dim != total:
                exact = False
                failure = failure or f"{name}_{n}: dim {dim} != {total}"
        if not (omega_dims[n] == h_w == inclusion_rank[n]):
            exact = False
            failure = failure or (f"H_{n}(omega) -> H_{n}(omega') has rank {inclusion_rank[n]} "
                                  f"between dims {omega_dims[n]} and {h_w}")
        if psi_q[n] != h_psi:
            exact = False
            failure = failure or f"quotient complex gives dim H^a_{n} = {psi_q[n]}, sequence gives {h_psi}"
    report = LESReport(degrees, nodes, maps, omega_dims, psi_q, inclusion_rank, exact)
    if not exact:
        raise NotExact(failure)
    return report


# ---------------------------------------------------------------------------
# duality


@dataclass
class CochainPair:
    """The dual pair ``(C^∨, K)`` with ``K^n = Ker(C_n^∨ -> D_n^∨)``.

    The cochain complex is stored as a chain complex with reversed grading:
    cochain degree ``n`` sits in chain degree ``n_max - n``.
    """

    pair: GradedPair
    n_max: int
    psi_dims: list[int]
    omega_dims: list[int]

    def chain_degree(self, n: int) -> int:
        return self.n_max - n


def dual_pair(p: GradedPair, field_ring: Ring | None = None) -> CochainPair:
    ring = field_ring or p.ring
    if ring != p.ring:
        raise RingMismatch(f"pair is over {p.ring}, requested {ring}")
    _require_field(ring, "duality")
    amb = p.ambient
    N = p.n_max
    rev_dims = [amb.dims[N - j] for j in range(N + 1)]
    rev_bd = {}
    for j in range(1, N + 1):
        n = N - j  # δ^n : C^n -> C^{n+1} is the transpose of ∂_{n+1}
        rev_bd[j] = amb.boundaries[n + 1].T
    rev = BoundedComplex(ring, N, rev_dims, rev_bd)
    subs = []
    for j in range(N + 1):
        n = N - j
        ann = left_annihilator(p.sub_rows(n), ring, amb.dims[n])
        subs.append(ExactMatrix.from_columns(ann, ring, amb.dims[n]))
    dual = GradedPair(rev, subs)
    q = psi(dual)
    psi_dims = [q.dims[N - n] for n in range(N + 1)]
    omega_dims = omega(p).dims
    if psi_dims != omega_dims:
        raise InvariantBreach(f"duality dimensions differ: omega {omega_dims} vs psi {psi_dims}")
    return CochainPair(dual, N, psi_dims, omega_dims)


# ---------------------------------------------------------------------------
# tensor products


def _kron(u: Sequence, v: Sequence, ring: Ring) -> list:
    return [ring(a * b) for a in u for b in v]


def tensor_complex(C: BoundedComplex, Cp: BoundedComplex) -> tuple[BoundedComplex, list[list[tuple[int, int, int]]]]:
    """``C ⊗ C'`` with ``∂(x⊗y) = ∂x⊗y + (-1)^|x| x⊗∂y``; also returns the index map."""
    if C.ring != Cp.ring:
        raise RingMismatch(f"{C.ring} vs {Cp.ring}")
    ring = C.ring
    N = min(C.n_max, Cp.n_max)
    index: list[list[tuple[int, int, int]]] = []
    for n in range(N + 1):
        index.append([(i, a, b) for i in range(n + 1) for a in range(C.dims[i]) for b in range(Cp.dims[n - i])])
    pos = [{t: k for k, t in enumerate(ix)} for ix in index]
    boundaries = {}
    for n in range(1, N + 1):
        cols = []
        for (i, a, b) in index[n]:
            col: dict[int, object] = {}
            if i >= 1:
                for r, x in enumerate(C.boundaries[i].column(a)):
                    if x:
                        k = pos[n - 1][(i - 1, r, b)]
                        col[k] = ring(col.get(k, 0) + x)
            j = n - i
            if j >= 1:
                sign = -1 if i % 2 else 1
                for r, y in enumerate(Cp.boundaries[j].column(b)):
                    if y:
                        k = pos[n - 1][(i, a, r)]
                        col[k] = ring(col.get(k, 0) + sign * y)
            cols.append({k: v for k, v in col.items() if v})
        boundaries[n] = ExactMatrix.from_sparse_columns(cols, ring, len(index[n - 1]))
    labels = None
    if C.basis_labels is not None and Cp.basis_labels is not None:
        labels = [[(C.basis_labels[i][a], Cp.basis_labels[n - i][b]) for (i, a, b) in index[n]]
                  for n in range(N + 1)]
    out = BoundedComplex(ring, N, [len(ix) for ix in index], boundaries, labels)
    return out, index


def _tensor_rows(rows_by_deg: list[list[list]], rows_by_deg_p: list[list[list]], index_n: list, n: int,
                 ring: Ring) -> list[list]:
    pos = {t: k for k, t in enumerate(index_n)}
    out = []
    for i in range(n + 1):
        j = n - i
        if i >= len(rows_by_deg) or j >= len(rows_by_deg_p):
            continue
        for u in rows_by_deg[i]:
            for v in rows_by_deg_p[j]:
                vec = [0] * len(index_n)
                for a, x in enumerate(u):
                    if x:
                        for b, y in enumerate(v):
                            if y:
                                vec[pos[(i, a, b)]] = ring(x * y)
                out.append(vec)
    return out


def tensor_pair(p: GradedPair, pp: GradedPair) -> GradedPair:
    """``(C ⊗ C', D ⊗ D')`` and a check that ``ω`` commutes with ``⊗``."""
    if p.ring != pp.ring:
        raise RingMismatch(f"{p.ring} vs {pp.ring}")
    ring = p.ring
    T, index = tensor_complex(p.ambient, pp.ambient)
    N = T.n_max
    subs = []
    for n in range(N + 1):
        rows = _tensor_rows([p.sub_rows(i) for i in range(N + 1)], [pp.sub_rows(i) for i in range(N + 1)],
                            index[n], n, ring)
        subs.append(ExactMatrix.from_columns(rows, ring, T.dims[n]))
    out = GradedPair(T, subs)
    # ω(p) ⊗ ω(p') and ω(p ⊗ p') must span the same lattice degreewise
    wa, wb, wt = omega_bases(p), omega_bases(pp), omega_bases(out)
    for n in range(N + 1):
        prod = _tensor_rows(wa, wb, index[n], n, ring)
        lhs = echelon_rows(prod, ring, T.dims[n])[0] if prod else []
        if lhs != wt[n]:
            raise InvariantBreach(f"omega does not commute with the tensor product in degree {n}")
    return out


# ---------------------------------------------------------------------------
# morphisms, cylinders and homotopies


def cylinder(p: GradedPair) -> GradedPair:
    """``cyl(C, D)`` with ``cyl(C)_n = C_n ⊕ C_{n-1} ⊕ C_n``."""
    ring = p.ring
    C = p.ambient
    N = C.n_max
    dims = [C.dims[n] + (C.dims[n - 1] if n else 0) + C.dims[n] for n in range(N + 1)]
    bd = {}
    for n in range(1, N + 1):
        a, b, c = C.dims[n], C.dims[n - 1], C.dims[n]
        a1, b1, c1 = C.dims[n - 1], (C.dims[n - 2] if n >= 2 else 0), C.dims[n - 1]
        M = [[0] * (a + b + c) for _ in range(a1 + b1 + c1)]
        dn = C.boundaries[n]
        dm = C.boundaries[n - 1] if n >= 2 else None
        for i in range(a1):
            for j in range(a):
                M[i][j] = dn[i, j]                 # d on the first copy
                M[a1 + b1 + i][a + b + j] = dn[i, j]  # d on the last copy
        for i in range(b):
            M[i][a + i] = 1                        # + identity into the first copy
            M[a1 + b1 + i][a + i] = -1             # - identity into the last copy
        if dm is not None:
            for i in range(b1):
                for j in range(b):
                    M[a1 + i][a + j] = -dm[i, j]   # - d on the middle copy
        bd[n] = ExactMatrix(M, ring, a + b + c)
    cyl = BoundedComplex(ring, N, dims, bd)
    subs = []
    for n in range(N + 1):
        cols = []
        a, b = C.dims[n], (C.dims[n - 1] if n else 0)
        for v in p.sub_rows(n):
            cols.append(list(v) + [0] * b + [0] * a)
        if n:
            for v in p.sub_rows(n - 1):
                cols.append([0] * a + list(v) + [0] * a)
        for v in p.sub_rows(n):
            cols.append([0] * a + [0] * b + list(v))
        subs.append(ExactMatrix.from_columns(cols, ring, dims[n]))
    return GradedPair(cyl, subs)


def induced_map_on_omega(src: GradedPair, tgt: GradedPair, maps: list[ExactMatrix]) -> list[ExactMatrix]:
    """Matrices of ``ω(src) -> ω(tgt)`` induced by a pair morphism given degreewise."""
    ring = src.ring
    wa = omega(src)
    wb_rows = omega_bases(tgt)
    out = []
    for n in range(min(src.n_max, tgt.n_max) + 1):
        ech = Echelon([_sparse(v) for v in wb_rows[n]], ring)
        cols = []
        for v in wa.embedding[n].columns():
            c = ech.coordinates(_sparse(maps[n].apply(v)))
            if c is None:
                raise ValidationError(f"map does not send omega into omega in degree {n}")
            cols.append(c)
        out.append(ExactMatrix.from_sparse_columns(cols, ring, len(wb_rows[n])))
    return out


def maps_agree_on_homology(src: BoundedComplex, tgt: BoundedComplex, F: list[ExactMatrix],
                           G: list[ExactMatrix], degrees: Sequence[int]) -> bool:
    """``F_* = G_*`` on ``H_n`` for the given degrees (over any supported ring)."""
    ring = src.ring
    for n in degrees:
        cycles = kernel_rows(src.boundary(n).to_lists(), ring, src.dims[n]) if src.boundary(n).rows else \
            [[int(i == j) for i in range(src.dims[n])] for j in range(src.dims[n])]
        d_in = tgt.boundary(n + 1)
        bounds = echelon_rows(d_in.columns(), ring, tgt.dims[n])[0] if d_in.cols else []
        ech = Echelon([_sparse(b) for b in bounds], ring)
        for z in cycles:
            diff = [ring(a - b) for a, b in zip(F[n].apply(z), G[n].apply(z))]
            if ech.coordinates(_sparse(diff)) is None:
                return False
    return True


def pair_homotopy_check(p: GradedPair, q: GradedPair, f: list[ExactMatrix], g: list[ExactMatrix],
                        h: list[ExactMatrix]) -> bool:
    """Validate ``H = (f, h, g): cyl(p) -> q`` and compare the induced maps on ``ω``.

    ``h[n]`` maps ``C_n -> C'_{n+1}``.  The data is a homotopy of pairs iff
    ``f - g = h∂ + ∂h`` and ``h(D) ⊆ D'``; then ``ω f`` and ``ω g`` must
    induce the same map on homology.
    """
    ring = p.ring
    N = min(p.n_max, q.n_max) - 1
    C, Cq = p.ambient, q.ambient
    for n in range(N + 1):
        lhs = [[ring(f[n][i, j] - g[n][i, j]) for j in range(C.dims[n])] for i in range(Cq.dims[n])]
        rhs = ExactMatrix.zeros(ring, Cq.dims[n], C.dims[n])
        if n >= 1:
            rhs = _add(rhs, h[n - 1] @ C.boundaries[n])
        rhs = _add(rhs, Cq.boundaries[n + 1] @ h[n])
        if rhs.to_lists() != lhs:
            raise ValidationError(f"f - g != h∂ + ∂h in degree {n}")
        ech = Echelon([_sparse(v) for v in q.sub_rows(n + 1)], ring)
        for v in p.sub_rows(n):
            if ech.coordinates(_sparse(h[n].apply(v))) is None:
                raise ValidationError(f"h does not preserve the submodule in degree {n}")
    Fw = induced_map_on_omega(p, q, f)
    Gw = induced_map_on_omega(p, q, g)
    if not maps_agree_on_homology(omega(p), omega(q), Fw, Gw, range(N + 1)):
        raise UnequalInducedMaps("homotopic pair morphisms induce different maps on homology")
    return True


def _add(A: ExactMatrix, B: ExactMatrix) -> ExactMatrix:
    ring = A.ring
    return ExactMatrix([[ring(A[i, j] + B[i, j]) for j in range(A.cols)] for i in range(A.rows)], ring, A.cols)


def rank_of(M: ExactMatrix) -> int:
    return rank(M)
