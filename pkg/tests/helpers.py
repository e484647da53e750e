"""Random inputs and independent oracles shared by the test modules."""

import random
from itertools import product

import sympy

from pathhom.exactalg import ExactMatrix, Ring
from pathhom.gradedpairs import BoundedComplex, GradedPair
from pathhom.nerve import Quiver
from pathhom.quiverhom import Digraph


def random_digraph(rng: random.Random, n_vertices: int, p: float = 0.4, two_cycles: bool = True) -> Digraph:
    verts = list(range(n_vertices))
    edges = []
    for u in verts:
        for v in verts:
            if u == v or rng.random() >= p:
                continue
            if not two_cycles and (v, u) in edges:
                continue
            edges.append((u, v))
    return Digraph(verts, edges)


def random_quiver(rng: random.Random, n_vertices: int, n_arrows: int, max_parallel: int = 2) -> Quiver:
    verts = list(range(n_vertices))
    arrows = {}
    count = {}
    for k in range(n_arrows):
        u, v = rng.sample(verts, 2) if n_vertices > 1 else (0, 0)
        if u == v or count.get((u, v), 0) >= max_parallel:
            continue
        count[(u, v)] = count.get((u, v), 0) + 1
        arrows[f"a{k}"] = (u, v)
    return Quiver(verts, arrows)


def random_pair(rng: random.Random, ring: Ring, max_dim: int = 5, n_max: int = 4) -> GradedPair:
    """A random bounded complex with random submodules in every degree.

    Boundaries are products ``∂_n = A_n B_n`` arranged so that ``∂∂ = 0``:
    each ``C_n`` splits as ``Z_n ⊕ W_n`` and ``∂_n`` maps ``W_n`` into ``Z_{n-1}``.
    """
    p = ring.p if ring.kind == "Fp" else 5
    z = [rng.randint(0, max_dim) for _ in range(n_max + 1)]
    w = [0] + [rng.randint(0, max(0, max_dim - z[n])) for n in range(1, n_max + 1)]
    dims = [z[n] + w[n] for n in range(n_max + 1)]
    bounds = {}
    for n in range(1, n_max + 1):
        rows = [[0] * dims[n] for _ in range(dims[n - 1])]
        for r in range(z[n - 1]):
            for c in range(z[n], dims[n]):
                rows[r][c] = rng.randrange(p)
        bounds[n] = ExactMatrix(rows, ring, cols=dims[n])
    cx = BoundedComplex(ring, n_max, dims, bounds)
    subs = []
    for n in range(n_max + 1):
        k = rng.randint(0, dims[n])
        cols = [[rng.randrange(p) for _ in range(dims[n])] for _ in range(k)]
        subs.append(ExactMatrix.from_columns(cols, ring, dims[n]))
    cx.check_d2()
    return GradedPair(cx, subs)


# ---------------------------------------------------------------------------
# oracles


def sympy_rank(rows, p: int | None = None) -> int:
    if not rows or not rows[0]:
        return 0
    M = sympy.Matrix(rows)
    if p is None:
        return M.rank()
    from sympy.polys.matrices import DomainMatrix
    from sympy import GF

    return DomainMatrix.from_list_sympy(*M.shape, M.tolist()).convert_to(GF(p)).rank()


def sympy_integer_homology(d_out, d_in, dim):
    """``ker d_out / im d_in`` over Z as ``(rank, torsion)`` via sympy's Smith normal form."""
    from sympy.matrices.normalforms import smith_normal_form

    r_out = sympy_rank(d_out) if d_out else 0
    if d_in and d_in[0]:
        S = smith_normal_form(sympy.Matrix(d_in), domain=sympy.ZZ)
        diag = [abs(S[i, i]) for i in range(min(S.shape)) if S[i, i] != 0]
    else:
        diag = []
    torsion = sorted(int(d) for d in diag if d != 1)
    return dim - r_out - len(diag), torsion


def glmy_oracle_betti(G: Digraph, n_max: int) -> list[int]:
    """Path homology over Q from the definition: ∂-invariant allowed paths.

    Allowed n-paths are walks along edges; the regular boundary deletes one
    vertex at a time and keeps only regular results.  ``Ω_n`` is the space of
    allowed chains whose boundary is allowed.
    """
    E = set(G.edges)
    allowed = [[(v,) for v in G.vertices]]
    for n in range(1, n_max + 2):
        allowed.append([p + (w,) for p in allowed[-1] for w in G.vertices if (p[-1], w) in E])

    def regular_paths(n):
        return [p for p in product(G.vertices, repeat=n + 1) if all(p[i] != p[i + 1] for i in range(n))]

    def boundary(p):
        out = {}
        for i in range(len(p)):
            q = p[:i] + p[i + 1:]
            if all(q[j] != q[j + 1] for j in range(len(q) - 1)):
                out[q] = out.get(q, 0) + (-1) ** i
        return out

    omegas = []
    for n in range(n_max + 2):
        A = allowed[n]
        if n == 0:
            omegas.append([{p: 1} for p in A])
            continue
        allowed_below = set(allowed[n - 1])
        reg_below = regular_paths(n - 1)
        bad = [q for q in reg_below if q not in allowed_below]
        if not A:
            omegas.append([])
            continue
        M = sympy.Matrix([[boundary(p).get(q, 0) for p in A] for q in bad]) if bad else sympy.zeros(0, len(A))
        ns = M.nullspace() if bad else [sympy.Matrix([int(i == j) for i in range(len(A))]) for j in range(len(A))]
        omegas.append([{A[i]: v[i] for i in range(len(A)) if v[i] != 0} for v in ns])

    def bmatrix(n):
        src, tgt = omegas[n], omegas[n - 1]
        keys = sorted({q for c in tgt for q in c} | {q for c in src for p in c for q in boundary(p)}, key=str)
        T = sympy.Matrix([[c.get(q, 0) for c in tgt] for q in keys]) if tgt else sympy.zeros(len(keys), 0)
        cols = []
        for c in src:
            img = {}
            for p, a in c.items():
                for q, b in boundary(p).items():
                    img[q] = img.get(q, 0) + a * b
            cols.append([img.get(q, 0) for q in keys])
        return T, sympy.Matrix(cols).T if cols else sympy.zeros(len(keys), 0)

    ranks = [0]
    for n in range(1, n_max + 2):
        if not omegas[n] or not omegas[n - 1]:
            ranks.append(0)
            continue
        T, D = bmatrix(n)
        sol = T.gauss_jordan_solve(D)[0]
        ranks.append(sol.rank())
    return [len(omegas[n]) - ranks[n] - ranks[n + 1] for n in range(n_max + 1)]


def simplicial_oracle(facets):
    """Integral simplicial homology from the facet list (sympy Smith normal form)."""
    from itertools import combinations

    simplices = set()
    for f in facets:
        f = sorted(f)
        for r in range(1, len(f) + 1):
            simplices.update(combinations(f, r))
    by_dim = {}
    for s in simplices:
        by_dim.setdefault(len(s) - 1, []).append(s)
    for d in by_dim:
        by_dim[d].sort()
    top = max(by_dim)

    def bd(d):
        if d == 0 or d > top:
            return []
        idx = {s: i for i, s in enumerate(by_dim[d - 1])}
        rows = [[0] * len(by_dim[d]) for _ in by_dim[d - 1]]
        for j, s in enumerate(by_dim[d]):
            for i in range(len(s)):
                rows[idx[s[:i] + s[i + 1:]]][j] += (-1) ** i
        return rows

    return [sympy_integer_homology(bd(d), bd(d + 1), len(by_dim[d])) for d in range(top + 1)]


def hochschild_bar_oracle(mult, unit_index: int, dim: int, n_max: int) -> list[int]:
    """Unnormalised Hochschild complex ``Λ ⊗ Λ^{⊗n}`` with coefficients in ``Λ``; returns dims of HH_n."""

    def prod(i, j):
        return mult.get((i, j), {})

    def face(i, word):
        n = len(word) - 1
        out = {}
        if i < n:
            for k, c in prod(word[i], word[i + 1]).items():
                w = word[:i] + (k,) + word[i + 2:]
                out[w] = out.get(w, 0) + c
        else:
            for k, c in prod(word[n], word[0]).items():
                w = (k,) + word[1:n]
                out[w] = out.get(w, 0) + c
        return out

    def matrix(n):
        src = list(product(range(dim), repeat=n + 1))
        tgt = {w: r for r, w in enumerate(product(range(dim), repeat=n))}
        rows = [[0] * len(src) for _ in tgt]
        for j, w in enumerate(src):
            for i in range(n + 1):
                for v, c in face(i, w).items():
                    rows[tgt[v]][j] += (-1) ** i * c
        return rows

    ranks = [0] + [sympy_rank(matrix(n)) for n in range(1, n_max + 2)]
    return [dim ** (n + 1) - ranks[n] - ranks[n + 1] for n in range(n_max + 1)]
