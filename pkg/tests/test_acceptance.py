"""Acceptance criteria, one test each, with wall-clock limits.

Every test prints a ``PASS``/``FAIL`` line; the lines are also collected and
repeated in the pytest terminal summary.  Run standalone with
``python3 tests/test_acceptance.py`` to get just the lines.
"""

import random
import sys
import time
from math import comb
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import hochschild_bar_oracle, random_digraph, random_pair, random_quiver  # noqa: E402

from pathhom.exactalg import ExactMatrix, HomologyGroup, Ring, kernel_basis, kunneth, rank  # noqa: E402
from pathhom.formats import parse_facets, read_text  # noqa: E402
from pathhom.gradedpairs import dual_pair, omega, omega_prime, verify_les  # noqa: E402
from pathhom.groupsub import (  # noqa: E402
    DihedralGroup,
    FreeAbelianGroup,
    PointedSubset,
    coacyclic_check,
    omega_group,
    pontryagin,
    union_split_check,
)
from pathhom.hochschild import (  # noqa: E402
    PointedSubmodule,
    hochschild_ez_check,
    hochschild_homology,
    hochschild_pair,
    load_algebra,
)
from pathhom.nerve import Quiver, diagonal_matrix, ez_aw  # noqa: E402
from pathhom.quiverhom import (  # noqa: E402
    Digraph,
    box,
    cohomology_ring,
    compare_sc_glmy,
    free_cat,
    glmy,
    graph_homology,
    kpower,
    sc,
    simplicial_digraph,
)

Z, Q, F2, F3 = Ring.integers(), Ring.rationals(), Ring.prime_field(2), Ring.prime_field(3)

TRIANGLE = Digraph([0, 1, 2], [(0, 1), (1, 2), (0, 2)])
PARALLEL = Quiver(["u", "v", "w"], {"alpha1": ("u", "v"), "alpha2": ("u", "v"),
                                    "beta1": ("v", "w"), "beta2": ("v", "w")})
KLEIN_FOUR = HomologyGroup(0, (2, 2))

RESULTS: list[str] = []


def check(number: int, title: str, limit: float, body) -> None:
    """Run ``body``, print one line with the verdict and timing, and fail on error or overtime."""
    start = time.perf_counter()
    error = None
    try:
        body()
    except Exception as e:  # reported on the line, then re-raised
        error = e
    elapsed = time.perf_counter() - start
    ok = error is None and elapsed < limit
    reason = "" if ok else (f": {type(error).__name__}: {error}" if error else f": over the {limit} s limit")
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d} ({elapsed:.3f} s, limit {limit} s) {title}{reason}"
    RESULTS.append(line)
    print(line)
    if error is not None:
        raise error
    assert elapsed < limit, line


def betti(om):
    return [h.rank for h in om.homology_all()]


# ---------------------------------------------------------------------------


def criterion_1():
    s = sc(TRIANGLE, Z, 5).homology_all()
    assert s[:2] == [HomologyGroup(1), HomologyGroup(1)]
    assert all(h.is_zero() for h in s[2:])
    assert glmy(TRIANGLE, Z, 3).homology(1).is_zero()


def criterion_2():
    square = box(TRIANGLE, TRIANGLE)
    cube = box(square, TRIANGLE)
    for n, G in ((2, square), (3, cube)):
        h = sc(G, Z, 4).homology_all()
        assert [g.rank for g in h] == [comb(n, i) for i in range(4)]
        assert all(not g.torsion for g in h)


def criterion_3():
    om = sc(PARALLEL, Z, 4)
    assert om.dims == [3, 4, 3, 0, 0]
    assert betti(om)[:3] == [1, 0, 1]
    cycle = {("alpha1", "beta1"): 1, ("alpha1", "beta2"): -1, ("alpha2", "beta1"): -1, ("alpha2", "beta2"): 1}
    coords = om.coordinates(2, cycle)
    assert coords is not None
    vec = [coords.get(i, 0) for i in range(om.dims[2])]
    kernel = kernel_basis(om.complex.boundary(2))
    assert rank(ExactMatrix.from_columns(kernel + [vec], Z, om.dims[2])) == len(kernel) == 1


def criterion_4():
    G = DihedralGroup(4)
    expected = [HomologyGroup(1), KLEIN_FOUR, HomologyGroup(0), KLEIN_FOUR, HomologyGroup(0), KLEIN_FOUR]
    direct = omega_group(PointedSubset.parse(G, "1,x,y"), Z, 6).homology_all()
    assert direct == expected
    x, y = G.parse("x"), G.parse("y")
    report = union_split_check(G, [G.identity, x], [G.identity, y], Z, 6)
    assert [report.left[n] + report.right[n] for n in report.degrees] == expected[1:]


def criterion_5():
    S = parse_facets(read_text("klein.facets")[0])
    assert len({v for f in S.facets for v in f}) == 8
    h = sc(simplicial_digraph(S), Z, 3).homology_all()
    assert h == [HomologyGroup(1), HomologyGroup(1, (2,)), HomologyGroup(0)]


def criterion_6():
    rng = random.Random(6)
    for _ in range(20):
        Qv = random_quiver(rng, rng.randint(1, 5), rng.randint(0, 8))
        om = free_cat(Qv, Z, 4)
        assert all(d == 0 for d in om.dims[2:])
        h = om.homology_all()
        assert h[:2] == graph_homology(Qv, Z)
        assert all(g.is_zero() for g in h[2:])


def criterion_7():
    rng = random.Random(7)
    for ring in (Z, F2):
        for _ in range(20):
            A = sc(random_digraph(rng, rng.randint(1, 4), 0.4), ring, 3)
            B = sc(random_digraph(rng, rng.randint(1, 4), 0.4), ring, 3)
            r = ez_aw(A, B, 3)
            for n in range(4):
                size = len(r.tensor_index[n])
                assert r.alpha[n] @ r.epsilon[n] == ExactMatrix.identity(ring, size)
                assert r.epsilon[n] @ r.alpha[n] == ExactMatrix.identity(ring, r.box.dims[n])
            H, HA, HB = r.box.homology_all(), A.homology_all(), B.homology_all()
            for n in range(len(H)):
                if ring.is_field:
                    assert H[n].rank == sum(HA[i].rank * HB[n - i].rank for i in range(n + 1))
                else:
                    assert H[n] == kunneth(HA, HB, n)


def criterion_8():
    rng = random.Random(8)
    for _ in range(30):
        G = random_digraph(rng, rng.randint(2, 6), 0.4, two_cycles=False)
        while G.triangles():
            a, _, c = G.triangles()[0]
            G = Digraph(G.vertices, [e for e in G.edges if e != (a, c)])
        r = compare_sc_glmy(G, Z, 4)
        assert r.triangle_free and r.isomorphic
        assert r.sc_homology == r.glmy_homology


def criterion_9():
    rng = random.Random(9)
    for _ in range(10):
        Qv = random_quiver(rng, rng.randint(2, 4), rng.randint(2, 6), max_parallel=2)
        assert Qv.power() <= 2
        s, k3, k4 = betti(sc(Qv, Q, 4)), betti(kpower(Qv, 3, Q, 4)), betti(kpower(Qv, 4, Q, 4))
        assert s == k3 == k4


def criterion_10():
    rng = random.Random(10)
    for _ in range(50):
        p = random_pair(rng, F2, max_dim=5)
        top = p.n_max - 1
        assert omega(p).homology_all()[:top + 1] == omega_prime(p).homology_all()[:top + 1]
        assert verify_les(p).exact


def criterion_11():
    rng = random.Random(11)
    for _ in range(30):
        p = random_pair(rng, F3, max_dim=5)
        assert dual_pair(p).psi_dims == omega(p).dims


def criterion_12():
    line = FreeAbelianGroup(1)
    assert coacyclic_check(PointedSubset(line, [0, 1]), 4).coacyclic
    for r in (1, 2, 3):
        G = FreeAbelianGroup(r)
        X = [G.identity] + [G.basis_vector(i) for i in range(1, r + 1)]
        report = coacyclic_check(PointedSubset(G, X), r + 2)
        assert report.coacyclic
        assert report.computed == [HomologyGroup(comb(r, i)) for i in range(r + 2)]


def criterion_13():
    rng = random.Random(13)
    theories = (lambda G: sc(G, Q, 4), lambda G: glmy(G, Q, 4), lambda G: free_cat(G.to_quiver(), Q, 4))
    for t in range(20):
        om = theories[t % 3](random_digraph(rng, rng.randint(2, 5), 0.45))
        cohomology_ring(om)
        for total in range(om.n_max + 1):
            for k in range(total + 1):
                assert om.dims[total] <= om.dims[k] * om.dims[total - k]
                assert rank(diagonal_matrix(om, k, total - k)) == om.dims[total]


def criterion_14():
    A, M = load_algebra(read_text("dual_numbers.json")[0], Q)
    V = PointedSubmodule.whole(A)
    hh = hochschild_homology(hochschild_pair(A, V, M, Q, 5))
    assert hh == hochschild_bar_oracle(A.mult, 0, A.dim, 4) == [2, 1, 1, 1, 1]
    report = hochschild_ez_check((A, V, M), (A, V, M), Q, 3)
    assert report.dims == [4, 8, 12, 16]


def criterion_15():
    G = FreeAbelianGroup(2)
    alg = pontryagin(PointedSubset(G, [G.identity, G.basis_vector(1), G.basis_vector(2)]), Q, 4)
    assert alg.dims == [1, 2, 1, 0]
    u, v = [1, 0], [0, 1]
    uv = alg.multiply(1, u, 1, v)
    assert uv != [0]
    assert alg.multiply(1, v, 1, u) == [-c for c in uv]
    for n in range(4):
        for i in range(alg.dims[n]):
            e = [int(j == i) for j in range(alg.dims[n])]
            assert alg.multiply(0, [1], n, e) == e == alg.multiply(n, e, 0, [1])
    assert alg.multiply(2, alg.multiply(1, u, 1, v), 0, [1]) == alg.multiply(1, u, 1, alg.multiply(1, v, 0, [1]))


CRITERIA = [
    (1, "triangle: sc gives H0 = H1 = Z, higher zero; GLMY H1 = 0", 0.1, criterion_1),
    (2, "box powers of the triangle have binomial Betti numbers (n = 2, 3)", 5.0, criterion_2),
    (3, "parallel pairs: dims 3, 4, 3; H = (Z, 0, Z); the 2-cycle spans the kernel", 0.1, criterion_3),
    (4, "D4 with {1, x, y}: H_odd = (Z/2)^2, H_even = 0; same through the union split", 10.0, criterion_4),
    (5, "Klein bottle: H0 = Z, H1 = Z + Z/2, H2 = 0", 60.0, criterion_5),
    (6, "free category: Ω vanishes above degree 1; graph homology (20 quivers)", 5.0, criterion_6),
    (7, "shuffle and Alexander-Whitney maps inverse; Künneth over Z and F2 (20 pairs each)", 30.0, criterion_7),
    (8, "triangle-free digraphs: sc and GLMY isomorphic (30 digraphs)", 10.0, criterion_8),
    (9, "k-power homology for k = 3, 4 equals sc on quivers of power <= 2 (10 quivers)", 10.0, criterion_9),
    (10, "ω into ω' is a quasi-isomorphism; the long sequence is exact (50 pairs over F2)", 10.0, criterion_10),
    (11, "duality: dim ω_n = dim ψ^n of the dual (30 pairs over F3)", 5.0, criterion_11),
    (12, "coacyclic standard bases of Z^r, r <= 3, with binomial Betti numbers", 10.0, criterion_12),
    (13, "dimension inequality and injective diagonals (20 embedded quivers over Q)", 10.0, criterion_13),
    (14, "Hochschild homology of dual numbers matches the bar oracle; product law", 10.0, criterion_14),
    (15, "Pontryagin product on Z^2: unital, graded-commutative, nonzero degree-2 product", 10.0, criterion_15),
]


@pytest.mark.parametrize("number, title, limit, body", CRITERIA, ids=[f"criterion_{c[0]:02d}" for c in CRITERIA])
def test_criterion(number, title, limit, body):
    check(number, title, limit, body)


def main() -> int:
    failed = 0
    for number, title, limit, body in CRITERIA:
        try:
            check(number, title, limit, body)
        except Exception:  # the line already says why
            failed += 1
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
