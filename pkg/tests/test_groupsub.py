"""Homology of pointed subsets of groups."""

import random
from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pathhom.errors import (
    HypothesisViolated,
    IdentityMissing,
    NotAbelian,
    NotAssociative,
    NotField,
    ParseError,
    UnequalInducedMaps,
    UnsupportedAmbient,
    ValidationError,
)
from pathhom.exactalg import HomologyGroup, Ring
from pathhom.groupsub import (
    CyclicGroup,
    DihedralGroup,
    FreeAbelianGroup,
    FreeGroup,
    PointedSubset,
    ProductGroup,
    coacyclic_check,
    conjugation_check,
    omega_group,
    parse_builtin,
    parse_cayley,
    pontryagin,
    shuffle_product,
    union_hypothesis_witnesses,
    union_split_check,
    wedge,
    wedge_check,
)

Z = Ring.integers()
Q = Ring.rationals()
F2 = Ring.prime_field(2)

C2_TABLE = """
e a
e a
a e
"""

ZERO = HomologyGroup(0)
Z1 = HomologyGroup(1)
KLEIN_FOUR = HomologyGroup(0, (2, 2))


def d4_subset(text="1,x,y"):
    return PointedSubset.parse(DihedralGroup(4), text)


# ---------------------------------------------------------------------------
# Ω(G, X)


def test_trivial_subset_has_only_degree_zero():
    for G in (CyclicGroup(5), DihedralGroup(3), FreeAbelianGroup(2), FreeGroup(2)):
        om = omega_group(PointedSubset(G, [G.identity]), Z, 4)
        assert om.dims == [1, 0, 0, 0, 0]
        assert om.homology_all() == [Z1, ZERO, ZERO, ZERO]


def test_identity_is_required():
    with pytest.raises(IdentityMissing):
        PointedSubset(CyclicGroup(3), [1, 2])


def test_dihedral_subset_has_periodic_two_torsion():
    hom = omega_group(d4_subset(), Z, 6).homology_all()
    assert hom == [Z1, KLEIN_FOUR, ZERO, KLEIN_FOUR, ZERO, KLEIN_FOUR]


def test_integers_with_zero_and_one():
    G = FreeAbelianGroup(1)
    om = omega_group(PointedSubset(G, [0, 1]), Z, 5)
    assert om.dims[:3] == [1, 1, 0]
    assert om.homology_all() == [Z1, Z1, ZERO, ZERO, ZERO]


@pytest.mark.parametrize("ring", [Z, Q, F2])
def test_low_degree_dimensions(ring):
    rng = random.Random(5)
    for G in (CyclicGroup(6), DihedralGroup(3), ProductGroup(CyclicGroup(2), CyclicGroup(4))):
        els = G.elements()
        for _ in range(4):
            X = [G.identity] + rng.sample(els[1:], rng.randint(0, 3))
            om = omega_group(PointedSubset(G, X), ring, 3)
            assert om.dims[0] == 1
            assert om.dims[1] == len(set(X)) - 1
            assert om.homology(0) == Z1


# ---------------------------------------------------------------------------
# coacyclicity


@pytest.mark.parametrize("r", [1, 2, 3])
def test_standard_basis_is_coacyclic(r):
    G = FreeAbelianGroup(r)
    X = [G.identity] + [G.basis_vector(i) for i in range(1, r + 1)]
    report = coacyclic_check(PointedSubset(G, X), r + 2)
    assert report.coacyclic and report.first_failure is None
    assert [h.rank for h in report.computed] == [comb(r, i) for i in range(r + 2)]
    assert all(not h.torsion for h in report.computed)


def test_free_group_generators_are_coacyclic():
    G = FreeGroup(2)
    report = coacyclic_check(PointedSubset.parse(G, "1,x1,x2"), 4)
    assert report.coacyclic
    assert report.computed == [Z1, HomologyGroup(2), ZERO, ZERO]


def test_free_group_side_of_the_nilpotent_non_example_has_no_h2():
    for r in (2, 3):
        G = FreeGroup(r)
        X = [G.identity] + [G.generator(i) for i in range(1, r + 1)]
        assert omega_group(PointedSubset(G, X), Z, 4).homology(2) == ZERO


def test_whole_finite_group_is_coacyclic():
    G = CyclicGroup(3)
    report = coacyclic_check(PointedSubset(G, G.elements()), 4)
    assert report.coacyclic
    assert report.reference_source.startswith("Ω(G, G)")


def test_generator_of_a_finite_cyclic_group_is_not_coacyclic():
    G = CyclicGroup(4)
    report = coacyclic_check(PointedSubset(G, [0, 1]), 4)
    assert not report.coacyclic
    assert report.first_failure == 1
    assert report.computed[1] == Z1
    assert report.reference[1] == HomologyGroup(0, (4,))


def test_coacyclic_needs_a_reference():
    G = ProductGroup(FreeAbelianGroup(1), CyclicGroup(2))
    with pytest.raises(UnsupportedAmbient):
        coacyclic_check(PointedSubset(G, [G.identity]), 3)


# ---------------------------------------------------------------------------
# wedges


def test_wedge_with_trivial_subset_changes_nothing():
    p = d4_subset()
    q = PointedSubset(CyclicGroup(3), [0])
    report = wedge_check(p, q, Z, 5)
    assert report.homology == omega_group(p, Z, 5).homology_all()


def test_wedge_of_two_integer_lines():
    G = FreeAbelianGroup(1)
    p = PointedSubset(G, [0, 1])
    report = wedge_check(p, p, Z, 4)
    assert report.homology == [Z1, HomologyGroup(2), Z1, ZERO]
    plane = FreeAbelianGroup(2)
    standard = PointedSubset(plane, [plane.identity, plane.basis_vector(1), plane.basis_vector(2)])
    assert report.homology == omega_group(standard, Z, 4).homology_all()


def test_wedge_subset_shape():
    p = PointedSubset(CyclicGroup(3), [0, 1])
    q = PointedSubset(CyclicGroup(2), [0, 1])
    w = wedge(p, q)
    assert w.elements == [(0, 0), (0, 1), (1, 0)]


def test_wedge_with_torsion_follows_kunneth_over_z():
    p = PointedSubset(CyclicGroup(2), [0, 1])
    report = wedge_check(p, p, Z, 4)
    assert report.homology == report.expected
    assert report.homology[2] == HomologyGroup(0, (2,))


# ---------------------------------------------------------------------------
# unions


def test_dihedral_union_reproduces_the_torsion():
    G = DihedralGroup(4)
    x, y = G.parse("x"), G.parse("y")
    report = union_split_check(G, [G.identity, x], [G.identity, y], Z, 6)
    assert report.degrees == [1, 2, 3, 4, 5]
    assert report.left == report.right == [Z1, HomologyGroup(0, (2,)), ZERO, HomologyGroup(0, (2,)), ZERO, HomologyGroup(0, (2,))]
    assert report.union == omega_group(d4_subset(), Z, 6).homology_all()


def test_union_with_trivial_subset_is_trivial():
    G = CyclicGroup(5)
    report = union_split_check(G, [0, 1, 2], [0], Z, 4)
    assert report.union == report.left
    assert all(h.is_zero() for h in report.right[1:])


def test_commuting_generators_violate_the_hypothesis():
    G = FreeAbelianGroup(2)
    e1, e2 = G.basis_vector(1), G.basis_vector(2)
    with pytest.raises(HypothesisViolated) as info:
        union_split_check(G, [G.identity, e1], [G.identity, e2], Z, 3)
    witnesses = info.value.witnesses
    assert witnesses == [("(1,1)", [("XY", "(1,0)", "(0,1)"), ("YX", "(0,1)", "(1,0)")])]


SMALL_GROUPS = [
    CyclicGroup(n) for n in range(2, 9)
] + [DihedralGroup(3), DihedralGroup(4), ProductGroup(CyclicGroup(2), CyclicGroup(2)),
     ProductGroup(CyclicGroup(2), CyclicGroup(4)), ProductGroup(ProductGroup(CyclicGroup(2), CyclicGroup(2)), CyclicGroup(2))]


@settings(max_examples=60)
@given(st.sampled_from(SMALL_GROUPS), st.randoms(use_true_random=False))
def test_union_splits_whenever_the_hypothesis_holds(G, rnd):
    els = G.elements()[1:]
    valid = [
        (X, Y)
        for kx in (1, 2)
        for ky in (1, 2)
        for X in combinations(els, kx)
        for Y in combinations(els, ky)
        if not set(X) & set(Y) and not union_hypothesis_witnesses(G, (G.identity,) + X, (G.identity,) + Y)
    ]
    if not valid:
        # every pair collides: the check must refuse a sampled one
        X, Y = (els[0],), (els[-1],)
        with pytest.raises(HypothesisViolated):
            union_split_check(G, [G.identity, *X], [G.identity, *Y], Z, 4)
        return
    X, Y = rnd.choice(valid)
    report = union_split_check(G, [G.identity, *X], [G.identity, *Y], Z, 4)
    for n in report.degrees:
        assert report.union[n] == report.left[n] + report.right[n]


def test_some_small_group_admits_a_valid_pair():
    assert not union_hypothesis_witnesses(DihedralGroup(4), [(0, 0), (0, 1)], [(0, 0), (1, 1)])


def test_free_product_formula_on_two_order_two_generators():
    """D4 is generated freely enough by two involutions: both halves look like C2."""
    C2 = parse_cayley(C2_TABLE)
    halves = omega_group(PointedSubset(C2, C2.elements()), Z, 6).homology_all()
    whole = omega_group(d4_subset(), Z, 6).homology_all()
    for n in range(1, 6):
        assert whole[n] == halves[n] + halves[n]


def test_free_product_formula_in_a_free_group():
    F = FreeGroup(2)
    line = omega_group(PointedSubset(FreeAbelianGroup(1), [0, 1]), Z, 5).homology_all()
    report = union_split_check(F, [(), F.generator(1)], [(), F.generator(2)], Z, 5)
    assert report.left == report.right == line
    for n in range(1, 5):
        assert report.union[n] == line[n] + line[n]


# ---------------------------------------------------------------------------
# conjugation and transport along embeddings


def test_conjugate_homomorphisms_induce_equal_maps():
    G = DihedralGroup(4)
    p = d4_subset()
    q = PointedSubset(G, G.elements())
    g = {a: a for a in p.nontrivial()}
    for x in G.elements():
        f = {a: G.multiply(G.multiply(G.inverse(x), a), x) for a in p.nontrivial()}
        report = conjugation_check(p, q, f, g, x, Z, 4)
        assert report.equal_on_homology


def test_conjugating_element_must_lie_in_the_target():
    G = DihedralGroup(4)
    p = d4_subset("1,x")
    q = d4_subset()
    x = G.parse("xy")
    f = {a: G.multiply(G.multiply(G.inverse(x), a), x) for a in p.nontrivial()}
    with pytest.raises(ValidationError):
        conjugation_check(p, q, f, {a: a for a in p.nontrivial()}, x, Z, 3)


def test_non_conjugate_maps_are_rejected():
    G = CyclicGroup(4)
    p = PointedSubset(G, [0, 1])
    q = PointedSubset(G, G.elements())
    with pytest.raises((ValidationError, UnequalInducedMaps)):
        conjugation_check(p, q, {1: 1}, {1: 3}, 0, Z, 3)


def _same_omega(a, b, n_max):
    assert a.dims == b.dims
    assert a.vectors == b.vectors
    assert [a.complex.boundary(n) for n in range(n_max + 1)] == [b.complex.boundary(n) for n in range(n_max + 1)]


@pytest.mark.parametrize(
    "small, big, embed",
    [
        (CyclicGroup(5), CyclicGroup(10), lambda a: 2 * a),
        (CyclicGroup(4), ProductGroup(CyclicGroup(4), CyclicGroup(3)), lambda a: (a, 0)),
        (FreeAbelianGroup(1), FreeAbelianGroup(2), lambda a: (a, 0)),
    ],
)
def test_subset_transported_along_an_embedding_has_the_same_omega(small, big, embed):
    X = [small.identity, small.parse("1")]
    om = omega_group(PointedSubset(small, X), Z, 4)
    moved = omega_group(PointedSubset(big, [embed(x) for x in X]), Z, 4)
    _same_omega(om, moved, 4)


def test_dihedral_subset_inside_a_product_has_the_same_omega():
    G = DihedralGroup(4)
    big = ProductGroup(G, CyclicGroup(3))
    X = d4_subset().elements
    om = omega_group(PointedSubset(G, X), Z, 4)
    moved = omega_group(PointedSubset(big, [(x, 0) for x in X]), Z, 4)
    _same_omega(om, moved, 4)


# ---------------------------------------------------------------------------
# Pontryagin product


def plane_algebra(n_max=4):
    G = FreeAbelianGroup(2)
    return pontryagin(PointedSubset(G, [G.identity, G.basis_vector(1), G.basis_vector(2)]), Q, n_max)


def test_pontryagin_on_the_plane():
    alg = plane_algebra()
    assert alg.dims == [1, 2, 1, 0]
    u, v = [1, 0], [0, 1]
    uv = alg.multiply(1, u, 1, v)
    assert uv != [0]
    assert alg.multiply(1, v, 1, u) == [-c for c in uv]
    assert alg.multiply(0, [1], 1, u) == u
    assert alg.multiply(2, [1], 0, [1]) == [1]


@settings(max_examples=30)
@given(st.lists(st.integers(-5, 5), min_size=2, max_size=2))
def test_degree_one_classes_square_to_zero(coeffs):
    alg = plane_algebra()
    assert alg.multiply(1, coeffs, 1, coeffs) == [0]


def test_pontryagin_over_a_finite_cyclic_group_is_commutative():
    alg = pontryagin(PointedSubset(CyclicGroup(3), [0, 1, 2]), Q, 4)
    assert alg.dims == [1, 0, 0, 0]


def test_pontryagin_refuses_non_abelian_and_integers():
    with pytest.raises(NotAbelian):
        pontryagin(d4_subset(), Q, 3)
    G = FreeAbelianGroup(2)
    with pytest.raises(NotField):
        pontryagin(PointedSubset(G, [G.identity]), Z, 3)


def test_shuffle_product_of_letters():
    assert shuffle_product(("a",), ("b",)) == {("a", "b"): 1, ("b", "a"): -1}
    assert shuffle_product((), ("b", "c")) == {("b", "c"): 1}
    assert sum(abs(c) for c in shuffle_product(("a", "b"), ("c", "d")).values()) == 6


# ---------------------------------------------------------------------------
# group inputs


def test_cayley_table_parses():
    G = parse_cayley(C2_TABLE)
    assert G.order() == 2 and G.abelian
    a = G.parse("a")
    assert G.multiply(a, a) == G.identity


def test_cayley_table_rejects_bad_input():
    with pytest.raises(ParseError):
        parse_cayley("# nothing here\n")
    with pytest.raises(ValidationError):
        parse_cayley("e a\na e\ne a\n")
    with pytest.raises(ValidationError):
        parse_cayley("e a\ne a\na a\n")
    # a Latin square with identity e that is not associative
    bad = "e a b c d\ne a b c d\na e c d b\nb d e a c\nc b d e a\nd c a b e\n"
    with pytest.raises(NotAssociative):
        parse_cayley(bad)


def test_builtin_families():
    assert parse_builtin("builtin:dihedral(4)").order() == 8
    assert parse_builtin("cyclic(3) x cyclic(2)").order() == 6
    assert parse_builtin("product(cyclic(2), dihedral(3))").order() == 12
    assert isinstance(parse_builtin("free(2)"), FreeGroup)
    assert isinstance(parse_builtin("free_abelian(3)"), FreeAbelianGroup)
    for bad in ("torus(2)", "cyclic(x)", "cyclic", "product(cyclic(2))"):
        with pytest.raises(ParseError):
            parse_builtin(bad)


def test_element_syntax():
    Z2 = FreeAbelianGroup(2)
    assert Z2.parse("e1-2e2") == (1, -2)
    assert Z2.parse("(3,4)") == (3, 4)
    F = FreeGroup(2)
    w = F.parse("x1x2^-1")
    assert F.multiply(w, F.inverse(w)) == F.identity
    assert F.format(w) == "x1x2^-1"
    with pytest.raises(ParseError):
        F.parse("x3")
    with pytest.raises(ValidationError):
        F.generator(0)
    with pytest.raises(ValidationError):
        Z2.basis_vector(3)
